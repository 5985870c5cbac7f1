"""Floating-point evaluation of the cosine symbols and the spectral error bound."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .exact_splines import SymbolCoeffs, alpha_coeffs

_THETA_SLACK = 1e-14


def _check_theta(theta):
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < -_THETA_SLACK) or np.any(theta > np.pi + _THETA_SLACK):
        raise DomainError("theta must lie in [0, pi]")
    return theta


@dataclass(frozen=True)
class SymbolFn:
    """The trigonometric polynomial ``alpha_0 + 2 sum_k alpha_k cos(k theta)``."""

    coeffs: SymbolCoeffs

    @classmethod
    def spline(cls, p: int, r: int) -> "SymbolFn":
        return cls(alpha_coeffs(p, r))

    def __call__(self, theta):
        return symbol_eval(self.coeffs, theta)


def symbol_eval(coeffs, theta):
    """Evaluate the symbol generated by ``coeffs`` at ``theta`` (scalar or array).

    The sum is rewritten as ``g(0) - 4 sum_k alpha_k sin^2(k theta / 2)``,
    which is the same cosine sum but keeps full relative accuracy near
    ``theta = 0`` where the stiffness symbol vanishes quadratically.
    ``g(0)`` is formed in exact arithmetic when the coefficients are rational.
    """
    if isinstance(coeffs, SymbolFn):
        coeffs = coeffs.coeffs
    if not isinstance(coeffs, SymbolCoeffs):
        coeffs = SymbolCoeffs.from_values(coeffs)
    scalar = np.ndim(theta) == 0
    theta = _check_theta(theta)
    alpha = coeffs.as_floats()
    g0 = float(coeffs.value_at_zero())
    k = np.arange(1, len(alpha))
    half = np.multiply.outer(theta, k) / 2.0
    out = g0 - 4.0 * (np.sin(half) ** 2) @ alpha[1:]
    return float(out) if scalar else out


def ratio_symbol(p: int, theta):
    """``e_p(theta) = g_p^1(theta) / g_p^0(theta)``; the denominator never vanishes."""
    return symbol_eval(alpha_coeffs(p, 1), theta) / symbol_eval(alpha_coeffs(p, 0), theta)


def error_bound_rhs(p: int, theta):
    """Upper bound on the relative error ``(e_p(theta) - theta^2) / theta^2``."""
    theta = _check_theta(theta)
    two_pi = 2.0 * np.pi
    first = (4.0 * np.pi * (np.pi - theta) / (two_pi - theta) ** 2
             * (theta / (two_pi - theta)) ** (2 * p))
    second = 5.0 * (theta / (two_pi + theta)) ** (2 * p)
    out = first + second
    return float(out) if np.ndim(out) == 0 else out


def mass_symbol_lower_bound(p: int) -> float:
    """``(4 / pi^2)^(p+1)``, a lower bound of the mass symbol on ``[0, pi]``."""
    return (4.0 / np.pi ** 2) ** (p + 1)
