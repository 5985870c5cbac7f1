"""Exact rational evaluation of cardinal B-splines.

The cardinal B-spline of degree ``p`` lives on the integer knots
``0, 1, ..., p+1``.  Everything here is computed with
:class:`fractions.Fraction`, so identities between matrix entries can be
checked with zero tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .errors import InvalidOrderError

Rational = Fraction


def as_rational(x) -> Fraction:
    """Convert ints, strings (``"3/4"``) and Fractions to a Fraction.

    Floats are converted exactly (binary value), which is rarely what you
    want; pass strings or Fractions for decimal input.
    """
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _check_order(p: int, r: int) -> None:
    if p < 0:
        raise InvalidOrderError(f"degree must be nonnegative, got p={p}")
    if r < 0 or r > p:
        raise InvalidOrderError(f"derivative order r={r} must satisfy 0 <= r <= p={p}")


def _cardinal(p: int, t: Fraction, memo: dict) -> Fraction:
    # two-term recursion; N_0 is the indicator of [0, 1)
    if p == 0:
        return Fraction(1) if 0 <= t < 1 else Fraction(0)
    if t <= 0 or t >= p + 1:
        return Fraction(0)
    key = (p, t)
    val = memo.get(key)
    if val is None:
        val = (t * _cardinal(p - 1, t, memo)
               + (p + 1 - t) * _cardinal(p - 1, t - 1, memo)) / p
        memo[key] = val
    return val


def cardinal_eval(p: int, r: int, t) -> Fraction:
    """Exact value of the ``r``-th derivative of the degree-``p`` cardinal B-spline at ``t``.

    Derivatives use the difference rule
    ``N_p^(r)(t) = sum_k (-1)^k C(r, k) N_{p-r}(t - k)``.  Where the
    derivative jumps (only possible for ``r == p`` at an integer knot) the
    right limit is returned.  Outside the open support ``(0, p+1)`` the
    result is 0.
    """
    _check_order(p, r)
    t = as_rational(t)
    if t <= 0 or t >= p + 1:
        if p == 0 and t == 0:
            return Fraction(1)
        return Fraction(0)
    memo: dict = {}
    q = p - r
    total = Fraction(0)
    for k in range(r + 1):
        c = comb(r, k)
        total += (-c if k % 2 else c) * _cardinal(q, t - k, memo)
    return total


def cardinal_inner(p1: int, r1: int, p2: int, r2: int, rho) -> Fraction:
    """Full-line integral of ``N_{p1}^(r1)(t) * N_{p2}^(r2)(t + rho)``.

    Uses the closed form ``(-1)^r1 * N_{p1+p2+1}^(r1+r2)(p1 + 1 + rho)``.
    """
    _check_order(p1, r1)
    _check_order(p2, r2)
    rho = as_rational(rho)
    val = cardinal_eval(p1 + p2 + 1, r1 + r2, p1 + 1 + rho)
    return -val if r1 % 2 else val


@dataclass(frozen=True)
class SymbolCoeffs:
    """The coefficient vector ``(alpha_0, ..., alpha_p)`` of a cosine symbol.

    ``order`` is the derivative order ``r`` the coefficients were built
    for; it is ``None`` for coefficient vectors that do not come from
    splines (e.g. random test vectors).
    """

    degree: int
    coeffs: tuple
    order: int | None = None

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError(
                f"expected {self.degree + 1} coefficients for degree {self.degree}, "
                f"got {len(self.coeffs)}")

    @classmethod
    def from_values(cls, values: Sequence, order: int | None = None) -> "SymbolCoeffs":
        vals = tuple(as_rational(v) if not isinstance(v, float) else v for v in values)
        return cls(len(vals) - 1, vals, order)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def value_at_zero(self):
        """``alpha_0 + 2 * sum_{k>=1} alpha_k`` (the symbol at theta = 0), exact when possible."""
        return self.coeffs[0] + 2 * sum(self.coeffs[1:])

    def as_floats(self):
        import numpy as np

        return np.array([float(c) for c in self.coeffs])

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)


@lru_cache(maxsize=None)
def alpha_coeffs(p: int, r: int) -> SymbolCoeffs:
    """Symbol coefficients ``alpha_k = (-1)^r N_{2p+1}^(2r)(p+1-k)``, ``k = 0..p``."""
    if p < 1:
        raise InvalidOrderError(f"degree must be positive, got p={p}")
    _check_order(p, r)
    sign = -1 if r % 2 else 1
    vals = tuple(sign * cardinal_eval(2 * p + 1, 2 * r, p + 1 - k) for k in range(p + 1))
    return SymbolCoeffs(p, vals, r)


# --- exact piecewise-polynomial representation -------------------------------

def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_shift(a, s):
    """Coefficients of ``a(t + s)``."""
    out = [Fraction(0)] * len(a)
    for i, c in enumerate(a):
        if c:
            for k in range(i + 1):
                out[k] += c * comb(i, k) * s ** (i - k)
    return out


def _poly_deriv(a, r):
    for _ in range(r):
        a = [i * a[i] for i in range(1, len(a))] or [Fraction(0)]
    return a


def _poly_eval(a, t):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * t + c
    return acc


def _poly_antideriv_between(a, lo, hi):
    prim = [Fraction(0)] + [c / (i + 1) for i, c in enumerate(a)]
    return _poly_eval(prim, hi) - _poly_eval(prim, lo)


@lru_cache(maxsize=None)
def cardinal_piece(p: int, r: int, k: int) -> tuple:
    """Monomial coefficients (in the global variable ``t``) of ``N_p^(r)`` on ``[k, k+1)``.

    Built from the truncated-power expansion
    ``N_p(t) = 1/p! * sum_i (-1)^i C(p+1, i) (t - i)_+^p``, which is
    independent of the recursion used by :func:`cardinal_eval`.
    """
    _check_order(p, r)
    if k < 0 or k > p:
        return (Fraction(0),)
    poly = [Fraction(0)] * (p + 1)
    for i in range(k + 1):
        c = Fraction((-1) ** i * comb(p + 1, i), factorial(p))
        # (t - i)^p
        for m in range(p + 1):
            poly[m] += c * comb(p, m) * (-i) ** (p - m)
    return tuple(_poly_deriv(poly, r))


def cardinal_overlap_integral(p: int, r: int, rho: int, a, b) -> Fraction:
    """Exact ``int_a^b N_p^(r)(t) N_p^(r)(t + rho) dt`` for an integer shift ``rho``."""
    _check_order(p, r)
    rho = int(rho)
    a, b = as_rational(a), as_rational(b)
    lo = max(a, Fraction(0), Fraction(-rho))
    hi = min(b, Fraction(p + 1), Fraction(p + 1 - rho))
    if lo >= hi:
        return Fraction(0)
    total = Fraction(0)
    k0 = int(lo // 1)
    for k in range(k0, int(-(-hi // 1))):
        seg_lo, seg_hi = max(lo, Fraction(k)), min(hi, Fraction(k + 1))
        if seg_lo >= seg_hi:
            continue
        f = cardinal_piece(p, r, k)
        g = _poly_shift(list(cardinal_piece(p, r, k + rho)), Fraction(rho))
        total += _poly_antideriv_between(_poly_mul(list(f), g), seg_lo, seg_hi)
    return total
