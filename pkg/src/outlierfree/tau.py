"""Toeplitz-plus/minus-Hankel matrices and the tau algebras that diagonalize them.

A matrix ``scale * (T(alpha) + sign * H(alpha))`` is stored through its
``p + 1`` coefficients only.  Four combinations belong to a tau algebra
``tau_n(eps, phi)`` and have eigenpairs in closed form:

====================  ============  ===============================
matrix                algebra       grid ``theta_j``, ``j = 1..n``
====================  ============  ===============================
``T - H2``            ``(0, 0)``    ``j pi / (n + 1)``
``T + H1``            ``(1, 1)``    ``(j - 1) pi / n``
``T + H21``           ``(0, 1)``    ``(2 j - 1) pi / (2 n + 1)``
``T - H1``            ``(-1, -1)``  ``j pi / n``
====================  ============  ===============================

The eigenvalue for index ``j`` is the symbol sampled at ``theta_j``; the
eigenvectors are the columns of a sine/cosine transform which is applied
with :mod:`scipy.fft` (or densely, for verification).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import fft as sfft

from .errors import SingularMatrixError, SizeError
from .exact_splines import SymbolCoeffs
from .symbols import symbol_eval

SINGULAR_RTOL = 1e-14


class HankelVariant(enum.Enum):
    """Which coefficient seeds the Hankel corners.

    ``H1`` starts at ``alpha_1`` in both corners, ``H2`` at ``alpha_2``;
    ``H21`` has ``-alpha_2`` (top-left) and ``alpha_1`` (bottom-right).
    """

    H1 = "H1"
    H2 = "H2"
    H21 = "H21"


class TauAlgebra(enum.Enum):
    SINE = (0, 0)
    COSINE = (1, 1)
    MIXED = (0, 1)
    SHIFTED_SINE = (-1, -1)

    @classmethod
    def from_pair(cls, eps, phi) -> "TauAlgebra":
        return cls((int(eps), int(phi)))

    @property
    def eps(self):
        return self.value[0]

    @property
    def phi(self):
        return self.value[1]

    def grid(self, n: int) -> np.ndarray:
        j = np.arange(1, n + 1, dtype=float)
        if self is TauAlgebra.SINE:
            return j * np.pi / (n + 1)
        if self is TauAlgebra.COSINE:
            return (j - 1) * np.pi / n
        if self is TauAlgebra.MIXED:
            return (2 * j - 1) * np.pi / (2 * n + 1)
        return j * np.pi / n

    def __str__(self):
        return f"tau({self.eps},{self.phi})"


# (variant, sign) -> algebra; other combinations have no closed form here
_ALGEBRA_OF = {
    (HankelVariant.H2, -1): TauAlgebra.SINE,
    (HankelVariant.H1, 1): TauAlgebra.COSINE,
    (HankelVariant.H21, 1): TauAlgebra.MIXED,
    (HankelVariant.H1, -1): TauAlgebra.SHIFTED_SINE,
}


def _as_coeffs(coeffs) -> SymbolCoeffs:
    if isinstance(coeffs, SymbolCoeffs):
        return coeffs
    return SymbolCoeffs.from_values(coeffs)


def _check_size(p: int, n: int) -> None:
    if n < p + 1:
        raise SizeError(f"size n={n} too small for degree p={p}; need n >= p+1 = {p + 1}")


def _empty(n, exact):
    if exact:
        out = np.empty((n, n), dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros((n, n))


def _values(coeffs: SymbolCoeffs, exact: bool):
    if exact:
        if not coeffs.is_exact:
            raise TypeError("exact expansion needs rational coefficients")
        return list(coeffs.coeffs)
    return list(coeffs.as_floats())


def build_toeplitz(coeffs, n: int, exact: bool = False) -> np.ndarray:
    """Dense symmetric banded Toeplitz matrix with first row ``(alpha_0, ..., alpha_p, 0, ...)``."""
    coeffs = _as_coeffs(coeffs)
    p = coeffs.degree
    _check_size(p, n)
    a = _values(coeffs, exact)
    out = _empty(n, exact)
    for i in range(n):
        for j in range(max(0, i - p), min(n, i + p + 1)):
            out[i, j] = a[abs(i - j)]
    return out


def _corner(a, offset: int, size: int, exact: bool):
    """Top-left Hankel corner ``C[i, j] = alpha_{i + j + 2 - offset}`` (0-based i, j)."""
    p = len(a) - 1
    zero = Fraction(0) if exact else 0.0
    c = np.empty((size, size), dtype=object if exact else float)
    for i in range(size):
        for j in range(size):
            k = i + j + 2 - offset
            c[i, j] = a[k] if k <= p else zero
    return c


def _corners(coeffs: SymbolCoeffs, variant: HankelVariant, exact: bool):
    """Return (top-left, bottom-right) corner blocks, each of size p, bottom in reversed order."""
    a = _values(coeffs, exact)
    p = coeffs.degree
    if variant is HankelVariant.H1:
        top = _corner(a, 1, p, exact)
        bottom = top
    elif variant is HankelVariant.H2:
        top = _corner(a, 0, p, exact)
        bottom = top
    else:
        top = -_corner(a, 0, p, exact)
        bottom = _corner(a, 1, p, exact)
    return top, bottom


def build_hankel(coeffs, n: int, variant, exact: bool = False) -> np.ndarray:
    """Dense Hankel matrix of the given variant (constant along anti-diagonals)."""
    coeffs = _as_coeffs(coeffs)
    variant = HankelVariant(variant)
    p = coeffs.degree
    _check_size(p, n)
    out = _empty(n, exact)
    top, bottom = _corners(coeffs, variant, exact)
    out[:p, :p] += top
    # bottom corner is given in reversed indices: entry (i', j') sits at (n-1-i', n-1-j')
    out[n - p:, n - p:] += bottom[::-1, ::-1]
    return out


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues ordered by the algebra's index ``j``, with implicit eigenvectors."""

    eigenvalues: np.ndarray
    algebra: TauAlgebra
    scale: float = 1.0

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def theta(self) -> np.ndarray:
        return self.algebra.grid(self.n)

    def eigenvector(self, j: int) -> np.ndarray:
        return tau_transform_column(self.algebra, self.n, j)

    def apply(self, v, method="fft"):
        return tau_apply(self.algebra, self.n, v, method=method)

    def apply_transpose(self, v, method="fft"):
        return tau_apply_transpose(self.algebra, self.n, v, method=method)


def tau_eigensystem(coeffs, n: int, algebra, scale=1.0) -> EigenSystem:
    """Closed-form eigenvalues ``scale * g(theta_j)`` of the algebra's Toeplitz+-Hankel matrix."""
    coeffs = _as_coeffs(coeffs)
    algebra = TauAlgebra(algebra) if not isinstance(algebra, TauAlgebra) else algebra
    _check_size(coeffs.degree, n)
    lam = float(scale) * symbol_eval(coeffs, algebra.grid(n))
    return EigenSystem(np.asarray(lam, dtype=float), algebra, float(scale))


def tau_transform_column(algebra, n: int, j: int) -> np.ndarray:
    """The ``j``-th (1-based) column of the orthogonal transform ``Q_n(eps, phi)``."""
    algebra = TauAlgebra(algebra) if not isinstance(algebra, TauAlgebra) else algebra
    if not 1 <= j <= n:
        raise IndexError(f"column index j={j} outside 1..{n}")
    i = np.arange(1, n + 1, dtype=float)
    if algebra is TauAlgebra.SINE:
        return np.sqrt(2.0 / (n + 1)) * np.sin(i * j * np.pi / (n + 1))
    if algebra is TauAlgebra.COSINE:
        c = 1.0 / np.sqrt(2.0) if j == 1 else 1.0
        return np.sqrt(2.0 / n) * c * np.cos((j - 1) * np.pi / n * (i - 0.5))
    if algebra is TauAlgebra.MIXED:
        return np.sqrt(4.0 / (2 * n + 1)) * np.sin(i * (2 * j - 1) * np.pi / (2 * n + 1))
    c = 1.0 / np.sqrt(2.0) if j == n else 1.0
    return np.sqrt(2.0 / n) * c * np.sin(j * np.pi / n * (i - 0.5))


def tau_matrix(algebra, n: int) -> np.ndarray:
    """Dense ``Q_n(eps, phi)``, column by column.  Verification use only."""
    return np.column_stack([tau_transform_column(algebra, n, j) for j in range(1, n + 1)])


def _check_vector(n, v):
    v = np.asarray(v, dtype=float)
    if v.shape[0] != n:
        raise SizeError(f"vector of length {v.shape[0]} does not match size n={n}")
    return v


def _mixed_forward(v):
    n = v.shape[0]
    x = np.zeros((2 * n,) + v.shape[1:])
    x[0::2] = v
    y = sfft.dst(x, type=1, axis=0)[:n]
    return y * (np.sqrt(4.0 / (2 * n + 1)) / 2.0)


def _mixed_transpose(v):
    n = v.shape[0]
    x = np.zeros((2 * n,) + v.shape[1:])
    x[:n] = v
    y = sfft.dst(x, type=1, axis=0)[0::2]
    return y * (np.sqrt(4.0 / (2 * n + 1)) / 2.0)


def tau_apply(algebra, n: int, v, method: str = "fft") -> np.ndarray:
    """Compute ``Q v`` (``v`` may be a vector or an ``(n, k)`` block)."""
    algebra = TauAlgebra(algebra) if not isinstance(algebra, TauAlgebra) else algebra
    v = _check_vector(n, v)
    if method == "dense":
        return tau_matrix(algebra, n) @ v
    if algebra is TauAlgebra.SINE:
        return sfft.dst(v, type=1, norm="ortho", axis=0)
    if algebra is TauAlgebra.COSINE:
        return sfft.dct(v, type=3, norm="ortho", axis=0)
    if algebra is TauAlgebra.SHIFTED_SINE:
        return sfft.dst(v, type=3, norm="ortho", axis=0)
    return _mixed_forward(v)


def tau_apply_transpose(algebra, n: int, v, method: str = "fft") -> np.ndarray:
    """Compute ``Q^T v``."""
    algebra = TauAlgebra(algebra) if not isinstance(algebra, TauAlgebra) else algebra
    v = _check_vector(n, v)
    if method == "dense":
        return tau_matrix(algebra, n).T @ v
    if algebra is TauAlgebra.SINE:
        return sfft.dst(v, type=1, norm="ortho", axis=0)
    if algebra is TauAlgebra.COSINE:
        return sfft.dct(v, type=2, norm="ortho", axis=0)
    if algebra is TauAlgebra.SHIFTED_SINE:
        return sfft.dst(v, type=2, norm="ortho", axis=0)
    return _mixed_transpose(v)


@dataclass(frozen=True)
class StructuredMatrix:
    """``scale * (T(alpha) + sign * H(alpha))`` of size ``n``, stored in O(p)."""

    coeffs: SymbolCoeffs
    n: int
    variant: HankelVariant
    sign: int = 1
    scale: object = 1

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))
        object.__setattr__(self, "variant", HankelVariant(self.variant))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        _check_size(self.coeffs.degree, self.n)

    @property
    def p(self) -> int:
        return self.coeffs.degree

    @property
    def algebra(self) -> TauAlgebra | None:
        return _ALGEBRA_OF.get((self.variant, self.sign))

    @property
    def label(self) -> str:
        op = "+" if self.sign > 0 else "-"
        return f"T {op} {self.variant.value}"

    def dense(self, exact: bool = False) -> np.ndarray:
        t = build_toeplitz(self.coeffs, self.n, exact=exact)
        h = build_hankel(self.coeffs, self.n, self.variant, exact=exact)
        out = t + h if self.sign > 0 else t - h
        if exact:
            scale = Fraction(self.scale)
            return out * scale if scale != 1 else out
        return float(self.scale) * out

    def matvec(self, v) -> np.ndarray:
        return structured_matvec(self, v)

    def eigensystem(self) -> EigenSystem:
        if self.algebra is None:
            raise ValueError(f"{self.label} is not in one of the supported tau algebras")
        return tau_eigensystem(self.coeffs, self.n, self.algebra, float(self.scale))

    def solve(self, b) -> np.ndarray:
        return structured_solve(self, b)


def structured_matvec(m: StructuredMatrix, v) -> np.ndarray:
    """``m @ v`` in O(p n): banded Toeplitz part plus the two Hankel corners."""
    v = _check_vector(m.n, v)
    a = m.coeffs.as_floats()
    p = m.p
    kernel = np.concatenate([a[:0:-1], a])
    if v.ndim == 1:
        y = np.convolve(v, kernel)[p:p + m.n]
    else:
        y = np.column_stack([np.convolve(v[:, k], kernel)[p:p + m.n] for k in range(v.shape[1])])
    top, bottom = _corners(m.coeffs, m.variant, exact=False)
    top = np.asarray(top, dtype=float)
    bottom = np.asarray(bottom, dtype=float)
    s = float(m.sign)
    y[:p] += s * (top @ v[:p])
    y[m.n - p:] += s * (bottom[::-1, ::-1] @ v[m.n - p:])
    return float(m.scale) * y


def structured_solve(m: StructuredMatrix, b) -> np.ndarray:
    """Solve ``m x = b`` through ``Q diag(lambda)^-1 Q^T``."""
    b = _check_vector(m.n, b)
    eig = m.eigensystem()
    lam = eig.eigenvalues
    tol = SINGULAR_RTOL * np.max(np.abs(lam))
    small = np.flatnonzero(np.abs(lam) <= tol)
    if small.size:
        j = int(small[0]) + 1
        raise SingularMatrixError(
            f"matrix is singular: eigenvalue index j={j} ({lam[small[0]]:.3e}) is zero "
            f"to relative tolerance {SINGULAR_RTOL:g}", index=j)
    coef = eig.apply_transpose(b)
    if coef.ndim == 1:
        coef = coef / lam
    else:
        coef = coef / lam[:, None]
    return eig.apply(coef)
