"""Boundary-adapted spline spaces on uniform breakpoints and their Galerkin matrices.

Every basis function is a signed sum of shifted, scaled cardinal B-splines,

    N_i(x) = sum_l E[i, l] * N_p(s * x - l - shift),

where ``E`` has entries in {-1, 0, 1}.  The sign pattern comes from folding
an infinite periodic lattice of cardinal splines onto ``[0, 1]`` with even
or odd reflections at each end: an odd reflection kills all even-order
derivatives at that end, an even reflection kills all odd-order ones.

Three assembly routes are provided:

* :func:`assemble_quadrature` integrates span by span with Gauss-Legendre
  rules (floating point, exact up to roundoff);
* :func:`assemble_exact` does the same integrals in rational arithmetic;
* :func:`assemble_closed_form` returns the Toeplitz-plus/minus-Hankel
  structured matrix, valid once ``n`` reaches the kind's size threshold.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, InvalidOrderError, SizeError, ThresholdError
from .exact_splines import alpha_coeffs, cardinal_overlap_integral
from .tau import HankelVariant, StructuredMatrix, TauAlgebra


class Kind(enum.Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    MIXED = "mixed"
    REDUCED = "reduced"

    @property
    def b(self):
        """Boundary index 0/1/2 for the optimal spaces, ``None`` for the reduced one."""
        return {"dirichlet": 0, "neumann": 1, "mixed": 2}.get(self.value)

    @classmethod
    def parse(cls, value) -> "Kind":
        if isinstance(value, Kind):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return (cls.DIRICHLET, cls.NEUMANN, cls.MIXED)[value]
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(
                f"unknown kind {value!r}; expected one of dirichlet, neumann, mixed, reduced") from None


# kind -> (Hankel variant, sign, tau algebra)
_STRUCTURE = {
    Kind.DIRICHLET: (HankelVariant.H2, -1, TauAlgebra.SINE),
    Kind.NEUMANN: (HankelVariant.H1, 1, TauAlgebra.COSINE),
    Kind.MIXED: (HankelVariant.H21, 1, TauAlgebra.MIXED),
    Kind.REDUCED: (HankelVariant.H1, -1, TauAlgebra.SHIFTED_SINE),
}


@dataclass(frozen=True)
class SpaceSpec:
    """Degree ``p``, dimension ``n`` and boundary kind of a spline space on [0, 1]."""

    p: int
    n: int
    kind: Kind = Kind.DIRICHLET

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        if int(self.p) != self.p or self.p < 1:
            raise InvalidOrderError(f"degree must be a positive integer, got p={self.p}")
        if int(self.n) != self.n or self.n < 1:
            raise SizeError(f"dimension must be a positive integer, got n={self.n}")
        if self.kind is Kind.REDUCED and self.p % 2:
            raise InvalidOrderError(
                f"the reduced space is only defined for even p (got p={self.p}); "
                "for odd p it coincides with the optimal Dirichlet space")

    @property
    def algebra(self) -> TauAlgebra:
        return _STRUCTURE[self.kind][2]

    @property
    def scale(self) -> Fraction:
        """Inverse mesh width ``1/h`` of the underlying cardinal lattice."""
        return shift_scale(self).scale

    def threshold(self) -> int:
        return threshold(self)[0]


def threshold(spec: SpaceSpec) -> tuple[int, str]:
    """Smallest ``n`` for which the closed-form structure is guaranteed, with the formula used."""
    p, h = spec.p, spec.p // 2
    if spec.kind is Kind.DIRICHLET:
        return max(p + 1, p + h - 1), "max{p+1, p+floor(p/2)-1}"
    if spec.kind is Kind.NEUMANN:
        return max(2 * p - h, 2 * p - 2 * h + 1), "max{2p-floor(p/2), 2p-2*floor(p/2)+1}"
    if spec.kind is Kind.MIXED:
        return max(p + 1, p + h), "max{p+1, p+floor(p/2)}"
    return p + h, "p+p/2"


@dataclass(frozen=True)
class ShiftScale:
    """Cardinal index ``l`` maps to ``N_p(scale * x - l - shift)``, ``l = first .. first+count-1``."""

    scale: Fraction
    shift: Fraction
    first: int
    count: int

    def offset(self, l: int) -> Fraction:
        return l + self.shift

    @property
    def indices(self) -> range:
        return range(self.first, self.first + self.count)


def shift_scale(spec: SpaceSpec) -> ShiftScale:
    p, n = spec.p, spec.n
    odd = p % 2
    half = Fraction(-1, 2)
    if spec.kind is Kind.DIRICHLET:
        scale, shift, last = Fraction(n + 1), (Fraction(0) if odd else half), n + 1 - odd
    elif spec.kind is Kind.NEUMANN:
        scale, shift, last = Fraction(n), (half if odd else Fraction(0)), n + odd - 1
    elif spec.kind is Kind.MIXED:
        scale, shift, last = Fraction(2 * n + 1, 2), (Fraction(0) if odd else half), n
    else:
        scale, shift, last = Fraction(n), Fraction(0), n - 1
    return ShiftScale(scale, shift, -p, last + p + 1)


def opt_breakpoints(spec: SpaceSpec) -> list[Fraction]:
    """Breakpoints of the space: 0, the lattice knots inside (0, 1), and 1."""
    ss = shift_scale(spec)
    pts = [Fraction(0)]
    k = int(np.floor(float(-ss.shift))) - 1
    while True:
        x = (k + ss.shift) / ss.scale
        if x >= 1:
            break
        if x > 0:
            pts.append(x)
        k += 1
    pts.append(Fraction(1))
    return pts


def _fold(spec: SpaceSpec, l: int):
    """(row, sign) receiving cardinal index ``l``, or ``None`` if it folds onto zero."""
    p, n = spec.p, spec.n
    h = p // 2
    q = h - p
    if spec.kind is Kind.DIRICHLET:
        m = (l - q) % (2 * n + 2)
        if m == 0 or m == n + 1:
            return None
        return (m, 1) if m <= n else (2 * n + 2 - m, -1)
    if spec.kind is Kind.NEUMANN:
        m = (l + h + 1) % (2 * n)
        if m == 0:
            m = 2 * n
        return (m, 1) if m <= n else (2 * n + 1 - m, 1)
    if spec.kind is Kind.MIXED:
        m = (l - q) % (4 * n + 2)
        if m == 0 or m == 2 * n + 1:
            return None
        if m <= n:
            return m, 1
        if m <= 2 * n:
            return 2 * n + 1 - m, 1
        if m <= 3 * n + 1:
            return m - 2 * n - 1, -1
        return 4 * n + 2 - m, -1
    m = (l - q + 1) % (2 * n)
    if m == 0:
        m = 2 * n
    return (m, 1) if m <= n else (2 * n + 1 - m, -1)


def extraction_matrix(spec: SpaceSpec) -> tuple[np.ndarray, ShiftScale]:
    """Integer matrix ``E`` (n x count) and the lattice description it refers to."""
    if spec.n < spec.p + 1:
        raise SizeError(
            f"basis extraction needs n >= p+1 = {spec.p + 1}, got n={spec.n}")
    ss = shift_scale(spec)
    E = np.zeros((spec.n, ss.count), dtype=int)
    for col, l in enumerate(ss.indices):
        hit = _fold(spec, l)
        if hit is not None:
            row, sign = hit
            E[row - 1, col] += sign
    return E, ss


# --- floating-point cardinal splines ------------------------------------------

def cardinal_values(p: int, r: int, t, side: str = "right") -> np.ndarray:
    """Vectorized ``N_p^(r)(t)`` in floating point.

    Uses the same two-term recursion as the exact code but run over all
    integer shifts at once, so the cost is O(p^2) per point.  ``side``
    picks the one-sided limit at knots (only matters when ``r == p``).
    """
    if r < 0 or r > p:
        raise InvalidOrderError(f"derivative order r={r} must satisfy 0 <= r <= p={p}")
    t = np.asarray(t, dtype=float)
    q = p - r
    shifts = np.arange(q + r + 1).reshape((-1,) + (1,) * t.ndim)
    u = t[None, ...] - shifts
    if side == "right":
        B = ((u >= 0) & (u < 1)).astype(float)
    else:
        B = ((u > 0) & (u <= 1)).astype(float)
    for k in range(1, q + 1):
        nxt = np.zeros_like(B)
        nxt[:-1] = (u[:-1] * B[:-1] + (k + 1 - u[:-1]) * B[1:]) / k
        B = nxt
    # B[j] = N_q(t - j); apply the r-th forward difference
    out = np.zeros_like(t)
    c = 1
    for k in range(r + 1):
        out = out + (-1) ** k * c * B[k]
        c = c * (r - k) // (k + 1)
    return out


def basis_eval(spec: SpaceSpec, i: int, r: int, x) -> np.ndarray:
    """Value of the ``r``-th derivative of basis function ``i`` (1-based) at ``x`` in [0, 1].

    Knots use the right limit except at ``x = 1`` where the left limit is taken.
    """
    if not 1 <= i <= spec.n:
        raise IndexError(f"basis index i={i} outside 1..{spec.n}")
    if r < 0 or r > spec.p:
        raise InvalidOrderError(f"derivative order r={r} must satisfy 0 <= r <= p={spec.p}")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0) or np.any(x > 1):
        raise DomainError("x must lie in [0, 1]")
    E, ss = extraction_matrix(spec)
    s, sh = float(ss.scale), float(ss.shift)
    out = np.zeros_like(x)
    at_end = x == 1.0
    for col in np.flatnonzero(E[i - 1]):
        l = ss.first + col
        u = s * x - l - sh
        vals = cardinal_values(spec.p, r, u, "right")
        if at_end.any():
            vals[at_end] = cardinal_values(spec.p, r, u[at_end], "left")
        out += E[i - 1, col] * vals
    out *= s ** r
    return float(out[0]) if scalar else out


def gauss_legendre(m: int) -> tuple[np.ndarray, np.ndarray]:
    """``m``-point Gauss-Legendre nodes and weights mapped to [0, 1]."""
    if m < 1:
        raise ValueError("need at least one quadrature point")
    x, w = np.polynomial.legendre.leggauss(m)
    return (x + 1.0) / 2.0, w / 2.0


# --- assembly -------------------------------------------------------------------

def _check_r(spec, r):
    if r < 0 or r > spec.p:
        raise InvalidOrderError(f"derivative order r={r} must satisfy 0 <= r <= p={spec.p}")


def assemble_quadrature(spec: SpaceSpec, r: int) -> np.ndarray:
    """Dense ``X_ij = int_0^1 N_i^(r) N_j^(r) dx`` with ``p+1`` Gauss points per knot span."""
    _check_r(spec, r)
    E, ss = extraction_matrix(spec)
    p = spec.p
    s, sh = float(ss.scale), float(ss.shift)
    nodes, weights = gauss_legendre(p + 1)
    bps = [float(b) for b in opt_breakpoints(spec)]
    G = np.zeros((ss.count, ss.count))
    for a, b in zip(bps[:-1], bps[1:]):
        x = a + (b - a) * nodes
        w = (b - a) * weights
        # cardinal indices whose support covers this span
        lo = int(np.floor(s * 0.5 * (a + b) - sh))
        cols = [l - ss.first for l in range(lo - p, lo + 1) if 0 <= l - ss.first < ss.count]
        vals = np.array([cardinal_values(p, r, s * x - (ss.first + c) - sh) for c in cols])
        vals *= s ** r
        G[np.ix_(cols, cols)] += (vals * w) @ vals.T
    X = E @ G @ E.T
    return 0.5 * (X + X.T)


def assemble_exact(spec: SpaceSpec, r: int) -> np.ndarray:
    """Rational version of :func:`assemble_quadrature` (object array of Fractions)."""
    _check_r(spec, r)
    E, ss = extraction_matrix(spec)
    s = ss.scale
    factor = s ** (2 * r - 1)
    G = np.empty((ss.count, ss.count), dtype=object)
    for a, l in enumerate(ss.indices):
        lo = -l - ss.shift
        for b, l2 in enumerate(ss.indices):
            if b < a:
                G[a, b] = G[b, a]
                continue
            G[a, b] = factor * cardinal_overlap_integral(spec.p, r, l - l2, lo, lo + s)
    Eo = E.astype(object)
    return Eo.dot(G).dot(Eo.T)


def assemble_closed_form(spec: SpaceSpec, r: int) -> StructuredMatrix:
    """``scale^(2r-1) * (T(alpha) +/- H(alpha))`` for the kind; needs ``n >= threshold``."""
    _check_r(spec, r)
    need, formula = threshold(spec)
    if spec.n < need:
        raise ThresholdError(
            f"closed-form structure for {spec.kind.value} p={spec.p} needs n >= {formula} = {need}, "
            f"got n={spec.n}", required=need, formula=formula)
    variant, sign, _ = _STRUCTURE[spec.kind]
    scale = spec.scale ** (2 * r - 1)
    return StructuredMatrix(alpha_coeffs(spec.p, r), spec.n, variant, sign, scale)
