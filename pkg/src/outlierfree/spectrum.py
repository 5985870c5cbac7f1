"""Closed-form spectra of the discrete Laplacian ``M^-1 K`` and comparison with the continuous one."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import SizeError, ThresholdError
from .iga import Kind, SpaceSpec, assemble_closed_form, threshold
from .symbols import error_bound_rhs, ratio_symbol
from .tau import tau_transform_column

NEUMANN_ZERO_TOL = 1e-12
TENSOR_MAX_ENTRIES = 10 ** 6


def _require_threshold(spec: SpaceSpec, label: str = "") -> None:
    need, formula = threshold(spec)
    if spec.n < need:
        where = f" in {label}" if label else ""
        raise ThresholdError(
            f"{spec.kind.value} p={spec.p}{where} needs n >= {formula} = {need}, got n={spec.n}",
            required=need, formula=formula)


@dataclass(frozen=True)
class LaplaceEigs:
    """Eigenvalues ``scale^2 * e_p(theta_j)`` ordered by ``j``; eigenvectors on demand."""

    spec: SpaceSpec
    theta: np.ndarray
    eigenvalues: np.ndarray

    def eigenvector(self, j: int) -> np.ndarray:
        return tau_transform_column(self.spec.algebra, self.spec.n, j)

    def __len__(self):
        return len(self.eigenvalues)


def laplace_eigs_1d(spec: SpaceSpec) -> LaplaceEigs:
    _require_threshold(spec)
    theta = spec.algebra.grid(spec.n)
    s = float(spec.scale)
    lam = s * s * ratio_symbol(spec.p, theta)
    if spec.kind is Kind.NEUMANN:
        lam[0] = 0.0  # g^1(0) = 0 exactly
    return LaplaceEigs(spec, theta, lam)


def exact_continuous_eigs(kind, count: int) -> np.ndarray:
    """First ``count`` eigenvalues of ``-u''`` on (0, 1) with the kind's boundary conditions."""
    kind = Kind.parse(kind)
    k = np.arange(1, count + 1, dtype=float)
    if kind is Kind.NEUMANN:
        return ((k - 1) * np.pi) ** 2
    if kind is Kind.MIXED:
        return ((2 * k - 1) * np.pi / 2) ** 2
    return (k * np.pi) ** 2


@dataclass(frozen=True)
class OutlierReport:
    spec: SpaceSpec
    j: np.ndarray
    theta: np.ndarray
    lambda_discrete: np.ndarray
    lambda_exact: np.ndarray
    rel_error: np.ndarray
    bound_rhs: np.ndarray
    ok: np.ndarray
    notes: dict = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return bool(np.all(self.ok))

    @property
    def max_rel_error(self) -> float:
        vals = self.rel_error[~np.isnan(self.rel_error)]
        return float(vals.max()) if vals.size else 0.0

    def rows(self, sort: bool = False) -> list[dict]:
        order = np.argsort(self.lambda_discrete, kind="stable") if sort else range(len(self.j))
        return [
            {
                "j": int(self.j[k]),
                "theta": float(self.theta[k]),
                "lambda_discrete": float(self.lambda_discrete[k]),
                "lambda_exact": float(self.lambda_exact[k]),
                "rel_error": float(self.rel_error[k]),
                "bound_rhs": float(self.bound_rhs[k]),
                "ok": bool(self.ok[k]),
            }
            for k in order
        ]


def outlier_report(spec: SpaceSpec, slack: float = 1e-12) -> OutlierReport:
    """Relative error of every discrete eigenvalue against the continuous one, plus the bound.

    For the Neumann zero mode the relative error is undefined; that row
    carries ``nan`` and is flagged ok iff ``|lambda_1| <= 1e-12``.
    """
    eig = laplace_eigs_1d(spec)
    exact = exact_continuous_eigs(spec.kind, spec.n)
    lam = eig.eigenvalues
    rhs = error_bound_rhs(spec.p, eig.theta)
    rel = np.full(spec.n, np.nan)
    nz = exact != 0
    rel[nz] = (lam[nz] - exact[nz]) / exact[nz]
    ok = np.ones(spec.n, dtype=bool)
    ok[nz] = (rel[nz] >= -slack) & (rel[nz] <= rhs[nz] + slack)
    notes = {}
    if not nz.all():
        ok[~nz] = np.abs(lam[~nz]) <= NEUMANN_ZERO_TOL
        notes["zero_mode"] = "j=1 compared in absolute terms: |lambda_1| <= 1e-12"
    return OutlierReport(spec, np.arange(1, spec.n + 1), eig.theta, lam, exact, rel, rhs, ok, notes)


# --- tensor-product boxes -----------------------------------------------------------

@dataclass(frozen=True)
class TensorSpec:
    """Dirichlet spaces in each direction of ``[0, 1]^d``."""

    dims: tuple

    def __post_init__(self):
        dims = tuple(self.dims)
        if not dims:
            raise SizeError("need at least one dimension")
        for k, s in enumerate(dims):
            if s.kind is not Kind.DIRICHLET:
                raise ValueError(f"dimension {k + 1}: only Dirichlet spaces are supported")
            _require_threshold(s, f"dimension {k + 1}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_lists(cls, ps, ns) -> "TensorSpec":
        if len(ps) != len(ns):
            raise SizeError("degree and size lists differ in length")
        return cls(tuple(SpaceSpec(p, n, Kind.DIRICHLET) for p, n in zip(ps, ns)))

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def shape(self) -> tuple:
        return tuple(s.n for s in self.dims)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))


@dataclass(frozen=True)
class TensorEigs:
    """Per-direction factors; everything multi-indexed by 1-based tuples."""

    tspec: TensorSpec
    mass_1d: tuple
    laplace_1d: tuple

    def laplace(self, jj) -> float:
        return float(sum(lam[j - 1] for lam, j in zip(self.laplace_1d, jj)))

    def mass(self, jj) -> float:
        return float(np.prod([m[j - 1] for m, j in zip(self.mass_1d, jj)]))

    def stiffness(self, jj) -> float:
        return self.mass(jj) * self.laplace(jj)

    def eigenvector_factors(self, jj) -> list[np.ndarray]:
        return [tau_transform_column(s.algebra, s.n, j) for s, j in zip(self.tspec.dims, jj)]

    def eigenvector(self, jj) -> np.ndarray:
        if self.tspec.size > TENSOR_MAX_ENTRIES:
            raise SizeError(
                f"refusing to materialize a vector of {self.tspec.size} entries "
                f"(limit {TENSOR_MAX_ENTRIES})")
        return reduce(np.kron, self.eigenvector_factors(jj))

    def multi_indices(self):
        return itertools.product(*(range(1, n + 1) for n in self.tspec.shape))

    def laplace_grid(self) -> np.ndarray:
        """All Laplace eigenvalues as a d-dimensional array (index ``j - 1`` per axis)."""
        grids = np.meshgrid(*self.laplace_1d, indexing="ij")
        return np.sum(grids, axis=0)


def tensor_eigs(tspec: TensorSpec) -> TensorEigs:
    mass, lap = [], []
    for s in tspec.dims:
        m = assemble_closed_form(s, 0).eigensystem().eigenvalues
        mass.append(m)
        lap.append(laplace_eigs_1d(s).eigenvalues)
    return TensorEigs(tspec, tuple(mass), tuple(lap))


def tensor_matrices(tspec: TensorSpec) -> tuple[np.ndarray, np.ndarray]:
    """Dense Kronecker mass ``M = kron(M_1, ..., M_d)`` and stiffness ``sum_r M..K_r..M``."""
    if tspec.size ** 2 > 10 ** 8:
        raise SizeError(f"dense tensor matrices of size {tspec.size} are too large")
    ms = [assemble_closed_form(s, 0).dense() for s in tspec.dims]
    ks = [assemble_closed_form(s, 1).dense() for s in tspec.dims]
    M = reduce(np.kron, ms)
    K = np.zeros_like(M)
    for r in range(tspec.d):
        K += reduce(np.kron, [ks[k] if k == r else ms[k] for k in range(tspec.d)])
    return M, K


def tensor_residual_check(tspec: TensorSpec, sample_indices) -> float:
    """max over samples of ``||K u - lambda M u||_2 / ||K||_F``."""
    eig = tensor_eigs(tspec)
    M, K = tensor_matrices(tspec)
    kf = np.linalg.norm(K)
    worst = 0.0
    for jj in sample_indices:
        jj = tuple(int(j) for j in jj)
        if len(jj) != tspec.d or any(not 1 <= j <= n for j, n in zip(jj, tspec.shape)):
            raise IndexError(f"multi-index {jj} out of range for shape {tspec.shape}")
        u = eig.eigenvector(jj)
        res = np.linalg.norm(K @ u - eig.laplace(jj) * (M @ u)) / kf
        worst = max(worst, float(res))
    return worst
