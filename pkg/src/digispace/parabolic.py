"""Explicit parabolic equation ``f^{t+1} = C f^t + q^t`` on a digital space.

``C`` is column-stochastic (every column sums to one) and supported on
closed balls: ``c_pk`` may be nonzero only if ``k`` is ``p`` or a neighbor
of ``p``. Besides time stepping, the module covers the limit of ``C^t``
(power iteration towards the stationary vector), the separation-of-variables
solution for symmetric ``C`` and the fixed-point equation ``f = C f``.

All arithmetic is float64. Tolerances below are part of the contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple

import numpy as np

from .space import DigitalSpace

COLUMN_TOL = 1e-12
STEP_AGREEMENT_TOL = 1e-12
STABILITY_TOL = 1e-12
CONSERVATION_TOL = 1e-9
SYMMETRY_TOL = 1e-12
EIGEN_RESIDUAL_TOL = 1e-10
UNIT_EIGEN_TOL = 1e-10
SUM_ZERO_TOL = 1e-9

SourceTerm = Callable[[int, int], float]


class DimensionMismatch(ValueError):
    pass


class NotIrreducible(ValueError):
    pass


class NotPrimitive(ValueError):
    pass


class InvalidCoefficients(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


class UnsupportedSpectralCase(ValueError):
    """Raised for non-symmetric ``C``.

    Diagonalization by an orthonormal basis also exists for normal matrices
    (``C C^T = C^T C``), but those may have complex spectra; only the real
    symmetric case is handled.
    """


@dataclass(frozen=True)
class CoefficientMatrix:
    """Sparse coefficients ``c_pk`` bound to a space.

    ``dense`` and ``rows`` are derived once from ``entries``; rows list the
    nonzero ``(column index, weight)`` pairs in ascending label order.
    """

    space: DigitalSpace
    entries: Mapping[tuple[int, int], float]
    dense: np.ndarray = field(init=False, repr=False, compare=False)
    rows: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        idx = self.index
        M = np.zeros((len(self.space), len(self.space)))
        for (p, k), v in self.entries.items():
            if p not in idx or k not in idx:
                raise DimensionMismatch(f"entry ({p}, {k}) refers to a point outside the space")
            M[idx[p], idx[k]] = v
        M.setflags(write=False)
        object.__setattr__(self, "dense", M)
        rows = []
        for i in range(len(self.space)):
            nz = np.nonzero(M[i])[0]
            rows.append(tuple((int(j), float(M[i, j])) for j in nz))
        object.__setattr__(self, "rows", tuple(rows))

    @property
    def points(self) -> tuple[int, ...]:
        return self.space.points

    @property
    def index(self) -> dict[int, int]:
        return {p: i for i, p in enumerate(self.space.points)}

    @property
    def n(self) -> int:
        return len(self.space)

    def __getitem__(self, pk) -> float:
        return float(self.entries.get(pk, 0.0))

    @classmethod
    def from_dense(cls, space: DigitalSpace, M) -> "CoefficientMatrix":
        M = np.asarray(M, dtype=float)
        pts = space.points
        if M.shape != (len(pts), len(pts)):
            raise DimensionMismatch(f"matrix shape {M.shape} does not match {len(pts)} points")
        entries = {(pts[i], pts[j]): float(M[i, j])
                   for i, j in zip(*np.nonzero(M))}
        return cls(space, entries)

    def with_entry(self, p: int, k: int, value: float) -> "CoefficientMatrix":
        entries = dict(self.entries)
        entries[(p, k)] = float(value)
        return CoefficientMatrix(self.space, entries)


@dataclass
class ValidationReport:
    negative: list[tuple[int, int, float]] = field(default_factory=list)
    off_support: list[tuple[int, int, float]] = field(default_factory=list)
    bad_columns: list[tuple[int, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.negative or self.off_support or self.bad_columns)

    def messages(self) -> list[str]:
        out = [f"negative coefficient c[{p},{k}] = {v}" for p, k, v in self.negative]
        out += [f"c[{p},{k}] = {v} but {k} is not in the ball of {p}"
                for p, k, v in self.off_support]
        out += [f"column {k} sums to {s!r}, not 1" for k, s in self.bad_columns]
        return out


def validate(C: CoefficientMatrix) -> ValidationReport:
    rep = ValidationReport()
    G = C.space
    for (p, k), v in sorted(C.entries.items()):
        if v < 0:
            rep.negative.append((p, k, v))
        if v != 0 and p != k and not G.adjacent(p, k):
            rep.off_support.append((p, k, v))
    sums = C.dense.sum(axis=0)
    for k, s in zip(C.points, sums):
        if abs(s - 1.0) > COLUMN_TOL:
            rep.bad_columns.append((k, float(s)))
    return rep


def lazy_uniform(G: DigitalSpace, w: float) -> CoefficientMatrix:
    """``c_ps = w`` on every edge and ``c_pp = 1 - w deg(p)``.

    The result is symmetric and doubly stochastic. Requires
    ``0 < w <= 1 / max degree`` so the diagonal stays nonnegative.
    """
    maxdeg = max((len(G.neighbors(p)) for p in G.points), default=0)
    if not w > 0 or (maxdeg and w * maxdeg > 1.0 + 1e-12):
        raise InvalidCoefficients(
            f"w = {w} out of range (0, 1/{maxdeg}] for max degree {maxdeg}"
        )
    entries = {}
    for p in G.points:
        nbrs = G.neighbors(p)
        entries[(p, p)] = 1.0 - w * len(nbrs)
        for s in nbrs:
            entries[(p, s)] = float(w)
    return CoefficientMatrix(G, entries)


@dataclass(frozen=True)
class Field:
    """Values ``f_p`` on the points of a space at time ``t`` (``None`` for a
    limit field)."""

    points: tuple[int, ...]
    values: np.ndarray
    t: int | None = 0

    @classmethod
    def from_map(cls, space: DigitalSpace, values: Mapping[int, float], t: int = 0) -> "Field":
        unknown = set(values) - set(space.points)
        if unknown:
            raise DimensionMismatch(f"initial values for unknown points {sorted(unknown)}")
        arr = np.array([float(values.get(p, 0.0)) for p in space.points])
        return cls(space.points, arr, t)

    def __getitem__(self, p: int) -> float:
        return float(self.values[self.points.index(p)])

    def as_dict(self) -> dict[int, float]:
        return {p: float(v) for p, v in zip(self.points, self.values)}

    @property
    def total(self) -> float:
        return math.fsum(self.values)


def l1_norm(f: Field) -> float:
    return math.fsum(abs(v) for v in f.values)


def _source_vector(q: SourceTerm | None, points, t) -> np.ndarray:
    if q is None:
        return np.zeros(len(points))
    return np.array([float(q(p, t)) for p in points])


def _check_bound(C: CoefficientMatrix, f: Field):
    if f.points != C.points:
        raise DimensionMismatch(
            f"field on {len(f.points)} points is not bound to the coefficient space"
        )


def step_sparse(C: CoefficientMatrix, f: Field, q: SourceTerm | None = None) -> Field:
    """Accumulate ``sum_k c_pk f_k`` over the ball of each point."""
    _check_bound(C, f)
    x = f.values
    out = np.empty(len(x))
    for i, row in enumerate(C.rows):
        acc = 0.0
        for j, c in row:
            acc += c * x[j]
        out[i] = acc
    return Field(f.points, out + _source_vector(q, f.points, f.t), f.t + 1)


def step_dense(C: CoefficientMatrix, f: Field, q: SourceTerm | None = None) -> Field:
    _check_bound(C, f)
    out = C.dense @ f.values
    return Field(f.points, out + _source_vector(q, f.points, f.t), f.t + 1)


def step(C: CoefficientMatrix, f: Field, q: SourceTerm | None = None,
         method: str = "sparse") -> Field:
    if method == "sparse":
        return step_sparse(C, f, q)
    if method == "dense":
        return step_dense(C, f, q)
    raise ValueError(f"unknown step method {method!r}")


@dataclass
class Trajectory:
    """Fields for ``t = 0..T`` stored row-wise, plus the per-step source totals."""

    points: tuple[int, ...]
    values: np.ndarray
    source_totals: np.ndarray | None = None

    def __len__(self):
        return len(self.values)

    @property
    def times(self) -> list[int]:
        return list(range(len(self.values)))

    def field(self, t: int) -> Field:
        return Field(self.points, self.values[t].copy(), t)

    def series(self, p: int) -> np.ndarray:
        return self.values[:, self.points.index(p)]

    def sums(self) -> np.ndarray:
        return np.array([math.fsum(row) for row in self.values])

    def norms(self) -> np.ndarray:
        return np.array([math.fsum(np.abs(row)) for row in self.values])


def run(C: CoefficientMatrix, f0: Field, q: SourceTerm | None = None, T: int = 0,
        method: str = "dense") -> Trajectory:
    if T < 0:
        raise ValueError("number of steps must be >= 0")
    _check_bound(C, f0)
    vals = np.empty((T + 1, len(f0.points)))
    vals[0] = f0.values
    totals = np.zeros(T) if q is not None else None
    f = Field(f0.points, f0.values, 0)
    for t in range(T):
        if q is not None:
            totals[t] = math.fsum(_source_vector(q, f.points, t))
        f = step(C, f, q, method)
        vals[t + 1] = f.values
    return Trajectory(f0.points, vals, totals)


class StabilityCheck(NamedTuple):
    ok: bool
    first_violation: int | None


class ConservationCheck(NamedTuple):
    ok: bool
    max_drift: float


def check_stability(traj: Trajectory) -> StabilityCheck:
    """``||f^{t+1}||_1 <= ||f^t||_1`` for every step; reports the first ``t``
    where the norm grows."""
    norms = traj.norms()
    for t in range(len(norms) - 1):
        if norms[t + 1] > norms[t] + STABILITY_TOL:
            return StabilityCheck(False, t)
    return StabilityCheck(True, None)


def check_conservation(traj: Trajectory, q: SourceTerm | None = None) -> ConservationCheck:
    """Per-step change of the total equals the total injected source."""
    sums = traj.sums()
    nsteps = len(sums) - 1
    if q is not None:
        injected = np.array([math.fsum(_source_vector(q, traj.points, t))
                             for t in range(nsteps)])
    elif traj.source_totals is not None:
        injected = traj.source_totals
    else:
        injected = np.zeros(nsteps)
    drift = np.abs(np.diff(sums) - injected) if nsteps else np.zeros(0)
    worst = float(drift.max()) if nsteps else 0.0
    return ConservationCheck(worst <= CONSERVATION_TOL, worst)


# -- limit analysis ----------------------------------------------------------

def _support_graph(C: CoefficientMatrix):
    """Adjacency of the support digraph: k -> p whenever c_pk > 0."""
    M = C.dense
    fwd = [np.nonzero(M[:, k] > 0)[0].tolist() for k in range(C.n)]
    bwd = [np.nonzero(M[p, :] > 0)[0].tolist() for p in range(C.n)]
    return fwd, bwd


def _reach(adj, start=0) -> list[int | None]:
    level: list[int | None] = [None] * len(adj)
    level[start] = 0
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if level[w] is None:
                    level[w] = level[u] + 1
                    nxt.append(w)
        frontier = nxt
    return level


def is_irreducible(C: CoefficientMatrix) -> bool:
    if C.n == 0:
        return False
    fwd, bwd = _support_graph(C)
    return None not in _reach(fwd) and None not in _reach(bwd)


def period(C: CoefficientMatrix) -> int:
    """Period of an irreducible support digraph from breadth-first levels."""
    if not is_irreducible(C):
        raise NotIrreducible("period is defined for irreducible matrices only")
    fwd, _ = _support_graph(C)
    level = _reach(fwd)
    g = 0
    for u, outs in enumerate(fwd):
        for w in outs:
            g = math.gcd(g, level[u] + 1 - level[w])
    return abs(g)


def is_primitive(C: CoefficientMatrix) -> bool:
    if not is_irreducible(C):
        raise NotIrreducible("primitivity is defined for irreducible matrices only")
    if np.any(np.diag(C.dense) > 0):
        return True
    return period(C) == 1


@dataclass
class StationaryResult:
    points: tuple[int, ...]
    vector: np.ndarray
    iterations: int
    residual: float

    def as_dict(self) -> dict[int, float]:
        return {p: float(v) for p, v in zip(self.points, self.vector)}


def _require_limit(C: CoefficientMatrix):
    rep = validate(C)
    if not rep.ok:
        raise InvalidCoefficients("; ".join(rep.messages()))
    if not is_irreducible(C):
        raise NotIrreducible("coefficient matrix is decomposable")
    if not is_primitive(C):
        raise NotPrimitive(f"coefficient matrix is cyclic with period {period(C)}")


def stationary(C: CoefficientMatrix, tolerance: float = 1e-13,
               max_iterations: int = 10**6) -> StationaryResult:
    """Power iteration from the uniform vector until the L1 change drops
    below ``tolerance``."""
    _require_limit(C)
    M = C.dense
    x = np.full(C.n, 1.0 / C.n)
    for it in range(1, max_iterations + 1):
        y = M @ x
        change = float(np.abs(y - x).sum())
        x = y
        if change < tolerance:
            x = x / math.fsum(x)
            residual = float(np.abs(M @ x - x).sum())
            return StationaryResult(C.points, x, it, residual)
    raise ConvergenceError(f"power iteration did not converge in {max_iterations} iterations")


def final_matrix(C: CoefficientMatrix, **kw) -> np.ndarray:
    """``C^inf``: every column equals the stationary vector."""
    c = stationary(C, **kw).vector
    return np.outer(c, np.ones(C.n))


def final_field(C: CoefficientMatrix, f0: Field, **kw) -> Field:
    """Limit ``S c`` where ``S`` is the initial total and ``c`` the stationary vector."""
    _check_bound(C, f0)
    c = stationary(C, **kw).vector
    return Field(f0.points, f0.total * c, None)


# -- separation of variables -------------------------------------------------

def _inf_norm(M) -> float:
    return float(np.abs(M).sum(axis=1).max()) if M.size else 0.0


def commutes_with_transpose(C: CoefficientMatrix) -> bool:
    M = C.dense
    return _inf_norm(M @ M.T - M.T @ M) <= SYMMETRY_TOL


def is_symmetric(C: CoefficientMatrix) -> bool:
    M = C.dense
    return float(np.abs(M - M.T).max(initial=0.0)) <= SYMMETRY_TOL


@dataclass
class SpectralSolution:
    """``f^t = sum_s d_s lambda_s^t X_s`` with orthonormal eigenvectors as columns."""

    points: tuple[int, ...]
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    coefficients: np.ndarray
    matrix: np.ndarray = field(repr=False)

    def evaluate(self, t: int) -> Field:
        if t < 0:
            raise ValueError("t must be >= 0")
        vals = self.eigenvectors @ (self.coefficients * self.eigenvalues ** t)
        return Field(self.points, vals, t)

    def residuals(self) -> np.ndarray:
        X, lam = self.eigenvectors, self.eigenvalues
        return np.abs(self.matrix @ X - X * lam).max(axis=0)

    def perron_vector(self) -> np.ndarray:
        """Eigenvector of the top eigenvalue rescaled to unit sum."""
        x = self.eigenvectors[:, 0]
        return x / x.sum()


def spectral_solve(C: CoefficientMatrix, f0: Field) -> SpectralSolution:
    _check_bound(C, f0)
    if not is_symmetric(C):
        raise UnsupportedSpectralCase(
            "separation of variables is implemented for symmetric C only; "
            "normal matrices (C C^T = C^T C) may need complex eigenpairs"
        )
    M = C.dense
    lam, X = np.linalg.eigh((M + M.T) / 2)
    order = np.argsort(-lam, kind="stable")
    lam, X = lam[order], X[:, order]
    sol = SpectralSolution(C.points, lam, X, X.T @ f0.values, M)
    worst = float(sol.residuals().max(initial=0.0))
    if worst > EIGEN_RESIDUAL_TOL:
        raise ConvergenceError(f"eigenpair residual {worst:.3e} exceeds {EIGEN_RESIDUAL_TOL}")
    return sol


@dataclass
class SumZeroReport:
    sums: list[tuple[float, float]]
    max_abs_sum: float
    unit_count: int

    @property
    def ok(self) -> bool:
        return self.max_abs_sum <= SUM_ZERO_TOL


def check_eigen_sum_zero(sol: SpectralSolution) -> SumZeroReport:
    """Entry sums of every eigenvector whose eigenvalue lies strictly inside
    the unit disc; those must vanish."""
    sums = []
    unit = 0
    for lam, x in zip(sol.eigenvalues, sol.eigenvectors.T):
        if abs(lam) < 1 - UNIT_EIGEN_TOL:
            sums.append((float(lam), float(x.sum())))
        else:
            unit += 1
    worst = max((abs(s) for _, s in sums), default=0.0)
    return SumZeroReport(sums, worst, unit)


def solve_elliptic(C: CoefficientMatrix) -> list[Field]:
    """Basis of the fields with ``f = C f``."""
    M = C.dense
    if is_symmetric(C):
        lam, X = np.linalg.eigh((M + M.T) / 2)
        cols = [X[:, i] for i in range(C.n) if abs(lam[i] - 1) <= UNIT_EIGEN_TOL]
    elif is_irreducible(C) and is_primitive(C):
        cols = [stationary(C).vector]
    else:
        _, s, vh = np.linalg.svd(M - np.eye(C.n))
        cols = [vh[i] for i in range(C.n) if s[i] <= UNIT_EIGEN_TOL]
    return [Field(C.points, np.asarray(c, dtype=float), None) for c in cols]
