"""Exact support search for TCP(A, q).

For a fixed binary support ``z`` the mixed-integer model collapses to the
square polynomial system ``(A x^{m-1} + q)_I = 0`` on ``I = {i : z_i = 1}``
with ``x`` zero elsewhere, plus sign conditions. The solver walks all
supports (or prunes them by branch and bound above a size threshold),
discards those whose rows have a provably fixed sign on the nonnegative
orthant, and runs damped Newton with several starts on the rest.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional, Sequence

import numpy as np

from .mip import MipPoint, alpha_upper_bound, max_alpha_on_ray
from .model import (
    DiagonalStatus,
    Residuals,
    TcpInstance,
    diagonal_solve,
    residuals,
    trivial_check,
    verify,
)
from .tensor import apply_m1, inf_norm, is_diagonal, jacobian_m1, symmetrize

log = logging.getLogger(__name__)

DEDUP_TOL = 1e-6
DIVERGED = 1e12


@dataclass(frozen=True)
class Pattern:
    support: tuple[int, ...]

    @classmethod
    def from_indices(cls, n: int, indices: Sequence[int]) -> "Pattern":
        z = [0] * n
        for i in indices:
            z[i] = 1
        return cls(tuple(z))

    @classmethod
    def of(cls, x, eps: float = 0.0) -> "Pattern":
        return cls(tuple(int(v > eps) for v in np.asarray(x)))

    @property
    def I(self) -> np.ndarray:
        return np.flatnonzero(np.array(self.support, dtype=int))

    @property
    def size(self) -> int:
        return sum(self.support)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.support)


@dataclass
class SolverConfig:
    tol: float = 1e-8
    newton_max_iter: int = 100
    multistart: int = 8
    seed: int = 0
    max_patterns: int = 2**20
    alpha_slices: Optional[Sequence[float]] = None
    enumerate_threshold: int = 16
    # off: skip the trivial / diagonal shortcuts and search every support
    use_closed_forms: bool = True

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.multistart < 1:
            raise ValueError("multistart must be >= 1")


class SolveStatus(enum.Enum):
    SOLUTIONS_FOUND = "SolutionsFound"
    NO_SOLUTION_CERTIFIED = "NoSolutionCertified"
    NO_SOLUTION_NUMERIC = "NoSolutionFoundNumerically"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class Solution:
    x: np.ndarray
    residuals: Residuals
    pattern: Pattern


@dataclass
class SolveOutcome:
    status: SolveStatus
    solutions: list[Solution] = field(default_factory=list)
    patterns_explored: int = 0
    notes: str = ""
    mip_rows: list[tuple[float, MipPoint]] = field(default_factory=list)

    @property
    def xs(self) -> list[np.ndarray]:
        return [s.x for s in self.solutions]


# -- face systems -----------------------------------------------------------


def face_system(inst: TcpInstance, p: Pattern, xI) -> tuple[np.ndarray, np.ndarray]:
    """Values and Jacobian of ``(A x^{m-1} + q)_I`` as a function of ``x_I``."""
    I = p.I
    if I.size == 0:
        return np.zeros(0), np.zeros((0, 0))
    x = np.zeros(inst.dim)
    x[I] = xI
    values = apply_m1(inst.A, x)[I] + inst.q[I]
    jac = jacobian_m1(inst.A, x)[np.ix_(I, I)]
    return values, jac


class _Face:
    """A face system restricted to its support, with a precomputed Jacobian kernel."""

    def __init__(self, inst: TcpInstance, p: Pattern):
        I = p.I
        m = inst.order
        self.sub = inst.A.data[np.ix_(*([I] * m))]
        self.q = inst.q[I]
        # d/dx_j of A x^{m-1}: sum over trailing positions, folded into one tensor
        self.kernel = sum(np.moveaxis(self.sub, pos, 1) for pos in range(1, m))
        self.m = m

    def values(self, x: np.ndarray) -> np.ndarray:
        out = self.sub
        for _ in range(self.m - 1):
            out = out @ x
        return out + self.q

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        out = self.kernel
        for _ in range(self.m - 2):
            out = out @ x
        return np.asarray(out, dtype=float)


def _newton(inst: TcpInstance, face: _Face, x0: np.ndarray, max_iter: int):
    """Damped Newton on a face system from ``x0``; returns ``(xI, |F|)`` or None.

    Runs until the residual stops improving rather than stopping at the
    caller's tolerance, so roots of multiplicity > 1 still get refined.
    """
    x = np.abs(x0)
    f = face.values(x)
    nf = float(np.linalg.norm(f))
    floor = 1e-15 * (1.0 + float(np.abs(inst.q).max()))
    for _ in range(max_iter):
        if nf <= floor:
            break
        J = face.jacobian(x)
        try:
            d = np.linalg.solve(J, -f)
            if not np.all(np.isfinite(d)):
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            d = -np.linalg.pinv(J) @ f
        t = 1.0
        accepted = False
        while t > 1e-10:
            xn = np.abs(x + t * d)
            fn = face.values(xn)
            nfn = float(np.linalg.norm(fn))
            if nfn**2 <= (1.0 - 1e-4 * t) * nf**2:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        x, f, nf = xn, fn, nfn
        if nf > DIVERGED or not np.isfinite(nf):
            return None
    return x, nf


def _starts(inst: TcpInstance, p: Pattern, cfg: SolverConfig) -> list[np.ndarray]:
    I = p.I
    m = inst.order
    scale = (np.abs(inst.q[I]) / (1.0 + inf_norm(inst.A))) ** (1.0 / (m - 1))
    starts = [scale, np.ones(I.size)]
    hi = 2.0 * float(scale.max()) if scale.max() > 0 else 1.0
    rng = np.random.default_rng([cfg.seed, int(str(p) or "0", 2), inst.dim])
    for _ in range(max(cfg.multistart - 2, 0)):
        starts.append(hi * (1.0 - rng.random(I.size)))
    return starts[: cfg.multistart]


def _face_roots(inst: TcpInstance, p: Pattern, cfg: SolverConfig) -> list[np.ndarray]:
    """All distinct verified solutions supported on ``p`` found by multistart."""
    n = inst.dim
    I = p.I
    if I.size == 0:
        x = np.zeros(n)
        return [x] if verify(inst, x, cfg.tol) else []
    found: list[np.ndarray] = []
    face = _Face(inst, p)
    face_tol = cfg.tol * (1.0 + float(np.abs(inst.q).max()))
    for x0 in _starts(inst, p, cfg):
        res = _newton(inst, face, x0, cfg.newton_max_iter)
        if res is None:
            continue
        xI, nf = res
        # the face equations must hold, not just complementarity
        if nf > face_tol:
            continue
        x = np.zeros(n)
        x[I] = xI
        if verify(inst, x, cfg.tol):
            found.append(x)
    return _dedup(inst, found)


def _dedup(inst: TcpInstance, xs: list[np.ndarray]) -> list[np.ndarray]:
    keep: list[np.ndarray] = []
    for x in sorted(xs, key=lambda v: abs(residuals(inst, v).gap) + np.abs(np.minimum(inst.w(v), 0)).sum()):
        if all(np.abs(x - k).max() > DEDUP_TOL for k in keep):
            keep.append(x)
    return keep


def solve_pattern(inst: TcpInstance, p: Pattern, cfg: SolverConfig | None = None) -> Optional[np.ndarray]:
    cfg = cfg or SolverConfig()
    roots = _face_roots(inst, p, cfg)
    return roots[0] if roots else None


# -- sign certificates ------------------------------------------------------


class _SignOracle:
    """Sign tests on monomial coefficients of each slice restricted to a support.

    Coefficients are taken from the slice symmetrized over its trailing
    indices, which preserves the sign of every monomial coefficient.
    """

    def __init__(self, inst: TcpInstance):
        self.inst = inst
        m = inst.order
        self.S = symmetrize(inst.A, axes=range(1, m)).data if m > 2 else inst.A.data

    def _block(self, i: int, J: np.ndarray) -> np.ndarray:
        m = self.inst.order
        return self.S[i][np.ix_(*([J] * (m - 1)))]

    def never_nonneg(self, i: int, J: np.ndarray) -> bool:
        """``w_i < 0`` for every ``x >= 0`` supported in ``J``."""
        if self.inst.q[i] >= 0:
            return False
        return J.size == 0 or self._block(i, J).max() <= 0

    def never_zero(self, i: int, J: np.ndarray) -> bool:
        """``w_i != 0`` for every ``x >= 0`` supported in ``J``."""
        q = self.inst.q[i]
        if q == 0:
            return False
        if J.size == 0:
            return True
        b = self._block(i, J)
        return b.max() <= 0 if q < 0 else b.min() >= 0

    def excludes(self, on: np.ndarray, off: np.ndarray, reach: np.ndarray) -> bool:
        """No support ``S`` with ``on <= S <= reach`` can carry a solution.

        ``on`` rows need ``w_i = 0`` and ``off`` rows need ``w_i >= 0``.
        """
        for i in on:
            if self.never_zero(i, reach) or self.never_nonneg(i, reach):
                return True
        for i in off:
            if self.never_nonneg(i, reach):
                return True
        return False


def _enumerate(n: int) -> Iterator[Pattern]:
    for k in range(n + 1):
        for idx in combinations(range(n), k):
            yield Pattern.from_indices(n, idx)


def _branch_and_bound(oracle: _SignOracle, n: int, cap: int) -> tuple[list[Pattern], int, bool]:
    """Depth-first search over supports, pruning subtrees by sign certificates.

    Returns surviving leaves sorted by support size, the number of supports
    covered by pruned subtrees, and whether the leaf cap was hit.
    """
    leaves: list[Pattern] = []
    pruned = 0
    stack: list[tuple[int, tuple[int, ...]]] = [(0, ())]
    while stack:
        depth, fixed = stack.pop()
        on = np.array([i for i, b in enumerate(fixed) if b], dtype=int)
        off = np.array([i for i, b in enumerate(fixed) if not b], dtype=int)
        reach = np.concatenate([on, np.arange(depth, n)]).astype(int)
        if oracle.excludes(on, off, reach):
            pruned += 2 ** (n - depth)
            continue
        if depth == n:
            leaves.append(Pattern(fixed))
            if len(leaves) >= cap:
                return sorted(leaves, key=lambda p: (p.size, p.support)), pruned, True
            continue
        stack.append((depth + 1, fixed + (1,)))
        stack.append((depth + 1, fixed + (0,)))
    return sorted(leaves, key=lambda p: (p.size, p.support)), pruned, False


# -- driver -----------------------------------------------------------------


def _sort_key(s: Solution):
    return (s.pattern.size, tuple(np.round(s.x, 9)))


def _finish(inst: TcpInstance, xs: list[np.ndarray], cfg: SolverConfig, explored: int, notes: list[str],
            certified: bool) -> SolveOutcome:
    xs = _dedup(inst, xs)
    sols = sorted(
        (Solution(x=x, residuals=residuals(inst, x), pattern=Pattern.of(x)) for x in xs),
        key=_sort_key,
    )
    if sols:
        status = SolveStatus.SOLUTIONS_FOUND
    elif certified:
        status = SolveStatus.NO_SOLUTION_CERTIFIED
    else:
        status = SolveStatus.NO_SOLUTION_NUMERIC
    out = SolveOutcome(status, sols, explored, "; ".join(notes))
    if cfg.alpha_slices:
        out.mip_rows = [(a, best_mip_point(inst, out.xs, a, cfg.tol)) for a in cfg.alpha_slices]
    return out


def solve(inst: TcpInstance, cfg: SolverConfig | None = None) -> SolveOutcome:
    """Find every solution reachable by support search, or certify there is none."""
    cfg = cfg or SolverConfig()
    n = inst.dim
    notes: list[str] = []
    xs: list[np.ndarray] = []

    if cfg.use_closed_forms:
        x0 = trivial_check(inst)
        if x0 is not None:
            xs.append(x0)
            notes.append("q >= 0: trivial solution")
        if is_diagonal(inst.A):
            verdict = diagonal_solve(inst)
            if verdict.status is DiagonalStatus.NO_SOLUTION:
                notes.append(f"diagonal tensor: q_{verdict.blocking_index} < 0 with nonpositive diagonal entry")
                out = _finish(inst, [], cfg, 0, notes, True)
                out.status = SolveStatus.INFEASIBLE
                return out
            xs.append(verdict.witness)
            if verdict.status is DiagonalStatus.UNIQUE_SOLUTION:
                notes.append("diagonal positive tensor: unique closed-form solution")
                return _finish(inst, xs, cfg, 0, notes, True)
            notes.append("diagonal tensor: closed-form witness, searching for others")

    oracle = _SignOracle(inst)
    certified = True
    explored = 0
    visited = 0
    if n <= cfg.enumerate_threshold:
        patterns: Iterator[Pattern] | list[Pattern] = _enumerate(n)
    else:
        cap = cfg.max_patterns
        patterns, pruned, hit = _branch_and_bound(oracle, n, cap)
        explored += pruned
        notes.append(f"branch and bound: {pruned} supports pruned by sign certificates")
        if hit:
            certified = False
            notes.append(f"leaf cap {cap} reached")

    every = np.arange(n)
    for p in patterns:
        if visited >= cfg.max_patterns:
            certified = False
            notes.append(f"pattern cap {cfg.max_patterns} reached")
            break
        visited += 1
        explored += 1
        I = p.I
        off = np.setdiff1d(every, I)
        if oracle.excludes(I, off, I):
            continue
        roots = _face_roots(inst, p, cfg)
        if not roots:
            # face not proven empty; Newton just failed to find a root
            certified = False
        xs.extend(roots)

    if not xs and certified:
        notes.append(f"all {explored} supports certified infeasible")
    return _finish(inst, xs, cfg, explored, notes, certified)


# -- MIP points -------------------------------------------------------------


def mip_point_of(inst: TcpInstance, x, alpha_hi: float = math.inf, tol: float = 1e-8) -> MipPoint:
    """Map a TCP solution to the feasible MIP point with the largest alpha on its ray.

    An infinite ``alpha_hi`` is replaced by the a-priori bound on alpha.
    """
    x = np.asarray(x, dtype=float)
    if not verify(inst, x, tol):
        raise ValueError("x is not a verified TCP solution")
    if math.isinf(alpha_hi):
        alpha_hi = alpha_upper_bound(inst)
    x = np.maximum(x, 0.0)
    alpha = max_alpha_on_ray(inst, x, alpha_hi)
    z = (x > 0).astype(int)
    return MipPoint(alpha=alpha, y=alpha * x, z=z)


def best_mip_point(inst: TcpInstance, xs: Sequence[np.ndarray], alpha_hi: float = math.inf,
                   tol: float = 1e-8) -> MipPoint:
    """The MIP optimum over the given solutions for ``alpha <= alpha_hi``.

    Ties in alpha (within 1e-9) go to the larger support. With no solutions
    the optimum is ``alpha = 0`` at the origin.
    """
    n = inst.dim
    best: Optional[MipPoint] = None
    for x in xs:
        p = mip_point_of(inst, x, alpha_hi, tol)
        if best is None or p.alpha > best.alpha + 1e-9 or (
            abs(p.alpha - best.alpha) <= 1e-9 and p.z.sum() > best.z.sum()
        ):
            best = p
    if best is None:
        best = MipPoint(alpha=0.0, y=np.zeros(n), z=np.zeros(n, dtype=int))
    return best
