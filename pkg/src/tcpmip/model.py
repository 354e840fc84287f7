"""TCP instances, residuals, the scaling lemma and the diagonal closed forms."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .tensor import Tensor, apply_m1, is_diagonal


@dataclass(frozen=True, eq=False)
class TcpInstance:
    """The datum ``(A, q)`` of TCP(A, q)."""

    A: Tensor
    q: np.ndarray
    name: str = ""

    def __post_init__(self):
        q = np.array(self.q, dtype=float).reshape(-1)
        if q.shape != (self.A.dim,):
            raise ValueError(f"q has length {q.size}, tensor dim is {self.A.dim}")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def order(self) -> int:
        return self.A.order

    @property
    def dim(self) -> int:
        return self.A.dim

    def w(self, x) -> np.ndarray:
        """``A x^{m-1} + q``."""
        return apply_m1(self.A, x) + self.q

    def __eq__(self, other) -> bool:
        if not isinstance(other, TcpInstance):
            return NotImplemented
        return self.A == other.A and bool(np.array_equal(self.q, other.q))

    def __hash__(self):
        return hash((self.A, self.q.tobytes()))


@dataclass(frozen=True)
class Residuals:
    min_x: float
    min_w: float
    gap: float


def residuals(inst: TcpInstance, x) -> Residuals:
    x = np.asarray(x, dtype=float)
    w = inst.w(x)
    return Residuals(min_x=float(x.min()), min_w=float(w.min()), gap=float(x @ w))


def verify(inst: TcpInstance, x, tol: float) -> bool:
    """Check that ``x`` solves the instance to within ``tol``.

    Both the sign of ``w`` and the gap are judged relative to the data scale:
    ``min w >= -tol (1 + |q|_inf)`` and ``|x.w| <= tol (1 + |x| |q|)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = np.asarray(x, dtype=float)
    r = residuals(inst, x)
    q = inst.q
    w_tol = tol * (1.0 + float(np.abs(q).max()))
    gap_tol = tol * (1.0 + float(np.linalg.norm(x) * np.linalg.norm(q)))
    return r.min_x >= -tol and r.min_w >= -w_tol and abs(r.gap) <= gap_tol


def trivial_check(inst: TcpInstance) -> Optional[np.ndarray]:
    """``x = 0`` when ``q >= 0``, else None."""
    if np.all(inst.q >= 0):
        return np.zeros(inst.dim)
    return None


class DiagonalStatus(enum.Enum):
    NO_SOLUTION = "NoSolution"
    HAS_SOLUTION = "HasSolution"
    UNIQUE_SOLUTION = "UniqueSolution"


@dataclass(frozen=True)
class DiagonalVerdict:
    status: DiagonalStatus
    witness: Optional[np.ndarray] = None
    blocking_index: Optional[int] = None  # 1-based


def diagonal_solve(inst: TcpInstance) -> DiagonalVerdict:
    """Closed-form verdict for a diagonal tensor.

    Infeasible when some ``q_i < 0`` meets ``a_{i...i} <= 0``. Otherwise the
    witness has ``x_i = (-q_i / a_{i...i})^{1/(m-1)}`` where ``q_i < 0`` and
    zero elsewhere; it is the unique solution when every diagonal entry is
    positive.
    """
    if not is_diagonal(inst.A):
        raise ValueError("diagonal_solve requires a diagonal tensor")
    a = inst.A.diag()
    q = inst.q
    m = inst.order
    for i in range(inst.dim):
        if q[i] < 0 and a[i] <= 0:
            return DiagonalVerdict(DiagonalStatus.NO_SOLUTION, blocking_index=i + 1)
    x = np.zeros(inst.dim)
    neg = q < 0
    x[neg] = np.exp(np.log(-q[neg] / a[neg]) / (m - 1))
    status = DiagonalStatus.UNIQUE_SOLUTION if np.all(a > 0) else DiagonalStatus.HAS_SOLUTION
    return DiagonalVerdict(status, witness=x)


def scale_instance(inst: TcpInstance, beta: float) -> TcpInstance:
    """Replace ``q`` by ``beta^{m-1} q``; solutions map by ``x -> beta x``."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    return TcpInstance(inst.A, beta ** (inst.order - 1) * inst.q, name=inst.name)


def scale_solution(x, beta: float) -> np.ndarray:
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    return beta * np.asarray(x, dtype=float)
