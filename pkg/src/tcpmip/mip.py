"""The mixed-integer reformulation of TCP(A, q) and its feasibility systems.

The model, for a TCP instance and an upper bound ``alpha_hi`` on ``alpha``::

    max  alpha^{m-1}
    s.t. 0 <= A y^{m-1} + alpha^{m-1} q <= e - z
         0 <= y <= z,   0 <= alpha <= alpha_hi,   z in {0, 1}^n

Any feasible point with ``alpha > 0`` yields the TCP solution ``y / alpha``.

The certificate systems are in ``(tau, x, u)``::

    0 <= A x^{m-1} + q <= tau e - u
    0 <= x <= tau^{(m-2)/(1-m)} u
    tau >= 1

with ``u`` in the box ``[0, tau]^n`` (relaxed) or in ``{0, tau}^n`` (exact).
The exact system is feasible iff the TCP is solvable; infeasibility of the
relaxed one proves the TCP has no solution.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import TcpInstance, verify
from .tensor import apply_m1, inf_norm


@dataclass(frozen=True)
class MipModel:
    instance: TcpInstance
    alpha_hi: float = math.inf

    def __post_init__(self):
        if not self.alpha_hi > 0:
            raise ValueError(f"alpha_hi must be positive or inf, got {self.alpha_hi}")

    @property
    def alpha_range(self) -> tuple[float, float]:
        return (0.0, self.alpha_hi)

    def constraint_values(self, alpha: float, y) -> np.ndarray:
        """``A y^{m-1} + alpha^{m-1} q``, the middle term of the first block."""
        inst = self.instance
        return apply_m1(inst.A, y) + alpha ** (inst.order - 1) * inst.q

    def describe(self) -> list[str]:
        """Human-readable constraint rows, one per slice, plus the bounds."""
        inst = self.instance
        m, n = inst.order, inst.dim
        rows = []
        for i in range(n):
            terms = []
            for idx, v in _slice_monomials(inst, i):
                mono = "*".join(f"y{j + 1}" for j in idx) if idx else ""
                terms.append(f"{v:+g}*{mono}" if mono else f"{v:+g}")
            if inst.q[i] != 0:
                terms.append(f"{inst.q[i]:+g}*alpha^{m - 1}")
            body = " ".join(terms) if terms else "0"
            rows.append(f"0 <= {body} <= 1 - z{i + 1}")
        rows.append(" , ".join(f"0 <= y{i + 1} <= z{i + 1}" for i in range(n)))
        hi = "inf" if math.isinf(self.alpha_hi) else f"{self.alpha_hi:g}"
        rows.append(f"0 <= alpha <= {hi}")
        return rows


def _slice_monomials(inst: TcpInstance, i: int):
    """Collect monomial coefficients of ``(A y^{m-1})_i`` keyed by sorted indices."""
    coeffs: dict[tuple[int, ...], float] = {}
    sl = inst.A.data[i]
    for idx in np.argwhere(sl != 0):
        key = tuple(sorted(int(j) for j in idx))
        coeffs[key] = coeffs.get(key, 0.0) + float(sl[tuple(idx)])
    return [(k, v) for k, v in sorted(coeffs.items()) if v != 0]


@dataclass(frozen=True)
class MipPoint:
    alpha: float
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z)
        if not np.all((z == 0) | (z == 1)):
            raise ValueError(f"z must be binary, got {z}")
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        object.__setattr__(self, "z", z.astype(int))


def build_mip(inst: TcpInstance, alpha_hi: float = math.inf) -> MipModel:
    return MipModel(inst, alpha_hi)


def check_mip_feasible(model: MipModel, p: MipPoint, tol: float) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    n = model.instance.dim
    if p.y.shape != (n,) or p.z.shape != (n,):
        raise ValueError("point dimension does not match model")
    if p.alpha < -tol or p.alpha > model.alpha_hi + tol:
        return False
    alpha = max(p.alpha, 0.0)
    g = model.constraint_values(alpha, p.y)
    return bool(
        np.all(g >= -tol)
        and np.all(g <= 1 - p.z + tol)
        and np.all(p.y >= -tol)
        and np.all(p.y <= p.z + tol)
    )


def recover_solution(p: MipPoint) -> np.ndarray:
    """``y / alpha``; the caller verifies the result against the instance."""
    if not p.alpha > 0:
        raise ValueError("alpha = 0: no TCP solution is recoverable from this point")
    return p.y / p.alpha


def alpha_upper_bound(inst: TcpInstance) -> float:
    """``((1 + |A|_inf) / |q|_inf)^{1/(m-1)}``, valid for every feasible MIP point."""
    qn = float(np.abs(inst.q).max())
    if qn == 0:
        raise ValueError("alpha bound is undefined for q = 0")
    return ((1.0 + inf_norm(inst.A)) / qn) ** (1.0 / (inst.order - 1))


def max_alpha_on_ray(inst: TcpInstance, x, alpha_hi: float = math.inf) -> float:
    """Largest ``alpha`` for which ``(alpha, alpha x, support(x))`` stays feasible.

    Limited by ``alpha x_i <= 1`` on the support, by
    ``alpha^{m-1} w_i <= 1`` off it, and by ``alpha_hi``.
    """
    x = np.asarray(x, dtype=float)
    m = inst.order
    w = inst.w(x)
    support = x > 0
    cap = alpha_hi
    if np.any(support):
        cap = min(cap, 1.0 / float(x[support].max()))
    off = (~support) & (w > 0)
    if np.any(off):
        cap = min(cap, float(w[off].max()) ** (-1.0 / (m - 1)))
    if math.isinf(cap):
        raise ValueError("alpha is unbounded along this ray; pass a finite alpha_hi")
    return cap


class CertVariant(enum.Enum):
    RELAXED = "Relaxed7"
    EXACT = "Exact8"


@dataclass(frozen=True)
class FeasCertificate:
    tau: float
    x: np.ndarray
    u: np.ndarray
    variant: CertVariant = CertVariant.EXACT

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "u", np.asarray(self.u, dtype=float))


def _x_cap_factor(tau: float, m: int) -> float:
    # tau^{(m-2)/(1-m)}; exactly 1 when m == 2
    if m == 2:
        return 1.0
    return math.exp(math.log(tau) * (m - 2) / (1 - m))


def check_certificate(inst: TcpInstance, c: FeasCertificate, tol: float) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    n, m = inst.dim, inst.order
    if c.x.shape != (n,) or c.u.shape != (n,):
        raise ValueError("certificate dimension does not match instance")
    if c.tau < 1 - tol:
        return False
    tau = max(c.tau, 1.0)
    w = inst.w(c.x)
    ok = (
        np.all(w >= -tol)
        and np.all(w <= tau - c.u + tol)
        and np.all(c.x >= -tol)
        and np.all(c.x <= _x_cap_factor(tau, m) * c.u + tol)
        and np.all(c.u >= -tol)
        and np.all(c.u <= tau + tol)
    )
    if ok and c.variant is CertVariant.EXACT:
        ok = np.all((np.abs(c.u) <= tol) | (np.abs(c.u - tau) <= tol))
    return bool(ok)


def certificate_from_solution(
    inst: TcpInstance, x, tol: float = 1e-8, check_tol: float = 1e-8
) -> FeasCertificate:
    """Build an exact certificate from a verified TCP solution.

    Scales the solution onto a MIP point with
    ``alpha = min(1, 1/(1+|x|_inf), max feasible alpha on the ray)`` and maps
    it through ``tau = alpha^{1-m}``, ``u = tau z``.
    """
    x = np.asarray(x, dtype=float)
    if not verify(inst, x, tol):
        raise ValueError("x is not a TCP solution within tolerance")
    m = inst.order
    x = np.maximum(x, 0.0)
    alpha = min(1.0, 1.0 / (1.0 + float(np.abs(x).max())), max_alpha_on_ray(inst, x, 1.0))
    tau = alpha ** (1 - m)
    u = np.where(x > 0, tau, 0.0)
    cert = FeasCertificate(tau=tau, x=x, u=u, variant=CertVariant.EXACT)
    if not check_certificate(inst, cert, check_tol):
        raise ValueError("constructed certificate failed its own check")
    return cert
