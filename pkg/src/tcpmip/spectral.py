"""Real Z-eigenpairs of symmetric tensors and the TCP solution-norm bound.

For symmetric ``A`` the extreme Z-eigenvalues are the extremes of ``A x^m``
over the unit sphere. Two routes estimate them: projected gradient with
multistart (any dimension) and a brute-force angular grid (``n <= 3``),
which serves as an independent check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import TcpInstance
from .tensor import Tensor, apply_m1, is_symmetric, jacobian_m1

PD_THRESHOLD = 1e-8


class Method(enum.Enum):
    PROJECTED_GRADIENT = "ProjectedGradient"
    GRID_ORACLE = "GridOracle"


@dataclass(frozen=True)
class SpectralEstimate:
    lam: float
    x: np.ndarray
    iterations: int
    converged: bool
    method: Method


@dataclass
class SpectralConfig:
    starts: int = 20
    max_iter: int = 2000
    gtol: float = 1e-7
    polish_tol: float = 1e-12
    seed: int = 0
    seed_resolution: int = 64


def zeig_check(A: Tensor, lam: float, x, tol: float) -> bool:
    x = np.asarray(x, dtype=float)
    r = apply_m1(A, x) - lam * x
    return bool(np.linalg.norm(r) <= tol and abs(x @ x - 1.0) <= tol)


def _require_symmetric(A: Tensor) -> None:
    if not is_symmetric(A, tol=1e-12):
        raise ValueError("Z-eigenvalue extremes need a symmetric tensor")


# -- grid oracle ------------------------------------------------------------


def _sphere_grid(n: int, resolution: int) -> np.ndarray:
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        t = 2 * np.pi * np.arange(resolution) / resolution
        return np.column_stack([np.cos(t), np.sin(t)])
    if n == 3:
        th = np.linspace(0.0, np.pi, resolution)
        ph = 2 * np.pi * np.arange(resolution) / resolution
        TH, PH = np.meshgrid(th, ph, indexing="ij")
        return np.column_stack(
            [(np.sin(TH) * np.cos(PH)).ravel(), (np.sin(TH) * np.sin(PH)).ravel(), np.cos(TH).ravel()]
        )
    raise ValueError(f"grid oracle supports dim <= 3, got {n}")


def _forms(A: Tensor, X: np.ndarray, chunk: int = 50000) -> np.ndarray:
    """``A x^m`` for every row ``x`` of ``X``."""
    n = A.dim
    out = np.empty(len(X))
    flat = A.data.reshape(n, -1)
    for s in range(0, len(X), chunk):
        Xc = X[s : s + chunk]
        V = Xc @ flat
        for _ in range(A.order - 1):
            V = (V.reshape(len(Xc), n, -1) * Xc[:, :, None]).sum(axis=1)
        out[s : s + chunk] = V.ravel()
    return out


def grid_error_bound(A: Tensor, resolution: int) -> float:
    """Worst-case gap between a grid extreme and the true extreme of ``A x^m``.

    Lipschitz constant ``m |A|_F`` on the sphere times the largest arc
    distance from any unit vector to the grid.
    """
    n = A.dim
    if n == 1:
        return 0.0
    if n == 2:
        reach = np.pi / resolution
    else:
        reach = 0.5 * np.pi / (resolution - 1) + np.pi / resolution
    return A.order * float(np.linalg.norm(A.data)) * reach


def grid_oracle(A: Tensor, resolution: int) -> tuple[SpectralEstimate, SpectralEstimate]:
    """(min, max) of ``A x^m`` over a uniform angular grid of the unit sphere."""
    _require_symmetric(A)
    X = _sphere_grid(A.dim, resolution)
    f = _forms(A, X)
    lo, hi = int(np.argmin(f)), int(np.argmax(f))
    return (
        SpectralEstimate(float(f[lo]), X[lo].copy(), len(X), True, Method.GRID_ORACLE),
        SpectralEstimate(float(f[hi]), X[hi].copy(), len(X), True, Method.GRID_ORACLE),
    )


# -- projected gradient -----------------------------------------------------


def _descend(A: Tensor, x0: np.ndarray, sign: float, cfg: SpectralConfig):
    """Minimize ``sign * A x^m`` on the sphere by gradient steps plus renormalization."""
    m = A.order
    x = x0 / np.linalg.norm(x0)
    g = sign * m * apply_m1(A, x)
    f = float(x @ g) / m
    t = 1.0 / (m * (1.0 + float(np.linalg.norm(A.data))))
    for it in range(1, cfg.max_iter + 1):
        rg = g - (x @ g) * x
        nrg = float(np.linalg.norm(rg))
        if nrg <= cfg.gtol:
            return x, f, it, True
        while True:
            xn = x - t * rg
            xn /= np.linalg.norm(xn)
            gn = sign * m * apply_m1(A, xn)
            fn = float(xn @ gn) / m
            if fn <= f - 1e-4 * t * nrg**2:
                break
            t *= 0.5
            if t < 1e-16:
                # no further decrease representable
                return x, f, it, nrg <= 1e3 * cfg.gtol
        x, g, f = xn, gn, fn
        t *= 2.0
    rg = g - (x @ g) * x
    return x, f, cfg.max_iter, float(np.linalg.norm(rg)) <= cfg.gtol


def _polish(A: Tensor, x: np.ndarray, cfg: SpectralConfig, max_iter: int = 20):
    """Newton on ``A x^{m-1} = lam x, x.x = 1`` from a nearby gradient-descent point.

    Returns the refined ``(lam, x)`` or None when Newton wanders off.
    """
    n = A.dim
    x0 = x.copy()
    lam = float(x @ apply_m1(A, x))
    for _ in range(max_iter):
        r = apply_m1(A, x) - lam * x
        c = 0.5 * (1.0 - x @ x)
        if np.linalg.norm(r) <= cfg.polish_tol and abs(c) <= cfg.polish_tol:
            break
        K = np.zeros((n + 1, n + 1))
        K[:n, :n] = jacobian_m1(A, x) - lam * np.eye(n)
        K[:n, n] = -x
        K[n, :n] = -x
        step = np.linalg.lstsq(K, -np.append(r, c), rcond=None)[0]
        x = x + step[:n]
        lam = lam + step[n]
    else:
        return None
    if np.linalg.norm(x - x0) > 1e-3:
        return None
    x = x / np.linalg.norm(x)
    return float(x @ apply_m1(A, x)), x


def _extreme(A: Tensor, sign: float, cfg: SpectralConfig) -> SpectralEstimate:
    _require_symmetric(A)
    n = A.dim
    rng = np.random.default_rng(cfg.seed)
    starts: list[np.ndarray] = []
    if n <= 3:
        X = _sphere_grid(n, cfg.seed_resolution)
        f = sign * _forms(A, X)
        starts.extend(X[np.argsort(f, kind="stable")[: cfg.starts // 2]])
    while len(starts) < cfg.starts:
        v = rng.standard_normal(n)
        starts.append(v / np.linalg.norm(v))
    best = None
    total = 0
    for x0 in starts:
        x, f, it, conv = _descend(A, x0, sign, cfg)
        total += it
        polished = _polish(A, x, cfg)
        if polished is not None and sign * polished[0] <= f + 1e-9:
            f, x = sign * polished[0], polished[1]
            conv = bool(np.linalg.norm(apply_m1(A, x) - polished[0] * x) <= 1e-9)
        cand = (f, tuple(np.round(x, 12)), x, conv)
        if best is None or cand[0] < best[0] - 1e-13 or (abs(cand[0] - best[0]) <= 1e-13 and cand[1] < best[1]):
            best = cand
    f, _, x, conv = best
    return SpectralEstimate(sign * f, x, total, conv, Method.PROJECTED_GRADIENT)


def lambda_min(A: Tensor, cfg: SpectralConfig | None = None) -> SpectralEstimate:
    """Smallest Z-eigenvalue, ``min A x^m`` over ``|x| = 1``."""
    return _extreme(A, 1.0, cfg or SpectralConfig())


def lambda_max(A: Tensor, cfg: SpectralConfig | None = None) -> SpectralEstimate:
    """Largest Z-eigenvalue, ``max A x^m`` over ``|x| = 1``."""
    return _extreme(A, -1.0, cfg or SpectralConfig())


def default_resolution(n: int) -> int:
    return 4096 if n <= 2 else 400


def min_z_eigenvalue(A: Tensor, resolution: int | None = None, cfg: SpectralConfig | None = None) -> float:
    """Best available estimate of the smallest Z-eigenvalue.

    Both routes evaluate ``A x^m`` at actual unit vectors, so each one
    over-estimates the minimum; the smaller of the two is kept.
    """
    lam = lambda_min(A, cfg).lam
    if A.dim <= 3:
        lam = min(lam, grid_oracle(A, resolution or default_resolution(A.dim))[0].lam)
    return lam


def solution_norm_bound(inst: TcpInstance, resolution: int | None = None,
                        cfg: SpectralConfig | None = None) -> float:
    """Radius ``(|q|_2 / lambda_min)^{1/(m-1)}`` of a ball holding every solution.

    Needs a symmetric positive definite tensor.
    """
    lam = min_z_eigenvalue(inst.A, resolution, cfg)
    if lam <= PD_THRESHOLD:
        raise ValueError(f"smallest Z-eigenvalue {lam:.3g} is not positive; bound does not apply")
    return (float(np.linalg.norm(inst.q)) / lam) ** (1.0 / (inst.order - 1))
