"""Dense real tensors of order m and dimension n, and the products built on them."""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Sequence

import numpy as np


class Tensor:
    """An order-``m``, dimension-``n`` real tensor stored densely.

    Entries are held in an ``(n,) * m`` numpy array indexed from 0. External
    formats use 1-based indices; see :meth:`from_coo`.
    """

    __slots__ = ("_data",)

    def __init__(self, data: np.ndarray):
        arr = np.array(data, dtype=float)
        if arr.ndim < 2:
            raise ValueError(f"tensor order must be >= 2, got {arr.ndim}")
        n = arr.shape[0]
        if n < 1 or any(s != n for s in arr.shape):
            raise ValueError(f"tensor must be cubical, got shape {arr.shape}")
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def zeros(cls, order: int, dim: int) -> "Tensor":
        return cls(np.zeros((dim,) * order))

    @classmethod
    def from_coo(
        cls,
        order: int,
        dim: int,
        entries: Iterable[tuple[Sequence[int], float]],
    ) -> "Tensor":
        """Build from ``((i1, ..., im), value)`` pairs with 1-based indices.

        Repeated coordinates are summed; absent ones are zero.
        """
        if order < 2:
            raise ValueError(f"tensor order must be >= 2, got {order}")
        if dim < 1:
            raise ValueError(f"tensor dim must be >= 1, got {dim}")
        data = np.zeros((dim,) * order)
        for idx, value in entries:
            idx = tuple(int(i) for i in idx)
            if len(idx) != order:
                raise ValueError(f"index {idx} has {len(idx)} entries, expected {order}")
            if any(i < 1 or i > dim for i in idx):
                raise ValueError(f"index {idx} out of range 1..{dim}")
            data[tuple(i - 1 for i in idx)] += float(value)
        return cls(data)

    @classmethod
    def diagonal(cls, order: int, diag: Sequence[float]) -> "Tensor":
        diag = np.asarray(diag, dtype=float)
        n = diag.size
        data = np.zeros((n,) * order)
        for i in range(n):
            data[(i,) * order] = diag[i]
        return cls(data)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def order(self) -> int:
        return self._data.ndim

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def __getitem__(self, idx):
        return self._data[idx]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self):
        return hash((self._data.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"Tensor(order={self.order}, dim={self.dim}, nnz={np.count_nonzero(self._data)})"

    def __neg__(self) -> "Tensor":
        return Tensor(-self._data)

    def __add__(self, other: "Tensor") -> "Tensor":
        return Tensor(self._data + other._data)

    def __mul__(self, c: float) -> "Tensor":
        return Tensor(self._data * float(c))

    __rmul__ = __mul__

    def diag(self) -> np.ndarray:
        """The main diagonal ``a_{i...i}``."""
        idx = np.arange(self.dim)
        return self._data[(idx,) * self.order].copy()

    def coo(self) -> list[tuple[tuple[int, ...], float]]:
        """Nonzero entries as 1-based ``(index, value)`` pairs in C order."""
        nz = np.argwhere(self._data != 0)
        return [(tuple(int(i) + 1 for i in ix), float(self._data[tuple(ix)])) for ix in nz]


def _check_vec(A: Tensor, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (A.dim,):
        raise ValueError(f"vector of shape {x.shape} does not match tensor dim {A.dim}")
    return x


def apply_m1(A: Tensor, x) -> np.ndarray:
    """Return ``A x^{m-1}``, contracting every index but the first with ``x``."""
    x = _check_vec(A, x)
    out = A.data
    for _ in range(A.order - 1):
        out = out @ x
    return np.asarray(out, dtype=float)


def form(A: Tensor, x) -> float:
    """Return ``A x^m``."""
    x = _check_vec(A, x)
    return float(x @ apply_m1(A, x))


def jacobian_m1(A: Tensor, x) -> np.ndarray:
    """Jacobian of ``x -> A x^{m-1}``.

    Entry ``(i, j)`` sums the derivative over each of the ``m-1`` trailing
    index positions.
    """
    x = _check_vec(A, x)
    m, n = A.order, A.dim
    jac = np.zeros((n, n))
    for pos in range(1, m):
        # bring the differentiated axis to position 1, contract the rest
        t = np.moveaxis(A.data, pos, 1)
        for _ in range(m - 2):
            t = t @ x
        jac += t
    return jac


def inf_norm(A: Tensor) -> float:
    """Max over ``i`` of the absolute sum of slice ``A[i, ...]``."""
    return float(np.abs(A.data).reshape(A.dim, -1).sum(axis=1).max())


def is_diagonal(A: Tensor) -> bool:
    off = A.data.copy()
    idx = np.arange(A.dim)
    off[(idx,) * A.order] = 0.0
    return not np.any(off)


def symmetrize(A: Tensor, axes: Sequence[int] | None = None) -> Tensor:
    """Average ``A`` over all permutations of ``axes`` (default: all axes)."""
    m = A.order
    axes = list(range(m)) if axes is None else list(axes)
    acc = np.zeros_like(A.data)
    count = 0
    for perm in permutations(axes):
        full = list(range(m))
        for src, dst in zip(axes, perm):
            full[src] = dst
        acc += np.transpose(A.data, full)
        count += 1
    acc /= count
    # summation order differs per entry; copy the sorted-index representative so
    # the result is symmetric bit for bit
    idx = np.indices(acc.shape)
    idx[axes] = np.sort(idx[axes], axis=0)
    return Tensor(acc[tuple(idx)])


def is_symmetric(A: Tensor, tol: float = 0.0) -> bool:
    """True iff every entry equals its value at every index permutation."""
    # adjacent transpositions generate the symmetric group
    for k in range(A.order - 1):
        if np.any(np.abs(A.data - np.swapaxes(A.data, k, k + 1)) > tol):
            return False
    return True
