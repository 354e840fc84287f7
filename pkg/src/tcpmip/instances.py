"""Instance text format, random generators and the three worked examples.

File layout (``#`` lines are comments and may appear anywhere)::

    tcp 1
    order <m>
    dim <n>
    tensor <nnz>
    <i1> ... <im> <value>      # nnz lines, 1-based, duplicates sum
    q
    <q1> ... <qn>
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .model import TcpInstance
from .spectral import default_resolution, grid_error_bound, grid_oracle
from .tensor import Tensor, symmetrize

MAGIC = "tcp"
VERSION = 1
KINDS = ("general", "symmetric", "diagonal_pd", "symmetric_pd")


class InstanceFormatError(ValueError):
    def __init__(self, lineno: int | None, msg: str):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + msg)


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def write_instance(inst: TcpInstance) -> str:
    coo = inst.A.coo()
    lines = [f"{MAGIC} {VERSION}", f"order {inst.order}", f"dim {inst.dim}", f"tensor {len(coo)}"]
    for idx, v in coo:
        lines.append(" ".join(str(i) for i in idx) + " " + _fmt(v))
    lines.append("q")
    lines.append(" ".join(_fmt(v) for v in inst.q))
    return "\n".join(lines) + "\n"


def parse_instance(text: str, name: str = "") -> TcpInstance:
    rows = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    it = iter(rows)

    def next_row(what: str) -> tuple[int, list[str]]:
        try:
            no, line = next(it)
        except StopIteration:
            raise InstanceFormatError(rows[-1][0] if rows else None, f"unexpected end of file, expected {what}")
        return no, line.split()

    def keyword_int(kw: str, lo: int) -> int:
        no, tok = next_row(f"'{kw} <int>'")
        if len(tok) != 2 or tok[0] != kw:
            raise InstanceFormatError(no, f"expected '{kw} <int>', got {' '.join(tok)!r}")
        try:
            val = int(tok[1])
        except ValueError:
            raise InstanceFormatError(no, f"'{kw}' needs an integer, got {tok[1]!r}")
        if val < lo:
            raise InstanceFormatError(no, f"'{kw}' must be >= {lo}, got {val}")
        return val

    no, tok = next_row("header")
    if tok != [MAGIC, str(VERSION)]:
        raise InstanceFormatError(no, f"bad header {' '.join(tok)!r}, expected '{MAGIC} {VERSION}'")
    m = keyword_int("order", 2)
    n = keyword_int("dim", 1)
    nnz = keyword_int("tensor", 0)

    data = np.zeros((n,) * m)
    for _ in range(nnz):
        no, tok = next_row("tensor entry")
        if len(tok) != m + 1:
            raise InstanceFormatError(no, f"tensor entry needs {m} indices and a value, got {len(tok)} fields")
        try:
            idx = tuple(int(t) for t in tok[:m])
            val = float(tok[m])
        except ValueError:
            raise InstanceFormatError(no, f"malformed tensor entry {' '.join(tok)!r}")
        if any(i < 1 or i > n for i in idx):
            raise InstanceFormatError(no, f"index {idx} out of range 1..{n}")
        data[tuple(i - 1 for i in idx)] += val

    no, tok = next_row("'q'")
    if tok != ["q"]:
        raise InstanceFormatError(no, f"expected 'q', got {' '.join(tok)!r}")
    no, tok = next_row("q values")
    if len(tok) != n:
        raise InstanceFormatError(no, f"q has {len(tok)} entries, expected {n}")
    try:
        q = [float(t) for t in tok]
    except ValueError:
        raise InstanceFormatError(no, f"malformed q line {' '.join(tok)!r}")
    extra = next(it, None)
    if extra is not None:
        raise InstanceFormatError(extra[0], "trailing content after q")
    return TcpInstance(Tensor(data), q, name=name)


def read_instance(path) -> TcpInstance:
    path = Path(path)
    return parse_instance(path.read_text(), name=path.stem)


def save_instance(inst: TcpInstance, path) -> None:
    Path(path).write_text(write_instance(inst))


def gen_random(order: int, dim: int, density: float = 1.0, seed: int = 0, kind: str = "general") -> TcpInstance:
    """Seeded random instance; ``q`` is uniform on ``[-1, 1]^n``.

    ``symmetric_pd`` adds a multiple of the diagonal identity to a random
    symmetric tensor until the grid oracle proves the smallest Z-eigenvalue
    positive, so it needs even order and ``dim <= 3``.
    """
    if order < 2 or dim < 1:
        raise ValueError("order must be >= 2 and dim >= 1")
    if not 0 < density <= 1:
        raise ValueError(f"density must lie in (0, 1], got {density}")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    if kind == "symmetric_pd" and (dim > 3 or order % 2):
        raise ValueError("symmetric_pd needs even order and dim <= 3 (grid certification)")
    rng = np.random.default_rng(seed)
    shape = (dim,) * order

    if kind == "diagonal_pd":
        A = Tensor.diagonal(order, 1.0 - rng.random(dim))
    else:
        vals = rng.uniform(-1.0, 1.0, size=shape) * (rng.random(shape) < density)
        A = Tensor(vals)
        if kind in ("symmetric", "symmetric_pd"):
            A = symmetrize(A)
    q = rng.uniform(-1.0, 1.0, size=dim)

    if kind == "symmetric_pd":
        eye = Tensor.diagonal(order, np.ones(dim))
        res = default_resolution(dim)
        c = 0.0
        for _ in range(60):
            cand = A + eye * c
            lo = grid_oracle(cand, res)[0].lam
            if lo - grid_error_bound(cand, res) > 0:
                A = cand
                break
            c = 2 * c if c else 0.5
        else:
            raise ValueError("could not certify positive definiteness on the grid")
    return TcpInstance(A, q, name=f"{kind}-m{order}-n{dim}-s{seed}")


def example1() -> TcpInstance:
    A = Tensor.from_coo(3, 2, [((1, 1, 1), 1), ((1, 2, 2), -1), ((2, 1, 1), -2), ((2, 2, 2), 1)])
    return TcpInstance(A, [2, 2], name="ex1")


def example2() -> TcpInstance:
    A = Tensor.from_coo(3, 2, [((1, 2, 2), -2), ((2, 1, 1), -1)])
    return TcpInstance(A, [-2, -3], name="ex2")


def example3() -> TcpInstance:
    A = Tensor.from_coo(
        4, 2, [((1, 1, 1, 1), 1), ((1, 1, 1, 2), -2), ((1, 1, 2, 2), 1), ((2, 2, 2, 2), 1)]
    )
    return TcpInstance(A, [0, -1], name="ex3")


def paper_examples() -> dict[str, TcpInstance]:
    return {"ex1": example1(), "ex2": example2(), "ex3": example3()}
