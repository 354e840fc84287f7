"""Alpha-range tables for the worked examples.

Each row fixes an upper bound on ``alpha``, reports the MIP optimum
``(alpha*, y*, z*)`` over all solutions found, and the TCP solution it maps
back to. A second block lists every solution's own best point per range.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .mip import MipPoint, build_mip, check_mip_feasible, recover_solution
from .model import TcpInstance
from .solver import SolveOutcome, SolverConfig, best_mip_point, mip_point_of, solve

DEFAULT_SLICES = (math.inf, 0.8, 0.6, 0.4, 0.2, 0.1)


@dataclass
class BenchRow:
    alpha_hi: float
    point: MipPoint
    x: Optional[np.ndarray]  # None: no TCP solution

    def range_label(self) -> str:
        return "0<=a" if math.isinf(self.alpha_hi) else f"0<=a<={self.alpha_hi:g}"

    def as_dict(self) -> dict:
        return {
            "range": None if math.isinf(self.alpha_hi) else self.alpha_hi,
            "alpha": self.point.alpha,
            "y": self.point.y.tolist(),
            "z": self.point.z.tolist(),
            "x": None if self.x is None else self.x.tolist(),
        }


@dataclass
class RunReport:
    name: str
    outcome: SolveOutcome
    rows: list[BenchRow] = field(default_factory=list)
    per_solution: list[list[BenchRow]] = field(default_factory=list)

    def check_rows(self, inst: TcpInstance, tol: float = 1e-7) -> bool:
        """Every emitted point is feasible for the model with its alpha range."""
        every = self.rows + [r for rows in self.per_solution for r in rows]
        return all(check_mip_feasible(build_mip(inst, r.alpha_hi), r.point, tol) for r in every)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.outcome.status.value,
            "solutions": [s.x.tolist() for s in self.outcome.solutions],
            "rows": [r.as_dict() for r in self.rows],
            "per_solution": [[r.as_dict() for r in rows] for rows in self.per_solution],
        }

    def format(self) -> str:
        out = [f"== {self.name}: {self.outcome.status.value} =="]
        out.append(_table(self.rows))
        for k, rows in enumerate(self.per_solution):
            out.append(f"-- solution {k + 1}: {_vec(self.outcome.solutions[k].x)}")
            out.append(_table(rows))
        return "\n".join(out)


def _vec(v) -> str:
    return "(" + ", ".join(f"{float(c):.7f}" for c in v) + ")"


def _table(rows: Sequence[BenchRow]) -> str:
    head = f"{'Range':<12} {'alpha*':>10}  {'y*':<26} {'z*':<8} SOL-TCP"
    lines = [head]
    for r in rows:
        z = "(" + ",".join(str(int(b)) for b in r.point.z) + ")"
        sol = "no" if r.x is None else _vec(r.x)
        lines.append(f"{r.range_label():<12} {r.point.alpha:>10.7f}  {_vec(r.point.y):<26} {z:<8} {sol}")
    return "\n".join(lines)


def _row(inst: TcpInstance, point: MipPoint, alpha_hi: float) -> BenchRow:
    x = recover_solution(point) if point.alpha > 0 else None
    return BenchRow(alpha_hi, point, x)


def run_instance(inst: TcpInstance, slices: Sequence[float] = DEFAULT_SLICES,
                 cfg: SolverConfig | None = None) -> RunReport:
    outcome = solve(inst, cfg or SolverConfig())
    xs = outcome.xs
    report = RunReport(inst.name, outcome)
    for a in slices:
        report.rows.append(_row(inst, best_mip_point(inst, xs, a), a))
    for x in xs:
        report.per_solution.append([_row(inst, mip_point_of(inst, x, a), a) for a in slices])
    return report


def run_bench(instances: dict[str, TcpInstance], slices: Sequence[float] = DEFAULT_SLICES) -> list[RunReport]:
    return [run_instance(inst, slices) for inst in instances.values()]


def reports_json(reports: Sequence[RunReport]) -> str:
    return json.dumps([r.as_dict() for r in reports], indent=2)
