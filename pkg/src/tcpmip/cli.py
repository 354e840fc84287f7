"""Command-line entry point: ``tcpmip {solve,verify,bound,gen,bench}``."""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import instances
from .bench import DEFAULT_SLICES, reports_json, run_bench
from .model import residuals, verify
from .solver import SolverConfig, SolveStatus, solve
from .spectral import default_resolution, grid_oracle, lambda_min, solution_norm_bound

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NO_SOLUTION = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64
EXIT_FILE = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _load(path: str):
    try:
        return instances.read_instance(path)
    except OSError as e:
        print(f"error: cannot read {path}: {e.strerror or e}", file=sys.stderr)
        raise SystemExit(EXIT_FILE)
    except instances.InstanceFormatError as e:
        print(f"error: {path}: {e}", file=sys.stderr)
        raise SystemExit(EXIT_FILE)


def _vec(v) -> str:
    return "(" + ", ".join(f"{float(c):.10g}" for c in v) + ")"


def cmd_solve(args) -> int:
    inst = _load(args.file)
    cfg = SolverConfig(tol=args.tol, seed=args.seed, alpha_slices=args.alpha_slices)
    if args.max_patterns is not None:
        cfg.max_patterns = args.max_patterns
    out = solve(inst, cfg)
    print(f"status: {out.status.value}")
    print(f"patterns explored: {out.patterns_explored}")
    if out.notes:
        print(f"notes: {out.notes}")
    for k, s in enumerate(out.solutions, start=1):
        r = s.residuals
        print(f"solution {k}: x = {_vec(s.x)}  support = {s.pattern}  "
              f"min_w = {r.min_w:.3g}  gap = {r.gap:.3g}")
    for a, p in out.mip_rows:
        label = "inf" if math.isinf(a) else f"{a:g}"
        print(f"alpha <= {label}: alpha* = {p.alpha:.7f}  y* = {_vec(p.y)}  z* = {tuple(int(b) for b in p.z)}")
    if out.status is SolveStatus.SOLUTIONS_FOUND:
        return EXIT_OK
    if out.status is SolveStatus.NO_SOLUTION_CERTIFIED:
        print("no solution (certified by pattern exhaustion)")
        return EXIT_NO_SOLUTION
    if out.status is SolveStatus.INFEASIBLE:
        print("no solution (certified by the diagonal closed form)")
        return EXIT_NO_SOLUTION
    print("no solution found (not certified)")
    return EXIT_NUMERIC


def cmd_verify(args) -> int:
    inst = _load(args.file)
    x = np.asarray(args.x)
    if x.shape != (inst.dim,):
        print(f"error: --x has {x.size} entries, instance dim is {inst.dim}", file=sys.stderr)
        return EXIT_USAGE
    r = residuals(inst, x)
    ok = verify(inst, x, args.tol)
    print(f"min_x = {r.min_x:.6g}\nmin_w = {r.min_w:.6g}\ngap = {r.gap:.6g}")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bound(args) -> int:
    inst = _load(args.file)
    res = args.resolution or default_resolution(inst.dim)
    try:
        est = lambda_min(inst.A)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    print(f"lambda_min (projected gradient) = {est.lam:.10g}  converged = {est.converged}")
    if inst.dim <= 3:
        print(f"lambda_min (grid, resolution {res}) = {grid_oracle(inst.A, res)[0].lam:.10g}")
    try:
        radius = solution_norm_bound(inst, res)
    except ValueError as e:
        print(f"bound not available: {e}")
        return EXIT_FAIL
    print(f"solution norm bound = {radius:.10g}")
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        inst = instances.gen_random(args.order, args.dim, args.density, args.seed, args.kind)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = instances.write_instance(inst)
    if args.output in (None, "-"):
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(args.output).write_text(text)
    except OSError as e:
        print(f"error: cannot write {args.output}: {e.strerror or e}", file=sys.stderr)
        return EXIT_FILE
    return EXIT_OK


def cmd_bench(args) -> int:
    if not args.paper_examples:
        print("error: bench currently needs --paper-examples", file=sys.stderr)
        return EXIT_USAGE
    examples = instances.paper_examples()
    reports = run_bench(examples, args.alpha_slices or DEFAULT_SLICES)
    for r in reports:
        print(r.format())
        print()
    if args.out:
        out = Path(args.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for name, inst in examples.items():
                instances.save_instance(inst, out / f"{name}.tcp")
            (out / "bench.json").write_text(reports_json(reports))
            (out / "bench.txt").write_text("\n\n".join(r.format() for r in reports) + "\n")
        except OSError as e:
            print(f"error: cannot write to {out}: {e.strerror or e}", file=sys.stderr)
            return EXIT_FILE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tcpmip", description="Tensor complementarity problems via support search.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("solve", help="find all solutions of an instance")
    s.add_argument("file")
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--max-patterns", type=int)
    s.add_argument("--alpha-slices", type=_floats, help="comma-separated alpha upper bounds (inf allowed)")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", help="check a candidate solution")
    s.add_argument("file")
    s.add_argument("--x", type=_floats, required=True)
    s.add_argument("--tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bound", help="smallest Z-eigenvalue and solution-norm bound")
    s.add_argument("file")
    s.add_argument("--resolution", type=int)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("gen", help="write a random instance")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--density", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--kind", choices=instances.KINDS, default="general")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="alpha-range tables for the worked examples")
    s.add_argument("--paper-examples", action="store_true")
    s.add_argument("--alpha-slices", type=_floats)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
