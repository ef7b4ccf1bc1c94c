"""Command-line entry point.

Exit status: 0 on success, 1 when a check fails, 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .codes import CodeFormatError, format_code, iter_code_lines, parse_code
from .enumeration import enum_codes, pi2_candidates
from .geometry import PackingError, load_packing, verify_compact_patch
from .realize import Realizer
from .render import corona_svg, packing_svg
from .sets import (
    CodeSet,
    EssentialWitness,
    PreconditionError,
    WitnessError,
    bootstrap_ratio_check,
    check_essential_witness,
    is_fundamental,
    length_bound,
    search_essential_witness,
    shrink_essential,
)
from .solver import SolverConfig, TightSystem, residual, solve_tight

log = logging.getLogger("coronal")


class InputError(Exception):
    pass


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _code_set(args) -> CodeSet:
    lines = list(args.code or [])
    if args.codes:
        lines += Path(args.codes).read_text(encoding="utf-8").splitlines()
    codes = list(iter_code_lines(lines, args.n))
    if not codes:
        raise InputError("no codes given (use --codes FILE or --code TEXT)")
    return CodeSet(args.n, codes)


def _realizer(text: str) -> Realizer:
    """A realizer file of ``symbol value`` lines, or inline ``v0,v1,...``."""
    path = Path(text)
    if path.is_file():
        return Realizer.from_text(path.read_text(encoding="utf-8"))
    return Realizer([float(v) for v in text.split(",")])


def _config(args) -> SolverConfig:
    log.info("solver seed=%s jitter=%s jobs=%s", args.seed, args.jitter, args.jobs)
    return SolverConfig(tol=args.tol, max_iter=args.max_iter, grid=args.grid,
                        seed=args.seed, jitter=args.jitter, jobs=args.jobs)


def cmd_enum_codes(args) -> int:
    codes = enum_codes(args.n, args.center, args.max_len, args.min_len)
    _emit(args, "".join(format_code(x) + "\n" for x in codes))
    return 0


def cmd_solve(args) -> int:
    if args.n < 1:
        raise InputError("--n must be at least 1")
    system = TightSystem(_code_set(args))
    rep = solve_tight(system, _config(args))
    if args.format == "json":
        _emit(args, json.dumps(rep.to_dict(), indent=1) + "\n")
    else:
        head = ",".join(f"r{s}" for s in range(args.n)) + ",residual\n"
        rows = [rep.solution] if rep.solution is not None else rep.clusters
        body = ""
        for rho in rows:
            res = float(abs(residual(system, rho)).max())
            body += ",".join(repr(v) for v in rho.values.tolist()) + f",{res!r}\n"
        _emit(args, head + body)
    if rep.solution is None:
        print(f"no unique monotone solution ({rep.distinct_solutions_found} clusters, "
              f"ambiguous={rep.ambiguous})", file=sys.stderr)
        return 1
    return 0


def cmd_pi2(args) -> int:
    cands = pi2_candidates(args.max_len)
    if args.format == "json":
        data = [{"code": format_code(c.code), "r": c.r, "residual": c.residual} for c in cands]
        _emit(args, json.dumps(data, indent=1) + "\n")
    else:
        _emit(args, "code,r,residual\n" + "".join(c.csv_row() + "\n" for c in cands))
    return 0


def cmd_check_fundamental(args) -> int:
    ok = is_fundamental(_code_set(args))
    print("fundamental" if ok else "not fundamental")
    return 0 if ok else 1


def cmd_check_essential(args) -> int:
    C = _code_set(args)
    if bool(args.rho) != bool(args.sigma):
        raise InputError("--rho and --sigma must be given together")
    if args.rho:
        w = EssentialWitness.of(C, _realizer(args.rho), _realizer(args.sigma))
        ok = check_essential_witness(C, w, args.tol)
    else:
        if not is_fundamental(C):
            print(json.dumps({"essential": False, "reason": "not fundamental"}))
            return 1
        w = search_essential_witness(C, tol=args.tol)
        ok = w is not None
    out = {"essential": ok}
    if w is not None:
        out.update(rho=w.rho.values.tolist(), sigma=w.sigma.values.tolist(), slack=w.slack)
    elif not ok:
        out["reason"] = "no witness found (inconclusive)"
    _emit(args, json.dumps(out, indent=1) + "\n")
    return 0 if ok else 1


def cmd_shrink(args) -> int:
    C = _code_set(args)
    m = args.m if args.m is not None else C.n - 1
    _emit(args, "".join(format_code(x) + "\n" for x in shrink_essential(C, m)))
    return 0


def cmd_bootstrap(args) -> int:
    C = _code_set(args)
    ok = bootstrap_ratio_check(C, _realizer(args.rho), _realizer(args.sigma), args.tol)
    print("holds" if ok else "violated")
    return 0 if ok else 1


def cmd_length_bound(args) -> int:
    print(length_bound(args.n, args.kappa0))
    return 0


def cmd_verify(args) -> int:
    rep = verify_compact_patch(load_packing(args.packing), tol=args.tol)
    _emit(args, json.dumps(rep.to_dict(), indent=1) + "\n")
    return 0 if rep.ok else 1


def cmd_render_corona(args) -> int:
    x = parse_code(args.code, args.n)
    if args.rho:
        rho = _realizer(args.rho)
    else:
        rep = solve_tight(TightSystem(CodeSet(args.n, [x])), _config(args))
        if rep.solution is None and not rep.clusters:
            print("no tight realizer found; pass --rho", file=sys.stderr)
            return 1
        rho = rep.solution or rep.clusters[0]
    _emit(args, corona_svg(x, rho))
    return 0


def cmd_render_packing(args) -> int:
    p = load_packing(args.packing)
    _emit(args, packing_svg(p))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("-v", "--verbose", action="store_true")

    codes = argparse.ArgumentParser(add_help=False)
    codes.add_argument("--n", type=int, required=True, help="alphabet size")
    codes.add_argument("--codes", help="code list file, one code per line")
    codes.add_argument("--code", action="append", help="inline code, e.g. 0:22121")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--tol", type=float, default=1e-10)
    solver.add_argument("--max-iter", type=int, default=100)
    solver.add_argument("--grid", type=int, default=9)
    solver.add_argument("--jitter", type=float, default=0.0)

    parser = argparse.ArgumentParser(prog="coronal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enum-codes", parents=[common], help="list canonical codes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--center", type=int, default=0)
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--min-len", type=int, default=1)
    p.set_defaults(func=cmd_enum_codes)

    p = sub.add_parser("solve", parents=[common, codes, solver], help="tight realizer of a code set")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("pi2-candidates", parents=[common], help="two-size candidate radii")
    p.add_argument("--max-len", type=int, default=6)
    p.set_defaults(func=cmd_pi2)

    p = sub.add_parser("check-fundamental", parents=[common, codes])
    p.set_defaults(func=cmd_check_fundamental)

    p = sub.add_parser("check-essential", parents=[common, codes])
    p.add_argument("--rho", help="under-witness (file or v0,v1,...)")
    p.add_argument("--sigma", help="over-witness (file or v0,v1,...)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_check_essential)

    p = sub.add_parser("shrink", parents=[common, codes])
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_shrink)

    p = sub.add_parser("bootstrap-check", parents=[common, codes])
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("length-bound", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kappa0", type=float, default=1.0)
    p.set_defaults(func=cmd_length_bound)

    p = sub.add_parser("verify-packing", parents=[common])
    p.add_argument("packing")
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render-corona", parents=[common, solver])
    p.add_argument("--code", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho", help="realizer (file or v0,v1,...); solved if omitted")
    p.set_defaults(func=cmd_render_corona)

    p = sub.add_parser("render-packing", parents=[common])
    p.add_argument("packing")
    p.set_defaults(func=cmd_render_packing)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 2
    except (InputError, CodeFormatError, PackingError, WitnessError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
