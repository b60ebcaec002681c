"""Command-line front end: check, eliminate, bench and gen."""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .core import BudgetExceeded, Relation, Sat, TrackedSystem, Unknown, Unsat
from .fm import fm_eliminate
from .fmplex import fmplex_qe, render_provenance, render_row
from .generate import random_instance, worstcase_instance
from .oracle import check_constraints
from .parser import ELIMINATE, ParseError, emit_instance, emit_result, parse_file
from .search import fmplex_sat
from .solver import ALGORITHMS, check_core, check_instance_certificate, check_model, solve_constraints

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR = 0, 1, 2
CSV_COLUMNS = [
    "instance",
    "algorithm",
    "heuristic",
    "seed",
    "result",
    "time_ms",
    "generated_rows",
    "visited_systems",
    "max_depth",
    "backjumps",
]
INSTANCE_SUFFIXES = (".smt2", ".txt", ".lra")
SIGN_NAMES = {"minus": "minus", "plus": "plus", "auto": "auto"}


def _engine_args(p: argparse.ArgumentParser):
    p.add_argument("--heuristic", choices=["mfo", "mcl", "rand", "input"], default="mfo")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10**6, help="maximum number of generated rows")
    p.add_argument("--timeout", type=float, default=None, help="seconds")
    p.add_argument("--format", choices=["auto", "smt", "plain"], default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fmplex", description="Exact linear real arithmetic solving and elimination.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide satisfiability")
    p.add_argument("file")
    p.add_argument("--algorithm", choices=[a for a in ALGORITHMS if a != "oracle"], default="fmplex-c")
    _engine_args(p)
    p.add_argument("--stats", action="store_true")
    p.add_argument("--check-model", action="store_true")
    p.add_argument("--check-core", action="store_true")
    p.add_argument("--oracle", action="store_true", help="cross-check the answer by brute force (small inputs)")
    p.add_argument("--trace", action="store_true", help="print one line per visited FMplex system")

    p = sub.add_parser("eliminate", help="eliminate variables")
    p.add_argument("file")
    p.add_argument("--vars", default=None, help="comma separated elimination order")
    p.add_argument("--algorithm", choices=["fmplex", "fm"], default="fmplex")
    p.add_argument("--sign", choices=list(SIGN_NAMES), default="minus")
    p.add_argument("--provenance", action="store_true")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--format", choices=["auto", "smt", "plain"], default="auto")

    p = sub.add_parser("bench", help="run algorithms over a directory and print CSV")
    p.add_argument("dir")
    p.add_argument("--algorithm", default="fmplex-c", help="comma separated list")
    _engine_args(p)
    p.add_argument("--mode", choices=["auto", "check", "eliminate"], default="auto",
                   help="auto eliminates for instances with an elimination goal")
    p.add_argument("--order", choices=["default", "input"], default="default",
                   help="input: fm eliminates lowest index first, fmplex uses the input heuristic")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("gen", help="generate instances in plain format")
    p.add_argument("kind", choices=["random", "worstcase"])
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--coeff-range", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sat", choices=["yes", "no", "random"], default="random")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", default=None, help="directory to write files into instead of stdout")
    return parser


def _print_stats(stats, out):
    print(
        f"; generated_rows={stats.generated_rows} visited_systems={stats.visited_systems} "
        f"max_depth={stats.max_depth} backjumps={stats.backjumps}",
        file=out,
    )


def _fmt(args, path):
    if args.format != "auto":
        return args.format
    return "smt" if path.endswith(".smt2") else "plain"


def cmd_check(args, out, err) -> int:
    try:
        inst = parse_file(args.file, args.format)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR
    fmt = _fmt(args, args.file)
    if args.trace:
        return _check_with_trace(inst, args, out, err)
    outcome, stats = solve_constraints(
        inst.constraints, inst.n, args.algorithm, args.heuristic, args.seed, args.budget, args.timeout
    )
    print(emit_result(outcome, fmt, inst.variable_names), file=out)
    if args.stats:
        _print_stats(stats, out)
    status = EXIT_ERROR
    if isinstance(outcome, Sat):
        status = EXIT_SAT
        if args.check_model and not check_model(inst.constraints, outcome.model):
            print("error: model does not satisfy the input", file=err)
            return EXIT_ERROR
    elif isinstance(outcome, Unsat):
        status = EXIT_UNSAT
        if args.check_core:
            ok = check_core(inst.constraints, outcome.core, inst.n)
            if outcome.certificate is not None:
                ok = ok and check_instance_certificate(inst.constraints, outcome.certificate)
            if not ok:
                print("error: core is not a valid refutation", file=err)
                return EXIT_ERROR
    if args.oracle and status != EXIT_ERROR:
        expect = check_constraints(inst.constraints, inst.n)
        if isinstance(expect, Sat) != isinstance(outcome, Sat):
            print("error: oracle disagrees", file=err)
            return EXIT_ERROR
        print("; oracle agrees", file=out)
    return status


def _check_with_trace(inst, args, out, err) -> int:
    """Weak-only inputs: run the FMplex search directly and print its trace."""
    if not args.algorithm.startswith("fmplex"):
        print("error: --trace needs an fmplex algorithm", file=err)
        return EXIT_ERROR
    if any(c.relation is not Relation.LEQ for c in inst.constraints):
        print("error: --trace supports <= constraints only", file=err)
        return EXIT_ERROR
    system = TrackedSystem.from_constraints(inst.constraints, inst.n)
    trace = []
    outcome, stats = fmplex_sat(
        system, args.algorithm[-1].upper(), args.heuristic, args.seed, args.budget, args.timeout, trace
    )
    for entry in trace:
        print(f"; {entry}{' -> ' + entry.result if entry.result else ''}", file=out)
    print(emit_result(outcome, _fmt(args, args.file), inst.variable_names), file=out)
    if args.stats:
        _print_stats(stats, out)
    if isinstance(outcome, Sat):
        return EXIT_SAT
    return EXIT_UNSAT if isinstance(outcome, Unsat) else EXIT_ERROR


def _weak_system(inst) -> TrackedSystem:
    """Equalities as two rows; strict rows and disequalities are rejected."""
    rows = []
    for c in inst.constraints:
        if c.relation is Relation.LEQ:
            rows.append((c.coeffs, c.rhs))
        elif c.relation is Relation.EQ:
            rows.append((c.coeffs, c.rhs))
            rows.append((tuple(-a for a in c.coeffs), -c.rhs))
        else:
            raise ValueError("elimination supports <=, >= and = constraints only")
    return TrackedSystem.initial(rows, inst.n)


def cmd_eliminate(args, out, err) -> int:
    try:
        inst = parse_file(args.file, args.format)
        if args.vars:
            order = [inst.index(v.strip()) for v in args.vars.split(",") if v.strip()]
        elif inst.goal == ELIMINATE:
            order = list(inst.eliminate)
        else:
            raise ValueError("no variables to eliminate; use --vars")
        system = _weak_system(inst)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR
    names = inst.variable_names
    try:
        if args.algorithm == "fm":
            result, count = fm_eliminate(system, order, budget=args.budget)
            text = "(" + " and ".join(render_row(c, b, names) for c, b in result.rows) + ")" if result.rows else "true"
            print(text, file=out)
            if args.provenance:
                for (c, b), f in zip(result.rows, result.f_rows):
                    print(f"; {render_row(c, b, names)} from {render_provenance(f)}", file=out)
        else:
            qe = fmplex_qe(system, order, args.sign, budget=args.budget)
            count = qe.generated_rows
            print(qe.render(names), file=out)
            if args.provenance:
                for k, leaf in enumerate(qe.disjuncts(), 1):
                    parts = [f"{render_row(c, b, names)} from {render_provenance(f)}" for (c, b), f in zip(leaf.rows, leaf.f_rows)]
                    print(f"; disjunct {k}: " + ("; ".join(parts) if parts else "true"), file=out)
    except BudgetExceeded as exc:
        print(f"error: {exc.reason} exceeded", file=err)
        return EXIT_ERROR
    if args.stats:
        print(f"; generated_rows={count}", file=out)
    return EXIT_SAT


def _bench_one(path, algorithm, args):
    name = os.path.basename(path)
    heuristic = "input" if args.order == "input" else args.heuristic
    row = {"instance": name, "algorithm": algorithm, "heuristic": heuristic, "seed": args.seed}
    start = time.perf_counter()
    try:
        inst = parse_file(path, args.format)
        mode = args.mode
        if mode == "auto":
            mode = "eliminate" if inst.goal == ELIMINATE else "check"
        if mode == "eliminate":
            if algorithm not in ("fm", "fmplex-a"):
                raise ValueError("elimination runs with fm or fmplex-a only")
            system = _weak_system(inst)
            order = inst.eliminate or list(range(inst.n))
            if algorithm == "fm":
                _, count = fm_eliminate(system, order, budget=args.budget)
                depth = len(order)
                visited = len(order) + 1
            else:
                qe = fmplex_qe(system, order, "minus", budget=args.budget)
                count = qe.generated_rows
                depth = len(order)
                visited = _count_nodes(qe.root)
            row.update(result="eliminated", generated_rows=count, visited_systems=visited, max_depth=depth, backjumps=0)
        else:
            heuristic, extra = args.heuristic, {}
            if args.order == "input":
                heuristic = "input"
                if algorithm == "fm":
                    extra = {"order": "input"}
            outcome, stats = solve_constraints(
                inst.constraints, inst.n, algorithm, heuristic, args.seed, args.budget, args.timeout, **extra
            )
            result = "sat" if isinstance(outcome, Sat) else "unsat" if isinstance(outcome, Unsat) else "unknown"
            row.update(
                result=result,
                generated_rows=stats.generated_rows,
                visited_systems=stats.visited_systems,
                max_depth=stats.max_depth,
                backjumps=stats.backjumps,
            )
    except BudgetExceeded as exc:
        row.update(result="unknown", generated_rows="", visited_systems="", max_depth="", backjumps="")
        row["result"] = f"unknown:{exc.reason}"
    except Exception as exc:  # recorded in the CSV, the run continues
        msg = str(exc).replace(",", ";").replace("\n", " ")
        row.update(result=f"error:{msg}", generated_rows="", visited_systems="", max_depth="", backjumps="")
    row["time_ms"] = f"{(time.perf_counter() - start) * 1000:.1f}"
    return row


def _count_nodes(node) -> int:
    return 1 + sum(_count_nodes(c) for c in node.children)


def _natural(name):
    import re

    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def cmd_bench(args, out, err) -> int:
    if not os.path.isdir(args.dir):
        print(f"error: {args.dir} is not a directory", file=err)
        return EXIT_ERROR
    algorithms = [a.strip() for a in args.algorithm.split(",") if a.strip()]
    for a in algorithms:
        if a not in ALGORITHMS:
            print(f"error: unknown algorithm {a!r}", file=err)
            return EXIT_ERROR
    files = sorted((f for f in os.listdir(args.dir) if f.endswith(INSTANCE_SUFFIXES)), key=_natural)
    jobs = [(os.path.join(args.dir, f), a) for f in files for a in algorithms]
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        rows = list(pool.map(lambda job: _bench_one(job[0], job[1], args), jobs))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    out.write(buf.getvalue())
    return EXIT_SAT


def cmd_gen(args, out, err) -> int:
    try:
        if args.kind == "worstcase":
            texts = [(f"worstcase_{args.n}.txt", emit_instance(worstcase_instance(args.n)))]
        else:
            sat = {"yes": True, "no": False, "random": None}[args.sat]
            texts = []
            for k in range(args.count):
                seed = args.seed + k
                inst = random_instance(args.m, args.n, args.coeff_range, seed, sat)
                texts.append((f"random_m{args.m}_n{args.n}_s{seed}.txt", emit_instance(inst)))
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for name, text in texts:
            with open(os.path.join(args.out, name), "w", encoding="utf-8") as fh:
                fh.write(text)
    else:
        out.write("".join(texts[k][1] + ("\n" if k + 1 < len(texts) else "") for k in range(len(texts))))
    return EXIT_SAT


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"check": cmd_check, "eliminate": cmd_eliminate, "bench": cmd_bench, "gen": cmd_gen}[args.command]
    return handler(args, sys.stdout, sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
