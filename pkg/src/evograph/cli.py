"""Command-line entry point: ``evograph <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 parse error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .analysis import (
    DEFAULT_MAX_CYCLES,
    DEFAULT_MAX_N,
    build_state_map,
    describe_set,
    enumerate_attractors,
    fixed_points,
)
from .dynamics import CapacityError, System, UpdateOrder, parse_config, simulate, state_str
from .game import GameError, PayoffParams, UtilityKind, _fmt, classify, normalize, parse_rational
from .graph import Graph6Error, GraphError, parse_graph_source
from .theorems import (
    CODE_LEGEND,
    Sweep,
    TheoremError,
    grid_axis,
    normalized_grid,
    parse_range,
    region_code_exact,
    region_code_predicted,
    resolve_theorem,
    verify_theorem,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAPACITY = 0, 1, 2, 3


class ParseError(ValueError):
    pass


def _grid(text: str) -> tuple[int, int]:
    try:
        r, c = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise ParseError(f"grid must look like 20x20, got {text!r}") from None
    if r < 1 or c < 1:
        raise ParseError("grid resolution must be positive")
    return r, c


def _interval(text: str) -> tuple[Fraction, Fraction]:
    try:
        lo, hi = text.split(":")
        lo, hi = parse_rational(lo), parse_rational(hi)
    except (ValueError, GameError):
        raise ParseError(f"interval must look like lo:hi, got {text!r}") from None
    if not lo < hi:
        raise ParseError(f"empty interval {text!r}")
    return lo, hi


def _system(args) -> System:
    graph = parse_graph_source(args.graph)
    params = PayoffParams.parse(args.params)
    order = UpdateOrder.parse(args.order, graph.n)
    return System.build(graph, params, args.utility, args.rule, order)


def _add_run_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--graph", required=True, help="kN, cN, wL or g6:<string>")
    sp.add_argument("--params", required=True, help="a,b,c,d as decimals or fractions")
    sp.add_argument("--utility", default="aggregate", choices=[k.value for k in UtilityKind])
    sp.add_argument("--rule", default="imitation", choices=["imitation", "death-birth", "birth-death"])
    sp.add_argument("--order", default="sync", help="sync, seq or blocks:<set;set;...>")


# -- commands -----------------------------------------------------------------------

def cmd_simulate(args, out) -> int:
    system = _system(args)
    x = parse_config(args.init, system.n)
    traj = simulate(system, x, args.horizon, args.t0)
    if args.format == "records":
        for k, s in enumerate(traj.states):
            out.write(json.dumps({"t": traj.start_time + k, "state": state_str(s, system.n)}) + "\n")
    elif args.format == "csv":
        out.write("t,state\n")
        for k, s in enumerate(traj.states):
            out.write(f"{traj.start_time + k},{state_str(s, system.n)}\n")
    else:
        for line in traj.lines():
            out.write(line + "\n")
    tag = f"# {traj.tag} t={traj.stop_time}"
    if traj.tag == "CYCLE":
        tag += f" period={traj.period} start={traj.cycle_start}"
    if args.format == "records":
        out.write(json.dumps({"tag": traj.tag, "t": traj.stop_time, "period": traj.period,
                              "start": traj.cycle_start}) + "\n")
    else:
        out.write(tag + "\n")
    return EXIT_OK


def cmd_classify(args, out) -> int:
    p = PayoffParams.parse(args.params)
    cls = classify(p)
    out.write(f"params: {p}\n")
    if cls.admissible:
        out.write(f"scenario: {cls.scenario.value}\nadmissible: yes\n")
    else:
        out.write(f"scenario: NotAdmissible\nadmissible: no ({cls.reason})\n")
    if p.a != p.d:
        q = normalize(p)
        note = " (already normalized)" if q == p else ""
        out.write(f"normalized: {q}{note}\n")
        if cls.admissible:
            out.write(f"normalized scenario: {classify(q).scenario.value}\n")
    else:
        out.write("normalized: undefined (a = d)\n")
    return EXIT_OK


def _hex_sections(rep) -> list[list[str]]:
    return [[hex(s) for s in sorted(sec)] for sec in rep.sections.sections]


def cmd_attractors(args, out) -> int:
    system = _system(args)
    smap = build_state_map(system, max_n=args.max_n)
    summary = enumerate_attractors(smap, exhaustive=args.exhaustive, max_cycles=args.max_cycles)
    n = system.n
    cycles = smap.structure.cycles
    reports = summary.all_attractors if args.exhaustive else summary.minimal

    if args.format == "records":
        for k, r in enumerate(reports, 1):
            out.write(json.dumps({
                "type": "attractor", "index": k, "minimal": r.minimal, "trivial": r.trivial,
                "time_independent": r.sections.time_independent, "sections": _hex_sections(r),
                "basin_size": r.basin_size, "max_hitting_time": r.max_hitting_time,
                "cycle_lengths": r.cycle_lengths,
            }) + "\n")
        m = summary.maximal
        out.write(json.dumps({
            "type": "maximal_invariant_set", "trivial": True, "minimal": m.minimal,
            "time_independent": m.sections.time_independent, "sections": _hex_sections(m),
            "basin_size": m.basin_size, "max_hitting_time": m.max_hitting_time,
            "cycle_lengths": m.cycle_lengths,
        }) + "\n")
        return EXIT_OK

    out.write(f"# graph n={n} edges={len(system.game.graph.edges)} params={system.game.params} "
              f"utility={system.game.kind.value} rule={system.rule.value} "
              f"order={system.order.describe()} period={system.period}\n")
    lengths = sorted(len(c) for c in cycles)
    out.write(f"# cycles: {len(cycles)} (lengths {','.join(map(str, lengths[:40]))}"
              f"{',...' if len(lengths) > 40 else ''}); fixed configurations: {len(fixed_points(smap))}\n")
    nontrivial = [r for r in reports if not r.trivial]
    if not nontrivial:
        out.write("no nontrivial attractor\n")
    for k, r in enumerate(nontrivial, 1):
        flags = "minimal" if r.minimal else "non-minimal"
        out.write(f"attractor {k}: {flags}, {r.sections.size()} node(s), basin {r.basin_size}, "
                  f"max hitting time {r.max_hitting_time}, cycle lengths {r.cycle_lengths}\n")
        for line in describe_set(r.sections, n):
            out.write(line + "\n")
    m = summary.maximal
    out.write(f"maximal invariant set (trivial): {m.sections.size()} node(s), "
              f"cycle lengths {sorted(m.cycle_lengths)[:40]}\n")
    for line in describe_set(m.sections, n):
        out.write(line + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.params:
        points = [PayoffParams.parse(p) for p in args.params]
    else:
        rows, cols = _grid(args.grid)
        points = normalized_grid(rows, cols)
    sizes = parse_range(args.l if args.l else args.n) if (args.l or args.n) else ()
    graphs = [parse_graph_source(g) for g in args.graph]
    kinds = [UtilityKind(args.utility)] if args.utility else list(UtilityKind)
    sweep = Sweep(points, sizes, graphs, kinds, args.order)
    status = EXIT_OK
    for name in args.theorems:
        resolve_theorem(name)
        rep = verify_theorem(name, sweep)
        out.write(rep.summary() + "\n")
        for label, count in sorted(rep.checks.items()):
            out.write(f"  {label}: {count}\n")
        for f in rep.disagreements[:args.show]:
            out.write("  DISAGREE " + f.line() + "\n")
        if len(rep.disagreements) > args.show:
            out.write(f"  ... {len(rep.disagreements) - args.show} more\n")
        for f in rep.converse[:args.show]:
            out.write("  converse " + f.line() + "\n")
        if len(rep.converse) > args.show:
            out.write(f"  ... {len(rep.converse) - args.show} more converse\n")
        if not rep.passed:
            status = EXIT_FAIL
    return status


def _sweep_cell(job: tuple) -> tuple[int, int | None]:
    b, c, n, seq, exact = job
    p = PayoffParams(1, b, c, 0)
    predicted = region_code_predicted(p, n, seq)
    return predicted, (region_code_exact(p, n, seq) if exact else None)


def cmd_sweep(args, out) -> int:
    rows, cols = _grid(args.res)
    b_lo, b_hi = _interval(args.b)
    c_lo, c_hi = _interval(args.c)
    if args.order not in ("sync", "seq"):
        raise ParseError("sweep supports --order sync or seq")
    seq = args.order == "seq"
    if args.n < 3:
        raise ParseError("sweep needs n >= 3")
    if args.exact and args.n > args.max_n:
        raise CapacityError(f"--exact enumerates 2^{args.n} states; cap is n <= {args.max_n}")
    jobs = [(b, c, args.n, seq, args.exact)
            for b in grid_axis(b_lo, b_hi, rows) for c in grid_axis(c_lo, c_hi, cols)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_sweep_cell, jobs, chunksize=8))
    else:
        results = [_sweep_cell(j) for j in jobs]

    out.write(f"# sweep K_{args.n} order={args.order} a=1 d=0 b={args.b} c={args.c} "
              f"res={rows}x{cols} mode={'exact' if args.exact else 'predicate'}\n")
    for code, text in CODE_LEGEND.items():
        if code in (4, 5) and not seq:
            continue
        out.write(f"# code {code}: {text}\n")
    out.write("b,c,code\n")
    mismatches = 0
    for (b, c, *_), (predicted, exact) in zip(jobs, results):
        code = predicted if exact is None else exact
        if exact is not None and exact != predicted:
            mismatches += 1
            print(f"mismatch at b={_fmt(b)} c={_fmt(c)}: predicate {predicted}, brute force {exact}",
                  file=sys.stderr)
        out.write(f"{_fmt(b)},{_fmt(c)},{code}\n")
    return EXIT_FAIL if mismatches else EXIT_OK


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="evograph", description=(
        "Deterministic evolutionary games on graphs: simulation, attractors, "
        "theorem cross-checks and parameter sweeps."))
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="print a trajectory, one 0/1 line per step")
    _add_run_options(sp)
    sp.add_argument("--init", required=True, help="bit string, all-C, all-D, single-C@i, single-D@i")
    sp.add_argument("--horizon", type=int, default=100)
    sp.add_argument("--t0", type=int, default=0)
    sp.add_argument("--format", default="text", choices=["text", "records", "csv"])
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("classify", help="scenario, admissibility and normalized payoffs")
    sp.add_argument("params", help="a,b,c,d")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("attractors", help="enumerate attractors by brute force")
    _add_run_options(sp)
    sp.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    sp.add_argument("--exhaustive", action="store_true", help="list every attracting union of cycles")
    sp.add_argument("--max-cycles", type=int, default=DEFAULT_MAX_CYCLES)
    sp.add_argument("--format", default="text", choices=["text", "records"])
    sp.set_defaults(func=cmd_attractors)

    sp = sub.add_parser("verify", help="cross-check closed-form conditions against brute force")
    sp.add_argument("theorems", nargs="+", help="4.1 4.2 4.3 6.1 7.1 7.2 8.1 8.2 or descriptive names")
    sp.add_argument("--n", help="complete-graph sizes, e.g. 3..8")
    sp.add_argument("--l", help="wheel sizes, e.g. 4..10")
    sp.add_argument("--grid", default="20x20", help="(b,c) grid at a=1, d=0")
    sp.add_argument("--params", action="append", default=[], help="explicit parameter point (repeatable)")
    sp.add_argument("--graph", action="append", default=[], help="regular graph for 4.3 (repeatable)")
    sp.add_argument("--utility", choices=[k.value for k in UtilityKind], help="wheel utility (default both)")
    sp.add_argument("--order", action="append", default=[], help="non-omitting order for 6.1 (repeatable)")
    sp.add_argument("--show", type=int, default=10, help="findings to print per theorem")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="CSV grid of region codes over (b, c) at a=1, d=0")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--order", default="sync")
    sp.add_argument("--b", default="0:1", help="b interval lo:hi")
    sp.add_argument("--c", default="1:2", help="c interval lo:hi")
    sp.add_argument("--res", default="20x20", help="rows (b) x columns (c)")
    sp.add_argument("--exact", action="store_true", help="brute-force every cell and compare")
    sp.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes; output order is fixed")
    sp.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ParseError, GameError, GraphError, Graph6Error, TheoremError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
