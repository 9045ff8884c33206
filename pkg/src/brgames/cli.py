"""``brgames`` command line.

Exit codes: 0 ok, 2 usage, 3 data error, 4 size guard.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from . import closed_form
from .ensemble import DEFAULT_ENUM_CAP, enumerate_all_configurations, reference_values, sample_ensemble
from .game import GameError, best_response_map, fast_best_response_map
from .graph import SizeGuardError, build_full_graph, build_functional_graph, classify_graph, condense_psne, node_count
from .persist import (
    SchemaError,
    census_to_dict,
    classification_to_dict,
    emit_figure_data,
    estimate_to_dict,
    exact_record,
    fraction_str,
    read_game_document,
    render_float,
    write_dot,
)
from .spectral import MAX_KIRCHHOFF_NODES, spanning_tree_count, type_a_frequency_via_kirchhoff

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_SIZE = 0, 2, 3, 4
CAP_ENV = "BRGAMES_ENUM_CAP"


class UsageError(Exception):
    pass


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _fmt(x: Fraction) -> str:
    return f"{fraction_str(x)} ~ {render_float(x):.15g}"


def _parse_order(text):
    if text is None:
        return None
    try:
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"--order must be comma-separated player indices, got {text!r}") from None


def _parse_range(text, name):
    if text is None:
        return None
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--{name}-range must look like LO:HI, got {text!r}") from None
    if hi < lo:
        raise UsageError(f"--{name}-range is empty: {text!r}")
    return range(lo, hi + 1)


def cmd_analyze(args) -> int:
    doc = read_game_document(args.game)
    game = doc.game
    order = _parse_order(args.order)
    brm = best_response_map(game, args.atol) if args.atol > 0 else fast_best_response_map(game)
    fg = build_functional_graph(brm, order)
    c = classify_graph(fg)
    if args.dot:
        write_dot(fg, args.dot)
    payload = {"n": game.n, "m": game.m, "order": list(fg.order), **classification_to_dict(c, game.n, game.m)}
    lines = [
        f"game: n={game.n} m={game.m} order={','.join(map(str, fg.order))}",
        f"psne ({c.psne_count}): " + (", ".join(str(s) for s in c.psne) or "none"),
        "cycles: " + ", ".join(str(cy.length) for cy in c.cycles),
        f"convergent: {str(c.convergent).lower()}",
        f"type: {c.game_type.value}",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_exact(args) -> int:
    n, m = args.n, args.m
    p = closed_form.p1(n, m)
    payload = {"n": n, "m": m, "p1": exact_record(p)}
    lines = [f"p1({n},{m}) = {_fmt(p)}"]
    if args.k is not None:
        if n != 2:
            raise UsageError("--k is only available for n = 2")
        if args.k < 1:
            raise UsageError("--k must be >= 1")
        pk = closed_form.p2_k(m, args.k)
        payload["k"] = args.k
        payload["p2_k"] = exact_record(pk)
        lines.append(f"p2_k(m={m},k={args.k}) = {_fmt(pk)}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.z <= 0:
        raise UsageError("--z must be positive")
    est = sample_ensemble(args.n, args.m, args.trials, args.seed, z=args.z,
                          workers=args.threads, distribution=args.distribution)
    ref = reference_values(args.n, args.m)
    payload = estimate_to_dict(est, ref)
    lines = [f"sample n={est.n} m={est.m} trials={est.trials} seed={est.seed} z={est.z:g} redraws={est.redraws}"]
    for row in payload["rows"]:
        line = f"{row['label']:>5}  count={row['count']:<8d} est={row['estimate']:.6f}  [{row['lo']:.6f}, {row['hi']:.6f}]"
        if "exact" in row:
            verdict = "within" if row["within"] else "OUTSIDE"
            line += f"  exact={row['exact']} ({row['float']:.15g})  {verdict} {est.z:g}-sigma interval"
        lines.append(line)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    cap = args.cap if args.cap is not None else int(os.environ.get(CAP_ENV, DEFAULT_ENUM_CAP))
    census = enumerate_all_configurations(args.n, args.m, cap=cap)
    payload = census_to_dict(census)
    lines = [f"census n={census.n} m={census.m} total={census.total}"]
    for k, c in enumerate(census.convergent_counts(), start=1):
        lines.append(f"convergent k={k}: {c}  ({fraction_str(Fraction(c, census.total))})")
    lines.append(f"non-convergent: {census.non_convergent()}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_kirchhoff(args) -> int:
    n, m = args.n, args.m
    if node_count(n, m) > MAX_KIRCHHOFF_NODES:
        raise SizeGuardError(f"(n={n}, m={m}) needs {node_count(n, m)} nodes > {MAX_KIRCHHOFF_NODES}")
    trees = spanning_tree_count(condense_psne(build_full_graph(n, m), (0,) * n))
    p = type_a_frequency_via_kirchhoff(n, m)
    closed = closed_form.p1(n, m)
    payload = {"n": n, "m": m, "trees": trees, "p1": exact_record(p),
               "closed_form": exact_record(closed), "equal": p == closed}
    lines = [f"trees={trees}", f"p1={_fmt(p)}", f"closed form={_fmt(closed)}",
             f"equal={str(p == closed).lower()}"]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_figures(args) -> int:
    fig = f"fig{args.fig}"
    ranges = {}
    for name in ("n", "m", "k"):
        r = _parse_range(getattr(args, f"{name}_range"), name)
        if r is not None:
            ranges[f"{name}s"] = r
    try:
        series = emit_figure_data(fig, args.out, **ranges)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {"figure": fig, "rows": len(series.rows), "out": str(args.out)}
    _emit(args, payload, [f"{fig}: wrote {len(series.rows)} rows to {args.out}/{fig}.csv and {fig}.json"])
    return EXIT_OK


def cmd_crossover(args) -> int:
    m_star = closed_form.crossover_m()
    rows = []
    for m in (m_star - 1, m_star):
        a, b = closed_form.p1(2, m), closed_form.type_b_freq_2p(m)
        rows.append({"m": m, "type_a": exact_record(a), "type_b": exact_record(b),
                     "a_greater": a > b})
    payload = {"crossover_m": m_star, "comparisons": rows}
    lines = [f"m*={m_star}"]
    for r in rows:
        rel = ">" if r["a_greater"] else "<"
        lines.append(f"m={r['m']}: typeA {r['type_a']['exact']} ({r['type_a']['float']:.15g}) {rel} "
                     f"typeB {r['type_b']['exact']} ({r['type_b']['float']:.15g})")
    _emit(args, payload, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="brgames", description="Classify games under clockwork best-response dynamics")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    def nm(p):
        p.add_argument("n", type=int)
        p.add_argument("m", type=int)

    p = add("analyze", cmd_analyze, "PSNEs, cycles and type of a game file")
    p.add_argument("game")
    p.add_argument("--order", help="comma-separated turn order, default 0,1,...,n-1")
    p.add_argument("--dot", help="write the functional graph as DOT to this path")
    p.add_argument("--atol", type=float, default=0.0, help="treat payoffs within ATOL as tied")

    p = add("exact", cmd_exact, "closed-form frequencies")
    nm(p)
    p.add_argument("--k", type=int)

    p = add("sample", cmd_sample, "Monte Carlo estimate over random games")
    nm(p)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--z", type=float, default=3.0)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--distribution", choices=["normal", "uniform"], default="normal")

    p = add("enumerate", cmd_enumerate, "exact census of all best-response configurations")
    nm(p)
    p.add_argument("--cap", type=int, help=f"max configurations (default ${CAP_ENV} or {DEFAULT_ENUM_CAP})")

    p = add("kirchhoff", cmd_kirchhoff, "unique-PSNE frequency by spanning-tree counting")
    nm(p)

    p = add("figures", cmd_figures, "write figure data as CSV and JSON")
    p.add_argument("--fig", type=int, choices=[2, 3, 4], required=True)
    p.add_argument("--out", default="figures")
    p.add_argument("--n-range", help="LO:HI (fig 2)")
    p.add_argument("--m-range", help="LO:HI")
    p.add_argument("--k-range", help="LO:HI (figs 3, 4)")

    add("crossover", cmd_crossover, "where multi-PSNE 2-player games overtake unique-PSNE ones")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (GameError, SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
