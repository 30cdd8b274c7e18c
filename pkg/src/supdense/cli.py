"""Command-line front end.

    supdense densest GRAPH [--matroid SPEC.json | --knapsack W.txt --k K | --closure ARCS.txt]
                           [--require 0,3,...] [--table] [--engine auto|flow|brute]
                           [--verify] [--trace] [--json]

Exit codes: 0 ok, 1 usage error, 2 infeasible instance, 3 input format error,
4 brute-force cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .closure import densest_closure, read_arcs
from .constrained import (
    KnapsackConstraint,
    den_combo_greedy,
    den_knapsack_greedy,
    den_m_greedy,
)
from .core import format_rational, read_graph, read_table
from .density import densest_subset, resolve_engine
from .errors import CapExceeded, DensityError, FormatError, InfeasibleInstance
from .matroid import read_matroid
from . import oracle

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_FORMAT, EXIT_CAP = 0, 1, 2, 3, 4

GUARANTEE = {
    "unconstrained": 1,
    "subset": 1,
    "closure": 1,
    "comatroid": 2,
    "combo": 2,
    "knapsack": 3,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="supdense", description="Densest-subset solvers for monotone supermodular functions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    d = sub.add_parser("densest", help="find a (near-)densest feasible subset")
    d.add_argument("instance", help="graph file ('n m' + edge lines) or, with --table, a value table")
    d.add_argument("--table", action="store_true", help="read INSTANCE as an explicit value table")
    d.add_argument("--matroid", metavar="SPEC.json", help="co-matroid constraint")
    d.add_argument("--knapsack", metavar="WEIGHTS.txt", help="knapsack-cover weights")
    d.add_argument("--k", type=int, help="knapsack-cover threshold")
    d.add_argument("--closure", metavar="ARCS.txt", help="dependency arcs 'a b' (a in S forces b)")
    d.add_argument("--require", metavar="IDS", help="comma-separated ids every solution must contain")
    d.add_argument("--engine", choices=["auto", "flow", "brute"], default="auto")
    d.add_argument("--verify", action="store_true", help="compare against the exhaustive oracle")
    d.add_argument("--trace", action="store_true", help="include the greedy chain")
    d.add_argument("--json", action="store_true", help="machine-readable report")
    d.add_argument("--seed", type=int, default=None, help="reserved for randomised utilities")
    return p


def read_weights(path, n: int) -> tuple[int, ...]:
    weights = [0] * n
    with open(path) as fh:
        for lineno, ln in enumerate(fh, 1):
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            parts = ln.split()
            if len(parts) != 2:
                raise FormatError("weight line must be 'id weight'", path, lineno)
            try:
                v, w = int(parts[0]), int(parts[1])
            except ValueError:
                raise FormatError("non-integer token", path, lineno) from None
            if not 0 <= v < n:
                raise FormatError(f"id {v} out of range 0..{n - 1}", path, lineno)
            if w < 0:
                raise FormatError("weights must be nonnegative", path, lineno)
            weights[v] = w
    return tuple(weights)


def _parse_ids(text: str, n: int) -> frozenset:
    try:
        ids = frozenset(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise FormatError(f"--require expects comma-separated integers, got {text!r}") from None
    bad = [v for v in ids if not 0 <= v < n]
    if bad:
        raise FormatError(f"--require id {bad[0]} out of range 0..{n - 1}")
    return ids


def _ids(s) -> list[int]:
    return sorted(s)


def _decimal(x: Fraction) -> str:
    return f"{float(x):.6f}"


def _trace_dict(trace) -> dict:
    return {
        "chain": [
            {"block": _ids(c.block), "prefix": _ids(c.prefix), "marginal_density": format_rational(c.marginal_density)}
            for c in trace.chain
        ],
        "augmented": [{"set": _ids(a.completed), "density": format_rational(a.density)} for a in trace.augmented],
        "chosen_index": trace.chosen_index,
    }


def solve(args) -> dict:
    """Run one instance and return the report (without ``wall_time``)."""
    f = read_table(args.instance) if args.table else read_graph(args.instance)
    n = f.n
    engine = resolve_engine(f, None if args.engine == "auto" else args.engine)
    if args.engine == "brute" and f.is_graph:
        print(f"warning: brute engine forced on a graph instance; cap checks apply (n={n})", file=sys.stderr)

    chosen = [x for x in ("matroid", "knapsack", "closure") if getattr(args, x)]
    if len(chosen) > 1:
        raise UsageError(f"choose at most one of --matroid/--knapsack/--closure, got {chosen}")
    if args.knapsack and args.k is None:
        raise UsageError("--knapsack needs --k")
    if args.k is not None and not args.knapsack:
        raise UsageError("--k needs --knapsack")
    required = _parse_ids(args.require, n) if args.require else None
    if required is not None and (args.knapsack or args.closure):
        raise UsageError("--require combines only with --matroid")

    trace = None
    if args.matroid:
        m = read_matroid(args.matroid, f.ground)
        if required is not None:
            variant = "combo"
            out = den_combo_greedy(f, m, required, engine)
            constraint = oracle.Combo(m, required)
        else:
            variant = "comatroid"
            out = den_m_greedy(f, m, engine)
            constraint = oracle.CoMatroid(m)
        result, trace = out.result, out.trace
    elif args.knapsack:
        if args.k < 0:
            raise UsageError("--k must be nonnegative")
        c = KnapsackConstraint(read_weights(args.knapsack, n), args.k)
        variant = "knapsack"
        out = den_knapsack_greedy(f, c, engine)
        result, trace = out.result, out.trace
        constraint = oracle.Knapsack(c)
    elif args.closure:
        dg = read_arcs(args.closure, f.ground)
        variant = "closure"
        result = densest_closure(f, dg, engine)
        constraint = oracle.Closure(dg)
    elif required is not None:
        variant = "subset"
        result = densest_subset(f, required, engine)
        constraint = oracle.SubsetConstraint(required)
    else:
        variant = "unconstrained"
        result = densest_subset(f, (), engine)
        constraint = oracle.Unconstrained()

    report = {
        "variant": variant,
        "engine": engine.value,
        "n": n,
        "best_set": {"ids": _ids(result.best_set), "labels": [f.ground.label(v) for v in _ids(result.best_set)]},
        "best_density": {"exact": format_rational(result.best_density), "decimal": _decimal(result.best_density)},
        "factor_certificate": None,
        "trace": None,
    }
    if args.verify:
        ref = oracle.brute_optimum(f, constraint)
        if result.best_density:
            ratio = ref.opt_density / result.best_density
        else:
            ratio = Fraction(1) if ref.opt_density == 0 else None
        report["factor_certificate"] = {
            "opt": format_rational(ref.opt_density),
            "opt_set": _ids(ref.opt_set),
            "ratio": None if ratio is None else format_rational(ratio),
            "ratio_decimal": None if ratio is None else _decimal(ratio),
            "guarantee": GUARANTEE[variant],
            "within_guarantee": ratio is not None and ratio <= GUARANTEE[variant],
        }
    if args.trace:
        if trace is not None:
            report["trace"] = _trace_dict(trace)
        else:
            report["trace"] = {"iterations": result.iterations}
    return report


def render_text(report: dict) -> str:
    lines = [
        f"variant:      {report['variant']}",
        f"engine:       {report['engine']}",
        f"best_set:     {{{', '.join(report['best_set']['labels'])}}}",
        f"best_density: {report['best_density']['exact']} ({report['best_density']['decimal']})",
    ]
    cert = report["factor_certificate"]
    if cert is not None:
        lines.append(
            f"verify:       opt {cert['opt']}, ratio {cert['ratio']} ({cert['ratio_decimal']}), "
            f"guarantee {cert['guarantee']}, {'ok' if cert['within_guarantee'] else 'VIOLATED'}"
        )
    tr = report["trace"]
    if tr is not None:
        if "chain" in tr:
            lines.append("trace:")
            for i, c in enumerate(tr["chain"], 1):
                lines.append(f"  H{i} = {c['block']}  D{i} = {c['prefix']}  marginal {c['marginal_density']}")
            for i, a in enumerate(tr["augmented"], 1):
                mark = " *" if i - 1 == tr["chosen_index"] else ""
                lines.append(f"  D'{i} = {a['set']}  density {a['density']}{mark}")
        else:
            lines.append(f"trace:        {tr['iterations']} parametric steps")
    lines.append(f"wall_time:    {report['wall_time']:.3f}s")
    return "\n".join(lines)


def run(argv=None) -> int:
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        report = solve(args)
    except UsageError as exc:
        print(f"supdense: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleInstance as exc:
        print(f"supdense: infeasible instance: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except FormatError as exc:
        print(f"supdense: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"supdense: format error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_FORMAT
    except CapExceeded as exc:
        print(f"supdense: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except DensityError as exc:
        print(f"supdense: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report["wall_time"] = round(time.perf_counter() - start, 6)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(render_text(report))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
