"""Command-line front end.

Exit codes: 0 success, 2 usage, 3 input error, 4 backend failure,
5 brute-force cap exceeded, 6 no world views (prob only), 1 harness
disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .backends import BackendConfig, ExternalBackend, InternalBackend, StackedBackend
from .bench import GenSpec, gen_random_3cnf, gen_random_elp, gen_scholarship, run_harness
from .decomp import build_td, make_nice, td_stats, validate_td
from .dp import RunStats, Thresholds, acceptance_probability, count_world_views
from .errors import (
    BackendError,
    BruteForceCapExceeded,
    NoWorldViews,
    ParseError,
    WvcountError,
)
from .graphs import epistemic_primal_graph, nested_primal_graph, primal_graph
from .model import EMPTY_WVI, mask_of
from .parser import parse_program, parse_query, program_to_text
from .semantics import (
    classify_atoms,
    cnf_to_elp,
    count_world_views_bruteforce,
    enumerate_world_views,
)


def _add_common(parser):
    parser.add_argument("--threshold-hybrid", type=int, default=45, metavar="N")
    parser.add_argument("--threshold-abstr", type=int, default=8, metavar="N")
    parser.add_argument("--max-depth", type=int, default=1, metavar="N")
    parser.add_argument(
        "--heuristic", choices=("min-fill", "min-degree"), default="min-fill"
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--backend", choices=("internal", "external"), default="internal")
    parser.add_argument("--external-cmd", default=None, metavar="CMD")
    parser.add_argument(
        "--external-parse", choices=("count", "sat"), default="count"
    )
    parser.add_argument("--external-timeout", type=float, default=60.0)
    parser.add_argument("--format", choices=("text", "structured"), default="text")
    parser.add_argument("--cap-atoms", type=int, default=24, metavar="N")
    parser.add_argument("--cap-epistemic", type=int, default=12, metavar="N")
    parser.add_argument(
        "--timings",
        action="store_true",
        help="include wall-clock time in structured output (not reproducible)",
    )


def _thresholds(args) -> Thresholds:
    return Thresholds(
        hybrid=args.threshold_hybrid,
        abstr=args.threshold_abstr,
        depth=args.max_depth,
        answer_cap=args.cap_atoms,
        wv_cap=args.cap_epistemic,
    )


def _backend(args, thresholds):
    internal = InternalBackend(thresholds.answer_cap, thresholds.wv_cap)
    if args.backend == "internal":
        return internal
    if not args.external_cmd:
        raise WvcountError("--backend external requires --external-cmd")
    config = BackendConfig(
        command=args.external_cmd,
        parse=args.external_parse,
        timeout=args.external_timeout,
    )
    return StackedBackend(ExternalBackend(config), internal)


def _load_program(path):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise ParseError("cannot read %s: %s" % (path, exc)) from exc
    return parse_program(text)


def _emit_result(args, stats: RunStats, seconds, count=None, probability=None):
    if args.format == "text":
        if probability is not None:
            print("%s (%.6f)" % (probability, float(probability)))
        else:
            print(count)
        return
    record = {
        "count": None if count is None else str(count),
        "probability": None
        if probability is None
        else {"num": probability.numerator, "den": probability.denominator},
        "widths": {"primal": stats.primal_width, "dp": stats.dp_width},
        "epistemic_atoms": stats.eats_size,
        "abstraction_size": stats.abstraction_size,
        "dp_nodes": stats.dp_nodes,
        "backend_calls": stats.backend_calls,
        "nested_calls": stats.nested_calls,
    }
    if args.timings:
        record["wall_time_s"] = round(seconds, 6)
    print(json.dumps(record, sort_keys=True))


def _cmd_count(args):
    program = _load_program(args.file)
    query = parse_query(args.query, program.atoms) if args.query else None
    thresholds = _thresholds(args)
    stats = RunStats()
    start = time.perf_counter()
    count = count_world_views(
        program,
        query=query,
        thresholds=thresholds,
        backend=_backend(args, thresholds),
        heuristic=args.heuristic,
        seed=args.seed,
        jobs=args.jobs,
        stats=stats,
    )
    _emit_result(args, stats, time.perf_counter() - start, count=count)
    return 0


def _cmd_prob(args):
    program = _load_program(args.file)
    query = parse_query(args.query, program.atoms)
    thresholds = _thresholds(args)
    stats = RunStats()
    start = time.perf_counter()
    probability = acceptance_probability(
        program,
        query,
        thresholds=thresholds,
        backend=_backend(args, thresholds),
        heuristic=args.heuristic,
        seed=args.seed,
        jobs=args.jobs,
        stats=stats,
    )
    _emit_result(args, stats, time.perf_counter() - start, probability=probability)
    return 0


def _cmd_wvs(args):
    program = _load_program(args.file)
    for wv in enumerate_world_views(program, args.cap_epistemic, args.cap_atoms):
        print(wv.text(program.atoms))
    return 0


def _cmd_oracle(args):
    program = _load_program(args.file)
    query = parse_query(args.query, program.atoms) if args.query else EMPTY_WVI
    print(
        count_world_views_bruteforce(
            program, query, args.cap_epistemic, args.cap_atoms
        )
    )
    return 0


def _cmd_graph(args):
    program = _load_program(args.file)
    if args.kind == "primal":
        graph = primal_graph(program)
    elif args.kind == "epistemic":
        graph = epistemic_primal_graph(program)
    else:
        info = classify_atoms(program)
        if args.abstraction:
            atoms = [a.strip() for a in args.abstraction.split(",") if a.strip()]
            mask = mask_of(program.atoms.id(a) for a in atoms)
        else:
            mask = info.eats_mask
        graph = nested_primal_graph(program, mask)
    sys.stdout.write(graph.to_dot(program.atoms, name=args.kind))
    return 0


def _cmd_td(args):
    program = _load_program(args.file)
    if args.graph == "primal":
        graph = primal_graph(program)
    elif args.graph == "epistemic":
        graph = epistemic_primal_graph(program)
    else:
        graph = nested_primal_graph(program, classify_atoms(program).eats_mask)
    td = build_td(graph, args.heuristic, args.seed)
    assert validate_td(graph, td)
    nice = make_nice(td)
    if args.dot:
        sys.stdout.write(
            nice.to_dot(
                name="td", vertex_label=lambda v: "%s^%s" % (program.atoms.name(v[0]), v[1])
            )
        )
    else:
        sys.stdout.write(td_stats(nice))
    return 0


def _cmd_gen(args):
    if args.family in ("classic", "large", "many"):
        mode = "classic" if args.family == "large" else args.family
        program = gen_scholarship(args.n, mode, args.seed)
    elif args.family == "random":
        program = gen_random_elp(args.atoms, args.epistemic, args.rules, args.seed)
    elif args.family == "random3cnf":
        clauses = gen_random_3cnf(args.vars, args.clauses, args.seed)
        program = cnf_to_elp(args.vars, clauses)
    else:  # pragma: no cover - argparse restricts choices
        raise WvcountError("unknown family")
    text = program_to_text(program)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_harness(args):
    with open(args.spec, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    specs = [GenSpec(**entry) for entry in raw.get("instances", [])]
    thresholds = _thresholds(args)
    report = run_harness(
        specs,
        thresholds=thresholds,
        oracle=raw.get("oracle", True) and not args.no_oracle,
        heuristic=args.heuristic,
        seed=args.seed,
        jobs=args.jobs,
    )
    sys.stdout.write(report.render(with_time=args.timings))
    return 1 if report.failures else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wvcount",
        description="Count world views of ground epistemic logic programs "
        "and answer probabilistic acceptance queries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="world-view count, optionally under a query")
    p.add_argument("file")
    p.add_argument("--query", default=None, metavar="L[,L...]")
    _add_common(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("prob", help="probability of a query holding in a world view")
    p.add_argument("file")
    p.add_argument("--query", required=True, metavar="L[,L...]")
    _add_common(p)
    p.set_defaults(func=_cmd_prob)

    p = sub.add_parser("wvs", help="list world views by brute force")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=_cmd_wvs)

    p = sub.add_parser("oracle", help="brute-force world-view count")
    p.add_argument("file")
    p.add_argument("--query", default=None, metavar="L[,L...]")
    _add_common(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("graph", help="export a program graph as DOT")
    p.add_argument("file")
    p.add_argument("--kind", choices=("primal", "epistemic", "nested"), required=True)
    p.add_argument("--abstraction", default=None, metavar="a,b,...")
    _add_common(p)
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("td", help="tree decomposition stats or DOT")
    p.add_argument("file")
    p.add_argument("--graph", choices=("primal", "epistemic", "nested"), required=True)
    p.add_argument("--dot", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_td)

    p = sub.add_parser("gen", help="generate a benchmark instance")
    p.add_argument("family", choices=("classic", "large", "many", "random", "random3cnf"))
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--atoms", type=int, default=6)
    p.add_argument("--epistemic", type=int, default=3)
    p.add_argument("--rules", type=int, default=8)
    p.add_argument("--vars", type=int, default=6)
    p.add_argument("--clauses", type=int, default=10)
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("harness", help="run a JSON instance spec and verify")
    p.add_argument("spec")
    p.add_argument("--no-oracle", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_harness)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 3
    except BruteForceCapExceeded as exc:
        print("cap exceeded: %s" % exc, file=sys.stderr)
        return 5
    except NoWorldViews as exc:
        print("no world views: %s" % exc, file=sys.stderr)
        return 6
    except BackendError as exc:
        print("backend failure: %s" % exc, file=sys.stderr)
        return 4
    except WvcountError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
