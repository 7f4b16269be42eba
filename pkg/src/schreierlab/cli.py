"""
``sg``: command-line front end.

Exit codes: 0 success, 1 analysis-level failure (invalid graph, failed
approximation check), 2 parse error, 3 resource budget exceeded.
Exact rationals are written as ``"p/q"`` strings; floating values carry a
``_float`` suffix.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .boundary import (GrowthBoundParams, ball_ratios, boundary_ratios,
                       classify_conservativity, cogrowth_series, growth_bound,
                       srw_return_stats)
from .density import (BinaryField, density_profile, field_from_predicate,
                      predicate_from_name, tau_values)
from .errors import MonotonicityError, ParseError, ResourceLimitError, ValidationError
from .graph import PartialLabeledGraph, SchreierGraph, default_vertex_budget, validate
from .sgf import parse_sgf, write_sgf
from .sofic import (LocalStatistics, check_approximation, local_statistics, stitch,
                    tv_distance)
from .subgroups import SubgroupSpec, coset_enumerate, random_schreier
from .words import ReducedWord

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


def frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _read(path: str) -> bytes:
    return sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()


def _digest(*blobs: bytes) -> str:
    h = hashlib.sha256()
    for b in blobs:
        h.update(b)
    return h.hexdigest()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _report(args, command: str, digest: str, **sections) -> dict:
    report = {
        "tool": "schreierlab",
        "version": __version__,
        "command": command,
        "input_digest": digest,
        "budgets": {"vertices": args.budget_vertices,
                    "cosets": getattr(args, "budget_cosets", None)},
    }
    report.update(sections)
    return report


def _load_spec(blob: bytes) -> SubgroupSpec:
    try:
        return SubgroupSpec.from_json(blob.decode())
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad subgroup spec: {exc}") from None


def _load_source(blob: bytes, budget: int):
    """A subgroup spec (JSON) or an SGF graph, as a ball source."""
    if blob.lstrip().startswith(b"{"):
        return _load_spec(blob).source(budget)
    graph = parse_sgf(blob.decode())
    if not isinstance(graph, SchreierGraph):
        raise ParseError("input is a partial graph; stitch it first")
    return graph


def _load_graph(blob: bytes) -> SchreierGraph:
    graph = parse_sgf(blob.decode())
    if not isinstance(graph, SchreierGraph):
        raise ParseError("input is not a complete Schreier graph")
    return graph


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(args):
    graph = parse_sgf(_read(args.input).decode())
    problems = validate(graph)
    for p in problems:
        print(p)
    if not problems:
        print("ok")
    return EXIT_FAIL if problems else EXIT_OK


def cmd_sample(args):
    if args.random:
        graph = random_schreier(args.rank, args.vertices, args.seed)
    else:
        if not args.spec:
            raise ParseError("sample needs a spec file or --random")
        spec = _load_spec(_read(args.spec))
        src = spec.source(args.budget_vertices)
        if isinstance(src, SchreierGraph):
            graph = src
        else:
            graph = coset_enumerate(spec.rank, spec.words, args.budget_cosets)
    _emit(write_sgf(graph), args.out)
    return EXIT_OK


def cmd_cosets(args):
    spec = _load_spec(_read(args.spec))
    if spec.kind not in ("generators", "full", "trivial"):
        raise ParseError("cosets needs a generators spec")
    words = spec.words if spec.kind == "generators" else []
    if spec.kind == "full":
        words = [ReducedWord((2 * i,), spec.rank) for i in range(spec.rank)]
    graph = coset_enumerate(spec.rank, words, args.budget_cosets)
    _emit(write_sgf(graph), args.out)
    return EXIT_OK


def cmd_analyze(args):
    blob = _read(args.input)
    src = _load_source(blob, args.budget_vertices)
    rmax = args.rmax
    spheres = boundary_ratios(src, rmax)
    balls = ball_ratios(src, rmax)
    cls = classify_conservativity(src, rmax)
    cog = cogrowth_series(src, rmax)
    est = cls.delta_estimate
    report = _report(
        args, "analyze", _digest(blob), rmax=rmax,
        sphere_sizes=list(spheres.sizes),
        sphere_ratios=[frac(v) for v in spheres.values],
        ball_ratios=[frac(v) for v in balls.values],
        delta_estimate=frac(est.last),
        delta_bracket=[frac(est.bracket[0]), frac(est.bracket[1])],
        delta_slack=frac(est.slack),
        monotone_certificate=est.certificate,
        cogrowth={"counts": list(cog.counts), "cumulative": list(cog.cumulative),
                  "root_estimates_float": list(cog.root_estimates)},
        classification=cls.label,
    )
    _emit(_dump(report), args.out)
    return EXIT_OK


def cmd_stats(args):
    blob = _read(args.input)
    graph = _load_graph(blob)
    stats = local_statistics(graph, args.r)
    status = EXIT_OK
    extra = {}
    if args.reference:
        ref = LocalStatistics.from_json(json.loads(_read(args.reference)))
        check = check_approximation(stats, ref, Fraction(args.eps))
        extra["check"] = {
            "epsilon": args.eps,
            "passed": check.passed,
            "worst_discrepancy": frac(check.worst_discrepancy),
            "worst_key": check.worst_key.hex if check.worst_key else None,
        }
        if not check.passed:
            print(f"approximation check failed: discrepancy {frac(check.worst_discrepancy)}",
                  file=sys.stderr)
            status = EXIT_FAIL
    blobs = [blob] + ([_read(args.reference)] if args.reference else [])
    data = _report(args, "stats", _digest(*blobs))
    data.update(stats.to_json())
    data.update(extra)
    _emit(_dump(data), args.out)
    return status


def cmd_bsdist(args):
    blob_a, blob_b = _read(args.a), _read(args.b)
    a = local_statistics(_load_graph(blob_a), args.r)
    b = local_statistics(_load_graph(blob_b), args.r)
    report = _report(args, "bsdist", _digest(blob_a, blob_b), radius=args.r,
                     tv_distance=frac(tv_distance(a, b)))
    _emit(_dump(report), args.out)
    return EXIT_OK


def cmd_stitch(args):
    blob = _read(args.input)
    candidate = parse_sgf(blob.decode())
    if isinstance(candidate, SchreierGraph):
        candidate = PartialLabeledGraph.from_graph(candidate)
    graph, report = stitch(candidate)
    _emit(write_sgf(graph), args.out)
    if args.report:
        Path(args.report).write_text(_dump(_report(args, "stitch", _digest(blob),
                                                   stitch=report.to_json())))
    return EXIT_OK


def cmd_cogrowth(args):
    blob = _read(args.input)
    cog = cogrowth_series(_load_source(blob, args.budget_vertices), args.rmax)
    report = _report(args, "cogrowth", _digest(blob), rmax=args.rmax,
                     counts=list(cog.counts), cumulative=list(cog.cumulative),
                     root_estimates_float=list(cog.root_estimates))
    _emit(_dump(report), args.out)
    return EXIT_OK


def cmd_bound(args):
    params = GrowthBoundParams(args.n, args.k, args.eps, args.r, args.m)
    gb = growth_bound(params)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["m", "radius", "bound_float"])
            for m, b in enumerate(gb.bounds):
                w.writerow([m, args.r + m * params.ell, repr(b)])
    settings = {"n": args.n, "k": args.k, "ell": params.ell, "eps": args.eps,
                "r": args.r, "m": args.m}
    report = _report(args, "bound", _digest(json.dumps(settings, sort_keys=True).encode()),
                     params=settings, roots_float=list(gb.roots),
                     dominant_decay_float=gb.dominant_decay,
                     coefficients_float=list(gb.coefficients),
                     bounds_float=list(gb.bounds))
    _emit(_dump(report), args.out)
    return EXIT_OK


def cmd_walk(args):
    blob = _read(args.input)
    src = _load_source(blob, args.budget_vertices)
    ws = srw_return_stats(src, args.steps, args.trials, args.seed)
    report = _report(args, "walk", _digest(blob), steps=ws.steps, trials=ws.trials,
                     seed=ws.seed, returns=ws.returns, return_frequency_float=ws.frequency,
                     label=ws.label)
    _emit(_dump(report), args.out)
    return EXIT_OK


def cmd_density(args):
    blob = _read(args.input)
    graph, bits = parse_sgf(blob.decode(), with_field=True)
    if not isinstance(graph, SchreierGraph):
        raise ParseError("input is not a complete Schreier graph")
    if args.pred:
        field = field_from_predicate(graph, predicate_from_name(args.pred))
    elif bits is not None:
        field = BinaryField(graph, bits)
    else:
        raise ParseError("need --pred or a 'field' line in the SGF input")
    profile = density_profile(field, args.rmax)
    support = field.support
    tau_side = []
    for r in range(args.rmax + 1):
        values = tau_values(graph, r)
        tau_side.append(frac(sum((values[x] for x in support), Fraction(0)) / graph.vertex_count))
    report = _report(args, "density", _digest(blob), rmax=args.rmax,
                     predicate=args.pred, field=field.to_line(),
                     ones_fraction=frac(field.ones_fraction()),
                     mean_rho=[frac(v) for v in profile], tau_mass=tau_side)
    _emit(_dump(report), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-vertices", type=int, default=default_vertex_budget(),
                        help="vertex cap for ball extraction (env SG_BUDGET_VERTICES)")
    common.add_argument("--budget-cosets", type=int, default=10000)
    common.add_argument("--out", "-o", default=None)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="sg", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check an SGF file")
    s.add_argument("input")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("sample", parents=[common], help="emit a graph as SGF")
    s.add_argument("spec", nargs="?")
    s.add_argument("--random", action="store_true", help="uniform random permutations")
    s.add_argument("--rank", type=int, default=2)
    s.add_argument("--vertices", type=int, default=50)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("cosets", parents=[common], help="coset enumeration to SGF")
    s.add_argument("spec")
    s.set_defaults(func=cmd_cosets)

    s = sub.add_parser("analyze", parents=[common], help="ratios, cogrowth, classification")
    s.add_argument("input")
    s.add_argument("--rmax", type=int, default=8)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("stats", parents=[common], help="neighborhood census")
    s.add_argument("input")
    s.add_argument("-r", type=int, default=1)
    s.add_argument("--reference", help="census JSON to check against")
    s.add_argument("--eps", default="1/100")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("bsdist", parents=[common], help="total variation between censuses")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-r", type=int, default=1)
    s.set_defaults(func=cmd_bsdist)

    s = sub.add_parser("stitch", parents=[common], help="repair a partial graph")
    s.add_argument("input")
    s.add_argument("--report")
    s.set_defaults(func=cmd_stitch)

    s = sub.add_parser("cogrowth", parents=[common], help="closed reduced word counts")
    s.add_argument("input")
    s.add_argument("--rmax", type=int, default=10)
    s.set_defaults(func=cmd_cogrowth)

    s = sub.add_parser("bound", parents=[common], help="k-cycle growth bound")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--eps", type=float, default=0.5)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--m", type=int, default=20)
    s.add_argument("--csv")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("walk", parents=[common], help="random walk return statistics")
    s.add_argument("input")
    s.add_argument("--steps", type=int, default=10**5)
    s.add_argument("--trials", type=int, default=200)
    s.set_defaults(func=cmd_walk)

    s = sub.add_parser("density", parents=[common], help="density profile of a field")
    s.add_argument("input")
    s.add_argument("--pred", help="a-loop | k-cycle:<k> | key:<hex> | true")
    s.add_argument("--rmax", type=int, default=3)
    s.set_defaults(func=cmd_density)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValidationError, MonotonicityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
