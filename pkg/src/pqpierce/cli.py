"""Command-line interface.

Every command prints machine-readable JSON (or CSV where supported) and
maps outcomes onto four exit codes:

    0  success, including "the property holds"
    1  the property or a pipeline hypothesis fails (witness in output)
    2  malformed input or usage error
    3  a resource cap was exhausted (LP budget, search limit, escape cap)

Identical argv, seed, and input files produce byte-identical output at
any parallelism level.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from contextlib import nullcontext
from fractions import Fraction
from typing import Optional

from .bounds import catalog_lookup, entry_to_json
from .constructions import (
    CounterexampleSpec,
    counterexample_family,
    escape_witness,
    free_flats_family,
    gruenbaum_line,
    simplex_S,
)
from .errors import (
    BudgetExhaustedError,
    CatalogError,
    EmptySetError,
    MalformedInputError,
    SearchLimitError,
)
from .hypergraph import hypergraph_from_json, hypergraph_to_json, transversal_number
from .lp import lp_budget
from .piercing import (
    build_GF,
    has_pq_property,
    piercing_number,
    piercing_to_json,
    pq_report_to_json,
)
from .pipelines import (
    pierce_via_free_family,
    pierce_via_projection,
    pierce_via_transversal,
    report_to_json,
    verify_counterexample,
    verify_projection_equivalence,
)
from .rational import point, point_json, rat
from .sets import (
    Family,
    common_recession_direction,
    family_from_json,
    family_to_json,
    project_drop_last,
    set_from_json,
)


def _parse_rat(text: str) -> Fraction:
    return rat(text)


def _parse_rat_list(text: str) -> list[Fraction]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise MalformedInputError("empty rational list")
    return [rat(t) for t in items]


def _parse_index_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise MalformedInputError(f"bad index list {text!r}") from exc


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid JSON: {exc}") from exc


def _load_family(path: str) -> Family:
    return family_from_json(_load_json(path))


def _load_points(path: str) -> list[tuple]:
    obj = _load_json(path)
    if not isinstance(obj, dict) or "points" not in obj:
        raise MalformedInputError("point file needs a 'points' key")
    pts = obj["points"]
    if not isinstance(pts, list):
        raise MalformedInputError("'points' must be a list")
    return [point(p) for p in pts]


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _pq_csv(report_json: dict) -> str:
    viol = report_json["violating_tuple"]
    return _csv_text(
        ["p", "q", "holds", "violating_tuple", "checked_tuples"],
        [[
            report_json["p"],
            report_json["q"],
            report_json["holds"],
            "" if viol is None else " ".join(map(str, viol)),
            report_json["checked_tuples"],
        ]],
    )


def _pipeline_csv(report_json: dict) -> str:
    rows = [
        [
            report_json["name"],
            i,
            row["description"],
            row["passed"],
            json.dumps(row["witness"], sort_keys=True),
        ]
        for i, row in enumerate(report_json["hypothesis_checks"])
    ]
    return _csv_text(["name", "index", "description", "passed", "witness"], rows)


def _budget_context(args):
    budget = getattr(args, "budget", None)
    if budget is None:
        return nullcontext()
    if budget <= 0:
        raise MalformedInputError("budget must be positive")
    return lp_budget(budget)


# ---------------------------------------------------------------------------
# command handlers: each returns (exit_code, output_text)

def _cmd_construct(args) -> tuple[int, str]:
    if args.what == "simplex":
        if (args.alphas is None) == (args.count is None):
            raise MalformedInputError("give exactly one of --alphas or --count")
        extra = {}
        if args.alphas is not None:
            alphas = _parse_rat_list(args.alphas)
        else:
            if args.count < 1:
                raise MalformedInputError("need --count >= 1")
            rng = random.Random(args.seed)
            chosen: set[Fraction] = set()
            while len(chosen) < args.count:
                den = rng.randint(2, args.max_den)
                chosen.add(Fraction(rng.randint(1, den - 1), den))
            alphas = sorted(chosen)
            extra = {"seed": args.seed}
        sets = [simplex_S(a, args.d) for a in alphas]
        fam = Family(args.d, tuple(sets))
        return 0, _json_text({**family_to_json(fam), **extra})
    if args.what == "counterexample":
        spec = CounterexampleSpec(
            d=args.d,
            n_max=args.n_max,
            n_bounded=args.n_bounded,
            bounded_margin=_parse_rat(args.margin),
        )
        return 0, _json_text(family_to_json(counterexample_family(spec)))
    if args.what == "gruenbaum":
        fam = gruenbaum_line(args.n_max, args.copies)
        return 0, _json_text(family_to_json(fam))
    fam = free_flats_family(args.d, args.k, args.count, _parse_rat(args.radius), args.seed)
    return 0, _json_text({**family_to_json(fam), "seed": args.seed})


def _cmd_check_pq(args) -> tuple[int, str]:
    fam = _load_family(args.input)
    with _budget_context(args):
        report = has_pq_property(fam, args.p, args.q)
    data = pq_report_to_json(report)
    text = _pq_csv(data) if args.format == "csv" else _json_text(data)
    return (0 if report.holds else 1), text


def _cmd_solve(args) -> tuple[int, str]:
    if args.what == "pierce":
        fam = _load_family(args.input)
        with _budget_context(args):
            sol = piercing_number(fam, limit=args.limit)
        return 0, _json_text(piercing_to_json(sol))
    h = hypergraph_from_json(_load_json(args.input))
    beta, cover = transversal_number(h, limit=args.limit)
    return 0, _json_text({"beta": beta, "cover": list(cover)})


def _cmd_analyze(args) -> tuple[int, str]:
    fam = _load_family(args.input)
    with _budget_context(args):
        if args.what == "recession":
            v = common_recession_direction(fam)
            data = {"direction": None if v is None else point_json(v)}
            return (0 if v is not None else 1), _json_text(data)
        if args.what == "project":
            if fam.dim < 2:
                raise MalformedInputError("projection needs dimension >= 2")
            shadows = Family(fam.dim - 1, tuple(project_drop_last(s) for s in fam.sets))
            return 0, _json_text(family_to_json(shadows))
        gf = build_GF(fam, fam.dim)
        return 0, _json_text(hypergraph_to_json(gf))


def _cmd_escape(args) -> tuple[int, str]:
    spec = CounterexampleSpec(
        d=args.d,
        n_max=args.n_max,
        n_bounded=args.n_bounded,
        bounded_margin=_parse_rat(args.margin),
    )
    pts = _load_points(args.points)
    with _budget_context(args):
        w = escape_witness(spec, pts, args.n_cap)
    data = {"witness": w, "n_cap": args.n_cap}
    return (0 if w is not None else 3), _json_text(data)


def _cmd_bounds(args) -> tuple[int, str]:
    if args.what == "eta":
        entry = catalog_lookup("eta", (args.lam, args.k))
    else:
        entry = catalog_lookup("xi", (args.p, args.q, args.d))
    data = {"entry": None if entry is None else entry_to_json(entry)}
    return (0 if entry is not None else 1), _json_text(data)


def _cmd_pipeline(args) -> tuple[int, str]:
    with _budget_context(args):
        if args.what == "s1":
            report = pierce_via_transversal(_load_family(args.input), args.t, args.p)
        elif args.what == "s2":
            report = pierce_via_free_family(
                _load_family(args.input), _parse_index_list(args.b_indices),
                args.p, args.q,
            )
        elif args.what == "main":
            report = pierce_via_projection(
                _load_family(args.input), _parse_index_list(args.compact_indices),
                args.p, args.q,
            )
        elif args.what == "counterexample":
            spec = CounterexampleSpec(
                d=args.d,
                n_max=args.n_max,
                n_bounded=args.n_bounded,
                bounded_margin=_parse_rat(args.margin),
            )
            candidates = None
            if args.points is not None:
                candidates = [_load_points(args.points)]
            report = verify_counterexample(
                spec, args.k_max, candidate_point_sets=candidates,
                n_cap=args.n_cap, jobs=args.jobs,
            )
        else:
            fam = _load_family(args.input)
            box = set_from_json(_load_json(args.box))
            report = verify_projection_equivalence(fam, box, args.max_subset)
    data = report_to_json(report)
    text = _pipeline_csv(data) if args.format == "csv" else _json_text(data)
    if not report.exhaustive:
        return 3, text
    return (0 if report.all_passed else 1), text


# ---------------------------------------------------------------------------
# parser assembly

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqpierce",
        description="Exact rational toolkit for intersection properties and "
        "piercing numbers of convex polyhedral families.",
    )
    top = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("-o", "--output", default=None, help="write to file instead of stdout")

    def add_budget(p):
        p.add_argument("--budget", type=int, default=None, help="max LP calls")

    def add_format(p):
        p.add_argument("--format", choices=["json", "csv"], default="json")

    construct = top.add_parser("construct", help="emit a family as JSON")
    csub = construct.add_subparsers(dest="what", required=True)
    p = csub.add_parser("simplex")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alphas", default=None, help="comma-separated rationals in (0,1]")
    p.add_argument("--count", type=int, default=None, help="sample this many alphas")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-den", type=int, default=1000)
    add_output(p)
    p = csub.add_parser("counterexample")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-bounded", type=int, required=True)
    p.add_argument("--margin", default="0")
    add_output(p)
    p = csub.add_parser("gruenbaum")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--copies", type=int, default=1)
    add_output(p)
    p = csub.add_parser("free-flats")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--radius", default="10")
    p.add_argument("--seed", type=int, default=0)
    add_output(p)

    check = top.add_parser("check", help="verify an intersection property")
    ksub = check.add_subparsers(dest="what", required=True)
    p = ksub.add_parser("pq")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--input", required=True, help="family JSON file")
    add_budget(p)
    add_format(p)
    add_output(p)

    solve = top.add_parser("solve", help="exact solvers")
    ssub = solve.add_subparsers(dest="what", required=True)
    p = ssub.add_parser("pierce")
    p.add_argument("--input", required=True, help="family JSON file")
    p.add_argument("--limit", type=int, default=None)
    add_budget(p)
    add_output(p)
    p = ssub.add_parser("transversal")
    p.add_argument("--input", required=True, help="hypergraph JSON file")
    p.add_argument("--limit", type=int, default=None)
    add_output(p)

    analyze = top.add_parser("analyze", help="structure extraction")
    asub = analyze.add_subparsers(dest="what", required=True)
    for name in ("recession", "project", "gf"):
        p = asub.add_parser(name)
        p.add_argument("--input", required=True, help="family JSON file")
        add_budget(p)
        add_output(p)

    p = top.add_parser("escape", help="smallest member avoiding a point set")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-bounded", type=int, required=True)
    p.add_argument("--margin", default="0")
    p.add_argument("--points", required=True, help="point-list JSON file")
    p.add_argument("--n-cap", type=int, default=1000)
    add_budget(p)
    add_output(p)

    bounds = top.add_parser("bounds", help="catalog of classical bounds")
    bsub = bounds.add_subparsers(dest="what", required=True)
    p = bsub.add_parser("eta")
    p.add_argument("--lam", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    add_output(p)
    p = bsub.add_parser("xi")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    add_output(p)

    pipeline = top.add_parser("pipeline", help="verified piercing arguments")
    psub = pipeline.add_subparsers(dest="what", required=True)
    p = psub.add_parser("s1")
    p.add_argument("--input", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    add_budget(p)
    add_format(p)
    add_output(p)
    p = psub.add_parser("s2")
    p.add_argument("--input", required=True)
    p.add_argument("--b-indices", required=True, help="comma-separated indices")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    add_budget(p)
    add_format(p)
    add_output(p)
    p = psub.add_parser("main")
    p.add_argument("--input", required=True)
    p.add_argument("--compact-indices", required=True, help="comma-separated indices")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    add_budget(p)
    add_format(p)
    add_output(p)
    p = psub.add_parser("counterexample")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-bounded", type=int, required=True)
    p.add_argument("--margin", default="0")
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--points", default=None, help="candidate point-list JSON file")
    p.add_argument("--n-cap", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=1)
    add_budget(p)
    add_format(p)
    add_output(p)
    p = psub.add_parser("corollary52")
    p.add_argument("--input", required=True)
    p.add_argument("--box", required=True, help="set JSON file")
    p.add_argument("--max-subset", type=int, required=True)
    add_budget(p)
    add_format(p)
    add_output(p)
    return parser


_HANDLERS = {
    "construct": _cmd_construct,
    "check": _cmd_check_pq,
    "solve": _cmd_solve,
    "analyze": _cmd_analyze,
    "escape": _cmd_escape,
    "bounds": _cmd_bounds,
    "pipeline": _cmd_pipeline,
}


def cmd_dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors
        return 0 if exc.code in (0, None) else 2
    try:
        code, text = _HANDLERS[args.command](args)
        _emit(text, getattr(args, "output", None))
        return code
    except (MalformedInputError, EmptySetError, CatalogError) as exc:
        _emit(_json_text({"error": str(exc)}), getattr(args, "output", None))
        return 2
    except (BudgetExhaustedError, SearchLimitError) as exc:
        _emit(_json_text({"error": str(exc)}), getattr(args, "output", None))
        return 3


def main() -> None:
    sys.exit(cmd_dispatch(sys.argv[1:]))
