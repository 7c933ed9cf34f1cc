"""Command-line interface.

Four subcommands: ``predict`` classifies a file of queries and writes
one JSON record per line (optionally exporting DOT text and rendered
figures per query), ``concise`` writes the learned concise subset plus
an audit trail, ``check`` runs the seeded property harness, and
``export-dot`` serializes one attack graph.

Exit codes: 0 success (no violations for ``check``), 1 property
violations found, 2 unusable input (flags or file contents), 3 a
coherent casebase was required but not provided.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from .core import (
    Case,
    Casebase,
    Characterisation,
    DuplicateId,
    NewCase,
    validate_casebase,
)
from .classifier import predict
from .cumulative import learn_concise, predict_cumulative
from .framework import grounded_extension
from .properties import (
    GeneratorConfig,
    PropertyReport,
    cautious_monotonicity_fixture,
    check_lemma_locality,
    check_property,
)
from . import viz

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_INCOHERENT = 3


class FileFormatError(ValueError):
    """The input file does not match the expected format."""


def _require_keys(record: dict, allowed: set[str], required: set[str], what: str) -> None:
    unknown = set(record) - allowed
    if unknown:
        raise FileFormatError(f"{what}: unknown keys {sorted(unknown)}")
    missing = required - set(record)
    if missing:
        raise FileFormatError(f"{what}: missing keys {sorted(missing)}")


def _feature_list(value: Any, what: str) -> Characterisation:
    if not isinstance(value, list) or not all(isinstance(f, str) for f in value):
        raise FileFormatError(f"{what}: features must be a list of strings")
    return Characterisation(frozenset(value))


def parse_casebase_doc(doc: Any) -> Casebase:
    if not isinstance(doc, dict):
        raise FileFormatError("casebase file: expected a JSON object at top level")
    _require_keys(
        doc,
        {"default_outcome", "nondefault_outcome", "default_features", "cases"},
        {"default_outcome", "nondefault_outcome", "default_features", "cases"},
        "casebase file",
    )
    if doc["default_features"] != []:
        raise FileFormatError(
            "casebase file: default_features must be [] "
            "(only the empty default characterisation is supported)"
        )
    default_outcome = doc["default_outcome"]
    nondefault = doc["nondefault_outcome"]
    if not isinstance(default_outcome, str) or not isinstance(nondefault, str):
        raise FileFormatError("casebase file: outcome labels must be strings")
    if default_outcome == nondefault:
        raise FileFormatError("casebase file: the two outcome labels must differ")
    if not isinstance(doc["cases"], list):
        raise FileFormatError("casebase file: cases must be a list")

    cases = []
    for i, record in enumerate(doc["cases"]):
        what = f"case #{i}"
        if not isinstance(record, dict):
            raise FileFormatError(f"{what}: expected an object")
        _require_keys(record, {"id", "features", "outcome"}, {"features", "outcome"}, what)
        outcome = record["outcome"]
        if outcome not in (default_outcome, nondefault):
            raise FileFormatError(
                f"{what}: outcome {outcome!r} is neither "
                f"{default_outcome!r} nor {nondefault!r}"
            )
        case_id = record.get("id", f"c{i}")
        if not isinstance(case_id, str):
            raise FileFormatError(f"{what}: id must be a string")
        cases.append(Case(case_id, _feature_list(record["features"], what), outcome))

    default = Case("default", Characterisation.empty(), default_outcome)
    try:
        return validate_casebase(cases, default, nondefault)
    except DuplicateId as e:
        raise FileFormatError(f"casebase file: {e}") from e


def casebase_to_doc(cb: Casebase) -> dict:
    return {
        "default_outcome": cb.default_outcome,
        "nondefault_outcome": cb.nondefault_outcome,
        "default_features": [],
        "cases": [
            {
                "id": c.id,
                "features": sorted(c.characterisation.features),
                "outcome": c.outcome,
            }
            for c in cb.cases
        ],
    }


def parse_queries_doc(doc: Any) -> list[NewCase]:
    if not isinstance(doc, list):
        raise FileFormatError("queries file: expected a JSON list at top level")
    queries = []
    for i, record in enumerate(doc):
        what = f"query #{i}"
        if not isinstance(record, dict):
            raise FileFormatError(f"{what}: expected an object")
        _require_keys(record, {"id", "features"}, {"features"}, what)
        query_id = record.get("id", f"q{i}")
        if not isinstance(query_id, str):
            raise FileFormatError(f"{what}: id must be a string")
        queries.append(NewCase(query_id, _feature_list(record["features"], what)))
    return queries


def _load_json(path: str, what: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise FileFormatError(f"{what}: cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise FileFormatError(f"{what}: {path} is not valid JSON: {e}") from e


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _statement_doc(statement) -> dict | None:
    if statement is None:
        return None
    return {
        "features": sorted(statement.characterisation.features),
        "outcome": statement.outcome,
    }


def _write_report_log(report: PropertyReport, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in report.violations:
            fh.write(
                json.dumps(
                    {
                        "type": "violation",
                        "property": report.property,
                        "engine": report.engine,
                        "trial": v.trial,
                        "casebase": casebase_to_doc(v.casebase),
                        "added": _statement_doc(v.added),
                        "query": _statement_doc(v.query),
                        "before": v.before,
                        "after": v.after,
                    }
                )
                + "\n"
            )
        fh.write(
            json.dumps(
                {
                    "type": "summary",
                    "property": report.property,
                    "engine": report.engine,
                    "trials": report.trials,
                    "exhaustive": report.exhaustive,
                    "instances": report.instances,
                    "stored_skipped": report.stored_skipped,
                    "violations": len(report.violations),
                }
            )
            + "\n"
        )


def cmd_predict(args: argparse.Namespace) -> int:
    cb = parse_casebase_doc(_load_json(args.casebase, "casebase file"))
    queries = parse_queries_doc(_load_json(args.queries, "queries file"))

    if not cb.coherent:
        if args.engine == "cumulative":
            print(
                "error: casebase is incoherent, the cumulative engine needs "
                "a coherent one",
                file=sys.stderr,
            )
            return EXIT_INCOHERENT
        if args.warn_incoherent:
            print(
                "warning: casebase is incoherent, predictions may rest on "
                "mutual attacks",
                file=sys.stderr,
            )

    model = learn_concise(cb) if args.engine == "cumulative" else None
    for directory in (args.dot, args.figures):
        if directory:
            os.makedirs(directory, exist_ok=True)

    out, close = _open_out(args.out)
    try:
        for q in queries:
            if model is not None:
                pred = predict_cumulative(model, q.characterisation, new_case_id=q.id)
            else:
                pred = predict(cb, q.characterisation, new_case_id=q.id)
            record = {
                "id": q.id,
                "outcome": pred.outcome,
                "default_in_grounded": pred.default_in_grounded,
                "engine": args.engine,
            }
            out.write(json.dumps(record) + "\n")
            if args.dot:
                dot = viz.to_dot(pred.graph, pred.grounded.members)
                with open(
                    os.path.join(args.dot, f"{q.id}.dot"), "w", encoding="utf-8"
                ) as fh:
                    fh.write(dot)
            if args.figures:
                viz.render_figure(
                    pred.graph,
                    pred.grounded.members,
                    os.path.join(args.figures, f"{q.id}.png"),
                )
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_concise(args: argparse.Namespace) -> int:
    cb = parse_casebase_doc(_load_json(args.casebase, "casebase file"))
    if not cb.coherent:
        print("error: casebase is incoherent, nothing to learn", file=sys.stderr)
        return EXIT_INCOHERENT
    model = learn_concise(cb)

    out, close = _open_out(args.out)
    try:
        out.write(json.dumps(casebase_to_doc(model.concise), indent=2) + "\n")
    finally:
        if close:
            out.close()

    if args.audit:
        with open(args.audit, "w", encoding="utf-8") as fh:
            for rec in model.audit:
                fh.write(
                    json.dumps(
                        {
                            "id": rec.case.id,
                            "kept": rec.kept,
                            "stratum": rec.stratum,
                            "predicted": rec.predicted,
                            "actual": rec.case.outcome,
                        }
                    )
                    + "\n"
                )
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    universe = tuple(f"f{i}" for i in range(args.features))
    cfg = GeneratorConfig(
        feature_universe=universe, case_count=args.cases, seed=args.seed
    )
    property_name = args.property.replace("-", "_")
    try:
        if property_name == "locality":
            report = check_lemma_locality(args.engine, cfg, args.trials)
        else:
            fixtures = []
            if args.fixture == "theorem4":
                fixture_cb, _, _ = cautious_monotonicity_fixture()
                fixtures.append((fixture_cb, ("a", "b", "c", "z")))
            report = check_property(
                args.engine,
                property_name,
                cfg,
                args.trials,
                exhaustive=args.exhaustive,
                sample_size=args.sample,
                fixtures=fixtures,
            )
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    print(
        f"property={report.property} engine={report.engine} "
        f"trials={report.trials} exhaustive={report.exhaustive} "
        f"instances={report.instances} violations={len(report.violations)}"
    )
    for v in report.violations[: args.show]:
        added = "none" if v.added is None else (
            f"{v.added.characterisation!r}:{v.added.outcome}"
        )
        print(
            f"violation trial={v.trial} added={added} "
            f"query={v.query.characterisation!r} before={v.before} after={v.after}"
        )
    hidden = len(report.violations) - args.show
    if hidden > 0:
        print(f"... and {hidden} more")
    if args.log:
        _write_report_log(report, args.log)
    return EXIT_VIOLATIONS if report.violations else EXIT_OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    cb = parse_casebase_doc(_load_json(args.casebase, "casebase file"))
    if args.query is not None:
        features = [f for f in args.query.split(",") if f]
        pred = predict(cb, Characterisation(frozenset(features)))
        graph, members = pred.graph, pred.grounded.members
    else:
        from .framework import mine_af

        graph = mine_af(cb)
        members = grounded_extension(graph).members

    out, close = _open_out(args.out)
    try:
        out.write(viz.to_dot(graph, members))
    finally:
        if close:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aacbr",
        description="Case-based classification over mined attack graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="classify a file of queries")
    p.add_argument("--casebase", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--engine", choices=["plain", "cumulative"], default="plain")
    p.add_argument("--out", default=None, help="output path, - or omitted for stdout")
    p.add_argument("--dot", default=None, help="directory for per-query DOT files")
    p.add_argument("--figures", default=None, help="directory for per-query images")
    p.add_argument("--warn-incoherent", action="store_true")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("concise", help="learn and write the concise subset")
    p.add_argument("--casebase", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--audit", default=None, help="path for the audit trail (JSONL)")
    p.set_defaults(func=cmd_concise)

    p = sub.add_parser("check", help="run the seeded property harness")
    p.add_argument("--engine", choices=["plain", "cumulative"], default="plain")
    p.add_argument(
        "--property",
        required=True,
        choices=[
            "cautious-monotonicity",
            "cut",
            "cumulativity",
            "rational-monotonicity",
            "completeness",
            "consistency",
            "locality",
        ],
    )
    p.add_argument("--features", type=int, default=5)
    p.add_argument("--cases", type=int, default=8)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--sample", type=int, default=32, help="queries per trial when sampling")
    p.add_argument("--fixture", choices=["theorem4"], default=None,
                   help="prepend the built-in counterexample casebase as a trial")
    p.add_argument("--log", default=None, help="path for the JSONL report log")
    p.add_argument("--show", type=int, default=10, help="counterexamples to print")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("export-dot", help="serialize one attack graph as DOT")
    p.add_argument("--casebase", required=True)
    p.add_argument("--query", default=None, help="comma-separated feature list")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export_dot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except FileFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
