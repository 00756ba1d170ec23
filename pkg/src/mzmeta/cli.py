"""`mz`: command-line front door for the metadata registry.

Exit codes are a stable contract: 0 success, 2 validation failure, 3 MQL
syntax/analysis error, 4 infeasible composition, 5 store corruption or
integrity failure, 1 anything else. Table output is for people; `--format
json` is the programmatic surface.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import composer, ingest, metamodel, mql, seed, service
from .metamodel import DecodeError, decode, encode
from .store import StoreCorruption, StoreLog, ValidationFailed, VersionConflict, open_store

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_QUERY = 3
EXIT_INFEASIBLE = 4
EXIT_CORRUPTION = 5


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_OK
    try:
        return args.func(args)
    except StoreCorruption as err:
        print(f"store corruption: {err}", file=sys.stderr)
        return EXIT_CORRUPTION
    except (ingest.IngestError, composer.GraphError, DecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mz", description=__doc__.split("\n")[0])
    parser.add_argument("--store", default=os.environ.get("MZ_STORE", "./mz-store"),
                        help="store directory or log file (env: MZ_STORE)")
    parser.add_argument("--format", choices=("table", "json"), default="table")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("ingest", help="ingest a record envelope from a JSON file")
    p.add_argument("file", type=Path)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", help="run an MQL query")
    p.add_argument("mql")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("parse", help="parse a query and print its canonical form")
    p.add_argument("mql")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("crawl", help="ingest recorded cards from an external zoo fixture")
    p.add_argument("zoo", choices=("huggingface",))
    p.add_argument("--fixtures", required=True, type=Path)
    p.set_defaults(func=cmd_crawl)

    p = sub.add_parser("eval", help="run a (simulated) evaluation")
    p.add_argument("model", help="name@version")
    p.add_argument("dataset", help="name@version")
    p.add_argument("hardware", help="hardware profile name")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compose", help="solve a composition request document")
    p.add_argument("plan", type=Path, help="JSON file: nodes, edges, budgets, hardware, weights")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("compare", help="metric matrix for two or more models")
    p.add_argument("ids", nargs="+")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("check", help="verify checksums, indexes, and reference closure")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("seed", help="load the demo fixture zoo into the store")
    p.set_defaults(func=cmd_seed)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--bind", default="127.0.0.1:8080")
    p.add_argument("--store-path", default=None, help="overrides --store")
    p.add_argument("--fixtures-root", default=None)
    p.add_argument("--webui-root", default=None)
    p.set_defaults(func=cmd_serve)
    return parser


def _open(args) -> StoreLog:
    return open_store(args.store)


def cmd_ingest(args) -> int:
    try:
        envelope = json.loads(args.file.read_text(encoding="utf-8"))
        record = decode(envelope)
    except (OSError, ValueError, DecodeError) as err:
        print(f"cannot read record: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    store = _open(args)
    try:
        key = ingest.ingest_manual(store, record)
    except ValidationFailed as err:
        print("validation failed:", file=sys.stderr)
        for violation in err.report:
            print(f"  {violation.path}: {violation.reason}", file=sys.stderr)
        return EXIT_VALIDATION
    except VersionConflict as err:
        print(f"version conflict: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    _emit(args, {"kind": key.kind, "id": key.id, "name": key.name, "version": key.version},
          lambda doc: f"stored {doc['kind']} {doc['id']}")
    return EXIT_OK


def cmd_query(args) -> int:
    store = _open(args)
    try:
        result = mql.run_query(args.mql, mql.EvalContext(store))
    except mql.MqlSyntaxError as err:
        print(f"syntax error: {err}", file=sys.stderr)
        return EXIT_QUERY
    except mql.MqlAnalysisError as err:
        print(f"analysis error: {err}", file=sys.stderr)
        return EXIT_QUERY
    if args.format == "json":
        _print_json({
            "count": len(result.records),
            "results": [encode(r) for r in result.records],
            "plan": result.plan,
        })
        return EXIT_OK
    rows = [_summary_row(r) for r in result.records]
    _print_table(["name", "version", "kind", "task/modality"], rows)
    print(f"{len(result.records)} result(s)")
    return EXIT_OK


def _summary_row(record) -> list[str]:
    kind = type(record).__name__
    extra = getattr(record, "task", None) or getattr(record, "modality", None) or ""
    return [getattr(record, "name", record.id), getattr(record, "version", ""), kind, extra]


def cmd_parse(args) -> int:
    try:
        ast = mql.parse(args.mql)
    except mql.MqlSyntaxError as err:
        print(f"syntax error: {err}", file=sys.stderr)
        return EXIT_QUERY
    print(mql.pretty_print(ast))
    return EXIT_OK


def cmd_crawl(args) -> int:
    store = _open(args)
    summary = ingest.crawl(store, ingest.HuggingFaceFixtureAdapter(), args.fixtures)
    doc = {
        "cards_total": summary.cards_total,
        "cards_stored": summary.cards_stored,
        "quarantined": [{"file": f, "reason": r} for f, r in summary.quarantined],
        "new_records": summary.new_records,
    }
    _emit(args, doc, lambda d: (
        f"{d['cards_stored']}/{d['cards_total']} cards stored, "
        f"{len(d['quarantined'])} quarantined, {d['new_records']} new records"
        + "".join(f"\n  quarantined {q['file']}: {q['reason']}" for q in d["quarantined"])
    ))
    return EXIT_OK


def cmd_eval(args) -> int:
    store = _open(args)
    executor = ingest.SimulatedExecutor(args.manifest)
    try:
        key = ingest.run_evaluation(store, executor, args.model, args.dataset,
                                    args.hardware, seed=args.seed)
    except ValidationFailed as err:
        print(f"rejected: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    _emit(args, {"run": key.id}, lambda d: f"stored evaluation {d['run']}")
    return EXIT_OK


def cmd_compose(args) -> int:
    store = _open(args)
    doc = json.loads(args.plan.read_text(encoding="utf-8"))
    graph, constraints, objective = composer.graph_from_json(doc)
    plan, excluded = composer.optimize(graph, constraints, objective, store)
    out = composer.plan_to_json(plan, excluded)
    if not plan.feasible:
        _emit(args, out, lambda d: "INFEASIBLE: binding constraint(s): " + ", ".join(d["binding"]))
        return EXIT_INFEASIBLE
    _emit(args, out, _format_plan)
    return EXIT_OK


def _format_plan(doc) -> str:
    lines = [f"mode: {doc['mode']}"]
    for node, ref in doc["assignment"].items():
        lines.append(f"  {node}: {ref['name']}@{ref['version']}")
    agg = doc["aggregate"]
    lines.append(
        f"score {agg['score']:.4f}, latency {agg['latency_ms']:.1f} ms, "
        f"memory {agg['memory_mb']:.1f} MB"
    )
    for skipped in doc.get("excluded", []):
        lines.append(f"  excluded {skipped['model']} ({skipped['node']}): {skipped['reason']}")
    return "\n".join(lines)


def cmd_compare(args) -> int:
    store = _open(args)
    try:
        matrix = service.comparison_matrix(store, args.ids)
    except service.ApiError as err:
        print(f"error: {err.message}", file=sys.stderr)
        return 1
    if args.format == "json":
        _print_json(matrix)
        return EXIT_OK
    header = ["metric", "dataset", "hardware", "slice"] + matrix["models"]
    rows = [
        [r["metric"], r["dataset"], r["hardware"], r["slice"] or ""]
        + [("" if v is None else _fmt_num(v)) for v in r["values"]]
        for r in matrix["rows"]
    ]
    _print_table(header, rows)
    return EXIT_OK


def cmd_check(args) -> int:
    store = _open(args)
    problems = store.integrity_check()
    if problems:
        for problem in problems:
            print(problem, file=sys.stderr)
        return EXIT_CORRUPTION
    _emit(args, {"status": "ok", "entries": len(store)},
          lambda d: f"ok: {d['entries']} entries verified")
    return EXIT_OK


def cmd_seed(args) -> int:
    store = _open(args)
    counts = seed.populate_seed_zoo(store)
    _emit(args, counts, lambda d: "seeded: " + ", ".join(f"{v} {k}" for k, v in d.items()))
    return EXIT_OK


def cmd_serve(args) -> int:  # pragma: no cover - long-running entry
    store = open_store(args.store_path or args.store)
    service.serve(store, bind=args.bind, fixtures_root=args.fixtures_root,
                  webui_root=args.webui_root)
    return EXIT_OK


# -- output helpers -----------------------------------------------------------

def _emit(args, doc, render_table):
    if args.format == "json":
        _print_json(doc)
    else:
        print(render_table(doc))


def _print_json(doc):
    print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))


def _fmt_num(value) -> str:
    return f"{value:g}"


def _print_table(header: list[str], rows: list[list[str]]):
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(str(cell)))
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    print(fmt.format(*header))
    print(fmt.format(*("-" * w for w in widths)))
    for row in rows:
        print(fmt.format(*(str(c) for c in row)))


if __name__ == "__main__":
    sys.exit(main())
