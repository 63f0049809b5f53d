"""Command-line application for processing, debugging, and testing models.

Exit codes: 0 success, 1 model errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, engine
from .graph import export_dot, todo_report
from .localization import negotiate_locale
from .model import ManifestError, PolicyModel


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="policyspace",
        description="Process, analyze, and run policy interview models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and statically check a model")
    p.add_argument("model", help="model directory or manifest path")

    p = sub.add_parser("report", help="TODO and unused-entity report")
    p.add_argument("model")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("dot", help="export the decision graph as GraphViz DOT")
    p.add_argument("model")
    p.add_argument("-o", "--output", help="write DOT to this file instead of stdout")
    p.add_argument("--clusters", action="store_true", help="render sections as clusters")

    p = sub.add_parser("run", help="run an interview in the terminal")
    p.add_argument("model")
    p.add_argument("--locale", help="localization package to use")
    p.add_argument("--answers", help="JSON answer journal to replay instead of prompting")
    p.add_argument("--journal-out", help="write the session journal to this file")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("query", help="find situations matching a predicate")
    p.add_argument("model")
    p.add_argument("predicate", help='e.g. "ProcessFairness>=flawed AND AgeGroup=pension"')
    p.add_argument("--max-paths", type=int, default=analysis.DEFAULT_MAX_PATHS)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("enumerate", help="enumerate every interview outcome")
    p.add_argument("model")
    p.add_argument("--max-paths", type=int, default=analysis.DEFAULT_MAX_PATHS)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("serve", help="start the HTTP interview service")
    p.add_argument("--config", help="service config file (JSON)")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    return parser


def _load_model(path: str) -> PolicyModel:
    return PolicyModel.load(Path(path))


def _print_diagnostics(model: PolicyModel) -> None:
    for diag in model.diagnostics:
        print(diag, file=sys.stderr)


def _require_valid(model: PolicyModel) -> int | None:
    if not model.is_valid:
        _print_diagnostics(model)
        return 1
    return None


def cmd_validate(args) -> int:
    model = _load_model(args.model)
    _print_diagnostics(model)
    errors = len(model.errors)
    warnings = len(model.diagnostics) - errors
    print(f"{args.model}: {errors} error(s), {warnings} warning(s)")
    return 0 if errors == 0 else 1


def cmd_report(args) -> int:
    model = _load_model(args.model)
    bad = _require_valid(model)
    if bad:
        return bad
    report = todo_report(model.graph, model.space, model.inferencers)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_text())
    return 0


def cmd_dot(args) -> int:
    model = _load_model(args.model)
    bad = _require_valid(model)
    if bad:
        return bad
    text = export_dot(model.graph, include_section_clusters=args.clusters)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _pick_package(model: PolicyModel, locale: str | None):
    tag = negotiate_locale(model.locales, locale, model.default_locale)
    return model.package(tag)


def cmd_run(args) -> int:
    model = _load_model(args.model)
    bad = _require_valid(model)
    if bad:
        return bad
    package = _pick_package(model, args.locale)

    if args.answers:
        journal_data = json.loads(Path(args.answers).read_text(encoding="utf-8"))
        try:
            session = engine.replay(model, journal_data)
        except (engine.ReplayError, engine.InvalidAnswerError) as exc:
            print(f"replay failed: {exc}", file=sys.stderr)
            return 1
        if session.status != engine.FINISHED:
            print("journal ended before the interview finished", file=sys.stderr)
            return 1
    else:
        session = engine.start(model)
        while session.status == engine.AWAITING:
            node = session.current_node
            from .localization import localize_answer, localize_node

            print()
            print(localize_node(package, model.graph, node.id))
            keys = [a.key for a in node.prompt_answers]
            for i, key in enumerate(keys, 1):
                print(f"  {i}) {localize_answer(package, model.graph, key)}")
            choice = input("> ").strip()
            if choice.isdigit() and 1 <= int(choice) <= len(keys):
                choice = keys[int(choice) - 1]
            try:
                session.answer(choice)
            except engine.InvalidAnswerError as exc:
                print(exc, file=sys.stderr)

    if args.journal_out:
        Path(args.journal_out).write_text(engine.journal_text(session), encoding="utf-8")

    report = engine.final_report(session, package)
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    return 0


def cmd_query(args) -> int:
    model = _load_model(args.model)
    bad = _require_valid(model)
    if bad:
        return bad
    try:
        predicate = analysis.parse_predicate(args.predicate, model.space)
    except analysis.PredicateError as exc:
        print(f"invalid predicate: {exc}", file=sys.stderr)
        return 2
    result = analysis.query(model, predicate, max_paths=args.max_paths)
    print(result.to_json() if args.format == "json" else result.to_text())
    return 0


def cmd_enumerate(args) -> int:
    model = _load_model(args.model)
    bad = _require_valid(model)
    if bad:
        return bad
    result = analysis.enumerate_outcomes(model, max_paths=args.max_paths)
    print(result.to_json() if args.format == "json" else result.to_text())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app
    from .service.config import ServiceConfig

    config = ServiceConfig.load(args.config)
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


_COMMANDS = {
    "validate": cmd_validate,
    "report": cmd_report,
    "dot": cmd_dot,
    "run": cmd_run,
    "query": cmd_query,
    "enumerate": cmd_enumerate,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ManifestError as exc:
        print(exc, file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(exc, file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"invalid JSON input: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
