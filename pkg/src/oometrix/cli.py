"""Command-line front end.

Exit codes: 0 success, 1 invalid input (parse or validation errors, unknown
class), 2 when ``--fail-on-poor`` is given and some class classifies poor.
"""

from __future__ import annotations

import argparse
import difflib
import json
import sys
from pathlib import Path

from .model import CodeModel, ModelError, ModelParseError, dumps_model, model_from_dict, read_json
from .parser import ParseDiagnostic, parse_paths
from .quality import (
    OperandSet,
    ThresholdConfig,
    compare_versions,
    load_thresholds,
    model_operands,
    operand_set_from_dict,
)
from .report import build_report, kiviat, recommendations, trend_to_dict

EXIT_OK, EXIT_INVALID, EXIT_POOR = 0, 1, 2


class InputError(Exception):
    def __init__(self, message: str, diagnostics: list[ParseDiagnostic] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


def load_input(
    paths: list[str], jobs: int = 1
) -> tuple[CodeModel | OperandSet, list[ParseDiagnostic]]:
    """A model JSON, an operand JSON, or MiniOO source files and directories."""
    if len(paths) == 1 and paths[0].endswith(".json"):
        try:
            doc = read_json(paths[0])
            if doc.get("kind") == "operands":
                return operand_set_from_dict(doc), []
            return model_from_dict(doc), []
        except (ModelError, ModelParseError, OSError) as e:
            raise InputError(f"{paths[0]}: {e}") from e
    missing = [p for p in paths if not Path(p).exists()]
    if missing:
        raise InputError(f"no such file or directory: {', '.join(missing)}")
    try:
        model, diags = parse_paths(paths, jobs=jobs)
    except ModelError as e:
        raise InputError(str(e)) from e
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        raise InputError(f"{len(errors)} parse error(s)", diags)
    return model, diags


def _thresholds(args) -> ThresholdConfig:
    if getattr(args, "thresholds", None):
        try:
            return load_thresholds(args.thresholds)
        except (OSError, ValueError, KeyError, TypeError) as e:
            raise InputError(f"{args.thresholds}: {e}") from e
    return ThresholdConfig()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_analyze(args) -> int:
    subject, diags = load_input(args.inputs, args.jobs)
    baseline = None
    if args.baseline:
        b, _ = load_input([args.baseline], args.jobs)
        if not isinstance(b, CodeModel):
            raise InputError("--baseline needs a model, not an operand set")
        baseline = b
    report = build_report(
        subject,
        thresholds=_thresholds(args),
        baseline=baseline,
        alpha=args.alpha,
        exclude_constructors=args.exclude_constructors,
        exclude_accessors=args.exclude_accessors,
        diagnostics=diags,
    )
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.output)
    if args.fail_on_poor and report.any_poor:
        return EXIT_POOR
    return EXIT_OK


def _operands(subject, exclude_constructors: bool) -> OperandSet:
    if isinstance(subject, OperandSet):
        return subject
    return model_operands(subject, exclude_constructors)


def cmd_kiviat(args) -> int:
    subject, _ = load_input(args.inputs, args.jobs)
    ops = _operands(subject, args.exclude_constructors)
    oc = ops.get(args.class_name)
    if oc is None:
        names = [c.name for c in ops.classes]
        close = difflib.get_close_matches(args.class_name, names, n=3, cutoff=0.4)
        hint = f"; did you mean: {', '.join(close)}" if close else ""
        raise InputError(f"unknown class {args.class_name}{hint}")
    _emit(_dump(kiviat(oc.name, oc.operands, _thresholds(args)).to_dict()), args.output)
    return EXIT_OK


def cmd_recommend(args) -> int:
    subject, _ = load_input(args.inputs, args.jobs)
    recs = recommendations(subject, _thresholds(args), args.exclude_constructors)
    _emit(_dump({"kind": "recommendations", "recommendations": [r.to_dict() for r in recs]}), args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    old, _ = load_input([args.old], args.jobs)
    new, _ = load_input([args.new], args.jobs)
    trend = compare_versions(old, new, args.exclude_constructors)
    _emit(_dump(trend_to_dict(trend)), args.output)
    return EXIT_OK


def cmd_parse(args) -> int:
    subject, diags = load_input(args.inputs, args.jobs)
    if not isinstance(subject, CodeModel):
        raise InputError("parse expects sources or a model, not an operand set")
    for d in diags:
        print(d, file=sys.stderr)
    _emit(dumps_model(subject), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oometrix", description="Object-oriented design metrics.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, inputs: bool = True):
        if inputs:
            sp.add_argument("inputs", nargs="+", help="MiniOO sources/directories, a model JSON or an operand JSON")
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        sp.add_argument("--jobs", type=int, default=1, help="parse units in parallel")
        sp.add_argument("--exclude-constructors", action="store_true",
                        help="leave constructors out of cl_func and cohesion measures")

    a = sub.add_parser("analyze", help="full metric report")
    common(a)
    a.add_argument("--format", choices=("json", "csv"), default="json")
    a.add_argument("--thresholds", help="threshold configuration JSON")
    a.add_argument("--baseline", help="model used to normalize QMOOD design properties")
    a.add_argument("--alpha", type=int, default=2, help="invocation levels for rfc_alpha")
    a.add_argument("--exclude-accessors", action="store_true", help="leave accessors out of cohesion measures")
    a.add_argument("--fail-on-poor", action="store_true", help="exit 2 if any class is poor")
    a.set_defaults(func=cmd_analyze)

    k = sub.add_parser("kiviat", help="plot-ready operand ranges for one class")
    common(k)
    k.add_argument("--class", dest="class_name", required=True)
    k.add_argument("--thresholds")
    k.set_defaults(func=cmd_kiviat)

    r = sub.add_parser("recommend", help="recommendations for out-of-range operands")
    common(r)
    r.add_argument("--thresholds")
    r.set_defaults(func=cmd_recommend)

    c = sub.add_parser("compare", help="trend report between two versions")
    common(c, inputs=False)
    c.add_argument("old")
    c.add_argument("new")
    c.set_defaults(func=cmd_compare)

    s = sub.add_parser("parse", help="emit the model JSON for MiniOO sources")
    common(s)
    s.set_defaults(func=cmd_parse)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "alpha", 1) < 1:
        print("error: --alpha must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except InputError as e:
        for d in e.diagnostics:
            print(d, file=sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
