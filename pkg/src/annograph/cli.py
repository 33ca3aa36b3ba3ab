"""Command-line entry points over the engine.

Exit status: 0 on success, 1 on parse or validation failure, 2 on usage
errors.  Rendering goes through exactly the same code path as the HTTP
service, so both produce byte-identical output for identical inputs.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from .errors import EngineError, ParseFailure
from .formats import (
    TAXONOMY_SUFFIX,
    detect_format,
    load_documents,
    parse_taxonomy,
    serialize,
    write_serialized,
)
from .layout import ViewConfig, layout_document
from .model import Document, Taxonomy, document_warnings, validate_document
from .session import replay as replay_diff
from .svg import StyleSheet, render_annotation_svg, render_tree_svg
from .tree import extract_tree


def _read_input(path: str, fmt: Optional[str], parser: argparse.ArgumentParser):
    if path == "-":
        if fmt in (None, "brat"):
            parser.error("stdin input needs --from with a single-file format")
        from .formats import parse_bioc, parse_conllx
        data = sys.stdin.read()
        if fmt == "conllx":
            doc, report = parse_conllx(data)
            return [doc], report
        docs, report = parse_bioc(data)
        return docs, report
    return load_documents(path, fmt)


def _sibling_taxonomy(path: str) -> Optional[Taxonomy]:
    if path == "-":
        return None
    p = Path(path)
    for candidate in (p.with_suffix(TAXONOMY_SUFFIX),
                      p.parent / f"default{TAXONOMY_SUFFIX}"):
        if candidate.exists():
            taxonomy, _ = parse_taxonomy(candidate.read_text(encoding="utf-8"))
            return taxonomy
    return None


def _load_taxonomy_arg(arg: Optional[str], source_path: str) -> Optional[Taxonomy]:
    if arg:
        taxonomy, _ = parse_taxonomy(Path(arg).read_text(encoding="utf-8"))
        return taxonomy
    return _sibling_taxonomy(source_path)


def render_document_svg(doc: Document, taxonomy: Optional[Taxonomy],
                        width: Optional[float] = None,
                        semantics: bool = True, syntax: bool = True) -> bytes:
    """Single rendering path shared by the CLI and the service."""
    from .model import VisibilityFilter
    cfg = ViewConfig(
        row_width=width if width is not None else ViewConfig().row_width,
        visibility=VisibilityFilter(show_semantic=semantics, show_syntactic=syntax))
    geometry = layout_document(doc, cfg)
    return render_annotation_svg(geometry, StyleSheet.from_taxonomy(taxonomy))


def _print_report(report) -> None:
    for locator, message in report.warnings:
        print(f"warning: {locator}: {message}", file=sys.stderr)
    for locator, fragment in report.dropped:
        print(f"dropped: {locator}: {fragment}", file=sys.stderr)


def _cmd_convert(args, parser) -> int:
    docs, report = _read_input(args.input, args.from_format, parser)
    _print_report(report)
    if len(docs) > 1:
        print(f"note: input holds {len(docs)} documents; converting the first",
              file=sys.stderr)
    parts, out_report = serialize(docs[0], args.to_format)
    _print_report(out_report)
    if args.output and args.output != "-":
        for path in write_serialized(parts, args.output):
            print(f"wrote {path}", file=sys.stderr)
    else:
        if len(parts) > 1:
            parser.error("this target format writes multiple files; pass OUT")
        sys.stdout.write(next(iter(parts.values())))
    return 0


def _cmd_validate(args, parser) -> int:
    try:
        docs, report = _read_input(args.input, args.from_format, parser)
    except ParseFailure as failure:
        for issue in failure.issues:
            print(f"error: {issue.code}: {issue}", file=sys.stderr)
        return 1
    _print_report(report)
    status = 0
    for doc in docs:
        problems = validate_document(doc)
        for problem in problems:
            print(f"error: {doc.id}: {problem}", file=sys.stderr)
        for note in document_warnings(doc):
            print(f"warning: {doc.id}: {note}", file=sys.stderr)
        if problems:
            status = 1
    if status == 0:
        total = sum(len(d.mentions) + len(d.relations) for d in docs)
        print(f"ok: {len(docs)} document(s), {total} annotation element(s)")
    return status


def _cmd_render(args, parser) -> int:
    docs, report = _read_input(args.input, args.from_format, parser)
    _print_report(report)
    taxonomy = _load_taxonomy_arg(args.taxonomy, args.input)
    svg = render_document_svg(
        docs[0], taxonomy, width=args.width,
        semantics=not args.no_semantics, syntax=not args.no_syntax)
    _write_bytes(svg, args.output)
    return 0


def _cmd_tree(args, parser) -> int:
    docs, report = _read_input(args.input, args.from_format, parser)
    _print_report(report)
    doc = docs[0]
    if args.select.startswith("@") and args.select[1:].isdigit():
        from .model import AnchorRef
        ref = AnchorRef.token(int(args.select[1:]))
    elif args.select in doc.mentions:
        from .model import AnchorRef
        ref = AnchorRef.mention(args.select)
    else:
        from .model import AnchorRef
        ref = AnchorRef.relation(args.select)
    tree = extract_tree(doc, ref)
    taxonomy = _load_taxonomy_arg(args.taxonomy, args.input)
    svg = render_tree_svg(tree, StyleSheet.from_taxonomy(taxonomy))
    _write_bytes(svg, args.output)
    return 0


def _cmd_serve(args, parser) -> int:
    import uvicorn

    from .service import create_app
    frontend = Path(args.frontend) if args.frontend else None
    app = create_app(args.data, default_width=args.width, frontend_dir=frontend)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_replay(args, parser) -> int:
    docs, report = _read_input(args.base, args.from_format, parser)
    _print_report(report)
    diff_text = (sys.stdin.read() if args.diff == "-"
                 else Path(args.diff).read_text(encoding="utf-8"))
    result = replay_diff(docs[0], diff_text)
    target_format = args.to_format or docs[0].source_format
    parts, out_report = serialize(result, target_format)
    _print_report(out_report)
    if args.output and args.output != "-":
        for path in write_serialized(parts, args.output):
            print(f"wrote {path}", file=sys.stderr)
    else:
        if len(parts) > 1:
            parser.error("this target format writes multiple files; pass -o OUT")
        sys.stdout.write(next(iter(parts.values())))
    return 0


def _write_bytes(data: bytes, output: str) -> None:
    if output == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(output).write_bytes(data)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annograph",
        description="Parse, lay out, render, edit, and serve annotation graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_from(p):
        p.add_argument("--from", dest="from_format",
                       choices=("brat", "conllx", "bioc"), default=None,
                       help="input format (default: inferred from the extension)")

    p = sub.add_parser("convert", help="convert between annotation formats")
    add_from(p)
    p.add_argument("--to", dest="to_format", required=True,
                   choices=("brat", "conllx", "bioc"))
    p.add_argument("input")
    p.add_argument("output", nargs="?", default=None,
                   help="output stem; suffixes are added per format")

    p = sub.add_parser("validate", help="parse a file and report every violation")
    add_from(p)
    p.add_argument("input")

    p = sub.add_parser("render", help="render the annotation arc diagram to SVG")
    add_from(p)
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--width", type=float, default=None)
    p.add_argument("--taxonomy", default=None,
                   help="taxonomy file (default: sibling <stem>.taxonomy)")
    p.add_argument("--no-syntax", action="store_true")
    p.add_argument("--no-semantics", action="store_true")

    p = sub.add_parser("tree", help="render the summary tree for one element")
    add_from(p)
    p.add_argument("input")
    p.add_argument("--select", required=True,
                   help="element id, or @N for token N")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--taxonomy", default=None)

    p = sub.add_parser("serve", help="run the HTTP service over a data folder")
    env = os.environ
    p.add_argument("--data", default=env.get("ANNOGRAPH_DATA"),
                   required="ANNOGRAPH_DATA" not in env)
    p.add_argument("--host", default=env.get("ANNOGRAPH_HOST", "127.0.0.1"))
    p.add_argument("--port", type=int,
                   default=int(env.get("ANNOGRAPH_PORT", "8000")))
    p.add_argument("--width", type=float,
                   default=float(env["ANNOGRAPH_WIDTH"])
                   if "ANNOGRAPH_WIDTH" in env else None)
    p.add_argument("--frontend", default=env.get("ANNOGRAPH_FRONTEND"),
                   help="directory with a built web UI to serve at /")

    p = sub.add_parser("replay", help="apply a diff log to a base document")
    add_from(p)
    p.add_argument("base")
    p.add_argument("diff")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--to", dest="to_format", default=None,
                   choices=("brat", "conllx", "bioc"),
                   help="output format (default: the base document's format)")

    return parser


_COMMANDS = {
    "convert": _cmd_convert,
    "validate": _cmd_validate,
    "render": _cmd_render,
    "tree": _cmd_tree,
    "serve": _cmd_serve,
    "replay": _cmd_replay,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve" and args.width is None:
        from .service import DEFAULT_ROW_WIDTH
        args.width = DEFAULT_ROW_WIDTH
    try:
        return _COMMANDS[args.command](args, parser)
    except ParseFailure as failure:
        for issue in failure.issues:
            print(f"error: {issue.code}: {issue}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except EngineError as err:
        print(f"error: {err.code}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
