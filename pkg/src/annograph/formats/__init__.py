"""Format readers and writers mapping files into and out of the graph model."""

from __future__ import annotations

from pathlib import Path

from ..errors import NotRepresentable
from ..model import Document
from .bioc import parse_bioc, serialize_bioc
from .brat import parse_brat, serialize_brat
from .common import ParseReport, tokenize_text
from .conllx import parse_conllx, serialize_conllx
from .taxonomy import parse_taxonomy, serialize_taxonomy

FORMATS = ("brat", "conllx", "bioc")

_EXTENSIONS = {
    ".ann": "brat",
    ".txt": "brat",
    ".conll": "conllx",
    ".conllx": "conllx",
    ".xml": "bioc",
    ".bioc": "bioc",
}

TAXONOMY_SUFFIX = ".taxonomy"


def detect_format(path: str | Path) -> str | None:
    return _EXTENSIONS.get(Path(path).suffix.lower())


def serialize(doc: Document, fmt: str) -> tuple[dict[str, str], ParseReport]:
    """Emit ``doc`` in the chosen format as ``{part_name: content}``.

    BRAT yields ``txt`` and ``ann`` parts, CoNLL-X a ``conll`` part, BioC an
    ``xml`` part.  The report lists everything the target format dropped.
    """
    if fmt == "brat":
        return serialize_brat(doc)
    if fmt == "conllx":
        return serialize_conllx(doc)
    if fmt == "bioc":
        return serialize_bioc(doc)
    raise NotRepresentable(f"unknown format {fmt!r}")


def load_documents(path: str | Path, fmt: str | None = None,
                   doc_id: str | None = None) -> tuple[list[Document], ParseReport]:
    """Parse the file(s) at ``path``; BRAT resolves its .txt/.ann sibling."""
    path = Path(path)
    fmt = fmt or detect_format(path)
    if fmt is None:
        raise NotRepresentable(f"cannot infer a format for {path.name!r}")
    doc_id = doc_id or path.stem
    if fmt == "brat":
        stem = path.with_suffix("")
        txt_path, ann_path = stem.with_suffix(".txt"), stem.with_suffix(".ann")
        doc, report = parse_brat(
            txt_path.read_text(encoding="utf-8"),
            ann_path.read_text(encoding="utf-8"),
            doc_id=doc_id)
        return [doc], report
    if fmt == "conllx":
        doc, report = parse_conllx(path.read_text(encoding="utf-8"), doc_id=doc_id)
        return [doc], report
    docs, report = parse_bioc(path.read_text(encoding="utf-8"))
    return docs, report


def write_serialized(parts: dict[str, str], out_stem: str | Path) -> list[Path]:
    """Write each emitted part next to ``out_stem`` with its format suffix."""
    suffixes = {"txt": ".txt", "ann": ".ann", "conll": ".conll", "xml": ".xml"}
    written = []
    for part, content in parts.items():
        target = Path(str(out_stem)).with_suffix(suffixes[part])
        target.write_text(content, encoding="utf-8")
        written.append(target)
    return written


__all__ = [
    "FORMATS",
    "ParseReport",
    "detect_format",
    "load_documents",
    "parse_bioc",
    "parse_brat",
    "parse_conllx",
    "parse_taxonomy",
    "serialize",
    "serialize_bioc",
    "serialize_brat",
    "serialize_conllx",
    "serialize_taxonomy",
    "tokenize_text",
    "write_serialized",
]
