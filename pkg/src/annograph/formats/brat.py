"""Standoff (.txt/.ann) reader and writer.

Accepts standard standoff records and a few extensions that make the format
a full-fidelity target for documents originating in other formats:

* argument or trigger ids of the form ``@N`` reference whitespace tokens by
  index (plain standoff has no way to point at bare words);
* attribute names ``Label``, ``Layer``, and ``Directionality`` set those
  fields on their target instead of decorating its display label;
* relation (R) records may carry arbitrary role names, more than two
  arguments, and may reference other E/R records;
* zero-width spans (``start == end``) are allowed on text-bound records;
* records whose id prefix is non-standard are classified by body shape.

All other attribute records decorate the target's label (``label [Name]`` or
``label [Name=Value]``) and are kept in document metadata so they round-trip.
Normalization (N) and comment (#) records are retained as metadata and are
never rendered.
"""

from __future__ import annotations

import re
from typing import Optional

from ..errors import (
    DanglingReference,
    MalformedLine,
    OffsetOutOfBounds,
    TextMismatch,
)
from ..model import (
    AnchorRef,
    Argument,
    Document,
    Mention,
    Relation,
    id_sort_key,
    validate_document,
)
from .common import IssueCollector, ParseReport, tokenize_text

_SPAN_BODY_RE = re.compile(r"^(\S+) (\d+ \d+(?:;\d+ \d+)*)$")
_ROLE_PAIR_RE = re.compile(r"^([^:\s]+):(\S+)$")
_TOKEN_REF_RE = re.compile(r"^@(\d+)$")

STRUCTURAL_ATTRIBUTES = ("Label", "Layer", "Directionality")


def _clean_fragment(s: str) -> str:
    return s.replace("\n", " ").replace("\t", " ")


def _surface_for_anchors(text: str, anchors: tuple[tuple[int, int], ...]) -> str:
    return " ".join(_clean_fragment(text[s:e]) for s, e in anchors)


def parse_brat(txt: str, ann: str, doc_id: str = "doc") -> tuple[Document, ParseReport]:
    """Parse a text/annotation pair into a document.

    Raises :class:`~annograph.errors.ParseFailure` carrying every fatal
    problem found; skippable content lands in the report instead.
    """
    report = ParseReport(source_format="brat")
    issues = IssueCollector()
    tokens = tokenize_text(txt)
    n = len(txt)

    mentions: dict[str, Mention] = {}
    raw_events: list[tuple[str, str, str, list[tuple[str, str]]]] = []
    raw_relations: list[tuple[str, str, str, list[tuple[str, str]]]] = []
    raw_attributes: list[tuple[str, str, str, str, Optional[str]]] = []
    normalizations: list[list[str]] = []
    comments: list[list[str]] = []
    seen_ids: set[str] = set()

    for lineno, raw in enumerate(ann.splitlines(), start=1):
        locator = f"line {lineno}"
        if not raw.strip():
            continue
        parts = raw.split("\t")
        if len(parts) < 2:
            issues.add(MalformedLine("expected an id, a tab, and a body", locator))
            continue
        record_id, body = parts[0], parts[1]

        if record_id.startswith("#"):
            comments.append([record_id, "\t".join(parts[1:])])
            continue

        kind = _classify(record_id, body)
        if kind == "textbound":
            m = _SPAN_BODY_RE.match(body)
            if m is None:
                issues.add(MalformedLine(f"bad text-bound body {body!r}", locator))
                continue
            type_name = None if m.group(1) == "_" else m.group(1)
            anchors: list[tuple[int, int]] = []
            bad = False
            for chunk in m.group(2).split(";"):
                s_str, e_str = chunk.split(" ")
                s, e = int(s_str), int(e_str)
                if s > e:
                    issues.add(MalformedLine(f"span start {s} after end {e}", locator))
                    bad = True
                    break
                if e > n:
                    issues.add(OffsetOutOfBounds(f"span ({s}, {e}) beyond text length {n}", locator))
                    bad = True
                    break
                if anchors and s < anchors[-1][1]:
                    issues.add(MalformedLine("fragments unsorted or overlapping", locator))
                    bad = True
                    break
                anchors.append((s, e))
            if bad:
                continue
            if record_id in seen_ids:
                issues.add(MalformedLine(f"duplicate id {record_id}", locator))
                continue
            given = parts[2] if len(parts) > 2 else ""
            surface = _surface_for_anchors(txt, tuple(anchors))
            if given and given != surface:
                issues.add(TextMismatch(
                    f"record says {given!r} but text at offsets is {surface!r}", locator))
                continue
            seen_ids.add(record_id)
            mentions[record_id] = Mention(
                id=record_id, label=surface, anchors=tuple(anchors), type=type_name)
        elif kind == "event":
            chunks = body.split(" ")
            first = _ROLE_PAIR_RE.match(chunks[0])
            if first is None:
                issues.add(MalformedLine(f"bad event head {chunks[0]!r}", locator))
                continue
            args: list[tuple[str, str]] = []
            ok = True
            for chunk in chunks[1:]:
                if not chunk:
                    continue
                pair = _ROLE_PAIR_RE.match(chunk)
                if pair is None:
                    issues.add(MalformedLine(f"bad argument {chunk!r}", locator))
                    ok = False
                    break
                args.append((pair.group(1), pair.group(2)))
            if not ok:
                continue
            if not args:
                issues.add(MalformedLine("event carries no arguments", locator))
                continue
            if record_id in seen_ids:
                issues.add(MalformedLine(f"duplicate id {record_id}", locator))
                continue
            seen_ids.add(record_id)
            raw_events.append((locator, record_id, chunks[0], args))
        elif kind == "relation":
            chunks = [c for c in body.split(" ") if c]
            if len(chunks) < 3:
                issues.add(MalformedLine("relation needs a type and two arguments", locator))
                continue
            args = []
            ok = True
            for chunk in chunks[1:]:
                pair = _ROLE_PAIR_RE.match(chunk)
                if pair is None:
                    issues.add(MalformedLine(f"bad argument {chunk!r}", locator))
                    ok = False
                    break
                args.append((pair.group(1), pair.group(2)))
            if not ok:
                continue
            if record_id in seen_ids:
                issues.add(MalformedLine(f"duplicate id {record_id}", locator))
                continue
            seen_ids.add(record_id)
            raw_relations.append((locator, record_id, chunks[0], args))
        elif kind == "attribute":
            chunks = body.split(" ")
            if len(chunks) < 2:
                issues.add(MalformedLine("attribute needs a name and a target", locator))
                continue
            value = " ".join(chunks[2:]) if len(chunks) > 2 else None
            raw_attributes.append((locator, record_id, chunks[0], chunks[1], value))
        elif kind == "normalization":
            normalizations.append([record_id, body] + parts[2:])
        else:
            report.warn(locator, f"unrecognized record {record_id!r}; dropped")
            report.drop(locator, raw)

    issues.raise_if_any()

    # Reference resolution (two passes so forward references work).
    known = set(mentions)
    known.update(rid for _, rid, _, _ in raw_events)
    known.update(rid for _, rid, _, _ in raw_relations)

    def resolve(locator: str, element_id: str) -> Optional[AnchorRef]:
        token_ref = _TOKEN_REF_RE.match(element_id)
        if token_ref:
            index = int(token_ref.group(1))
            if index >= len(tokens):
                issues.add(DanglingReference(
                    f"token index {index} out of range", locator))
                return None
            return AnchorRef.token(index)
        if element_id in mentions:
            return AnchorRef.mention(element_id)
        if element_id in known:
            return AnchorRef.relation(element_id)
        issues.add(DanglingReference(f"unknown id {element_id!r}", locator))
        return None

    relations: dict[str, Relation] = {}
    for locator, rid, head, args in raw_events:
        pair = _ROLE_PAIR_RE.match(head)
        type_name = None if pair.group(1) == "_" else pair.group(1)
        trigger = resolve(locator, pair.group(2))
        arguments = []
        for role, target_id in args:
            target = resolve(locator, target_id)
            if target is not None:
                arguments.append(Argument(role, target))
        if trigger is None or len(arguments) < len(args):
            continue
        relations[rid] = Relation(
            id=rid, label=type_name or "", arguments=tuple(arguments),
            trigger=trigger, type=type_name)
    for locator, rid, type_str, args in raw_relations:
        type_name = None if type_str == "_" else type_str
        arguments = []
        for role, target_id in args:
            target = resolve(locator, target_id)
            if target is not None:
                arguments.append(Argument(role, target))
        if len(arguments) < len(args):
            continue
        relations[rid] = Relation(
            id=rid, label=type_name or "", arguments=tuple(arguments), type=type_name)

    issues.raise_if_any()

    # Attributes: structural ones set fields, the rest decorate labels.
    overrides: dict[str, dict[str, str]] = {}
    kept_attributes: list[list] = []
    suffixes: dict[str, list[str]] = {}
    for locator, aid, name, target_id, value in raw_attributes:
        if target_id not in mentions and target_id not in relations:
            report.warn(locator, f"attribute {aid} targets unknown id {target_id!r}; dropped")
            report.drop(locator, f"{aid} {name} {target_id}")
            continue
        if name in STRUCTURAL_ATTRIBUTES:
            if value is None:
                report.warn(locator, f"attribute {name} needs a value; dropped")
                continue
            overrides.setdefault(target_id, {})[name] = value
            continue
        decoration = f" [{name}]" if value is None else f" [{name}={value}]"
        suffixes.setdefault(target_id, []).append(decoration)
        kept_attributes.append([aid, name, target_id, value])

    def finish_label(element_id: str, base: str) -> str:
        label = base + "".join(suffixes.get(element_id, []))
        if "Label" in overrides.get(element_id, {}):
            label = overrides[element_id]["Label"]
        return label

    for mid in list(mentions):
        m = mentions[mid]
        over = overrides.get(mid, {})
        mentions[mid] = Mention(
            id=m.id,
            label=finish_label(mid, m.label),
            anchors=m.anchors,
            type=m.type,
            layer=over.get("Layer", m.layer),  # type: ignore[arg-type]
        )
    for rid in list(relations):
        r = relations[rid]
        over = overrides.get(rid, {})
        relations[rid] = Relation(
            id=r.id,
            label=finish_label(rid, r.label),
            arguments=r.arguments,
            trigger=r.trigger,
            directionality=over.get("Directionality", r.directionality),  # type: ignore[arg-type]
            type=r.type,
            layer=over.get("Layer", r.layer),  # type: ignore[arg-type]
        )

    metadata: dict[str, object] = {}
    brat_meta: dict[str, object] = {}
    if kept_attributes:
        brat_meta["attributes"] = kept_attributes
    if normalizations:
        brat_meta["normalizations"] = normalizations
    if comments:
        brat_meta["comments"] = comments
    if brat_meta:
        metadata["brat"] = brat_meta

    doc = Document(
        id=doc_id, text=txt, tokens=tokens, mentions=mentions,
        relations=relations, source_format="brat", metadata=metadata)

    for problem in validate_document(doc):
        issues.add(MalformedLine(problem))
    issues.raise_if_any()
    return doc, report


_STANDARD_ID_RE = re.compile(r"^([TERAMN])\d+$")


def _classify(record_id: str, body: str) -> str:
    standard = _STANDARD_ID_RE.match(record_id)
    if standard:
        return {
            "T": "textbound", "E": "event", "R": "relation",
            "A": "attribute", "M": "attribute", "N": "normalization",
        }[standard.group(1)]
    # Non-standard id: infer the record kind from the body shape.
    if _SPAN_BODY_RE.match(body):
        return "textbound"
    chunks = [c for c in body.split(" ") if c]
    if chunks and _ROLE_PAIR_RE.match(chunks[0]):
        return "event"
    if len(chunks) >= 3 and all(_ROLE_PAIR_RE.match(c) for c in chunks[1:]):
        return "relation"
    return "unknown"


def _ref_to_id(ref: AnchorRef) -> str:
    if ref.kind == "token":
        return f"@{ref.ref}"
    return str(ref.ref)


def serialize_brat(doc: Document) -> tuple[dict[str, str], ParseReport]:
    """Emit a ``{"txt": ..., "ann": ...}`` pair; lossless for this model."""
    report = ParseReport(source_format="brat")
    lines: list[str] = []

    brat_meta = doc.metadata.get("brat", {}) if isinstance(doc.metadata, dict) else {}
    stored_attributes = list(brat_meta.get("attributes", []))

    suffixes: dict[str, list[str]] = {}
    for aid, name, target_id, value in stored_attributes:
        decoration = f" [{name}]" if value is None else f" [{name}={value}]"
        suffixes.setdefault(target_id, []).append(decoration)

    synthesized: list[tuple[str, str, str]] = []  # (name, target, value)

    def note_overrides(element_id: str, label: str, default_label: str,
                       layer: str, directionality: Optional[str]) -> None:
        expected = default_label + "".join(suffixes.get(element_id, []))
        if label != expected:
            cleaned = _clean_fragment(label)
            if cleaned != label:
                report.warn(element_id, "label contains tab/newline; flattened to spaces")
            synthesized.append(("Label", element_id, cleaned))
        if layer != "semantic":
            synthesized.append(("Layer", element_id, layer))
        if directionality is not None and directionality != "directed":
            synthesized.append(("Directionality", element_id, directionality))

    for m in sorted(doc.mentions.values(), key=lambda m: id_sort_key(m.id)):
        spans = ";".join(f"{s} {e}" for s, e in m.anchors)
        surface = _surface_for_anchors(doc.text, m.anchors)
        lines.append(f"{m.id}\t{m.type or '_'} {spans}\t{surface}")
        note_overrides(m.id, m.label, surface, m.layer, None)

    for r in sorted(doc.relations.values(), key=lambda r: id_sort_key(r.id)):
        type_str = r.type or "_"
        args = " ".join(f"{a.role}:{_ref_to_id(a.target)}" for a in r.arguments)
        if r.trigger is not None:
            lines.append(f"{r.id}\t{type_str}:{_ref_to_id(r.trigger)} {args}")
        else:
            lines.append(f"{r.id}\t{type_str} {args}")
        note_overrides(r.id, r.label, r.type or "", r.layer, r.directionality)

    attr_numbers = [
        id_sort_key(aid)[1] for aid, *_ in stored_attributes
        if str(aid).startswith("A")
    ]
    next_attr = max(attr_numbers, default=0) + 1
    for aid, name, target_id, value in sorted(
            stored_attributes, key=lambda rec: id_sort_key(str(rec[0]))):
        if value is None:
            lines.append(f"{aid}\t{name} {target_id}")
        else:
            lines.append(f"{aid}\t{name} {target_id} {value}")
    for name, target_id, value in synthesized:
        lines.append(f"A{next_attr}\t{name} {target_id} {value}")
        next_attr += 1

    for nid, *rest in sorted(brat_meta.get("normalizations", []),
                             key=lambda rec: id_sort_key(str(rec[0]))):
        lines.append("\t".join([nid, *rest]))
    for cid, *rest in brat_meta.get("comments", []):
        lines.append("\t".join([cid, *rest]))

    ann = "".join(line + "\n" for line in lines)
    return {"txt": doc.text, "ann": ann}, report
