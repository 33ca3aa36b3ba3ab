"""BioC XML reader and writer.

Supported structure: ``collection / document / passage`` with passage-level
``text``, ``annotation`` (infon ``type``, one or more ``location`` elements,
``text``), and ``relation`` (infon ``type``, ``node`` children with ``refid``
and ``role``).  Annotation offsets are passage-relative and are rebased onto
a single whole-document text built by joining passages with a blank line.

A ``node`` whose refid names another relation produces a relation-valued
endpoint; a node with role ``trigger`` becomes the relation's trigger; a
refid of the form ``@N`` references token ``N``.  Infons ``layer``,
``directionality``, and ``label`` carry fields the base format lacks, which
makes this the lossless interchange format of the engine.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

from ..errors import OffsetOutOfBounds, UnknownRefId, XmlMalformed
from ..model import (
    AnchorRef,
    Argument,
    Document,
    Mention,
    Relation,
    id_sort_key,
)
from .common import IssueCollector, ParseReport, tokenize_text

PASSAGE_SEPARATOR = "\n\n"


def _infons(element: ET.Element) -> dict[str, str]:
    return {
        infon.get("key", ""): (infon.text or "")
        for infon in element.findall("infon")
    }


def parse_bioc(xml_data: str) -> tuple[list[Document], ParseReport]:
    report = ParseReport(source_format="bioc")
    issues = IssueCollector()
    try:
        root = ET.fromstring(xml_data)
    except ET.ParseError as err:
        raise XmlMalformed(str(err)) from err
    if root.tag != "collection":
        raise XmlMalformed(f"expected <collection> root, found <{root.tag}>")

    documents: list[Document] = []
    for doc_index, doc_el in enumerate(root.findall("document")):
        doc_id = (doc_el.findtext("id") or f"doc{doc_index}").strip() or f"doc{doc_index}"
        locator_base = f"document {doc_id}"

        passages = doc_el.findall("passage")
        pieces: list[str] = []
        bases: list[int] = []
        cursor = 0
        raw_annotations: list[tuple[str, int, ET.Element]] = []
        raw_relations: list[tuple[str, ET.Element]] = []
        for p_index, passage in enumerate(passages):
            passage_text = passage.findtext("text") or ""
            bases.append(cursor)
            pieces.append(passage_text)
            for sentence in passage.findall("sentence"):
                report.warn(f"{locator_base} passage {p_index}",
                            "sentence-level content is not supported; dropped")
                report.drop(f"{locator_base} passage {p_index}",
                            ET.tostring(sentence, encoding="unicode")[:120])
            for annotation in passage.findall("annotation"):
                raw_annotations.append((locator_base, cursor, annotation))
            for relation in passage.findall("relation"):
                raw_relations.append((locator_base, relation))
            cursor += len(passage_text) + len(PASSAGE_SEPARATOR)
        for relation in doc_el.findall("relation"):
            raw_relations.append((locator_base, relation))

        text = PASSAGE_SEPARATOR.join(pieces)
        tokens = tokenize_text(text)

        mentions: dict[str, Mention] = {}
        for locator_base, base, annotation in raw_annotations:
            aid = annotation.get("id") or f"M{len(mentions)}"
            locator = f"{locator_base} annotation {aid}"
            infons = _infons(annotation)
            anchors: list[tuple[int, int]] = []
            ok = True
            for location in annotation.findall("location"):
                try:
                    offset = int(location.get("offset", ""))
                    length = int(location.get("length", ""))
                except ValueError:
                    issues.add(XmlMalformed("non-numeric location", locator))
                    ok = False
                    break
                start, end = base + offset, base + offset + length
                if not (0 <= start <= end <= len(text)):
                    issues.add(OffsetOutOfBounds(
                        f"span ({start}, {end}) beyond text length {len(text)}", locator))
                    ok = False
                    break
                anchors.append((start, end))
            if not ok:
                continue
            if not anchors:
                issues.add(XmlMalformed("annotation has no location", locator))
                continue
            anchors.sort()
            surface = " ".join(text[s:e] for s, e in anchors)
            given = annotation.findtext("text")
            if given and given != surface:
                report.warn(locator, f"annotation text {given!r} differs from "
                                     f"text at offsets {surface!r}")
            mentions[aid] = Mention(
                id=aid,
                label=infons.get("label", surface),
                anchors=tuple(anchors),
                type=infons.get("type") or None,
                layer=infons.get("layer", "semantic"),  # type: ignore[arg-type]
            )

        relation_ids = set()
        for locator_base, relation in raw_relations:
            rid = relation.get("id")
            if rid:
                relation_ids.add(rid)

        relations: dict[str, Relation] = {}
        for locator_base, relation in raw_relations:
            rid = relation.get("id") or f"R{len(relations)}"
            locator = f"{locator_base} relation {rid}"
            infons = _infons(relation)
            trigger = None
            arguments: list[Argument] = []
            ok = True
            for node in relation.findall("node"):
                refid = node.get("refid", "")
                role = node.get("role", "") or "arg"
                if refid.startswith("@") and refid[1:].isdigit():
                    index = int(refid[1:])
                    if index >= len(tokens):
                        issues.add(UnknownRefId(
                            f"token index {index} out of range", locator))
                        ok = False
                        break
                    ref = AnchorRef.token(index)
                elif refid in mentions:
                    ref = AnchorRef.mention(refid)
                elif refid in relation_ids:
                    ref = AnchorRef.relation(refid)
                else:
                    issues.add(UnknownRefId(f"refid {refid!r} not in document", locator))
                    ok = False
                    break
                if role == "trigger":
                    trigger = ref
                else:
                    arguments.append(Argument(role, ref))
            if not ok:
                continue
            type_name = infons.get("type") or None
            relations[rid] = Relation(
                id=rid,
                label=infons.get("label", type_name or ""),
                arguments=tuple(arguments),
                trigger=trigger,
                directionality=infons.get("directionality", "directed"),  # type: ignore[arg-type]
                type=type_name,
                layer=infons.get("layer", "semantic"),  # type: ignore[arg-type]
            )

        metadata: dict[str, object] = {
            "passages": [[bases[i], bases[i] + len(pieces[i])] for i in range(len(pieces))],
        }
        documents.append(Document(
            id=doc_id, text=text, tokens=tokens, mentions=mentions,
            relations=relations, source_format="bioc", metadata=metadata))

    issues.raise_if_any()
    return documents, report


def _ref_to_refid(ref: AnchorRef) -> str:
    if ref.kind == "token":
        return f"@{ref.ref}"
    return str(ref.ref)


def serialize_bioc(docs: list[Document] | Document) -> tuple[dict[str, str], ParseReport]:
    """Emit one collection holding the given document(s); lossless."""
    if isinstance(docs, Document):
        docs = [docs]
    report = ParseReport(source_format="bioc")
    out: list[str] = ['<?xml version="1.0" encoding="UTF-8"?>']
    out.append("<collection><source>annograph</source><date></date><key></key>")
    for doc in docs:
        out.append("<document>")
        out.append(f"<id>{escape(doc.id)}</id>")
        passages = doc.metadata.get("passages") if isinstance(doc.metadata, dict) else None
        if not passages:
            passages = [[0, len(doc.text)]]

        def passage_of(position: int) -> int:
            for i, (s, e) in enumerate(passages):
                if s <= position <= e:
                    return i
            return len(passages) - 1

        mentions_by_passage: dict[int, list[Mention]] = {}
        for m in sorted(doc.mentions.values(), key=lambda m: id_sort_key(m.id)):
            mentions_by_passage.setdefault(passage_of(m.anchors[0][0]), []).append(m)

        for i, (start, end) in enumerate(passages):
            out.append("<passage>")
            out.append(f"<offset>{start}</offset>")
            out.append(f"<text>{escape(doc.text[start:end])}</text>")
            for m in mentions_by_passage.get(i, []):
                out.append(f"<annotation id={quoteattr(m.id)}>")
                if m.type is not None:
                    out.append(f'<infon key="type">{escape(m.type)}</infon>')
                if m.layer != "semantic":
                    out.append(f'<infon key="layer">{escape(m.layer)}</infon>')
                surface = " ".join(doc.text[s:e] for s, e in m.anchors)
                if m.label != surface:
                    out.append(f'<infon key="label">{escape(m.label)}</infon>')
                for (s, e) in m.anchors:
                    out.append(f'<location offset="{s - start}" length="{e - s}"/>')
                out.append(f"<text>{escape(surface)}</text>")
                out.append("</annotation>")
            out.append("</passage>")

        for r in sorted(doc.relations.values(), key=lambda r: id_sort_key(r.id)):
            out.append(f"<relation id={quoteattr(r.id)}>")
            if r.type is not None:
                out.append(f'<infon key="type">{escape(r.type)}</infon>')
            if r.label != (r.type or ""):
                out.append(f'<infon key="label">{escape(r.label)}</infon>')
            if r.layer != "semantic":
                out.append(f'<infon key="layer">{escape(r.layer)}</infon>')
            if r.directionality != "directed":
                out.append(f'<infon key="directionality">{escape(r.directionality)}</infon>')
            if r.trigger is not None:
                out.append(f'<node refid={quoteattr(_ref_to_refid(r.trigger))} role="trigger"/>')
            for a in r.arguments:
                out.append(f"<node refid={quoteattr(_ref_to_refid(a.target))} "
                           f"role={quoteattr(a.role)}/>")
            out.append("</relation>")
        out.append("</document>")
    out.append("</collection>")
    return {"xml": "\n".join(out) + "\n"}, report
