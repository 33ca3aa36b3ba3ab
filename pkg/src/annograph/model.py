"""Unified annotation graph: tokens, labelled spans, and relations over relations.

Documents and taxonomies are immutable values.  Every operation returns a new
version and leaves its inputs untouched, so old versions can be retained
freely for undo, diff replay, and concurrent readers.

A relation's endpoints are :class:`AnchorRef` values and may name tokens,
mentions, or other relations; the relation-to-relation reference graph is
kept acyclic so that nested structures always unfold to finite trees.
"""

from __future__ import annotations

import hashlib
import json
import re
import warnings as _warnings
from dataclasses import dataclass, field, replace
from typing import Iterator, Literal, Mapping, Optional, Union

from .errors import (
    CycleDetected,
    DanglingReference,
    DuplicateId,
    InvalidRelation,
    UnknownId,
    UnknownType,
    UnknownTypeWarning,
)

Layer = Literal["semantic", "syntactic"]
Directionality = Literal["directed", "undirected", "bidirectional"]
Span = tuple[int, int]

LAYERS = ("semantic", "syntactic")
DIRECTIONALITIES = ("directed", "undirected", "bidirectional")

_ID_KEY_RE = re.compile(r"([^0-9]*)([0-9]*)(.*)$")
_COLOR_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")


def id_sort_key(element_id: str) -> tuple[str, int, str]:
    """Natural ordering for annotation ids: T2 before T10, DEP2 before DEP11."""
    m = _ID_KEY_RE.match(element_id)
    prefix, digits, rest = m.group(1), m.group(2), m.group(3)
    return (prefix, int(digits) if digits else -1, rest)


# --- element types ------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    """One display unit of the text; ``surface == text[start:end]``."""

    index: int
    start: int
    end: int
    surface: str


@dataclass(frozen=True)
class Mention:
    """A labelled (possibly discontinuous) span of the text.

    ``anchors`` holds one ``(start, end)`` pair per fragment, sorted and
    non-overlapping.  More than one fragment encodes a discontinuous span.
    """

    id: str
    label: str
    anchors: tuple[Span, ...]
    type: Optional[str] = None
    layer: Layer = "semantic"


@dataclass(frozen=True)
class AnchorRef:
    """A reference to exactly one token (by index), mention, or relation (by id)."""

    kind: Literal["token", "mention", "relation"]
    ref: Union[int, str]

    @classmethod
    def token(cls, index: int) -> "AnchorRef":
        return cls("token", index)

    @classmethod
    def mention(cls, mention_id: str) -> "AnchorRef":
        return cls("mention", mention_id)

    @classmethod
    def relation(cls, relation_id: str) -> "AnchorRef":
        return cls("relation", relation_id)

    def to_json(self) -> dict:
        return {self.kind: self.ref}

    @classmethod
    def from_json(cls, obj: Mapping) -> "AnchorRef":
        keys = [k for k in ("token", "mention", "relation") if obj.get(k) is not None]
        if len(keys) != 1:
            raise ValueError(f"anchor ref must set exactly one of token/mention/relation: {obj!r}")
        kind = keys[0]
        value = obj[kind]
        if kind == "token":
            value = int(value)
        return cls(kind, value)


@dataclass(frozen=True)
class Argument:
    role: str
    target: AnchorRef


@dataclass(frozen=True)
class Relation:
    """A typed, role-labelled link whose endpoints may themselves be relations.

    A missing ``trigger`` makes this a trigger-free relation, which requires
    at least two arguments.
    """

    id: str
    label: str
    arguments: tuple[Argument, ...]
    trigger: Optional[AnchorRef] = None
    directionality: Directionality = "directed"
    type: Optional[str] = None
    layer: Layer = "semantic"

    def references(self) -> Iterator[AnchorRef]:
        if self.trigger is not None:
            yield self.trigger
        for arg in self.arguments:
            yield arg.target


@dataclass(frozen=True)
class Document:
    """Immutable parsed text plus annotations, keyed by element id."""

    id: str
    text: str
    tokens: tuple[Token, ...]
    mentions: Mapping[str, Mention]
    relations: Mapping[str, Relation]
    source_format: str = "memory"
    taxonomy_ref: Optional[str] = None
    metadata: Mapping[str, object] = field(default_factory=dict)

    def has_element(self, element_id: str) -> bool:
        return element_id in self.mentions or element_id in self.relations

    def element(self, element_id: str) -> Union[Mention, Relation]:
        if element_id in self.mentions:
            return self.mentions[element_id]
        if element_id in self.relations:
            return self.relations[element_id]
        raise UnknownId(f"no element with id {element_id!r}")

    def resolve(self, ref: AnchorRef) -> Union[Token, Mention, Relation]:
        if ref.kind == "token":
            if not isinstance(ref.ref, int) or not 0 <= ref.ref < len(self.tokens):
                raise DanglingReference(f"token index {ref.ref!r} out of range")
            return self.tokens[ref.ref]
        if ref.kind == "mention":
            if ref.ref not in self.mentions:
                raise DanglingReference(f"unknown mention id {ref.ref!r}")
            return self.mentions[ref.ref]
        if ref.ref not in self.relations:
            raise DanglingReference(f"unknown relation id {ref.ref!r}")
        return self.relations[ref.ref]


# --- taxonomy -----------------------------------------------------------------

@dataclass(frozen=True)
class TypeEntry:
    """One node of the annotation-type tree; ``color`` is always #RRGGBB."""

    name: str
    color: str
    children: tuple["TypeEntry", ...] = ()


@dataclass(frozen=True)
class Taxonomy:
    roots: tuple[TypeEntry, ...] = ()

    def iter_entries(self) -> Iterator[TypeEntry]:
        stack = list(reversed(self.roots))
        while stack:
            entry = stack.pop()
            yield entry
            stack.extend(reversed(entry.children))

    def names(self) -> list[str]:
        return [e.name for e in self.iter_entries()]

    def color_map(self) -> dict[str, str]:
        return {e.name: e.color for e in self.iter_entries()}

    def find(self, name: str) -> Optional[TypeEntry]:
        for entry in self.iter_entries():
            if entry.name == name:
                return entry
        return None


def recolor_type(taxonomy: Taxonomy, type_name: str, color: str,
                 cascade: bool = False) -> Taxonomy:
    """Return a new taxonomy with ``type_name`` recolored.

    With ``cascade`` every descendant entry takes the new color as well.
    """
    if not _COLOR_RE.match(color):
        raise ValueError(f"not a #RRGGBB color: {color!r}")
    if taxonomy.find(type_name) is None:
        raise UnknownType(f"type {type_name!r} not in taxonomy")

    def rebuild(entry: TypeEntry, painting: bool) -> TypeEntry:
        hit = entry.name == type_name
        paint = painting or hit
        children = tuple(rebuild(c, paint and cascade) for c in entry.children)
        if paint and (hit or cascade):
            return TypeEntry(entry.name, color, children)
        return TypeEntry(entry.name, entry.color, children)

    return Taxonomy(tuple(rebuild(r, False) for r in taxonomy.roots))


# --- visibility ----------------------------------------------------------------

@dataclass(frozen=True)
class VisibilityFilter:
    """Layer toggles plus type include/exclude sets and per-element hides."""

    include_types: Optional[frozenset[str]] = None
    exclude_types: frozenset[str] = frozenset()
    show_semantic: bool = True
    show_syntactic: bool = True
    hidden_ids: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.include_types is not None and self.include_types & self.exclude_types:
            raise ValueError("include_types and exclude_types must be disjoint")


def apply_filter(doc: Document, filt: VisibilityFilter,
                 taxonomy: Optional[Taxonomy] = None) -> frozenset[str]:
    """Ids of mentions and relations visible under ``filt``.

    A relation stays visible only while every endpoint it references is
    visible (tokens always are).  Filter names absent from the taxonomy are
    reported as :class:`UnknownTypeWarning`, never as failures.
    """
    if taxonomy is not None:
        known = set(taxonomy.names())
        named = set(filt.include_types or ()) | set(filt.exclude_types)
        for name in sorted(named - known):
            _warnings.warn(UnknownTypeWarning(f"filter names unknown type {name!r}"))

    def element_passes(element_id: str, element) -> bool:
        if element_id in filt.hidden_ids:
            return False
        if element.layer == "semantic" and not filt.show_semantic:
            return False
        if element.layer == "syntactic" and not filt.show_syntactic:
            return False
        if filt.include_types is not None and element.type not in filt.include_types:
            return False
        if element.type is not None and element.type in filt.exclude_types:
            return False
        return True

    visible = {mid for mid, m in doc.mentions.items() if element_passes(mid, m)}
    visible |= {rid for rid, r in doc.relations.items() if element_passes(rid, r)}

    # Endpoint closure: hiding an element hides every relation built on it.
    changed = True
    while changed:
        changed = False
        for rid, rel in doc.relations.items():
            if rid not in visible:
                continue
            for ref in rel.references():
                if ref.kind != "token" and ref.ref not in visible:
                    visible.discard(rid)
                    changed = True
                    break
    return frozenset(visible)


# --- graph operations -----------------------------------------------------------

def _relation_refs(rel: Relation) -> list[str]:
    return [r.ref for r in rel.references() if r.kind == "relation"]


def _reaches(doc: Document, start_ids: list[str], target_id: str) -> bool:
    """Depth-first search over relation-to-relation references."""
    stack = list(start_ids)
    seen: set[str] = set()
    while stack:
        current = stack.pop()
        if current == target_id:
            return True
        if current in seen:
            continue
        seen.add(current)
        rel = doc.relations.get(current)
        if rel is not None:
            stack.extend(_relation_refs(rel))
    return False


def validate_relation_shape(rel: Relation) -> None:
    if not rel.arguments:
        raise InvalidRelation(f"relation {rel.id}: arguments must be non-empty")
    if rel.trigger is None and len(rel.arguments) < 2:
        raise InvalidRelation(
            f"relation {rel.id}: trigger-free relations need at least 2 arguments")
    if rel.directionality not in DIRECTIONALITIES:
        raise InvalidRelation(
            f"relation {rel.id}: bad directionality {rel.directionality!r}")
    if rel.layer not in LAYERS:
        raise InvalidRelation(f"relation {rel.id}: bad layer {rel.layer!r}")


def add_relation(doc: Document, rel: Relation) -> Document:
    """New document version containing ``rel``.

    Raises :class:`DuplicateId`, :class:`DanglingReference`, or
    :class:`CycleDetected` if the relation would break the graph.
    """
    if doc.has_element(rel.id):
        raise DuplicateId(f"id {rel.id!r} already in document")
    validate_relation_shape(rel)
    for ref in rel.references():
        if ref.kind == "relation" and ref.ref == rel.id:
            continue  # self-reference is caught by the cycle check below
        doc.resolve(ref)
    if _reaches(doc, _relation_refs(rel), rel.id):
        raise CycleDetected(
            f"adding {rel.id} would make it transitively reference itself")
    relations = dict(doc.relations)
    relations[rel.id] = rel
    return replace(doc, relations=relations)


def delete_element(doc: Document, element_id: str) -> tuple[Document, frozenset[str]]:
    """Remove an element plus, transitively, every relation referencing a casualty."""
    if not doc.has_element(element_id):
        raise UnknownId(f"no element with id {element_id!r}")
    removed = {element_id}
    changed = True
    while changed:
        changed = False
        for rid, rel in doc.relations.items():
            if rid in removed:
                continue
            for ref in rel.references():
                if ref.kind != "token" and ref.ref in removed:
                    removed.add(rid)
                    changed = True
                    break
    mentions = {mid: m for mid, m in doc.mentions.items() if mid not in removed}
    relations = {rid: r for rid, r in doc.relations.items() if rid not in removed}
    new_doc = replace(doc, mentions=mentions, relations=relations)
    return new_doc, frozenset(removed)


def replace_element(doc: Document, element) -> Document:
    """Swap in a new version of an existing mention or relation (same id)."""
    if isinstance(element, Mention):
        if element.id not in doc.mentions:
            raise UnknownId(f"no mention with id {element.id!r}")
        mentions = dict(doc.mentions)
        mentions[element.id] = element
        return replace(doc, mentions=mentions)
    if element.id not in doc.relations:
        raise UnknownId(f"no relation with id {element.id!r}")
    validate_relation_shape(element)
    for ref in element.references():
        if not (ref.kind == "relation" and ref.ref == element.id):
            doc.resolve(ref)
    without = dict(doc.relations)
    del without[element.id]
    probe = replace(doc, relations=without)
    if _reaches(probe, _relation_refs(element), element.id):
        raise CycleDetected(
            f"new version of {element.id} would transitively reference itself")
    relations = dict(doc.relations)
    relations[element.id] = element
    return replace(doc, relations=relations)


# --- whole-document validation ----------------------------------------------------

def validate_document(doc: Document) -> list[str]:
    """All invariant violations, as human-readable strings (empty when valid)."""
    problems: list[str] = []
    n = len(doc.text)
    previous_end = -1
    for i, tok in enumerate(doc.tokens):
        if tok.index != i:
            problems.append(f"token {i}: index field is {tok.index}")
        if not (0 <= tok.start < tok.end <= n):
            problems.append(f"token {i}: span ({tok.start}, {tok.end}) out of bounds")
            continue
        if tok.start < previous_end:
            problems.append(f"token {i}: overlaps previous token")
        if doc.text[tok.start:tok.end] != tok.surface:
            problems.append(f"token {i}: surface does not match text at span")
        previous_end = tok.end

    for mid, m in doc.mentions.items():
        if not m.anchors:
            problems.append(f"mention {mid}: no anchors")
        last_end = -1
        for (s, e) in m.anchors:
            if not (0 <= s <= e <= n):
                problems.append(f"mention {mid}: anchor ({s}, {e}) out of bounds")
            if s < last_end:
                problems.append(f"mention {mid}: anchors unsorted or overlapping")
            last_end = e
        if m.layer not in LAYERS:
            problems.append(f"mention {mid}: bad layer {m.layer!r}")

    for rid, rel in doc.relations.items():
        try:
            validate_relation_shape(rel)
        except InvalidRelation as err:
            problems.append(str(err))
        for ref in rel.references():
            try:
                doc.resolve(ref)
            except DanglingReference as err:
                problems.append(f"relation {rid}: {err}")

    # Acyclicity: depth-first traversal must never revisit an in-stack relation.
    WHITE, GRAY, BLACK = 0, 1, 2
    state = {rid: WHITE for rid in doc.relations}

    def visit(rid: str) -> bool:
        state[rid] = GRAY
        for nxt in _relation_refs(doc.relations[rid]):
            if nxt not in state:
                continue
            if state[nxt] == GRAY:
                return False
            if state[nxt] == WHITE and not visit(nxt):
                return False
        state[rid] = BLACK
        return True

    for rid in sorted(doc.relations, key=id_sort_key):
        if state[rid] == WHITE and not visit(rid):
            problems.append(f"relation {rid}: participates in a reference cycle")
    return problems


def document_warnings(doc: Document) -> list[str]:
    """Advisory findings that do not invalidate the document.

    A relation may legitimately take the same element in several roles
    (reflexive control); it is flagged here so reviewers notice it.
    """
    notes: list[str] = []
    for rid in sorted(doc.relations, key=id_sort_key):
        rel = doc.relations[rid]
        seen: dict[tuple, str] = {}
        for arg in rel.arguments:
            key = (arg.target.kind, arg.target.ref)
            if key in seen:
                notes.append(
                    f"relation {rid}: roles {seen[key]!r} and {arg.role!r} "
                    f"target the same element")
            else:
                seen[key] = arg.role
    return notes


# --- canonical JSON form -----------------------------------------------------------

def document_to_json(doc: Document) -> dict:
    """Canonical JSON form: elements sorted by id, stable across dict ordering."""
    return {
        "id": doc.id,
        "text": doc.text,
        "source_format": doc.source_format,
        "taxonomy_ref": doc.taxonomy_ref,
        "tokens": [
            {"index": t.index, "start": t.start, "end": t.end, "surface": t.surface}
            for t in doc.tokens
        ],
        "mentions": [
            {
                "id": m.id,
                "label": m.label,
                "type": m.type,
                "layer": m.layer,
                "anchors": [[s, e] for (s, e) in m.anchors],
            }
            for m in sorted(doc.mentions.values(), key=lambda m: id_sort_key(m.id))
        ],
        "relations": [
            {
                "id": r.id,
                "label": r.label,
                "type": r.type,
                "layer": r.layer,
                "directionality": r.directionality,
                "trigger": r.trigger.to_json() if r.trigger else None,
                "arguments": [
                    {"role": a.role, "target": a.target.to_json()} for a in r.arguments
                ],
            }
            for r in sorted(doc.relations.values(), key=lambda r: id_sort_key(r.id))
        ],
        "metadata": doc.metadata,
    }


def document_from_json(obj: Mapping) -> Document:
    tokens = tuple(
        Token(t["index"], t["start"], t["end"], t["surface"]) for t in obj["tokens"]
    )
    mentions = {
        m["id"]: Mention(
            id=m["id"],
            label=m["label"],
            anchors=tuple((int(s), int(e)) for s, e in m["anchors"]),
            type=m.get("type"),
            layer=m.get("layer", "semantic"),
        )
        for m in obj["mentions"]
    }
    relations = {
        r["id"]: Relation(
            id=r["id"],
            label=r["label"],
            arguments=tuple(
                Argument(a["role"], AnchorRef.from_json(a["target"]))
                for a in r["arguments"]
            ),
            trigger=AnchorRef.from_json(r["trigger"]) if r.get("trigger") else None,
            directionality=r.get("directionality", "directed"),
            type=r.get("type"),
            layer=r.get("layer", "semantic"),
        )
        for r in obj["relations"]
    }
    return Document(
        id=obj["id"],
        text=obj["text"],
        tokens=tokens,
        mentions=mentions,
        relations=relations,
        source_format=obj.get("source_format", "memory"),
        taxonomy_ref=obj.get("taxonomy_ref"),
        metadata=dict(obj.get("metadata", {})),
    )


def content_hash(doc: Document) -> str:
    payload = json.dumps(document_to_json(doc), sort_keys=True,
                         separators=(",", ":"), ensure_ascii=True)
    return "sha256:" + hashlib.sha256(payload.encode("utf-8")).hexdigest()


def content_equal(a: Document, b: Document) -> bool:
    """Structural equality of annotation content, ignoring provenance fields."""
    ja, jb = document_to_json(a), document_to_json(b)
    for key in ("source_format", "metadata", "id", "taxonomy_ref"):
        ja.pop(key, None)
        jb.pop(key, None)
    return ja == jb


def taxonomy_to_json(taxonomy: Taxonomy) -> dict:
    def entry(e: TypeEntry) -> dict:
        return {"name": e.name, "color": e.color,
                "children": [entry(c) for c in e.children]}

    return {"roots": [entry(r) for r in taxonomy.roots]}


def taxonomy_from_json(obj: Mapping) -> Taxonomy:
    def entry(e: Mapping) -> TypeEntry:
        return TypeEntry(e["name"], e["color"],
                         tuple(entry(c) for c in e.get("children", [])))

    return Taxonomy(tuple(entry(r) for r in obj.get("roots", [])))
