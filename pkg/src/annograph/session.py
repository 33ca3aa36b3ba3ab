"""Mutable editing sessions over immutable documents.

A session wraps a base document, applies edit operations, keeps a linear
undo history, and records every action in a replayable diff log.  Content
operations route through the graph module and inherit its cascade and
acyclicity checks; presentation operations (hide/unhide, token moves) only
touch view state, so a presentation-only diff replays to a document
structurally equal to its base.

Diff files are JSON lines: a header naming the base document and its content
hash, then one entry per operation with a sequence number and timestamp.
Undo appends a retraction entry; nothing is ever rewritten in place.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .errors import (
    BaseMismatch,
    DuplicateId,
    InvalidArgIndex,
    NothingToUndo,
    OffsetOutOfBounds,
    ReplayConflict,
    UnknownId,
    UnknownType,
)
from .model import (
    AnchorRef,
    Argument,
    Document,
    Mention,
    Relation,
    Taxonomy,
    add_relation,
    content_hash,
    delete_element,
    recolor_type,
    replace_element,
    validate_relation_shape,
)

DIFF_FORMAT_VERSION = "1"


# --- edit operations ---------------------------------------------------------------

@dataclass(frozen=True)
class Relabel:
    id: str
    label: str


@dataclass(frozen=True)
class Retype:
    id: str
    type: Optional[str]


@dataclass(frozen=True)
class Reattach:
    relation_id: str
    arg_index: int
    target: AnchorRef


@dataclass(frozen=True)
class CreateMention:
    label: str
    anchors: tuple[tuple[int, int], ...]
    id: Optional[str] = None
    type: Optional[str] = None
    layer: str = "semantic"


@dataclass(frozen=True)
class CreateRelation:
    label: str
    arguments: tuple[tuple[str, AnchorRef], ...]
    id: Optional[str] = None
    trigger: Optional[AnchorRef] = None
    directionality: str = "directed"
    type: Optional[str] = None
    layer: str = "semantic"


@dataclass(frozen=True)
class Delete:
    id: str


@dataclass(frozen=True)
class Hide:
    id: str


@dataclass(frozen=True)
class Unhide:
    id: str


@dataclass(frozen=True)
class RecolorType:
    type: str
    color: str
    cascade: bool = False


@dataclass(frozen=True)
class MoveToken:
    token_index: int
    row: int
    x: float


EditOp = Union[Relabel, Retype, Reattach, CreateMention, CreateRelation,
               Delete, Hide, Unhide, RecolorType, MoveToken]

PRESENTATION_OPS = (Hide, Unhide, MoveToken)

_OP_KINDS: dict[str, type] = {
    "relabel": Relabel,
    "retype": Retype,
    "reattach": Reattach,
    "create_mention": CreateMention,
    "create_relation": CreateRelation,
    "delete": Delete,
    "hide": Hide,
    "unhide": Unhide,
    "recolor_type": RecolorType,
    "move_token": MoveToken,
}
_KIND_NAMES = {cls: kind for kind, cls in _OP_KINDS.items()}


def is_presentation(op: EditOp) -> bool:
    return isinstance(op, PRESENTATION_OPS)


def op_to_json(op: EditOp) -> dict:
    body: dict = {"kind": _KIND_NAMES[type(op)]}
    if isinstance(op, Relabel):
        body.update(id=op.id, label=op.label)
    elif isinstance(op, Retype):
        body.update(id=op.id, type=op.type)
    elif isinstance(op, Reattach):
        body.update(relation_id=op.relation_id, arg_index=op.arg_index,
                    target=op.target.to_json())
    elif isinstance(op, CreateMention):
        body.update(id=op.id, label=op.label, type=op.type, layer=op.layer,
                    anchors=[[s, e] for s, e in op.anchors])
    elif isinstance(op, CreateRelation):
        body.update(id=op.id, label=op.label, type=op.type, layer=op.layer,
                    directionality=op.directionality,
                    trigger=op.trigger.to_json() if op.trigger else None,
                    arguments=[{"role": role, "target": ref.to_json()}
                               for role, ref in op.arguments])
    elif isinstance(op, (Delete, Hide, Unhide)):
        body.update(id=op.id)
    elif isinstance(op, RecolorType):
        body.update(type=op.type, color=op.color, cascade=op.cascade)
    elif isinstance(op, MoveToken):
        body.update(token_index=op.token_index, row=op.row, x=op.x)
    return body


def op_from_json(body: dict) -> EditOp:
    kind = body.get("kind")
    if kind not in _OP_KINDS:
        raise ValueError(f"unknown edit op kind {kind!r}")
    if kind == "relabel":
        return Relabel(body["id"], body["label"])
    if kind == "retype":
        return Retype(body["id"], body.get("type"))
    if kind == "reattach":
        return Reattach(body["relation_id"], int(body["arg_index"]),
                        AnchorRef.from_json(body["target"]))
    if kind == "create_mention":
        return CreateMention(
            label=body["label"],
            anchors=tuple((int(s), int(e)) for s, e in body["anchors"]),
            id=body.get("id"), type=body.get("type"),
            layer=body.get("layer", "semantic"))
    if kind == "create_relation":
        return CreateRelation(
            label=body["label"],
            arguments=tuple((a["role"], AnchorRef.from_json(a["target"]))
                            for a in body["arguments"]),
            id=body.get("id"),
            trigger=AnchorRef.from_json(body["trigger"]) if body.get("trigger") else None,
            directionality=body.get("directionality", "directed"),
            type=body.get("type"), layer=body.get("layer", "semantic"))
    if kind == "delete":
        return Delete(body["id"])
    if kind == "hide":
        return Hide(body["id"])
    if kind == "unhide":
        return Unhide(body["id"])
    if kind == "recolor_type":
        return RecolorType(body["type"], body["color"], bool(body.get("cascade", False)))
    return MoveToken(int(body["token_index"]), int(body["row"]), float(body["x"]))


@dataclass(frozen=True)
class LogEntry:
    seq: int
    timestamp: str
    op: Optional[EditOp] = None
    undo_of: Optional[int] = None  # seq of the entry this one retracts


@dataclass(frozen=True)
class SessionState:
    """Everything an edit changes: document, view state, taxonomy."""

    document: Document
    hidden_ids: frozenset[str] = frozenset()
    row_overrides: dict = field(default_factory=dict)
    taxonomy: Optional[Taxonomy] = None


def _now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def _next_free_id(doc: Document, prefix: str) -> str:
    n = 1
    while doc.has_element(f"{prefix}{n}"):
        n += 1
    return f"{prefix}{n}"


def apply_op(state: SessionState, op: EditOp) -> SessionState:
    """Pure application of one op; raises without changing anything."""
    doc = state.document
    if isinstance(op, Relabel):
        element = doc.element(op.id)
        return replace(state, document=replace_element(doc, replace(element, label=op.label)))
    if isinstance(op, Retype):
        element = doc.element(op.id)
        return replace(state, document=replace_element(doc, replace(element, type=op.type)))
    if isinstance(op, Reattach):
        if op.relation_id not in doc.relations:
            raise UnknownId(f"no relation with id {op.relation_id!r}")
        rel = doc.relations[op.relation_id]
        if not 0 <= op.arg_index < len(rel.arguments):
            raise InvalidArgIndex(
                f"arg index {op.arg_index} outside 0..{len(rel.arguments) - 1}")
        arguments = list(rel.arguments)
        arguments[op.arg_index] = Argument(arguments[op.arg_index].role, op.target)
        return replace(state, document=replace_element(
            doc, replace(rel, arguments=tuple(arguments))))
    if isinstance(op, CreateMention):
        mention_id = op.id or _next_free_id(doc, "T")
        if doc.has_element(mention_id):
            raise DuplicateId(f"id {mention_id!r} already in document")
        n = len(doc.text)
        last_end = -1
        for (s, e) in op.anchors:
            if not (0 <= s <= e <= n) or s < last_end:
                raise OffsetOutOfBounds(f"bad anchor ({s}, {e}) for new mention")
            last_end = e
        mention = Mention(id=mention_id, label=op.label,
                          anchors=tuple(op.anchors), type=op.type,
                          layer=op.layer)  # type: ignore[arg-type]
        mentions = dict(doc.mentions)
        mentions[mention_id] = mention
        return replace(state, document=replace(doc, mentions=mentions))
    if isinstance(op, CreateRelation):
        relation_id = op.id or _next_free_id(doc, "E" if op.trigger else "R")
        rel = Relation(
            id=relation_id, label=op.label,
            arguments=tuple(Argument(role, ref) for role, ref in op.arguments),
            trigger=op.trigger,
            directionality=op.directionality,  # type: ignore[arg-type]
            type=op.type, layer=op.layer)  # type: ignore[arg-type]
        validate_relation_shape(rel)
        return replace(state, document=add_relation(doc, rel))
    if isinstance(op, Delete):
        new_doc, removed = delete_element(doc, op.id)
        return replace(state, document=new_doc,
                       hidden_ids=state.hidden_ids - removed)
    if isinstance(op, Hide):
        if not doc.has_element(op.id):
            raise UnknownId(f"no element with id {op.id!r}")
        return replace(state, hidden_ids=state.hidden_ids | {op.id})
    if isinstance(op, Unhide):
        if not doc.has_element(op.id):
            raise UnknownId(f"no element with id {op.id!r}")
        return replace(state, hidden_ids=state.hidden_ids - {op.id})
    if isinstance(op, RecolorType):
        if state.taxonomy is None:
            raise UnknownType(f"no taxonomy loaded; cannot recolor {op.type!r}")
        return replace(state, taxonomy=recolor_type(
            state.taxonomy, op.type, op.color, op.cascade))
    if isinstance(op, MoveToken):
        if not 0 <= op.token_index < len(doc.tokens):
            raise UnknownId(f"token index {op.token_index} out of range")
        overrides = dict(state.row_overrides)
        overrides[op.token_index] = (op.row, op.x)
        return replace(state, row_overrides=overrides)
    raise ValueError(f"unsupported op {op!r}")


class EditSession:
    """One writer, linear history, append-only log."""

    def __init__(self, base: Document, taxonomy: Optional[Taxonomy] = None):
        self.base = base
        self.base_taxonomy = taxonomy
        self.state = SessionState(document=base, taxonomy=taxonomy)
        self.log: list[LogEntry] = []
        self._next_seq = 1

    @property
    def current(self) -> Document:
        return self.state.document

    def active_ops(self) -> list[tuple[int, EditOp]]:
        retracted: set[int] = set()
        active: list[tuple[int, EditOp]] = []
        for entry in self.log:
            if entry.undo_of is not None:
                retracted.add(entry.undo_of)
        for entry in self.log:
            if entry.op is not None and entry.seq not in retracted:
                active.append((entry.seq, entry.op))
        return active

    def apply(self, op: EditOp) -> int:
        """Apply and log one op; returns its sequence number."""
        self.state = apply_op(self.state, op)
        seq = self._next_seq
        self._next_seq += 1
        self.log.append(LogEntry(seq=seq, timestamp=_now(), op=op))
        return seq

    def undo(self) -> int:
        """Retract the most recent non-retracted op; returns its seq."""
        active = self.active_ops()
        if not active:
            raise NothingToUndo("no applied operation to undo")
        target_seq = active[-1][0]
        state = SessionState(document=self.base, taxonomy=self.base_taxonomy)
        for seq, op in active[:-1]:
            state = apply_op(state, op)
        self.state = state
        seq = self._next_seq
        self._next_seq += 1
        self.log.append(LogEntry(seq=seq, timestamp=_now(), undo_of=target_seq))
        return target_seq

    def export_diff(self) -> str:
        header = {
            "format": DIFF_FORMAT_VERSION,
            "base_id": self.base.id,
            "base_hash": content_hash(self.base),
        }
        lines = [json.dumps(header, sort_keys=True, ensure_ascii=True)]
        for entry in self.log:
            record: dict = {"seq": entry.seq, "ts": entry.timestamp}
            if entry.undo_of is not None:
                record["undo"] = entry.undo_of
            else:
                record["op"] = op_to_json(entry.op)
            lines.append(json.dumps(record, sort_keys=True, ensure_ascii=True))
        return "".join(line + "\n" for line in lines)


def parse_diff(diff_text: str) -> tuple[dict, list[LogEntry]]:
    lines = [line for line in diff_text.splitlines() if line.strip()]
    if not lines:
        raise BaseMismatch("empty diff: missing header line")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as err:
        raise BaseMismatch(f"unreadable diff header: {err}") from err
    if header.get("format") != DIFF_FORMAT_VERSION:
        raise BaseMismatch(f"unsupported diff format {header.get('format')!r}")
    entries: list[LogEntry] = []
    for i, line in enumerate(lines[1:], start=2):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as err:
            raise ReplayConflict(i, err) from err
        if "undo" in record:
            entries.append(LogEntry(seq=int(record["seq"]),
                                    timestamp=record.get("ts", ""),
                                    undo_of=int(record["undo"])))
        else:
            entries.append(LogEntry(seq=int(record["seq"]),
                                    timestamp=record.get("ts", ""),
                                    op=op_from_json(record["op"])))
    return header, entries


def replay_session(base: Document, diff_text: str,
                   taxonomy: Optional[Taxonomy] = None) -> EditSession:
    """Rebuild a session from a diff; base hash must match exactly."""
    header, entries = parse_diff(diff_text)
    actual = content_hash(base)
    if header.get("base_hash") != actual:
        raise BaseMismatch(
            f"diff was made against {header.get('base_hash')}, not {actual}")
    session = EditSession(base, taxonomy=taxonomy)
    retracted = {e.undo_of for e in entries if e.undo_of is not None}
    state = SessionState(document=base, taxonomy=taxonomy)
    for entry in entries:
        if entry.undo_of is not None or entry.seq in retracted:
            continue
        try:
            state = apply_op(state, entry.op)
        except Exception as err:
            raise ReplayConflict(entry.seq, err) from err
    session.state = state
    session.log = list(entries)
    session._next_seq = max((e.seq for e in entries), default=0) + 1
    return session


def replay(base: Document, diff_text: str,
           taxonomy: Optional[Taxonomy] = None) -> Document:
    """Document produced by applying a diff to its base."""
    return replay_session(base, diff_text, taxonomy=taxonomy).current
