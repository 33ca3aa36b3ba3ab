"""Deterministic row-based arc-diagram geometry.

Tokens flow greedily into rows of a fixed horizontal budget.  Each visible
relation becomes one arc drawn above (semantic) or below (syntactic) the
text; arcs spanning several rows are split into per-row segments that exit
and enter at the row edges.  Within a row and side, every segment gets a
discrete slot: wider arcs sit above the arcs they enclose, and an arc whose
endpoint is another relation attaches to that relation's label and therefore
sits strictly above it.

Everything here is a pure function of ``(Document, ViewConfig)``; identical
inputs give bit-identical geometry.  ``layout_window`` computes arc geometry
only for relations incident to the requested rows, and its rows are
guaranteed to match the same rows of a full-document layout.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Callable, Literal, Mapping, Optional

from .errors import RangeOutOfBounds, TokenTooWide
from .model import (
    AnchorRef,
    Document,
    Mention,
    Relation,
    VisibilityFilter,
    apply_filter,
    id_sort_key,
)

Side = Literal["above", "below"]


def default_font_metrics(s: str) -> float:
    """Abstract monotone width: geometry stays testable without a renderer."""
    return 8.0 * len(s)


@dataclass(frozen=True)
class ViewConfig:
    """Presentation state: horizontal budget, metrics, user drags, visibility."""

    row_width: float = 900.0
    token_gap: float = 12.0
    row_height: float = 150.0
    baseline_offset: float = 90.0
    font_metrics: Callable[[str], float] = default_font_metrics
    row_overrides: Mapping[int, tuple[int, float]] = field(default_factory=dict)
    visibility: VisibilityFilter = field(default_factory=VisibilityFilter)

    def text_width(self, s: str) -> float:
        return self.font_metrics(s)


@dataclass(frozen=True)
class TokenBox:
    token_index: int
    row: int
    x: float
    width: float
    text: str


@dataclass(frozen=True)
class Row:
    index: int
    y_baseline: float
    tokens: tuple[TokenBox, ...]


@dataclass(frozen=True)
class MentionSpanBox:
    """One underline fragment of a mention on one row."""

    mention_id: str
    row: int
    x1: float
    x2: float
    label: str
    type: Optional[str]
    layer: str


@dataclass(frozen=True)
class Attachment:
    """Where an arc touches an endpoint; ``height`` is the slot it drops to."""

    role: str
    ref: AnchorRef
    row: int
    x: float
    height: int
    arrow: bool


@dataclass(frozen=True)
class ArcSegment:
    row: int
    x1: float
    x2: float
    slot: int


@dataclass(frozen=True)
class LabelBox:
    row: int
    x1: float
    x2: float
    text: str


@dataclass(frozen=True)
class ArcPath:
    relation_id: str
    side: Side
    label: LabelBox
    segments: tuple[ArcSegment, ...]
    attachments: tuple[Attachment, ...]


@dataclass(frozen=True)
class Handle:
    """Attachment point other arcs use to reference this relation's arc."""

    row: int
    x: float
    slot: int


@dataclass(frozen=True)
class RowAssignment:
    placements: tuple[tuple[int, float, float], ...]  # per token: (row, x, width)
    n_rows: int


@dataclass(frozen=True)
class LayoutGeometry:
    rows: tuple[Row, ...]
    mention_spans: tuple[MentionSpanBox, ...]
    arcs: tuple[ArcPath, ...]
    handles: Mapping[str, Handle]
    row_range: tuple[int, int]
    visited_relations: tuple[str, ...]


# --- row assignment ---------------------------------------------------------------

def assign_rows(doc: Document, cfg: ViewConfig) -> RowAssignment:
    """Greedy left-to-right fill; user overrides jump the cursor and win.

    After overrides are applied, tokens sharing a row are shifted right just
    enough that no two boxes overlap.
    """
    placements: list[list[float]] = []
    row, x = 0, 0.0
    for token in doc.tokens:
        width = cfg.text_width(token.surface)
        if width > cfg.row_width:
            raise TokenTooWide(
                f"token {token.index} ({token.surface!r}) is wider than the row")
        override = cfg.row_overrides.get(token.index)
        if override is not None:
            row = max(0, int(override[0]))
            x = max(0.0, float(override[1]))
        elif x > 0.0 and x + width > cfg.row_width:
            row += 1
            x = 0.0
        placements.append([row, x, width])
        x = x + width + cfg.token_gap

    by_row: dict[int, list[int]] = {}
    for i, (r, _, _) in enumerate(placements):
        by_row.setdefault(int(r), []).append(i)
    for r, indices in by_row.items():
        indices.sort(key=lambda i: (placements[i][1], i))
        cursor = None
        for i in indices:
            if cursor is not None and placements[i][1] < cursor:
                placements[i][1] = cursor
            cursor = placements[i][1] + placements[i][2] + cfg.token_gap

    n_rows = max((int(p[0]) for p in placements), default=-1) + 1
    return RowAssignment(
        placements=tuple((int(r), float(x), float(w)) for r, x, w in placements),
        n_rows=n_rows)


# --- internal pipeline --------------------------------------------------------------

class _Workspace:
    """Per-layout mutable state shared by the pipeline steps."""

    def __init__(self, doc: Document, cfg: ViewConfig):
        self.doc = doc
        self.cfg = cfg
        self.rows = assign_rows(doc, cfg)
        self.token_starts = [t.start for t in doc.tokens]
        self.visible = apply_filter(doc, cfg.visibility)
        self._label_anchor_cache: dict[str, tuple[int, float]] = {}
        self._mention_anchor_cache: dict[str, tuple[int, float]] = {}
        self.visited: set[str] = set()

    # -- positions ------------------------------------------------------------

    def token_box(self, index: int) -> tuple[int, float, float]:
        return self.rows.placements[index]

    def _token_at(self, position: int) -> int:
        """Token covering or nearest after ``position`` (doc must have tokens)."""
        tokens = self.doc.tokens
        i = bisect.bisect_right(self.token_starts, position) - 1
        if i >= 0 and tokens[i].end >= position:
            return i
        return min(i + 1, len(tokens) - 1)

    def char_x(self, token_index: int, position: int) -> float:
        token = self.doc.tokens[token_index]
        row, x, _ = self.rows.placements[token_index]
        clamped = min(max(position, token.start), token.end)
        return x + self.cfg.text_width(self.doc.text[token.start:clamped])

    def fragment_pieces(self, start: int, end: int) -> list[tuple[int, float, float]]:
        """(row, x1, x2) pieces of one anchor fragment, split at row breaks."""
        if not self.doc.tokens:
            return []
        if start == end:
            t = self._token_at(start)
            row = self.rows.placements[t][0]
            x = self.char_x(t, start)
            return [(row, x, x)]
        first = self._token_at(start)
        covered = []
        for i in range(first, len(self.doc.tokens)):
            token = self.doc.tokens[i]
            if token.start >= end:
                break
            if token.end > start:
                covered.append(i)
        if not covered:
            t = self._token_at(start)
            row = self.rows.placements[t][0]
            x = self.char_x(t, start)
            return [(row, x, x)]
        pieces = []
        row_start = covered[0]
        for previous, current in zip(covered, covered[1:] + [None]):
            if current is not None and \
                    self.rows.placements[current][0] == self.rows.placements[previous][0]:
                continue
            row = self.rows.placements[row_start][0]
            x1 = self.char_x(row_start, max(start, self.doc.tokens[row_start].start))
            x2 = self.char_x(previous, min(end, self.doc.tokens[previous].end))
            pieces.append((row, x1, x2))
            row_start = current
        return pieces

    def mention_anchor(self, mention: Mention) -> tuple[int, float]:
        cached = self._mention_anchor_cache.get(mention.id)
        if cached is not None:
            return cached
        start, end = mention.anchors[0]
        pieces = self.fragment_pieces(start, end)
        if pieces:
            row, x1, x2 = pieces[0]
            anchor = (row, (x1 + x2) / 2.0)
        else:
            anchor = (0, 0.0)
        self._mention_anchor_cache[mention.id] = anchor
        return anchor

    def ref_anchor(self, ref: AnchorRef) -> tuple[int, float]:
        if ref.kind == "token":
            row, x, width = self.rows.placements[ref.ref]
            return (row, x + width / 2.0)
        if ref.kind == "mention":
            return self.mention_anchor(self.doc.mentions[ref.ref])
        return self.label_anchor(ref.ref)

    def label_anchor(self, relation_id: str) -> tuple[int, float]:
        """(row, x) of a relation's label midpoint, independent of slotting."""
        cached = self._label_anchor_cache.get(relation_id)
        if cached is not None:
            return cached
        self.visited.add(relation_id)
        rel = self.doc.relations[relation_id]
        anchors = [self.ref_anchor(r) for r in rel.references()]
        if rel.trigger is not None:
            anchor = self.ref_anchor(rel.trigger)
        else:
            first_row = min(a[0] for a in anchors)
            left_x = min(a[1] for a in anchors if a[0] == first_row)
            row_extent = [a[1] for a in anchors if a[0] == first_row]
            if max(a[0] for a in anchors) > first_row:
                right = self.cfg.row_width  # arc continues past the row edge
            else:
                right = max(row_extent)
            anchor = (first_row, (left_x + right) / 2.0)
        self._label_anchor_cache[relation_id] = anchor
        return anchor


class _Arc:
    __slots__ = ("rel", "side", "attachments", "segments", "label_row",
                 "label_x1", "label_x2", "label_text", "depth", "width")

    def __init__(self, rel: Relation):
        self.rel = rel
        self.side: Side = "above" if rel.layer == "semantic" else "below"
        self.attachments: list[list] = []   # [role, ref, row, x, height, arrow]
        self.segments: list[list] = []      # [row, x1, x2, slot]
        self.label_row = 0
        self.label_x1 = 0.0
        self.label_x2 = 0.0
        self.label_text = rel.label
        self.depth = 0
        self.width = 0.0


def _reference_depth(doc: Document, visible: frozenset[str]) -> dict[str, int]:
    depth: dict[str, int] = {}

    def compute(rid: str) -> int:
        if rid in depth:
            return depth[rid]
        depth[rid] = 0  # placeholder; the graph is acyclic
        rel = doc.relations[rid]
        d = 0
        for ref in rel.references():
            if ref.kind == "relation" and ref.ref in visible:
                d = max(d, compute(ref.ref) + 1)
        depth[rid] = d
        return d

    for rid in sorted(visible & set(doc.relations), key=id_sort_key):
        compute(rid)
    return depth


def _build_arc(ws: _Workspace, rel: Relation) -> _Arc:
    arc = _Arc(rel)
    ws.visited.add(rel.id)
    if rel.trigger is not None:
        row, x = ws.ref_anchor(rel.trigger)
        arc.attachments.append(["trigger", rel.trigger, row, x, 0, False])
    for argument in rel.arguments:
        row, x = ws.ref_anchor(argument.target)
        arc.attachments.append([argument.role, argument.target, row, x, 0, False])

    rows = sorted({a[2] for a in arc.attachments})
    first_row, last_row = rows[0], rows[-1]
    if first_row == last_row:
        xs = [a[3] for a in arc.attachments]
        arc.segments.append([first_row, min(xs), max(xs), 0])
    else:
        for row in range(first_row, last_row + 1):
            xs = [a[3] for a in arc.attachments if a[2] == row]
            if row == first_row:
                arc.segments.append([row, min(xs), ws.cfg.row_width, 0])
            elif row == last_row:
                arc.segments.append([row, 0.0, max(xs), 0])
            else:
                arc.segments.append([row, 0.0, ws.cfg.row_width, 0])

    label_row, label_cx = ws.label_anchor(rel.id)
    label_width = ws.cfg.text_width(arc.label_text)
    segment = next(s for s in arc.segments if s[0] == label_row)
    label_cx = min(max(label_cx, segment[1]), segment[2])
    arc.label_row = label_row
    arc.label_x1 = label_cx - label_width / 2.0
    arc.label_x2 = label_cx + label_width / 2.0

    # Arrowheads: with a trigger every argument takes one; trigger-free
    # directed arcs point at their final argument; bidirectional arcs point
    # at both extreme endpoints.
    if rel.directionality == "directed":
        if rel.trigger is not None:
            for a in arc.attachments:
                a[5] = a[0] != "trigger"
        elif arc.attachments:
            arc.attachments[-1][5] = True
    elif rel.directionality == "bidirectional":
        ordered = sorted(range(len(arc.attachments)),
                         key=lambda i: (arc.attachments[i][2], arc.attachments[i][3]))
        if ordered:
            arc.attachments[ordered[0]][5] = True
            arc.attachments[ordered[-1]][5] = True

    arc.width = sum(s[2] - s[1] for s in arc.segments)
    return arc


def _interval(arc: _Arc, row: int) -> tuple[float, float]:
    segment = next(s for s in arc.segments if s[0] == row)
    x1, x2 = segment[1], segment[2]
    if arc.label_row == row:
        x1, x2 = min(x1, arc.label_x1), max(x2, arc.label_x2)
    return x1, x2


def _assign_slots(arcs: list[_Arc], order: list[str], rows_wanted: set[int]) -> None:
    """Slot every segment, one (side, row) group at a time.

    A greedy first-fit pass (width order, lowest free slot, references and
    enclosed arcs push the floor up) fixes the relative order; a longest-path
    pass over the constraint graph then makes the mandatory invariants hold
    even when greedy placement could not satisfy them locally.
    """
    by_id = {arc.rel.id: arc for arc in arcs}
    groups: dict[tuple[str, int], list[str]] = {}
    for arc in arcs:
        for segment in arc.segments:
            if segment[0] in rows_wanted:
                groups.setdefault((arc.side, segment[0]), []).append(arc.rel.id)

    slots: dict[tuple[str, int], int] = {}
    rank = {rid: i for i, rid in enumerate(order)}

    for (side, row) in sorted(groups, key=lambda k: (k[0], k[1])):
        members = sorted(groups[(side, row)], key=lambda rid: rank[rid])
        intervals = {rid: _interval(by_id[rid], row) for rid in members}

        # Greedy pass: first fit from a floor raised by references and by
        # already-placed arcs this one strictly encloses.
        greedy: dict[str, int] = {}
        for rid in members:
            x1, x2 = intervals[rid]
            floor = 1
            for ref in by_id[rid].rel.references():
                if ref.kind != "relation":
                    continue
                referenced = by_id.get(ref.ref)
                if referenced is not None and referenced.side == side \
                        and referenced.label_row == row and ref.ref in greedy:
                    floor = max(floor, greedy[ref.ref] + 1)
            forbidden = set()
            for other, slot in greedy.items():
                ox1, ox2 = intervals[other]
                if ox1 < x2 and x1 < ox2:
                    forbidden.add(slot)
                if x1 < ox1 and ox2 < x2:
                    floor = max(floor, slot + 1)
            candidate = floor
            while candidate in forbidden:
                candidate += 1
            greedy[rid] = candidate

        # Constraint graph: reference edges first (S below R when R attaches
        # to S's label), then enclosure (enclosed below encloser), then the
        # greedy orientation for remaining overlaps.  Edges that would close
        # a cycle are skipped, so references win over enclosure.
        edges: dict[str, set[str]] = {rid: set() for rid in members}

        def creates_cycle(src: str, dst: str) -> bool:
            stack, seen = [dst], set()
            while stack:
                node = stack.pop()
                if node == src:
                    return True
                if node in seen:
                    continue
                seen.add(node)
                stack.extend(edges[node])
            return False

        def add_edge(low: str, high: str) -> None:
            if high not in edges[low] and not creates_cycle(low, high):
                edges[low].add(high)

        for rid in members:
            for ref in by_id[rid].rel.references():
                if ref.kind == "relation" and ref.ref in edges:
                    referenced = by_id[ref.ref]
                    if referenced.side == side and referenced.label_row == row:
                        add_edge(ref.ref, rid)
        for i, a in enumerate(members):
            ax1, ax2 = intervals[a]
            for b in members[i + 1:]:
                bx1, bx2 = intervals[b]
                if ax1 < bx1 and bx2 < ax2:
                    add_edge(b, a)
                elif bx1 < ax1 and ax2 < bx2:
                    add_edge(a, b)
        for i, a in enumerate(members):
            ax1, ax2 = intervals[a]
            for b in members[i + 1:]:
                bx1, bx2 = intervals[b]
                if not (ax1 < bx2 and bx1 < ax2):
                    continue
                if creates_cycle(b, a) or creates_cycle(a, b):
                    continue  # already ordered transitively
                low, high = (a, b) if (greedy[a], rank[a]) < (greedy[b], rank[b]) \
                    else (b, a)
                add_edge(low, high)

        # Longest path over the DAG, processed in deterministic order.
        incoming: dict[str, set[str]] = {rid: set() for rid in members}
        for low, highs in edges.items():
            for high in highs:
                incoming[high].add(low)
        final: dict[str, int] = {}
        pending = sorted(members, key=lambda rid: rank[rid])
        while pending:
            progressed = False
            remaining = []
            for rid in pending:
                if all(p in final for p in incoming[rid]):
                    final[rid] = 1 + max((final[p] for p in incoming[rid]), default=0)
                    progressed = True
                else:
                    remaining.append(rid)
            pending = remaining
            if not progressed:  # unreachable: edges form a DAG by construction
                for rid in pending:
                    final[rid] = 1
                break

        for rid in members:
            slots[(rid, row)] = final[rid]

    for arc in arcs:
        for segment in arc.segments:
            key = (arc.rel.id, segment[0])
            if key in slots:
                segment[3] = slots[key]


def _compute(doc: Document, cfg: ViewConfig,
             row_range: Optional[tuple[int, int]]) -> LayoutGeometry:
    ws = _Workspace(doc, cfg)
    n_rows = ws.rows.n_rows
    if row_range is None:
        row_range = (0, max(n_rows - 1, 0))
    a, b = row_range
    if not (0 <= a <= b) or (n_rows > 0 and b >= n_rows) or (n_rows == 0 and b > 0):
        raise RangeOutOfBounds(f"rows {a}..{b} outside 0..{max(n_rows - 1, 0)}")
    wanted = set(range(a, b + 1))

    # Candidates: visible relations whose endpoint-row span meets the window.
    depth = _reference_depth(doc, ws.visible)
    candidates: list[Relation] = []
    for rid in sorted(ws.visible & set(doc.relations), key=id_sort_key):
        rel = doc.relations[rid]
        rows = [ws.ref_anchor(ref)[0] for ref in rel.references()]
        if rows and min(rows) <= b and max(rows) >= a:
            candidates.append(rel)

    arcs = [_build_arc(ws, rel) for rel in candidates]
    for arc in arcs:
        arc.depth = depth[arc.rel.id]
    order = [arc.rel.id for arc in sorted(
        arcs, key=lambda arc: (arc.depth, arc.width, id_sort_key(arc.rel.id)))]
    _assign_slots(arcs, order, wanted)

    arc_index = {arc.rel.id: arc for arc in arcs}
    for arc in arcs:
        for attachment in arc.attachments:
            ref = attachment[1]
            if ref.kind == "relation":
                referenced = arc_index.get(ref.ref)
                if referenced is not None:
                    key_row = referenced.label_row
                    segment = next((s for s in referenced.segments
                                    if s[0] == key_row and s[3] > 0), None)
                    attachment[4] = segment[3] if segment else 0

    # Assemble the frozen geometry, window rows only.
    row_tokens: dict[int, list[TokenBox]] = {r: [] for r in wanted}
    for token in doc.tokens:
        r, x, w = ws.rows.placements[token.index]
        if r in wanted:
            row_tokens[r].append(TokenBox(token.index, r, x, w, token.surface))
    rows_out = tuple(
        Row(index=r,
            y_baseline=r * cfg.row_height + cfg.baseline_offset,
            tokens=tuple(sorted(row_tokens[r], key=lambda tb: (tb.x, tb.token_index))))
        for r in sorted(wanted)
    ) if n_rows > 0 else ()

    spans: list[MentionSpanBox] = []
    for mid in sorted(ws.visible & set(doc.mentions), key=id_sort_key):
        mention = doc.mentions[mid]
        for (s, e) in mention.anchors:
            for (row, x1, x2) in ws.fragment_pieces(s, e):
                if row in wanted:
                    spans.append(MentionSpanBox(
                        mid, row, x1, x2, mention.label, mention.type, mention.layer))

    arcs_out = []
    handles: dict[str, Handle] = {}
    for arc in sorted(arcs, key=lambda arc: id_sort_key(arc.rel.id)):
        segments = tuple(
            ArcSegment(s[0], s[1], s[2], s[3])
            for s in arc.segments if s[0] in wanted)
        label = LabelBox(arc.label_row, arc.label_x1, arc.label_x2, arc.label_text)
        attachments = tuple(
            Attachment(a[0], a[1], a[2], a[3], a[4], a[5]) for a in arc.attachments)
        arcs_out.append(ArcPath(arc.rel.id, arc.side, label, segments, attachments))
        label_segment = next(
            (s for s in arc.segments if s[0] == arc.label_row and s[3] > 0), None)
        if label_segment is not None:
            handles[arc.rel.id] = Handle(
                arc.label_row, (arc.label_x1 + arc.label_x2) / 2.0, label_segment[3])

    return LayoutGeometry(
        rows=rows_out,
        mention_spans=tuple(spans),
        arcs=tuple(arcs_out),
        handles=handles,
        row_range=(a, b),
        visited_relations=tuple(sorted(ws.visited, key=id_sort_key)),
    )


# --- public operations ----------------------------------------------------------------

def layout_document(doc: Document, cfg: ViewConfig) -> LayoutGeometry:
    return _compute(doc, cfg, None)


def layout_window(doc: Document, cfg: ViewConfig,
                  row_range: tuple[int, int]) -> LayoutGeometry:
    """Geometry for the given rows only; identical to those rows of a full layout."""
    return _compute(doc, cfg, row_range)


def assign_slots(doc: Document, cfg: ViewConfig, side: Side) -> dict[tuple[str, int], int]:
    """(relation id, row) -> slot for all visible arcs on one side."""
    geometry = _compute(doc, cfg, None)
    return {
        (arc.relation_id, segment.row): segment.slot
        for arc in geometry.arcs if arc.side == side
        for segment in arc.segments
    }


def split_cross_row_arcs(doc: Document, cfg: ViewConfig) -> dict[str, list[tuple[int, float, float]]]:
    """Per-row (row, x1, x2) runs of every visible arc, before slotting."""
    geometry = _compute(doc, cfg, None)
    return {
        arc.relation_id: [(s.row, s.x1, s.x2) for s in arc.segments]
        for arc in geometry.arcs
    }


def geometry_to_json(geometry: LayoutGeometry) -> dict:
    """Documented JSON schema consumed by the SVG renderer's peers and the UI."""
    return {
        "row_range": list(geometry.row_range),
        "rows": [
            {
                "index": row.index,
                "y": row.y_baseline,
                "tokens": [
                    {"token": tb.token_index, "x": tb.x, "width": tb.width,
                     "text": tb.text}
                    for tb in row.tokens
                ],
            }
            for row in geometry.rows
        ],
        "mentions": [
            {"id": s.mention_id, "row": s.row, "x1": s.x1, "x2": s.x2,
             "label": s.label, "type": s.type, "layer": s.layer}
            for s in geometry.mention_spans
        ],
        "arcs": [
            {
                "id": arc.relation_id,
                "side": arc.side,
                "label": {"row": arc.label.row, "x1": arc.label.x1,
                          "x2": arc.label.x2, "text": arc.label.text},
                "segments": [
                    {"row": s.row, "x1": s.x1, "x2": s.x2, "slot": s.slot}
                    for s in arc.segments
                ],
                "attachments": [
                    {"role": a.role, "ref": a.ref.to_json(), "row": a.row,
                     "x": a.x, "height": a.height, "arrow": a.arrow}
                    for a in arc.attachments
                ],
            }
            for arc in geometry.arcs
        ],
        "handles": {
            rid: {"row": h.row, "x": h.x, "slot": h.slot}
            for rid, h in sorted(geometry.handles.items(), key=lambda kv: kv[0])
        },
        "visited_relations": list(geometry.visited_relations),
    }


def count_crossings(geometry: LayoutGeometry) -> int:
    """Arc-segment pairs on one side and row that properly interleave and
    whose slots do not separate them vertically at the interleave."""
    grouped: dict[tuple[str, int], list[tuple[float, float, int, list[tuple[float, int]]]]] = {}
    for arc in geometry.arcs:
        drops_by_row: dict[int, list[tuple[float, int]]] = {}
        for attachment in arc.attachments:
            drops_by_row.setdefault(attachment.row, []).append(
                (attachment.x, attachment.height))
        for segment in arc.segments:
            drops = [d for d in drops_by_row.get(segment.row, ())
                     if segment.x1 <= d[0] <= segment.x2]
            grouped.setdefault((arc.side, segment.row), []).append(
                (segment.x1, segment.x2, segment.slot, drops))

    total = 0
    for segments in grouped.values():
        for i in range(len(segments)):
            for j in range(i + 1, len(segments)):
                first, second = segments[i], segments[j]
                if first[0] > second[0]:
                    first, second = second, first
                if not (first[0] < second[0] < first[1] < second[1]):
                    continue
                if _vertically_interacting(first, second):
                    total += 1
    return total


def _vertically_interacting(a, b) -> bool:
    ax1, ax2, aslot, adrops = a
    bx1, bx2, bslot, bdrops = b
    if aslot == bslot:
        return True
    for x, height in bdrops:
        if ax1 < x < ax2 and min(bslot, height) < aslot < max(bslot, height):
            return True
    for x, height in adrops:
        if bx1 < x < bx2 and min(aslot, height) < bslot < max(aslot, height):
            return True
    return False
