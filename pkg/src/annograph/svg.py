"""Standalone SVG output for annotation layouts and summary trees.

Documents render as rows of text with colored mention underlines and arcs
with rounded corners, role labels, and arrowheads above (semantic) or below
(syntactic) each row.  Every element carries a ``data-id`` attribute naming
its source annotation so a UI can hit-test against the drawing.  Output is
byte-identical for identical inputs: attribute order is fixed and every
coordinate is formatted to two decimals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional
from xml.sax.saxutils import escape, quoteattr

from .layout import ArcPath, LayoutGeometry
from .model import Taxonomy
from .tree import SummaryNode, SummaryTree

_COLOR_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")


@dataclass(frozen=True)
class StyleSheet:
    """Colors and geometry constants shared by all renderers."""

    semantic_color: str = "#3A6EA5"
    syntactic_color: str = "#8A8F98"
    text_color: str = "#1A1A1A"
    background: str = "#FFFFFF"
    type_colors: Mapping[str, str] = field(default_factory=dict)
    font_family: str = "Helvetica, Arial, sans-serif"
    font_size: float = 13.0
    slot_height: float = 18.0
    arc_gap: float = 8.0
    token_height: float = 16.0
    corner_radius: float = 6.0
    padding: float = 16.0

    def __post_init__(self):
        for name, color in [("semantic_color", self.semantic_color),
                            ("syntactic_color", self.syntactic_color),
                            ("text_color", self.text_color),
                            ("background", self.background),
                            *self.type_colors.items()]:
            if not _COLOR_RE.match(color):
                raise ValueError(f"{name}: not a #RRGGBB color: {color!r}")

    @classmethod
    def from_taxonomy(cls, taxonomy: Optional[Taxonomy], **overrides) -> "StyleSheet":
        colors = taxonomy.color_map() if taxonomy is not None else {}
        return cls(type_colors=colors, **overrides)

    def color_for(self, type_name: Optional[str], layer: str) -> str:
        if type_name is not None and type_name in self.type_colors:
            return self.type_colors[type_name]
        return self.semantic_color if layer == "semantic" else self.syntactic_color


def _fmt(value: float) -> str:
    return f"{value:.2f}"


class _SvgBuilder:
    def __init__(self):
        self.parts: list[str] = []

    def add(self, tag: str, attrs: list[tuple[str, str]],
            text: Optional[str] = None) -> None:
        rendered = " ".join(f"{k}={quoteattr(v)}" for k, v in attrs)
        if text is None:
            self.parts.append(f"<{tag} {rendered}/>")
        else:
            self.parts.append(f"<{tag} {rendered}>{escape(text)}</{tag}>")

    def open(self, tag: str, attrs: list[tuple[str, str]]) -> None:
        rendered = " ".join(f"{k}={quoteattr(v)}" for k, v in attrs)
        self.parts.append(f"<{tag} {rendered}>" if attrs else f"<{tag}>")

    def close(self, tag: str) -> None:
        self.parts.append(f"</{tag}>")

    def document(self, width: float, height: float) -> bytes:
        header = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_fmt(width)}" height="{_fmt(height)}" '
            f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
        )
        return (header + "".join(self.parts) + "</svg>\n").encode("utf-8")


def _arc_y(style: StyleSheet, y_baseline: float, side: str, slot: int) -> float:
    if side == "above":
        return y_baseline - style.token_height - style.arc_gap - slot * style.slot_height
    return y_baseline + style.arc_gap + slot * style.slot_height


def _segment_path(style: StyleSheet, seg_x1: float, seg_x2: float, run_y: float,
                  left_drop: Optional[float], right_drop: Optional[float]) -> str:
    """One rounded-corner run; drops are endpoint y targets or None at row edges."""
    r = min(style.corner_radius, (seg_x2 - seg_x1) / 2.0)
    up = left_drop is None or left_drop >= run_y  # above-side drops go downward
    commands: list[str] = []
    if left_drop is None:
        commands.append(f"M {_fmt(seg_x1)} {_fmt(run_y)}")
    else:
        commands.append(f"M {_fmt(seg_x1)} {_fmt(left_drop)}")
        commands.append(f"L {_fmt(seg_x1)} {_fmt(run_y + (r if up else -r))}")
        commands.append(f"Q {_fmt(seg_x1)} {_fmt(run_y)} {_fmt(seg_x1 + r)} {_fmt(run_y)}")
    if right_drop is None:
        commands.append(f"L {_fmt(seg_x2)} {_fmt(run_y)}")
    else:
        commands.append(f"L {_fmt(seg_x2 - r)} {_fmt(run_y)}")
        commands.append(f"Q {_fmt(seg_x2)} {_fmt(run_y)} {_fmt(seg_x2)} "
                        f"{_fmt(run_y + (r if up else -r))}")
        commands.append(f"L {_fmt(seg_x2)} {_fmt(right_drop)}")
    return " ".join(commands)


def render_annotation_svg(geometry: LayoutGeometry, style: StyleSheet) -> bytes:
    """Render one geometry (full document or a window) to standalone SVG."""
    builder = _SvgBuilder()
    pad = style.padding

    max_x = 0.0
    min_y, max_y = 0.0, style.token_height * 2
    baselines: dict[int, float] = {}
    for row in geometry.rows:
        baselines[row.index] = row.y_baseline
        for box in row.tokens:
            max_x = max(max_x, box.x + box.width)
        max_y = max(max_y, row.y_baseline + style.token_height)
    for arc in geometry.arcs:
        for segment in arc.segments:
            base = baselines.get(segment.row)
            if base is None:
                continue
            y = _arc_y(style, base, arc.side, segment.slot)
            min_y = min(min_y, y - style.slot_height)
            max_y = max(max_y, y + style.slot_height)
            max_x = max(max_x, segment.x2)

    offset_x, offset_y = pad, pad - min(0.0, min_y)
    width = max_x + 2 * pad
    height = max_y - min(0.0, min_y) + 2 * pad

    builder.add("rect", [("x", "0"), ("y", "0"), ("width", _fmt(width)),
                         ("height", _fmt(height)), ("fill", style.background)])

    for row in geometry.rows:
        y = row.y_baseline + offset_y
        builder.open("g", [("class", "row"), ("data-row", str(row.index))])
        for box in row.tokens:
            builder.add(
                "text",
                [("x", _fmt(box.x + offset_x)), ("y", _fmt(y)),
                 ("class", "token"), ("data-token", str(box.token_index)),
                 ("font-family", style.font_family),
                 ("font-size", _fmt(style.font_size)),
                 ("fill", style.text_color)],
                box.text)
        builder.close("g")

    underline_offset = 4.0
    seen_mentions: set[str] = set()
    for span in geometry.mention_spans:
        base = baselines.get(span.row)
        if base is None:
            continue
        color = style.color_for(span.type, span.layer)
        y = base + underline_offset + offset_y
        attrs = [("x1", _fmt(span.x1 + offset_x)), ("y1", _fmt(y)),
                 ("x2", _fmt(max(span.x2, span.x1 + 2.0) + offset_x)), ("y2", _fmt(y)),
                 ("stroke", color), ("stroke-width", "2.5"),
                 ("class", "mention")]
        if span.mention_id not in seen_mentions:
            attrs.append(("data-id", span.mention_id))
            seen_mentions.add(span.mention_id)
        builder.add("line", attrs)

    for arc in geometry.arcs:
        _render_arc(builder, arc, style, baselines, offset_x, offset_y)

    return builder.document(width, height)


def _render_arc(builder: _SvgBuilder, arc: ArcPath, style: StyleSheet,
                baselines: dict[int, float], offset_x: float, offset_y: float) -> None:
    relation_color = style.semantic_color if arc.side == "above" else style.syntactic_color
    builder.open("g", [("class", "arc"), ("data-id", arc.relation_id),
                       ("data-side", arc.side)])
    attachments_by_row: dict[int, list] = {}
    for attachment in arc.attachments:
        attachments_by_row.setdefault(attachment.row, []).append(attachment)

    first_row = min((s.row for s in arc.segments), default=None)
    last_row = max((s.row for s in arc.segments), default=None)
    for segment in arc.segments:
        base = baselines.get(segment.row)
        if base is None:
            continue
        run_y = _arc_y(style, base, arc.side, segment.slot)

        def drop_y(height: int) -> float:
            if height > 0:
                return _arc_y(style, base, arc.side, height) + \
                    (4.0 if arc.side == "above" else -4.0)
            if arc.side == "above":
                return base - style.token_height - 2.0
            return base + 6.0

        row_attachments = sorted(
            (a for a in attachments_by_row.get(segment.row, ())
             if segment.x1 <= a.x <= segment.x2),
            key=lambda a: (a.x, a.role))
        left_drop = right_drop = None
        multi = first_row != last_row
        is_first = segment.row == first_row
        is_last = segment.row == last_row
        if row_attachments:
            if not multi or is_first:
                leftmost = min(row_attachments, key=lambda a: a.x)
                if abs(leftmost.x - segment.x1) < 1e-6:
                    left_drop = drop_y(leftmost.height)
            if not multi or is_last:
                rightmost = max(row_attachments, key=lambda a: a.x)
                if abs(rightmost.x - segment.x2) < 1e-6:
                    right_drop = drop_y(rightmost.height)
        builder.add("path", [
            ("d", _segment_path(style, segment.x1 + offset_x, segment.x2 + offset_x,
                                run_y + offset_y,
                                None if left_drop is None else left_drop + offset_y,
                                None if right_drop is None else right_drop + offset_y)),
            ("fill", "none"), ("stroke", relation_color), ("stroke-width", "1.5"),
            ("class", "arc-segment"), ("data-row", str(segment.row)),
            ("data-slot", str(segment.slot)),
        ])
        # Interior connectors: attachments that are not the segment ends.
        for attachment in row_attachments:
            at_end = (left_drop is not None and abs(attachment.x - segment.x1) < 1e-6) or \
                     (right_drop is not None and abs(attachment.x - segment.x2) < 1e-6)
            if not at_end:
                builder.add("path", [
                    ("d", f"M {_fmt(attachment.x + offset_x)} {_fmt(run_y + offset_y)} "
                          f"L {_fmt(attachment.x + offset_x)} "
                          f"{_fmt(drop_y(attachment.height) + offset_y)}"),
                    ("fill", "none"), ("stroke", relation_color),
                    ("stroke-width", "1.5"), ("class", "arc-connector"),
                ])
        for attachment in row_attachments:
            if not attachment.arrow:
                continue
            tip_y = drop_y(attachment.height)
            direction = 1.0 if arc.side == "above" else -1.0
            x, y = attachment.x + offset_x, tip_y + offset_y
            builder.add("path", [
                ("d", f"M {_fmt(x)} {_fmt(y)} L {_fmt(x - 3.2)} "
                      f"{_fmt(y - 5.0 * direction)} L {_fmt(x + 3.2)} "
                      f"{_fmt(y - 5.0 * direction)} Z"),
                ("fill", relation_color), ("class", "arrowhead"),
            ])

    label = arc.label
    base = baselines.get(label.row)
    label_segment = next((s for s in arc.segments if s.row == label.row), None)
    if base is not None and label_segment is not None and label.text:
        run_y = _arc_y(style, base, arc.side, label_segment.slot)
        cx = (label.x1 + label.x2) / 2.0
        builder.add("rect", [
            ("x", _fmt(label.x1 - 2.0 + offset_x)),
            ("y", _fmt(run_y - style.font_size * 0.55 + offset_y)),
            ("width", _fmt(label.x2 - label.x1 + 4.0)),
            ("height", _fmt(style.font_size * 1.1)),
            ("fill", style.background), ("class", "arc-label-box"),
        ])
        builder.add("text", [
            ("x", _fmt(cx + offset_x)), ("y", _fmt(run_y + style.font_size * 0.32 + offset_y)),
            ("text-anchor", "middle"), ("class", "arc-label"),
            ("font-family", style.font_family),
            ("font-size", _fmt(style.font_size * 0.85)),
            ("fill", relation_color),
        ], label.text)
    builder.close("g")


# --- summary tree rendering -----------------------------------------------------------

def render_tree_svg(tree: SummaryTree, style: StyleSheet) -> bytes:
    """Layered top-down tree with role labels on the edges."""
    gap_x, level_height = 24.0, 64.0

    def node_width(node: SummaryNode) -> float:
        return max(30.0, style.font_size * 0.62 * len(node.label) + 16.0)

    positions: dict[int, tuple[float, float, SummaryNode]] = {}
    counter = [0]
    cursor = [0.0]

    def place(node: SummaryNode, depth: int) -> tuple[int, float]:
        index = counter[0]
        counter[0] += 1
        if not node.children:
            x = cursor[0] + node_width(node) / 2.0
            cursor[0] += node_width(node) + gap_x
        else:
            child_centers = [place(child, depth + 1)[1] for _, child in node.children]
            x = sum(child_centers) / len(child_centers)
        positions[index] = (x, depth * level_height, node)
        return index, x

    place(tree.root, 0)

    width = max(cursor[0], max(x + node_width(n) / 2.0 for x, _, n in positions.values()))
    height = (max(y for _, y, _ in positions.values()) + level_height)
    pad = style.padding
    builder = _SvgBuilder()
    builder.add("rect", [("x", "0"), ("y", "0"), ("width", _fmt(width + 2 * pad)),
                         ("height", _fmt(height + 2 * pad)),
                         ("fill", style.background)])

    # Re-walk to draw edges parent->child with stable indices.
    order: list[tuple[int, int, str]] = []  # (parent_index, child_index, role)
    counter2 = [0]

    def walk(node: SummaryNode) -> int:
        index = counter2[0]
        counter2[0] += 1
        for role, child in node.children:
            child_index = walk(child)
            order.append((index, child_index, role))
        return index

    walk(tree.root)

    for parent_index, child_index, role in sorted(order):
        px, py, _ = positions[parent_index]
        cx, cy, _ = positions[child_index]
        builder.add("line", [
            ("x1", _fmt(px + pad)), ("y1", _fmt(py + pad + 14.0)),
            ("x2", _fmt(cx + pad)), ("y2", _fmt(cy + pad - 14.0)),
            ("stroke", style.syntactic_color), ("stroke-width", "1.2"),
            ("class", "tree-edge"),
        ])
        builder.add("text", [
            ("x", _fmt((px + cx) / 2.0 + pad)), ("y", _fmt((py + cy) / 2.0 + pad)),
            ("text-anchor", "middle"), ("class", "tree-edge-role"),
            ("font-family", style.font_family),
            ("font-size", _fmt(style.font_size * 0.75)),
            ("fill", style.syntactic_color),
        ], role)

    for index in sorted(positions):
        x, y, node = positions[index]
        w = node_width(node)
        ref_kind = node.ref.kind
        color = style.semantic_color if ref_kind == "relation" else style.text_color
        attrs = [
            ("x", _fmt(x - w / 2.0 + pad)), ("y", _fmt(y - 14.0 + pad)),
            ("width", _fmt(w)), ("height", "28.00"), ("rx", "6.00"),
            ("fill", style.background), ("stroke", color), ("stroke-width", "1.2"),
            ("class", "tree-node"),
            ("data-ref", f"{node.ref.kind}:{node.ref.ref}"),
        ]
        builder.add("rect", attrs)
        builder.add("text", [
            ("x", _fmt(x + pad)), ("y", _fmt(y + style.font_size * 0.32 + pad)),
            ("text-anchor", "middle"), ("class", "tree-node-label"),
            ("font-family", style.font_family),
            ("font-size", _fmt(style.font_size * 0.85)),
            ("fill", color),
        ], node.label)

    return builder.document(width + 2 * pad, height + 2 * pad)
