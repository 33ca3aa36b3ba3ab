"""Taxonomy file grammar: two-space indentation, optional explicit colors.

A line is ``NAME`` or ``NAME: #RRGGBB``.  Children are indented two spaces
deeper than their parent.  Entries without an explicit color inherit the
nearest ancestor color; entries with no colored ancestor take colors from a
fixed palette in depth-first order, so parsing is fully deterministic.
"""

from __future__ import annotations

import re

from ..errors import BadIndentation, DuplicateTypeName, MalformedLine
from ..model import Taxonomy, TypeEntry
from .common import IssueCollector, ParseReport

_COLOR_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")

DEFAULT_PALETTE = (
    "#1F77B4", "#FF7F0E", "#2CA02C", "#D62728", "#9467BD",
    "#8C564B", "#E377C2", "#7F7F7F", "#BCBD22", "#17BECF",
)
FALLBACK_COLOR = DEFAULT_PALETTE[0]


def parse_taxonomy(data: str) -> tuple[Taxonomy, ParseReport]:
    report = ParseReport(source_format="taxonomy")
    issues = IssueCollector()

    # (depth, name, explicit_color, children, inherited_color)
    class Node:
        __slots__ = ("name", "explicit", "children")

        def __init__(self, name, explicit):
            self.name = name
            self.explicit = explicit
            self.children: list[Node] = []

    roots: list[Node] = []
    stack: list[tuple[int, Node]] = []
    seen: set[str] = set()

    for lineno, raw in enumerate(data.splitlines(), start=1):
        if not raw.strip():
            continue
        locator = f"line {lineno}"
        stripped = raw.lstrip(" ")
        indent = len(raw) - len(stripped)
        if ":" in stripped:
            name, _, color_part = stripped.partition(":")
            name = name.strip()
            color = color_part.strip()
            if not _COLOR_RE.match(color):
                issues.add(MalformedLine(f"bad color {color!r}", locator))
                continue
        else:
            name, color = stripped.strip(), None
        if not name:
            issues.add(MalformedLine("missing type name", locator))
            continue
        if indent % 2 != 0:
            issues.add(BadIndentation(f"indent of {indent} spaces is not a "
                                      "multiple of two", locator))
            continue
        depth = indent // 2
        if depth > len(stack):
            issues.add(BadIndentation(
                f"indent jumps from depth {len(stack)} to {depth}", locator))
            continue
        if name in seen:
            issues.add(DuplicateTypeName(f"type {name!r} defined twice", locator))
            continue
        seen.add(name)
        node = Node(name, color.upper() if color else None)
        del stack[depth:]
        if depth == 0:
            roots.append(node)
        else:
            stack[-1][1].children.append(node)
        stack.append((depth, node))

    issues.raise_if_any()

    palette_cursor = 0

    def build(node: Node, inherited: str | None) -> TypeEntry:
        nonlocal palette_cursor
        if node.explicit:
            color = node.explicit
        elif inherited:
            color = inherited
        else:
            color = DEFAULT_PALETTE[palette_cursor % len(DEFAULT_PALETTE)]
            palette_cursor += 1
        children = tuple(build(c, color) for c in node.children)
        return TypeEntry(node.name, color, children)

    return Taxonomy(tuple(build(r, None) for r in roots)), report


def serialize_taxonomy(taxonomy: Taxonomy) -> str:
    """Emit every entry with its resolved color; reparsing is structurally exact."""
    lines: list[str] = []

    def emit(entry: TypeEntry, depth: int) -> None:
        lines.append(f"{'  ' * depth}{entry.name}: {entry.color}")
        for child in entry.children:
            emit(child, depth + 1)

    for root in taxonomy.roots:
        emit(root, 0)
    return "".join(line + "\n" for line in lines)
