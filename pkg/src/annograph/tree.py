"""Semantic summary trees: unfolding the relation-reference DAG from a root.

Selecting a relation shows it with its trigger and role-labelled arguments;
selecting a word or mention that triggers relations shows those relations as
siblings beneath it.  Shared sub-relations are duplicated per referencing
parent, so the result is always a finite tree (the graph is acyclic).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownId
from .model import AnchorRef, Document, Relation, id_sort_key


@dataclass(frozen=True)
class SummaryNode:
    ref: AnchorRef
    label: str
    children: tuple[tuple[str, "SummaryNode"], ...] = ()


@dataclass(frozen=True)
class SummaryTree:
    root: SummaryNode

    def node_count(self) -> int:
        def count(node: SummaryNode) -> int:
            return 1 + sum(count(child) for _, child in node.children)

        return count(self.root)

    def signature(self):
        """Nested (label, ((role, signature), ...)) shape for equality checks."""
        def sig(node: SummaryNode):
            return (node.label, tuple((role, sig(c)) for role, c in node.children))

        return sig(self.root)


def _display_label(doc: Document, ref: AnchorRef) -> str:
    target = doc.resolve(ref)
    if ref.kind == "token":
        return target.surface
    return target.label


def _relation_node(doc: Document, rel: Relation, via_trigger: bool) -> SummaryNode:
    children: list[tuple[str, SummaryNode]] = []
    if rel.trigger is not None and not via_trigger:
        children.append(("trigger", _leaf_or_relation(doc, rel.trigger)))
    for argument in rel.arguments:
        children.append((argument.role, _leaf_or_relation(doc, argument.target)))
    return SummaryNode(AnchorRef.relation(rel.id), rel.label, tuple(children))


def _leaf_or_relation(doc: Document, ref: AnchorRef) -> SummaryNode:
    if ref.kind == "relation":
        return _relation_node(doc, doc.relations[ref.ref], via_trigger=False)
    return SummaryNode(ref, _display_label(doc, ref))


def extract_tree(doc: Document, selected: AnchorRef) -> SummaryTree:
    """Tree rooted at ``selected``; never mutates the document."""
    try:
        doc.resolve(selected)
    except Exception as err:
        raise UnknownId(f"selection does not resolve: {err}") from err

    if selected.kind == "relation":
        return SummaryTree(_relation_node(doc, doc.relations[selected.ref],
                                          via_trigger=False))

    triggered = [
        doc.relations[rid]
        for rid in sorted(doc.relations, key=id_sort_key)
        if doc.relations[rid].trigger == selected
    ]
    children = tuple(
        ("triggers", _relation_node(doc, rel, via_trigger=True)) for rel in triggered
    )
    return SummaryTree(SummaryNode(selected, _display_label(doc, selected), children))


def tree_to_json(tree: SummaryTree) -> dict:
    def node(n: SummaryNode) -> dict:
        return {
            "ref": n.ref.to_json(),
            "label": n.label,
            "children": [{"role": role, "node": node(child)}
                         for role, child in n.children],
        }

    return {"root": node(tree.root)}
