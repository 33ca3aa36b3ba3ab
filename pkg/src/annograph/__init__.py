"""Annotation graph engine.

Parses standoff, CoNLL-X, and BioC annotations into one graph model that
permits relations over relations, lays documents out as deterministic
row-based arc diagrams, extracts semantic summary trees, renders SVG,
supports auditable editing with replayable diff logs, and serves it all over
HTTP for the interactive UI.
"""

from .model import (
    AnchorRef,
    Argument,
    Document,
    Mention,
    Relation,
    Taxonomy,
    Token,
    TypeEntry,
    VisibilityFilter,
    add_relation,
    apply_filter,
    content_equal,
    content_hash,
    delete_element,
    document_from_json,
    document_to_json,
    recolor_type,
    validate_document,
)

__version__ = "0.1.0"

__all__ = [
    "AnchorRef",
    "Argument",
    "Document",
    "Mention",
    "Relation",
    "Taxonomy",
    "Token",
    "TypeEntry",
    "VisibilityFilter",
    "add_relation",
    "apply_filter",
    "content_equal",
    "content_hash",
    "delete_element",
    "document_from_json",
    "document_to_json",
    "recolor_type",
    "validate_document",
    "__version__",
]
