"""Taxonomy file grammar: indentation, colors, inheritance, uniqueness."""

from __future__ import annotations

import pytest

from annograph.errors import BadIndentation, DuplicateTypeName, ParseFailure
from annograph.formats import parse_taxonomy, serialize_taxonomy
from annograph.formats.taxonomy import DEFAULT_PALETTE
from annograph.model import recolor_type


def test_three_level_chain_and_cascade():
    taxonomy, _ = parse_taxonomy(
        "Entity\n  MacroMolecule\n    Gene_or_gene_product\n")
    entity = taxonomy.roots[0]
    assert entity.name == "Entity"
    assert entity.children[0].children[0].name == "Gene_or_gene_product"
    repainted = recolor_type(taxonomy, "Entity", "#ABCDEF", cascade=True)
    assert repainted.color_map()["Gene_or_gene_product"] == "#ABCDEF"


def test_empty_file():
    taxonomy, _ = parse_taxonomy("")
    assert taxonomy.roots == ()


def test_duplicate_type_name():
    with pytest.raises(ParseFailure) as exc:
        parse_taxonomy("Protein\nOther\n  Protein\n")
    assert isinstance(exc.value.issues[0], DuplicateTypeName)


def test_odd_indentation():
    with pytest.raises(ParseFailure) as exc:
        parse_taxonomy("A\n   B\n")
    assert isinstance(exc.value.issues[0], BadIndentation)


def test_indentation_jump():
    with pytest.raises(ParseFailure) as exc:
        parse_taxonomy("A\n    B\n")
    assert isinstance(exc.value.issues[0], BadIndentation)


def test_color_inheritance_and_palette():
    taxonomy, _ = parse_taxonomy(
        "A: #111111\n  B\nC\n  D: #222222\n    E\n")
    colors = taxonomy.color_map()
    assert colors["B"] == "#111111"          # nearest ancestor
    assert colors["C"] == DEFAULT_PALETTE[0]  # first palette assignment
    assert colors["D"] == "#222222"
    assert colors["E"] == "#222222"


def test_serialize_round_trip(induction_taxonomy):
    emitted = serialize_taxonomy(induction_taxonomy)
    reparsed, _ = parse_taxonomy(emitted)
    assert reparsed == induction_taxonomy
    assert serialize_taxonomy(reparsed) == emitted
