"""Standoff parsing: record grammar, extensions, attribute handling, errors."""

from __future__ import annotations

import pytest

from annograph.errors import (
    DanglingReference,
    MalformedLine,
    OffsetOutOfBounds,
    ParseFailure,
    TextMismatch,
)
from annograph.formats import parse_brat, serialize_brat
from annograph.model import AnchorRef

TEXT = "Induction of p21 by p53 following DNA damage inhibits both Cdk4 and Cdk2"


def test_textbound_line_becomes_mention():
    doc, report = parse_brat(TEXT, "T1\tGene_or_gene_product 13 16\tp21\n")
    m = doc.mentions["T1"]
    assert m.type == "Gene_or_gene_product"
    assert m.anchors == ((13, 16),)
    assert m.label == "p21"
    assert m.layer == "semantic"
    assert not report.warnings and not report.dropped


def test_event_line_references_relation():
    ann = (
        "T3\tGene_or_gene_product 59 63\tCdk4\n"
        "T5\tPositive_activation 0 9\tInduction\n"
        "T2\tGene_or_gene_product 20 23\tp53\n"
        "T1\tGene_or_gene_product 13 16\tp21\n"
        "E1\tPositive_activation:T5 Controller:T2 Controlled:T1\n"
        "E2\tNegative_regulation:T5 Controller:E1 Controlled:T3\n"
    )
    doc, _ = parse_brat(TEXT, ann)
    e2 = doc.relations["E2"]
    assert e2.trigger == AnchorRef.mention("T5")
    assert e2.arguments[0].role == "Controller"
    assert e2.arguments[0].target == AnchorRef.relation("E1")
    assert e2.arguments[1].target == AnchorRef.mention("T3")


def test_reversed_offsets_rejected():
    with pytest.raises(ParseFailure) as exc:
        parse_brat(TEXT, "T9\tProtein 50 47\tx\n")
    assert any(isinstance(i, (MalformedLine, OffsetOutOfBounds))
               for i in exc.value.issues)
    assert "line 1" in str(exc.value.issues[0])


def test_offsets_beyond_text_rejected():
    with pytest.raises(ParseFailure) as exc:
        parse_brat("short", "T1\tX 0 99\tnope\n")
    assert any(isinstance(i, OffsetOutOfBounds) for i in exc.value.issues)


def test_surface_mismatch_rejected():
    with pytest.raises(ParseFailure) as exc:
        parse_brat(TEXT, "T1\tGene 13 16\tp53\n")
    assert any(isinstance(i, TextMismatch) for i in exc.value.issues)


def test_dangling_event_reference_names_line():
    ann = "T1\tGene 13 16\tp21\nE1\tReg:T1 Theme:T9\n"
    with pytest.raises(ParseFailure) as exc:
        parse_brat(TEXT, ann)
    dangling = [i for i in exc.value.issues if isinstance(i, DanglingReference)]
    assert dangling and dangling[0].locator == "line 2"


def test_discontinuous_span():
    text = "per cent of the cells"
    doc, _ = parse_brat(text, "T1\tQuantity 0 3;12 15\tper the\n")
    m = doc.mentions["T1"]
    assert m.anchors == ((0, 3), (12, 15))
    assert m.label == "per the"


def test_attributes_decorate_and_round_trip():
    ann = (
        "T1\tGene 13 16\tp21\n"
        "E1\tReg:T1 Theme:T1\n"
        "A1\tNegation E1\n"
        "A2\tConfidence E1 High\n"
        "N1\tReference T1 UniProt:P38936\tCDKN1A\n"
        "#1\tAnnotatorNotes T1\tdouble-check the span\n"
    )
    doc, report = parse_brat(TEXT, ann)
    assert doc.relations["E1"].label == "Reg [Negation] [Confidence=High]"
    meta = doc.metadata["brat"]
    assert ["A1", "Negation", "E1", None] in meta["attributes"]
    assert meta["normalizations"][0][0] == "N1"
    assert meta["comments"][0][0] == "#1"

    parts, _ = serialize_brat(doc)
    reparsed, _ = parse_brat(parts["txt"], parts["ann"], doc_id=doc.id)
    assert reparsed == doc


def test_unknown_record_kind_is_dropped_with_warning():
    ann = "T1\tGene 13 16\tp21\n*\tEquiv T1 T1\n"
    doc, report = parse_brat(TEXT, ann)
    assert len(doc.mentions) == 1
    assert report.dropped and report.dropped[0][0] == "line 2"


def test_trigger_free_relation_line():
    ann = (
        "T1\tGene 13 16\tp21\n"
        "T2\tGene 20 23\tp53\n"
        "R1\tBinding Arg1:T1 Arg2:T2\n"
    )
    doc, _ = parse_brat(TEXT, ann)
    r1 = doc.relations["R1"]
    assert r1.trigger is None
    assert [a.role for a in r1.arguments] == ["Arg1", "Arg2"]


def test_relation_lines_may_reference_relations():
    ann = (
        "T1\tPrefix 0 2\tun\n"
        "T2\tRoot 2 6\tlock\n"
        "T3\tSuffix 6 10\table\n"
        "R1\tDerivation Arg1:T2 Arg2:T3\n"
        "R2\tDerivation Arg1:T1 Arg2:R1\n"
    )
    doc, _ = parse_brat("unlockable", ann)
    assert doc.relations["R2"].arguments[1].target == AnchorRef.relation("R1")


def test_zero_width_span_allowed():
    doc, _ = parse_brat(TEXT, "T1\tMarker 0 0\t\n")
    assert doc.mentions["T1"].anchors == ((0, 0),)


def test_token_reference_extension():
    ann = "D1\t_ head:@8 nsubj:@0\nA1\tLayer D1 syntactic\n"
    doc, _ = parse_brat(TEXT, ann)
    d1 = doc.relations["D1"]
    assert d1.arguments[0].target == AnchorRef.token(8)
    assert d1.layer == "syntactic"


def test_structural_attributes_set_fields():
    ann = (
        "T1\tGene 13 16\tp21\n"
        "T2\tGene 20 23\tp53\n"
        "R1\tBinding Arg1:T1 Arg2:T2\n"
        "A1\tLabel T1 p21 protein\n"
        "A2\tDirectionality R1 undirected\n"
    )
    doc, _ = parse_brat(TEXT, ann)
    assert doc.mentions["T1"].label == "p21 protein"
    assert doc.relations["R1"].directionality == "undirected"
    # metadata keeps only decorative attributes
    assert "brat" not in doc.metadata


def test_serialization_is_deterministic(induction_doc):
    first, _ = serialize_brat(induction_doc)
    second, _ = serialize_brat(induction_doc)
    assert first == second


def test_duplicate_id_rejected():
    ann = "T1\tGene 13 16\tp21\nT1\tGene 20 23\tp53\n"
    with pytest.raises(ParseFailure) as exc:
        parse_brat(TEXT, ann)
    assert any("duplicate" in str(i) for i in exc.value.issues)


def test_all_problems_reported_at_once():
    ann = "T1\tGene 50 47\tx\nT2\n"
    with pytest.raises(ParseFailure) as exc:
        parse_brat(TEXT, ann)
    assert len(exc.value.issues) == 2
