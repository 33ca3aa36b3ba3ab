"""BioC parsing: offset rebasing, relation nodes, multi-document collections."""

from __future__ import annotations

import pytest

from annograph.errors import ParseFailure, UnknownRefId, XmlMalformed
from annograph.formats import parse_bioc
from annograph.model import AnchorRef

MINIMAL = """<?xml version="1.0"?>
<collection><source>x</source>
<document><id>d1</id>
<passage><offset>0</offset><text>{text}</text>{body}</passage>
{relations}
</document>
</collection>
"""


def make(text="Induction of p21 by p53", body="", relations=""):
    return MINIMAL.format(text=text, body=body, relations=relations)


def test_annotation_offsets_anchor_mentions():
    xml = make(body='<annotation id="G1"><infon key="type">Gene</infon>'
                    '<location offset="13" length="3"/><text>p21</text></annotation>')
    docs, _ = parse_bioc(xml)
    m = docs[0].mentions["G1"]
    assert m.anchors == ((13, 16),)
    assert m.type == "Gene"


def test_relation_node_referencing_relation(bioc_docs):
    reg1 = bioc_docs[0]
    e2 = reg1.relations["E2"]
    controller = next(a for a in e2.arguments if a.role == "Controller")
    assert controller.target == AnchorRef.relation("E1")
    assert e2.trigger == AnchorRef.mention("T6")


def test_unknown_refid_rejected():
    xml = make(body='<annotation id="G1"><infon key="type">Gene</infon>'
                    '<location offset="13" length="3"/><text>p21</text></annotation>',
               relations='<relation id="R1"><infon key="type">Reg</infon>'
                         '<node refid="Zz9" role="theme"/>'
                         '<node refid="G1" role="cause"/></relation>')
    with pytest.raises(ParseFailure) as exc:
        parse_bioc(xml)
    assert any(isinstance(i, UnknownRefId) for i in exc.value.issues)


def test_multi_passage_offsets_rebase(bioc_docs):
    reg2 = bioc_docs[1]
    s, e = reg2.mentions["A3"].anchors[0]
    assert reg2.text[s:e] == "activation"
    assert reg2.text.count("\n\n") == 1  # passages joined by a blank line
    assert reg2.metadata["passages"] == [[0, 18], [20, 45]]


def test_collection_yields_one_document_each(bioc_docs):
    assert [d.id for d in bioc_docs] == ["reg1", "reg2"]


def test_malformed_xml():
    with pytest.raises(XmlMalformed):
        parse_bioc("<collection><document>")


def test_non_collection_root():
    with pytest.raises(XmlMalformed):
        parse_bioc("<documents/>")


def test_out_of_bounds_annotation():
    xml = make(body='<annotation id="G1"><infon key="type">Gene</infon>'
                    '<location offset="13" length="9999"/><text>p21</text></annotation>')
    with pytest.raises(ParseFailure):
        parse_bioc(xml)
