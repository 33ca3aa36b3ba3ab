"""Shared fixtures: the bundled corpus plus synthetic stress documents."""

from __future__ import annotations

import random
from dataclasses import replace
from pathlib import Path

import pytest

from annograph.formats import load_documents, parse_taxonomy, tokenize_text
from annograph.model import AnchorRef, Argument, Document, Relation

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture()
def induction_doc() -> Document:
    docs, _ = load_documents(DATA_DIR / "induction_p21.ann")
    return docs[0]


@pytest.fixture()
def induction_taxonomy():
    taxonomy, _ = parse_taxonomy(
        (DATA_DIR / "induction_p21.taxonomy").read_text(encoding="utf-8"))
    return taxonomy


@pytest.fixture()
def dep_doc() -> Document:
    docs, _ = load_documents(DATA_DIR / "induction_p21_dep.conll")
    return docs[0]


@pytest.fixture()
def bioc_docs() -> list[Document]:
    docs, _ = load_documents(DATA_DIR / "regulation_pair.xml")
    return docs


@pytest.fixture()
def morph_docs() -> tuple[Document, Document]:
    neg, _ = load_documents(DATA_DIR / "unlockable_neg.ann")
    pos, _ = load_documents(DATA_DIR / "unlockable_pos.ann")
    return neg[0], pos[0]


@pytest.fixture()
def layered_doc(induction_doc, dep_doc) -> Document:
    """Semantic events and syntactic dependencies over the same sentence."""
    assert induction_doc.text == dep_doc.text
    assert induction_doc.tokens == dep_doc.tokens
    return replace(
        induction_doc,
        mentions={**induction_doc.mentions, **dep_doc.mentions},
        relations={**induction_doc.relations, **dep_doc.relations},
    )


def make_synthetic_document(n_tokens: int, n_relations: int, seed: int,
                            max_distance: int = 40) -> Document:
    """Annotation-dense document with sentence-local relations."""
    rng = random.Random(seed)
    words = [
        "".join(rng.choice("abcdefghijklmnopqrstuvwxyz")
                for _ in range(rng.randint(2, 9)))
        for _ in range(n_tokens)
    ]
    text = " ".join(words)
    tokens = tokenize_text(text)
    relations = {}
    for k in range(n_relations):
        i = rng.randrange(0, n_tokens - 1)
        j = min(n_tokens - 1, i + rng.randint(1, max_distance))
        if i == j:
            continue
        rid = f"L{k}"
        relations[rid] = Relation(
            id=rid, label="", arguments=(
                Argument("head", AnchorRef.token(i)),
                Argument("dep", AnchorRef.token(j))),
            layer="semantic" if k % 2 == 0 else "syntactic")
    return Document(id="synthetic", text=text, tokens=tokens,
                    mentions={}, relations=relations)


@pytest.fixture(scope="session")
def big_doc() -> Document:
    return make_synthetic_document(n_tokens=10_000, n_relations=2_000, seed=42)
