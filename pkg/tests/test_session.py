"""Edit sessions: op application, undo, diff export and replay."""

from __future__ import annotations

import random

import pytest

from annograph.errors import (
    BaseMismatch,
    CycleDetected,
    InvalidArgIndex,
    NothingToUndo,
    ReplayConflict,
    UnknownId,
)
from annograph.model import AnchorRef, content_hash, document_to_json
from annograph.session import (
    CreateMention,
    CreateRelation,
    Delete,
    EditSession,
    Hide,
    MoveToken,
    Relabel,
    Retype,
    Reattach,
    RecolorType,
    Unhide,
    is_presentation,
    op_from_json,
    op_to_json,
    replay,
    replay_session,
)


class TestApply:
    def test_reattach_changes_argument(self, induction_doc):
        session = EditSession(induction_doc)
        session.apply(Reattach("E2", 0, AnchorRef.mention("T2")))
        e2 = session.current.relations["E2"]
        assert e2.arguments[0].target == AnchorRef.mention("T2")
        # E1 untouched, and the base version is unchanged
        assert session.current.relations["E1"] == induction_doc.relations["E1"]
        assert induction_doc.relations["E2"].arguments[0].target == \
            AnchorRef.relation("E1")

    def test_reattach_into_cycle_rejected(self, induction_doc):
        session = EditSession(induction_doc)
        with pytest.raises(CycleDetected):
            session.apply(Reattach("E1", 0, AnchorRef.relation("E2")))
        assert session.current == induction_doc  # failed ops change nothing

    def test_reattach_bad_index(self, induction_doc):
        session = EditSession(induction_doc)
        with pytest.raises(InvalidArgIndex):
            session.apply(Reattach("E1", 5, AnchorRef.mention("T1")))

    def test_relabel_deleted_element(self, induction_doc):
        session = EditSession(induction_doc)
        session.apply(Delete("T1"))
        with pytest.raises(UnknownId):
            session.apply(Relabel("T1", "gone"))

    def test_create_ops_pick_free_ids(self, induction_doc):
        session = EditSession(induction_doc)
        session.apply(CreateMention(label="damage", anchors=((38, 44),)))
        assert "T7" in session.current.mentions
        session.apply(CreateRelation(
            label="Binding",
            arguments=(("Arg1", AnchorRef.mention("T7")),
                       ("Arg2", AnchorRef.mention("T1")))))
        assert "R1" in session.current.relations

    def test_hide_and_unhide_track_state(self, induction_doc):
        session = EditSession(induction_doc)
        session.apply(Hide("E2"))
        assert session.state.hidden_ids == frozenset({"E2"})
        session.apply(Unhide("E2"))
        assert session.state.hidden_ids == frozenset()
        with pytest.raises(UnknownId):
            session.apply(Hide("Zz9"))

    def test_move_token_is_presentation(self, induction_doc):
        session = EditSession(induction_doc)
        seq = session.apply(MoveToken(8, 1, 0.0))
        assert seq == 1
        assert session.state.row_overrides == {8: (1, 0.0)}
        assert is_presentation(MoveToken(8, 1, 0.0))
        assert is_presentation(Hide("T1"))
        assert not is_presentation(Relabel("T1", "x"))

    def test_recolor_type_needs_taxonomy(self, induction_doc, induction_taxonomy):
        bare = EditSession(induction_doc)
        from annograph.errors import UnknownType
        with pytest.raises(UnknownType):
            bare.apply(RecolorType("Entity", "#123456"))
        session = EditSession(induction_doc, taxonomy=induction_taxonomy)
        session.apply(RecolorType("Entity", "#123456", cascade=True))
        assert session.state.taxonomy.color_map()["Gene_or_gene_product"] == "#123456"


class TestUndo:
    def test_undo_restores_base(self, induction_doc):
        session = EditSession(induction_doc)
        session.apply(Relabel("T1", "x"))
        session.undo()
        assert session.current == induction_doc

    def test_undo_restores_cascaded_delete(self, induction_doc):
        session = EditSession(induction_doc)
        session.apply(Delete("T2"))  # cascades through E1, E2, E3
        assert len(session.current.relations) == 0
        session.undo()
        assert session.current == induction_doc

    def test_undo_on_fresh_session(self, induction_doc):
        with pytest.raises(NothingToUndo):
            EditSession(induction_doc).undo()

    def test_undo_is_logged_not_rewritten(self, induction_doc):
        session = EditSession(induction_doc)
        session.apply(Relabel("T1", "x"))
        session.undo()
        assert [e.seq for e in session.log] == [1, 2]
        assert session.log[1].undo_of == 1


class TestDiffReplay:
    def test_empty_session_diff_is_identity(self, induction_doc):
        session = EditSession(induction_doc)
        diff = session.export_diff()
        assert len(diff.splitlines()) == 1  # header only
        assert replay(induction_doc, diff) == induction_doc

    def test_replay_reproduces_live_state(self, induction_doc):
        session = EditSession(induction_doc)
        session.apply(Relabel("T1", "p21 protein"))
        session.apply(Reattach("E2", 0, AnchorRef.mention("T2")))
        session.apply(CreateMention(label="damage", anchors=((38, 44),)))
        session.apply(Hide("E3"))
        session.apply(Delete("E1"))
        replayed = replay_session(induction_doc, session.export_diff())
        assert replayed.current == session.current
        assert replayed.state.hidden_ids == session.state.hidden_ids

    def test_replay_against_wrong_base(self, induction_doc, morph_docs):
        session = EditSession(induction_doc)
        session.apply(Relabel("T1", "x"))
        with pytest.raises(BaseMismatch):
            replay(morph_docs[0], session.export_diff())

    def test_presentation_only_diff_replays_to_base(self, induction_doc):
        session = EditSession(induction_doc)
        session.apply(MoveToken(8, 1, 12.0))
        session.apply(Hide("E2"))
        session.apply(Unhide("E2"))
        replayed = replay(induction_doc, session.export_diff())
        assert replayed == induction_doc

    def test_replay_conflict_reports_sequence(self, induction_doc):
        session = EditSession(induction_doc)
        session.apply(Relabel("T1", "x"))
        diff = session.export_diff()
        # corrupt the op so it fails mid-replay
        broken = diff.replace('"id": "T1"', '"id": "T9"').replace(
            '"T1"', '"T9"')
        with pytest.raises(ReplayConflict) as exc:
            replay(induction_doc, broken)
        assert exc.value.seq == 1

    def test_log_monotonicity(self, induction_doc):
        session = EditSession(induction_doc)
        for i in range(5):
            session.apply(Relabel("T1", f"v{i}"))
        seqs = [e.seq for e in session.log]
        assert seqs == sorted(seqs) and len(set(seqs)) == 5

    def test_op_json_round_trip(self):
        ops = [
            Relabel("T1", "x"), Retype("T1", None),
            Reattach("E1", 0, AnchorRef.token(3)),
            CreateMention(label="m", anchors=((0, 2),), type="Gene"),
            CreateRelation(label="r", arguments=(
                ("a", AnchorRef.mention("T1")), ("b", AnchorRef.relation("E1"))),
                trigger=AnchorRef.mention("T2"), directionality="bidirectional"),
            Delete("T1"), Hide("T1"), Unhide("T1"),
            RecolorType("Entity", "#112233", True), MoveToken(4, 2, 7.5),
        ]
        for op in ops:
            assert op_from_json(op_to_json(op)) == op


def random_valid_op(rng: random.Random, session: EditSession):
    """Pick an op that should apply cleanly against the current state."""
    doc = session.current
    mention_ids = sorted(doc.mentions)
    relation_ids = sorted(doc.relations)
    element_ids = mention_ids + relation_ids
    choices = ["relabel", "retype", "create_mention", "move_token", "hide"]
    if element_ids:
        choices += ["delete"]
    if len(mention_ids) >= 2:
        choices += ["create_relation"]
    if relation_ids:
        choices += ["reattach"]
    kind = rng.choice(choices)
    if kind == "relabel" and element_ids:
        return Relabel(rng.choice(element_ids), f"label{rng.randrange(100)}")
    if kind == "retype" and element_ids:
        return Retype(rng.choice(element_ids), f"Type{rng.randrange(5)}")
    if kind == "create_mention":
        n = len(doc.text)
        start = rng.randrange(0, max(1, n))
        end = min(n, start + rng.randint(0, 6))
        return CreateMention(label=f"m{rng.randrange(100)}",
                             anchors=((start, end),))
    if kind == "create_relation":
        a, b = rng.sample(mention_ids, 2)
        return CreateRelation(label="rel", arguments=(
            ("a", AnchorRef.mention(a)), ("b", AnchorRef.mention(b))))
    if kind == "reattach":
        rid = rng.choice(relation_ids)
        rel = doc.relations[rid]
        index = rng.randrange(len(rel.arguments))
        # choose a mention target: never creates a cycle
        return Reattach(rid, index, AnchorRef.mention(rng.choice(mention_ids)))
    if kind == "delete":
        return Delete(rng.choice(element_ids))
    if kind == "move_token":
        return MoveToken(rng.randrange(len(doc.tokens)), rng.randint(0, 3),
                         float(rng.randrange(200)))
    return Hide(rng.choice(element_ids)) if element_ids else Relabel("T1", "x")


def test_randomized_replay_round_trip(induction_doc):
    for seed in range(30):
        rng = random.Random(seed)
        session = EditSession(induction_doc)
        for _ in range(rng.randint(0, 15)):
            op = random_valid_op(rng, session)
            try:
                session.apply(op)
            except Exception:
                pass  # rare duplicate-label or empty-doc corners; skip
            if rng.random() < 0.15 and session.active_ops():
                session.undo()
        replayed = replay_session(induction_doc, session.export_diff())
        assert document_to_json(replayed.current) == \
            document_to_json(session.current)
        assert replayed.state.hidden_ids == session.state.hidden_ids
        assert replayed.state.row_overrides == session.state.row_overrides
