"""Layout: row fill, slotting, cross-row splitting, windows, crossings."""

from __future__ import annotations

import random
from dataclasses import replace

import pytest

from annograph.errors import RangeOutOfBounds, TokenTooWide
from annograph.formats import tokenize_text
from annograph.layout import (
    ArcPath,
    ArcSegment,
    Attachment,
    LabelBox,
    LayoutGeometry,
    ViewConfig,
    assign_rows,
    assign_slots,
    count_crossings,
    geometry_to_json,
    layout_document,
    layout_window,
    split_cross_row_arcs,
)
from annograph.model import (
    AnchorRef,
    Argument,
    Document,
    Relation,
    VisibilityFilter,
)


def doc_of_words(words: list[str], relations: dict[str, Relation] | None = None,
                 mentions=None) -> Document:
    text = " ".join(words)
    return Document(id="t", text=text, tokens=tokenize_text(text),
                    mentions=mentions or {}, relations=relations or {})


def token_rel(rid: str, i: int, j: int, layer: str = "semantic") -> Relation:
    return Relation(id=rid, label="", arguments=(
        Argument("a", AnchorRef.token(i)), Argument("b", AnchorRef.token(j))),
        layer=layer)


def fixed_cfg(**kwargs) -> ViewConfig:
    defaults = dict(row_width=35.0, token_gap=2.0,
                    font_metrics=lambda s: 10.0)
    defaults.update(kwargs)
    return ViewConfig(**defaults)


class TestAssignRows:
    def test_three_tokens_fit_one_row(self):
        doc = doc_of_words(["aa", "bb", "cc"])
        ra = assign_rows(doc, fixed_cfg(row_width=35.0))
        assert [(r, x) for r, x, _ in ra.placements] == [
            (0, 0.0), (0, 12.0), (0, 24.0)]
        assert ra.n_rows == 1

    def test_greedy_fill_wraps(self):
        doc = doc_of_words(["aa", "bb", "cc"])
        ra = assign_rows(doc, fixed_cfg(row_width=25.0))
        assert [r for r, _, _ in ra.placements] == [0, 0, 1]

    def test_override_moves_token_and_reflows(self):
        doc = doc_of_words(["aa", "bb", "cc", "dd"])
        cfg = fixed_cfg(row_width=60.0, row_overrides={1: (1, 0.0)})
        ra = assign_rows(doc, cfg)
        rows = [r for r, _, _ in ra.placements]
        assert rows == [0, 1, 1, 1]  # the rest reflow greedily after the drag
        assert ra.placements[1][1] == 0.0
        assert ra.placements[2][1] == 12.0

    def test_override_collision_is_deoverlapped(self):
        doc = doc_of_words(["aa", "bb", "cc"])
        cfg = fixed_cfg(row_width=60.0, row_overrides={2: (0, 0.0)})
        ra = assign_rows(doc, cfg)
        xs = sorted((x, x + w) for _, x, w in ra.placements)
        for (s1, e1), (s2, e2) in zip(xs, xs[1:]):
            assert e1 <= s2  # no two boxes in the row overlap

    def test_token_too_wide(self):
        doc = doc_of_words(["aaaaaaa"])
        with pytest.raises(TokenTooWide):
            assign_rows(doc, fixed_cfg(row_width=5.0))

    def test_pure_function_of_inputs(self):
        doc = doc_of_words(["aa", "bb", "cc"])
        assert assign_rows(doc, fixed_cfg()) == assign_rows(doc, fixed_cfg())


class TestAssignSlots:
    def test_disjoint_arcs_share_slot_one(self):
        doc = doc_of_words(["a", "b", "c", "d", "e", "f"],
                           {"R1": token_rel("R1", 0, 1),
                            "R2": token_rel("R2", 3, 4)})
        slots = assign_slots(doc, ViewConfig(), "above")
        assert slots[("R1", 0)] == 1
        assert slots[("R2", 0)] == 1

    def test_nested_arc_sits_higher(self):
        doc = doc_of_words(["a", "b", "c", "d"],
                           {"outer": token_rel("outer", 0, 3),
                            "inner": token_rel("inner", 1, 2)})
        slots = assign_slots(doc, ViewConfig(), "above")
        assert slots[("inner", 0)] == 1
        assert slots[("outer", 0)] == 2

    def test_relation_endpoint_raises_referencing_arc(self, induction_doc):
        slots = assign_slots(induction_doc, ViewConfig(), "above")
        assert slots[("E2", 0)] > slots[("E1", 0)]
        assert slots[("E3", 0)] > slots[("E1", 0)]

    def test_nesting_invariant_random(self):
        rng = random.Random(3)
        for trial in range(40):
            n_tokens = rng.randint(4, 14)
            words = ["w"] * n_tokens
            relations = {}
            for k in range(rng.randint(2, 8)):
                i, j = sorted(rng.sample(range(n_tokens), 2))
                relations[f"R{k}"] = token_rel(f"R{k}", i, j)
            doc = doc_of_words(words, relations)
            geometry = layout_document(doc, ViewConfig(row_width=5000.0))
            segs = [(a.segments[0].x1, a.segments[0].x2, a.segments[0].slot)
                    for a in geometry.arcs]
            for a in segs:
                for b in segs:
                    if a[0] < b[0] and b[1] < a[1]:  # a strictly encloses b
                        assert a[2] > b[2]

    def test_label_boxes_do_not_overlap_on_a_slot(self):
        # Long labels widen the slot interval, keeping labels disjoint.
        words = ["a", "b", "c", "d", "e", "f"]
        relations = {
            "R1": replace(token_rel("R1", 0, 1), label="extremely_long_label_text"),
            "R2": replace(token_rel("R2", 2, 3), label="another_gigantic_label"),
        }
        doc = doc_of_words(words, relations)
        geometry = layout_document(doc, ViewConfig())
        by_slot: dict[tuple[str, int, int], list[tuple[float, float]]] = {}
        for arc in geometry.arcs:
            for seg in arc.segments:
                if seg.row == arc.label.row:
                    by_slot.setdefault((arc.side, seg.row, seg.slot), []).append(
                        (arc.label.x1, arc.label.x2))
        for boxes in by_slot.values():
            boxes.sort()
            for (s1, e1), (s2, e2) in zip(boxes, boxes[1:]):
                assert e1 <= s2


class TestSplitCrossRowArcs:
    def narrow(self) -> ViewConfig:
        return ViewConfig(row_width=120.0, font_metrics=lambda s: 8.0 * len(s))

    def test_single_row_arc_is_one_segment(self, induction_doc):
        segments = split_cross_row_arcs(induction_doc, ViewConfig())
        assert all(len(v) == 1 for v in segments.values())

    def test_two_row_arc_exits_and_enters_at_edges(self):
        doc = doc_of_words(["aaaa"] * 6, {"R1": token_rel("R1", 0, 5)})
        cfg = self.narrow()
        segments = split_cross_row_arcs(doc, cfg)["R1"]
        assert len(segments) == 2
        (r0, x0a, x0b), (r1, x1a, x1b) = segments
        assert (r0, r1) == (0, 1)
        assert x0b == cfg.row_width  # exits at the right edge
        assert x1a == 0.0            # enters at the left edge

    def test_three_row_arc_has_full_width_middle(self):
        doc = doc_of_words(["aaaa"] * 9, {"R1": token_rel("R1", 0, 8)})
        cfg = self.narrow()
        segments = split_cross_row_arcs(doc, cfg)["R1"]
        assert len(segments) == 3
        middle = segments[1]
        assert middle == (1, 0.0, cfg.row_width)


class TestLayoutWindow:
    def test_identity_window_equals_full_layout(self, induction_doc):
        cfg = ViewConfig()
        full = layout_document(induction_doc, cfg)
        window = layout_window(induction_doc, cfg, (0, 0))
        assert geometry_to_json(window)["rows"] == geometry_to_json(full)["rows"]
        assert geometry_to_json(window)["arcs"] == geometry_to_json(full)["arcs"]

    def test_out_of_bounds_window(self):
        doc = doc_of_words(["aaaa"] * 6, {"R1": token_rel("R1", 0, 5)})
        cfg = ViewConfig(row_width=120.0, font_metrics=lambda s: 8.0 * len(s))
        assert assign_rows(doc, cfg).n_rows == 2
        with pytest.raises(RangeOutOfBounds):
            layout_window(doc, cfg, (3, 4))

    def test_window_rows_match_full_layout(self, big_doc):
        cfg = ViewConfig()
        full = layout_document(big_doc, cfg)
        rng = random.Random(5)
        n_rows = len(full.rows)
        full_json = geometry_to_json(full)
        full_rows = {row["index"]: row for row in full_json["rows"]}
        full_segments = {}
        for arc in full_json["arcs"]:
            for seg in arc["segments"]:
                full_segments.setdefault(seg["row"], []).append(
                    (arc["id"], arc["side"], seg["x1"], seg["x2"], seg["slot"]))
        for _ in range(5):
            a = rng.randrange(0, n_rows - 3)
            b = min(n_rows - 1, a + rng.randint(0, 6))
            window = layout_window(big_doc, cfg, (a, b))
            window_json = geometry_to_json(window)
            for row in window_json["rows"]:
                assert row == full_rows[row["index"]]
            window_segments = {}
            for arc in window_json["arcs"]:
                for seg in arc["segments"]:
                    window_segments.setdefault(seg["row"], []).append(
                        (arc["id"], arc["side"], seg["x1"], seg["x2"], seg["slot"]))
            for row_index in range(a, b + 1):
                assert sorted(window_segments.get(row_index, [])) == \
                    sorted(full_segments.get(row_index, []))

    def test_window_touches_only_incident_relations(self, big_doc):
        cfg = ViewConfig()
        ra = assign_rows(big_doc, cfg)
        window = layout_window(big_doc, cfg, (0, 9))
        # independent incidence oracle from endpoint rows
        incident = set()
        for rid, rel in big_doc.relations.items():
            rows = [ra.placements[a.target.ref][0] for a in rel.arguments]
            if min(rows) <= 9 and max(rows) >= 0:
                incident.add(rid)
        assert set(window.visited_relations) == incident
        assert len(incident) < len(big_doc.relations) / 10


class TestDeterminism:
    def test_repeated_layout_identical(self, induction_doc):
        cfg = ViewConfig()
        a = geometry_to_json(layout_document(induction_doc, cfg))
        b = geometry_to_json(layout_document(induction_doc, cfg))
        assert a == b

    def test_token_boxes_never_overlap_random(self):
        rng = random.Random(13)
        for _ in range(20):
            words = ["x" * rng.randint(1, 7) for _ in range(rng.randint(1, 40))]
            doc = doc_of_words(words)
            geometry = layout_document(doc, ViewConfig(row_width=150.0))
            for row in geometry.rows:
                boxes = sorted((tb.x, tb.x + tb.width) for tb in row.tokens)
                for (s1, e1), (s2, e2) in zip(boxes, boxes[1:]):
                    assert e1 <= s2


# --- crossing count ------------------------------------------------------------------

def synthetic_geometry(arcs: list[tuple[float, float, int]]) -> LayoutGeometry:
    """Single-row geometry built directly from (x1, x2, slot) triples."""
    paths = []
    for n, (x1, x2, slot) in enumerate(arcs):
        rid = f"S{n}"
        paths.append(ArcPath(
            relation_id=rid, side="above",
            label=LabelBox(0, (x1 + x2) / 2, (x1 + x2) / 2, ""),
            segments=(ArcSegment(0, x1, x2, slot),),
            attachments=(
                Attachment("a", AnchorRef.token(0), 0, x1, 0, False),
                Attachment("b", AnchorRef.token(0), 0, x2, 0, False),
            )))
    return LayoutGeometry(rows=(), mention_spans=(), arcs=tuple(paths),
                          handles={}, row_range=(0, 0), visited_relations=())


# Independent oracle: explicit polyline intersection per unordered pair.
def oracle_pair_crossing(a, b) -> bool:
    (ax1, ax2, aslot, adrops), (bx1, bx2, bslot, bdrops) = a, b
    if ax1 > bx1:
        (ax1, ax2, aslot, adrops), (bx1, bx2, bslot, bdrops) = b, a
    if not (ax1 < bx1 < ax2 < bx2):
        return False  # only properly interleaving pairs count

    def segments(x1, x2, slot, drops):
        out = [((x1, slot), (x2, slot))]
        for x, h in drops:
            out.append(((x, slot), (x, h)))
        return out

    for (p1, p2) in segments(ax1, ax2, aslot, adrops):
        for (q1, q2) in segments(bx1, bx2, bslot, bdrops):
            if p1[1] == p2[1] and q1[1] == q2[1]:  # two horizontal runs
                if p1[1] == q1[1] and max(p1[0], q1[0]) < min(p2[0], q2[0]):
                    return True
            elif p1[1] == p2[1]:  # horizontal run vs vertical drop
                if q1[0] == q2[0] and p1[0] < q1[0] < p2[0] and \
                        min(q1[1], q2[1]) < p1[1] < max(q1[1], q2[1]):
                    return True
            elif q1[1] == q2[1]:
                if p1[0] == p2[0] and q1[0] < p1[0] < q2[0] and \
                        min(p1[1], p2[1]) < q1[1] < max(p1[1], p2[1]):
                    return True
    return False


def oracle_count(geometry: LayoutGeometry) -> int:
    entries = []
    for arc in geometry.arcs:
        seg = arc.segments[0]
        drops = [(a.x, a.height) for a in arc.attachments]
        entries.append((seg.x1, seg.x2, seg.slot, drops))
    total = 0
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            total += oracle_pair_crossing(entries[i], entries[j])
    return total


class TestCountCrossings:
    def test_disjoint_arcs_zero(self):
        geometry = synthetic_geometry([(0, 10, 1), (20, 30, 1)])
        assert count_crossings(geometry) == 0

    def test_minimal_interleave_is_one(self):
        geometry = synthetic_geometry([(0, 20, 1), (10, 30, 2)])
        assert count_crossings(geometry) == 1

    def test_same_slot_interleave_counts(self):
        geometry = synthetic_geometry([(0, 20, 1), (10, 30, 1)])
        assert count_crossings(geometry) == 1

    def test_nested_arcs_do_not_interleave(self):
        geometry = synthetic_geometry([(0, 30, 2), (10, 20, 1)])
        assert count_crossings(geometry) == 0

    def test_random_slotting_matches_oracle(self):
        rng = random.Random(23)
        for _ in range(200):
            n = rng.randint(2, 12)
            arcs = []
            for _ in range(n):
                points = rng.sample(range(0, 200), 2)
                arcs.append((min(points), max(points), rng.randint(1, n)))
            geometry = synthetic_geometry(arcs)
            assert count_crossings(geometry) == oracle_count(geometry)

    def test_heuristic_layout_matches_oracle(self):
        rng = random.Random(29)
        for _ in range(60):
            n_tokens = rng.randint(4, 20)
            relations = {}
            for k in range(rng.randint(2, 12)):
                i, j = sorted(rng.sample(range(n_tokens), 2))
                relations[f"R{k}"] = token_rel(f"R{k}", i, j)
            doc = doc_of_words(["w"] * n_tokens, relations)
            geometry = layout_document(doc, ViewConfig(row_width=10_000.0))
            assert count_crossings(geometry) == oracle_count(geometry)
