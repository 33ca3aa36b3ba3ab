"""CoNLL-X dependency format reader and writer.

Ten tab-separated columns per token line (ID FORM LEMMA CPOSTAG POSTAG FEATS
HEAD DEPREL PHEAD PDEPREL), ``_`` for an empty field, blank line between
sentences.  The document text is reconstructed by joining FORM values with
single spaces; the original whitespace is not recoverable from the format.

Every token with a POSTAG gets a syntactic part-of-speech mention ``POS<i>``;
every token with a HEAD gets a directed syntactic relation ``DEP<i>`` whose
first argument is the head (role ``head``) and whose second argument carries
the DEPREL as its role.  HEAD=0 attaches to a zero-width synthetic mention
``ROOT<s>`` at the sentence start.  Sentence boundaries and the unused
columns are kept in document metadata so serialization is exact.
"""

from __future__ import annotations

from ..errors import ColumnCountMismatch, HeadOutOfRange, NonNumericHead
from ..model import (
    AnchorRef,
    Argument,
    Document,
    Mention,
    Relation,
    Token,
)
from .common import IssueCollector, ParseReport

N_COLUMNS = 10


def parse_conllx(data: str, doc_id: str = "doc") -> tuple[Document, ParseReport]:
    report = ParseReport(source_format="conllx")
    issues = IssueCollector()

    sentences: list[list[tuple[int, list[str]]]] = []
    current: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        if not raw.strip():
            if current:
                sentences.append(current)
                current = []
            continue
        if raw.lstrip().startswith("#"):
            report.warn(f"line {lineno}", "comment line; dropped")
            report.drop(f"line {lineno}", raw)
            continue
        cols = raw.split("\t")
        if len(cols) != N_COLUMNS:
            issues.add(ColumnCountMismatch(
                f"expected {N_COLUMNS} columns, found {len(cols)}", f"line {lineno}"))
            continue
        current.append((lineno, cols))
    if current:
        sentences.append(current)
    issues.raise_if_any()

    tokens: list[Token] = []
    mentions: dict[str, Mention] = {}
    relations: dict[str, Relation] = {}
    boundaries: list[list[int]] = []
    extra_columns: dict[str, list[str]] = {}
    pending_deps: list[tuple[str, int, int, int, str]] = []  # locator pieces

    cursor = 0
    for sentence_index, rows in enumerate(sentences):
        first_global = len(tokens)
        sentence_start_char = cursor
        for local_index, (lineno, cols) in enumerate(rows):
            if cols[0] != str(local_index + 1):
                report.warn(f"line {lineno}",
                            f"ID column {cols[0]!r} does not match position "
                            f"{local_index + 1}; positional ids are used")
            form = cols[1]
            if any(ch.isspace() for ch in form):
                report.warn(f"line {lineno}", "FORM contains whitespace; "
                            "tokenization will not round-trip")
            start = cursor
            end = start + len(form)
            g = len(tokens)
            tokens.append(Token(g, start, end, form))
            cursor = end + 1

            if cols[4] != "_":
                mentions[f"POS{g}"] = Mention(
                    id=f"POS{g}", label=cols[4], anchors=((start, end),),
                    layer="syntactic")
            stored = [cols[2], cols[3], cols[5], cols[8], cols[9]]
            if any(v != "_" for v in stored):
                extra_columns[str(g)] = stored

            if cols[6] != "_":
                try:
                    head = int(cols[6])
                except ValueError:
                    issues.add(NonNumericHead(f"HEAD {cols[6]!r}", f"line {lineno}"))
                    continue
                if not 0 <= head <= len(rows):
                    issues.add(HeadOutOfRange(
                        f"HEAD {head} outside sentence of {len(rows)} tokens",
                        f"line {lineno}"))
                    continue
                deprel = cols[7] if cols[7] != "_" else "dep"
                pending_deps.append((deprel, sentence_index, head, g, str(lineno)))
        boundaries.append([first_global, len(tokens)])

        needs_root = any(head == 0 and s == sentence_index
                         for _, s, head, _, _ in pending_deps)
        if needs_root:
            root_id = f"ROOT{sentence_index}"
            mentions[root_id] = Mention(
                id=root_id, label="ROOT",
                anchors=((sentence_start_char, sentence_start_char),),
                layer="syntactic")
    issues.raise_if_any()

    for deprel, sentence_index, head, dependent_global, _ in pending_deps:
        first_global = boundaries[sentence_index][0]
        if head == 0:
            head_ref = AnchorRef.mention(f"ROOT{sentence_index}")
        else:
            head_ref = AnchorRef.token(first_global + head - 1)
        rid = f"DEP{dependent_global}"
        relations[rid] = Relation(
            id=rid, label=deprel,
            arguments=(
                Argument("head", head_ref),
                Argument(deprel, AnchorRef.token(dependent_global)),
            ),
            layer="syntactic")

    text = " ".join(t.surface for t in tokens)
    metadata: dict[str, object] = {"sentences": boundaries}
    if extra_columns:
        metadata["conllx_columns"] = extra_columns

    doc = Document(
        id=doc_id, text=text, tokens=tuple(tokens), mentions=mentions,
        relations=relations, source_format="conllx", metadata=metadata)
    return doc, report


def serialize_conllx(doc: Document) -> tuple[dict[str, str], ParseReport]:
    """Emit tokens and syntactic dependencies; everything else is reported."""
    from ..errors import NotRepresentable

    report = ParseReport(source_format="conllx")
    if not doc.tokens:
        raise NotRepresentable("document has no tokens to emit as CoNLL-X")

    boundaries = doc.metadata.get("sentences") if isinstance(doc.metadata, dict) else None
    if not boundaries:
        boundaries = [[0, len(doc.tokens)]]
    extra_columns = {}
    if isinstance(doc.metadata, dict):
        extra_columns = doc.metadata.get("conllx_columns", {}) or {}

    # Dependency lookup: global dependent index -> (head column, deprel).
    heads: dict[int, tuple[int, str]] = {}
    emitted_relations: set[str] = set()
    token_sentence = {}
    for s, (first, last) in enumerate(boundaries):
        for g in range(first, last):
            token_sentence[g] = s

    for rid in sorted(doc.relations):
        rel = doc.relations[rid]
        if rel.layer != "syntactic" or rel.trigger is not None or len(rel.arguments) != 2:
            continue
        head_arg, dep_arg = rel.arguments
        if head_arg.role != "head" or dep_arg.target.kind != "token":
            continue
        dependent = dep_arg.target.ref
        sentence = token_sentence.get(dependent)
        if sentence is None:
            continue
        first = boundaries[sentence][0]
        if head_arg.target.kind == "token":
            head_global = head_arg.target.ref
            if token_sentence.get(head_global) != sentence:
                report.drop(rid, "dependency crosses a sentence boundary")
                continue
            head_column = head_global - first + 1
        elif (head_arg.target.kind == "mention"
              and str(head_arg.target.ref).startswith("ROOT")):
            head_column = 0
        else:
            report.drop(rid, "head is not a token or sentence root")
            continue
        if dependent in heads:
            report.drop(rid, "token already has a head; extra dependency dropped")
            continue
        heads[dependent] = (head_column, dep_arg.role)
        emitted_relations.add(rid)

    pos_labels: dict[int, str] = {}
    emitted_mentions: set[str] = set()
    for mid, m in doc.mentions.items():
        if mid.startswith("POS") and mid[3:].isdigit() and m.layer == "syntactic":
            pos_labels[int(mid[3:])] = m.label
            emitted_mentions.add(mid)
        elif mid.startswith("ROOT") and m.layer == "syntactic":
            emitted_mentions.add(mid)

    for mid in sorted(set(doc.mentions) - emitted_mentions):
        m = doc.mentions[mid]
        report.drop(mid, f"dropped {m.layer} mention {m.label!r}")
    for rid in sorted(set(doc.relations) - emitted_relations):
        r = doc.relations[rid]
        report.drop(rid, f"dropped {r.layer} relation {r.label!r}")

    lines: list[str] = []
    for first, last in boundaries:
        for g in range(first, last):
            token = doc.tokens[g]
            lemma, cpostag, feats, phead, pdeprel = extra_columns.get(
                str(g), ["_", "_", "_", "_", "_"])
            head_column, deprel = heads.get(g, (None, None))
            lines.append("\t".join([
                str(g - first + 1),
                token.surface,
                lemma,
                cpostag,
                pos_labels.get(g, "_"),
                feats,
                "_" if head_column is None else str(head_column),
                deprel if deprel is not None else "_",
                phead,
                pdeprel,
            ]))
        lines.append("")
    return {"conll": "\n".join(lines) + ("\n" if lines else "")}, report
