"""Data folder scanning and per-document session bookkeeping.

The folder is the only persistent input: source files are never written
back; diffs are the write path.  BRAT entries need a ``.txt``/``.ann`` pair;
a BioC file may contribute several documents (``stem.docid`` entries).  A
taxonomy associates with a document by sharing its file stem, with
``default.taxonomy`` as the folder-wide fallback.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import UnknownId
from ..formats import (
    TAXONOMY_SUFFIX,
    parse_bioc,
    parse_brat,
    parse_conllx,
    parse_taxonomy,
)
from ..model import Document, Taxonomy
from ..session import EditSession


@dataclass(frozen=True)
class DataFolderEntry:
    id: str
    format: str
    files: tuple[str, ...]
    taxonomy_id: Optional[str] = None


@dataclass
class _CacheSlot:
    signature: tuple
    value: object


class DocumentStore:
    """Loads and caches documents and taxonomies from one data folder."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self._documents: dict[str, _CacheSlot] = {}
        self._taxonomies: dict[str, Taxonomy] = {}
        self._lock = threading.Lock()

    # -- listing ---------------------------------------------------------------

    def _taxonomy_id_for(self, stem: str) -> Optional[str]:
        if (self.data_dir / f"{stem}{TAXONOMY_SUFFIX}").exists():
            return stem
        if (self.data_dir / f"default{TAXONOMY_SUFFIX}").exists():
            return "default"
        return None

    def entries(self) -> list[DataFolderEntry]:
        found: list[DataFolderEntry] = []
        if not self.data_dir.is_dir():
            return found
        paths = sorted(self.data_dir.iterdir(), key=lambda p: p.name)
        stems_with_ann = {p.stem for p in paths if p.suffix == ".ann"}
        for path in paths:
            if path.suffix == ".ann":
                if (self.data_dir / f"{path.stem}.txt").exists():
                    found.append(DataFolderEntry(
                        id=path.stem, format="brat",
                        files=(f"{path.stem}.txt", path.name),
                        taxonomy_id=self._taxonomy_id_for(path.stem)))
            elif path.suffix in (".conll", ".conllx"):
                found.append(DataFolderEntry(
                    id=path.stem, format="conllx", files=(path.name,),
                    taxonomy_id=self._taxonomy_id_for(path.stem)))
            elif path.suffix in (".xml", ".bioc"):
                docs, _ = parse_bioc(path.read_text(encoding="utf-8"))
                for doc in docs:
                    entry_id = path.stem if len(docs) == 1 else f"{path.stem}.{doc.id}"
                    found.append(DataFolderEntry(
                        id=entry_id, format="bioc", files=(path.name,),
                        taxonomy_id=self._taxonomy_id_for(path.stem)))
            elif path.suffix == ".txt" and path.stem not in stems_with_ann:
                continue  # bare text without annotations is not listed
        found.sort(key=lambda e: e.id)
        return found

    # -- loading ---------------------------------------------------------------

    def load_document(self, entry_id: str) -> Document:
        entry = next((e for e in self.entries() if e.id == entry_id), None)
        if entry is None:
            raise UnknownId(f"no document {entry_id!r} in data folder")
        paths = [self.data_dir / name for name in entry.files]
        signature = tuple((p.name, p.stat().st_mtime_ns) for p in paths)
        with self._lock:
            slot = self._documents.get(entry_id)
            if slot is not None and slot.signature == signature:
                return slot.value  # type: ignore[return-value]
        if entry.format == "brat":
            doc, _ = parse_brat(paths[0].read_text(encoding="utf-8"),
                                paths[1].read_text(encoding="utf-8"),
                                doc_id=entry_id)
        elif entry.format == "conllx":
            doc, _ = parse_conllx(paths[0].read_text(encoding="utf-8"),
                                  doc_id=entry_id)
        else:
            docs, _ = parse_bioc(paths[0].read_text(encoding="utf-8"))
            wanted = entry_id.split(".", 1)[1] if "." in entry_id else None
            doc = next((d for d in docs if wanted in (None, d.id)), docs[0])
            doc = Document(
                id=entry_id, text=doc.text, tokens=doc.tokens,
                mentions=doc.mentions, relations=doc.relations,
                source_format=doc.source_format, taxonomy_ref=doc.taxonomy_ref,
                metadata=doc.metadata)
        if entry.taxonomy_id is not None:
            doc = Document(
                id=doc.id, text=doc.text, tokens=doc.tokens,
                mentions=doc.mentions, relations=doc.relations,
                source_format=doc.source_format, taxonomy_ref=entry.taxonomy_id,
                metadata=doc.metadata)
        with self._lock:
            self._documents[entry_id] = _CacheSlot(signature, doc)
        return doc

    def load_taxonomy(self, taxonomy_id: str) -> Taxonomy:
        with self._lock:
            if taxonomy_id in self._taxonomies:
                return self._taxonomies[taxonomy_id]
        path = self.data_dir / f"{taxonomy_id}{TAXONOMY_SUFFIX}"
        if not path.exists():
            raise UnknownId(f"no taxonomy {taxonomy_id!r} in data folder")
        taxonomy, _ = parse_taxonomy(path.read_text(encoding="utf-8"))
        with self._lock:
            self._taxonomies[taxonomy_id] = taxonomy
        return taxonomy

    def store_taxonomy(self, taxonomy_id: str, taxonomy: Taxonomy) -> None:
        with self._lock:
            self._taxonomies[taxonomy_id] = taxonomy


class SessionRegistry:
    """One lazily-created session per document id, single writer each."""

    def __init__(self, store: DocumentStore):
        self.store = store
        self._sessions: dict[str, EditSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def lock_for(self, doc_id: str) -> threading.Lock:
        with self._guard:
            if doc_id not in self._locks:
                self._locks[doc_id] = threading.Lock()
            return self._locks[doc_id]

    def peek(self, doc_id: str) -> Optional[EditSession]:
        with self._guard:
            return self._sessions.get(doc_id)

    def session(self, doc_id: str) -> EditSession:
        with self._guard:
            existing = self._sessions.get(doc_id)
            if existing is not None:
                return existing
        base = self.store.load_document(doc_id)
        taxonomy = None
        entry = next((e for e in self.store.entries() if e.id == doc_id), None)
        if entry is not None and entry.taxonomy_id:
            taxonomy = self.store.load_taxonomy(entry.taxonomy_id)
        with self._guard:
            return self._sessions.setdefault(doc_id, EditSession(base, taxonomy=taxonomy))

    def put(self, doc_id: str, session: EditSession) -> None:
        with self._guard:
            self._sessions[doc_id] = session
