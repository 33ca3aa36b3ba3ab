"""HTTP service over the annotation engine."""

from .app import DEFAULT_ROW_WIDTH, create_app
from .store import DataFolderEntry, DocumentStore, SessionRegistry

__all__ = ["DEFAULT_ROW_WIDTH", "DataFolderEntry", "DocumentStore",
           "SessionRegistry", "create_app"]
