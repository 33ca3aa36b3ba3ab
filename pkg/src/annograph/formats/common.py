"""Shared parsing machinery: reports, tokenization, collectors."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import ParseFailure, ParseIssueError
from ..model import Token

_TOKEN_RE = re.compile(r"\S+")


def tokenize_text(text: str) -> tuple[Token, ...]:
    """Whitespace tokenization with character offsets.

    Pure display segmentation: formats without their own token list (BRAT,
    BioC) get their row units this way.  No linguistic analysis is involved.
    """
    return tuple(
        Token(i, m.start(), m.end(), m.group())
        for i, m in enumerate(_TOKEN_RE.finditer(text))
    )


@dataclass
class ParseReport:
    """What a parse or serialization could not carry over.

    ``warnings`` are (locator, message) pairs; ``dropped`` lists input or
    document fragments that do not land in the output.  Anything skipped must
    appear here — silence is a bug.
    """

    source_format: str
    warnings: list[tuple[str, str]] = field(default_factory=list)
    dropped: list[tuple[str, str]] = field(default_factory=list)

    def warn(self, locator: str, message: str) -> None:
        self.warnings.append((locator, message))

    def drop(self, locator: str, fragment: str) -> None:
        self.dropped.append((locator, fragment))


class IssueCollector:
    """Accumulates fatal problems so a parse can report all of them at once."""

    def __init__(self):
        self.issues: list[ParseIssueError] = []

    def add(self, issue: ParseIssueError) -> None:
        self.issues.append(issue)

    def raise_if_any(self) -> None:
        if self.issues:
            raise ParseFailure(self.issues)
