"""Transliteration of raw accented text into the canonical uppercase alphabet.

Canonical text uses only A-Z, digits, space, hyphen, period and parentheses.
Accented vowels become letter+hyphen digraphs (VENTRI-CULO), the diaeresis-u
becomes .U., and sentence punctuation collapses to spaces.  Parenthesized
groups are annotation/chemistry islands: their content is transliterated but
never punctuation-stripped, so inline tags like PARTE(LA) or (H2 O) survive.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import MutableMapping

CANONICAL_CHARS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 -.()"
CANONICAL_ALPHABET = frozenset(CANONICAL_CHARS)

_NON_CANONICAL_RE = re.compile(r"[^A-Z0-9 \-.()]")
_GROUP_RE = re.compile(r"\([^()]*\)")
_REPLACEMENT_RE = re.compile(r"[A-Z0-9 \-.()]*\Z")

DEFAULT_ENTRIES: dict[str, str] = {
    "Á": "A-",
    "É": "E-",
    "Í": "I-",
    "Ó": "O-",
    "Ú": "U-",
    "Ü": ".U.",
    "Ñ": "N-",
    ".": " ",
    ",": " ",
    ";": " ",
    ":": " ",
    "!": " ",
    "?": " ",
    "¡": " ",
    "¿": " ",
    '"': " ",
    "«": " ",
    "»": " ",
}


class TransliterationTable:
    """A per-character substitution table over already-uppercased text.

    Replacement strings are restricted to the canonical alphabet.  Entries
    that rewrite to a bare space (punctuation strippers) are suspended
    inside parenthesized groups so annotations keep their internal periods.

    Multi-character replacements that contain a remapped character (the
    default .U. contains the period) are protected: a second pass over
    already-normalized text copies them verbatim, which makes normalize
    idempotent.
    """

    def __init__(self, entries: dict[str, str] | None = None):
        if entries is None:
            entries = DEFAULT_ENTRIES
        self.entries = dict(entries)
        for source, replacement in self.entries.items():
            if len(source) != 1:
                raise ValueError(f"table source {source!r} is not a single character")
            if not _REPLACEMENT_RE.match(replacement):
                raise ValueError(
                    f"replacement {replacement!r} for {source!r} leaves the canonical alphabet"
                )
        self._char_map = {ord(s): r for s, r in self.entries.items()}
        # whitespace-only rewrites are suspended inside parenthesized groups;
        # deletions and letter transliterations still apply there
        self._group_map = {
            ord(s): r for s, r in self.entries.items() if r.strip() or not r
        }
        protected = sorted(
            {
                r
                for r in self.entries.values()
                if len(r) > 1 and any(self.entries.get(c, c) != c for c in r)
            },
            key=len,
            reverse=True,
        )
        self._protected_re = (
            re.compile("(" + "|".join(re.escape(p) for p in protected) + ")")
            if protected
            else None
        )

    def __eq__(self, other):
        return isinstance(other, TransliterationTable) and self.entries == other.entries

    def __repr__(self):
        return f"TransliterationTable({len(self.entries)} entries)"


DEFAULT_TABLE = TransliterationTable(DEFAULT_ENTRIES)


def _scrub(text: str, diagnostics: MutableMapping[str, int] | None) -> str:
    """Replace any character still outside the canonical alphabet by a space."""
    if diagnostics is None:
        return _NON_CANONICAL_RE.sub(" ", text)

    def _count(match: re.Match) -> str:
        diagnostics[match.group()] = diagnostics.get(match.group(), 0) + 1
        return " "

    return _NON_CANONICAL_RE.sub(_count, text)


def normalize(
    text: str,
    table: TransliterationTable | None = None,
    diagnostics: MutableMapping[str, int] | None = None,
) -> str:
    """Uppercase and transliterate raw text into canonical form.

    Total over any input: characters the table does not cover and that are
    not canonical become spaces, tallied into ``diagnostics`` when a mapping
    is supplied.  Idempotent: canonical output passes through unchanged.
    """
    if table is None:
        table = DEFAULT_TABLE
    upper = text.upper()
    out: list[str] = []
    last = 0
    for group in _GROUP_RE.finditer(upper):
        out.append(_fold_plain(upper[last : group.start()], table, diagnostics))
        inner = group.group()[1:-1].translate(table._group_map)
        out.append("(" + _scrub(inner, diagnostics) + ")")
        last = group.end()
    out.append(_fold_plain(upper[last:], table, diagnostics))
    return "".join(out)


def _fold_plain(
    segment: str,
    table: TransliterationTable,
    diagnostics: MutableMapping[str, int] | None,
) -> str:
    if not segment:
        return ""
    if table._protected_re is None:
        return _scrub(segment.translate(table._char_map), diagnostics)
    pieces = table._protected_re.split(segment)
    # odd indices are protected replacement strings and copied verbatim
    for i in range(0, len(pieces), 2):
        pieces[i] = _scrub(pieces[i].translate(table._char_map), diagnostics)
    return "".join(pieces)


def is_canonical(text: str) -> bool:
    """True iff every character of ``text`` lies in the canonical alphabet."""
    return _NON_CANONICAL_RE.search(text) is None


def parse_table(content: str) -> TransliterationTable:
    """Parse a tab-separated ``source<TAB>replacement`` table file.

    Blank lines and lines starting with ``#`` are skipped.  The file
    replaces the built-in default table entirely.
    """
    entries: dict[str, str] = {}
    for lineno, line in enumerate(content.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"table line {lineno}: expected 2 tab-separated fields")
        entries[parts[0]] = parts[1]
    return TransliterationTable(entries)


def load_table(path) -> TransliterationTable:
    with open(path, encoding="utf-8") as handle:
        return parse_table(handle.read())


def unmapped_characters(text: str, table: TransliterationTable | None = None) -> Counter:
    """Diagnostics-only pass: tally of characters normalize would discard."""
    tally: Counter[str] = Counter()
    normalize(text, table, tally)
    return tally
