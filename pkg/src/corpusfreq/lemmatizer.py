"""Tokenization of canonical text with inline annotations and lemma rules.

Tokens are maximal non-space runs of canonical text.  Three kinds of
parenthesized groups get special treatment:

* a standalone ``(SIC)`` flags the preceding token as a preserved source
  error and is not itself a token;
* a group glued to a word is kept on that word - either as a homograph
  disambiguator (``PARTE(LA)``) or, when the content is a registered
  language tag (``AMPAYER(ENG)``), as a FOREIGN flag stripped from the
  lemma;
* a free-standing group is a single token with internal spaces removed,
  the convention for chemistry notation (``(H2 O)`` -> ``(H2O)``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .errors import CorpusError
from .normalizer import is_canonical


class UnbalancedParenthesis(CorpusError):
    """A parenthesis that opens without closing, closes without opening, or nests."""


class DanglingSicMarker(CorpusError):
    """A (SIC) marker with no token before it to attach to."""


EMPTY_FLAGS: frozenset[str] = frozenset()

DEFAULT_FOREIGN_TAGS = frozenset({"ENG", "FRA", "GER", "ITA", "POR", "LAT"})

_TOKEN_RE = re.compile(r"\([^()]*\)|[A-Z0-9.\-]+(?:\([^()\s]*\))?")


@dataclass(frozen=True, slots=True)
class Token:
    lemma: str
    position: int
    flags: frozenset[str] = EMPTY_FLAGS

    @property
    def is_sic(self) -> bool:
        return "SIC" in self.flags

    @property
    def foreign_tag(self) -> str | None:
        for flag in self.flags:
            if flag.startswith("FOREIGN(") and flag.endswith(")"):
                return flag[8:-1]
        return None


def tokenize(
    text: str,
    foreign_tags: frozenset[str] = DEFAULT_FOREIGN_TAGS,
) -> list[Token]:
    """Split canonical text into tokens, absorbing SIC and language tags."""
    if not is_canonical(text):
        raise ValueError("tokenize expects canonical text; run normalize first")
    tokens: list[Token] = []
    last = 0
    for match in _TOKEN_RE.finditer(text):
        if text[last : match.start()].strip():
            raise UnbalancedParenthesis(
                f"stray character near offset {match.start()}: {text[last:match.start()]!r}"
            )
        last = match.end()
        piece = match.group()
        if piece.startswith("("):
            inner = piece[1:-1].replace(" ", "")
            if inner == "SIC":
                if not tokens:
                    raise DanglingSicMarker("(SIC) with no preceding token")
                tokens[-1] = replace(tokens[-1], flags=tokens[-1].flags | {"SIC"})
                continue
            tokens.append(Token("(" + inner + ")", len(tokens)))
            continue
        lemma, flags = piece, EMPTY_FLAGS
        if piece.endswith(")"):
            base, _, tag = piece[:-1].rpartition("(")
            if base and tag == "SIC":
                lemma, flags = base, frozenset({"SIC"})
            elif base and tag in foreign_tags:
                lemma, flags = base, frozenset({f"FOREIGN({tag})"})
        tokens.append(Token(lemma, len(tokens), flags))
    if text[last:].strip():
        raise UnbalancedParenthesis(f"stray character at end of text: {text[last:]!r}")
    return tokens


def count_words(tokens: list[Token]) -> int:
    """Token count after marker absorption; SIC-flagged tokens do count."""
    return len(tokens)


_LEFT_CLASSES = ("any", "word", "digit", "absent")


@dataclass(frozen=True)
class DisambiguationRule:
    """Rewrite a single-letter lemma when its neighbours match.

    ``left`` classifies the previous token (any / word / digit / absent);
    ``right_prefix`` constrains the next token's lemma: None means no
    constraint, "*" requires some next token, anything else is a literal
    prefix the next lemma must start with.
    """

    target: str
    replacement: str
    left: str = "any"
    right_prefix: str | None = None

    def __post_init__(self):
        if self.replacement == self.target:
            raise ValueError(f"rule for {self.target!r} must change the lemma")
        if self.left not in _LEFT_CLASSES:
            raise ValueError(f"unknown left-context class {self.left!r}")

    def matches(self, prev: Token | None, nxt: Token | None) -> bool:
        if self.left == "absent":
            if prev is not None:
                return False
        elif self.left == "word":
            if prev is None or not any("A" <= c <= "Z" for c in prev.lemma):
                return False
        elif self.left == "digit":
            if prev is None or not prev.lemma.isdigit():
                return False
        if self.right_prefix is None:
            return True
        if nxt is None:
            return False
        if self.right_prefix == "*":
            return True
        return nxt.lemma.startswith(self.right_prefix)


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[DisambiguationRule, ...]

    def __iter__(self):
        return iter(self.rules)


DEFAULT_RULES = RuleSet(
    (
        DisambiguationRule("E", "E(CONJ)", right_prefix="HI"),
        DisambiguationRule("U", "U(CONJ)", right_prefix="O"),
        DisambiguationRule("U", "U(CONJ)", right_prefix="HO"),
        DisambiguationRule("O", "O(DISJ)", left="word", right_prefix="*"),
    )
)


def apply_rules(tokens: list[Token], rules: RuleSet = DEFAULT_RULES) -> list[Token]:
    """Rewrite tokens by the first matching rule; positions and flags kept."""
    out: list[Token] = []
    for i, token in enumerate(tokens):
        prev = tokens[i - 1] if i else None
        nxt = tokens[i + 1] if i + 1 < len(tokens) else None
        for rule in rules:
            if token.lemma == rule.target and rule.matches(prev, nxt):
                token = replace(token, lemma=rule.replacement)
                break
        out.append(token)
    return out


def parse_rules(content: str) -> RuleSet:
    """Parse tab-separated rule rows: target, left class, right prefix, replacement.

    ``-`` in the left column means any context; ``-`` in the right column
    means no constraint and ``*`` means any next token.
    """
    rules = []
    for lineno, line in enumerate(content.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 4:
            raise ValueError(f"rule line {lineno}: expected 4 tab-separated fields")
        target, left, right, replacement = parts
        rules.append(
            DisambiguationRule(
                target,
                replacement,
                left="any" if left == "-" else left,
                right_prefix=None if right == "-" else right,
            )
        )
    return RuleSet(tuple(rules))


def load_rules(path) -> RuleSet:
    with open(path, encoding="utf-8") as handle:
        return parse_rules(handle.read())
