"""Span-preserving tokenization and word-level perturbation of sentences.

Every other component (explainer, lexicon, attack engine) operates on the
token structure defined here.  Tokens keep their exact source spans so the
original string can always be reconstructed byte-for-byte, and so word
substitutions touch nothing outside the replaced span.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import MaskLengthError, WordIndexError

WORD = "word"
PUNCT = "punct"
SPACE = "space"

# A word is a maximal alphanumeric run, with apostrophes allowed inside
# (e.g. "you're" is one word).  Underscore is excluded from \w on purpose.
_WORD_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*", re.UNICODE)


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    kind: str
    word_index: int | None = None


@dataclass(frozen=True)
class TokenizedText:
    """A sentence split into word / punctuation / whitespace tokens."""

    original: str
    tokens: tuple[Token, ...]

    @property
    def word_tokens(self) -> tuple[Token, ...]:
        return tuple(t for t in self.tokens if t.kind == WORD)

    @property
    def words(self) -> list[str]:
        return [t.surface for t in self.tokens if t.kind == WORD]

    @property
    def word_count(self) -> int:
        return sum(1 for t in self.tokens if t.kind == WORD)

    def detokenize(self) -> str:
        return "".join(t.surface for t in self.tokens)


def tokenize(text: str) -> TokenizedText:
    """Split ``text`` into tokens covering every character of the input.

    Word tokens get a dense ``word_index`` (0..W-1); the gaps between words
    are emitted as whitespace runs and punctuation runs so that
    concatenating all surfaces reproduces the input exactly.
    """
    tokens: list[Token] = []
    word_index = 0
    pos = 0
    for m in _WORD_RE.finditer(text):
        if m.start() > pos:
            tokens.extend(_split_nonword(text, pos, m.start()))
        tokens.append(Token(m.group(0), m.start(), m.end(), WORD, word_index))
        word_index += 1
        pos = m.end()
    if pos < len(text):
        tokens.extend(_split_nonword(text, pos, len(text)))
    return TokenizedText(text, tuple(tokens))


def _split_nonword(text: str, start: int, end: int) -> Iterable[Token]:
    """Break a non-word stretch into alternating space/punct runs."""
    i = start
    while i < end:
        is_space = text[i].isspace()
        j = i + 1
        while j < end and text[j].isspace() == is_space:
            j += 1
        yield Token(text[i:j], i, j, SPACE if is_space else PUNCT)
        i = j


def apply_mask(t: TokenizedText, mask: Sequence[int]) -> str:
    """Render ``t`` with every 0-bit word deleted.

    Each deleted word consumes one adjacent whitespace token (the following
    one when available, otherwise the preceding one) so the result never
    contains doubled separators.
    """
    if len(mask) != t.word_count:
        raise MaskLengthError(
            f"mask length {len(mask)} != word count {t.word_count}"
        )
    drop = [False] * len(t.tokens)
    for i, tok in enumerate(t.tokens):
        if tok.kind == WORD and not mask[tok.word_index]:
            drop[i] = True
    for i, tok in enumerate(t.tokens):
        if not (tok.kind == WORD and drop[i]):
            continue
        if i + 1 < len(t.tokens) and t.tokens[i + 1].kind == SPACE and not drop[i + 1]:
            drop[i + 1] = True
        elif i > 0 and t.tokens[i - 1].kind == SPACE and not drop[i - 1]:
            drop[i - 1] = True
    return "".join(tok.surface for i, tok in enumerate(t.tokens) if not drop[i])


def substitute(t: TokenizedText, swaps: Iterable[tuple[int, str]]) -> str:
    """Replace words by ``word_index``; every other character is untouched.

    Replacements are inserted verbatim (casing is the caller's concern).
    Raises ``WordIndexError`` for an out-of-range or duplicate index.
    """
    replacements: dict[int, str] = {}
    for index, replacement in swaps:
        if not 0 <= index < t.word_count:
            raise WordIndexError(
                f"word index {index} out of range for {t.word_count} words"
            )
        if index in replacements:
            raise WordIndexError(f"duplicate word index {index}")
        replacements[index] = replacement
    parts = []
    for tok in t.tokens:
        if tok.kind == WORD and tok.word_index in replacements:
            parts.append(replacements[tok.word_index])
        else:
            parts.append(tok.surface)
    return "".join(parts)
