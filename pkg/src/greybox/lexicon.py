"""Synonym lexicon and homoglyph map.

The lexicon is a plain TSV shipped with the package (WordNet-derived; the
generation is an offline step, nothing here depends on an NLP toolkit at
runtime).  File order of synonyms is authoritative, which keeps candidate
enumeration deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import HomoglyphKeyError, LexiconFormatError

DEFAULT_LEXICON = "lexicon.tsv"
DEFAULT_HOMOGLYPHS = "homoglyphs.tsv"


@dataclass(frozen=True)
class SynonymLexicon:
    """Lowercase headword -> ordered lowercase synonyms.

    ``include_casefold`` controls whether a cased query's own lowercase
    form counts as a final candidate ("Average" -> "average").
    """

    entries: dict[str, tuple[str, ...]] = field(default_factory=dict)
    include_casefold: bool = True

    def synonyms_for(self, word: str) -> list[str]:
        """Cased replacement candidates for one surface form.

        All-caps queries get all-caps synonyms; any other cased query gets
        plain lowercase ones (a capitalized word is deliberately replaced
        by a lowercase synonym).
        """
        base = self.entries.get(word.lower(), ())
        if word.isupper() and len(word) > 0:
            out = [syn.upper() for syn in base]
        else:
            out = list(base)
        if self.include_casefold and any(ch.isupper() for ch in word):
            folded = word.lower()
            if folded not in out:
                out.append(folded)
        return out

    def __len__(self) -> int:
        return len(self.entries)


def load_lexicon(path: str | Path, include_casefold: bool = True) -> SynonymLexicon:
    """Parse a `headword<TAB>syn1,syn2,...` file.

    Blank lines and ``#`` comments are skipped; a line without a tab or
    with an empty synonym list is a parse error carrying its line number.
    Synonym lists are lowercased, deduplicated order-preserving, and never
    contain their own headword.
    """
    entries: dict[str, list[str]] = {}
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconFormatError(
                str(path), line_no,
                "expected exactly one tab between headword and synonyms",
            )
        headword = parts[0].strip().lower()
        if not headword:
            raise LexiconFormatError(str(path), line_no, "empty headword")
        synonyms = []
        for raw in parts[1].split(","):
            syn = raw.strip().lower()
            if syn and syn != headword and syn not in synonyms:
                synonyms.append(syn)
        if not synonyms:
            raise LexiconFormatError(str(path), line_no, "empty synonym list")
        entries.setdefault(headword, [])
        for syn in synonyms:
            if syn not in entries[headword]:
                entries[headword].append(syn)
    return SynonymLexicon(
        {head: tuple(syns) for head, syns in entries.items()},
        include_casefold=include_casefold,
    )


@dataclass(frozen=True)
class HomoglyphMap:
    """Source character -> visually confusable replacement character."""

    mapping: dict[str, str] = field(default_factory=dict)

    def substitute(self, text: str, chars: set[str] | None = None) -> str:
        """Replace every occurrence of the chosen source characters.

        ``chars`` defaults to the whole map domain; asking for a character
        the map does not cover is an error naming that character.
        """
        if chars is None:
            chosen = set(self.mapping)
        else:
            chosen = set(chars)
            for ch in sorted(chosen):
                if ch not in self.mapping:
                    raise HomoglyphKeyError(f"no confusable mapping for {ch!r}")
        table = {ord(ch): self.mapping[ch] for ch in chosen}
        return text.translate(table)

    def __len__(self) -> int:
        return len(self.mapping)


def homoglyph_substitute(text: str, hmap: HomoglyphMap,
                         chars: set[str] | None = None) -> str:
    return hmap.substitute(text, chars)


def load_homoglyphs(path: str | Path) -> HomoglyphMap:
    """Parse a `source<TAB>replacement` file of single-character pairs."""
    mapping: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconFormatError(
                str(path), line_no, "expected `source<TAB>replacement`"
            )
        source, replacement = parts[0].strip(), parts[1].strip()
        if len(source) != 1 or len(replacement) != 1:
            raise LexiconFormatError(
                str(path), line_no, "source and replacement must be single characters"
            )
        if source == replacement:
            raise LexiconFormatError(
                str(path), line_no,
                f"source and replacement are the same code point {source!r}",
            )
        mapping[source] = replacement
    return HomoglyphMap(mapping)


def _data_path(filename: str) -> Path:
    return Path(resources.files("greybox").joinpath("data", filename))  # type: ignore[arg-type]


def default_lexicon(include_casefold: bool = True) -> SynonymLexicon:
    """The lexicon shipped with the package."""
    return load_lexicon(_data_path(DEFAULT_LEXICON), include_casefold)


def default_homoglyphs() -> HomoglyphMap:
    """The Cyrillic-confusables map shipped with the package."""
    return load_homoglyphs(_data_path(DEFAULT_HOMOGLYPHS))
