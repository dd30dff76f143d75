"""Load yearly exam text files and reduce them to clean token streams.

Cleaning contract: literal removal patterns are deleted from the raw text
first (they may span line breaks), then every ASCII whitespace character
becomes a single space, and finally everything that is not an ASCII letter,
a space, or a sentence terminator (. ! ?) is dropped and letters are
lowercased. The result is idempotent under a second pass as long as every
removal pattern contains at least one character outside [a-z .!?].
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import InputError

logger = logging.getLogger(__name__)

_YEAR_FILE = re.compile(r"^(\d{4})\.txt$")
_ASCII_WS = re.compile(r"[\t\n\r\f\v]")
_NON_ALPHABET = re.compile(r"[^a-zA-Z .!?]")
_WORD = re.compile(r"[a-zA-Z]+")
_SENTENCE_END = re.compile(r"[.!?]")
_HEX = "0123456789abcdefABCDEF"


@dataclass(frozen=True)
class RemovalRuleSet:
    """Ordered literal substrings deleted from raw text before tokenization."""

    patterns: tuple[str, ...] = ()


@dataclass
class YearDocument:
    """One year's cleaned exam text: token stream plus sentence structure."""

    year: int
    tokens: list[str]
    sentences: list[list[str]] = field(default_factory=list)


def clean_text(raw: str, rules: RemovalRuleSet) -> str:
    """Strip removal patterns, non-letters and non-ASCII; lowercase the rest.

    Sentence terminators (. ! ?) and spacing survive so that sentence
    extraction still works afterwards. Total function: any Unicode input
    is accepted.
    """
    text = raw
    for pattern in rules.patterns:
        if pattern:
            text = text.replace(pattern, "")
    # Line breaks become spaces before the alphabet filter so that words
    # split across lines do not fuse.
    text = _ASCII_WS.sub(" ", text)
    text = _NON_ALPHABET.sub("", text)
    return text.lower()


def tokenize(cleaned: str) -> list[str]:
    """Maximal runs of letters, lowercased, in order of appearance."""
    return [m.group(0).lower() for m in _WORD.finditer(cleaned)]


def extract_sentences(cleaned: str) -> list[list[str]]:
    """Split on . ! ? and tokenize each piece; empty sentences are dropped."""
    sentences = []
    for part in _SENTENCE_END.split(cleaned):
        tokens = tokenize(part)
        if tokens:
            sentences.append(tokens)
    return sentences


def _unescape(line: str, path: Path, lineno: int) -> str:
    """Interpret \\n, \\t, \\r, \\\\, \\xHH, \\uHHHH and \\UHHHHHHHH escapes."""
    out = []
    i = 0
    while i < len(line):
        ch = line[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(line):
            raise InputError(f"{path}:{lineno}: trailing backslash in pattern")
        code = line[i + 1]
        if code in ("n", "t", "r", "\\"):
            out.append({"n": "\n", "t": "\t", "r": "\r", "\\": "\\"}[code])
            i += 2
        elif code in ("x", "u", "U"):
            width = {"x": 2, "u": 4, "U": 8}[code]
            digits = line[i + 2 : i + 2 + width]
            if len(digits) != width or any(d not in _HEX for d in digits):
                raise InputError(
                    f"{path}:{lineno}: bad \\{code} escape, expected "
                    f"{width} hex digits"
                )
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise InputError(f"{path}:{lineno}: unsupported escape '\\{code}'")
    return "".join(out)


def load_removal_rules(file: str | Path) -> RemovalRuleSet:
    """Read one literal pattern per line; escapes are interpreted, blank lines skipped."""
    path = Path(file)
    try:
        raw = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read rules file {path}: {exc}") from exc
    patterns = []
    for lineno, line in enumerate(raw.split("\n"), start=1):
        if not line:
            continue
        patterns.append(_unescape(line, path, lineno))
    return RemovalRuleSet(tuple(patterns))


def default_rules() -> RemovalRuleSet:
    """The removal rules bundled with the package (data/removal_rules.txt)."""
    text = resources.files("vocabtrend").joinpath("data/removal_rules.txt")
    with resources.as_file(text) as path:
        return load_removal_rules(path)


def load_year_file(file: str | Path, rules: RemovalRuleSet, year: int) -> YearDocument:
    """Clean and tokenize a single text file into a YearDocument."""
    path = Path(file)
    try:
        raw = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read corpus file {path}: {exc}") from exc
    cleaned = clean_text(raw, rules)
    return YearDocument(year=year, tokens=tokenize(cleaned), sentences=extract_sentences(cleaned))


def load_corpus(directory: str | Path, rules: RemovalRuleSet) -> list[YearDocument]:
    """Load every YYYY.txt in a directory, ascending by year.

    Other filenames are ignored with a warning. The result does not depend
    on filesystem enumeration order.
    """
    root = Path(directory)
    if not root.is_dir():
        raise InputError(f"corpus directory not found: {root}")
    docs = []
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.is_dir():
            continue
        match = _YEAR_FILE.match(entry.name)
        if match is None:
            logger.warning("ignoring non-corpus file %s", entry)
            continue
        docs.append(load_year_file(entry, rules, year=int(match.group(1))))
    docs.sort(key=lambda d: d.year)
    return docs
