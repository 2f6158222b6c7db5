"""Alphabets, words, shortlex order and the presentation text format.

A word is a plain tuple of symbol tokens; the empty tuple is the identity.
Tokens are strings so that words over different alphabets (the monoid
alphabet, the units alphabet, WELC generators) can be handled uniformly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Iterator, Sequence

Word = tuple  # tuple[str, ...]

EMPTY: Word = ()


class ParseError(ValueError):
    """Malformed input text, with a 1-based line/column position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple
    _rank: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise ValueError("alphabet must be non-empty")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"duplicate symbol in alphabet {symbols}")
        for s in symbols:
            if not s or any(ch.isspace() for ch in s) or any(ch in "<>|=,.;#" for ch in s):
                raise ValueError(f"invalid symbol {s!r}")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_rank", {s: i for i, s in enumerate(symbols)})

    def __contains__(self, symbol) -> bool:
        return symbol in self._rank

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def rank(self, symbol: str) -> int:
        return self._rank[symbol]

    @property
    def single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)

    def check(self, word: Sequence[str]) -> Word:
        for s in word:
            if s not in self._rank:
                raise ValueError(f"symbol {s!r} is not in alphabet {self.symbols}")
        return tuple(word)

    def key(self, word: Sequence[str]) -> tuple:
        """Sort key realising shortlex order."""
        return (len(word), tuple(self._rank[s] for s in word))

    def parse_word(self, text: str) -> Word:
        """Parse ``1``, ``abac``, ``a.b.c`` or whitespace-separated tokens."""
        text = text.strip()
        if text in ("1", ""):
            return EMPTY
        out = []
        for chunk in re.split(r"[\s.]+", text):
            if not chunk:
                continue
            if chunk in self._rank:
                out.append(chunk)
                continue
            for ch in chunk:
                if ch not in self._rank:
                    raise ValueError(f"unknown symbol {ch!r} in word {text!r}")
                out.append(ch)
        return tuple(out)

    def render(self, word: Sequence[str]) -> str:
        if not word:
            return "1"
        sep = "" if self.single_char else "."
        return sep.join(word)

    def words(self, max_length: int) -> Iterator[Word]:
        """All words of length <= max_length, in shortlex order."""
        layer: list[Word] = [EMPTY]
        yield EMPTY
        for _ in range(max_length):
            layer = [w + (s,) for w in layer for s in self.symbols]
            yield from layer


def shortlex_compare(u: Sequence[str], v: Sequence[str], alphabet: Alphabet) -> Ordering:
    ku, kv = alphabet.key(u), alphabet.key(v)
    if ku < kv:
        return Ordering.LT
    if ku > kv:
        return Ordering.GT
    return Ordering.EQ


def is_prefix_code(delta: Iterable[Word]) -> bool:
    words = sorted(set(map(tuple, delta)))
    if any(len(w) == 0 for w in words):
        return False
    # after lexicographic sorting a prefix sits directly before some extension of it
    return not any(words[i + 1][: len(words[i])] == words[i] for i in range(len(words) - 1))


def prefix_code_factor(w: Sequence[str], delta: Iterable[Word]) -> list | None:
    """Unique factorisation of ``w`` over the prefix code ``delta``, or None."""
    delta = set(map(tuple, delta))
    if not is_prefix_code(delta):
        raise ValueError("delta is not a prefix code")
    w = tuple(w)
    lengths = sorted({len(d) for d in delta})
    out = []
    i = 0
    while i < len(w):
        for n in lengths:
            if w[i:i + n] in delta:
                out.append(w[i:i + n])
                i += n
                break
        else:
            return None
    return out


def is_subword(u: Sequence, v: Sequence) -> bool:
    u, v = tuple(u), tuple(v)
    n = len(u)
    return any(v[i:i + n] == u for i in range(len(v) - n + 1))


def primitive_root(w: Sequence) -> tuple[Word, int]:
    """Return (u, k) with w == u^k and k maximal."""
    w = tuple(w)
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d], n // d
    return w, 1


@dataclass(frozen=True)
class SpecialPresentation:
    """A special one-relator presentation ``< A | relator = 1 >``."""

    alphabet: Alphabet
    relator: Word

    def __post_init__(self):
        object.__setattr__(self, "relator", self.alphabet.check(self.relator))
        if not self.relator:
            raise ValueError("relator must be non-empty")

    @classmethod
    def from_strings(cls, symbols: Iterable[str], relator: str) -> "SpecialPresentation":
        alphabet = Alphabet(tuple(symbols))
        return cls(alphabet, alphabet.parse_word(relator))

    def render(self) -> str:
        gens = ",".join(self.alphabet.symbols)
        return f"< {gens} | {self.alphabet.render(self.relator)} = 1 >"

    def __str__(self) -> str:
        return self.render()


_TOKEN = re.compile(r"[^\s<>|=,.;#]+")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message: str, pos: int | None = None) -> ParseError:
        return ParseError(message, *self.where(pos))

    def skip(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "#":
                nl = self.text.find("\n", self.pos)
                self.pos = len(self.text) if nl < 0 else nl
            elif ch.isspace():
                self.pos += 1
            else:
                break

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def token(self) -> tuple[str, int]:
        self.skip()
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            found = self.peek() or "end of input"
            raise self.error(f"expected a symbol, found {found!r}")
        self.pos = m.end()
        return m.group(), m.start()


def parse_presentation(text: str) -> SpecialPresentation:
    """Parse ``< a,b,c | abacab = 1 >``.

    Relator symbols are single characters unless separated by ``.`` or
    whitespace; ``#`` starts a comment.
    """
    sc = _Scanner(text)
    sc.expect("<")
    gens: list[str] = []
    while True:
        tok, at = sc.token()
        if tok in gens:
            raise sc.error(f"duplicate generator {tok!r}", at)
        if tok == "1":
            raise sc.error("'1' is reserved for the empty word", at)
        gens.append(tok)
        if sc.peek() == ",":
            sc.pos += 1
            continue
        break
    sc.expect("|")
    alphabet = Alphabet(tuple(gens))
    relator: list[str] = []
    start = None
    while sc.peek() not in ("=", ""):
        if sc.peek() == ".":
            sc.pos += 1
            continue
        tok, at = sc.token()
        start = at if start is None else start
        if tok == "1" and not relator and sc.peek() == "=":
            break
        if tok in alphabet:
            relator.append(tok)
            continue
        for offset, ch in enumerate(tok):
            if ch not in alphabet:
                raise sc.error(f"unknown symbol {ch!r} in relator", at + offset)
            relator.append(ch)
    if start is None and sc.peek() == "=":
        raise sc.error("missing relator word")
    sc.expect("=")
    one, at = sc.token()
    if one != "1":
        raise sc.error("right-hand side must be 1", at)
    sc.expect(">")
    if sc.peek():
        raise sc.error("trailing input after presentation")
    if not relator:
        raise sc.error("empty relator", start if start is not None else 0)
    return SpecialPresentation(alphabet, tuple(relator))
