"""Normal forms and equality in M = < A | w = 1 >.

Reduction uses the infinite complete system whose rules are ``u -> v`` for
``u, v`` in Delta*, ``v`` shortlex-smaller than ``u`` and both equal in the
group of units.  Rules are discovered on demand: for a maximal Delta-chain
in the current word we enumerate the shortlex-smaller Delta*-words that
could equal it and ask the units oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .pieces import PieceDecomposition, minimal_pieces, units_presentation
from .srs import RewriteRule
from .units import GroupVerdict, Triviality, UnitsOracle, positive
from .words import SpecialPresentation, Word, parse_presentation

DEFAULT_MAX_CANDIDATES = 50_000


class Equality(str, Enum):
    EQUAL = "EQUAL"
    NOT_EQUAL = "NOT_EQUAL"
    UNKNOWN = "UNKNOWN"


class Truth(str, Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNKNOWN = "UNKNOWN"


class NotInDeltaStar(ValueError):
    pass


class _TooManyCandidates(Exception):
    pass


@dataclass(frozen=True)
class RuleLookup:
    rule: RewriteRule | None
    decided: bool          # False when some comparison came back UNKNOWN
    candidates: int = 0

    @property
    def found(self) -> bool:
        return self.rule is not None


@dataclass(frozen=True)
class ReductionResult:
    word: Word
    certified: bool
    trace: tuple = ()      # (position, lhs, rhs) per rewrite step


@dataclass
class MonoidStats:
    oracle_calls: int = 0
    rule_memo_hits: int = 0
    reduce_memo_hits: int = 0
    rules_found: int = 0


@dataclass(frozen=True)
class PieceCertificate:
    certified: bool
    failures: tuple = ()   # (piece, prefix, verdict) for prefixes not shown non-invertible

    @property
    def status(self) -> str:
        return "CERTIFIED" if self.certified else "NOT-CERTIFIED"


class Monoid:
    """Reduction context for one presentation.

    Holds memo tables, so share an instance only within one thread.
    """

    def __init__(self, presentation: SpecialPresentation, oracle: UnitsOracle | None = None,
                 scan: str = "longest", max_candidates: int = DEFAULT_MAX_CANDIDATES,
                 budget: int | None = None):
        if scan not in ("longest", "shortest"):
            raise ValueError("scan must be 'longest' or 'shortest'")
        self.presentation = presentation
        self.alphabet = presentation.alphabet
        self.pieces: PieceDecomposition = minimal_pieces(presentation)
        self.units = units_presentation(self.pieces)
        self.oracle = oracle or UnitsOracle(self.units, budget=budget)
        self.scan = scan
        self.max_candidates = max_candidates
        self.stats = MonoidStats()
        self._rules: dict[Word, RuleLookup] = {}
        self._reduced: dict[Word, ReductionResult] = {}
        delta = self.pieces.delta
        self._relator_counts = self._counts(self.pieces.pieces)
        self._piece_len = tuple(len(d) for d in delta)

    @classmethod
    def from_text(cls, text: str, **kwargs) -> "Monoid":
        return cls(parse_presentation(text), **kwargs)

    @property
    def delta(self) -> tuple:
        return self.pieces.delta

    def parse(self, text: str) -> Word:
        return self.alphabet.parse_word(text)

    def render(self, w: Sequence[str]) -> str:
        return self.alphabet.render(w)

    # -- Delta* and the group of units ----------------------------------------

    def factor(self, w: Sequence[str]) -> list | None:
        return self.pieces.factor(w)

    def phi(self, w: Sequence[str]) -> Word:
        factors = self.factor(w)
        if factors is None:
            raise NotInDeltaStar(f"{self.render(w)} does not factor over the pieces")
        return self.pieces.phi_image(factors)

    def group_equal(self, x: Word, y: Word) -> GroupVerdict:
        """Compare two positive words over the units alphabet in G."""
        self.stats.oracle_calls += 1
        return self.oracle.equal(positive(x), positive(y))

    def group_trivial(self, x) -> GroupVerdict:
        self.stats.oracle_calls += 1
        return self.oracle.is_trivial(x)

    def delta_equal(self, u: Sequence[str], v: Sequence[str]) -> Equality:
        verdict = self.group_equal(self.phi(u), self.phi(v))
        return _equality(verdict)

    def _counts(self, factors) -> tuple:
        index = {d: i for i, d in enumerate(self.pieces.delta)}
        c = [0] * len(index)
        for f in factors:
            c[index[f]] += 1
        return tuple(c)

    def _arrangements(self, counts: tuple) -> list:
        """All Delta-words with the given piece multiplicities, as A-words."""
        total, size = 0, 1
        for c in counts:
            total += c
            size *= math.comb(total, c)
        if size > self.max_candidates:
            raise _TooManyCandidates(size)
        delta = self.pieces.delta
        pool = [delta[i] for i, c in enumerate(counts) for _ in range(c)]
        out = set()
        for perm in _multiset_permutations(pool):
            out.add(tuple(itertools.chain.from_iterable(perm)))
        return sorted(out)

    def delta_candidates(self, target_counts: tuple, max_length: int, sign: int = 1):
        """Delta*-words whose phi-image has the same abelianisation as
        ``sign * target_counts`` modulo the relator, up to A-length
        ``max_length``, in shortlex order.
        """
        e = self._relator_counts
        s = tuple(sign * c for c in target_counts)
        # c = s + t e must be non-negative; e >= 0 and non-zero, so the
        # A-length grows with t and each t gives one length layer
        t = _min_shift(s, e)
        if t is None:
            return
        key = self.alphabet.key
        while True:
            c = tuple(x + t * y for x, y in zip(s, e))
            length = sum(n * k for n, k in zip(c, self._piece_len))
            if length > max_length:
                return
            yield from sorted(self._arrangements(c), key=key)
            t += 1

    # -- rule discovery -------------------------------------------------------

    def discover_rule(self, sub: Sequence[str]) -> RuleLookup:
        sub = tuple(sub)
        if not sub or self.factor(sub) is None:
            raise NotInDeltaStar(f"{self.render(sub)} is not a non-empty Delta-word")
        hit = self._rules.get(sub)
        if hit is not None:
            self.stats.rule_memo_hits += 1
            return hit
        result = self._discover(sub)
        self._rules[sub] = result
        if result.found:
            self.stats.rules_found += 1
        return result

    def _discover(self, sub: Word) -> RuleLookup:
        key = self.alphabet.key
        ksub = key(sub)
        target = self.phi(sub)
        decided = True
        n = 0
        try:
            for v in self.delta_candidates(self._counts(self.factor(sub)), len(sub)):
                if key(v) >= ksub:
                    break
                n += 1
                if n > self.max_candidates:
                    return RuleLookup(None, False, n)
                verdict = self.group_equal(target, self.phi(v))
                if verdict.value is Triviality.TRIVIAL:
                    return RuleLookup(RewriteRule(sub, v), decided, n)
                if verdict.value is Triviality.UNKNOWN:
                    decided = False
        except _TooManyCandidates:
            return RuleLookup(None, False, n)
        return RuleLookup(None, decided, n)

    # -- reduction -------------------------------------------------------------

    def chains(self, w: Word) -> list:
        """Maximal Delta-chains of ``w`` as (start, [end positions])."""
        delta = self.pieces._delta_set
        lengths = self.pieces._lengths
        out = []
        for i in range(len(w)):
            ends = []
            j = i
            while j < len(w):
                for n in lengths:
                    if w[j:j + n] in delta:
                        j += n
                        ends.append(j)
                        break
                else:
                    break
            if ends:
                out.append((i, ends))
        return out

    def _step(self, w: Word):
        """One rewrite of ``w``: returns ((pos, rule) or None, all_decided)."""
        chains = self.chains(w)
        if self.scan == "longest":
            chains.sort(key=lambda c: (-(c[1][-1] - c[0]), c[0]))
        else:
            chains.sort(key=lambda c: (c[1][-1] - c[0], c[0]))
        all_decided = True
        for i, ends in chains:
            look = self.discover_rule(w[i:ends[-1]])
            if look.found:
                return (i, look.rule), all_decided
            if look.decided:
                continue
            # longest chain undecided: fall back to shorter prefixes of it
            for end in reversed(ends[:-1]):
                sub = self.discover_rule(w[i:end])
                if sub.found:
                    return (i, sub.rule), False
            all_decided = False
        return None, all_decided

    def reduce(self, w: Sequence[str]) -> ReductionResult:
        w = self.alphabet.check(w)
        hit = self._reduced.get(w)
        if hit is not None:
            self.stats.reduce_memo_hits += 1
            return hit
        start = w
        trace = []
        while True:
            step, decided = self._step(w)
            if step is None:
                break
            i, rule = step
            trace.append((i, rule.lhs, rule.rhs))
            w = w[:i] + rule.rhs + w[i + len(rule.lhs):]
        result = ReductionResult(w, decided, tuple(trace))
        self._reduced[start] = result
        if decided:
            self._reduced.setdefault(w, ReductionResult(w, True))
        return result

    def is_reduced(self, w: Sequence[str]) -> Truth:
        r = self.reduce(w)
        if r.word != tuple(w):
            return Truth.FALSE
        return Truth.TRUE if r.certified else Truth.UNKNOWN

    def equal(self, u: Sequence[str], v: Sequence[str]) -> Equality:
        ru, rv = self.reduce(u), self.reduce(v)
        if ru.word == rv.word:
            return Equality.EQUAL
        if ru.certified and rv.certified:
            return Equality.NOT_EQUAL
        return Equality.UNKNOWN

    def is_invertible(self, u: Sequence[str]) -> Truth:
        r = self.reduce(u)
        if self.factor(r.word) is not None:
            return Truth.TRUE
        return Truth.FALSE if r.certified else Truth.UNKNOWN

    def certify_pieces(self) -> PieceCertificate:
        """Check that no proper prefix of a piece is invertible."""
        failures = []
        for piece in self.pieces.delta:
            for k in range(1, len(piece)):
                verdict = self.is_invertible(piece[:k])
                if verdict is not Truth.FALSE:
                    failures.append((piece, piece[:k], verdict))
        return PieceCertificate(not failures, tuple(failures))

    def inverse_in_delta(self, u: Sequence[str], max_length: int) -> tuple[Word | None, bool]:
        """Shortlex-least Delta*-word v with u v = 1, for u in Delta*.

        Returns (v, decided); decided is False when some comparison was
        UNKNOWN before v was found.
        """
        target = self.phi(u)
        decided = True
        candidates = self.delta_candidates(self._counts(self.factor(u)), max_length, sign=-1)
        try:
            for n, v in enumerate(candidates):
                if n >= self.max_candidates:
                    return None, False
                verdict = self.group_trivial(positive(target) + positive(self.phi(v)))
                if verdict.value is Triviality.TRIVIAL:
                    return v, decided
                if verdict.value is Triviality.UNKNOWN:
                    decided = False
        except _TooManyCandidates:
            return None, False
        return None, decided


def _equality(verdict: GroupVerdict) -> Equality:
    return {Triviality.TRIVIAL: Equality.EQUAL,
            Triviality.NONTRIVIAL: Equality.NOT_EQUAL}.get(verdict.value, Equality.UNKNOWN)


def _min_shift(s: tuple, e: tuple) -> int | None:
    """Least integer t with s + t e >= 0 componentwise (e >= 0, e != 0)."""
    t = None
    for x, y in zip(s, e):
        if y == 0:
            if x < 0:
                return None
            continue
        need = -(x // y)  # ceil(-x / y)
        t = need if t is None else max(t, need)
    return t


def _multiset_permutations(pool: list):
    pool = sorted(pool)
    n = len(pool)
    used = [False] * n
    cur: list = []

    def rec():
        if len(cur) == n:
            yield tuple(cur)
            return
        prev = None
        for i in range(n):
            if used[i] or pool[i] == prev:
                continue
            prev = pool[i]
            used[i] = True
            cur.append(pool[i])
            yield from rec()
            cur.pop()
            used[i] = False

    yield from rec()
