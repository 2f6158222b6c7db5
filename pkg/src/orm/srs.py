"""Finite string rewriting systems: normal forms, critical pairs, completion.

Rules are oriented by shortlex with respect to a token order, so every
system built here is Noetherian.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


class Confluence(str, Enum):
    CONFLUENT = "CONFLUENT"
    NOT_CONFLUENT = "NOT_CONFLUENT"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class RewriteRule:
    lhs: tuple
    rhs: tuple

    def __iter__(self):
        return iter((self.lhs, self.rhs))


@dataclass(frozen=True)
class CriticalPair:
    source: tuple  # the overlap word both sides were derived from
    left: tuple
    right: tuple
    left_nf: tuple
    right_nf: tuple

    @property
    def joins(self) -> bool:
        return self.left_nf == self.right_nf


def shortlex_key(order: Sequence):
    rank = {t: i for i, t in enumerate(order)}

    def key(w):
        return (len(w), tuple(rank[t] for t in w))

    return key


class FiniteSystem:
    """A finite shortlex-decreasing rewriting system over ``order``."""

    def __init__(self, rules: Iterable, order: Sequence):
        self.order = tuple(order)
        self.key = shortlex_key(self.order)
        self.rules: list[RewriteRule] = []
        for lhs, rhs in rules:
            lhs, rhs = tuple(lhs), tuple(rhs)
            if not self.key(rhs) < self.key(lhs):
                raise ValueError(f"rule {lhs} -> {rhs} is not shortlex-decreasing")
            self.rules.append(RewriteRule(lhs, rhs))
        self._index: dict[tuple, tuple] = {}
        for r in self.rules:
            self._index.setdefault(r.lhs, r.rhs)
        self._lengths = sorted({len(l) for l in self._index}, reverse=True)

    def __len__(self):
        return len(self.rules)

    def rewrite(self, word: Sequence) -> tuple:
        """Normal form of ``word`` (leftmost-innermost, stack based)."""
        out: list = []
        todo = list(reversed(word))
        index, lengths = self._index, self._lengths
        while todo:
            out.append(todo.pop())
            n = len(out)
            for k in lengths:
                if k <= n:
                    rhs = index.get(tuple(out[n - k:]))
                    if rhs is not None:
                        del out[n - k:]
                        todo.extend(reversed(rhs))
                        break
        return tuple(out)

    def is_reduced(self, word: Sequence) -> bool:
        return self.rewrite(word) == tuple(word)

    def critical_pairs(self) -> list[CriticalPair]:
        pairs = []
        for i, r1 in enumerate(self.rules):
            for j, r2 in enumerate(self.rules):
                for src, left, right in _pairs(r1, r2, same=(i == j)):
                    pairs.append(CriticalPair(src, left, right, self.rewrite(left), self.rewrite(right)))
        return pairs

    def confluence(self) -> Confluence:
        ok = all(p.joins for p in self.critical_pairs())
        return Confluence.CONFLUENT if ok else Confluence.NOT_CONFLUENT


def _pairs(r1: RewriteRule, r2: RewriteRule, same: bool):
    """Overlap and inclusion ambiguities between r1 and r2 (in that order)."""
    l1, l2 = r1.lhs, r2.lhs
    # proper overlap: l1 = x y, l2 = y z with x, y, z non-empty
    for k in range(1, min(len(l1), len(l2))):
        if l1[-k:] == l2[:k]:
            src = l1 + l2[k:]
            yield src, r1.rhs + l2[k:], l1[:-k] + r2.rhs
    # inclusion: l2 occurs inside l1
    if len(l2) <= len(l1):
        for i in range(len(l1) - len(l2) + 1):
            if l1[i:i + len(l2)] == l2:
                if same and i == 0:
                    continue
                if i == 0 and len(l1) == len(l2) and r1.rhs == r2.rhs:
                    continue
                yield l1, r1.rhs, l1[:i] + r2.rhs + l1[i + len(l2):]


@dataclass
class Completion:
    system: FiniteSystem
    converged: bool
    inferences: int
    notes: list = field(default_factory=list)


class _Rules:
    """Mutable rule index used during completion."""

    def __init__(self):
        self.rules: dict[tuple, tuple] = {}
        self.count: dict[int, int] = {}

    def add(self, lhs, rhs):
        self.rules[lhs] = rhs
        self.count[len(lhs)] = self.count.get(len(lhs), 0) + 1

    def remove(self, lhs):
        rhs = self.rules.pop(lhs)
        n = len(lhs)
        self.count[n] -= 1
        if not self.count[n]:
            del self.count[n]
        return rhs

    def rewrite(self, word) -> tuple:
        out: list = []
        todo = list(reversed(word))
        rules = self.rules
        lengths = sorted(self.count, reverse=True)
        while todo:
            out.append(todo.pop())
            n = len(out)
            for k in lengths:
                if k <= n:
                    rhs = rules.get(tuple(out[n - k:]))
                    if rhs is not None:
                        del out[n - k:]
                        todo.extend(reversed(rhs))
                        break
        return tuple(out)


def knuth_bendix(equations: Iterable, order: Sequence, max_inferences: int = 100_000,
                 max_rules: int = 5_000) -> Completion:
    """Shortlex Knuth-Bendix completion.

    ``converged`` is only reported after a final check that every critical
    pair of the resulting system joins.
    """
    key = shortlex_key(order)
    rs = _Rules()
    heap: list = []
    counter = 0
    inferences = 0

    def push(u, v):
        nonlocal counter
        heapq.heappush(heap, (max(len(u), len(v)), counter, tuple(u), tuple(v)))
        counter += 1

    for u, v in equations:
        push(u, v)

    while True:
        while heap:
            _, _, u, v = heapq.heappop(heap)
            u, v = rs.rewrite(u), rs.rewrite(v)
            if u == v:
                continue
            if key(u) < key(v):
                u, v = v, u
            # rules whose lhs contains u become equations again
            for l in [l for l in rs.rules if _contains(l, u)]:
                push(l, rs.remove(l))
            rs.add(u, v)
            for l, r in list(rs.rules.items()):
                if l != u and _contains(r, u):
                    rs.rules[l] = rs.rewrite(r)
            new = RewriteRule(u, v)
            for l, r in list(rs.rules.items()):
                other = RewriteRule(l, r)
                for _, left, right in _pairs(new, other, same=(l == u)):
                    push(left, right)
                    inferences += 1
                if l != u:
                    for _, left, right in _pairs(other, new, same=False):
                        push(left, right)
                        inferences += 1
            if inferences > max_inferences or len(rs.rules) > max_rules:
                system = FiniteSystem(rs.rules.items(), order)
                return Completion(system, False, inferences, ["budget exhausted"])
        system = FiniteSystem(rs.rules.items(), order)
        pending = [(p.left_nf, p.right_nf) for p in system.critical_pairs() if not p.joins]
        if not pending:
            return Completion(system, True, inferences)
        for u, v in pending:
            push(u, v)


def _contains(big: tuple, small: tuple) -> bool:
    n = len(small)
    return any(big[i:i + n] == small for i in range(len(big) - n + 1))
