"""Bounded solver for systems of equations over M.

Variables range over the reduced words of a ball of given radius.  The
pruned strategy filters domains by single-variable equations, checks each
equation as soon as its variables are assigned (shortest equations first)
and memoises reductions; the naive strategy is the reference it is
measured against.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .monoid import Equality, Monoid
from .welc import MonoidEqSystem, SolverResult, Status
from .words import Word


@dataclass(frozen=True)
class Ball:
    radius: int
    words: tuple
    degraded: bool = False
    flagged: tuple = ()        # words whose reduction was not certified


def reduced_ball(monoid: Monoid, radius: int) -> Ball:
    """Reduced forms of all words of length <= radius, shortlex sorted."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    seen = {(): True}
    frontier = [()]
    flagged = []
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for x in monoid.alphabet:
                r = monoid.reduce(u + (x,))
                if r.word not in seen:
                    seen[r.word] = r.certified
                    nxt.append(r.word)
                    if not r.certified:
                        flagged.append(r.word)
        frontier = nxt
    words = tuple(sorted(seen, key=monoid.alphabet.key))
    return Ball(radius, words, bool(flagged), tuple(sorted(flagged, key=monoid.alphabet.key)))


class _Evaluator:
    def __init__(self, monoid: Monoid, memo: bool, max_calls: int | None = None):
        self.monoid = monoid
        self.memo: dict | None = {} if memo else None
        self.calls = 0
        self.hits = 0
        self.max_calls = max_calls

    def reduce(self, w: Word):
        if self.memo is not None:
            hit = self.memo.get(w)
            if hit is not None:
                self.hits += 1
                return hit
        self.calls += 1
        r = self.monoid.reduce(w)
        if self.memo is not None:
            self.memo[w] = r
        return r

    def equal(self, u: Word, v: Word) -> Equality:
        if u == v:
            return Equality.EQUAL
        ru = self.reduce(u)
        rv = self.reduce(v)
        if ru.word == rv.word:
            return Equality.EQUAL
        if ru.certified and rv.certified:
            return Equality.NOT_EQUAL
        return Equality.UNKNOWN

    @property
    def exhausted(self) -> bool:
        return self.max_calls is not None and self.calls >= self.max_calls


def _eq_vars(eq, variables):
    var = set(variables)
    return {s for side in eq for s in side if s in var}


def _search_pruned(system: MonoidEqSystem, monoid: Monoid, values: tuple, first_slice=None):
    """Depth-first search; returns (witness or None, unknown_seen, assignments, evaluator)."""
    ev = _Evaluator(monoid, memo=True)
    order = system.variables
    position = {v: i for i, v in enumerate(order)}
    domains = [list(values) for _ in order]
    if first_slice is not None and order:
        domains[0] = domains[0][first_slice[0]:first_slice[1]]
    unknown = False
    doubtful = [set() for _ in order]   # values kept only because a check was UNKNOWN
    levels: list[list] = [[] for _ in order]
    for eq in system.equations:
        vs = _eq_vars(eq, order)
        if not vs:
            verdict = ev.equal(eq[0], eq[1])
            if verdict is Equality.NOT_EQUAL:
                return None, False, 0, ev
            unknown |= verdict is Equality.UNKNOWN
        elif len(vs) == 1:
            (v,) = vs
            i = position[v]
            kept = []
            for val in domains[i]:
                a = {v: val}
                verdict = ev.equal(system.substitute(eq[0], a), system.substitute(eq[1], a))
                if verdict is not Equality.NOT_EQUAL:
                    kept.append(val)
                    if verdict is Equality.UNKNOWN:
                        doubtful[i].add(val)
            domains[i] = kept
        else:
            levels[max(position[v] for v in vs)].append(eq)
    for lv in levels:
        lv.sort(key=lambda e: len(e[0]) + len(e[1]))

    assignment: dict = {}
    count = 0

    def dfs(i, path_unknown):
        nonlocal count, unknown
        if i == len(order):
            if path_unknown:
                unknown = True
                return None
            return dict(assignment)
        var = order[i]
        for val in domains[i]:
            count += 1
            assignment[var] = val
            pu = path_unknown or val in doubtful[i]
            ok = True
            for eq in levels[i]:
                verdict = ev.equal(system.substitute(eq[0], assignment), system.substitute(eq[1], assignment))
                if verdict is Equality.NOT_EQUAL:
                    ok = False
                    break
                pu = pu or verdict is Equality.UNKNOWN
            if ok:
                found = dfs(i + 1, pu)
                if found is not None:
                    return found
        assignment.pop(var, None)
        return None

    if unknown:
        # a constant equation was undecided: any witness would still be doubtful
        witness = dfs(0, True)
    else:
        witness = dfs(0, False)
    return witness, unknown, count, ev


def _search_naive(system: MonoidEqSystem, monoid: Monoid, values: tuple, max_calls: int | None):
    ev = _Evaluator(monoid, memo=False, max_calls=max_calls)
    order = system.variables
    unknown = False
    count = 0
    idx = [0] * len(order)
    n = len(values)
    if n == 0 and order:
        return None, False, 0, ev, False
    while True:
        count += 1
        assignment = {v: values[idx[k]] for k, v in enumerate(order)}
        all_equal = True
        for lhs, rhs in system.equations:
            if ev.exhausted:
                return None, unknown, count, ev, True
            verdict = ev.equal(system.substitute(lhs, assignment), system.substitute(rhs, assignment))
            if verdict is Equality.NOT_EQUAL:
                all_equal = False
                break
            if verdict is Equality.UNKNOWN:
                all_equal = False
                unknown = True
        if all_equal:
            return assignment, unknown, count, ev, False
        k = len(order) - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] < n:
                break
            idx[k] = 0
            k -= 1
        if k < 0:
            return None, unknown, count, ev, False


def _worker(args):
    presentation, system, values, chunk, scan = args
    monoid = Monoid(presentation, scan=scan)
    witness, unknown, count, ev = _search_pruned(system, monoid, values, chunk)
    return witness, unknown, count, ev.calls, ev.hits


def solve(system: MonoidEqSystem, monoid: Monoid, radius: int, strategy: str = "prune",
          jobs: int = 1, max_oracle_calls: int | None = None, ball: Ball | None = None) -> SolverResult:
    if strategy not in ("prune", "naive"):
        raise ValueError("strategy must be 'prune' or 'naive'")
    if system.base != monoid.presentation:
        raise ValueError("system and monoid use different presentations")
    start = time.perf_counter()
    if ball is None or ball.radius != radius:
        ball = reduced_ball(monoid, radius)
    values = ball.words
    stats = {"radius": radius, "ball_size": len(values), "ball_degraded": ball.degraded,
             "strategy": strategy, "jobs": jobs}
    capped = False
    if strategy == "naive":
        witness, unknown, count, ev, capped = _search_naive(system, monoid, values, max_oracle_calls)
        calls, hits = ev.calls, ev.hits
    elif jobs <= 1 or not system.variables:
        witness, unknown, count, ev = _search_pruned(system, monoid, values)
        calls, hits = ev.calls, ev.hits
    else:
        n = len(values)
        size = -(-n // jobs)
        chunks = [(i, min(n, i + size)) for i in range(0, n, size)]
        args = [(monoid.presentation, system, values, c, monoid.scan) for c in chunks]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_worker, args))
        witness, unknown, count, calls, hits = None, False, 0, 0, 0
        for w, u, c, k, h in parts:
            count += c
            calls += k
            hits += h
            unknown |= u
            if witness is None and w is not None:
                witness = w  # chunks are contiguous, so the first hit is shortlex-least
    stats.update(assignments=count, oracle_calls=calls, memo_hits=hits, capped=capped)
    if witness is not None:
        _verify(system, monoid, witness)
        status = Status.SAT
    elif unknown or capped:
        status = Status.UNKNOWN
    else:
        status = Status.UNSAT_WITHIN_BOUND
    stats["wall_time"] = round(time.perf_counter() - start, 6)
    return SolverResult(status, witness, stats)


def _verify(system: MonoidEqSystem, monoid: Monoid, witness: dict):
    for lhs, rhs in system.equations:
        verdict = monoid.equal(system.substitute(lhs, witness), system.substitute(rhs, witness))
        if verdict is not Equality.EQUAL:
            raise AssertionError(f"witness fails {lhs} = {rhs}: {verdict.value}")
