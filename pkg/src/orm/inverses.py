"""Right inverses of powers of the letter ``a`` and the free monoid they generate.

For a letter ``a`` that starts two different pieces, every piece of the form
``a^j beta`` gives a reduced word ``beta eta`` (``eta`` the least Delta*-word
inverting the piece) with ``a^j beta eta = 1``.  These words generate a free
submonoid F; its basis and the weights ``j`` feed the WELC compiler.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .pieces import check_conditions
from .monoid import Equality, Monoid, Truth
from .srs import Confluence, FiniteSystem
from .words import Alphabet, Word


class PreconditionError(ValueError):
    pass


class InternalError(RuntimeError):
    pass


@dataclass(frozen=True)
class InverseEntry:
    j: int
    piece: Word
    beta: Word
    eta: Word
    x_word: Word
    certified: bool


@dataclass(frozen=True)
class WeightedSignature:
    a: str
    generators: tuple      # basis words, shortlex order
    weights: tuple

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def unit_weights(self) -> bool:
        return all(w == 1 for w in self.weights)


@dataclass
class InverseTable:
    a: str
    m: int
    entries: list
    basis: tuple = ()
    weights: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def x_words(self) -> tuple:
        return tuple(dict.fromkeys(e.x_word for e in self.entries))

    @property
    def certified(self) -> bool:
        return all(e.certified for e in self.entries)

    @property
    def sigma_a(self) -> tuple:
        """Right inverses of ``a`` itself, i.e. the weight-1 layer of X."""
        return tuple(dict.fromkeys(e.x_word for e in self.entries if e.j == 1))

    def signature(self) -> WeightedSignature:
        return WeightedSignature(self.a, self.basis, tuple(self.weights[b] for b in self.basis))


def eta_bound(monoid: Monoid) -> int:
    return 2 * len(monoid.pieces.pieces) * len(monoid.presentation.relator)


def compute_X(monoid: Monoid, a: str | None = None) -> InverseTable:
    report = check_conditions(monoid.pieces)
    if not report.c2:
        raise PreconditionError("no letter starts two distinct pieces")
    if a is None:
        a = report.chosen_a
    elif a not in report.c3_by_witness:
        raise PreconditionError(f"letter {a!r} does not start two distinct pieces")
    m = max(_a_run(d, a) for d in monoid.delta)
    key = monoid.alphabet.key
    bound = eta_bound(monoid)
    table = InverseTable(a, m, [])
    for j in range(1, m + 1):
        for piece in sorted(monoid.delta, key=key):
            if piece[:j] != (a,) * j:
                continue
            beta = piece[j:]
            eta, decided = monoid.inverse_in_delta(piece, bound)
            if eta is None:
                table.notes.append(f"no inverse of {monoid.render(piece)} within length {bound}")
                continue
            x = beta + eta
            red = monoid.reduce(x)
            ok = decided and red.certified and red.word == x
            ok = ok and monoid.equal((a,) * j + x, ()) is Equality.EQUAL
            table.entries.append(InverseEntry(j, piece, beta, eta, x, ok))
    return table


def _a_run(w: Word, a: str) -> int:
    n = 0
    while n < len(w) and w[n] == a:
        n += 1
    return n


def weight(w: Sequence[str], table: InverseTable, monoid: Monoid) -> int | None:
    """The unique i with a^i w = 1, 0 for the empty word, None if w is not in F.

    Raises LookupError if some comparison was undecided and no i was found.
    """
    w = tuple(w)
    if not w:
        return 0
    undecided = False
    for i in range(1, table.m * len(w) + 1):
        verdict = monoid.equal((table.a,) * i + w, ())
        if verdict is Equality.EQUAL:
            return i
        if verdict is Equality.UNKNOWN:
            undecided = True
    if undecided:
        raise LookupError(f"weight of {monoid.render(w)} undecided")
    return None


def compute_basis(table: InverseTable, monoid: Monoid) -> InverseTable:
    if not table.certified:
        raise PreconditionError("inverse table is not certified")
    xs = table.x_words
    basis = tuple(sorted((x for x in xs if not _is_product(x, xs)),
                         key=monoid.alphabet.key))
    if len(basis) < 2:
        raise InternalError(f"basis has rank {len(basis)}; expected at least 2")
    table.basis = basis
    table.weights = {}
    for b in basis:
        wt = weight(b, table, monoid)
        if wt is None:
            raise InternalError(f"basis word {monoid.render(b)} has no weight")
        table.weights[b] = wt
    return table


def _is_product(x: Word, xs: Sequence[Word]) -> bool:
    """Is x a concatenation of at least two words from xs?"""

    def rec(i, count):
        if i == len(x):
            return count >= 2
        for y in xs:
            if (i, y) != (0, x) and x[i:i + len(y)] == y and rec(i + len(y), count + 1):
                return True
        return False

    return rec(0, 0)


def factor_over_basis(w: Sequence[str], basis: Sequence[Word]) -> list | None:
    """Factorisation of w over the basis words, or None if w is not in basis*."""
    w = tuple(w)
    out: list = []

    def rec(i):
        if i == len(w):
            return True
        for b in basis:
            if w[i:i + len(b)] == b:
                out.append(b)
                if rec(i + len(b)):
                    return True
                out.pop()
        return False

    return out if rec(0) else None


@dataclass(frozen=True)
class PowerCheck:
    graphical: Truth
    equational: Truth

    @property
    def consistent(self) -> bool:
        if Truth.UNKNOWN in (self.graphical, self.equational):
            return True
        return self.graphical == self.equational


def is_power_of_a(u: Sequence[str], a: str, monoid: Monoid) -> PowerCheck:
    u = tuple(u)
    graphical = Truth.TRUE if all(s == a for s in u) else Truth.FALSE
    verdict = monoid.equal(u + (a,), (a,) + u)
    equational = {Equality.EQUAL: Truth.TRUE, Equality.NOT_EQUAL: Truth.FALSE}.get(verdict, Truth.UNKNOWN)
    check = PowerCheck(graphical, equational)
    if not check.consistent:
        raise InternalError(f"power-of-{a} tests disagree on {monoid.render(u)}")
    return check


# -- the bicyclic-type submonoid ----------------------------------------------

@dataclass
class BicyclicReport:
    a: str
    generators: dict           # d_i -> word over A
    system: FiniteSystem
    confluence: Confluence
    radius: int
    normal_forms: int = 0
    products: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.confluence is Confluence.CONFLUENT and not self.counterexamples


def bicyclic_normal_forms(a: str, ds: Sequence[str], radius: int) -> list:
    """Irreducible words of < a, d_i | a d_i = 1 >: alpha a^j with alpha over the d_i."""
    out = []
    for n in range(radius + 1):
        for k in range(n + 1):
            for alpha in itertools.product(ds, repeat=k):
                out.append(tuple(alpha) + (a,) * (n - k))
    return out


def n_bicyclic_view(table: InverseTable, monoid: Monoid, radius: int) -> BicyclicReport:
    report = check_conditions(monoid.pieces)
    if not (report.c1 and report.c2 and report.c3_by_witness.get(table.a, False)):
        raise PreconditionError("conditions C1-C3 must hold for the chosen letter")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    a = table.a
    gammas = table.sigma_a
    ds = [f"d{i + 1}" for i in range(len(gammas))]
    psi = dict(zip(ds, gammas))
    psi[a] = (a,)
    alphabet = Alphabet((a, *ds))
    system = FiniteSystem([((a, d), ()) for d in ds], alphabet.symbols)
    result = BicyclicReport(a, {d: psi[d] for d in ds}, system, system.confluence(), radius)

    def image(word):
        return tuple(itertools.chain.from_iterable(psi[s] for s in word))

    # forward: every normal form maps to a reduced word, injectively
    forms = bicyclic_normal_forms(a, ds, radius)
    seen: dict = {}
    for nf in forms:
        img = image(nf)
        red = monoid.reduce(img)
        if red.word != img or not red.certified:
            result.counterexamples.append(("image not reduced", nf, red.word))
        if img in seen:
            result.counterexamples.append(("not injective", nf, seen[img]))
        seen[img] = nf
    result.normal_forms = len(forms)

    # backward: reduced words gamma-word . a^j pull back to their normal form
    for n in range(radius + 1):
        for k in range(n + 1):
            for gs in itertools.product(gammas, repeat=k):
                word = tuple(itertools.chain.from_iterable(gs)) + (a,) * (n - k)
                red = monoid.reduce(word).word
                body = red[:len(red) - _a_tail(red, a)]
                parts = factor_over_basis(body, gammas)
                if parts is None:
                    result.counterexamples.append(("no preimage", word, red))
                    continue
                pre = tuple(ds[gammas.index(p)] for p in parts) + (a,) * _a_tail(red, a)
                if seen.get(red) != pre:
                    result.counterexamples.append(("not surjective", word, red))

    # homomorphism: psi(nf(xy)) = reduce(psi(x) psi(y))
    half = [f for f in forms if len(f) <= radius]
    for x in half:
        for y in half:
            if len(x) + len(y) > radius:
                continue
            lhs = image(system.rewrite(x + y))
            rhs = monoid.reduce(image(x) + image(y)).word
            result.products += 1
            if lhs != rhs:
                result.counterexamples.append(("not a homomorphism", (x, y), (lhs, rhs)))
    return result


def _a_tail(w: Word, a: str) -> int:
    n = 0
    while n < len(w) and w[len(w) - 1 - n] == a:
        n += 1
    return n
