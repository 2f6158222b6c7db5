"""Minimal invertible pieces of a special one-relator presentation.

The relator is invertible, and if ``xy`` and ``yz`` are both invertible
then so are ``x``, ``y`` and ``z``.  Closing the relator under that overlap
rule and then factoring greedily gives the decomposition into minimal
invertible pieces for every presentation we have tried; a post-hoc check
against the units oracle is available in :mod:`orm.monoid`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .words import (
    Alphabet,
    SpecialPresentation,
    Word,
    is_prefix_code,
    is_subword,
    primitive_root,
)

UNIT_NAMES = "pqrstuvwxyz"


def unit_letter_names(count: int) -> list[str]:
    names = list(UNIT_NAMES[:count])
    i = 1
    while len(names) < count:
        names.extend(f"{ch}{i}" for ch in UNIT_NAMES[: count - len(names)])
        i += 1
    return names


def invertible_closure(relator: Word) -> set:
    """Least set containing the relator and closed under the overlap rule."""
    relator = tuple(relator)
    if not relator:
        raise ValueError("relator must be non-empty")
    return _close_union({relator})


def _overlaps(u: Word, v: Word):
    # u = alpha beta, v = beta gamma, beta non-empty
    for k in range(1, min(len(u), len(v)) + 1):
        if u[len(u) - k:] == v[:k]:
            yield u[:len(u) - k], v[:k], v[k:]


@dataclass(frozen=True)
class PieceDecomposition:
    presentation: SpecialPresentation
    pieces: tuple          # r = r_1 ... r_k
    delta: tuple           # distinct pieces, shortlex order
    phi: dict              # piece -> units letter
    units_alphabet: Alphabet
    closure: frozenset = field(repr=False, compare=False)

    @property
    def alphabet(self) -> Alphabet:
        return self.presentation.alphabet

    @property
    def phi_inverse(self) -> dict:
        return {b: d for d, b in self.phi.items()}

    def factor(self, w: Word) -> list | None:
        """Factorise ``w`` over the pieces, or None when w is not in Delta*."""
        delta = self._delta_set
        lengths = self._lengths
        out = []
        i = 0
        w = tuple(w)
        while i < len(w):
            for n in lengths:
                if w[i:i + n] in delta:
                    out.append(w[i:i + n])
                    i += n
                    break
            else:
                return None
        return out

    def phi_image(self, factors) -> Word:
        return tuple(self.phi[f] for f in factors)

    def __post_init__(self):
        object.__setattr__(self, "_delta_set", frozenset(self.delta))
        object.__setattr__(self, "_lengths", sorted({len(d) for d in self.delta}))


def minimal_pieces(p: SpecialPresentation) -> PieceDecomposition:
    key = p.alphabet.key
    closure = invertible_closure(p.relator)
    while True:
        pieces = _greedy_factor(p.relator, closure)
        grown = set(closure)
        for piece in set(pieces):
            grown |= invertible_closure(piece)
        if grown == closure:
            break
        closure = _close_union(grown)
    delta = tuple(sorted(set(pieces), key=key))
    if not is_prefix_code(delta):
        raise RuntimeError(f"pieces {delta} do not form a prefix code")
    names = unit_letter_names(len(delta))
    phi = dict(zip(delta, names))
    return PieceDecomposition(p, tuple(pieces), delta, phi, Alphabet(tuple(names)), frozenset(closure))


def _close_union(words: set) -> set:
    known = set(words)
    todo = list(known)
    while todo:
        u = todo.pop()
        for v in list(known):
            for x, y in ((u, v), (v, u)):
                for parts in _overlaps(x, y):
                    for piece in parts:
                        if piece and piece not in known:
                            known.add(piece)
                            todo.append(piece)
    return known


def _greedy_factor(relator: Word, closure: set) -> list:
    out = []
    i = 0
    while i < len(relator):
        for j in range(i + 1, len(relator) + 1):
            if relator[i:j] in closure:
                out.append(relator[i:j])
                i = j
                break
        else:
            # unreachable: the remaining suffix is always in the closure
            raise RuntimeError(f"no invertible prefix of {relator[i:]}")
    return out


@dataclass(frozen=True)
class ConditionReport:
    c1: bool
    c2_witnesses: tuple    # (letter, gamma, delta) per letter starting >= 2 pieces
    c3_by_witness: dict    # letter -> no piece starts with letter^2
    chosen_a: str | None
    m: int

    @property
    def c2(self) -> bool:
        return bool(self.c2_witnesses)

    @property
    def c3(self) -> bool:
        return self.chosen_a is not None and self.c3_by_witness[self.chosen_a]


def check_conditions(d: PieceDecomposition) -> ConditionReport:
    return conditions_for(d.delta, d.alphabet)


def conditions_for(delta, alphabet: Alphabet) -> ConditionReport:
    """Condition report for an arbitrary set of non-empty words."""
    key = alphabet.key
    delta = tuple(sorted({tuple(w) for w in delta}, key=key))
    if any(not w for w in delta):
        raise ValueError("pieces must be non-empty")
    c1 = not any(u != v and is_subword(u, v) for u in delta for v in delta)
    witnesses = []
    c3 = {}
    for letter in alphabet:
        starting = [w for w in delta if w[0] == letter]
        if len(starting) >= 2:
            witnesses.append((letter, starting[0], starting[1]))
            c3[letter] = not any(w[:2] == (letter, letter) for w in delta)
    chosen = witnesses[0][0] if witnesses else None
    m = 0
    if chosen is not None:
        for w in delta:
            j = 0
            while j < len(w) and w[j] == chosen:
                j += 1
            m = max(m, j)
    return ConditionReport(c1, tuple(witnesses), c3, chosen, m)


def units_presentation(d: PieceDecomposition) -> SpecialPresentation:
    return SpecialPresentation(d.units_alphabet, d.phi_image(d.pieces))


@dataclass(frozen=True)
class StructureReport:
    torsion_exponent: int
    torsion_root: Word
    all_letters_invertible: bool
    free_product_complement: tuple
    hyperbolic_units_flag: bool


def structure_report(p: SpecialPresentation, d: PieceDecomposition) -> StructureReport:
    root, k = primitive_root(p.relator)
    all_inv = max(len(w) for w in d.delta) == 1
    complement = ()
    if all_inv:
        used = set(p.relator)
        complement = tuple(s for s in p.alphabet if s not in used)
    return StructureReport(k, root, all_inv, complement, k >= 2)
