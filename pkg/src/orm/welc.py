"""Word equations with (weighted) length constraints, and their compilation
into systems of equations over a special one-relator monoid.

Text format, one directive per line (``;`` also separates directives)::

    vars: X Y
    gens: d1 d2
    weights: 1 1          # optional, defaults to all ones
    eq: X d1 = d2 X
    len: X <= d2 d2

A side is a whitespace-separated sequence of declared names, or ``1``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Sequence

from .inverses import WeightedSignature, factor_over_basis
from .words import ParseError, SpecialPresentation, Word


class Status(str, Enum):
    SAT = "SAT"
    UNSAT_WITHIN_BOUND = "UNSAT_WITHIN_BOUND"
    UNKNOWN = "UNKNOWN"


@dataclass
class SolverResult:
    status: Status
    witness: dict | None = None
    stats: dict = field(default_factory=dict)

    def to_json(self, render=None) -> dict:
        render = render or (lambda w: " ".join(w) if w else "1")
        witness = None if self.witness is None else {k: render(v) for k, v in self.witness.items()}
        return {"status": self.status.value, "witness": witness, "stats": self.stats}


class CompileError(ValueError):
    pass


# -- WELC systems ------------------------------------------------------------------

@dataclass(frozen=True)
class WelcSystem:
    variables: tuple
    generators: tuple
    equations: tuple = ()       # (lhs, rhs) over variables and generators
    constraints: tuple = ()     # (u, v): |u|_w <= |v|_w
    weights: tuple | None = None  # None means unit weights

    def __post_init__(self):
        if not self.generators:
            raise ValueError("at least one generator is required")
        names = self.variables + self.generators
        if len(set(names)) != len(names):
            raise ValueError("variable and generator names must be distinct")
        if self.weights is not None:
            if len(self.weights) != len(self.generators):
                raise ValueError(f"{len(self.weights)} weights given for {len(self.generators)} generators")
            if any(w < 1 for w in self.weights):
                raise ValueError("weights must be positive")
        known = set(names)
        for side in itertools.chain.from_iterable(self.equations + self.constraints):
            for s in side:
                if s not in known:
                    raise ValueError(f"undeclared symbol {s!r}")

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def weight_vector(self) -> tuple:
        return self.weights if self.weights is not None else (1,) * self.rank

    def weighted_length(self, word: Sequence[str]) -> int:
        w = dict(zip(self.generators, self.weight_vector))
        return sum(w[s] for s in word)

    def substitute(self, side: Sequence[str], assignment: dict) -> Word:
        out: list = []
        for s in side:
            out.extend(assignment[s] if s in assignment else (s,))
        return tuple(out)

    def satisfied_by(self, assignment: dict) -> bool:
        for lhs, rhs in self.equations:
            if self.substitute(lhs, assignment) != self.substitute(rhs, assignment):
                return False
        for u, v in self.constraints:
            if self.weighted_length(self.substitute(u, assignment)) > \
                    self.weighted_length(self.substitute(v, assignment)):
                return False
        return True

    def render(self) -> str:
        lines = [f"vars: {' '.join(self.variables)}".rstrip(), f"gens: {' '.join(self.generators)}"]
        if self.weights is not None:
            lines.append("weights: " + " ".join(map(str, self.weights)))
        lines += [f"eq: {_side(l)} = {_side(r)}" for l, r in self.equations]
        lines += [f"len: {_side(u)} <= {_side(v)}" for u, v in self.constraints]
        return "\n".join(lines) + "\n"


def _side(side: Sequence[str]) -> str:
    return " ".join(side) if side else "1"


def _directives(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        col = 1
        for part in line.split(";"):
            stripped = part.strip()
            if stripped:
                yield lineno, col + (len(part) - len(part.lstrip())), stripped
            col += len(part) + 1


def _parse_side(text: str, known: set, lineno: int, col: int) -> Word:
    tokens = text.split()
    if tokens == ["1"]:
        return ()
    if not tokens:
        raise ParseError("empty side (use 1 for the empty word)", lineno, col)
    for t in tokens:
        if t not in known:
            raise ParseError(f"undeclared symbol {t!r}", lineno, col + text.find(t))
    return tuple(tokens)


def parse_welc(text: str) -> WelcSystem:
    variables: list = []
    generators: list = []
    weights = None
    equations, constraints = [], []
    pending = []
    for lineno, col, item in _directives(text):
        head, sep, body = item.partition(":")
        head = head.strip()
        if not sep:
            raise ParseError(f"expected 'directive: ...', got {item!r}", lineno, col)
        body_col = col + len(head) + 1 + (len(body) - len(body.lstrip()))
        body = body.strip()
        if head == "vars":
            variables += body.split()
        elif head == "gens":
            generators += body.split()
        elif head == "weights":
            try:
                weights = tuple(int(x) for x in body.split())
            except ValueError:
                raise ParseError(f"weights must be integers: {body!r}", lineno, body_col) from None
        elif head in ("eq", "len"):
            pending.append((head, body, lineno, body_col))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)
    names = variables + generators
    for name in names:
        if name == "1" or names.count(name) > 1:
            raise ParseError(f"bad or duplicate name {name!r}")
    if not generators:
        raise ParseError("missing 'gens:' directive")
    if weights is not None and len(weights) != len(generators):
        raise ParseError(f"{len(weights)} weights given for {len(generators)} generators")
    known = set(names)
    for head, body, lineno, col in pending:
        op = "=" if head == "eq" else "<="
        if body.count(op) != 1 or (head == "eq" and "<=" in body):
            raise ParseError(f"expected exactly one {op!r} in {head} directive", lineno, col)
        left, right = body.split(op)
        lhs = _parse_side(left, known, lineno, col)
        rhs = _parse_side(right, known, lineno, col + len(left) + len(op))
        (equations if head == "eq" else constraints).append((lhs, rhs))
    try:
        return WelcSystem(tuple(variables), tuple(generators), tuple(equations), tuple(constraints), weights)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- equations over M -----------------------------------------------------------------

@dataclass(frozen=True)
class MonoidEqSystem:
    base: SpecialPresentation
    variables: tuple
    equations: tuple            # (lhs, rhs), tokens are variables or A-letters

    def __post_init__(self):
        clash = set(self.variables) & set(self.base.alphabet)
        if clash:
            raise ValueError(f"variable names clash with monoid letters: {sorted(clash)}")
        known = set(self.variables) | set(self.base.alphabet)
        for side in itertools.chain.from_iterable(self.equations):
            for s in side:
                if s not in known:
                    raise ValueError(f"unknown symbol {s!r} in equation")

    def substitute(self, side: Sequence[str], assignment: dict) -> Word:
        out: list = []
        for s in side:
            out.extend(assignment[s] if s in assignment else (s,))
        return tuple(out)

    def render(self) -> str:
        alpha = self.base.alphabet
        var = set(self.variables)

        def side(seq):
            if not seq:
                return "1"
            chunks, letters = [], []
            for s in seq:
                if s in var:
                    if letters:
                        chunks.append(alpha.render(letters))
                        letters = []
                    chunks.append(s)
                else:
                    letters.append(s)
            if letters:
                chunks.append(alpha.render(letters))
            return " ".join(chunks)

        lines = [f"vars: {' '.join(self.variables)}".rstrip()]
        lines += [f"eq: {side(l)} = {side(r)}" for l, r in self.equations]
        return "\n".join(lines) + "\n"


def parse_eq_system(text: str, base: SpecialPresentation) -> MonoidEqSystem:
    variables: list = []
    equations = []
    pending = []
    for lineno, col, item in _directives(text):
        head, sep, body = item.partition(":")
        head = head.strip()
        if head == "vars" and sep:
            variables += body.split()
        elif head == "eq" and sep:
            pending.append((body, lineno, col))
        else:
            raise ParseError(f"expected 'vars:' or 'eq:', got {item!r}", lineno, col)
    var = set(variables)
    for body, lineno, col in pending:
        if body.count("=") != 1:
            raise ParseError("expected exactly one '=' in eq directive", lineno, col)
        sides = []
        for part in body.split("="):
            tokens = part.split()
            if tokens == ["1"]:
                sides.append(())
                continue
            if not tokens:
                raise ParseError("empty side (use 1 for the empty word)", lineno, col)
            seq: list = []
            for t in tokens:
                if t in var:
                    seq.append(t)
                else:
                    try:
                        seq.extend(base.alphabet.parse_word(t))
                    except ValueError as exc:
                        raise ParseError(str(exc), lineno, col) from None
            sides.append(tuple(seq))
        equations.append(tuple(sides))
    try:
        return MonoidEqSystem(base, tuple(variables), tuple(equations))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- compilation --------------------------------------------------------------------

@dataclass
class CompilationRecord:
    a: str
    generator_map: dict         # d_i -> basis word (tuple of letters)
    weights: tuple
    domain_gadgets: dict        # variable -> (fresh name, equation indices)
    constraint_gadgets: dict    # constraint index -> (fresh name, equation indices)
    equation_map: dict          # source equation index -> compiled index
    domain_exact: bool          # False when unused basis words exist

    def to_json(self, render=None) -> dict:
        render = render or "".join
        data = asdict(self)
        data["generator_map"] = {k: render(v) for k, v in self.generator_map.items()}
        data["weights"] = list(self.weights)
        data["domain_gadgets"] = {k: {"fresh": f, "equations": list(ix)}
                                  for k, (f, ix) in self.domain_gadgets.items()}
        data["constraint_gadgets"] = {str(k): {"fresh": f, "equations": list(ix)}
                                      for k, (f, ix) in self.constraint_gadgets.items()}
        data["equation_map"] = {str(k): v for k, v in self.equation_map.items()}
        return data

    def dumps(self, render=None) -> str:
        return json.dumps(self.to_json(render), indent=2, sort_keys=True)


def compile_welc(sys: WelcSystem, sig: WeightedSignature, base: SpecialPresentation):
    """Return (MonoidEqSystem, CompilationRecord)."""
    if sys.rank > sig.rank:
        raise CompileError(f"system has rank {sys.rank} but the monoid only interprets rank {sig.rank}")
    lam = tuple(sig.weights[:sys.rank])
    if sys.weight_vector != lam:
        raise CompileError(f"system weights {sys.weight_vector} differ from the monoid's {lam}")
    for name in sys.variables:
        if name in base.alphabet or name.startswith("__"):
            raise CompileError(f"variable name {name!r} clashes with a monoid letter or fresh name")
    a = sig.a
    gmap = dict(zip(sys.generators, sig.generators[:sys.rank]))

    def sub(side):
        out: list = []
        for s in side:
            out.extend(gmap[s] if s in gmap else (s,))
        return tuple(out)

    equations: list = []
    fresh_c, fresh_f = [], []
    constraint_gadgets, domain_gadgets, equation_map = {}, {}, {}
    for idx, (u, v) in enumerate(sys.constraints):
        t = f"__c_{idx}"
        fresh_c.append(t)
        u2, v2 = sub(u), sub(v)
        start = len(equations)
        equations += [((a, t), (t, a)),
                      ((a, t) + u2, (t,) + u2 + (a,)),
                      ((t,) + v2, ())]
        constraint_gadgets[idx] = (t, tuple(range(start, len(equations))))
    order = list(fresh_c)
    for x in sys.variables:
        y = f"__f_{x}"
        fresh_f.append(y)
        start = len(equations)
        equations += [((a, y), (y, a)), ((y, x), ())]
        domain_gadgets[x] = (y, (start, start + 1))
        order += [y, x]
    for idx, (lhs, rhs) in enumerate(sys.equations):
        equation_map[idx] = len(equations)
        equations.append((sub(lhs), sub(rhs)))
    compiled = MonoidEqSystem(base, tuple(order), tuple(equations))
    record = CompilationRecord(a, gmap, lam, domain_gadgets, constraint_gadgets, equation_map,
                               domain_exact=sys.rank == sig.rank)
    return compiled, record


class DecompileError(ValueError):
    pass


def decompile(witness: dict, record: CompilationRecord, sys: WelcSystem) -> dict:
    """Map an M-witness of the compiled system back to a WELC assignment."""
    inverse = {w: d for d, w in record.generator_map.items()}
    basis = list(inverse)
    out = {}
    for x in sys.variables:
        parts = factor_over_basis(witness[x], basis)
        if parts is None:
            raise DecompileError(f"value of {x} is not a product of the generator words")
        out[x] = tuple(inverse[p] for p in parts)
    return out


def brute_force_welc(sys: WelcSystem, bound: int) -> SolverResult:
    """Try all assignments of words of length <= bound over the generators."""
    values = [()]
    layer = [()]
    for _ in range(bound):
        layer = [w + (g,) for w in layer for g in sys.generators]
        values += layer
    tried = 0
    for combo in itertools.product(values, repeat=len(sys.variables)):
        tried += 1
        assignment = dict(zip(sys.variables, combo))
        if sys.satisfied_by(assignment):
            return SolverResult(Status.SAT, assignment, {"assignments": tried, "bound": bound})
    return SolverResult(Status.UNSAT_WITHIN_BOUND, None,
                        {"assignments": tried, "bound": bound, "exhaustive": not sys.variables})
