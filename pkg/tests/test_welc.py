import json

import pytest
from hypothesis import given, settings, strategies as st

from orm import corpus
from orm.inverses import weight
from orm.solver import solve
from orm.welc import (CompileError, Status, WelcSystem, brute_force_welc, compile_welc, decompile,
                      parse_eq_system, parse_welc)
from orm.words import ParseError


def test_parse_welc_one_line():
    s = parse_welc("vars: X; gens: d1 d2; eq: X d1 = d2 X; len: X <= d2 d2")
    assert s.variables == ("X",) and s.generators == ("d1", "d2")
    assert s.equations == ((("X", "d1"), ("d2", "X")),)
    assert s.constraints == ((("X",), ("d2", "d2")),)
    assert parse_welc(s.render()) == s


def test_parse_welc_variants():
    s = parse_welc("vars: X\ngens: d1 d2\neq: X = d1\n")
    assert s.constraints == ()
    s = parse_welc("vars: X\ngens: d1 d2\nweights: 1 1\nlen: d1 <= X  # comment\n")
    assert s.weight_vector == (1, 1) and len(s.constraints) == 1


@pytest.mark.parametrize("text", ["vars: X\neq: X = X", "gens: d1\neq: d1 = d9", "gens: d1\nfoo: bar",
                                  "gens: d1\nweights: x", "gens: d1 d2\nweights: 1", "gens: d1\neq: d1 d1",
                                  "gens: d1\neq: = d1", "vars: d1\ngens: d1"])
def test_parse_welc_errors(text):
    with pytest.raises(ParseError):
        parse_welc(text)


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        parse_welc("gens: d1\neq: d1 = d7")
    assert info.value.line == 2


def test_brute_force_examples():
    r = brute_force_welc(parse_welc("vars: X; gens: d1 d2; eq: X = d1; len: X <= d1"), 4)
    assert r.status is Status.SAT and r.witness == {"X": ("d1",)}
    r = brute_force_welc(parse_welc("vars: X; gens: d1 d2; eq: X d1 = d2 X"), 4)
    assert r.status is Status.UNSAT_WITHIN_BOUND
    r = brute_force_welc(parse_welc("gens: d1 d2; len: d1 d1 <= d1"), 4)
    assert r.status is Status.UNSAT_WITHIN_BOUND and r.stats["exhaustive"]


def test_constraint_gadget(abacab, abacab_table):
    s = parse_welc("gens: d1 d2; len: d1 <= d2")
    compiled, record = compile_welc(s, abacab_table.signature(), abacab.presentation)
    assert compiled.variables == ("__c_0",)
    assert compiled.render() == ("vars: __c_0\n"
                                 "eq: a __c_0 = __c_0 a\n"
                                 "eq: a __c_0 babac = __c_0 babaca\n"
                                 "eq: __c_0 cabab = 1\n")
    assert record.constraint_gadgets == {0: ("__c_0", (0, 1, 2))}
    res = solve(compiled, abacab, 3)
    assert res.status is Status.SAT and res.witness == {"__c_0": ("a",)}


def test_unsatisfiable_constraint(abacab, abacab_table):
    s = parse_welc("gens: d1 d2; len: d1 d1 <= d2")
    compiled, _ = compile_welc(s, abacab_table.signature(), abacab.presentation)
    assert solve(compiled, abacab, 5).status is Status.UNSAT_WITHIN_BOUND
    assert brute_force_welc(s, 4).status is Status.UNSAT_WITHIN_BOUND


def test_trivial_system(abacab, abacab_table):
    compiled, _ = compile_welc(parse_welc("gens: d1; eq: d1 = d1"), abacab_table.signature(), abacab.presentation)
    assert compiled.variables == ()
    assert solve(compiled, abacab, 0).status is Status.SAT


def test_domain_gadget_and_decompile(abacab, abacab_table):
    s = parse_welc("vars: X Y; gens: d1 d2; eq: X d2 = d2 Y; len: d1 <= X")
    compiled, record = compile_welc(s, abacab_table.signature(), abacab.presentation)
    assert compiled.variables == ("__c_0", "__f_X", "X", "__f_Y", "Y")
    assert record.weights == (1, 1)
    assert record.domain_exact
    # recorded weights are the weights of the basis words
    for d, word in record.generator_map.items():
        assert weight(word, abacab_table, abacab) == dict(zip(s.generators, record.weights))[d]
    res = solve(compiled, abacab, 6)
    assert res.status is Status.SAT
    back = decompile(res.witness, record, s)
    assert s.satisfied_by(back)
    # the length gadget's t is a^(weighted length of the right side)
    assert res.witness["__c_0"] == ("a",)
    json.loads(record.dumps(abacab.render))


def test_rank_and_weight_mismatch(abacab, abacab_table):
    sig = abacab_table.signature()
    with pytest.raises(CompileError):
        compile_welc(parse_welc("gens: d1 d2 d3"), sig, abacab.presentation)
    with pytest.raises(CompileError):
        compile_welc(parse_welc("gens: d1 d2; weights: 1 2"), sig, abacab.presentation)
    with pytest.raises(CompileError):
        compile_welc(parse_welc("vars: a; gens: d1 d2"), sig, abacab.presentation)
    _, record = compile_welc(parse_welc("gens: d1"), sig, abacab.presentation)
    assert not record.domain_exact


def test_eq_system_round_trip(abacab):
    text = "vars: x y\neq: a x = 1\neq: x bacab = y\n"
    s = parse_eq_system(text, abacab.presentation)
    assert s.equations[0] == (("a", "x"), ())
    assert parse_eq_system(s.render(), abacab.presentation) == s
    with pytest.raises(ParseError):
        parse_eq_system("vars: x\neq: x = z", abacab.presentation)


SUITE = corpus.welc_suite()


def test_suite_shape():
    assert len(SUITE) == 30
    assert sum(i.expect is Status.SAT for i in SUITE) >= 10
    assert sum(i.kind == "length" for i in SUITE) >= 10
    for inst in SUITE:
        assert len(inst.system.variables) <= 2
        for side in (x for eq in inst.system.equations + inst.system.constraints for x in eq):
            assert len(side) <= 3


@pytest.mark.parametrize("inst", SUITE, ids=[i.name for i in SUITE])
def test_suite_brute_force_matches_label(inst):
    assert brute_force_welc(inst.system, 4).status is inst.expect


systems = st.builds(
    lambda eq, cons: WelcSystem(("X",), ("d1", "d2"), eq, cons),
    st.lists(st.tuples(st.lists(st.sampled_from(["X", "d1", "d2"]), min_size=1, max_size=3).map(tuple),
                       st.lists(st.sampled_from(["X", "d1", "d2"]), min_size=1, max_size=3).map(tuple)),
             max_size=1).map(tuple),
    st.lists(st.tuples(st.lists(st.sampled_from(["X", "d1", "d2"]), min_size=1, max_size=2).map(tuple),
                       st.lists(st.sampled_from(["X", "d1", "d2"]), min_size=1, max_size=2).map(tuple)),
             max_size=1).map(tuple))


@settings(max_examples=25, deadline=None)
@given(systems)
def test_compiled_sat_witnesses_decompile(s):
    from orm.inverses import compute_basis, compute_X
    from orm.monoid import Monoid
    m = Monoid(corpus.presentation("abacab"))
    t = compute_basis(compute_X(m), m)
    compiled, record = compile_welc(s, t.signature(), m.presentation)
    res = solve(compiled, m, 5)
    brute = brute_force_welc(s, 1)
    if res.status is Status.SAT:
        assert s.satisfied_by(decompile(res.witness, record, s))
    if brute.status is Status.SAT and brute.witness["X"] and len(brute.witness["X"]) <= 1:
        assert res.status is Status.SAT
