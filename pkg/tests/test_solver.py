import pytest
from hypothesis import given, settings, strategies as st

from orm import corpus
from orm.monoid import Monoid
from orm.solver import reduced_ball, solve
from orm.welc import Status, parse_eq_system
from orm.words import SpecialPresentation


def w(s):
    return tuple(s)


def system(m, text):
    return parse_eq_system(text, m.presentation)


def test_ball_examples(bicyclic):
    assert set(reduced_ball(bicyclic, 2).words) == {(), w("a"), w("b"), w("aa"), w("ba"), w("bb")}
    assert reduced_ball(bicyclic, 0).words == ((),)
    free = Monoid(SpecialPresentation.from_strings("abc", "ccc"))
    assert set(reduced_ball(free, 1).words) == {(), w("a"), w("b"), w("c")}
    with pytest.raises(ValueError):
        reduced_ball(bicyclic, -1)


def test_ball_is_shortlex_sorted(abacab):
    b = reduced_ball(abacab, 4)
    keys = [abacab.alphabet.key(x) for x in b.words]
    assert keys == sorted(keys) and not b.degraded


def test_solve_examples(bicyclic, abacab):
    r = solve(system(bicyclic, "vars: x\neq: x ab = x"), bicyclic, 3)
    assert r.status is Status.SAT and r.witness == {"x": ()}
    r = solve(system(abacab, "vars: x\neq: a x = 1"), abacab, 5)
    assert r.status is Status.SAT and r.witness == {"x": w("babac")}
    for radius in range(5):
        r = solve(system(bicyclic, "vars: x\neq: x a = 1"), bicyclic, radius)
        assert r.status is Status.UNSAT_WITHIN_BOUND


def test_strategies_agree_and_prune_saves_calls(abacab):
    s = system(abacab, "vars: x y\neq: a x = 1\neq: x y = y x\neq: y a = a y")
    fast = solve(s, abacab, 5)
    slow = solve(s, Monoid(abacab.presentation), 5, strategy="naive")
    assert fast.status is slow.status is Status.SAT
    assert fast.witness == slow.witness
    assert fast.stats["oracle_calls"] < slow.stats["oracle_calls"]


def test_naive_cap_gives_unknown(abacab):
    s = system(abacab, "vars: x\neq: x a = 1")
    r = solve(s, Monoid(abacab.presentation), 4, strategy="naive", max_oracle_calls=5)
    assert r.status is Status.UNKNOWN and r.stats["capped"]


def test_parallel_matches_serial(abacab):
    s = system(abacab, "vars: x y\neq: a x = 1\neq: y x = x y")
    serial = solve(s, abacab, 5)
    parallel = solve(s, abacab, 5, jobs=3)
    assert parallel.status is serial.status and parallel.witness == serial.witness


def test_bad_arguments(abacab, bicyclic):
    s = system(abacab, "vars: x\neq: a x = 1")
    with pytest.raises(ValueError):
        solve(s, abacab, 2, strategy="fast")
    with pytest.raises(ValueError):
        solve(s, bicyclic, 2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["a x = 1", "x a = a x", "x b = b x", "x x = 1", "a x b = 1", "x c = c x"]),
       st.integers(0, 4))
def test_monotone_in_radius(eq, radius):
    m = Monoid(corpus.presentation("abacab"))
    s = parse_eq_system(f"vars: x\neq: {eq}", m.presentation)
    r1 = solve(s, m, radius)
    r2 = solve(s, m, radius + 1)
    naive = solve(s, m, radius, strategy="naive")
    assert naive.status is r1.status
    if r1.status is Status.SAT:
        assert r2.status is Status.SAT and r2.witness == r1.witness
