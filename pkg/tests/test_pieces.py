import pytest
from hypothesis import given, settings, strategies as st

from orm.pieces import (check_conditions, conditions_for, invertible_closure, minimal_pieces,
                       structure_report, units_presentation)
from orm.words import Alphabet, SpecialPresentation, is_prefix_code, is_subword


def pres(gens, rel):
    return SpecialPresentation.from_strings(gens, rel)


def strs(words):
    return ["".join(w) for w in words]


def test_closure_of_abcdcdabab():
    c = {"".join(w) for w in invertible_closure(tuple("abcdcdabab"))}
    assert {"abcdcdabab", "ab", "cdcdabab", "abcdcdab", "cdcdab", "abcdcd", "cd"} <= c


def test_closure_without_overlaps():
    assert invertible_closure(tuple("bbc")) == {tuple("bbc")}


@pytest.mark.parametrize("gens,rel,pieces,delta", [
    ("abcd", "abcdcdabab", ["ab", "cd", "cd", "ab", "ab"], ["ab", "cd"]),
    ("abc", "abacab", ["ab", "ac", "ab"], ["ab", "ac"]),
    ("ab", "ab", ["ab"], ["ab"]),
    ("ab", "ababbabaabbababb", ["ababb", "abaabb", "ababb"], ["ababb", "abaabb"]),
])
def test_minimal_pieces(gens, rel, pieces, delta):
    d = minimal_pieces(pres(gens, rel))
    assert strs(d.pieces) == pieces
    assert strs(d.delta) == delta


def test_aab_abb_family_collapses_to_letters():
    # aab and abb overlap in ab, which makes both letters invertible
    d = minimal_pieces(pres("ab", "aababbaab"))
    assert strs(d.delta) == ["a", "b"]
    assert not check_conditions(d).c2


def test_phi_names_follow_shortlex():
    d = minimal_pieces(pres("abcd", "abcdcdabab"))
    assert d.phi == {tuple("ab"): "p", tuple("cd"): "q"}
    assert units_presentation(d).render() == "< p,q | pqqpp = 1 >"
    assert units_presentation(minimal_pieces(pres("abc", "abacab"))).render() == "< p,q | pqp = 1 >"
    assert units_presentation(minimal_pieces(pres("ab", "ab"))).render() == "< p | p = 1 >"


def test_condition_reports():
    abc, ab = Alphabet(("a", "b", "c")), Alphabet(("a", "b"))
    r = conditions_for({tuple("ab"), tuple("ac")}, abc)
    assert (r.c1, r.c2, r.c3, r.chosen_a, r.m) == (True, True, True, "a", 1)
    r = conditions_for({tuple("aab"), tuple("abb")}, ab)
    assert (r.c1, r.c2, r.c3, r.chosen_a, r.m) == (True, True, False, "a", 2)
    r = conditions_for({tuple("ab")}, ab)
    assert r.c2_witnesses == () and not r.c2
    assert not conditions_for({tuple("ab"), tuple("cd")}, Alphabet(tuple("abcd"))).c2


def test_structure_reports():
    s = structure_report(pres("abc", "abacab" * 2), minimal_pieces(pres("abc", "abacab" * 2)))
    assert (s.torsion_exponent, "".join(s.torsion_root), s.hyperbolic_units_flag) == (2, "abacab", True)
    p = pres("abcd", "aba")
    s = structure_report(p, minimal_pieces(p))
    assert s.all_letters_invertible and set(s.free_product_complement) == {"c", "d"}
    assert units_presentation(minimal_pieces(p)).render() == "< p,q | pqp = 1 >"
    p = pres("abc", "abc")
    assert structure_report(p, minimal_pieces(p)).torsion_exponent == 1


def test_piece_certificate(abacab):
    assert abacab.certify_pieces().status == "CERTIFIED"


relators = st.lists(st.sampled_from("abc"), min_size=1, max_size=9).map(tuple)


@settings(max_examples=150, deadline=None)
@given(relators)
def test_piece_invariants(rel):
    d = minimal_pieces(SpecialPresentation(Alphabet(("a", "b", "c")), rel))
    assert tuple(x for p in d.pieces for x in p) == rel
    assert is_prefix_code(d.delta)
    for piece in d.delta:
        assert piece in d.closure
        assert not any(piece[:k] in d.closure for k in range(1, len(piece)))
    s = structure_report(d.presentation, d)
    assert s.all_letters_invertible == (max(len(p) for p in d.delta) == 1)


@settings(max_examples=100, deadline=None)
@given(st.sets(st.lists(st.sampled_from("ab"), min_size=1, max_size=4).map(tuple), min_size=1, max_size=4))
def test_condition_definitions(delta):
    r = conditions_for(delta, Alphabet(("a", "b")))
    assert r.c1 == (not any(u != v and is_subword(u, v) for u in delta for v in delta))
    for letter, g, h in r.c2_witnesses:
        assert g != h and g[0] == h[0] == letter
