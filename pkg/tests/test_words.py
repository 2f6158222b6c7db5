import pytest
from hypothesis import given, strategies as st

from orm.words import (Alphabet, Ordering, ParseError, SpecialPresentation, parse_presentation,
                       prefix_code_factor, primitive_root, shortlex_compare)

AB = Alphabet(("a", "b"))
ABC = Alphabet(("a", "b", "c"))
words_ab = st.lists(st.sampled_from("ab"), max_size=6).map(tuple)


def w(s):
    return tuple(s)


@pytest.mark.parametrize("u,v,expected", [
    ("b", "aa", Ordering.LT),
    ("ab", "ba", Ordering.LT),
    ("", "a", Ordering.LT),
    ("ba", "ab", Ordering.GT),
])
def test_shortlex_examples(u, v, expected):
    assert shortlex_compare(w(u), w(v), AB) is expected


def test_shortlex_equal():
    assert shortlex_compare(w("abc"), w("abc"), ABC) is Ordering.EQ


@given(words_ab, words_ab)
def test_shortlex_antisymmetric(u, v):
    a, b = shortlex_compare(u, v, AB), shortlex_compare(v, u, AB)
    assert a == -b
    assert (a is Ordering.EQ) == (u == v)


@given(words_ab, words_ab, words_ab)
def test_shortlex_transitive(u, v, x):
    if shortlex_compare(u, v, AB) <= 0 and shortlex_compare(v, x, AB) <= 0:
        assert shortlex_compare(u, x, AB) <= 0


DELTA = {w("ab"), w("cd")}


def test_factor_examples():
    assert prefix_code_factor(w("abcdab"), DELTA) == [w("ab"), w("cd"), w("ab")]
    assert prefix_code_factor(w("abc"), DELTA) is None
    assert prefix_code_factor((), DELTA) == []


def test_factor_rejects_non_prefix_code():
    with pytest.raises(ValueError):
        prefix_code_factor(w("ab"), {w("a"), w("ab")})


pieces = st.lists(st.sampled_from([w("ab"), w("cd")]), max_size=5)


@given(pieces, pieces)
def test_factor_is_a_monoid_morphism(xs, ys):
    u = tuple(c for p in xs for c in p)
    v = tuple(c for p in ys for c in p)
    assert prefix_code_factor(u, DELTA) == xs
    assert prefix_code_factor(u + v, DELTA) == prefix_code_factor(u, DELTA) + prefix_code_factor(v, DELTA)


def test_parse_presentation():
    p = parse_presentation("< a,b,c,d | abcdcdabab = 1 >")
    assert p.alphabet.symbols == ("a", "b", "c", "d")
    assert p.relator == w("abcdcdabab")
    bic = parse_presentation("<a,b|ab=1>")
    assert bic.relator == w("ab")


def test_parse_multichar_symbols():
    p = parse_presentation("< x1, x2 | x1.x2.x1 = 1 >")
    assert p.relator == ("x1", "x2", "x1")
    assert p.render() == "< x1,x2 | x1.x2.x1 = 1 >"


@pytest.mark.parametrize("text", ["< a | | 1 >", "< a | b = 1 >", "< a | a = a >", "< a,a | a = 1 >",
                                  "< a | = 1 >", "< a | a = 1", "< 1 | a = 1 >"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_presentation(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_presentation("< a,b |\n  abx = 1 >")
    assert (info.value.line, info.value.column) == (2, 5)


@given(st.lists(st.sampled_from("abc"), min_size=1, max_size=8))
def test_presentation_round_trip(rel):
    p = SpecialPresentation(ABC, tuple(rel))
    assert parse_presentation(p.render()) == p


def test_empty_word_renders_as_one():
    assert AB.render(()) == "1"
    assert AB.parse_word("1") == ()


def test_primitive_root():
    assert primitive_root(w("abacababacab")) == (w("abacab"), 2)
    assert primitive_root(w("abc")) == (w("abc"), 1)
