import pytest

from hypersat.errors import EmptyWord, NotPrenex, NotStrictlyIncreasing, ParseError
from hypersat.fo import (
    FForall, FLe, FNot, FOr, NONAFFINE_STRETCHES, affine_stretch,
    encode_word, encode_word_n, eval_fo, fo_to_hyperltl, parse_fo, print_fo,
)
from hypersat.formula import And, Atom, Eventually, Exists, Forall, Or, classify_prenex
from hypersat.syntax import parse_formula, print_formula
from hypersat.traces import UPTrace, eval_hyperltl

from corpus import FO_POOL, FO_POOL_TEXT, STRETCHES, corpus_words
from oracles import brute_hyperltl

A, B, E = frozenset("a"), frozenset("b"), frozenset()


def test_eval_fo_examples():
    assert eval_fo(parse_fo("exists x. a(x)"), (A,))
    assert not eval_fo(parse_fo("forall x. a(x)"), (E, A))
    assert eval_fo(parse_fo("exists x. exists y. a(x) & b(y) & x <= y"), (A, B))


def test_eval_fo_by_valuation_enumeration():
    f = parse_fo("exists x. exists y. a(x) & b(y) & x <= y")
    for w in corpus_words():
        want = any("a" in w[i] and "b" in w[j] and i <= j
                   for i in range(len(w)) for j in range(len(w)))
        assert eval_fo(f, w) == want


def test_quantifying_over_the_empty_word_is_refused():
    with pytest.raises(EmptyWord):
        eval_fo(parse_fo("exists x. a(x)"), ())


def test_parse_fo_structure_and_strict_order_sugar():
    f = parse_fo("forall x. forall y. x <= y | y <= x")
    assert f == FForall("x", FForall("y", FOr(FLe("x", "y"), FLe("y", "x"))))
    assert parse_fo("exists x. exists y. x < y").body.body == FNot(FLe("y", "x"))


@pytest.mark.parametrize("text", FO_POOL_TEXT)
def test_print_fo_round_trips(text):
    f = parse_fo(text)
    assert parse_fo(print_fo(f)) == f


def test_parse_fo_errors():
    with pytest.raises(ParseError):
        parse_fo("exists x a(x)")


# ------------------------------------------------------------------ encodings

def test_encoding_of_two_letter_word():
    T = encode_word((A, E), lambda n: n + 1)
    assert set(T.traces) == {
        UPTrace((A, frozenset("o")), (E,)),
        UPTrace((E, E, frozenset("o")), (E,)),
    }


def test_uniform_gap_encoding_is_affine_stretch():
    w = (A, B, A)
    assert encode_word_n(w, 3) == encode_word(w, lambda n: 3 * (n + 1))


def test_repeated_letters_still_give_distinct_traces():
    assert len(encode_word((A, A, A), lambda n: n + 1)) == 3


def test_stretch_must_be_positive_and_increasing():
    with pytest.raises(NotStrictlyIncreasing):
        encode_word((A, A), lambda n: 0)
    with pytest.raises(NotStrictlyIncreasing):
        encode_word((A, A), lambda n: 5 - n)


def test_stretch_names():
    assert [s.name for s in STRETCHES] == ["1(n+1)", "2(n+1)", "3(n+1)"]
    assert affine_stretch(2, 1)(3) == 9
    assert [s(3) for s in NONAFFINE_STRETCHES] == [10, 8]


# ------------------------------------------------------------------ translation

def test_translation_of_atom():
    assert fo_to_hyperltl(parse_fo("exists x. a(x)")) == Exists("x", Atom("a", "x"))


def test_translation_of_order():
    g = fo_to_hyperltl(parse_fo("forall x. forall y. x <= y | y <= x"))
    le = lambda u, v: Eventually(And(Atom("o", u), Eventually(Atom("o", v))))
    assert g == Forall("x", Forall("y", Or(le("x", "y"), le("y", "x"))))


def test_translation_needs_prenex():
    with pytest.raises(NotPrenex):
        fo_to_hyperltl(parse_fo("(exists x. a(x)) & exists y. b(y)"))


@pytest.mark.parametrize("k", range(len(FO_POOL)))
def test_translation_agrees_with_fo_semantics(k):
    f = FO_POOL[k]
    g = fo_to_hyperltl(f)
    assert classify_prenex(g)
    for w in corpus_words()[:20]:
        T = encode_word(w, STRETCHES[0])
        assert eval_fo(f, w) == eval_hyperltl(g, T) == brute_hyperltl(g, T.traces)


def test_translations_reparse():
    for f in FO_POOL:
        g = fo_to_hyperltl(f)
        assert parse_formula(print_formula(g), "hyperltl") == g
