import pytest
from hypothesis import given, strategies as st

from terndescent.errors import InvalidPositionError, ParseError
from terndescent.terms import (
    App,
    Elem,
    Var,
    format_term,
    match,
    parse_term,
    positions,
    replace_at,
    size,
    substitute,
    subterm_at,
    unify,
    variables_of,
)


def T(text):
    return parse_term(text)


class TestSubtermAndReplace:
    def test_subterm_child(self):
        assert subterm_at(T("(q x y (t x y z))"), (3,)) == T("(t x y z)")

    def test_subterm_root(self):
        assert subterm_at(T("(t 0 x y)"), ()) == T("(t 0 x y)")

    def test_subterm_nested(self):
        assert subterm_at(T("(q x y (t x y z))"), (3, 2)) == Var("y")

    def test_subterm_invalid(self):
        with pytest.raises(InvalidPositionError):
            subterm_at(T("(t 0 x y)"), (4,))
        with pytest.raises(InvalidPositionError):
            subterm_at(Var("x"), (1,))

    def test_replace_child(self):
        assert replace_at(T("(q x y (t x y z))"), (3,), Var("z")) == T("(q x y z)")

    def test_replace_root(self):
        assert replace_at(T("(t 0 x y)"), (), T("0")) == T("0")

    def test_replace_nested(self):
        assert replace_at(T("(t 1 x 0)"), (2,), T("(q a b c)")) == T("(t 1 (q a b c) 0)")

    def test_replace_leaves_input_alone(self):
        term = T("(t 0 x y)")
        replace_at(term, (1,), Var("v"))
        assert term == T("(t 0 x y)")


class TestVariables:
    def test_simple(self):
        assert variables_of(T("(t x 1 0)")) == {"x"}

    def test_constant(self):
        assert variables_of(T("0")) == set()

    def test_nested(self):
        assert variables_of(T("(q 1 (t 1 x y) x)")) == {"x", "y"}


class TestMatch:
    def test_basic(self):
        binding = match(T("(t 0 x y)"), T("(t 0 a (q a b 0))"))
        assert binding == {"x": Var("a"), "y": T("(q a b 0)")}

    def test_nonlinear_clash(self):
        assert match(T("(q 1 x x)"), T("(q 1 a b)")) is None

    def test_nonlinear_equal(self):
        binding = match(T("(q 1 x x)"), T("(q 1 (t a b 0) (t a b 0))"))
        assert binding == {"x": T("(t a b 0)")}

    def test_ground_leaves(self):
        assert match(T("(t 0 x y)"), T("(t 1 a b)")) is None
        assert match(Elem("B", "0"), Elem("B", "0")) == {}
        assert match(Elem("B", "0"), Elem("1", "0")) is None


class TestUnify:
    def test_basic(self):
        a, b = T("(t 0 x y)"), T("(t z 1 w)")
        sigma = unify(a, b)
        assert sigma is not None
        assert substitute(a, sigma) == substitute(b, sigma)
        assert sigma["z"] == App("0")
        assert sigma["x"] == App("1")

    def test_symbol_clash(self):
        assert unify(T("(t x y z)"), T("(q x y z)")) is None

    def test_occurs_check(self):
        assert unify(Var("x"), T("(t 1 x 0)")) is None

    def test_deep_sharing(self):
        sigma = unify(T("(t x x y)"), T("(t (q a b c) z w)"))
        assert sigma is not None
        assert substitute(T("(t x x y)"), sigma) == substitute(T("(t (q a b c) z w)"), sigma)


# hypothesis strategies for rule-level terms

_names = st.sampled_from(["x", "y", "z", "w", "u"])
_leaves = st.one_of(_names.map(Var), st.sampled_from([App("0"), App("1")]))
_terms = st.recursive(
    _leaves,
    lambda sub: st.builds(
        lambda s, a, b, c: App(s, (a, b, c)), st.sampled_from(["t", "q"]), sub, sub, sub
    ),
    max_leaves=15,
)


@given(_terms, _terms)
def test_unify_round_trip(a, b):
    sigma = unify(a, b)
    if sigma is not None:
        joined = substitute(a, sigma)
        assert joined == substitute(b, sigma)
        # idempotent: applying again changes nothing
        assert substitute(joined, sigma) == joined


@given(_terms, st.dictionaries(st.sampled_from(["x", "y", "z", "w", "u"]), _terms, max_size=5))
def test_match_round_trip(pattern, assignment):
    subject = substitute(pattern, assignment)
    binding = match(pattern, subject)
    assert binding is not None
    assert substitute(pattern, binding) == subject


@given(_terms)
def test_parse_format_round_trip(term):
    assert parse_term(format_term(term)) == term


@given(_terms)
def test_positions_consistent(term):
    for pos, sub in positions(term):
        assert subterm_at(term, pos) == sub
    assert size(term) == sum(1 for _ in positions(term))


class TestParsing:
    def test_tagged_atoms(self):
        assert parse_term("e@1") == Elem("1", "e")
        assert parse_term("0@B") == Elem("B", "0")
        assert parse_term("(t e@1 0@B x)") == App("t", (Elem("1", "e"), Elem("B", "0"), Var("x")))

    def test_arity_errors(self):
        with pytest.raises(ParseError):
            parse_term("(t x y)")
        with pytest.raises(ParseError):
            parse_term("(f x y z)")
        with pytest.raises(ParseError):
            parse_term("(t x y z w)")

    def test_malformed(self):
        with pytest.raises(ParseError):
            parse_term("")
        with pytest.raises(ParseError):
            parse_term("(t x y z")
        with pytest.raises(ParseError):
            parse_term("t x")
        with pytest.raises(ParseError):
            parse_term("(0)X")

    def test_variable_names(self):
        with pytest.raises(ParseError):
            parse_term("X")  # uppercase is reserved against typos
        assert parse_term("abc") == Var("abc")
