import pytest
from hypothesis import given, strategies as st

from rarebit.errors import DomainError, PreconditionError
from rarebit.polynomials import IntPolynomial, eval_poly, normalize_nonnegative, translate, z_constant

X2 = IntPolynomial((0, 0, 1))


def test_eval_examples():
    assert eval_poly(X2, 7) == 49
    assert eval_poly(IntPolynomial((1, 2, 0, 1)), 3) == 34
    assert eval_poly(X2, 2**20 + 1) == 2**40 + 2**21 + 1


def test_eval_negative_is_domain_error():
    with pytest.raises(DomainError) as exc:
        eval_poly(IntPolynomial((-5, 0, 1)), 2)
    assert exc.value.n == 2


def test_parse_and_literal():
    P = IntPolynomial.parse("1,2,0,1")
    assert P.coeffs == (1, 2, 0, 1)
    assert P.degree == 3
    assert P.literal() == "1,2,0,1"
    assert str(P) == "X^3 + 2X + 1"
    assert IntPolynomial.parse("1,0,0").degree == 0


def test_translate_examples():
    assert translate(IntPolynomial((1, -3, 1)), 3) == IntPolynomial((1, 3, 1))
    assert translate(X2, 1) == IntPolynomial((1, 2, 1))
    P = IntPolynomial((4, -7, 0, 1))
    assert translate(P, 0) == P


coeff_lists = st.lists(st.integers(min_value=-50, max_value=50), min_size=1, max_size=6)


@given(coeff_lists, st.integers(min_value=0, max_value=10**6), st.integers(min_value=0, max_value=10**6))
def test_translate_matches_shifted_eval(cs, a, n):
    P = IntPolynomial(tuple(cs))
    assert translate(P, a).raw_eval(n) == P.raw_eval(n + a)


def test_normalize_examples():
    assert normalize_nonnegative(IntPolynomial((0, 1, 1))) == (0, IntPolynomial((0, 1, 1)))
    assert normalize_nonnegative(IntPolynomial((1, -3, 1))) == (3, IntPolynomial((1, 3, 1)))
    assert normalize_nonnegative(IntPolynomial((-1, 0, 1))) == (1, IntPolynomial((0, 2, 1)))


@given(st.lists(st.integers(min_value=-40, max_value=40), min_size=1, max_size=5))
def test_normalize_is_smallest_shift(cs):
    P = IntPolynomial(tuple(cs) + (1,))
    a, Q = normalize_nonnegative(P)
    assert Q.is_nonnegative
    assert Q == translate(P, a)
    for b in range(a):
        assert not translate(P, b).is_nonnegative
    for n in range(5):
        assert Q.raw_eval(n) == P.raw_eval(n + a)


def test_normalize_needs_monic():
    with pytest.raises(PreconditionError):
        normalize_nonnegative(IntPolynomial((0, 0, 2)))


def test_z_examples():
    assert z_constant(X2) == 2
    assert z_constant(IntPolynomial((0, 1, 1))) == 3
    assert z_constant(IntPolynomial((0, 2, 0, 1))) == 5


@given(st.lists(st.integers(min_value=0, max_value=30), min_size=2, max_size=6))
def test_z_at_least_degree(cs):
    P = IntPolynomial(tuple(cs) + (1,))
    assert z_constant(P) >= P.degree >= 2


@pytest.mark.parametrize("coeffs", [(0, 0, 2), (0, -1, 1), (0, 1)])
def test_z_preconditions(coeffs):
    with pytest.raises(PreconditionError):
        z_constant(IntPolynomial(coeffs))


def test_alpha_max_counts_leading():
    assert X2.alpha_max == 1
    assert IntPolynomial((1, 2, 0, 1)).alpha_max == 2
