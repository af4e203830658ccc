import random

import pytest

from config import DEFAULT_SEED
from errors import (
    DimensionMismatchError,
    ExponentOverflowError,
    FieldDivisionError,
    NotPrimeError,
    PolynomialSyntaxError,
    RingMismatchError,
    UnknownVariableError,
    ValidationError,
)
from polyring import (
    GREVLEX,
    LEX,
    PolynomialRing,
    PrimeField,
    RingPresentation,
    compare,
    elimination_order,
    field_inv,
    is_prime,
    parse_polynomial,
    parse_polynomial_list,
    power_exponent,
)


@pytest.mark.parametrize("n,expected", [
    (0, False), (1, False), (2, True), (3, True), (4, False),
    (6, False), (7919, True), (7917, False), (2**31 - 1, True), (561, False),
])
def test_is_prime(n, expected):
    assert is_prime(n) == expected


def test_prime_field_rejects_composite():
    with pytest.raises(NotPrimeError):
        PrimeField(6)


@pytest.mark.parametrize("a,p,inv", [(3, 7, 5), (1, 2, 1), (2, 3, 2), (-1, 5, 4)])
def test_field_inv(a, p, inv):
    assert field_inv(a, p) == inv
    assert a * field_inv(a, p) % p == 1


def test_field_inv_of_zero():
    with pytest.raises(FieldDivisionError):
        field_inv(0, 7)
    with pytest.raises(ZeroDivisionError):
        field_inv(14, 7)


def test_power_exponent():
    assert power_exponent(1, 3) == 0
    assert power_exponent(27, 3) == 3
    with pytest.raises(ValidationError):
        power_exponent(6, 2)


@pytest.fixture
def S():
    return PolynomialRing.create(3, ("x", "y", "z"))


def test_parse_reduces_coefficients(S):
    assert str(parse_polynomial("x*y - z^2", S)) == "x*y + 2*z^2"
    assert str(parse_polynomial("2*x^2*y + 3", S)) == "2*x^2*y"
    assert str(parse_polynomial("3*x - 3*x", S)) == "0"


def test_parse_precedence(S):
    x, y, z = S.gens
    assert parse_polynomial("-x^2", S) == -(x * x)
    assert parse_polynomial("x^2*y", S) == x * x * y
    assert parse_polynomial("x + y*z", S) == x + y * z
    assert parse_polynomial("(x + y)*z", S) == x * z + y * z
    assert parse_polynomial("x**2", S) == x * x
    assert parse_polynomial("  x *  - y ", S) == -(x * y)


def test_parse_list(S):
    x, y, z = S.gens
    assert parse_polynomial_list("x, y + z,", S) == [x, y + z]


@pytest.mark.parametrize("text,error,position", [
    ("x +", PolynomialSyntaxError, 3),
    ("w", UnknownVariableError, 0),
    ("x^(2)", PolynomialSyntaxError, 2),
    ("x $ y", PolynomialSyntaxError, 2),
    ("(x + y", PolynomialSyntaxError, 6),
    ("x y", PolynomialSyntaxError, 2),
])
def test_parse_errors(S, text, error, position):
    with pytest.raises(error) as info:
        parse_polynomial(text, S)
    assert info.value.position == position


def test_parse_exponent_overflow(S):
    with pytest.raises(ExponentOverflowError):
        parse_polynomial("x^2000000", S)


@pytest.mark.parametrize("m1,m2,order,expected", [
    ((1, 0, 0), (0, 1, 0), GREVLEX, 1),
    ((1, 0, 0), (0, 5, 0), LEX, 1),
    ((1, 0, 0), (0, 5, 0), GREVLEX, -1),
    ((1, 0, 1), (0, 2, 0), GREVLEX, -1),
    ((1, 0, 1), (0, 2, 0), LEX, 1),
    ((2, 1, 0), (2, 1, 0), GREVLEX, 0),
    ((5, 0, 0), (0, 1, 0), elimination_order(1), 1),
])
def test_compare(m1, m2, order, expected):
    assert compare(m1, m2, order) == expected


def test_compare_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        compare((1, 0), (1, 0, 0))


def test_elimination_order_puts_block_first():
    order = elimination_order(1)
    # anything with the first variable beats anything without it
    assert compare((1, 0, 0), (0, 9, 9), order) == 1


def test_pow_matches_repeated_multiplication():
    S = PolynomialRing.create(3, ("x", "y"))
    f = parse_polynomial("x + 2*y + 1", S)
    product = S.one()
    for _ in range(6):
        product = product * f
    assert f ** 6 == product
    assert f ** 3 == f.frobenius(3)
    assert f ** 0 == 1


def test_pow_in_characteristic_two():
    S = PolynomialRing.create(2, ("x", "y"))
    x, y = S.gens
    assert (x + y) ** 4 == x ** 4 + y ** 4
    assert (x + y) ** 3 == x ** 3 + x ** 2 * y + x * y ** 2 + y ** 3


def test_frobenius_requires_power_of_p():
    S = PolynomialRing.create(2, ("x",))
    with pytest.raises(ValidationError):
        S.gen(0).frobenius(6)


def test_pow_overflow():
    S = PolynomialRing.create(2, ("x",))
    with pytest.raises(ExponentOverflowError):
        S.gen(0) ** (2**21)


def test_leading_terms(S):
    f = parse_polynomial("x*z + y^2 + 2*x", S)
    assert f.leading_monomial(GREVLEX) == (0, 2, 0)
    assert f.leading_monomial(LEX) == (1, 0, 1)
    assert f.monic(LEX) == f
    g = parse_polynomial("2*x + y", S)
    assert g.monic() == parse_polynomial("x + 2*y", S)


def test_homogeneity(S):
    assert parse_polynomial("x*y - z^2", S).is_homogeneous()
    assert not parse_polynomial("x*y - z^3", S).is_homogeneous()


def test_ring_mismatch():
    S2 = PolynomialRing.create(2, ("x", "y"))
    S3 = PolynomialRing.create(3, ("x", "y"))
    with pytest.raises(RingMismatchError):
        S2.gen(0) + S3.gen(0)


def test_presentation_drops_zero_relations():
    ring = RingPresentation.from_strings(2, ("x", "y"), ["x - x", "x*y"])
    assert len(ring.relations) == 1
    assert str(ring) == "F_2[x, y]/(x*y)"


def test_duplicate_variables_rejected():
    with pytest.raises(ValidationError):
        PolynomialRing.create(2, ("x", "x"))


@pytest.mark.parametrize("text", ["x*y - z^2", "2*x^3*y + x - 1", "(x + y + z)^3", "0", "2", "x^2*z^5 + y"])
def test_printed_form_parses_back(S, text):
    f = parse_polynomial(text, S)
    assert parse_polynomial(str(f), S) == f


@pytest.mark.parametrize("p", [2, 3, 5])
def test_pth_power_is_termwise_frobenius(p):
    S = PolynomialRing.create(p, ("x", "y", "z"))
    rng = random.Random(DEFAULT_SEED + p)
    for _ in range(100):
        terms = {tuple(rng.randrange(4) for _ in range(3)): rng.randrange(1, p) for _ in range(rng.randrange(1, 5))}
        f = S.from_terms(terms)
        product = S.one()
        for _ in range(p):
            product = product * f
        assert product == f.frobenius(p)
        assert f ** p == product


def _random_polynomial(rng, S, max_terms=4):
    return S.from_terms({
        tuple(rng.randrange(4) for _ in range(S.nvars)): rng.randrange(S.p)
        for _ in range(rng.randrange(max_terms + 1))
    })


@pytest.mark.parametrize("p", [2, 3, 5])
def test_ring_axioms(p):
    S = PolynomialRing.create(p, ("x", "y", "z"))
    rng = random.Random(DEFAULT_SEED + 7 * p)
    for _ in range(50):
        f, g, h = (_random_polynomial(rng, S) for _ in range(3))
        assert (f + g) * h == f * h + g * h
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f * S.one() == f
        assert f - f == S.zero()
        assert f + (-f) == S.zero()


@pytest.mark.parametrize("order", [GREVLEX, LEX, elimination_order(1)], ids=str)
def test_compare_is_a_monomial_order(order):
    rng = random.Random(DEFAULT_SEED)

    def monomial():
        return tuple(rng.randrange(4) for _ in range(3))

    for _ in range(300):
        u, v, w = monomial(), monomial(), monomial()
        assert compare(u, v, order) == -compare(v, u, order)
        assert (compare(u, v, order) == 0) == (u == v)
        if compare(u, v, order) < 0 and compare(v, w, order) < 0:
            assert compare(u, w, order) < 0
        uw = tuple(a + b for a, b in zip(u, w))
        vw = tuple(a + b for a, b in zip(v, w))
        assert compare(uw, vw, order) == compare(u, v, order)
