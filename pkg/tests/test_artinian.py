import random

import numpy as np
import pytest

from artinian import (
    INFINITE,
    is_irreducible,
    is_m_primary,
    krull_dimension,
    length,
    length_dense_oracle,
    null_space_mod_p,
    rank_mod_p,
    ring_dimension,
    socle,
    standard_monomials,
)
from config import DEFAULT_SEED
from errors import CapTooSmallError, NotArtinianError
from groebner import IdealHandle
from polyring import LEX, RingPresentation
from rings import load_example


@pytest.mark.parametrize("gens,expected", [
    (["x^2", "y^2"], 4),
    (["x^3", "y^2"], 6),
    (["x^2", "x*y", "y^2"], 3),
    (["x"], INFINITE),
    (["1"], 0),
])
def test_length_in_plane(plane2, ideal, gens, expected):
    assert length(ideal(plane2, *gens)) == expected


def test_length_in_a1(a1, ideal):
    I = ideal(a1, "x", "y")
    assert length(I) == 2
    assert [str(m) for m in standard_monomials(I).polynomials()] == ["z", "1"]


def test_standard_monomials_needs_artinian(plane2, ideal):
    with pytest.raises(NotArtinianError):
        standard_monomials(ideal(plane2, "x*y"))


@pytest.mark.parametrize("gens,expected", [
    ([], 2),
    (["x", "y", "z"], 0),
    (["x"], 1),
    (["1"], -1),
])
def test_krull_dimension_a1(a1, ideal, gens, expected):
    assert krull_dimension(ideal(a1, *gens)) == expected


def test_ring_dimension(plane2, twisted_cubic, three_lines):
    assert ring_dimension(plane2) == 2
    assert ring_dimension(twisted_cubic) == 2
    assert ring_dimension(three_lines) == 1


def test_dense_oracle_examples(plane2, a1, ideal):
    assert length_dense_oracle(ideal(plane2, "x^2", "y^2"), 3) == 4
    assert length_dense_oracle(ideal(a1, "x", "y"), 3) == 2
    assert length_dense_oracle(IdealHandle.unit(plane2), 3) == 0


def test_dense_oracle_cap_too_small(plane2, ideal):
    with pytest.raises(CapTooSmallError):
        length_dense_oracle(ideal(plane2, "x^5", "y^5"), 3)


def test_dense_oracle_on_affine_ideal(plane2, ideal):
    I = ideal(plane2, "x^2 + y", "y^2")
    assert length(I) == 4
    assert length_dense_oracle(I, 10) == 4


def test_dense_oracle_affine_cap_too_small(plane2, ideal):
    with pytest.raises(CapTooSmallError):
        length_dense_oracle(ideal(plane2, "x^2 + y", "y^2"), 3)


@pytest.mark.parametrize("p,nvars", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_two_length_oracles_agree(random_monomial_ideal, p, nvars):
    names = ("x", "y", "z")[:nvars]
    ring = RingPresentation.from_strings(p, names)
    rng = random.Random(DEFAULT_SEED + 31 * p + nvars)
    for _ in range(13):
        I = random_monomial_ideal(rng, ring)
        cap = sum(g.total_degree() for g in I.generators)
        lam = length(I)
        assert lam <= 200
        assert length_dense_oracle(I, cap) == lam


@pytest.mark.parametrize("gens", [
    ["x", "y"],
    ["x^2", "y"],
    ["x^3", "y^2", "z"],
    ["x + z", "y^2"],
])
def test_oracles_agree_in_a1(a1, ideal, gens):
    I = ideal(a1, *gens)
    assert length_dense_oracle(I, 10) == length(I)


def test_oracles_agree_in_twisted_cubic(twisted_cubic, ideal):
    for gens in (["a", "b", "d"], ["a^2", "a*b", "d^2"], ["a", "d"], ["a^2", "d^2"]):
        I = ideal(twisted_cubic, *gens)
        assert length_dense_oracle(I, 12) == length(I)


@pytest.mark.parametrize("gens,expected", [
    (["x", "y"], 3),
    (["x^2", "y"], 6),
    (["x + z", "y^2"], 6),
])
def test_oracles_agree_in_an(gens, expected):
    ring = load_example("an").ring
    I = IdealHandle(ring, [ring.parse(g) for g in gens])
    assert length(I) == expected
    assert length_dense_oracle(I, 10) == expected


def test_length_independent_of_order(a1, twisted_cubic, ideal):
    for I in (ideal(a1, "x", "y"), ideal(a1, "x^2", "y^3"), ideal(twisted_cubic, "a^2", "a*b", "d^2")):
        assert length(I, LEX) == length(I)


def test_twisted_cubic_tower_ideals(twisted_cubic, ideal):
    assert length(ideal(twisted_cubic, "a", "b", "d")) == 2
    assert length(ideal(twisted_cubic, "a^2", "a*b", "d^2")) == 10


def test_is_m_primary(plane2, ideal):
    assert is_m_primary(ideal(plane2, "x", "y"))
    assert is_m_primary(ideal(plane2, "x^2 + y^3", "y^2"))
    assert not is_m_primary(ideal(plane2, "x"))
    assert not is_m_primary(ideal(plane2, "x + 1", "y"))
    assert not is_m_primary(IdealHandle.unit(plane2))


@pytest.mark.parametrize("ring_name,gens,expected", [
    ("plane2", ["x^2", "y^3"], ["x*y^2"]),
    ("a1", ["x", "y"], ["z"]),
    ("plane2", ["x", "y"], ["1"]),
    ("twisted_cubic", ["a", "b", "d"], ["c"]),
    ("twisted_cubic", ["a^2", "a*b", "d^2"], ["a*c*d"]),
])
def test_socle(request, ideal, ring_name, gens, expected):
    ring = request.getfixturevalue(ring_name)
    assert [str(u) for u in socle(ideal(ring, *gens))] == expected


def test_socle_elements_annihilate_maximal_ideal(a1, ideal):
    I = ideal(a1, "x^2", "y^2")
    for u in socle(I):
        assert not I.reduce(u).is_zero()
        for x in a1.ambient.gens:
            assert I.reduce(x * u).is_zero()


def test_socle_of_parameter_ideal_in_non_gorenstein_ring(twisted_cubic, ideal):
    assert sorted(str(u) for u in socle(ideal(twisted_cubic, "a", "d"))) == ["b", "c"]


def test_irreducible(plane2, ideal):
    assert is_irreducible(ideal(plane2, "x^2", "y^2"))
    assert not is_irreducible(ideal(plane2, "x^2", "x*y", "y^2"))


def test_socle_needs_artinian(plane2, ideal):
    with pytest.raises(NotArtinianError):
        socle(ideal(plane2, "x"))


def test_rank_and_null_space():
    A = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank_mod_p(A, 7) == 2
    (v,) = null_space_mod_p(A, 7)
    assert not (A @ v % 7).any()
    assert rank_mod_p(np.array([[1, 1], [1, 1]]), 2) == 1
    assert rank_mod_p(np.array([[2, 0], [0, 2]]), 2) == 0
