"""Lattice sums three ways: enumeration, geometric series, fitted laws.

The rank-one oracle is literal counting: over the lattice d*Z (+ shift) the
sum of [h > 0] - [h > x] is the number of lattice points in (0, x] minus the
number in (x, 0], which a ten-line loop computes with no cone machinery at
all.  Higher-rank checks play the evaluation routes against each other and
against hand-picked structural facts (q-independence, multiplicativity).
"""

import itertools
from fractions import Fraction

import pytest

from trunca.errors import ConsistencyError, LatticeError
from trunca.quasipoly import (
    LatticeSpec,
    brute_sum,
    fit_quasipolynomial,
    is_prime_power,
    product_eval,
    standard_lattice_spec,
)
from trunca.rootdata import build_root_datum


def _count_interval(step, shift, x):
    """Sum of [h > 0] - [h > x] over h = step*k + shift, |k| bounded."""
    total = 0
    for k in range(-200, 201):
        h = step * k + shift
        total += int(h > 0) - int(h > x)
    return Fraction(total)


A1 = build_root_datum("A1")


# -- rank one against the counting oracle --------------------------------------


def test_coroot_lattice_sum_matches_counting():
    spec = standard_lattice_spec(A1, ())
    for x in range(-7, 9):
        expect = _count_interval(2, 0, x)
        assert brute_sum(spec, (x,), certify=True) == expect
        for q in (2, 3):
            assert product_eval(spec, (x,), q) == expect


def test_shifted_lattice_and_multiplicity():
    spec = LatticeSpec(A1, (), [(2,)], base_point=(1,), multiplicity=Fraction(3, 2))
    for x in range(-5, 7):
        expect = Fraction(3, 2) * _count_interval(2, 1, x)
        assert brute_sum(spec, (x,)) == expect
        assert product_eval(spec, (x,), 5) == expect


def test_index_two_sublattice():
    # 4Z inside the coroot lattice 2Z: the series route must split the sum
    # with a nontrivial character pair.
    spec = LatticeSpec(A1, (), [(4,)])
    for x in range(-6, 10):
        expect = _count_interval(4, 0, x)
        assert brute_sum(spec, (x,)) == expect
        assert product_eval(spec, (x,), 3) == expect


def test_brute_sum_accepts_off_lattice_parameters():
    spec = standard_lattice_spec(A1, ())
    x = Fraction(7, 2)
    assert brute_sum(spec, (x,)) == _count_interval(2, 0, x)
    with pytest.raises(LatticeError, match="parameter lattice"):
        product_eval(spec, (x,), 2)


# -- higher rank: route against route -------------------------------------------


@pytest.mark.parametrize("kind,subset", [("A2", ()), ("A2", (0,)),
                                         ("B2", ()), ("B2", (1,))])
def test_routes_agree_and_q_is_irrelevant(kind, subset):
    datum = build_root_datum(kind)
    spec = standard_lattice_spec(datum, subset)
    for coords in [(3, 2), (0, 0), (-2, 5), (4, -3)]:
        x = spec.x_point(coords)
        reference = brute_sum(spec, x, certify=True)
        values = {product_eval(spec, x, q) for q in (2, 3, 4, 5)}
        assert values == {reference}


def test_zero_parameter_sums_to_zero():
    for kind, subset in [("A1", ()), ("A2", ()), ("B2", (0,))]:
        datum = build_root_datum(kind)
        spec = standard_lattice_spec(datum, subset)
        zero = (0,) * datum.dim
        assert brute_sum(spec, zero) == 0
        assert product_eval(spec, zero, 2) == 0


def test_full_subset_is_a_point_evaluation():
    datum = build_root_datum("A2")
    spec = standard_lattice_spec(datum, (0, 1))
    # rank zero: the sum is gamma at the base point, which is constant 1
    assert brute_sum(spec, (5, 5)) == 1
    assert product_eval(spec, spec.x_point((5, 5)), 2) == 1


# -- input validation -------------------------------------------------------------


def test_prime_power_gate():
    spec = standard_lattice_spec(A1, ())
    for bad in (1, 6, 12):
        assert not is_prime_power(bad)
        with pytest.raises(ValueError, match="prime power"):
            product_eval(spec, (4,), bad)
    assert all(is_prime_power(q) for q in (2, 3, 4, 5, 8, 9))


def test_declared_denominator_is_verified():
    assert LatticeSpec(A1, (), [(2,)], denominator=4).denominator == 4
    with pytest.raises(LatticeError, match="fails verification"):
        LatticeSpec(A1, (), [(2,)], denominator=3)


def test_basis_validation():
    d = build_root_datum("A2")
    with pytest.raises(LatticeError, match="basis vectors"):
        LatticeSpec(d, (), [(2, -1)])
    with pytest.raises(LatticeError, match="dimension"):
        LatticeSpec(d, (), [(2,), (0, 2, 0)])
    with pytest.raises(LatticeError, match="not in the semisimple part"):
        LatticeSpec(d, (0,), [(1, 1)])   # must vanish on the subset slot
    with pytest.raises(LatticeError, match="full rank"):
        LatticeSpec(d, (), [(2, -1), (4, -2)])
    with pytest.raises(LatticeError, match="coordinate subspace"):
        LatticeSpec(d, (0,), [(0, 1)], base_point=(1, 0))


# -- fitted laws --------------------------------------------------------------------


def test_fit_recovers_quarter_period_law():
    spec = LatticeSpec(A1, (), [(4,)])
    samples = [((x,), brute_sum(spec, (x,))) for x in range(-4, 14)]
    law = fit_quasipolynomial(spec, samples)
    assert set(law.frequencies) == {
        (Fraction(0),), (Fraction(1, 4),), (Fraction(1, 2),), (Fraction(3, 4),)}
    for x in (17, 30, -11, 101):
        assert law.evaluate_rational((x,)) == _count_interval(4, 0, x)


def test_fit_two_dimensional_prediction():
    datum = build_root_datum("A2")
    spec = standard_lattice_spec(datum, (0,))
    grid = itertools.product(range(6), repeat=2)
    samples = [(c, brute_sum(spec, spec.x_point(c))) for c in grid]
    law = fit_quasipolynomial(spec, samples)
    for coords in [(7, 9), (10, 3), (8, 8)]:
        assert law.evaluate_rational(coords) == brute_sum(spec, spec.x_point(coords))


def test_fit_rejects_corrupted_samples():
    spec = standard_lattice_spec(A1, ())
    samples = [((x,), brute_sum(spec, (x,))) for x in range(12)]
    samples[7] = (samples[7][0], samples[7][1] + 1)
    with pytest.raises(ConsistencyError):
        fit_quasipolynomial(spec, samples)


def test_fit_rejects_conflicting_duplicates():
    spec = standard_lattice_spec(A1, ())
    samples = [((3,), Fraction(1)), ((3,), Fraction(2))]
    with pytest.raises(ConsistencyError, match="conflicting"):
        fit_quasipolynomial(spec, samples)
