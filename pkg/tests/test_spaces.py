import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultrachase.randgen import rand_vector
from ultrachase.spaces import (
    OMEGA,
    IndexSet,
    Principal,
    ProdSubset,
    PVector,
    SumSubset,
    UltraProdSubset,
    UltraSet,
    WeightFamily,
    exceeding,
    in_region,
    pvec_norm,
    region_equiv_principal,
)
from ultrachase.valuation import ZERO, NormValue, t

UNIT = WeightFamily.unit(OMEGA)


def test_pvec_norm_examples():
    x = PVector(UNIT, {0: t(0), 3: t(-2)})
    assert pvec_norm(x) == NormValue(2)
    heavy = WeightFamily(OMEGA, (NormValue(0),) * 3 + (NormValue(-3),), NormValue(0))
    assert pvec_norm(PVector(heavy, {0: t(0), 3: t(-2)})) == NormValue(0)
    assert pvec_norm(PVector(UNIT, {})) == ZERO


def test_in_region_examples():
    assert not in_region(PVector(UNIT, {0: t(0)}), ProdSubset({0}, NormValue(0)))
    assert in_region(PVector(UNIT, {1: t(0)}), ProdSubset({0}, NormValue(0)))
    assert in_region(PVector(UNIT, {2: t(-1)}), SumSubset({2}, NormValue(0)))
    assert not in_region(PVector(UNIT, {2: t(-1)}), SumSubset(set(), NormValue(0)))


def test_region_equiv_examples():
    rng = random.Random(3)
    samples = [rand_vector(rng, UNIT) for _ in range(50)]
    assert region_equiv_principal(UltraSet.embed([0, 2]), {0, 2}, NormValue(1), samples)
    with pytest.raises(ValueError):
        region_equiv_principal(UltraSet.embed([0]), {1}, NormValue(0), samples)
    assert region_equiv_principal(UltraSet(()), set(), NormValue(-2), samples)


def test_ultra_region_uses_zero_set():
    U = UltraSet((Principal(1),))
    assert not in_region(PVector(UNIT, {1: t(3)}), UltraProdSubset(U, NormValue(0)))
    assert in_region(PVector(UNIT, {0: t(3)}), UltraProdSubset(U, NormValue(0)))


def test_ultraset_rejects_duplicates():
    with pytest.raises(ValueError):
        UltraSet((Principal(1), Principal(1)))


def test_weight_family_violations():
    with pytest.raises(ValueError, match="tail"):
        WeightFamily(OMEGA, ())
    with pytest.raises(ValueError, match="expected 2"):
        WeightFamily(IndexSet(2), (NormValue(0),))
    with pytest.raises(ValueError, match="positive"):
        WeightFamily(IndexSet(1), (ZERO,))


def test_vector_index_checks():
    with pytest.raises(IndexError):
        PVector(WeightFamily.unit(IndexSet(2)), {2: t(0)})


def test_exceeding():
    x = PVector(UNIT, {0: t(0), 1: t(-1), 4: t(2)})
    assert exceeding(x, NormValue(0)) == (1,)


vec_seeds = st.integers(0, 10_000)


@given(vec_seeds)
def test_norm_laws(seed):
    rng = random.Random(seed)
    x, y = rand_vector(rng, UNIT), rand_vector(rng, UNIT)
    assert (x + y).norm() <= max(x.norm(), y.norm())
    assert (x - x).norm() == ZERO
    c = t(rng.randint(-3, 3), 2)
    assert x.scale(c).norm() == c.norm() * x.norm()


@given(vec_seeds, st.integers(-3, 3), st.integers(0, 3))
def test_regions_monotone_in_radius(seed, e, bump):
    x = rand_vector(random.Random(seed), UNIT)
    small, big = NormValue(e), NormValue(e + bump)
    if in_region(x, ProdSubset({0}, small)):
        assert in_region(x, ProdSubset({0}, big))
    if in_region(x, SumSubset({1}, small)):
        assert in_region(x, SumSubset({1}, big))
