import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultrachase import ideals as ID
from ultrachase.ideals import (
    NotPrimeError,
    ProperIdeal,
    SetSystem,
    check_D_conditions,
    enumerate_proper_ideals,
    filter_family,
    find_prime,
    finite_D_empty,
    is_prime,
    is_ultrafilter,
    mask_of,
    max_disjoint_system,
    prime_set_bruteforce,
    ultrafilter_from_prime,
)

PAIR = ProperIdeal.generated_by(3, [[0], [1]])
COATOMS = ProperIdeal(3, frozenset(range(7)), union_closed=False)


def test_D_conditions_examples():
    rep = check_D_conditions(SetSystem.of(2, [[], [0], [1]]))
    assert rep[1].passed and not rep[2].passed
    assert "{0,1}" in rep[2].witnesses
    rep = check_D_conditions(SetSystem.of(2, [[], [0], [1], [0, 1]]))
    assert not rep[1].passed
    rep = check_D_conditions(SetSystem.of(2, [[], [0]]))
    assert rep[3].passed and rep[4].passed and not rep[2].passed


def test_D_conditions_size_guard():
    with pytest.raises(ValueError):
        check_D_conditions(SetSystem.of(6, [[]]))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_finite_D_empty(n):
    cert = finite_D_empty(n)
    assert cert.empty
    assert cert.method == "enumeration"
    assert cert.families_checked == 2 ** (2**n)
    assert "full" in cert.explanation


def test_finite_D_empty_large_uses_clash():
    assert finite_D_empty(6).method == "clash"


def test_find_prime_examples():
    assert find_prime(PAIR) == mask_of([2])
    assert find_prime(ProperIdeal(1, frozenset({0}))) == mask_of([0])
    assert find_prime(COATOMS) == mask_of([0, 1, 2])


def test_max_disjoint_system_examples():
    s = max_disjoint_system(PAIR)
    assert s.members == (mask_of([2]),) and s.ok
    s = max_disjoint_system(ProperIdeal(2, frozenset({0})))
    assert s.members == (1, 2) and s.ok
    s = max_disjoint_system(COATOMS)
    assert s.members == (7,) and s.ok


def test_ultrafilter_examples():
    res = ultrafilter_from_prime(PAIR, mask_of([2]))
    assert res.generator == 2
    assert set(res.members) == {m for m in range(8) if m & 4}
    res = ultrafilter_from_prime(ProperIdeal(1, frozenset({0})), 1)
    assert res.members == (1,) and res.generator == 0


def test_non_prime_rejected_with_split():
    J = ProperIdeal(2, frozenset({0}))
    with pytest.raises(NotPrimeError) as exc:
        ultrafilter_from_prime(J, 3)
    assert exc.value.split in (1, 2)
    with pytest.raises(NotPrimeError) as exc:
        ultrafilter_from_prime(PAIR, 1)
    assert exc.value.split is None


def test_ideal_validation():
    with pytest.raises(ValueError, match="empty set"):
        ProperIdeal(2, frozenset({1}))
    with pytest.raises(ValueError, match="full set"):
        ProperIdeal(1, frozenset({0, 1}))
    with pytest.raises(ValueError, match="downward"):
        ProperIdeal(3, frozenset({0, 3}), union_closed=False)
    with pytest.raises(ValueError, match="union"):
        ProperIdeal(2, frozenset({0, 1, 2}))


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 7), (4, 15)])
def test_enumeration_counts(n, count):
    ideals = enumerate_proper_ideals(n)
    assert len(ideals) == count
    # union closed on a finite set: all subsets of the largest member
    for J in ideals:
        top = max(J.members)
        assert J.members == frozenset(ID.submasks(top))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_exhaustive_agreement(n):
    for J in enumerate_proper_ideals(n):
        primes = prime_set_bruteforce(J)
        assert ID.prime_set_by_splitting(J) == primes
        assert find_prime(J) == min(primes)
        # primes of P(S) are exactly the sets with one point outside S
        top = max(J.members)
        assert primes == [m for m in range(1 << n) if bin(m & ~top).count("1") == 1]
        assert max_disjoint_system(J).ok
        for M in range(1 << n):
            fam = filter_family(J, M)
            assert is_ultrafilter(n, fam) == is_prime(J, M)


@given(st.integers(0, 10_000), st.sampled_from([5, 6]))
@settings(max_examples=30, deadline=None)
def test_random_ideals(seed, n):
    J = ID.random_proper_ideal(n, random.Random(seed))
    M = find_prime(J)
    assert is_prime(J, M)
    assert max_disjoint_system(J).ok
    assert ultrafilter_from_prime(J, M).generator in ID.points_of(M)


def test_demos_run():
    for name, J in ID.demo_ideals().items():
        out = ID.run_demo(J)
        assert out["ok"], name
    out = ID.run_demo(COATOMS)
    assert "error" in out["ultrafilter"]
