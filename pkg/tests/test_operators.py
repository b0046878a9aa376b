import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import diag_decay, omega_op, unit_finite, unit_omega
from ultrachase.operators import (
    DiagTail,
    OperatorDesc,
    OperatorError,
    RestrictionSpec,
    RowTail,
    active_columns,
    apply,
    effective_entry,
    operator_norm,
    probe,
    require_valid,
    restrict,
    validate,
)
from ultrachase.randgen import entry_of_effective, rand_operator, rand_vector
from ultrachase.spaces import OMEGA, PVector, WeightFamily
from ultrachase.valuation import ZERO, NormValue, t


def test_validate_single_entry_ok():
    assert validate(omega_op({(0, 0): t(0)})) == []


def test_validate_non_decaying_tail():
    f = omega_op({}, row_tails={1: RowTail(0, t(0), 0)})
    assert any("non-decaying tail" in v for v in validate(f))


def test_validate_overlap_with_diag():
    f = omega_op({(5, 5): t(0)}, DiagTail(3, t(0), 1))
    assert any("overlap" in v and "sparse[5,5]" in v for v in validate(f))


def test_validate_collects_several():
    dom = unit_finite(2)
    f = OperatorDesc(dom, unit_omega(), {(0, 7): t(0)}, {0: RowTail(0, t(0) + t(1), 1)})
    problems = validate(f)
    assert any("out of range" in v for v in problems)
    assert any("finite index set" in v for v in problems)
    assert any("monomial" in v for v in problems)


def test_validate_tail_before_weights_stabilise():
    dom = WeightFamily(OMEGA, (NormValue(1), NormValue(2)), NormValue(0))
    f = OperatorDesc(dom, unit_omega(), {}, {0: RowTail(1, t(0), 1)})
    assert any("stabilise" in v for v in validate(f))


def test_zero_operator_rejected():
    f = omega_op({})
    assert "f must be non-zero" in validate(f)
    with pytest.raises(OperatorError) as exc:
        require_valid(f)
    assert exc.value.violations == ["f must be non-zero"]


def test_effective_entry_examples():
    dom = WeightFamily(OMEGA, (NormValue(0), NormValue(0), NormValue(1)), NormValue(0))
    cod = WeightFamily(OMEGA, (NormValue(0), NormValue(-1)), NormValue(0))
    f = OperatorDesc(dom, cod, {(1, 2): t(-2)})
    assert effective_entry(f, 1, 2) == NormValue(0)
    assert effective_entry(f, 0, 0) == ZERO


def test_apply_examples():
    f = omega_op({(0, 0): t(-1), (0, 1): t(0)})
    y = apply(f, PVector(f.domain, {0: t(0), 1: t(0)}))
    assert y[0] == t(-1) + t(0)
    assert y.norm() == NormValue(1)
    g = omega_op({(0, 0): t(0), (0, 1): -t(0)})
    assert apply(g, PVector(g.domain, {0: t(0), 1: t(0)})).support == ()
    assert apply(g, PVector(g.domain, {})).support == ()


def test_apply_uses_tails():
    f = omega_op({}, DiagTail(2, t(1), Fraction(1, 2)))
    y = apply(f, PVector(f.domain, {4: t(0)}))
    assert y[4] == t(2)
    g = omega_op({}, row_tails={0: RowTail(1, t(0), 1)})
    assert apply(g, PVector(g.domain, {1: t(0), 3: t(0)}))[0] == t(0) + t(2)


def probe_max(f):
    return max(apply(f, probe(f, i)).norm() / probe(f, i).norm() for i in active_columns(f))


def test_norm_examples():
    dom, cod = unit_omega(), unit_omega()
    f = OperatorDesc(
        dom,
        cod,
        {
            (0, 0): entry_of_effective(dom, cod, 0, 0, NormValue(1), 1),
            (1, 2): entry_of_effective(dom, cod, 1, 2, NormValue(1), 1),
        },
    )
    assert operator_norm(f) == NormValue(1) == probe_max(f)
    assert operator_norm(diag_decay()) == NormValue(0)
    assert operator_norm(omega_op({(0, 0): t(-3)})) == NormValue(3)


def test_probe_examples():
    dom = WeightFamily(OMEGA, (NormValue(0), NormValue(0), NormValue(1)), NormValue(0))
    f = OperatorDesc(dom, unit_omega(), {(0, 2): t(0)})
    x = probe(f, 2)
    assert x[2] == t(1)
    assert x.norm() == NormValue(0)
    g = omega_op({(0, 4): t(0)})
    assert probe(g, 4)[4] == t(0)
    h = omega_op({(0, 1): t(-2), (3, 1): t(-1)})
    assert apply(h, probe(h, 1)).norm() == NormValue(2)
    with pytest.raises(ValueError):
        probe(h, 0)


def test_restrict_examples():
    f = omega_op({(0, 0): t(0), (1, 0): t(1), (1, 2): t(2)})
    g = restrict(f, RestrictionSpec(J0={0}))
    assert set(g.sparse) == {(1, 0), (1, 2)}
    same = restrict(f, RestrictionSpec())
    assert same.sparse == f.sparse and same.diag_tail == f.diag_tail
    h = OperatorDesc(unit_omega(), unit_finite(2), {(0, 0): t(0), (1, 3): t(0)})
    z = restrict(h, RestrictionSpec(J0={0, 1}))
    assert z.is_zero and z.zero_ok
    assert operator_norm(z) == ZERO
    assert validate(z) == []


def test_restrict_splits_diag_tail():
    f = diag_decay()
    g = restrict(f, RestrictionSpec(I0={2}, J0={0}))
    assert g.diag_tail.j_start == 3
    assert set(g.sparse) == {(1, 1)}
    assert validate(g) == []
    assert operator_norm(g) == NormValue(-1)


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_norm_is_probe_max_and_bounds_images(seed):
    rng = random.Random(seed)
    f = rand_operator(rng)
    assert operator_norm(f) == probe_max(f)
    for _ in range(5):
        x = rand_vector(rng, f.domain)
        assert apply(f, x).norm() <= operator_norm(f) * x.norm()


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_apply_linear(seed):
    rng = random.Random(seed)
    f = rand_operator(rng)
    x, y = rand_vector(rng, f.domain), rand_vector(rng, f.domain)
    c = t(rng.randint(-2, 2), rng.choice((1, -3)))
    assert apply(f, x + y.scale(c)) == apply(f, x) + apply(f, y).scale(c)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_restrict_agrees_with_masking(seed):
    rng = random.Random(seed)
    f = rand_operator(rng)
    I0 = frozenset(rng.sample(range(8), 2)) if f.domain.index.is_omega else frozenset()
    J0 = frozenset(rng.sample(range(3), 1))
    g = restrict(f, RestrictionSpec(I0, J0))
    assert validate(g) == []
    x = rand_vector(rng, f.domain)
    masked = PVector(f.domain, {i: a for i, a in x.items() if i not in I0})
    want = {j: a for j, a in apply(f, masked).items() if j not in J0}
    assert dict(apply(g, x).items()) == want
