import pytest

from ultrachase.operators import DiagTail, OperatorDesc
from ultrachase.spaces import OMEGA, IndexSet, WeightFamily
from ultrachase.valuation import NormValue, set_base


@pytest.fixture(autouse=True)
def _base_two():
    set_base(2)
    yield
    set_base(2)


def unit_omega():
    return WeightFamily.unit(OMEGA)


def unit_finite(n):
    return WeightFamily.unit(IndexSet(n))


def omega_op(sparse, diag=None, row_tails=None, dom=None, cod=None):
    return OperatorDesc(dom or unit_omega(), cod or unit_omega(), sparse, row_tails or {}, diag)


def diag_decay():
    """m_jj = p^-j for every j, unit weights."""
    from ultrachase.valuation import t

    return omega_op({}, DiagTail(0, t(0), 1))


def nv(e):
    return NormValue(e)
