"""Exact arithmetic for the value group p^Q and for finite Hahn sums.

A :class:`NormValue` is either zero or ``p**exp`` with ``exp`` an exact
rational. It supports comparison and multiplication but deliberately no
addition: ultrametric estimates only ever need max, min and products.

A :class:`Scalar` is a finite sum ``sum c_q t**q`` with rational ``q`` and
nonzero rational ``c``. Its absolute value is ``p**(-q_min)``, so ``|t| = 1/p``
and the value group is all of ``p**Q``, which is dense in the positive reals.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Union

Rational = Union[int, Fraction, str]

_BASE = 2


def get_base() -> int:
    return _BASE


def set_base(p: int) -> None:
    """Set the prime used when rendering norms as real numbers."""
    global _BASE
    if not is_prime(p):
        raise ValueError(f"base must be a prime, got {p}")
    _BASE = p


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def as_fraction(q: Rational) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, bool):
        raise TypeError("bool is not a rational")
    return Fraction(q)


@functools.total_ordering
class NormValue:
    """An element of ``p**Q`` together with zero."""

    __slots__ = ("exp",)

    def __init__(self, exp: Rational | None):
        object.__setattr__(self, "exp", None if exp is None else as_fraction(exp))

    def __setattr__(self, name, value):
        raise AttributeError("NormValue is immutable")

    @classmethod
    def zero(cls) -> NormValue:
        return cls(None)

    @classmethod
    def pos(cls, exp: Rational) -> NormValue:
        return cls(exp)

    @property
    def is_zero(self) -> bool:
        return self.exp is None

    def __eq__(self, other):
        if not isinstance(other, NormValue):
            return NotImplemented
        return self.exp == other.exp

    def __hash__(self):
        return hash(("NormValue", self.exp))

    def __lt__(self, other):
        if not isinstance(other, NormValue):
            return NotImplemented
        if other.exp is None:
            return False
        if self.exp is None:
            return True
        return self.exp < other.exp

    def __mul__(self, other):
        if not isinstance(other, NormValue):
            return NotImplemented
        if self.exp is None or other.exp is None:
            return ZERO
        return NormValue(self.exp + other.exp)

    def inverse(self) -> NormValue:
        if self.exp is None:
            raise ZeroDivisionError("Zero has no inverse in the value group")
        return NormValue(-self.exp)

    def __truediv__(self, other):
        if not isinstance(other, NormValue):
            return NotImplemented
        return self * other.inverse()

    def __repr__(self):
        if self.exp is None:
            return "Zero"
        return f"Pos({self.exp})"

    def to_json(self) -> dict:
        if self.exp is None:
            return {"zero": True}
        return {"exp": f"{self.exp.numerator}/{self.exp.denominator}"}

    @classmethod
    def from_json(cls, obj) -> NormValue:
        if not isinstance(obj, dict):
            raise ValueError("norm value must be an object")
        if obj.get("zero") is True and "exp" not in obj:
            return ZERO
        if "exp" in obj:
            return cls(parse_rational(obj["exp"]))
        raise ValueError('norm value needs "exp" or "zero": true')


ZERO = NormValue(None)
ONE = NormValue(0)


def pos(exp: Rational) -> NormValue:
    return NormValue(exp)


def nv_max(*values: NormValue) -> NormValue:
    return max(values, default=ZERO)


def nv_between(lo: NormValue, hi: NormValue) -> NormValue:
    """Return a value strictly between ``lo`` and ``hi``.

    Midpoint of exponents when both are positive; one factor of ``p`` below
    ``hi`` when ``lo`` is zero.
    """
    if hi.is_zero or not lo < hi:
        raise ValueError(f"nv_between needs lo < hi with hi positive, got {lo!r}, {hi!r}")
    if lo.is_zero:
        return NormValue(hi.exp - 1)
    return NormValue((lo.exp + hi.exp) / 2)


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"`` (or an integer string) into a Fraction."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ValueError(f"rational must be a 'num/den' string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class Scalar:
    """Finite Hahn sum ``sum c * t**q`` with exact rational data.

    ``terms`` is a tuple of ``(q, c)`` pairs, strictly increasing in ``q``,
    every ``c`` nonzero. The empty tuple is zero.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Rational, Rational]] = ()):
        acc: dict[Fraction, Fraction] = {}
        for q, c in terms:
            q, c = as_fraction(q), as_fraction(c)
            acc[q] = acc.get(q, Fraction(0)) + c
        object.__setattr__(
            self, "terms", tuple(sorted((q, c) for q, c in acc.items() if c != 0))
        )

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _raw(cls, terms: tuple) -> Scalar:
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def monomial(cls, q: Rational, c: Rational = 1) -> Scalar:
        return cls([(q, c)])

    @classmethod
    def from_int(cls, c: Rational) -> Scalar:
        return cls([(0, c)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def valuation(self) -> Fraction | None:
        """Least exponent, or None for zero."""
        return self.terms[0][0] if self.terms else None

    def leading(self) -> tuple[Fraction, Fraction]:
        if not self.terms:
            raise ValueError("zero has no leading term")
        return self.terms[0]

    def norm(self) -> NormValue:
        if not self.terms:
            return ZERO
        return NormValue(-self.terms[0][0])

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(("Scalar", self.terms))

    def __neg__(self):
        return Scalar._raw(tuple((q, -c) for q, c in self.terms))

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        return Scalar(self.terms + other.terms)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO_SCALAR
        if len(other.terms) == 1:
            q1, c1 = other.terms[0]
            return Scalar._raw(tuple((q + q1, c * c1) for q, c in self.terms))
        if len(self.terms) == 1:
            return other * self
        acc: dict[Fraction, Fraction] = {}
        for q0, c0 in self.terms:
            for q1, c1 in other.terms:
                q = q0 + q1
                acc[q] = acc.get(q, 0) + c0 * c1
        return Scalar._raw(tuple(sorted((q, c) for q, c in acc.items() if c != 0)))

    def __repr__(self):
        if not self.terms:
            return "Scalar(0)"
        parts = [f"{c}*t^({q})" for q, c in self.terms]
        return "Scalar(" + " + ".join(parts) + ")"

    def to_json(self) -> list:
        return [[_fmt(q), _fmt(c)] for q, c in self.terms]

    @classmethod
    def from_json(cls, obj) -> Scalar:
        if not isinstance(obj, list):
            raise ValueError("scalar must be a list of [exp, coeff] pairs")
        terms = []
        for k, pair in enumerate(obj):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ValueError(f"term {k} must be a [exp, coeff] pair")
            terms.append((parse_rational(pair[0]), parse_rational(pair[1])))
        return cls(terms)


ZERO_SCALAR = Scalar()


def t(q: Rational = 1, c: Rational = 1) -> Scalar:
    """Shorthand for the monomial ``c * t**q``."""
    return Scalar.monomial(q, c)


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def monomial_of_norm(value: NormValue) -> Scalar:
    """The monomial ``t**(-exp)``, whose absolute value is exactly ``value``."""
    if value.is_zero:
        return ZERO_SCALAR
    return Scalar._raw(((-value.exp, Fraction(1)),))
