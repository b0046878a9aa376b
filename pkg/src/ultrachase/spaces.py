"""Weighted coordinate families, finitely supported vectors and the regions
used to state Chase-type inclusions.

Every coordinate space is the line ``k`` with norm ``w_i * |x|``. Index sets
are either ``{0, ..., n-1}`` or ``omega``; on ``omega`` the weights are
eventually constant, so every supremum that matters is attained.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .valuation import ZERO, NormValue, Scalar


@dataclass(frozen=True)
class IndexSet:
    """``Finite(n)`` when ``size`` is an int, ``Omega`` when it is None."""

    size: int | None = None

    def __post_init__(self):
        if self.size is not None and self.size < 0:
            raise ValueError("finite index set needs n >= 0")

    @property
    def is_omega(self) -> bool:
        return self.size is None

    def __contains__(self, i) -> bool:
        if not isinstance(i, int) or i < 0:
            return False
        return self.size is None or i < self.size

    def indices(self) -> range:
        if self.size is None:
            raise ValueError("omega cannot be enumerated")
        return range(self.size)

    def __repr__(self):
        return "Omega" if self.size is None else f"Finite({self.size})"


OMEGA = IndexSet(None)


def finite(n: int) -> IndexSet:
    return IndexSet(n)


@dataclass(frozen=True)
class WeightFamily:
    """Weights ``w_i`` of the coordinate lines over an index set."""

    index: IndexSet
    explicit: tuple[NormValue, ...]
    tail: NormValue | None = None

    def __post_init__(self):
        object.__setattr__(self, "explicit", tuple(self.explicit))
        problems = self.violations()
        if problems:
            raise ValueError("; ".join(problems))

    def violations(self) -> list[str]:
        out = []
        for k, w in enumerate(self.explicit):
            if not isinstance(w, NormValue) or w.is_zero:
                out.append(f"weights[{k}]: weight must be strictly positive")
        if self.index.is_omega:
            if self.tail is None or self.tail.is_zero:
                out.append("tail: omega family needs a positive tail weight")
        else:
            if self.tail is not None:
                out.append("tail: finite family must not carry a tail weight")
            if len(self.explicit) != self.index.size:
                out.append(
                    f"weights: expected {self.index.size} weights, got {len(self.explicit)}"
                )
        return out

    @classmethod
    def unit(cls, index: IndexSet) -> WeightFamily:
        one = NormValue(0)
        if index.is_omega:
            return cls(index, (), one)
        return cls(index, (one,) * index.size)

    @property
    def stable_from(self) -> int:
        """First index from which the weight is the tail weight."""
        return len(self.explicit)

    def weight(self, i: int) -> NormValue:
        if i not in self.index:
            raise IndexError(f"index {i} not in {self.index!r}")
        if i < len(self.explicit):
            return self.explicit[i]
        return self.tail

    def to_json(self) -> dict:
        idx = "omega" if self.index.is_omega else {"finite": self.index.size}
        out = {"index": idx, "weights": [w.to_json() for w in self.explicit]}
        if self.tail is not None:
            out["tail"] = self.tail.to_json()
        return out


class PVector:
    """A finitely supported element of the bounded product over ``space``."""

    __slots__ = ("space", "_entries")

    def __init__(self, space: WeightFamily, entries: Mapping[int, Scalar] | Iterable = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean: dict[int, Scalar] = {}
        for i, c in items:
            if i not in space.index:
                raise IndexError(f"support index {i} not in {space.index!r}")
            if not c.is_zero:
                clean[i] = c
        self.space = space
        self._entries = dict(sorted(clean.items()))

    @classmethod
    def basis(cls, space: WeightFamily, i: int, c: Scalar) -> PVector:
        return cls(space, {i: c})

    def __getitem__(self, i: int) -> Scalar:
        return self._entries.get(i, _ZERO_S)

    def items(self):
        return self._entries.items()

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._entries)

    def __bool__(self):
        return bool(self._entries)

    def __eq__(self, other):
        if not isinstance(other, PVector):
            return NotImplemented
        return self.space == other.space and self._entries == other._entries

    def __hash__(self):
        return hash((self.space, tuple(self._entries.items())))

    def _check_space(self, other: PVector):
        if self.space != other.space:
            raise ValueError("vectors live over different weight families")

    def __add__(self, other):
        if not isinstance(other, PVector):
            return NotImplemented
        self._check_space(other)
        out = dict(self._entries)
        for i, c in other._entries.items():
            out[i] = out[i] + c if i in out else c
        return PVector(self.space, out)

    def __neg__(self):
        return PVector(self.space, {i: -c for i, c in self._entries.items()})

    def __sub__(self, other):
        if not isinstance(other, PVector):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Scalar) -> PVector:
        return PVector(self.space, {i: c * v for i, v in self._entries.items()})

    __rmul__ = scale

    def coord_norm(self, i: int) -> NormValue:
        """``||x(i)||_{V(i)} = w_i * |x(i)|``."""
        c = self._entries.get(i)
        if c is None:
            return ZERO
        return self.space.weight(i) * c.norm()

    def norm(self) -> NormValue:
        return pvec_norm(self)

    def __repr__(self):
        body = ", ".join(f"{i}: {c!r}" for i, c in self._entries.items())
        return f"PVector({{{body}}})"

    def to_json(self) -> dict:
        return {str(i): c.to_json() for i, c in self._entries.items()}


_ZERO_S = Scalar()


def zero_vector(space: WeightFamily) -> PVector:
    return PVector(space, {})


def pvec_norm(x: PVector) -> NormValue:
    """Supremum norm; zero for the empty support."""
    best = ZERO
    for i in x._entries:
        v = x.coord_norm(i)
        if v > best:
            best = v
    return best


def exceeding(x: PVector, eps: NormValue) -> tuple[int, ...]:
    """Indices whose coordinate norm exceeds ``eps``.

    Always a subset of the finite support, which is what places every
    :class:`PVector` in the completed direct sum.
    """
    return tuple(i for i in x.support if x.coord_norm(i) > eps)


# --- ultrafilter tags -------------------------------------------------------


@dataclass(frozen=True, order=True)
class Principal:
    """The principal ultrafilter of all index sets containing ``i``."""

    i: int

    def contains(self, subset) -> bool:
        """Membership of an index set (anything supporting ``in``)."""
        return self.i in subset

    def __repr__(self):
        return f"iota({self.i})"


@dataclass(frozen=True)
class UltraSet:
    tags: tuple[Principal, ...]

    def __post_init__(self):
        tags = tuple(self.tags)
        if len(set(tags)) != len(tags):
            raise ValueError("duplicate ultrafilter tags")
        for tag in tags:
            if not isinstance(tag, Principal):
                raise TypeError("only principal ultrafilters are representable")
        object.__setattr__(self, "tags", tuple(sorted(tags)))

    @classmethod
    def embed(cls, indices: Iterable[int]) -> UltraSet:
        """Image of an index set under the canonical embedding."""
        return cls(tuple(Principal(i) for i in indices))

    def points(self) -> frozenset[int]:
        return frozenset(tag.i for tag in self.tags)

    def __iter__(self):
        return iter(self.tags)

    def __len__(self):
        return len(self.tags)


class _ZeroSet:
    """The (possibly infinite) set ``{i : x(i) = 0}``."""

    def __init__(self, x: PVector):
        self._x = x

    def __contains__(self, i) -> bool:
        return i in self._x.space.index and self._x[i].is_zero


# --- regions ----------------------------------------------------------------


@dataclass(frozen=True)
class ProdSubset:
    """Vectors vanishing on ``I0`` with every coordinate norm at most ``r``."""

    I0: frozenset
    r: NormValue

    def __post_init__(self):
        object.__setattr__(self, "I0", frozenset(self.I0))


@dataclass(frozen=True)
class SumSubset:
    """Vectors whose coordinates outside ``J0`` have norm at most ``r``."""

    J0: frozenset
    r: NormValue

    def __post_init__(self):
        object.__setattr__(self, "J0", frozenset(self.J0))


@dataclass(frozen=True)
class UltraProdSubset:
    """Vectors whose zero set lies in every filter of ``U0``, norm at most ``r``."""

    U0: UltraSet
    r: NormValue


Region = Union[ProdSubset, SumSubset, UltraProdSubset]


def in_region(x: PVector, region: Region) -> bool:
    if isinstance(region, ProdSubset):
        if any(not x[i].is_zero for i in region.I0):
            return False
        return all(x.coord_norm(i) <= region.r for i in x.support)
    if isinstance(region, SumSubset):
        return all(x.coord_norm(j) <= region.r for j in x.support if j not in region.J0)
    if isinstance(region, UltraProdSubset):
        zeros = _ZeroSet(x)
        if not all(tag.contains(zeros) for tag in region.U0):
            return False
        return all(x.coord_norm(i) <= region.r for i in x.support)
    raise TypeError(f"unknown region {region!r}")


def region_normal_form(region: ProdSubset | UltraProdSubset) -> tuple[frozenset, NormValue]:
    """Reduce a product region to (forced-zero indices, radius).

    For a principal tag ``iota(i)``, ``{x = 0} in iota(i)`` iff ``x(i) = 0``,
    so both region kinds collapse to the same data.
    """
    if isinstance(region, ProdSubset):
        return region.I0, region.r
    if isinstance(region, UltraProdSubset):
        return region.U0.points(), region.r
    raise TypeError(f"no product normal form for {region!r}")


def region_equiv_principal(U0: UltraSet, I0: Iterable[int], r: NormValue, samples: Iterable[PVector]) -> bool:
    """Check that the ultrafilter region over ``U0`` equals the vanishing
    region over ``I0``: symbolically, then on every sample."""
    I0 = frozenset(I0)
    if U0.points() != I0:
        raise ValueError(
            f"ultrafilter tags {sorted(U0.points())} do not match index set {sorted(I0)}"
        )
    ultra = UltraProdSubset(U0, r)
    plain = ProdSubset(I0, r)
    if region_normal_form(ultra) != region_normal_form(plain):
        return False
    return all(in_region(x, ultra) == in_region(x, plain) for x in samples)
