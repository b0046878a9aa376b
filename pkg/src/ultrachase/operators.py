"""Structured bounded maps from a bounded product to a completed direct sum.

An operator is an infinite matrix ``a[j, i]`` built from

* finitely many sparse entries,
* geometric row tails ``a[j, i] = lead * t**(ratio * (i - i_start))`` for
  ``i >= i_start`` in finitely many rows ``j``,
* at most one geometric diagonal tail ``a[j, j] = lead * t**(ratio * (j - j_start))``.

There are no column tails, so applying an operator to a finitely supported
vector gives a finitely supported vector, computed exactly. Tails start
after the weights have stabilised and decay strictly, so every supremum of
effective entries ``m[j, i] = u_j * |a[j, i]| / w_i`` sits at a finite,
computable position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .spaces import PVector, WeightFamily
from .valuation import ZERO, NormValue, Scalar, as_fraction, t


class OperatorError(ValueError):
    """Raised when an operator descriptor fails validation."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class RowTail:
    i_start: int
    lead: Scalar
    ratio: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ratio", as_fraction(self.ratio))

    def entry(self, i: int) -> Scalar:
        return self.lead * t(self.ratio * (i - self.i_start))


@dataclass(frozen=True)
class DiagTail:
    j_start: int
    lead: Scalar
    ratio: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ratio", as_fraction(self.ratio))

    def entry(self, j: int) -> Scalar:
        return self.lead * t(self.ratio * (j - self.j_start))


@dataclass(frozen=True)
class RestrictionSpec:
    I0: frozenset = frozenset()
    J0: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "I0", frozenset(self.I0))
        object.__setattr__(self, "J0", frozenset(self.J0))


@dataclass(frozen=True)
class OperatorDesc:
    domain: WeightFamily
    codomain: WeightFamily
    sparse: Mapping[tuple[int, int], Scalar] = field(default_factory=dict)
    row_tails: Mapping[int, RowTail] = field(default_factory=dict)
    diag_tail: DiagTail | None = None
    # Set on operators produced by restrict(): an empty matrix is then legal.
    zero_ok: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sparse", {k: v for k, v in sorted(dict(self.sparse).items())})
        object.__setattr__(self, "row_tails", dict(sorted(dict(self.row_tails).items())))

    __hash__ = None

    @property
    def is_zero(self) -> bool:
        return not self.sparse and not self.row_tails and self.diag_tail is None


def validate(f: OperatorDesc) -> list[str]:
    """Return every structural violation; an empty list means valid."""
    out: list[str] = []
    out += [f"domain.{v}" for v in f.domain.violations()]
    out += [f"codomain.{v}" for v in f.codomain.violations()]
    I, J = f.domain.index, f.codomain.index
    for (j, i), a in f.sparse.items():
        if j not in J or i not in I:
            out.append(f"sparse[{j},{i}]: index out of range")
        if not isinstance(a, Scalar) or a.is_zero:
            out.append(f"sparse[{j},{i}]: entry must be a nonzero scalar")
    for j, tail in f.row_tails.items():
        where = f"row_tails[{j}]"
        if j not in J:
            out.append(f"{where}: row out of range")
        if not I.is_omega:
            out.append(f"{where}: tail on finite index set")
        if tail.i_start < f.domain.stable_from or tail.i_start < 0:
            out.append(f"{where}: tail starts before domain weights stabilise")
        out += _tail_shape(where, tail.lead, tail.ratio)
    d = f.diag_tail
    if d is not None:
        if not (I.is_omega and J.is_omega):
            out.append("diag_tail: tail on finite index set")
        if d.j_start < max(f.domain.stable_from, f.codomain.stable_from) or d.j_start < 0:
            out.append("diag_tail: tail starts before weights stabilise")
        out += _tail_shape("diag_tail", d.lead, d.ratio)
    for (j, i) in f.sparse:
        tail = f.row_tails.get(j)
        if tail is not None and i >= tail.i_start:
            out.append(f"sparse[{j},{i}]: overlap with row tail")
        if d is not None and i == j and j >= d.j_start:
            out.append(f"sparse[{j},{i}]: overlap with diagonal tail")
    if d is not None:
        for j, tail in f.row_tails.items():
            if j >= d.j_start and j >= tail.i_start:
                out.append(f"row_tails[{j}]: overlap with diagonal tail at ({j},{j})")
    if f.is_zero and not f.zero_ok:
        out.append("f must be non-zero")
    return out


def _tail_shape(where: str, lead: Scalar, ratio: Fraction) -> list[str]:
    out = []
    if not isinstance(lead, Scalar) or not lead.is_monomial:
        out.append(f"{where}: lead must be a nonzero monomial")
    if ratio <= 0:
        out.append(f"{where}: non-decaying tail (ratio must be > 0)")
    return out


def require_valid(f: OperatorDesc, nonzero: bool = True) -> None:
    problems = validate(f)
    if nonzero and f.is_zero and "f must be non-zero" not in problems:
        problems.append("f must be non-zero")
    if problems:
        raise OperatorError(problems)


# --- entries ----------------------------------------------------------------


def entry(f: OperatorDesc, j: int, i: int) -> Scalar:
    a = f.sparse.get((j, i))
    if a is not None:
        return a
    tail = f.row_tails.get(j)
    if tail is not None and i >= tail.i_start:
        return tail.entry(i)
    d = f.diag_tail
    if d is not None and i == j and j >= d.j_start:
        return d.entry(j)
    return _ZERO_S


_ZERO_S = Scalar()


def effective_entry(f: OperatorDesc, j: int, i: int) -> NormValue:
    """``m[j, i] = u_j * |a[j, i]| / w_i``; Zero where there is no entry."""
    a = entry(f, j, i)
    if a.is_zero:
        return ZERO
    return f.codomain.weight(j) * a.norm() / f.domain.weight(i)


def active_positions(f: OperatorDesc) -> list[tuple[int, int]]:
    """Sparse positions plus the first position of each tail.

    Tails decay strictly, so the supremum of effective entries over the whole
    matrix is the maximum over this finite list.
    """
    pos = list(f.sparse)
    pos += [(j, tail.i_start) for j, tail in f.row_tails.items()]
    if f.diag_tail is not None:
        pos.append((f.diag_tail.j_start, f.diag_tail.j_start))
    return sorted(pos)


def active_columns(f: OperatorDesc) -> list[int]:
    return sorted({i for _, i in active_positions(f)})


def special_rows(f: OperatorDesc) -> list[int]:
    """Rows holding sparse entries or a row tail (finitely many)."""
    return sorted({j for j, _ in f.sparse} | set(f.row_tails))


def column_entries(f: OperatorDesc, i: int) -> list[tuple[int, Scalar]]:
    rows = {j for (j, ii) in f.sparse if ii == i}
    rows |= {j for j, tail in f.row_tails.items() if i >= tail.i_start}
    if f.diag_tail is not None and i >= f.diag_tail.j_start:
        rows.add(i)
    return [(j, entry(f, j, i)) for j in sorted(rows)]


def row_candidates(f: OperatorDesc, j: int, I0: frozenset = frozenset()) -> list[tuple[int, NormValue]]:
    """Positions in row ``j`` (columns outside ``I0``) that can carry the row
    supremum: every sparse entry, the first surviving tail column, and the
    diagonal. Within a tail the effective entries decrease strictly, so the
    first surviving column dominates the rest of that tail."""
    out = [(i, effective_entry(f, j, i)) for (jj, i) in f.sparse if jj == j and i not in I0]
    tail = f.row_tails.get(j)
    if tail is not None:
        i = tail.i_start
        while i in I0:
            i += 1
        out.append((i, effective_entry(f, j, i)))
    d = f.diag_tail
    if d is not None and j >= d.j_start and j not in I0:
        out.append((j, effective_entry(f, j, j)))
    return sorted(out)


def pure_diag_rows(f: OperatorDesc, skip: Iterable[int] = ()) -> Iterator[int]:
    """Diagonal-tail rows without sparse or row-tail entries, ascending,
    omitting ``skip``. Effective entries along these rows strictly decrease."""
    d = f.diag_tail
    if d is None:
        return
    blocked = set(special_rows(f)) | set(skip)
    j = d.j_start
    while True:
        if j not in blocked:
            yield j
        j += 1


def row_sups(f: OperatorDesc, I0: frozenset = frozenset(), J0: frozenset = frozenset()) -> list[tuple[int, NormValue, list]]:
    """Row suprema of the matrix with columns ``I0`` and rows ``J0`` removed.

    Returns ``(j, M_j, candidates)`` for every special row outside ``J0`` and
    for the first surviving pure diagonal row, whose supremum bounds every
    later pure diagonal row. Rows not listed have supremum at most that of the
    listed diagonal representative (or zero when there is none).
    """
    I0, J0 = frozenset(I0), frozenset(J0)
    out = []
    for j in special_rows(f):
        if j in J0:
            continue
        cands = row_candidates(f, j, I0)
        out.append((j, max((m for _, m in cands), default=ZERO), cands))
    for j in pure_diag_rows(f, skip=I0 | J0):
        cands = row_candidates(f, j, I0)
        out.append((j, cands[0][1], cands))
        break
    out.sort(key=lambda row: row[0])
    return out


def rows_above(f: OperatorDesc, threshold: NormValue) -> list[int]:
    """All rows ``j`` with ``M_j > threshold``; finite because ``M_j -> 0``."""
    rows = [j for j, m, _ in row_sups(f) if m > threshold]
    for j in pure_diag_rows(f):
        if effective_entry(f, j, j) <= threshold:
            break
        rows.append(j)
    return sorted(set(rows))


# --- action and norm --------------------------------------------------------


def apply(f: OperatorDesc, x: PVector) -> PVector:
    if x.space != f.domain:
        raise ValueError("vector does not live over the operator's domain")
    support = x.support
    rows = set(special_rows(f))
    d = f.diag_tail
    if d is not None:
        rows |= {i for i in support if i >= d.j_start}
    out = {}
    for j in sorted(rows):
        acc = _ZERO_S
        for i in support:
            a = entry(f, j, i)
            if not a.is_zero:
                acc = acc + a * x[i]
        if not acc.is_zero:
            out[j] = acc
    return PVector(f.codomain, out)


def operator_norm(f: OperatorDesc) -> NormValue:
    best = ZERO
    for j, i in active_positions(f):
        m = effective_entry(f, j, i)
        if m > best:
            best = m
    return best


def probe(f: OperatorDesc, i: int) -> PVector:
    """Unit vector at column ``i``: ``w_i * |x(i)| = 1``."""
    if not column_entries(f, i):
        raise ValueError(f"column {i} has no entries")
    w = f.domain.weight(i)
    return PVector(f.domain, {i: t(w.exp)})


# --- restriction ------------------------------------------------------------


def _clip_tail(start: int, entry_at, holes: set[int], make_tail):
    """Split a tail at its last hole: surviving entries before it become
    sparse, the tail restarts right after it."""
    inside = sorted(h for h in holes if h >= start)
    if not inside:
        return {}, make_tail(start, entry_at(start))
    cut = inside[-1]
    sparse = {k: entry_at(k) for k in range(start, cut) if k not in holes}
    return sparse, make_tail(cut + 1, entry_at(cut + 1))


def restrict(f: OperatorDesc, spec: RestrictionSpec) -> OperatorDesc:
    """Zero-extend from the coordinates outside ``I0``, apply ``f``, project
    away ``J0``. Represented over the same index sets with those rows and
    columns removed; an emptied matrix comes back flagged ``zero_ok``."""
    I0, J0 = spec.I0, spec.J0
    sparse = {(j, i): a for (j, i), a in f.sparse.items() if i not in I0 and j not in J0}
    row_tails = {}
    for j, tail in f.row_tails.items():
        if j in J0:
            continue
        extra, new_tail = _clip_tail(
            tail.i_start,
            tail.entry,
            set(I0),
            lambda s, lead, r=tail.ratio: RowTail(s, lead, r),
        )
        sparse.update({(j, i): a for i, a in extra.items()})
        row_tails[j] = new_tail
    diag = None
    d = f.diag_tail
    if d is not None:
        extra, diag = _clip_tail(
            d.j_start,
            d.entry,
            set(I0) | set(J0),
            lambda s, lead, r=d.ratio: DiagTail(s, lead, r),
        )
        sparse.update({(j, j): a for j, a in extra.items()})
    return OperatorDesc(f.domain, f.codomain, sparse, row_tails, diag, zero_ok=True)
