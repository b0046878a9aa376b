"""Seeded generators for scalars, weight families, operators and vectors.

All generators take a ``random.Random`` so runs are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .operators import DiagTail, OperatorDesc, RowTail, require_valid
from .spaces import OMEGA, IndexSet, PVector, WeightFamily
from .valuation import NormValue, Scalar, t

DENOMS = (1, 1, 2, 3, 4)


def rand_exp(rng: random.Random, lo: int = -6, hi: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice(DENOMS))


def rand_coeff(rng: random.Random) -> Fraction:
    c = 0
    while c == 0:
        c = rng.randint(-5, 5)
    return Fraction(c, rng.choice((1, 1, 2, 3)))


def rand_scalar(rng: random.Random, max_terms: int = 4, allow_zero: bool = True) -> Scalar:
    while True:
        k = rng.randint(0 if allow_zero else 1, max_terms)
        s = Scalar([(rand_exp(rng), rand_coeff(rng)) for _ in range(k)])
        if allow_zero or not s.is_zero:
            return s


def rand_norm(rng: random.Random, lo: int = -4, hi: int = 4) -> NormValue:
    return NormValue(rand_exp(rng, lo, hi))


def rand_family(rng: random.Random, index: IndexSet) -> WeightFamily:
    if index.is_omega:
        explicit = tuple(rand_norm(rng, -2, 2) for _ in range(rng.randint(0, 4)))
        return WeightFamily(index, explicit, rand_norm(rng, -2, 2))
    return WeightFamily(index, tuple(rand_norm(rng, -2, 2) for _ in range(index.size)))


def entry_of_effective(dom: WeightFamily, cod: WeightFamily, j: int, i: int, m: NormValue, c) -> Scalar:
    """Monomial ``a`` with ``u_j * |a| / w_i = m`` and leading coefficient ``c``."""
    e = (m * dom.weight(i) / cod.weight(j)).exp
    return t(-e, c)


def rand_operator(rng: random.Random, width: int = 7) -> OperatorDesc:
    """A random valid descriptor; about one in five has a finite domain."""
    if rng.random() < 0.2:
        dom = rand_family(rng, IndexSet(rng.randint(1, 5)))
        cod = rand_family(rng, OMEGA if rng.random() < 0.5 else IndexSet(rng.randint(1, 5)))
        cols = dom.index.size
        rows = cod.index.size if not cod.index.is_omega else width
        sparse = {}
        for _ in range(rng.randint(1, 6)):
            sparse[(rng.randrange(rows), rng.randrange(cols))] = rand_scalar(rng, 3, allow_zero=False)
        f = OperatorDesc(dom, cod, sparse)
        require_valid(f)
        return f

    dom = rand_family(rng, OMEGA)
    cod = rand_family(rng, OMEGA)
    sparse = {}
    for _ in range(rng.randint(0, 6)):
        sparse[(rng.randrange(width), rng.randrange(width))] = rand_scalar(rng, 3, allow_zero=False)
    row_tails = {}
    for _ in range(rng.randint(0, 2)):
        j = rng.randrange(width)
        start = dom.stable_from + rng.randint(0, 3)
        row_tails[j] = RowTail(start, t(rand_exp(rng), rand_coeff(rng)), Fraction(rng.randint(1, 4), rng.choice((1, 2, 3))))
    diag = None
    if rng.random() < 0.5:
        start = max(dom.stable_from, cod.stable_from) + rng.randint(0, 3)
        diag = DiagTail(start, t(rand_exp(rng), rand_coeff(rng)), Fraction(rng.randint(1, 4), rng.choice((1, 2, 3))))
    for (j, i) in list(sparse):
        rt = row_tails.get(j)
        if (rt is not None and i >= rt.i_start) or (diag is not None and i == j and j >= diag.j_start):
            del sparse[(j, i)]
    if diag is not None:
        for j in list(row_tails):
            if j >= diag.j_start and row_tails[j].i_start <= j:
                del row_tails[j]
    if not sparse and not row_tails and diag is None:
        sparse[(0, 0)] = rand_scalar(rng, 2, allow_zero=False)
    f = OperatorDesc(dom, cod, sparse, row_tails, diag)
    require_valid(f)
    return f


def rand_engineered(rng: random.Random, width: int = 6, hot: int | None = None) -> OperatorDesc:
    """Operator with at least three rows whose effective supremum exceeds
    ``||f|| / p``, with signed equal-magnitude entries that invite cancellation
    in the adversarial recursion."""
    dom = rand_family(rng, OMEGA)
    cod = rand_family(rng, OMEGA)
    top = rand_norm(rng, -3, 3)
    hot = hot or rng.randint(3, 5)
    rows = rng.sample(range(width + 2), hot)
    sparse = {}
    for n, j in enumerate(rows):
        # the first row pins the norm; the others sit in (top/p, top]
        drop = Fraction(0) if n == 0 else Fraction(rng.randint(0, 3), 4)
        i = rng.randrange(width)
        sparse[(j, i)] = entry_of_effective(dom, cod, j, i, top * NormValue(-drop), rng.choice((1, -1)) * rng.randint(1, 3))
        if rng.random() < 0.6:
            i2 = rng.randrange(width)
            if (j, i2) not in sparse:
                sparse[(j, i2)] = entry_of_effective(dom, cod, j, i2, top * NormValue(-drop), rng.choice((1, -1)))
    for _ in range(rng.randint(0, 4)):
        j, i = rng.randrange(width + 2), rng.randrange(width)
        if (j, i) not in sparse:
            m = top * NormValue(-Fraction(rng.randint(1, 12), 4))
            sparse[(j, i)] = entry_of_effective(dom, cod, j, i, m, rand_coeff(rng))
    diag = None
    if rng.random() < 0.5:
        start = max(dom.stable_from, cod.stable_from, width + 2) + rng.randint(0, 2)
        lead = entry_of_effective(dom, cod, start, start, top * NormValue(-Fraction(rng.randint(0, 6), 4)), rand_coeff(rng))
        diag = DiagTail(start, lead, Fraction(rng.randint(1, 3), rng.choice((1, 2))))
    f = OperatorDesc(dom, cod, sparse, {}, diag)
    require_valid(f)
    return f


def rand_vector(rng: random.Random, space: WeightFamily, width: int = 10, max_support: int = 4) -> PVector:
    limit = width if space.index.is_omega else space.index.size
    entries = {}
    for _ in range(rng.randint(0, max_support)):
        entries[rng.randrange(limit)] = rand_scalar(rng, 3, allow_zero=False)
    return PVector(space, entries)


def rand_vector_in_ball(
    rng: random.Random, space: WeightFamily, zero_on, radius: NormValue, width: int = 10
) -> PVector:
    """Random vector vanishing on ``zero_on`` with every coordinate norm at
    most ``radius``; about half of the coordinates sit exactly on the sphere."""
    limit = width if space.index.is_omega else space.index.size
    free = [i for i in range(limit) if i not in zero_on]
    entries = {}
    if not free:
        return PVector(space, {})
    for _ in range(rng.randint(1, 4)):
        i = rng.choice(free)
        c = rand_scalar(rng, 3, allow_zero=False)
        target = radius * NormValue(-Fraction(rng.choice((0, 0, 1, 2, 3)), rng.choice((1, 2))))
        shift = (target / (space.weight(i) * c.norm())).exp
        entries[i] = c * t(-shift)
    return PVector(space, entries)
