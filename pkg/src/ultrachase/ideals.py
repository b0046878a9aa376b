"""Finite analogs of the ideal and ultrafilter combinatorics behind the
ultrafilter form of Chase's lemma.

Subsets of ``{0, ..., n-1}`` are bitmasks. On a finite ground set the
"all finite subsets belong" axiom contradicts properness, so the class of
ideals used in the infinite argument is empty (:func:`finite_D_empty`).
What survives is the proof skeleton, run here on plain proper ideals:

* descending through bad splits ends at a prime element,
* a greedy maximal disjoint family of primes leaves a complement whose
  subsets all lie in the ideal,
* each prime ``M`` yields the ultrafilter ``{A : M \\ A in ideal}``, which on a
  finite set is principal.

Every construction is checked against an exhaustive oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from . import kernels

MAX_GROUND = 16
MAX_EXHAUSTIVE_D = 5


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def points_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def fmt_mask(mask: int) -> str:
    return "{" + ",".join(map(str, points_of(mask))) + "}"


def submasks(m: int) -> Iterator[int]:
    """All subsets of ``m`` in increasing order, starting with the empty set."""
    s = 0
    while True:
        yield s
        if s == m:
            return
        s = (s - m) & m


def _table(n: int, members: Iterable[int]) -> bytes:
    buf = bytearray(1 << n)
    for m in members:
        buf[m] = 1
    return bytes(buf)


@dataclass(frozen=True)
class SetSystem:
    n: int
    family: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_GROUND:
            raise ValueError(f"ground size must be in 0..{MAX_GROUND}")
        fam = tuple(sorted(set(self.family)))
        full = (1 << self.n) - 1
        for m in fam:
            if m < 0 or m & ~full:
                raise ValueError(f"member {m:#x} is not a subset of the ground set")
        object.__setattr__(self, "family", fam)

    @classmethod
    def of(cls, n: int, sets: Iterable[Iterable[int]]) -> SetSystem:
        return cls(n, tuple(mask_of(s) for s in sets))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def table(self) -> bytes:
        return _table(self.n, self.family)

    def __contains__(self, mask: int) -> bool:
        return mask in set(self.family)


@dataclass(frozen=True)
class ProperIdeal:
    """Downward closed, union closed, contains the empty set, excludes the
    full set. ``union_closed=False`` relaxes the union axiom only, for
    experimenting with proper down-sets."""

    n: int
    members: frozenset
    union_closed: bool = True

    def __post_init__(self):
        if not 0 <= self.n <= MAX_GROUND:
            raise ValueError(f"ground size must be in 0..{MAX_GROUND}")
        object.__setattr__(self, "members", frozenset(self.members))
        full = (1 << self.n) - 1
        if any(m < 0 or m & ~full for m in self.members):
            raise ValueError("member outside the ground set")
        if 0 not in self.members:
            raise ValueError("ideal must contain the empty set")
        if full in self.members:
            raise ValueError(f"ideal must not contain the full set {fmt_mask(full)}")
        tab = self.table()
        m, s = kernels.down_violation(tab, self.n)
        if m >= 0:
            raise ValueError(f"not downward closed: {fmt_mask(m)} in, {fmt_mask(s)} out")
        if self.union_closed:
            a, b = kernels.union_violation(tab, self.n)
            if a >= 0:
                raise ValueError(
                    f"not union closed: {fmt_mask(a)} | {fmt_mask(b)} = {fmt_mask(a | b)} missing"
                )

    @classmethod
    def generated_by(cls, n: int, generators: Iterable[Iterable[int]]) -> ProperIdeal:
        """Smallest ideal containing the generators: all subsets of their union."""
        top = 0
        for g in generators:
            top |= mask_of(g)
        return cls(n, frozenset(submasks(top)))

    @classmethod
    def from_code(cls, n: int, code: int) -> ProperIdeal:
        return cls(n, frozenset(m for m in range(1 << n) if (code >> m) & 1))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def table(self) -> bytes:
        return _table(self.n, self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def to_json(self) -> dict:
        return {"n": self.n, "members": [list(points_of(m)) for m in sorted(self.members)]}


def enumerate_proper_ideals(n: int) -> list[ProperIdeal]:
    """Every proper ideal on ``n <= 4`` points, by scanning all families."""
    return [ProperIdeal.from_code(n, code) for code in kernels.ideal_codes(n)]


def random_proper_ideal(n: int, rng) -> ProperIdeal:
    gens = []
    for _ in range(rng.randint(0, n)):
        gens.append([i for i in range(n) if rng.random() < 0.4])
    top = mask_of(p for g in gens for p in g)
    if top == (1 << n) - 1:
        top &= ~(1 << rng.randrange(n))
    return ProperIdeal(n, frozenset(submasks(top)))


# --- conditions of the ideal class used in the infinite argument ------------


@dataclass
class ConditionResult:
    number: int
    passed: bool
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"condition": self.number, "passed": self.passed, "witnesses": self.witnesses}


@dataclass
class DReport:
    n: int
    conditions: list[ConditionResult]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.conditions)

    def __getitem__(self, number: int) -> ConditionResult:
        return self.conditions[number - 1]

    def to_json(self) -> dict:
        return {"n": self.n, "conditions": [c.to_json() for c in self.conditions]}


def disjoint_families(avail: int) -> Iterator[list[int]]:
    """Every family of pairwise disjoint nonempty subsets of ``avail``."""
    if avail == 0:
        yield []
        return
    low = avail & -avail
    rest = avail ^ low
    yield from disjoint_families(rest)
    for sub in submasks(rest):
        for tail in disjoint_families(rest & ~sub):
            yield [low | sub] + tail


def check_D_conditions(sys: SetSystem, max_witnesses: int = 3) -> DReport:
    """Evaluate the five defining conditions exhaustively.

    On a finite ground set every subset is finite and every family of subsets
    is countable, so the conditions become finite enumerations.
    """
    if sys.n > MAX_EXHAUSTIVE_D:
        raise ValueError(f"exhaustive check needs ground size <= {MAX_EXHAUSTIVE_D}")
    fam = set(sys.family)
    tab = sys.table()
    full = sys.full
    results = []

    results.append(ConditionResult(1, full not in fam, [] if full not in fam else [fmt_mask(full)]))

    missing = [fmt_mask(m) for m in range(full + 1) if m not in fam]
    results.append(ConditionResult(2, not missing, missing[:max_witnesses]))

    a, b = kernels.union_violation(tab, sys.n)
    results.append(ConditionResult(3, a < 0, [] if a < 0 else [[fmt_mask(a), fmt_mask(b)]]))

    m, s = kernels.down_violation(tab, sys.n)
    results.append(ConditionResult(4, m < 0, [] if m < 0 else [[fmt_mask(m), fmt_mask(s)]]))

    bad5 = []
    for blocks in disjoint_families(full):
        for U in (blocks, blocks + [0]):
            if not any(
                _union_of(U, keep) in fam for keep in submasks((1 << len(U)) - 1)
            ):
                bad5.append([fmt_mask(x) for x in U])
                break
        if len(bad5) >= max_witnesses:
            break
    results.append(ConditionResult(5, not bad5, bad5))
    return DReport(sys.n, results)


def _union_of(U: list[int], keep: int) -> int:
    """Union of the members of ``U`` outside the finite subfamily ``keep``
    (the subfamily is coded as a bitmask over positions in ``U``)."""
    out = 0
    for k, x in enumerate(U):
        if not (keep >> k) & 1:
            out |= x
    return out


@dataclass
class DCertificate:
    n: int
    method: str
    families_checked: int
    families_passing: int
    explanation: str

    @property
    def empty(self) -> bool:
        return self.families_passing == 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "method": self.method,
            "families_checked": self.families_checked,
            "families_passing": self.families_passing,
            "empty": self.empty,
            "explanation": self.explanation,
        }


CLASH = (
    "condition (2) puts every finite subset, in particular the full ground set, "
    "into the family, while condition (1) excludes the full set"
)


def finite_D_empty(n: int) -> DCertificate:
    """Certify that no family on ``n`` points meets all five conditions.

    For ``n <= 3`` every one of the ``2**(2**n)`` families is checked; above
    that the (1)/(2) clash is the certificate.
    """
    if n < 1:
        raise ValueError("ground size must be at least 1")
    if n > 3:
        return DCertificate(n, "clash", 0, 0, CLASH)
    size = 1 << n
    passing = 0
    for code in range(1 << size):
        fam = tuple(m for m in range(size) if (code >> m) & 1)
        if check_D_conditions(SetSystem(n, fam)).all_pass:
            passing += 1
    return DCertificate(n, "enumeration", 1 << size, passing, CLASH)


# --- prime elements -----------------------------------------------------------


class NotPrimeError(ValueError):
    def __init__(self, M: int, split: int | None):
        self.M = M
        self.split = split
        if split is None:
            msg = f"{fmt_mask(M)} belongs to the ideal"
        else:
            msg = (
                f"{fmt_mask(M)} is not prime: neither {fmt_mask(split)} nor "
                f"{fmt_mask(M & ~split)} is in the ideal"
            )
        super().__init__(msg)


def is_prime(J: ProperIdeal, M: int) -> bool:
    tab = J.table()
    return not tab[M] and kernels.dichotomy_holds(tab, M)


def prime_set_bruteforce(J: ProperIdeal) -> list[int]:
    """All prime elements, by checking the dichotomy on every subset."""
    return list(kernels.prime_masks(J.table(), J.n))


def descend_to_prime(J: ProperIdeal, start: int) -> tuple[int, list[int]]:
    """Split bad pieces off ``start`` until no bad split remains.

    Returns the prime reached and the pieces removed. The pieces are pairwise
    disjoint non-members, so there are at most ``n`` of them.
    """
    tab = J.table()
    if tab[start]:
        raise ValueError(f"descent must start outside the ideal, got {fmt_mask(start)}")
    S = start
    pieces = []
    while True:
        s = kernels.bad_split(tab, S)
        if s < 0:
            return S, pieces
        pieces.append(s)
        S ^= s
        if len(pieces) > J.n:
            raise RuntimeError("disjoint non-member pieces exceed the ground size")


def prime_set_by_splitting(J: ProperIdeal) -> list[int]:
    found = {descend_to_prime(J, S)[0] for S in range(1 << J.n) if S not in J.members}
    return sorted(found)


def find_prime(J: ProperIdeal) -> int:
    """Least prime element (by bitmask), cross-checked between the descent
    and the brute-force scan."""
    brute = prime_set_bruteforce(J)
    split = prime_set_by_splitting(J)
    if brute != split:
        raise RuntimeError(
            f"prime sets disagree: scan {list(map(fmt_mask, brute))}, "
            f"descent {list(map(fmt_mask, split))}"
        )
    return brute[0]


# --- maximal disjoint systems -------------------------------------------------


@dataclass
class DisjointSystem:
    members: tuple[int, ...]
    all_prime: bool
    pairwise_disjoint: bool
    complement_in_ideal: bool

    @property
    def ok(self) -> bool:
        return self.all_prime and self.pairwise_disjoint and self.complement_in_ideal

    def to_json(self) -> dict:
        return {
            "U0": [list(points_of(m)) for m in self.members],
            "all_prime": self.all_prime,
            "pairwise_disjoint": self.pairwise_disjoint,
            "complement_in_ideal": self.complement_in_ideal,
        }


def check_disjoint_system(J: ProperIdeal, U0: Iterable[int]) -> DisjointSystem:
    U0 = tuple(U0)
    union = 0
    disjoint = True
    for m in U0:
        if m & union:
            disjoint = False
        union |= m
    rest = J.full & ~union
    return DisjointSystem(
        U0,
        all(is_prime(J, m) for m in U0),
        disjoint,
        all(s in J.members for s in submasks(rest)),
    )


def max_disjoint_system(J: ProperIdeal) -> DisjointSystem:
    """Greedily adjoin the least prime disjoint from those chosen."""
    primes = prime_set_bruteforce(J)
    chosen: list[int] = []
    used = 0
    while True:
        nxt = next((m for m in primes if not m & used), None)
        if nxt is None:
            break
        chosen.append(nxt)
        used |= nxt
        if len(chosen) > J.n:
            raise RuntimeError("disjoint primes exceed the ground size")
    return check_disjoint_system(J, chosen)


# --- ultrafilters -------------------------------------------------------------


def filter_family(J: ProperIdeal, M: int) -> frozenset:
    """``{A : M \\ A in J}`` with no primality check."""
    return frozenset(A for A in range(1 << J.n) if (M & ~A) in J.members)


def is_filter(n: int, fam: frozenset) -> bool:
    full = (1 << n) - 1
    if full not in fam or 0 in fam:
        return False
    for A in fam:
        for B in fam:
            if A & B not in fam:
                return False
        # upward closure: adding any single point stays inside
        for p in range(n):
            if A | (1 << p) not in fam:
                return False
    return True


def is_ultrafilter(n: int, fam: frozenset) -> bool:
    if not is_filter(n, fam):
        return False
    return kernels.ultra_violation(_table(n, fam), n) < 0


@dataclass
class UltrafilterResult:
    M: int
    members: tuple[int, ...]
    generator: int

    def to_json(self) -> dict:
        return {
            "M": list(points_of(self.M)),
            "generator": self.generator,
            "members": [list(points_of(m)) for m in self.members],
        }


def ultrafilter_from_prime(J: ProperIdeal, M: int) -> UltrafilterResult:
    if M in J.members:
        raise NotPrimeError(M, None)
    s = kernels.bad_split(J.table(), M)
    if s >= 0:
        raise NotPrimeError(M, s)
    fam = filter_family(J, M)
    if not is_ultrafilter(J.n, fam):
        raise RuntimeError(f"F({fmt_mask(M)}) failed the ultrafilter axioms")
    core = J.full
    for A in fam:
        core &= A
    pts = points_of(core)
    if len(pts) != 1 or fam != frozenset(A for A in range(1 << J.n) if A & core):
        raise RuntimeError(f"F({fmt_mask(M)}) is not principal")
    return UltrafilterResult(M, tuple(sorted(fam)), pts[0])


# --- built-in demos -----------------------------------------------------------


def demo_ideals() -> dict[str, ProperIdeal]:
    return {
        "pair": ProperIdeal.generated_by(3, [[0], [1]]),
        "trivial": ProperIdeal(2, frozenset({0})),
        "point": ProperIdeal(1, frozenset({0})),
        "coatoms": ProperIdeal(3, frozenset(range(7)), union_closed=False),
    }


def run_demo(J: ProperIdeal) -> dict:
    M = find_prime(J)
    system = max_disjoint_system(J)
    try:
        uf = ultrafilter_from_prime(J, M).to_json()
    except RuntimeError as exc:
        # without union closure F(M) need not be a filter
        if J.union_closed:
            raise
        uf = {"error": str(exc)}
    return {
        "ideal": J.to_json(),
        "union_closed": J.union_closed,
        "prime": list(points_of(M)),
        "primes": [list(points_of(m)) for m in prime_set_bruteforce(J)],
        "disjoint_system": system.to_json(),
        "ultrafilter": uf,
        "ok": system.ok,
    }
