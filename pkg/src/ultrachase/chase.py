"""Chase-type witnesses, strict norm reductions and the adversarial recursion.

Two routes produce witness triples ``(r', I0, J0)`` with ``r' * ||f|| > r`` and
``f[prod^{I0, r'} V]`` inside ``sum^{J0, r} W``:

* :func:`chase_witness` reads row suprema off the descriptor and certifies
  with :func:`check_inclusion`;
* :func:`adversary_run` replays the contradiction argument as a forward
  recursion that only talks to the :func:`counterexample` oracle, ``apply``
  and norms, never to field structure. :func:`verify_transcript` then checks
  every invariant of the recursion on the finite record, including the
  isoceles dominance of ``x(n)`` in row ``j(n)`` of ``f(s)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .operators import (
    OperatorDesc,
    RestrictionSpec,
    active_positions,
    apply,
    effective_entry,
    operator_norm,
    require_valid,
    restrict,
    row_sups,
    rows_above,
)
from .spaces import PVector, ProdSubset, UltraSet, in_region, zero_vector
from .valuation import NormValue, Scalar, nv_between, t

P = NormValue(1)  # the factor p, as a norm value


class ChaseError(RuntimeError):
    """An internal certification step failed; never returned silently."""


@dataclass(frozen=True)
class Witness:
    r_prime: NormValue
    I0: frozenset
    J0: frozenset
    certified: bool

    def to_json(self) -> dict:
        return {
            "r_prime": self.r_prime.to_json(),
            "I0": sorted(self.I0),
            "J0": sorted(self.J0),
            "certified": self.certified,
        }


def _positive(name: str, v: NormValue) -> None:
    if v.is_zero:
        raise ValueError(f"{name} must be positive")


def check_inclusion(f: OperatorDesc, r_prime: NormValue, I0, J0, r: NormValue) -> bool:
    """Decide ``f[prod^{I0, r'} V] <= sum^{J0, r} W`` exactly.

    Holds iff ``r' * M_j <= r`` for every row outside ``J0``, where ``M_j`` is
    the supremum over columns outside ``I0``. The ultrametric inequality gives
    soundness; single-coordinate vectors of norm exactly ``r'`` attain each
    ``M_j``, giving completeness.
    """
    _positive("r_prime", r_prime)
    _positive("r", r)
    return all(r_prime * m <= r for _, m, _ in row_sups(f, frozenset(I0), frozenset(J0)))


def counterexample(f: OperatorDesc, r: NormValue, r_prime: NormValue, I0, J0) -> PVector | None:
    """Lexicographically least violating position as a single-coordinate vector.

    Returns None exactly when :func:`check_inclusion` holds. Otherwise the
    vector sits at column ``i`` with norm exactly ``r_prime``, so it lies in
    ``prod^{I0, r'} V`` while its image leaves ``sum^{J0, r} W`` at row ``j``.
    """
    _positive("r_prime", r_prime)
    _positive("r", r)
    best = None
    for j, _, cands in row_sups(f, frozenset(I0), frozenset(J0)):
        for i, m in cands:
            if r_prime * m > r:
                if best is None or (j, i) < best:
                    best = (j, i)
                break
    if best is None:
        return None
    _, i = best
    return PVector(f.domain, {i: coordinate_of_norm(f, i, r_prime)})


def coordinate_of_norm(f: OperatorDesc, i: int, value: NormValue) -> Scalar:
    """Monomial ``c`` with ``w_i * |c| = value``."""
    e = (value / f.domain.weight(i)).exp
    return t(-e)


def chase_witness(f: OperatorDesc, r: NormValue) -> Witness:
    require_valid(f)
    _positive("r", r)
    norm = operator_norm(f)
    r_prime = P * norm.inverse() * r
    if not f.domain.index.is_omega:
        I0 = frozenset(f.domain.index.indices())
        J0 = frozenset()
    else:
        I0 = frozenset()
        J0 = frozenset(rows_above(f, norm / P))
    if not check_inclusion(f, r_prime, I0, J0, r) or not r_prime * norm > r:
        raise ChaseError(f"witness ({r_prime!r}, {sorted(I0)}, {sorted(J0)}) failed certification")
    return Witness(r_prime, I0, J0, True)


def chase_witness_ultra(f: OperatorDesc, r: NormValue) -> tuple[NormValue, UltraSet, frozenset]:
    w = chase_witness(f, r)
    return w.r_prime, UltraSet.embed(sorted(w.I0)), w.J0


def witness_from_ultra(f: OperatorDesc, r: NormValue, r_prime: NormValue, U0: UltraSet, J0) -> Witness:
    """Pull an ultrafilter-form triple back along the canonical embedding and
    certify it as an ordinary witness."""
    I0 = U0.points()
    ok = check_inclusion(f, r_prime, I0, J0, r) and r_prime * operator_norm(f) > r
    return Witness(r_prime, I0, frozenset(J0), ok)


@dataclass(frozen=True)
class Reduction:
    I0: frozenset
    J0: frozenset
    norm_before: NormValue
    norm_after: NormValue

    def to_json(self) -> dict:
        return {
            "I0": sorted(self.I0),
            "J0": sorted(self.J0),
            "norm_before": self.norm_before.to_json(),
            "norm_after": self.norm_after.to_json(),
            "strict": self.norm_after < self.norm_before,
        }


def norm_reduction(f: OperatorDesc) -> Reduction:
    """Remove every row that attains ``||f||``; the restricted norm is strictly
    smaller because each tail attains its supremum only at its start."""
    require_valid(f)
    norm = operator_norm(f)
    J0 = frozenset(j for j, i in active_positions(f) if effective_entry(f, j, i) == norm)
    after = operator_norm(restrict(f, RestrictionSpec(frozenset(), J0)))
    if not after < norm:
        raise ChaseError(f"restriction to rows {sorted(J0)} did not reduce the norm")
    return Reduction(frozenset(), J0, norm, after)


def scaling_scalar(x: PVector, r_prime: NormValue) -> Scalar:
    """Monomial ``c`` with ``|c| * ||x|| = r_prime`` exactly."""
    if not x:
        raise ValueError("x must be non-zero")
    _positive("r_prime", r_prime)
    return t(-(r_prime / x.norm()).exp)


# --- adversarial recursion ---------------------------------------------------


@dataclass(frozen=True)
class Step:
    j: int
    x: PVector
    r_prime_next: NormValue
    J: frozenset
    I: frozenset


@dataclass
class Transcript:
    r: NormValue
    r_prime0: NormValue
    steps: list[Step] = field(default_factory=list)
    certified_at: int | None = None
    witness: Witness | None = None
    max_steps: int = 0
    radius_rule: str = "strict"

    @property
    def exhausted(self) -> bool:
        return self.certified_at is None

    def r_prime(self, n: int) -> NormValue:
        return self.r_prime0 if n == 0 else self.steps[n - 1].r_prime_next

    def to_json(self) -> dict:
        outcome = (
            {"kind": "exhausted", "max_steps": self.max_steps}
            if self.exhausted
            else {"kind": "certified", "n": self.certified_at, "witness": self.witness.to_json()}
        )
        return {
            "r": self.r.to_json(),
            "r_prime0": self.r_prime0.to_json(),
            "radius_rule": self.radius_rule,
            "steps": [
                {
                    "j": s.j,
                    "x": s.x.to_json(),
                    "r_prime_next": s.r_prime_next.to_json(),
                    "J": sorted(s.J),
                    "I": sorted(s.I),
                }
                for s in self.steps
            ],
            "outcome": outcome,
        }


def next_radius_strict(r_prime: NormValue, floor: NormValue, hit: NormValue) -> NormValue:
    """Keep ``r'`` when it is already below ``hit = ||f||^-1 ||f(x)(j)||``,
    otherwise step strictly between ``floor = ||f||^-1 r`` and ``hit``.

    The plain ``min(r', hit)`` lets a later ``x(h)`` reach the same norm as
    ``f(x(n))(j(n))`` in row ``j(n)`` and cancel it; staying strictly below
    ``hit`` keeps the isoceles step valid.
    """
    if r_prime < hit:
        return r_prime
    return nv_between(floor, hit)


def next_radius_min(r_prime: NormValue, floor: NormValue, hit: NormValue) -> NormValue:
    """``min(r', ||f||^-1 ||f(x)(j)||)``; only non-strict in condition (4)."""
    return min(r_prime, hit)


RADIUS_RULES: dict[str, Callable[[NormValue, NormValue, NormValue], NormValue]] = {
    "strict": next_radius_strict,
    "min": next_radius_min,
}


def adversary_run(
    f: OperatorDesc,
    r: NormValue,
    max_steps: int,
    radius_rule: str = "strict",
    oracle: Callable | None = None,
) -> Transcript:
    """Run the recursion ``x(n) in prod^{omega_<n, r'(n)} V`` with
    ``f(x(n)) not in sum^{J'_n, r} W`` until the oracle finds no violation.

    ``oracle(f, r, r_prime, I0, J0)`` defaults to :func:`counterexample`; the
    recursion itself only uses the oracle, ``apply`` and norms.
    """
    require_valid(f)
    _positive("r", r)
    if not f.domain.index.is_omega:
        raise ValueError("adversary_run needs an omega-indexed domain")
    update = RADIUS_RULES[radius_rule]
    oracle = oracle or counterexample
    norm = operator_norm(f)
    inv = norm.inverse()
    floor = inv * r
    tr = Transcript(r, P * floor, max_steps=max_steps, radius_rule=radius_rule)
    r_prime = tr.r_prime0
    J_seen: set[int] = set()
    for n in range(max_steps + 1):
        I_n = frozenset(range(n))
        J_n = frozenset(J_seen)
        x = oracle(f, r, r_prime, I_n, J_n)
        if x is None:
            tr.certified_at = n
            tr.witness = Witness(r_prime, I_n, J_n, check_inclusion(f, r_prime, I_n, J_n, r))
            return tr
        if n == max_steps:
            break
        y = apply(f, x)
        big = [j for j in y.support if y.coord_norm(j) > r]
        fresh = [j for j in big if j not in J_n]
        if not fresh:
            raise ChaseError(f"oracle vector at step {n} does not leave the region")
        j = fresh[0]
        r_prime = update(r_prime, floor, inv * y.coord_norm(j))
        J_seen.update(big)
        tr.steps.append(Step(j, x, r_prime, J_n, I_n))
    return tr


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class TranscriptReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def verify_transcript(f: OperatorDesc, r: NormValue, tr: Transcript) -> TranscriptReport:
    """Replay every invariant of the recursion on a finite transcript."""
    rep = TranscriptReport()
    for n, s in enumerate(tr.steps):
        if s.x.space != f.domain:
            raise ValueError(f"step {n}: vector does not live over the operator's domain")
    if tr.r != r:
        raise ValueError("transcript was produced for a different r")
    norm = operator_norm(f)
    floor = norm.inverse() * r
    steps = tr.steps
    images = [apply(f, s.x) for s in steps]
    rp = [tr.r_prime(n) for n in range(len(steps) + 1)]

    for n, s in enumerate(steps):
        rep.add(f"(1) r'({n}) > |f|^-1 r", rp[n] > floor, f"{rp[n]!r} vs {floor!r}")
        rep.add(f"(2) r'({n}) >= r'({n + 1})", rp[n] >= rp[n + 1], f"{rp[n]!r} vs {rp[n + 1]!r}")
        rep.add(
            f"(3) x({n}) in prod^(w<{n}, r'({n}))",
            in_region(s.x, ProdSubset(frozenset(range(n)), rp[n])),
        )
        hit = images[n].coord_norm(s.j)
        rep.add(
            f"(4) |f(x({n}))(j({n}))| >= |f| r'({n + 1})",
            hit >= norm * rp[n + 1],
            f"{hit!r} vs {norm * rp[n + 1]!r}",
        )
        worst = max((images[h].coord_norm(s.j) for h in range(n)), default=None)
        rep.add(
            f"(5) |f(x(h))(j({n}))| <= r for h < {n}",
            worst is None or worst <= r,
            "" if worst is None else f"max {worst!r}",
        )
        rep.add(f"I'({n}) = omega_<{n}", s.I == frozenset(range(n)))
        seen = frozenset(j for h in range(n) for j in images[h].support if images[h].coord_norm(j) > r)
        rep.add(f"J'({n}) = rows pushed above r before step {n}", s.J == seen)
    js = [s.j for s in steps]
    rep.add("j injective", len(set(js)) == len(js), str(js))

    if steps:
        s_vec = zero_vector(f.domain)
        for s in steps:
            s_vec = s_vec + s.x
        top = max(s_vec.coord_norm(i) for i in s_vec.support) if s_vec else None
        rep.add(
            "|s(i)| <= r'(0)",
            all(s_vec.coord_norm(i) <= rp[0] for i in s_vec.support),
            "" if top is None else f"max {top!r}",
        )
        f_s = apply(f, s_vec)
        prefix = zero_vector(f.domain)
        for n, s in enumerate(steps):
            before = prefix
            after = s_vec - (before + s.x)
            low = apply(f, before).coord_norm(s.j)
            rep.add(f"|f(s_<{n})(j({n}))| <= r", low <= r, f"{low!r}")
            rep.add(f"|s_>{n}| <= r'({n + 1})", after.norm() <= rp[n + 1], f"{after.norm()!r}")
            hit = images[n].coord_norm(s.j)
            total = f_s.coord_norm(s.j)
            rep.add(
                f"|f(s)(j({n}))| = |f(x({n}))(j({n}))| > r",
                total == hit and hit > r,
                f"{total!r} vs {hit!r}",
            )
            prefix = before + s.x

    if tr.certified_at is not None:
        w = tr.witness
        rep.add(
            "final witness certified",
            w is not None
            and w.r_prime * norm > r
            and check_inclusion(f, w.r_prime, w.I0, w.J0, r),
        )
    return rep
