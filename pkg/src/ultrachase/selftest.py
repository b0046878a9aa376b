"""The acceptance suite: one function per criterion, each deterministic in the seed."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import ideals as ID
from .chase import (
    P,
    adversary_run,
    chase_witness,
    chase_witness_ultra,
    check_inclusion,
    counterexample,
    norm_reduction,
    scaling_scalar,
    verify_transcript,
    witness_from_ultra,
)
from .operators import (
    RestrictionSpec,
    active_columns,
    apply,
    operator_norm,
    probe,
    restrict,
    row_sups,
    rows_above,
    special_rows,
)
from .randgen import (
    rand_engineered,
    rand_operator,
    rand_scalar,
    rand_vector,
    rand_vector_in_ball,
)
from .spaces import OMEGA, ProdSubset, SumSubset, UltraSet, WeightFamily, in_region, region_equiv_principal
from .valuation import ONE, NormValue, Scalar, get_base, nv_max


@dataclass
class Outcome:
    id: int
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def fail(self, what) -> None:
        self.failures.append(what)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": len(self.failures),
            "first_failures": [str(x) for x in self.failures[:3]],
            "stats": self.stats,
        }


def _rng(seed: int, cid: int) -> random.Random:
    return random.Random(seed * 1009 + cid)


def _pool(seed: int, count: int = 200):
    rng = _rng(seed, 100)
    return [rand_operator(rng) for _ in range(count)]


def _r_choice(rng) -> NormValue:
    return NormValue(rng.randint(-3, 3))


def crit_valuation(seed: int, pairs: int = 10_000) -> Outcome:
    out = Outcome(1, "valuation laws")
    rng = _rng(seed, 1)
    isoceles = 0
    for _ in range(pairs):
        a, b = rand_scalar(rng), rand_scalar(rng)
        if rng.random() < 0.2 and not a.is_zero:
            # same leading exponent on both sides stresses cancellation
            q, c = a.leading()
            b = b + Scalar.monomial(q, -c)
        out.cases += 1
        na, nb = a.norm(), b.norm()
        if (a * b).norm() != na * nb:
            out.fail(("mul", a, b))
        s = (a + b).norm()
        if not s <= nv_max(na, nb):
            out.fail(("ultrametric", a, b))
        if na != nb:
            isoceles += 1
            if s != nv_max(na, nb):
                out.fail(("isoceles", a, b))
    out.stats = {"pairs": pairs, "isoceles_cases": isoceles}
    return out


def crit_norm_attainment(seed: int, pool=None, vectors: int = 1000) -> Outcome:
    out = Outcome(2, "operator-norm attainment")
    pool = pool or _pool(seed)
    rng = _rng(seed, 2)
    for k, f in enumerate(pool):
        out.cases += 1
        norm = operator_norm(f)
        best = NormValue(None)
        for i in active_columns(f):
            x = probe(f, i)
            if x.norm() != ONE:
                out.fail((k, "probe not unit", i))
            best = max(best, apply(f, x).norm() / x.norm())
        if best != norm:
            out.fail((k, "norm", norm, best))
    per = max(1, vectors // len(pool))
    checked = 0
    for k, f in enumerate(pool):
        for _ in range(per):
            x = rand_vector(rng, f.domain)
            checked += 1
            if not apply(f, x).norm() <= operator_norm(f) * x.norm():
                out.fail((k, "bound", x))
    out.cases += checked
    out.stats = {"operators": len(pool), "vectors": checked}
    return out


def crit_witness(seed: int, pool=None, vectors: int = 1000) -> Outcome:
    out = Outcome(3, "Chase witnesses")
    pool = pool or _pool(seed)
    rng = _rng(seed, 3)
    per = max(1, vectors // len(pool))
    checked = 0
    finite_domains = 0
    for k, f in enumerate(pool):
        r = _r_choice(rng)
        w = chase_witness(f, r)
        out.cases += 1
        finite_domains += not f.domain.index.is_omega
        if not (w.certified and check_inclusion(f, w.r_prime, w.I0, w.J0, r)):
            out.fail((k, "certification", w))
        if not w.r_prime * operator_norm(f) > r:
            out.fail((k, "radius", w))
        region_in = ProdSubset(w.I0, w.r_prime)
        region_out = SumSubset(w.J0, r)
        for _ in range(per):
            x = rand_vector_in_ball(rng, f.domain, w.I0, w.r_prime)
            checked += 1
            if not in_region(x, region_in):
                out.fail((k, "sampler left the ball", x))
            elif not in_region(apply(f, x), region_out):
                out.fail((k, "image escaped", x))
    out.cases += checked
    out.stats = {"operators": len(pool), "vectors": checked, "finite_domains": finite_domains}
    return out


def crit_reduction(seed: int, pool=None) -> Outcome:
    out = Outcome(4, "strict norm reduction")
    pool = pool or _pool(seed)
    rng = _rng(seed, 4)
    for k, f in enumerate(pool):
        out.cases += 1
        red = norm_reduction(f)
        if not red.norm_after < red.norm_before:
            out.fail((k, "not strict", red))
        if not isinstance(red.I0, frozenset) or not isinstance(red.J0, frozenset):
            out.fail((k, "not finite", red))
        if operator_norm(restrict(f, RestrictionSpec(red.I0, red.J0))) != red.norm_after:
            out.fail((k, "recomputed norm differs", red))
        # the witness route: ||f restricted|| <= 1 / r' < ||f|| for r = 1
        w = chase_witness(f, ONE)
        g = restrict(f, RestrictionSpec(w.I0, w.J0))
        bound = w.r_prime.inverse()
        if not (operator_norm(g) <= bound < operator_norm(f)):
            out.fail((k, "witness route", w))
        if f.domain.index.is_omega:
            x = rand_vector(rng, f.domain)
            x = type(x)(x.space, {i: c for i, c in x.items() if i not in w.I0})
            if x:
                c = scaling_scalar(x, w.r_prime)
                if c.norm() * x.norm() != w.r_prime:
                    out.fail((k, "scaling", x))
                if not apply(g, x).norm() <= bound * x.norm():
                    out.fail((k, "scaled bound", x))
    out.stats = {"operators": len(pool)}
    return out


def crit_adversary(seed: int, count: int = 100, budget: int = 64) -> Outcome:
    out = Outcome(5, "adversary recursion fidelity")
    rng = _rng(seed, 5)
    steps_hist: dict[int, int] = {}
    for k in range(count):
        f = rand_engineered(rng)
        r = _r_choice(rng)
        out.cases += 1
        norm = operator_norm(f)
        hot = rows_above(f, norm / P)
        if len(hot) < 3:
            out.fail((k, "generator produced fewer than 3 hot rows"))
        tr = adversary_run(f, r, budget)
        if tr.exhausted:
            out.fail((k, "exhausted"))
            continue
        if len(tr.steps) > len(hot):
            out.fail((k, "step bound", len(tr.steps), len(hot)))
        rep = verify_transcript(f, r, tr)
        if not rep.ok:
            out.fail((k, [c.name for c in rep.failed()]))
        steps_hist[len(tr.steps)] = steps_hist.get(len(tr.steps), 0) + 1
    out.stats = {"operators": count, "budget": budget, "steps_histogram": {str(k): v for k, v in sorted(steps_hist.items())}}
    return out


def crit_oracle(seed: int, pool=None, triples: int = 500) -> Outcome:
    out = Outcome(6, "oracle dichotomy")
    pool = pool or _pool(seed)
    rng = _rng(seed, 6)
    found = 0
    for k in range(triples):
        f = pool[rng.randrange(len(pool))]
        r = _r_choice(rng)
        norm = operator_norm(f)
        rp = norm.inverse() * r * NormValue(Fraction(rng.randint(-4, 8), 4))
        cols = active_columns(f)
        rows = special_rows(f) + [j for j, _, _ in row_sups(f)]
        I0 = frozenset(i for i in cols if rng.random() < 0.3)
        J0 = frozenset(j for j in rows if rng.random() < 0.4)
        out.cases += 1
        inc = check_inclusion(f, rp, I0, J0, r)
        x = counterexample(f, r, rp, I0, J0)
        if inc == (x is not None):
            out.fail((k, "dichotomy", inc))
            continue
        if x is not None:
            found += 1
            if x.norm() != rp:
                out.fail((k, "counterexample norm", x))
            if not in_region(x, ProdSubset(I0, rp)):
                out.fail((k, "counterexample outside the ball", x))
            if in_region(apply(f, x), SumSubset(J0, r)):
                out.fail((k, "counterexample image inside", x))
    out.stats = {"triples": triples, "counterexamples": found}
    return out


def crit_ideals(seed: int, random_per_n: int = 200) -> Outcome:
    out = Outcome(7, "finite ideal analogs")
    rng = _rng(seed, 7)
    counts = {}

    def one(J: ID.ProperIdeal, all_M: bool):
        out.cases += 1
        brute = ID.prime_set_bruteforce(J)
        split = ID.prime_set_by_splitting(J)
        if brute != split:
            out.fail(("prime sets", J.to_json()))
            return
        if ID.find_prime(J) != brute[0]:
            out.fail(("find_prime", J.to_json()))
        system = ID.max_disjoint_system(J)
        if not system.ok:
            out.fail(("disjoint system", J.to_json(), system.to_json()))
        prime_set = set(brute)
        candidates = range(1 << J.n) if all_M else sorted(prime_set | {rng.randrange(1 << J.n) for _ in range(6)})
        for M in candidates:
            is_uf = ID.is_ultrafilter(J.n, ID.filter_family(J, M))
            if is_uf != (M in prime_set):
                out.fail(("ultra iff prime", J.to_json(), M))
            try:
                ID.ultrafilter_from_prime(J, M)
                accepted = True
            except ID.NotPrimeError:
                accepted = False
            if accepted != (M in prime_set):
                out.fail(("ultrafilter_from_prime acceptance", J.to_json(), M))

    for n in range(1, 5):
        ideals = ID.enumerate_proper_ideals(n)
        counts[str(n)] = len(ideals)
        for J in ideals:
            one(J, all_M=True)
    for n in (5, 6):
        for _ in range(random_per_n):
            one(ID.random_proper_ideal(n, rng), all_M=False)
    d_empty = {}
    for n in (1, 2, 3):
        cert = ID.finite_D_empty(n)
        out.cases += 1
        d_empty[str(n)] = cert.families_checked
        if not (cert.empty and cert.method == "enumeration"):
            out.fail(("D nonempty", n))
    out.stats = {"exhaustive_ideals": counts, "random_per_n": random_per_n, "D_families_checked": d_empty}
    return out


def crit_principal(seed: int, pool=None, choices: int = 100, samples: int = 100) -> Outcome:
    out = Outcome(8, "principal ultrafilter equivalence")
    pool = pool or _pool(seed)
    rng = _rng(seed, 8)
    space = WeightFamily(OMEGA, (NormValue(1), NormValue(-1)), NormValue(0))
    for k in range(choices):
        I0 = frozenset(i for i in range(8) if rng.random() < 0.3)
        r = NormValue(Fraction(rng.randint(-6, 6), 2))
        vecs = []
        for _ in range(samples):
            if rng.random() < 0.5:
                vecs.append(rand_vector_in_ball(rng, space, I0 if rng.random() < 0.7 else frozenset(), r * NormValue(rng.randint(0, 1))))
            else:
                vecs.append(rand_vector(rng, space))
        out.cases += 1
        if not region_equiv_principal(UltraSet.embed(sorted(I0)), I0, r, vecs):
            out.fail((k, sorted(I0), r))
    for k, f in enumerate(pool[:choices]):
        r = _r_choice(rng)
        rp, U0, J0 = chase_witness_ultra(f, r)
        back = witness_from_ultra(f, r, rp, U0, J0)
        plain = chase_witness(f, r)
        out.cases += 1
        if not back.certified or back != plain:
            out.fail((k, "pull-back", back, plain))
    out.stats = {"choices": choices, "samples_each": samples}
    return out


CRITERIA = {
    "valuation": crit_valuation,
    "norms": crit_norm_attainment,
    "witness": crit_witness,
    "reduction": crit_reduction,
    "adversary": crit_adversary,
    "oracle": crit_oracle,
    "ideals": crit_ideals,
    "ultra": crit_principal,
}

_USES_POOL = {"norms", "witness", "reduction", "oracle", "ultra"}


def run_selftest(seed: int = 7, only: list[str] | None = None) -> dict:
    names = list(CRITERIA) if not only else only
    unknown = [n for n in names if n not in CRITERIA]
    if unknown:
        raise ValueError(f"unknown selftest filter {unknown}; choose from {sorted(CRITERIA)}")
    pool = _pool(seed) if _USES_POOL & set(names) else None
    results = []
    for name in names:
        fn = CRITERIA[name]
        res = fn(seed, pool=pool) if name in _USES_POOL else fn(seed)
        results.append(res)
    passed = sum(r.passed for r in results)
    return {
        "command": "selftest",
        "seed": seed,
        "base": get_base(),
        "filter": names,
        "criteria": [r.to_json() for r in results],
        "summary": {"total": len(results), "passed": passed, "failed": len(results) - passed},
        "ok": passed == len(results),
    }
