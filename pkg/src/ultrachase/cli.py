"""Command-line front end.

    ultrachase norm SPEC
    ultrachase chase SPEC --r 0/1
    ultrachase ultra SPEC --r 0/1
    ultrachase reduce SPEC
    ultrachase adversary SPEC --r 0/1 --max-steps 64
    ultrachase ideals --demo pair          (or: ultrachase ideals SPEC)
    ultrachase selftest --seed 7 [--filter ideals]

``--r`` is the exponent of ``r = p**e``. Reports are JSON on stdout (or
``--out``); exit status is 0 exactly when every check passed. Wall time goes
to stderr so reports stay byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import ideals as ID
from .chase import (
    adversary_run,
    chase_witness,
    chase_witness_ultra,
    norm_reduction,
    verify_transcript,
    witness_from_ultra,
)
from .operators import OperatorError, active_columns, apply, operator_norm, probe, validate
from .selftest import CRITERIA, run_selftest
from .specfile import SpecError, digest, dump_spec, parse_spec
from .valuation import NormValue, get_base, is_prime, parse_rational, set_base

COMMANDS = ("norm", "chase", "ultra", "reduce", "adversary", "ideals", "selftest")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ultrachase", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("spec", nargs="?", help="JSON spec file")
    p.add_argument("--r", dest="r", help="exponent of r as num/den (r = p**e)")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--filter", action="append", choices=sorted(CRITERIA), help="selftest criterion (repeatable)")
    p.add_argument("--base", type=int, default=None, help="prime base p")
    p.add_argument("--demo", choices=sorted(ID.demo_ideals()), help="built-in ideal for `ideals`")
    p.add_argument("--out", help="also write the JSON report here")
    return p


class UsageError(Exception):
    pass


def _load(args):
    if not args.spec:
        raise UsageError(f"`{args.command}` needs a spec file")
    text = Path(args.spec).read_text()
    spec = parse_spec(text)
    return spec


def _radius(args, spec) -> NormValue:
    if args.r is not None:
        try:
            return NormValue(parse_rational(args.r))
        except ValueError as exc:
            raise UsageError(f"--r: {exc}") from None
    if "r" in spec.params:
        return spec.params["r"]
    raise UsageError("r missing: pass --r or set params.r in the spec")


def _check(name, passed, detail=""):
    return {"name": name, "passed": bool(passed), "detail": detail}


def _operator_report(args, spec) -> tuple[dict, list]:
    f = spec.operator
    problems = validate(f)
    if problems:
        raise OperatorError(problems)
    cmd = args.command
    if cmd == "norm":
        norm = operator_norm(f)
        probes = []
        best = NormValue(None)
        for i in active_columns(f):
            x = probe(f, i)
            value = apply(f, x).norm()
            best = max(best, value)
            probes.append({"column": i, "image_norm": value.to_json()})
        return {"norm": norm.to_json(), "probes": probes}, [_check("norm attained by a probe", best == norm)]
    if cmd == "chase":
        r = _radius(args, spec)
        w = chase_witness(f, r)
        return {"r": r.to_json(), "witness": w.to_json()}, [_check("witness certified", w.certified)]
    if cmd == "ultra":
        r = _radius(args, spec)
        rp, U0, J0 = chase_witness_ultra(f, r)
        back = witness_from_ultra(f, r, rp, U0, J0)
        res = {
            "r": r.to_json(),
            "r_prime": rp.to_json(),
            "U0": [f"iota({tag.i})" for tag in U0],
            "J0": sorted(J0),
        }
        return res, [_check("pull-back witness certified", back.certified)]
    if cmd == "reduce":
        red = norm_reduction(f)
        return red.to_json(), [_check("strict reduction", red.norm_after < red.norm_before)]
    if cmd == "adversary":
        r = _radius(args, spec)
        steps = args.max_steps if args.max_steps is not None else spec.params.get("max_steps", 64)
        tr = adversary_run(f, r, steps)
        rep = verify_transcript(f, r, tr)
        checks = [_check("certified within budget", not tr.exhausted)]
        checks += [c.to_json() for c in rep.checks]
        return {"transcript": tr.to_json()}, checks
    raise UsageError(f"unknown command {cmd}")


def _ideal_from_spec(path: str) -> ID.ProperIdeal:
    doc = json.loads(Path(path).read_text())
    block = doc.get("ideal")
    if not isinstance(block, dict) or not isinstance(block.get("n"), int):
        raise SpecError("ideal", 'expected {"n": int, "generators": [[...], ...]}')
    if "members" in block:
        members = frozenset(ID.mask_of(m) for m in block["members"])
        return ID.ProperIdeal(block["n"], members, union_closed=block.get("union_closed", True))
    return ID.ProperIdeal.generated_by(block["n"], block.get("generators", []))


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    report: dict = {"command": args.command}
    try:
        if args.base is not None:
            if not is_prime(args.base):
                raise UsageError("--base must be a prime")
            set_base(args.base)
        if args.command == "selftest":
            report = run_selftest(args.seed, args.filter)
            return (0 if report["ok"] else 1), report
        if args.command == "ideals":
            if args.demo:
                J = ID.demo_ideals()[args.demo]
                report["demo"] = args.demo
            elif args.spec:
                J = _ideal_from_spec(args.spec)
                report["spec"] = args.spec
            else:
                raise UsageError("`ideals` needs --demo NAME or a spec file")
            res = ID.run_demo(J)
            report["results"] = res
            report["checks"] = [_check("disjoint system properties", res["ok"])]
        else:
            spec = _load(args)
            if args.base is None:
                set_base(spec.base)
            report["inputs_digest"] = digest(dump_spec(spec))
            report["base"] = get_base()
            results, checks = _operator_report(args, spec)
            report["results"] = results
            report["checks"] = checks
    except OperatorError as exc:
        report["error"] = {"kind": "validation", "violations": exc.violations}
        return 2, report
    except SpecError as exc:
        report["error"] = {"kind": "parse", "where": exc.where, "message": str(exc)}
        return 2, report
    except (UsageError, OSError, ValueError) as exc:
        report["error"] = {"kind": "usage", "message": str(exc)}
        return 2, report
    ok = all(c["passed"] for c in report["checks"])
    report["ok"] = ok
    return (0 if ok else 1), report


def main(argv: list[str] | None = None) -> int:
    start = time.perf_counter()
    code, report = run(argv)
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    args = build_parser().parse_args(argv)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(f"wall time: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
