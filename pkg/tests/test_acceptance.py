"""Acceptance suite: one PASS/FAIL line per criterion.

Criteria 1-8 run through the seeded self-test; criterion 9 invokes the CLI
twice in fresh processes and compares the reports byte for byte. All
comparisons are exact (zero tolerated failures).

Run directly (``python tests/test_acceptance.py``) or under pytest.
"""

import subprocess
import sys

import pytest

from ultrachase.selftest import run_selftest

SEED = 7
NAMES = {
    1: "valuation",
    2: "norms",
    3: "witness",
    4: "reduction",
    5: "adversary",
    6: "oracle",
    7: "ideals",
    8: "ultra",
}


def _line(cid, passed, detail):
    return f"[{'PASS' if passed else 'FAIL'}] criterion {cid}: {detail}"


def criterion_line(report, cid):
    crit = next(c for c in report["criteria"] if c["id"] == cid)
    detail = f"{crit['name']} ({crit['cases']} cases, {crit['failures']} failures)"
    if crit["first_failures"]:
        detail += f"; first: {crit['first_failures'][0]}"
    return crit["passed"], _line(cid, crit["passed"], detail)


def selftest_bytes():
    cmd = [sys.executable, "-m", "ultrachase", "selftest", "--seed", str(SEED)]
    proc = subprocess.run(cmd, capture_output=True, check=False)
    return proc.returncode, proc.stdout


def determinism_line():
    (c1, a), (c2, b) = selftest_bytes(), selftest_bytes()
    same = a == b and len(a) > 0
    ok = same and c1 == c2 == 0
    return ok, _line(9, ok, f"selftest --seed {SEED} twice: {'identical' if same else 'differ'} ({len(a)} bytes, exits {c1},{c2})")


@pytest.fixture(scope="module")
def report():
    return run_selftest(SEED)


@pytest.mark.parametrize("cid", sorted(NAMES))
def test_criterion(report, cid, capsys):
    ok, line = criterion_line(report, cid)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_criterion_9_determinism(capsys):
    ok, line = determinism_line()
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    rep = run_selftest(SEED)
    results = [criterion_line(rep, cid) for cid in sorted(NAMES)] + [determinism_line()]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
