"""Acceptance criteria 1-10, each at tolerance zero.

``greenberg verify all`` runs twice in fresh processes with fresh law caches.
Criteria 1-9 read the first report, criterion 10 compares the two byte for
byte. Each test prints one ``criterion N: PASS|FAIL`` line.
"""

import json
import os
import re
import subprocess
import sys

import pytest

# seconds allowed per criterion, summed over the verify steps that serve it
BUDGETS = {
    1: (60, ["witt:witt_ghost", "witt:witt_integers", "witt:witt_verschiebung"]),
    2: (180, ["algebra:algebra_axioms"]),
    3: (60, ["algebra:algebra_oracle"]),
    4: (60, ["algebra:algebra_truncation"]),
    5: (300, ["ratpts:ratpts"]),
    6: (1, ["ratpts:explicit_ideal"]),
    7: (120, ["levels:levels"]),
    8: (120, ["groups:groups"]),
    9: (300, ["weil:weil"]),
}
TOTAL_BUDGET = 20 * 60


def _verify_all(tmp_path, tag):
    out = tmp_path / f"report_{tag}.json"
    env = dict(os.environ, GREENBERG_CACHE=str(tmp_path / f"cache_{tag}"))
    proc = subprocess.run(
        [sys.executable, "-m", "greenberg.cli", "verify", "all", "-o", str(out)],
        env=env,
        capture_output=True,
        text=True,
    )
    timings = {m[1]: float(m[2]) for m in re.finditer(r"^(\S+): ([0-9.]+)s$", proc.stderr, re.M)}
    return proc.returncode, out.read_bytes(), timings, proc.stderr


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("acceptance")
    return [_verify_all(tmp, tag) for tag in ("a", "b")]


@pytest.fixture(scope="module")
def report(runs):
    return json.loads(runs[0][1])


def _checks(report, criterion):
    return [c for suite in report["suites"] for c in suite["checks"] if c["criterion"] == criterion]


def _announce(capsys, criterion, passed, detail):
    with capsys.disabled():
        print(f"\ncriterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.mark.parametrize("criterion", sorted(BUDGETS))
def test_criterion(criterion, report, runs, capsys):
    checks = _checks(report, criterion)
    budget, steps = BUDGETS[criterion]
    seconds = sum(runs[0][2][s] for s in steps)
    cells = sum(c["cells"] for c in checks)
    failed = sum(c["failed"] for c in checks)
    passed = bool(checks) and failed == 0 and seconds < budget
    _announce(capsys, criterion, passed, f"{cells - failed}/{cells} cells, {seconds:.2f}s of {budget}s")
    assert checks
    for c in checks:
        assert c["passed"], (c["name"], c["failures"], c.get("notes"))
    assert seconds < budget


def test_criterion_10_determinism(runs, capsys):
    (code_a, bytes_a, times_a, _), (code_b, bytes_b, times_b, _) = runs
    total = max(sum(times_a.values()), sum(times_b.values()))
    same = bytes_a == bytes_b and code_a == code_b
    _announce(capsys, 10, same and total < TOTAL_BUDGET, f"reports identical: {same}, slowest run {total:.1f}s of {TOTAL_BUDGET}s")
    assert same
    assert total < TOTAL_BUDGET


def test_exit_code_matches_report(runs, report):
    code, _, _, stderr = runs[0]
    assert code == (0 if report["passed"] else 1), stderr
