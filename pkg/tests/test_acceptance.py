"""Acceptance criteria 1 to 9, each at its stated tolerance and time budget.

A one-line PASS/FAIL per criterion is printed in the terminal summary.
"""

import json
import re
import subprocess
import sys
import time

import pytest

from centerlab.aluthge import (DEFAULT_GRID, AluthgeParams,
                               aluthge_modulus_closed_forms, check_u_tilde_power)
from centerlab.centered import (centered_report, check_lemma_3_2, check_lemma_3_3,
                                check_remark_3_5, is_binormal)
from centerlab.generators import block_shift_family, dense_random, rng
from centerlab.kernel import ToleranceConfig
from centerlab.polar import polar_decompose, polar_pair_residuals
from centerlab.suites import SuiteOptions, build_corpus, run_suite

GRID_VALUES = (0.3, 0.5, 1.0, 2.0)


@pytest.fixture(scope="module")
def corpus():
    return build_corpus(trials=100, dim_max=32, seed=7)


def _budget(start, seconds):
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.1f} s, budget {seconds} s"


def test_criterion_1_polar_soundness():
    start = time.perf_counter()
    g = rng(20240601)
    worst = 0.0
    deficient = 0
    for i in range(1000):
        d = int(g.integers(2, 65))
        k = int(g.integers(1, d)) if i % 3 == 2 else 0
        deficient += k > 0
        t = dense_random(d, int(g.integers(2 ** 63)), k)
        pf = polar_decompose(t)
        assert pf.rank == d - k
        res = polar_pair_residuals(t, pf.u)
        worst = max(worst, res["factor"], res["init"], res["isometry"])
    assert deficient >= 300
    assert worst <= 1e-8, worst
    _budget(start, 30)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_criterion_2_block_shift_exactness(n):
    start = time.perf_counter()
    t = block_shift_family(n)
    rep = centered_report(t, n + 3)
    assert rep.max_order_definitional == n + 1
    assert rep.max_order_commutator == n + 1
    comm = rep.commutator
    for v in comm[:n + 1]:
        assert v.ratio <= 1e-8
    assert comm[n + 1].ratio >= 1e-4
    defi = rep.definitional
    assert all(v.ratio <= 1e-8 for v in defi[:n + 1])
    assert defi[n + 1].ratio >= 1e-4
    _budget(start, 5 / 4)


def test_criterion_3_commutator_characterization(corpus):
    start = time.perf_counter()
    report = run_suite("thm34", SuiteOptions(trials=100, dim_max=32, seed=7), corpus)
    assert report.disagreements() == []
    assert report.failed == 0
    assert len(report.operators) == 120
    _budget(start, 120)


def test_criterion_4_identities_on_centered_members(corpus):
    start = time.perf_counter()
    checked = 0
    for entry in corpus:
        pf = polar_decompose(entry.matrix)
        rep = centered_report(entry.matrix, 5, pf=pf)
        for n in range(1, 5):
            if not rep.verdict("definitional", n + 1).holds:
                continue
            checks = [check_lemma_3_2(entry.matrix, n, pf=pf)]
            for a in GRID_VALUES:
                checks.append(check_lemma_3_3(entry.matrix, n, a, pf=pf))
                checks.append(check_remark_3_5(entry.matrix, n, a, pf=pf))
            for c in checks:
                assert c.applicable, (entry.name, n, c.name)
                for v in c.per_k:
                    assert v.holds and v.ratio <= 1e-8, (entry.name, n, c.name, v)
            checked += 1
    assert checked >= 40
    _budget(start, 60)


def test_criterion_5_u_tilde_power(corpus):
    tight = ToleranceConfig(zero_tol=1e-10)
    for entry in corpus:
        u = polar_decompose(entry.matrix).u
        v = check_u_tilde_power(u, 6, tight)
        assert v.holds, (entry.name, v)


def test_criterion_6_closed_forms(corpus):
    members = [e for e in corpus if is_binormal(e.matrix).holds]
    assert len(members) >= 15
    for entry in members:
        pf = polar_decompose(entry.matrix)
        for p in DEFAULT_GRID:
            cf = aluthge_modulus_closed_forms(entry.matrix, AluthgeParams(*p), pf=pf)
            assert cf.required
            assert cf.match_m.holds, (entry.name, p, cf.match_m)
            assert cf.match_mstar.holds, (entry.name, p, cf.match_mstar)


def test_criterion_7_transform_characterizations(corpus):
    start = time.perf_counter()
    opts = SuiteOptions(trials=100, dim_max=32, seed=7, n_max=5)
    consequences = 0
    for suite in ("thm43", "thm45", "thm51", "thm53"):
        report = run_suite(suite, opts, corpus)
        assert report.disagreements() == [], suite
        assert report.failed == 0
        for op in report.operators:
            for r in op["results"]:
                if r["theorem"] in ("thm45", "thm53") and r["conditions"][0]["verdict"] == "holds":
                    assert r.get("consequences"), (op["operator"], r["theorem"], r["n"])
                    consequences += 1
    assert consequences > 0
    _budget(start, 300)


def test_criterion_8_truncated_characterization(corpus):
    start = time.perf_counter()
    report = run_suite("cor54", SuiteOptions(trials=100, dim_max=32, seed=7, k_max=4), corpus)
    assert report.disagreements() == []
    by_name = {}
    for entry, op in zip(corpus, report.operators):
        (r,) = op["results"]
        assert len(r["conditions"]) == 11
        by_name[entry.spec.label] = r
        values = {c["verdict"] for c in r["conditions"]}
        if entry.expected == "centered":
            assert values == {"holds"}, entry.spec.label
        if entry.expected == "bs1":
            assert values == {"fails"}, entry.spec.label
    assert {c["verdict"] for c in by_name["block_shift(1) bs1"]["conditions"]} == {"fails"}
    _budget(start, 120)


def _verify_once(path):
    cmd = [sys.executable, "-m", "centerlab", "verify", "--suite", "all", "--seed", "7",
           "--out", str(path), "--allow-indeterminate"]
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stderr
    return re.sub(r'"wall_clock_seconds": [0-9.eE+-]+', '"wall_clock_seconds": 0',
                  path.read_text())


def test_criterion_9_determinism(tmp_path):
    a = _verify_once(tmp_path / "a.json")
    b = _verify_once(tmp_path / "b.json")
    assert a == b
    assert json.loads(a)["counts"]["failed"] == 0
