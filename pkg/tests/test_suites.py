import json

import pytest

from centerlab.equivalence import Status
from centerlab.suites import (SUITES, SuiteOptions, SuiteReport, build_corpus,
                              constructed_corpus, random_corpus, run_suite)


def test_constructed_labels():
    specs = constructed_corpus()
    assert len(specs) == 20
    classes = {s.label.rsplit(" ", 1)[-1] for s in specs}
    assert classes == {"centered", "other", "bs1", "bs2", "bs3", "bs4"}


def test_random_corpus_deterministic():
    a = [s.to_json() for s in random_corpus(12, 9, 3)]
    b = [s.to_json() for s in random_corpus(12, 9, 3)]
    assert a == b
    assert a != [s.to_json() for s in random_corpus(12, 9, 4)]
    assert all(2 <= s["params"]["d"] <= 9 for s in a)
    assert [("rank_deficit" in s["params"]) for s in a][3::4] == [True] * 3


def test_random_corpus_bytes():
    x = build_corpus(5, 6, 1, constructed=False)
    y = build_corpus(5, 6, 1, constructed=False)
    assert [e.matrix.tobytes() for e in x] == [e.matrix.tobytes() for e in y]


@pytest.mark.parametrize("trials, dim_max", [(-1, 4), (3, 1)])
def test_random_corpus_rejects(trials, dim_max):
    with pytest.raises(ValueError):
        random_corpus(trials, dim_max, 0)


def test_unknown_suite():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("thm99")


@pytest.mark.parametrize("counts, allow, code", [
    ({"failed": 1, "indeterminate": 1}, True, 3),
    ({"failed": 0, "indeterminate": 2}, False, 4),
    ({"failed": 0, "indeterminate": 2}, True, 0),
    ({"failed": 0, "indeterminate": 0}, False, 0),
])
def test_exit_code(counts, allow, code):
    assert SuiteReport("all", SuiteOptions(), counts=counts).exit_code(allow) == code


@pytest.fixture(scope="module")
def small_report():
    opts = SuiteOptions(trials=4, dim_max=6, seed=2, n_max=3, k_max=3, grid=[(0.5, 0.5), (1, 2)])
    return run_suite("all", opts)


def test_counts_consistent(small_report):
    total = sum(small_report.counts.values())
    per = {k: sum(c[k] for c in small_report.counts_by_suite.values())
           for k in small_report.counts}
    assert per == small_report.counts
    assert total == sum(len(op["results"]) for op in small_report.operators)
    assert set(small_report.counts_by_suite) == set(SUITES)
    assert small_report.failed == 0 and not small_report.disagreements()


def test_report_json(small_report):
    doc = json.loads(json.dumps(small_report.to_json()))
    assert set(doc) == {"suite", "config", "counts", "counts_by_suite", "operators",
                        "wall_clock_seconds"}
    assert len(doc["operators"]) == 24
    statuses = {r["status"] for op in doc["operators"] for r in op["results"]}
    assert statuses <= {Status.PASS, Status.SKIPPED, Status.INDETERMINATE}


def test_summary_mentions_every_suite(small_report):
    text = small_report.summary()
    assert all(sid in text for sid in SUITES)
