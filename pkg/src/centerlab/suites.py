"""Operator corpora and theorem suites.

A suite runs one family of equivalence checks over a corpus and tallies
the outcomes.  The corpus is the fixed list of constructed operators from
:func:`constructed_corpus` followed by ``trials`` seeded random matrices;
order and bytes depend only on the arguments.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .aluthge import DEFAULT_GRID
from .equivalence import EquivalenceVerdict, Status
from .generators import OperatorSpec, rng
from .kernel import DEFAULT_CONFIG, ToleranceConfig
from .theorems import (OperatorContext, verify_corollary_5_4, verify_lemma_3_1,
                       verify_theorem_3_4, verify_theorem_4_3,
                       verify_theorem_4_5, verify_theorem_5_1,
                       verify_theorem_5_3)

__all__ = [
    "SUITES",
    "SuiteOptions",
    "SuiteReport",
    "CorpusEntry",
    "constructed_corpus",
    "random_corpus",
    "build_corpus",
    "run_suite",
]

SUITES = ("lemma31", "thm34", "thm43", "thm45", "thm51", "thm53", "cor54")

# Spectra of the centered positive controls are kept within a fraction of a
# percent of each other; iterating the transform raises the spread to the
# power (alpha + beta)^k, which reaches 4^5 on the default grid.
NARROW = (1.0, 1.005)


def _ws(weights, label=""):
    return OperatorSpec("weighted_shift", {"weights": list(weights)}, label=label)


def constructed_corpus() -> list[OperatorSpec]:
    """Constructed families with known centered structure.

    The ``label`` of each entry ends in its expected class: ``centered``
    (n-centered for every n), ``bs<n>`` (exactly ``n+1``-centered), or
    ``other``.
    """
    specs = [
        OperatorSpec("identity", {"d": 1}, label="identity(1) centered"),
        OperatorSpec("identity", {"d": 4}, label="identity(4) centered"),
        OperatorSpec("unitary_random", {"d": 4}, seed=11, label="unitary(4) centered"),
        OperatorSpec("unitary_random", {"d": 7}, seed=12, label="unitary(7) centered"),
        OperatorSpec("psd_random", {"d": 5, "eig_range": list(NARROW)}, seed=13,
                     label="psd(5) centered"),
        OperatorSpec("quasinormal", {"d": 6, "moduli_range": list(NARROW)}, seed=14,
                     label="quasinormal(6) centered"),
        OperatorSpec("quasinormal", {"d": 6, "moduli_range": list(NARROW), "n_zero": 2},
                     seed=15, label="quasinormal(6, kernel 2) centered"),
        _ws([1, 2, 3], "weighted_shift(1,2,3) centered"),
        _ws([1, 1, 1, 1], "weighted_shift(1,1,1,1) centered"),
        _ws([2, 0, 1], "weighted_shift(2,0,1) centered"),
        _ws([0, 0], "weighted_shift(0,0) centered"),
        OperatorSpec("jordan", {"d": 3, "eigenvalue": 0.0}, label="jordan(3, 0) centered"),
    ]
    for n in range(1, 5):
        specs.append(OperatorSpec("block_shift", {"n": n}, label=f"block_shift({n}) bs{n}"))
    specs += [
        OperatorSpec("jordan", {"d": 2, "eigenvalue": 1.0}, label="jordan(2, 1) other"),
        OperatorSpec("jordan", {"d": 3, "eigenvalue": 0.5}, label="jordan(3, 0.5) other"),
        OperatorSpec("direct_sum", {"parts": [
            {"family": "identity", "params": {"d": 2}},
            {"family": "weighted_shift", "params": {"weights": [1, 2]}},
        ]}, label="identity(2) + weighted_shift(1,2) centered"),
        OperatorSpec("direct_sum", {"parts": [
            {"family": "block_shift", "params": {"n": 1}},
            {"family": "quasinormal", "params": {"d": 3, "moduli_range": list(NARROW)},
             "seed": 16},
        ]}, label="block_shift(1) + quasinormal(3) bs1"),
    ]
    return specs


def random_corpus(trials: int, dim_max: int, seed: int) -> list[OperatorSpec]:
    """``trials`` dense random matrices; every fourth one is rank deficient."""
    if trials < 0:
        raise ValueError(f"trials must be nonnegative, got {trials}")
    if dim_max < 2:
        raise ValueError(f"dim_max must be at least 2, got {dim_max}")
    g = rng(seed)
    specs = []
    for i in range(trials):
        d = int(g.integers(2, dim_max + 1))
        s = int(g.integers(2 ** 63))
        deficit = int(g.integers(1, d)) if i % 4 == 3 else 0
        params = {"d": d}
        if deficit:
            params["rank_deficit"] = deficit
        specs.append(OperatorSpec("dense_random", params, seed=s,
                                  label=f"dense_random#{i}(d={d}, deficit={deficit}) other"))
    return specs


@dataclass
class CorpusEntry:
    spec: OperatorSpec
    matrix: object

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def expected(self) -> str:
        return self.spec.label.rsplit(" ", 1)[-1] if self.spec.label else "other"


def build_corpus(trials: int = 100, dim_max: int = 32, seed: int = 7,
                 config: ToleranceConfig = DEFAULT_CONFIG,
                 constructed: bool = True) -> list[CorpusEntry]:
    specs = (constructed_corpus() if constructed else []) + random_corpus(trials, dim_max, seed)
    return [CorpusEntry(s, s.build(config)) for s in specs]


@dataclass
class SuiteOptions:
    trials: int = 100
    dim_max: int = 32
    seed: int = 7
    k_max: int = 4
    n_max: int = 5
    grid: Sequence[tuple[float, float]] = DEFAULT_GRID
    config: ToleranceConfig = DEFAULT_CONFIG

    def to_json(self) -> dict:
        return {"trials": self.trials, "dim_max": self.dim_max, "seed": self.seed,
                "k_max": self.k_max, "n_max": self.n_max,
                "grid": [list(p) for p in self.grid],
                "tolerances": self.config.to_dict()}


def _checks(suite: str, opts: SuiteOptions
            ) -> list[Callable[[OperatorContext], EquivalenceVerdict]]:
    g, c, k, nm = opts.grid, opts.config, opts.k_max, opts.n_max
    if suite == "lemma31":
        return [lambda x, n=n: verify_lemma_3_1(x.t, n, c, x) for n in range(1, k + 1)]
    if suite == "thm34":
        return [lambda x, n=n: verify_theorem_3_4(x.t, n, g, c, x) for n in range(1, k + 1)]
    if suite == "thm43":
        return [lambda x, n=n: verify_theorem_4_3(x.t, n, g, c, x) for n in range(2, nm + 1)]
    if suite == "thm45":
        return [lambda x, n=n: verify_theorem_4_5(x.t, n, g, c, x) for n in range(1, nm + 1)]
    if suite == "thm51":
        return [lambda x, n=n: verify_theorem_5_1(x.t, n, g, c, x) for n in range(2, nm + 1)]
    if suite == "thm53":
        return [lambda x, n=n: verify_theorem_5_3(x.t, n, g, c, x) for n in range(1, nm + 1)]
    if suite == "cor54":
        return [lambda x: verify_corollary_5_4(x.t, k, g, c, x)]
    raise ValueError(f"unknown suite {suite!r}; expected one of "
                     f"{', '.join(SUITES + ('all',))}")


@dataclass
class SuiteReport:
    suite: str
    options: SuiteOptions
    operators: list[dict] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    counts_by_suite: dict[str, dict[str, int]] = field(default_factory=dict)
    wall_clock_seconds: float = 0.0

    @property
    def failed(self) -> int:
        return self.counts.get("failed", 0)

    @property
    def indeterminate(self) -> int:
        return self.counts.get("indeterminate", 0)

    def exit_code(self, allow_indeterminate: bool = False) -> int:
        if self.failed:
            return 3
        if self.indeterminate and not allow_indeterminate:
            return 4
        return 0

    def disagreements(self) -> list[tuple[str, dict]]:
        return [(op["operator"], r) for op in self.operators
                for r in op["results"] if r["status"] == Status.DISAGREE]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.options.to_json(),
            "counts": self.counts,
            "counts_by_suite": self.counts_by_suite,
            "operators": self.operators,
            "wall_clock_seconds": self.wall_clock_seconds,
        }

    def summary(self) -> str:
        lines = [f"suite {self.suite}: {len(self.operators)} operators"]
        for sid, cnt in self.counts_by_suite.items():
            lines.append(f"  {sid:8s} " + "  ".join(f"{k}={v}" for k, v in cnt.items()))
        lines.append("  total    " + "  ".join(f"{k}={v}" for k, v in self.counts.items()))
        for name, r in self.disagreements():
            lines.append(f"  DISAGREE {r['theorem']} n={r['n']} on {name}")
        lines.append(f"  wall clock {self.wall_clock_seconds:.2f} s")
        return "\n".join(lines)


_KEYS = {Status.PASS: "passed", Status.DISAGREE: "failed",
         Status.SKIPPED: "skipped", Status.INDETERMINATE: "indeterminate"}


def _zero_counts() -> dict[str, int]:
    return {"passed": 0, "failed": 0, "skipped": 0, "indeterminate": 0}


def run_suite(suite: str, opts: SuiteOptions | None = None,
              corpus: list[CorpusEntry] | None = None) -> SuiteReport:
    """Run ``suite`` (one of :data:`SUITES` or ``"all"``) over the corpus."""
    opts = SuiteOptions() if opts is None else opts
    ids = SUITES if suite == "all" else (suite,)
    plan = {sid: _checks(sid, opts) for sid in ids}
    start = time.perf_counter()
    if corpus is None:
        corpus = build_corpus(opts.trials, opts.dim_max, opts.seed, opts.config)
    report = SuiteReport(suite, opts, counts=_zero_counts(),
                         counts_by_suite={sid: _zero_counts() for sid in ids})
    for entry in corpus:
        ctx = OperatorContext(entry.matrix, opts.config)
        results = []
        for sid, checks in plan.items():
            for check in checks:
                v = check(ctx)
                key = _KEYS[v.status]
                report.counts[key] += 1
                report.counts_by_suite[sid][key] += 1
                results.append(v.to_json())
        report.operators.append({"operator": entry.name, "spec": entry.spec.to_json(),
                                 "results": results})
    report.wall_clock_seconds = time.perf_counter() - start
    return report
