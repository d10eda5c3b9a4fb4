"""Equivalence checks: every condition claimed equivalent to
``(n+1)``-centeredness, evaluated on one operator and compared.

Each ``verify_*`` function returns an :class:`EquivalenceVerdict`.  For a
parameter grid, "for every (alpha, beta)" conditions are the conjunction of
the per-point verdicts and "for some (alpha, beta)" the disjunction, both
over the grid.

Grid sweeps reuse transforms and chains through :class:`OperatorContext`;
pass one explicitly to share the work across several theorems.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .aluthge import (DEFAULT_GRID, AluthgeChain, AluthgeParams,
                      check_lemma_4_4, iterated_aluthge, u_tilde_chain)
from .centered import (CenteredReport, _conj, centered_report, is_binormal,
                       is_n_centered_definitional, parametrized_per_k)
from .equivalence import Condition, EquivalenceVerdict
from .kernel import (DEFAULT_CONFIG, ToleranceConfig, Verdict, all_of, any_of,
                     as_matrix, close, commutes, dagger, fro)
from .polar import polar_decompose

__all__ = [
    "OperatorContext",
    "verify_lemma_3_1",
    "verify_theorem_3_4",
    "verify_theorem_4_3",
    "verify_theorem_4_5",
    "verify_theorem_5_1",
    "verify_theorem_5_3",
    "verify_corollary_5_4",
]

Grid = Sequence[tuple[float, float]]


class OperatorContext:
    """Lazily computed quantities of one operator, shared across checks."""

    def __init__(self, t, config: ToleranceConfig = DEFAULT_CONFIG):
        t = as_matrix(t)
        if t.shape[0] != t.shape[1]:
            raise ValueError(f"expected a square matrix, got {t.shape}")
        self.t = t
        self.config = config
        self.pf = polar_decompose(t, config)
        self._report: CenteredReport | None = None
        self._binormal: Verdict | None = None
        self._chains: dict[tuple[float, float], AluthgeChain] = {}
        self._upow: list[np.ndarray] = [np.eye(t.shape[0], dtype=np.complex128)]

    def report(self, n: int) -> CenteredReport:
        if self._report is None or self._report.n_requested < n:
            self._report = centered_report(self.t, n, self.config, self.pf)
        return self._report

    def centered(self, n: int) -> Verdict:
        """n-centeredness of T, definitional route."""
        return self.report(n).verdict("definitional", n)

    @property
    def binormal(self) -> Verdict:
        if self._binormal is None:
            self._binormal = is_binormal(self.t, self.config)
        return self._binormal

    def u_power(self, k: int) -> np.ndarray:
        while len(self._upow) <= k:
            self._upow.append(self._upow[-1] @ self.pf.u)
        return self._upow[k]

    def chain(self, params, depth: int) -> AluthgeChain:
        key = tuple(params)
        ch = self._chains.get(key)
        if ch is None or ch.n < depth:
            ch = iterated_aluthge(self.t, AluthgeParams(*key), depth, self.config)
            self._chains[key] = ch
        return ch


def _ctx(t, config, ctx) -> OperatorContext:
    return ctx if ctx is not None else OperatorContext(t, config)


def _grid(grid) -> list[tuple[float, float]]:
    pts = [tuple(map(float, p)) for p in (DEFAULT_GRID if grid is None else grid)]
    if not pts:
        raise ValueError("parameter grid is empty")
    for p in pts:
        AluthgeParams(*p)
    return pts


def _forall_exists(per_point: Iterable[Verdict]) -> tuple[Verdict, Verdict]:
    vs = list(per_point)
    return all_of(vs), any_of(vs)


# per-grid-point building blocks ---------------------------------------------

def _parametrized(ctx, p, n) -> Verdict:
    return all_of(parametrized_per_k(ctx.t, n, p[0], p[1], ctx.config, ctx.pf))


def _transformed_commutators(ctx, p, k_hi) -> Verdict:
    """``[U^k |T~| U^k*, |T~|] = 0`` for ``k = 1..k_hi``, with U from T."""
    chain = ctx.chain(p, 1)
    mod = chain.steps[1].polar.modulus
    scale = fro(mod) ** 2 or 1.0
    vs = [commutes(_conj(ctx.u_power(k), mod), mod, ctx.config, scale=scale)
          for k in range(1, k_hi + 1)]
    return chain.judge(1, all_of(vs), rank_dependent=False)


def _transform_centered(ctx, p, n) -> Verdict:
    chain = ctx.chain(p, 1)
    step = chain.steps[1]
    rep = is_n_centered_definitional(step.t, n, ctx.config, step.polar)
    return chain.judge(1, rep.verdict("definitional"), rank_dependent=True)


def _chain_binormal(ctx, p, k_hi) -> Verdict:
    chain = ctx.chain(p, k_hi)
    return all_of(chain.binormal(k, ctx.config) for k in range(k_hi + 1))


def _chain_polar(ctx, p, k_hi) -> Verdict:
    chain = ctx.chain(p, k_hi)
    return all_of(chain.polar_with_u_chain(k, ctx.config)
                  for k in range(1, k_hi + 1))


def _u_tilde_polar_of_transform(ctx, p) -> Verdict:
    chain = ctx.chain(p, 1)
    return chain.polar_with_u_chain(1, ctx.config)


def _u_chain_formula(ctx, n) -> Verdict:
    """``U~^(k) = (U^k)^* U^{k+1}`` for ``k = 1..n``."""
    chain = u_tilde_chain(ctx.pf.u, n)
    vs = []
    for k in range(1, n + 1):
        rhs = dagger(ctx.u_power(k)) @ ctx.u_power(k + 1)
        lhs = chain[k]
        vs.append(close(lhs, rhs, ctx.config, scale=max(1.0, fro(rhs))))
    return all_of(vs)


def _and(*vs: Verdict) -> Verdict:
    return all_of(vs)


# verifiers -------------------------------------------------------------------

def verify_lemma_3_1(t, n: int, config: ToleranceConfig = DEFAULT_CONFIG,
                     ctx: OperatorContext | None = None) -> EquivalenceVerdict:
    """``(n+1)``-centered iff ``[U^k|T|U^k*, |T|] = 0`` for ``k = 1..n``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    ctx = _ctx(t, config, ctx)
    rep = ctx.report(n + 1)
    return EquivalenceVerdict("lemma31", n, [
        Condition(f"(i) T is {n + 1}-centered", rep.verdict("definitional", n + 1)),
        Condition(f"(ii) [U^k|T|U^k*, |T|] = 0 for 1<=k<={n}",
                  rep.verdict("commutator", n + 1)),
    ])


def verify_theorem_3_4(t, n: int, grid: Grid | None = None,
                       config: ToleranceConfig = DEFAULT_CONFIG,
                       ctx: OperatorContext | None = None) -> EquivalenceVerdict:
    """``(n+1)``-centered iff ``[U^k|T|^a U^k*, |T|^b] = 0``, ``k = 1..n``,
    for every / for some ``(a, b)``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    ctx = _ctx(t, config, ctx)
    pts = _grid(grid)
    fa, ex = _forall_exists(_parametrized(ctx, p, n) for p in pts)
    label = f"[U^k|T|^a U^k*, |T|^b] = 0 for 1<=k<={n}"
    return EquivalenceVerdict("thm34", n, [
        Condition(f"(i) T is {n + 1}-centered", ctx.centered(n + 1)),
        Condition(f"(ii) for every (a, b): {label}", fa),
        Condition(f"(iii) for some (a, b): {label}", ex),
    ], grid=pts)


def verify_theorem_4_3(t, n: int, grid: Grid | None = None,
                       config: ToleranceConfig = DEFAULT_CONFIG,
                       ctx: OperatorContext | None = None) -> EquivalenceVerdict:
    """For binormal T and ``n >= 2``: ``(n+1)``-centered iff the commutator
    conditions hold for ``k = 2..n`` iff the transformed commutators
    ``[U^k|T~|U^k*, |T~|]`` vanish for ``k = 1..n-1``."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    ctx = _ctx(t, config, ctx)
    pts = _grid(grid)
    out = EquivalenceVerdict("thm43", n, grid=pts, hypothesis=ctx.binormal)
    if not out.applicable:
        return out
    rep = ctx.report(n + 1)
    # commutator level j adds the k = j - 1 condition; k = 2..n is levels 3..n+1
    comm = all_of(rep.commutator[2:n + 1])
    fa, ex = _forall_exists(_transformed_commutators(ctx, p, n - 1) for p in pts)
    label = f"[U^k|T~|U^k*, |T~|] = 0 for 1<=k<={n - 1}"
    out.conditions = [
        Condition(f"(i) T is {n + 1}-centered", ctx.centered(n + 1)),
        Condition(f"(ii) [U^k|T|U^k*, |T|] = 0 for 2<=k<={n}", comm),
        Condition(f"(iii) for every (a, b): {label}", fa),
        Condition(f"(iv) for some (a, b): {label}", ex),
    ]
    return out


def verify_theorem_4_5(t, n: int, grid: Grid | None = None,
                       config: ToleranceConfig = DEFAULT_CONFIG,
                       ctx: OperatorContext | None = None) -> EquivalenceVerdict:
    """``(n+1)``-centered iff T is binormal and ``T~`` is n-centered for
    every / for some ``(a, b)``.

    When T is ``(n+1)``-centered, two consequences are also checked on every
    grid point: ``T~ = U~|T~|`` is the polar decomposition of ``T~``, and
    ``U~^k|T~|U~^k* |T~| = U^k|T~|U^k* |T~|`` for ``k = 1..n``.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    ctx = _ctx(t, config, ctx)
    pts = _grid(grid)
    fa, ex = _forall_exists(_transform_centered(ctx, p, n) for p in pts)
    first = ctx.centered(n + 1)
    out = EquivalenceVerdict("thm45", n, [
        Condition(f"(i) T is {n + 1}-centered", first),
        Condition(f"(ii) T binormal and T~ {n}-centered for every (a, b)",
                  _and(ctx.binormal, fa)),
        Condition(f"(iii) T binormal and T~ {n}-centered for some (a, b)",
                  _and(ctx.binormal, ex)),
    ], grid=pts)
    if first.holds:
        polar = [_u_tilde_polar_of_transform(ctx, p) for p in pts]
        swap = []
        for p in pts:
            chain = ctx.chain(p, 1)
            v = check_lemma_4_4(ctx.t, n, p, ctx.config, ctx.pf).verdict
            swap.append(chain.judge(1, v, rank_dependent=False))
        out.consequences = [
            Condition("T~ = U~|T~| is the polar decomposition, every (a, b)",
                      all_of(polar)),
            Condition(f"U~^k|T~|U~^k* |T~| = U^k|T~|U^k* |T~| for 1<=k<={n}, "
                      f"every (a, b)", all_of(swap)),
        ]
    return out


def verify_theorem_5_1(t, n: int, grid: Grid | None = None,
                       config: ToleranceConfig = DEFAULT_CONFIG,
                       ctx: OperatorContext | None = None) -> EquivalenceVerdict:
    """``(n+1)``-centered iff the iterates ``T~^(k)``, ``k = 0..n-1``, are
    all binormal, for every / for some ``(a, b)``."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    ctx = _ctx(t, config, ctx)
    pts = _grid(grid)
    fa, ex = _forall_exists(_chain_binormal(ctx, p, n - 1) for p in pts)
    label = f"T~^(k) binormal for 0<=k<={n - 1}"
    return EquivalenceVerdict("thm51", n, [
        Condition(f"(i) T is {n + 1}-centered", ctx.centered(n + 1)),
        Condition(f"(ii) for every (a, b): {label}", fa),
        Condition(f"(iii) for some (a, b): {label}", ex),
    ], grid=pts)


def verify_theorem_5_3(t, n: int, grid: Grid | None = None,
                       config: ToleranceConfig = DEFAULT_CONFIG,
                       ctx: OperatorContext | None = None) -> EquivalenceVerdict:
    """``(n+1)``-centered iff ``T~^(k) = U~^(k)|T~^(k)|`` is the polar
    decomposition for ``k = 1..n``, for every / for some ``(a, b)``.

    When T is ``(n+1)``-centered the consequence
    ``U~^(k) = (U^k)^* U^{k+1}``, ``k = 1..n``, is checked too.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    ctx = _ctx(t, config, ctx)
    pts = _grid(grid)
    fa, ex = _forall_exists(_chain_polar(ctx, p, n) for p in pts)
    label = f"T~^(k) = U~^(k)|T~^(k)| is the polar decomposition for 1<=k<={n}"
    first = ctx.centered(n + 1)
    out = EquivalenceVerdict("thm53", n, [
        Condition(f"(i) T is {n + 1}-centered", first),
        Condition(f"(ii) for every (a, b): {label}", fa),
        Condition(f"(iii) for some (a, b): {label}", ex),
    ], grid=pts)
    if first.holds:
        out.consequences = [Condition(
            f"U~^(k) = (U^k)^* U^(k+1) for 1<=k<={n}", _u_chain_formula(ctx, n))]
    return out


def verify_corollary_5_4(t, k_max: int = 4, grid: Grid | None = None,
                         config: ToleranceConfig = DEFAULT_CONFIG,
                         ctx: OperatorContext | None = None) -> EquivalenceVerdict:
    """The characterizations of centered operators, truncated at ``k_max``.

    Every condition is cut so that it is equivalent to T being
    ``k_max``-centered (with ``N = k_max``):

    (i)        T is N-centered;
    (ii, iii)  parametrized commutators for ``k <= N-1``;
    (iv, v)    T binormal and transformed commutators for ``k <= N-2``;
    (vi, vii)  T binormal and ``T~`` is ``(N-1)``-centered;
    (viii, ix) iterates ``0..N-2`` binormal;
    (x, xi)    ``T~^(k) = U~^(k)|T~^(k)|`` polar for ``k = 1..N-1``.

    Even labels quantify over every grid point, odd ones over some.
    """
    if k_max < 2:
        raise ValueError(f"k_max must be at least 2, got {k_max}")
    ctx = _ctx(t, config, ctx)
    pts = _grid(grid)
    big = k_max
    for p in pts:
        ctx.chain(p, big - 1)
    bn = ctx.binormal
    c2 = _forall_exists(_parametrized(ctx, p, big - 1) for p in pts)
    c4 = _forall_exists(_transformed_commutators(ctx, p, big - 2) for p in pts)
    c6 = _forall_exists(_transform_centered(ctx, p, big - 1) for p in pts)
    c8 = _forall_exists(_chain_binormal(ctx, p, big - 2) for p in pts)
    c10 = _forall_exists(_chain_polar(ctx, p, big - 1) for p in pts)
    q = ("for every (a, b)", "for some (a, b)")
    roman = ["(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)", "(viii)", "(ix)",
             "(x)", "(xi)"]
    texts = [
        (c2, f"[U^k|T|^a U^k*, |T|^b] = 0 for 1<=k<={big - 1}", False),
        (c4, f"[U^k|T~|U^k*, |T~|] = 0 for 1<=k<={big - 2}", True),
        (c6, f"T~ is {big - 1}-centered", True),
        (c8, f"T~^(k) binormal for 0<=k<={big - 2}", False),
        (c10, f"T~^(k) = U~^(k)|T~^(k)| polar for 1<=k<={big - 1}", False),
    ]
    conds = [Condition(f"(i) T is {big}-centered", ctx.centered(big))]
    i = 0
    for pair, text, needs_binormal in texts:
        for which in (0, 1):
            v = pair[which]
            prefix = "T binormal and " if needs_binormal else ""
            if needs_binormal:
                v = _and(bn, v)
            conds.append(Condition(f"{roman[i]} {prefix}{q[which]}: {text}", v))
            i += 1
    return EquivalenceVerdict("cor54", big, conds, grid=pts, truncation=big)
