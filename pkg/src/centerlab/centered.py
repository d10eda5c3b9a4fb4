"""Deciding n-centeredness.

``T = U|T|`` is *n-centered* when ``T^k = U^k |T^k|`` is the polar
decomposition of ``T^k`` for every ``1 <= k <= n``.  Two independent routes
decide it:

* the definitional route checks each power directly with
  :func:`~centerlab.polar.is_polar_pair`;
* the commutator route uses ``[U^k |T| U^k*, |T|] = 0``.  Being
  ``(n+1)``-centered is equivalent to those commutators vanishing for
  ``k = 1..n``, so deciding *n*-centeredness needs ``k = 1..n-1``.  That
  index shift lives in :func:`_commutator_levels` and nowhere else.

The module also checks the consequences of ``(n+1)``-centeredness for the
range projections ``P_k``, for fractional powers, and the two-parameter
commutator criterion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kernel import (DEFAULT_CONFIG, ToleranceConfig, Value, Verdict, all_of,
                     close, commutes, dagger, fro, opnorm, powers, psd_power,
                     svd)
from .polar import PolarForm, adjoint_polar, is_polar_pair, polar_decompose

__all__ = [
    "ZERO_FLOOR",
    "CenteredReport",
    "PkPair",
    "IdentityCheck",
    "is_binormal",
    "is_binormal_moduli",
    "is_n_centered_definitional",
    "is_n_centered_commutator",
    "centered_report",
    "parametrized_centered_test",
    "parametrized_per_k",
    "pk_projections",
    "check_lemma_3_2",
    "check_lemma_3_3",
    "check_remark_3_5",
    "max_centered_order",
]

# A power T^k with ||T^k|| below ZERO_FLOOR * ||T||^k is treated as exactly 0.
ZERO_FLOOR = 1e-13


@dataclass
class CenteredReport:
    """Per-level verdicts of the two centeredness oracles.

    ``definitional[k-1]`` decides whether ``T^k = U^k|T^k|`` is a polar
    decomposition; ``commutator[k-1]`` is the single commutator the
    commutator route adds when going from ``(k-1)``- to ``k``-centered
    (trivially ``holds`` at ``k = 1``).  Being n-centered is the conjunction
    of the first n entries; :meth:`cumulative` gives those conjunctions and
    agreement is judged on them.
    """

    n_requested: int
    definitional: list[Verdict] | None = None
    commutator: list[Verdict] | None = None

    def cumulative(self, route: str) -> list[Verdict]:
        per_k = getattr(self, route)
        if per_k is None:
            return []
        return [all_of(per_k[:k]) for k in range(1, len(per_k) + 1)]

    def verdict(self, route: str, n: int | None = None) -> Verdict:
        """Whether T is n-centered according to ``route``."""
        n = self.n_requested if n is None else n
        return all_of(getattr(self, route)[:n])

    def max_order(self, route: str) -> int:
        best = 0
        for v in self.cumulative(route):
            if not v.holds:
                break
            best += 1
        return best

    @property
    def max_order_definitional(self) -> int:
        return self.max_order("definitional")

    @property
    def max_order_commutator(self) -> int:
        return self.max_order("commutator")

    @property
    def agreement(self) -> bool:
        if self.definitional is None or self.commutator is None:
            return True
        for a, b in zip(self.cumulative("definitional"),
                        self.cumulative("commutator")):
            if {a.value, b.value} == {Value.HOLDS, Value.FAILS}:
                return False
        return True

    @property
    def indeterminate(self) -> bool:
        return any(v.value is Value.INDETERMINATE
                   for route in ("definitional", "commutator")
                   for v in self.cumulative(route))

    def to_json(self) -> dict:
        per_k = []
        for k in range(1, self.n_requested + 1):
            entry = {"k": k}
            for route in ("definitional", "commutator"):
                vs = getattr(self, route)
                if vs is not None:
                    entry[route] = vs[k - 1].to_dict()
            per_k.append(entry)
        out = {"n_requested": self.n_requested, "per_k": per_k}
        if self.definitional is not None:
            out["max_order_definitional"] = self.max_order_definitional
            out["definitional"] = self.verdict("definitional").value.value
        if self.commutator is not None:
            out["max_order_commutator"] = self.max_order_commutator
            out["commutator"] = self.verdict("commutator").value.value
        out["agreement"] = self.agreement
        return out


@dataclass
class PkPair:
    """``P_k(T) = U^k(U^k)^*`` and ``P_k(T^*) = (U^k)^*U^k``."""

    k: int
    p_t: np.ndarray
    p_tstar: np.ndarray
    p_t_projection: Verdict
    p_tstar_projection: Verdict


@dataclass
class IdentityCheck:
    """Outcome of checking an identity that needs a centeredness hypothesis.

    When the hypothesis fails, ``per_k`` is empty and :attr:`verdict` is
    ``skipped`` naming the unmet precondition.
    """

    name: str
    precondition: Verdict
    per_k: list[Verdict] = field(default_factory=list)

    @property
    def applicable(self) -> bool:
        return self.precondition.holds

    @property
    def verdict(self) -> Verdict:
        if not self.applicable:
            return Verdict.skipped(
                f"{self.name}: precondition {self.precondition.value.value}")
        return all_of(self.per_k)


def _polar(t, config, pf: PolarForm | None) -> tuple[np.ndarray, PolarForm]:
    t = np.asarray(t, dtype=np.complex128)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {t.shape}")
    return t, (polar_decompose(t, config) if pf is None else pf)


def _conj(a, x):
    """``a x a^*``, hermitized."""
    y = a @ x @ dagger(a)
    return 0.5 * (y + dagger(y))


def is_binormal(t, config: ToleranceConfig = DEFAULT_CONFIG) -> Verdict:
    """``[T^*T, TT^*] = 0``."""
    t = np.asarray(t, dtype=np.complex128)
    return commutes(dagger(t) @ t, t @ dagger(t), config)


def is_binormal_moduli(t, config: ToleranceConfig = DEFAULT_CONFIG) -> Verdict:
    """Binormality decided on both ``[T^*T, TT^*]`` and ``[|T|, |T^*|]``.

    The two commutators vanish together, but the second one scales
    linearly in the singular values instead of quadratically, so a
    non-commuting part carried by small singular values stays visible.
    Holds only if both hold; fails if either fails decisively.
    """
    t = np.asarray(t, dtype=np.complex128)
    w, s, v = svd(t)
    mod = (v * s) @ dagger(v)
    mod_star = (w * s) @ dagger(w)
    return all_of([is_binormal(t, config), commutes(mod, mod_star, config)])


def _definitional_levels(t, n, config, pf) -> list[Verdict]:
    t, pf = _polar(t, config, pf)
    nt = opnorm(t)
    d = t.shape[0]
    out = []
    for k, (tk, uk) in enumerate(zip(powers(t, n), powers(pf.u, n)), start=1):
        if k == 1:
            # T = U|T| is a polar decomposition by construction
            out.append(is_polar_pair(tk, uk, config))
            continue
        floor = ZERO_FLOOR * np.sqrt(d) * nt ** k
        out.append(is_polar_pair(tk, uk, config, zero_floor=floor))
    return out


def _commutator_levels(t, n, config, pf) -> list[Verdict]:
    # level k (T is k-centered) adds [U^{k-1}|T|U^{k-1}*, |T|] = 0
    t, pf = _polar(t, config, pf)
    mod = pf.modulus
    scale = fro(mod) ** 2 or 1.0
    out = [Verdict(Value.HOLDS, 0.0, 1.0)]
    for uk in powers(pf.u, n - 1):
        out.append(commutes(_conj(uk, mod), mod, config, scale=scale))
    return out


def is_n_centered_definitional(t, n: int,
                               config: ToleranceConfig = DEFAULT_CONFIG,
                               pf: PolarForm | None = None) -> CenteredReport:
    """Decide n-centeredness power by power.

    Examples
    --------
    >>> rep = is_n_centered_definitional([[1, 1], [0, 1]], 2)
    >>> [v.value.value for v in rep.definitional]
    ['holds', 'fails']
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return CenteredReport(n, definitional=_definitional_levels(t, n, config, pf))


def is_n_centered_commutator(t, n: int,
                             config: ToleranceConfig = DEFAULT_CONFIG,
                             pf: PolarForm | None = None) -> CenteredReport:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return CenteredReport(n, commutator=_commutator_levels(t, n, config, pf))


def centered_report(t, n: int, config: ToleranceConfig = DEFAULT_CONFIG,
                    pf: PolarForm | None = None) -> CenteredReport:
    """Both oracles side by side."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    t, pf = _polar(t, config, pf)
    return CenteredReport(
        n,
        definitional=_definitional_levels(t, n, config, pf),
        commutator=_commutator_levels(t, n, config, pf),
    )


def parametrized_per_k(t, n: int, alpha: float, beta: float,
                       config: ToleranceConfig = DEFAULT_CONFIG,
                       pf: PolarForm | None = None) -> list[Verdict]:
    """``[U^k |T|^alpha U^k*, |T|^beta] = 0`` for ``k = 1..n``."""
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")
    t, pf = _polar(t, config, pf)
    ma = psd_power(pf.modulus, alpha, config)
    mb = ma if beta == alpha else psd_power(pf.modulus, beta, config)
    scale = fro(ma) * fro(mb) or 1.0
    return [commutes(_conj(uk, ma), mb, config, scale=scale)
            for uk in powers(pf.u, n)]


def parametrized_centered_test(t, n: int, alpha: float, beta: float,
                               config: ToleranceConfig = DEFAULT_CONFIG,
                               pf: PolarForm | None = None) -> Verdict:
    """Two-parameter commutator criterion for ``(n+1)``-centeredness.

    Holds iff ``[U^k |T|^alpha (U^k)^*, |T|^beta] = 0`` for ``k = 1..n``.
    For any fixed ``alpha, beta > 0`` this is equivalent to T being
    ``(n+1)``-centered, so the verdict should not depend on the pair.
    """
    return all_of(parametrized_per_k(t, n, alpha, beta, config, pf))


def _projection_verdict(p, config):
    res = max(fro(p @ p - p), fro(p - dagger(p)))
    return Verdict.from_residual(res, max(1.0, fro(p)), config)


def pk_projections(u, k: int, config: ToleranceConfig = DEFAULT_CONFIG) -> PkPair:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    u = np.asarray(u, dtype=np.complex128)
    uk = np.linalg.matrix_power(u, k)
    p_t = uk @ dagger(uk)
    p_ts = dagger(uk) @ uk
    return PkPair(k, p_t, p_ts, _projection_verdict(p_t, config),
                  _projection_verdict(p_ts, config))


def _precondition(t, n, config, pf) -> Verdict:
    return is_n_centered_definitional(t, n + 1, config, pf).verdict("definitional")


def check_lemma_3_2(t, n: int, config: ToleranceConfig = DEFAULT_CONFIG,
                    pf: PolarForm | None = None) -> IdentityCheck:
    """``[P_k(T^*), |T|] = [P_k(T), |T^*|] = 0`` for ``k = 1..n+1``.

    Requires T to be ``(n+1)``-centered.
    """
    t, pf = _polar(t, config, pf)
    pre = _precondition(t, n, config, pf)
    check = IdentityCheck("projection commutation", pre)
    if not check.applicable:
        return check
    mod = pf.modulus
    mod_star = adjoint_polar(pf, t, config).modulus
    for k in range(1, n + 2):
        pk = pk_projections(pf.u, k, config)
        a = commutes(pk.p_tstar, mod, config,
                     scale=max(1.0, fro(pk.p_tstar)) * (fro(mod) or 1.0))
        b = commutes(pk.p_t, mod_star, config,
                     scale=max(1.0, fro(pk.p_t)) * (fro(mod_star) or 1.0))
        check.per_k.append(all_of([a, b, pk.p_t_projection,
                                   pk.p_tstar_projection]))
    return check


def check_lemma_3_3(t, n: int, alpha: float,
                    config: ToleranceConfig = DEFAULT_CONFIG,
                    pf: PolarForm | None = None) -> IdentityCheck:
    """``U^k |T|^alpha (U^k)^* = (U^k |T| (U^k)^*)^alpha`` for ``k = 1..n+1``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    t, pf = _polar(t, config, pf)
    pre = _precondition(t, n, config, pf)
    check = IdentityCheck("power of conjugated modulus", pre)
    if not check.applicable:
        return check
    ma = psd_power(pf.modulus, alpha, config)
    scale = fro(ma) or 1.0
    for uk in powers(pf.u, n + 1):
        lhs = _conj(uk, ma)
        inner = _conj(uk, pf.modulus)
        rhs = psd_power(inner, alpha, config) if np.any(inner) else inner
        check.per_k.append(close(lhs, rhs, config, scale=scale))
    return check


def check_remark_3_5(t, n: int, alpha: float,
                     config: ToleranceConfig = DEFAULT_CONFIG,
                     pf: PolarForm | None = None) -> IdentityCheck:
    """``[U^k |T|^alpha (U^k)^*, U^*U] = 0`` for ``k = 1..n``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    t, pf = _polar(t, config, pf)
    pre = _precondition(t, n, config, pf)
    check = IdentityCheck("commutation with initial projection", pre)
    if not check.applicable:
        return check
    ma = psd_power(pf.modulus, alpha, config)
    q = dagger(pf.u) @ pf.u
    scale = (fro(ma) or 1.0) * max(1.0, fro(q))
    for uk in powers(pf.u, n):
        check.per_k.append(commutes(_conj(uk, ma), q, config, scale=scale))
    return check


def max_centered_order(t, k_max: int, config: ToleranceConfig = DEFAULT_CONFIG,
                       pf: PolarForm | None = None
                       ) -> tuple[int, CenteredReport]:
    """Largest ``n <= k_max`` for which T is n-centered (definitional route).

    Returns the order together with the full two-oracle report.  If the
    first non-holding level is indeterminate the order is only a lower
    bound; ``report.indeterminate`` is then set.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")
    report = centered_report(t, k_max, config, pf)
    return report.max_order_definitional, report
