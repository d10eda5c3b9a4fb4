"""Generalized Aluthge transforms ``|T|^alpha U |T|^beta`` and their iterates.

The iterated transform multiplies exponents at every step, so the singular
values of the k-th iterate behave like ``sigma ** ((alpha + beta) ** k)``.
Two consequences shape :func:`iterated_aluthge`:

* each step is rescaled to unit spectral norm before transforming (the
  transform is positively homogeneous of degree ``alpha + beta``), with the
  true scale kept as a log;
* each step records whether it can be trusted.  The step itself is
  *accurate* when every earlier polar factor was trusted and its numeric
  rank matches the rank predicted from the previous partial isometry.  Its
  own polar factor is trusted (``local_ok``) when no singular value sits at
  the rank cutoff and the condition number on the range stays under
  ``config.cond_limit``.  Verdicts read off an untrusted step are
  downgraded instead of being reported as decisive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernel import (DEFAULT_CONFIG, ToleranceConfig, Verdict, all_of,
                     as_matrix, close, dagger, fro, matrix_to_json, opnorm,
                     powers, psd_power, svd)
from .polar import (PolarForm, is_polar_pair, polar_decompose,
                    polar_pair_residuals)

__all__ = [
    "DEFAULT_GRID",
    "COLLAPSE_FLOOR",
    "AluthgeParams",
    "ClosedForms",
    "ChainStep",
    "AluthgeChain",
    "aluthge_transform",
    "transform_from_polar",
    "u_tilde",
    "u_tilde_chain",
    "check_u_tilde_power",
    "aluthge_modulus_closed_forms",
    "iterated_aluthge",
    "check_lemma_4_1",
    "check_lemma_4_4",
]

DEFAULT_GRID: tuple[tuple[float, float], ...] = tuple(
    (a, b) for a in (0.3, 0.5, 1.0, 2.0) for b in (0.3, 0.5, 1.0, 2.0))

# Relative to a unit-norm input, a transform below this norm is taken as 0.
COLLAPSE_FLOOR = 1e-13


@dataclass(frozen=True)
class AluthgeParams:
    alpha: float = 0.5
    beta: float = 0.5

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"alpha and beta must be positive, got "
                             f"({self.alpha}, {self.beta})")

    @property
    def degree(self) -> float:
        return self.alpha + self.beta

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta}


def _params(p) -> AluthgeParams:
    if isinstance(p, AluthgeParams):
        return p
    return AluthgeParams(*p)


def _conj(a, x):
    y = a @ x @ dagger(a)
    return 0.5 * (y + dagger(y))


def transform_from_polar(pf: PolarForm, params, config=DEFAULT_CONFIG,
                         scale: float = 1.0) -> np.ndarray:
    """Aluthge transform of ``T / scale`` given the polar form of ``T``."""
    params = _params(params)
    mod = pf.modulus / scale if scale != 1.0 else pf.modulus
    if not np.any(mod):
        return np.zeros_like(pf.u)
    ma = psd_power(mod, params.alpha, config)
    mb = ma if params.beta == params.alpha else psd_power(mod, params.beta, config)
    return ma @ pf.u @ mb


def aluthge_transform(t, params=AluthgeParams(),
                      config: ToleranceConfig = DEFAULT_CONFIG,
                      pf: PolarForm | None = None) -> np.ndarray:
    """``|T|^alpha U |T|^beta``; ``alpha = beta = 1/2`` is the classical one.

    >>> aluthge_transform([[0, 2], [0, 0]], (1, 1)).real + 0.0
    array([[0., 0.],
           [0., 0.]])
    """
    t = as_matrix(t)
    if pf is None:
        pf = polar_decompose(t, config)
    return transform_from_polar(pf, params, config)


def u_tilde(u) -> np.ndarray:
    """``U^* U^2``."""
    u = np.asarray(u, dtype=np.complex128)
    return dagger(u) @ u @ u


def u_tilde_chain(u, n: int) -> list[np.ndarray]:
    """``[U, U~, U~^(2), ..., U~^(n)]`` with ``U~^(k) = (U~^(k-1))^* (U~^(k-1))^2``."""
    out = [np.asarray(u, dtype=np.complex128)]
    for _ in range(n):
        out.append(u_tilde(out[-1]))
    return out


def check_u_tilde_power(u, n: int, config: ToleranceConfig = DEFAULT_CONFIG
                        ) -> Verdict:
    """``(U^* U^2)^j = U^* U^{j+1}`` for ``j = 1..n``.

    The identity is unconditional for partial isometries.  If ``u`` is not
    one, the result is only informational and comes back indeterminate.
    """
    u = np.asarray(u, dtype=np.complex128)
    ut = u_tilde(u)
    scale = max(1.0, fro(u))
    verdicts = [close(lhs, dagger(u) @ rhs, config, scale=scale)
                for lhs, rhs in zip(powers(ut, n), powers(u, n + 1)[1:])]
    out = all_of(verdicts)
    iso = fro(u @ dagger(u) @ u - u) / (1.0 + fro(u))
    if iso > config.zero_tol:
        return out.downgrade("informational: input is not a partial isometry")
    return out


@dataclass
class ClosedForms:
    """Direct and closed-form moduli of ``T~ = |T|^alpha U |T|^beta``.

    The closed forms ``|T~| = U^*|T|^alpha U |T|^beta`` and
    ``|T~^*| = |T|^alpha |T^*|^beta`` are only claimed for binormal T;
    :attr:`required` says whether the match verdicts must hold.
    """

    direct: np.ndarray
    formula_m: np.ndarray
    direct_star: np.ndarray
    formula_mstar: np.ndarray
    binormal: Verdict
    match_m: Verdict
    match_mstar: Verdict

    @property
    def required(self) -> bool:
        return self.binormal.holds

    @property
    def verdict(self) -> Verdict:
        return all_of([self.match_m, self.match_mstar])


def aluthge_modulus_closed_forms(t, params=AluthgeParams(),
                                 config: ToleranceConfig = DEFAULT_CONFIG,
                                 pf: PolarForm | None = None) -> ClosedForms:
    from .centered import is_binormal

    params = _params(params)
    t = as_matrix(t)
    if pf is None:
        pf = polar_decompose(t, config)
    w, s, _ = svd(t)
    mod_star = (w * s) @ dagger(w)
    ma = psd_power(pf.modulus, params.alpha, config)
    mb = psd_power(pf.modulus, params.beta, config)
    msb = psd_power(0.5 * (mod_star + dagger(mod_star)), params.beta, config) \
        if np.any(mod_star) else mod_star
    tt = ma @ pf.u @ mb
    wt, st, vt = svd(tt)
    direct = (vt * st) @ dagger(vt)
    direct_star = (wt * st) @ dagger(wt)
    formula_m = dagger(pf.u) @ ma @ pf.u @ mb
    formula_mstar = ma @ msb
    scale = (fro(ma) * fro(mb)) or 1.0
    scale_star = (fro(ma) * fro(msb)) or 1.0
    return ClosedForms(
        direct=direct,
        formula_m=formula_m,
        direct_star=direct_star,
        formula_mstar=formula_mstar,
        binormal=is_binormal(t, config),
        match_m=close(direct, formula_m, config, scale=scale),
        match_mstar=close(direct_star, formula_mstar, config, scale=scale_star),
    )


# ---------------------------------------------------------------------------
# iterated transforms

@dataclass
class ChainStep:
    """One iterate ``T~^(k) = exp(log_scale) * t``.

    ``local_ok`` is False when the polar factor of this step cannot be
    trusted; ``accurate`` is False when ``t`` itself is suspect, because an
    earlier polar factor was untrusted or the rank of ``t`` contradicts the
    prediction from the previous step.
    """

    k: int
    t: np.ndarray
    polar: PolarForm
    log_scale: float
    collapsed: bool = False
    local_ok: bool = True
    accurate: bool = True
    note: str = ""

    @property
    def reliable(self) -> bool:
        return self.local_ok and self.accurate


@dataclass
class AluthgeChain:
    params: AluthgeParams
    steps: list[ChainStep] = field(default_factory=list)
    u_chain: list[np.ndarray] = field(default_factory=list)
    normalized: bool = True

    @property
    def n(self) -> int:
        return len(self.steps) - 1

    @property
    def collapsed_at(self) -> int | None:
        for s in self.steps:
            if s.collapsed:
                return s.k
        return None

    @property
    def reliable(self) -> bool:
        return all(s.reliable for s in self.steps)

    def true_step(self, k: int) -> np.ndarray:
        """The un-normalized iterate (may overflow for long chains)."""
        s = self.steps[k]
        if s.collapsed:
            return np.zeros_like(s.t)
        return math.exp(s.log_scale) * s.t

    def judge(self, k: int, verdict: Verdict, rank_dependent: bool) -> Verdict:
        """Downgrade ``verdict`` according to the trust status of step k.

        A verdict that depends on the numeric rank of step k (a polar
        decomposition test) needs the step's own polar factor; a rank-free
        one (a commutator of ``t_k``) only needs ``t_k`` to be accurate, but
        its ``holds`` is still distrusted on a badly conditioned step, where
        a genuinely nonzero residual can hide below the zero band.
        """
        s = self.steps[k]
        if not s.accurate:
            return verdict.downgrade(f"step {k} built from an untrusted polar factor")
        if not s.local_ok:
            why = f"step {k}: {s.note}"
            return verdict.downgrade(why) if rank_dependent else verdict.distrust_holds(why)
        return verdict

    def binormal(self, k: int, config: ToleranceConfig = DEFAULT_CONFIG) -> Verdict:
        from .centered import is_binormal_moduli
        return self.judge(k, is_binormal_moduli(self.steps[k].t, config), False)

    def polar_with_u_chain(self, k: int,
                           config: ToleranceConfig = DEFAULT_CONFIG) -> Verdict:
        """Is ``T~^(k) = U~^(k) |T~^(k)|`` the polar decomposition?"""
        s = self.steps[k]
        u = self.u_chain[k]
        verdict = is_polar_pair(s.t, u, config)
        if not s.accurate:
            return self.judge(k, verdict, True)
        if not s.local_ok:
            parts = polar_pair_residuals(s.t, u, config)
            if parts["factor"] >= config.sep_tol:
                return Verdict.from_residual(parts["factor"], 1.0, config)
            return verdict.downgrade(f"step {k}: {s.note}")
        return verdict

    def to_json(self, config: ToleranceConfig = DEFAULT_CONFIG) -> dict:
        u0 = self.u_chain[0]
        upow = powers(u0, self.n + 1)
        steps = []
        for s in self.steps:
            entry = {
                "k": s.k,
                "t": matrix_to_json(s.t),
                "log_scale": None if s.collapsed else s.log_scale,
                "collapsed": s.collapsed,
                "reliable": s.reliable,
                "rank": s.polar.rank,
                "residual_factor": s.polar.residual_factor,
                "residual_init": s.polar.residual_init,
                "binormal": self.binormal(s.k, config).to_dict(),
            }
            if s.note:
                entry["note"] = s.note
            if s.k >= 1:
                entry["u_tilde_polar"] = self.polar_with_u_chain(s.k, config).to_dict()
                closed = dagger(upow[s.k - 1]) @ upow[s.k]
                entry["u_tilde_vs_power_formula"] = close(
                    self.u_chain[s.k], closed, config, scale=1.0).to_dict()
            steps.append(entry)
        return {"params": self.params.to_json(), "normalized": self.normalized,
                "collapsed_at": self.collapsed_at, "steps": steps}


def _predicted_rank(pf: PolarForm, config) -> tuple[int, bool]:
    """Rank of the next iterate, read off ``Q U Q`` with ``Q = U^*U``.

    ``|T|^alpha`` and ``|T|^beta`` are injective on the range of ``Q`` and
    vanish off it, so ``rank(|T|^alpha U |T|^beta) = rank(QUQ)``.  All
    singular values of ``QUQ`` are at most 1, so the cutoff is absolute.
    """
    q = dagger(pf.u) @ pf.u
    s = np.linalg.svd(q @ pf.u @ q, compute_uv=False)
    cut = config.rank_rtol
    ambiguous = bool(np.any((s > cut * 1e-2) & (s < cut * 1e2)))
    return int(np.count_nonzero(s > cut)), ambiguous


def iterated_aluthge(t, params=AluthgeParams(), n: int = 1,
                     config: ToleranceConfig = DEFAULT_CONFIG,
                     normalize: bool = True) -> AluthgeChain:
    """Iterates ``T~^(0) = T, ..., T~^(n)`` with fresh polar forms per step.

    With ``normalize`` (the default) every step is stored as a unit-norm
    matrix ``t`` with ``T~^(k) = exp(log_scale) * t``; step 0 is ``T``
    itself.  Polar factors and all centeredness verdicts are invariant under
    positive rescaling.  Without it the literal iterates are stored, which
    can overflow for long chains with ``alpha + beta > 1``.

    A step whose norm drops below ``COLLAPSE_FLOOR`` (relative to a
    unit-norm input) is replaced by exact zero, as are all later steps.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    params = _params(params)
    cur = as_matrix(t)
    if cur.shape[0] != cur.shape[1]:
        raise ValueError(f"expected a square matrix, got {cur.shape}")
    chain = AluthgeChain(params, normalized=normalize)
    log_scale = 0.0
    collapsed = not np.any(cur)
    predicted: tuple[int, bool] | None = None
    accurate = True
    for k in range(n + 1):
        pf = polar_decompose(cur, config)
        notes = []
        if accurate and predicted is not None:
            if predicted[1]:
                accurate = False
                notes.append("predicted rank is ambiguous")
            elif (0 if collapsed else pf.rank) != predicted[0]:
                accurate = False
                notes.append("collapsed although predicted rank is positive"
                             if collapsed else
                             f"numeric rank {pf.rank} differs from predicted "
                             f"rank {predicted[0]}")
        local_ok = True
        if not collapsed and pf.indeterminate_rank:
            local_ok = False
            notes.append("indeterminate rank")
        elif not collapsed and pf.cond > config.cond_limit:
            local_ok = False
            notes.append(f"condition number {pf.cond:.2e} exceeds limit")
        chain.steps.append(ChainStep(k, cur, pf, -math.inf if collapsed else log_scale,
                                     collapsed, local_ok, accurate, "; ".join(notes)))
        if k == n:
            break
        accurate = accurate and local_ok
        predicted = _predicted_rank(pf, config)
        if collapsed:
            cur = np.zeros_like(cur)
            continue
        c = pf.sigma[0] if normalize else 1.0
        nxt = transform_from_polar(pf, params, config, scale=c)
        floor = COLLAPSE_FLOOR if normalize else COLLAPSE_FLOOR * pf.sigma[0] ** params.degree
        if opnorm(nxt) <= floor:
            collapsed = True
            nxt = np.zeros_like(nxt)
        if normalize:
            log_scale = params.degree * (log_scale + math.log(c))
        cur = nxt
    chain.u_chain = u_tilde_chain(chain.steps[0].polar.u, n)
    return chain


# ---------------------------------------------------------------------------
# identities that need (n+1)-centeredness

def check_lemma_4_1(t, n: int, params=AluthgeParams(),
                    config: ToleranceConfig = DEFAULT_CONFIG,
                    pf: PolarForm | None = None):
    """``U^k|T~|U^k* = U^k|T|^beta U^k* . U^{k-1}|T|^alpha U^{k-1}*``, k = 1..n+2."""
    from .centered import IdentityCheck, is_n_centered_definitional

    params = _params(params)
    t = as_matrix(t)
    if pf is None:
        pf = polar_decompose(t, config)
    pre = is_n_centered_definitional(t, n + 1, config, pf).verdict("definitional")
    check = IdentityCheck("modulus of transform splits", pre)
    if not check.applicable:
        return check
    ma = psd_power(pf.modulus, params.alpha, config)
    mb = psd_power(pf.modulus, params.beta, config)
    tt = ma @ pf.u @ mb
    mod_tt = polar_decompose(tt, config).modulus
    scale = (fro(ma) * fro(mb)) or 1.0
    d = t.shape[0]
    upow = [np.eye(d, dtype=np.complex128)] + powers(pf.u, n + 2)
    for k in range(1, n + 3):
        lhs = _conj(upow[k], mod_tt)
        rhs = _conj(upow[k], mb) @ _conj(upow[k - 1], ma)
        check.per_k.append(close(lhs, rhs, config, scale=scale))
    return check


def check_lemma_4_4(t, n: int, params=AluthgeParams(),
                    config: ToleranceConfig = DEFAULT_CONFIG,
                    pf: PolarForm | None = None):
    """``U~^k|T~|U~^k* |T~| = U^k|T~|U^k* |T~|`` for k = 1..n."""
    from .centered import IdentityCheck, is_n_centered_definitional

    params = _params(params)
    t = as_matrix(t)
    if pf is None:
        pf = polar_decompose(t, config)
    pre = is_n_centered_definitional(t, n + 1, config, pf).verdict("definitional")
    check = IdentityCheck("U~ may replace U", pre)
    if not check.applicable:
        return check
    tt = transform_from_polar(pf, params, config)
    mod_tt = polar_decompose(tt, config).modulus
    scale = fro(mod_tt) ** 2 or 1.0
    for ut_k, u_k in zip(powers(u_tilde(pf.u), n), powers(pf.u, n)):
        lhs = _conj(ut_k, mod_tt) @ mod_tt
        rhs = _conj(u_k, mod_tt) @ mod_tt
        check.per_k.append(close(lhs, rhs, config, scale=scale))
    return check
