"""Deterministic operator families with known centered structure.

Random families draw from ``numpy.random.Generator(PCG64(seed))``; the same
family, parameters and seed always produce the same bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
import scipy.linalg

from .kernel import (DEFAULT_CONFIG, ToleranceConfig, Value, as_matrix,
                     commutator, eigh, fro)

__all__ = [
    "ConstructionError",
    "DEFAULT_A",
    "DEFAULT_B",
    "rng",
    "identity",
    "weighted_shift",
    "block_shift_family",
    "quasinormal",
    "dense_random",
    "unitary_random",
    "psd_random",
    "jordan",
    "direct_sum",
    "OperatorSpec",
    "FAMILIES",
]

DEFAULT_A = np.array([[2.0, 1.0], [1.0, 1.0]], dtype=np.complex128)
DEFAULT_B = np.diag([1.0, 2.0]).astype(np.complex128)


class ConstructionError(RuntimeError):
    """A constructed family failed its own oracle self-check."""


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & (2 ** 64 - 1)))


def _ginibre(g: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (g.standard_normal((rows, cols))
            + 1j * g.standard_normal((rows, cols))) / np.sqrt(2.0)


def identity(d: int) -> np.ndarray:
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    return np.eye(d, dtype=np.complex128)


def weighted_shift(weights: Sequence[float]) -> np.ndarray:
    """Unilateral weighted shift ``T e_i = w_i e_{i+1}``, ``T e_d = 0``.

    Its modulus ``diag(w_1, ..., w_{d-1}, 0)`` is diagonal, which makes every
    commutator in the centeredness criterion one between diagonal matrices.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size < 1:
        raise ValueError("need at least one weight (dimension >= 2)")
    if np.any(w < 0):
        raise ValueError(f"weights must be nonnegative, got {list(w)}")
    d = w.size + 1
    t = np.zeros((d, d), dtype=np.complex128)
    t[np.arange(1, d), np.arange(d - 1)] = w
    return t


def _check_pd(a: np.ndarray, name: str, config: ToleranceConfig):
    _, lam = eigh(a, config)
    if lam[0] <= 0:
        raise ValueError(f"{name} must be positive definite "
                         f"(smallest eigenvalue {lam[0]:.3e})")


def block_shift_family(n: int, a=None, b=None,
                       config: ToleranceConfig = DEFAULT_CONFIG,
                       verify: bool = True) -> np.ndarray:
    """An operator that is ``(n+1)``-centered but not ``(n+2)``-centered.

    With ``m = n + 3`` blocks of size ``d``: ``U`` is the block down-shift
    (block i to block i+1, the last block to 0) and
    ``|T| = blockdiag(A, I, ..., I, B, 0)`` with ``n`` identity blocks, so
    ``T = U|T|`` has subdiagonal blocks ``A, I, ..., I, B``.  The commutator
    ``[U^k|T|U^k*, |T|]`` has diagonal blocks ``[P_i, P_{i+k}]``; these all
    vanish for ``k <= n`` and contain ``[A, B] != 0`` at ``k = n + 1``.

    Parameters
    ----------
    n : int
        Target: the result is exactly ``(n+1)``-centered.
    a, b : (d, d) array_like, optional
        Positive definite blocks with ``[a, b] != 0``.  Defaults to
        ``[[2, 1], [1, 1]]`` and ``diag(1, 2)``.
    verify : bool
        Run both centeredness oracles on the result and raise
        :class:`ConstructionError` if either disagrees with the guarantee.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    a = DEFAULT_A if a is None else as_matrix(a)
    b = DEFAULT_B if b is None else as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"blocks must be square of equal size, got "
                         f"{a.shape} and {b.shape}")
    _check_pd(a, "A", config)
    _check_pd(b, "B", config)
    gap = fro(commutator(a, b))
    if gap < config.sep_tol * fro(a) * fro(b):
        raise ValueError(f"A and B must not commute (||[A, B]||_F = {gap:.3e})")

    d = a.shape[0]
    m = n + 3
    eye = np.eye(d, dtype=np.complex128)
    blocks = [a] + [eye] * n + [b]
    t = np.zeros((m * d, m * d), dtype=np.complex128)
    for i, p in enumerate(blocks):
        t[(i + 1) * d:(i + 2) * d, i * d:(i + 1) * d] = p
    if verify:
        _verify_block_shift(t, n, config)
    return t


def _verify_block_shift(t, n, config):
    # local import: centered depends on kernel/polar only, not on generators
    from .centered import centered_report

    rep = centered_report(t, n + 2, config)
    problems = []
    for route in ("definitional", "commutator"):
        cum = rep.cumulative(route)
        if not all(v.holds for v in cum[:n + 1]):
            problems.append(f"{route}: not {n + 1}-centered")
        if cum[n + 1].value is not Value.FAILS:
            problems.append(f"{route}: {n + 2}-centered verdict is "
                            f"{cum[n + 1].value.value}, expected fails")
    if problems:
        dump = json.dumps(rep.to_json(), indent=1)
        raise ConstructionError("; ".join(problems) + "\n" + dump)


def unitary_random(d: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary (QR of a Ginibre matrix, phases fixed)."""
    g = rng(seed)
    q, r = np.linalg.qr(_ginibre(g, d, d))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def psd_random(d: int, seed: int, eig_range=(0.5, 2.0)) -> np.ndarray:
    """Hermitian positive definite with eigenvalues uniform in ``eig_range``."""
    lo, hi = eig_range
    if not 0 < lo <= hi:
        raise ValueError(f"need 0 < lo <= hi, got {eig_range}")
    g = rng(seed)
    w = unitary_random(d, int(g.integers(2 ** 63)))
    lam = g.uniform(lo, hi, size=d)
    out = (w * lam) @ w.conj().T
    return 0.5 * (out + out.conj().T)


def quasinormal(d: int, seed: int, moduli_range=(0.5, 2.0),
                n_zero: int = 0) -> np.ndarray:
    """Normal operator ``W diag(lambda) W^*`` with random phases.

    The moduli ``|lambda_i|`` are uniform in ``moduli_range``; the last
    ``n_zero`` eigenvalues are set to 0.  Normal operators are quasinormal,
    hence centered.
    """
    lo, hi = moduli_range
    if d < 1 or not 0 < lo <= hi or not 0 <= n_zero <= d:
        raise ValueError("invalid quasinormal parameters")
    g = rng(seed)
    w = unitary_random(d, int(g.integers(2 ** 63)))
    lam = g.uniform(lo, hi, size=d) * np.exp(2j * np.pi * g.uniform(size=d))
    if n_zero:
        lam[d - n_zero:] = 0.0
    return (w * lam) @ w.conj().T


def dense_random(d: int, seed: int, rank_deficit: int = 0) -> np.ndarray:
    """Ginibre matrix, optionally of rank ``d - rank_deficit``."""
    if not 0 <= rank_deficit < d:
        raise ValueError(f"rank_deficit must lie in [0, {d}), got {rank_deficit}")
    g = rng(seed)
    if rank_deficit == 0:
        return _ginibre(g, d, d) / np.sqrt(d)
    r = d - rank_deficit
    return _ginibre(g, d, r) @ _ginibre(g, r, d) / d


def jordan(d: int, eigenvalue: complex = 1.0) -> np.ndarray:
    """Single Jordan block; ``jordan(2, 1)`` is the canonical non-binormal case."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    t = eigenvalue * np.eye(d, dtype=np.complex128)
    t[np.arange(d - 1), np.arange(1, d)] = 1.0
    return t


def direct_sum(*ts) -> np.ndarray:
    if not ts:
        raise ValueError("direct_sum needs at least one summand")
    return scipy.linalg.block_diag(*[as_matrix(t) for t in ts]).astype(np.complex128)


# ---------------------------------------------------------------------------

FAMILIES = ("identity", "unitary_random", "psd_random", "quasinormal",
            "weighted_shift", "block_shift", "jordan", "direct_sum",
            "dense_random")


@dataclass(frozen=True)
class OperatorSpec:
    """Serializable description of one generated operator.

    ``params`` holds the family-specific payload, e.g. ``{"d": 6}`` or
    ``{"weights": [1, 2, 3]}``; ``direct_sum`` takes
    ``{"parts": [<spec dict>, ...]}``.  ``block_shift`` takes ``n`` and
    optional ``a``/``b`` blocks as nested ``[[re, im], ...]`` rows.
    """

    family: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    label: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; "
                             f"expected one of {', '.join(FAMILIES)}")

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        bits = [f"{k}={v}" for k, v in sorted(self.params.items())
                if k != "parts"]
        if self.family in ("unitary_random", "psd_random", "quasinormal",
                           "dense_random"):
            bits.append(f"seed={self.seed}")
        return f"{self.family}({', '.join(bits)})"

    def build(self, config: ToleranceConfig = DEFAULT_CONFIG) -> np.ndarray:
        p = self.params
        f = self.family
        if f == "identity":
            return identity(int(p["d"]))
        if f == "unitary_random":
            return unitary_random(int(p["d"]), self.seed)
        if f == "psd_random":
            return psd_random(int(p["d"]), self.seed,
                              tuple(p.get("eig_range", (0.5, 2.0))))
        if f == "quasinormal":
            return quasinormal(int(p["d"]), self.seed,
                               tuple(p.get("moduli_range", (0.5, 2.0))),
                               int(p.get("n_zero", 0)))
        if f == "weighted_shift":
            return weighted_shift(p["weights"])
        if f == "block_shift":
            a = _block(p.get("a"))
            b = _block(p.get("b"))
            return block_shift_family(int(p["n"]), a, b, config,
                                      verify=bool(p.get("verify", True)))
        if f == "jordan":
            ev = p.get("eigenvalue", 1.0)
            if isinstance(ev, (list, tuple)):
                ev = complex(ev[0], ev[1])
            return jordan(int(p["d"]), ev)
        if f == "direct_sum":
            return direct_sum(*[OperatorSpec.from_json(q).build(config)
                                for q in p["parts"]])
        if f == "dense_random":
            return dense_random(int(p["d"]), self.seed,
                                int(p.get("rank_deficit", 0)))
        raise AssertionError(f)

    def to_json(self) -> dict:
        out = {"family": self.family, "params": self.params, "seed": self.seed}
        if self.label:
            out["label"] = self.label
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "OperatorSpec":
        if "family" not in obj:
            raise ValueError("operator spec needs a 'family'")
        return cls(obj["family"], dict(obj.get("params", {})),
                   int(obj.get("seed", 0)), str(obj.get("label", "")))


def _block(rows):
    if rows is None:
        return None
    return np.array([[complex(re, im) for re, im in row] for row in rows],
                    dtype=np.complex128)
