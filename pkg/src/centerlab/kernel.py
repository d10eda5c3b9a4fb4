"""Dense complex matrix kernel.

Everything in the package passes operators around as plain 2-D ``complex128``
numpy arrays.  This module holds the factorizations and matrix functions the
rest of the code is built on, together with the tolerance policy that turns
floating-point residuals into three-valued verdicts.
"""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

__all__ = [
    "KernelError",
    "NotHermitianError",
    "NotPSDError",
    "ToleranceConfig",
    "DEFAULT_CONFIG",
    "Value",
    "Verdict",
    "all_of",
    "any_of",
    "as_matrix",
    "dagger",
    "fro",
    "opnorm",
    "svd",
    "eigh",
    "psd_power",
    "commutator",
    "commutes",
    "close",
    "numeric_rank",
    "rank_ambiguous",
    "powers",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
    "dump_matrix",
]


class KernelError(RuntimeError):
    """A factorization failed to converge."""


class NotHermitianError(ValueError):
    def __init__(self, residual: float, scale: float):
        super().__init__(
            f"matrix is not Hermitian: ||A - A*||_F = {residual:.3e} "
            f"(||A||_F = {scale:.3e})")
        self.residual = residual
        self.scale = scale


class NotPSDError(ValueError):
    def __init__(self, min_eig: float, scale: float):
        super().__init__(
            f"matrix is not positive semidefinite: smallest eigenvalue "
            f"{min_eig:.3e} (||A|| = {scale:.3e})")
        self.min_eig = min_eig
        self.scale = scale


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared by every verdict in the package.

    Parameters
    ----------
    rank_rtol : float
        Singular values at or below ``rank_rtol * sigma_max`` count as zero.
    zero_tol : float
        A scaled residual at or below this is "zero" (the identity holds).
    sep_tol : float
        A scaled residual at or above this is "nonzero" (the identity fails).
        Anything strictly between the two is reported as indeterminate.
    cond_limit : float
        Largest ratio ``sigma_max / sigma_min`` (over the numeric range) for
        which rank-dependent quantities of a matrix are trusted.  Used by the
        iterated Aluthge chain, whose condition number grows geometrically.
    """

    rank_rtol: float = 1e-10
    zero_tol: float = 1e-8
    sep_tol: float = 1e-4
    cond_limit: float = 1e6

    def __post_init__(self):
        if not 0.0 <= self.rank_rtol < 1.0:
            raise ValueError(f"rank_rtol must lie in [0, 1), got {self.rank_rtol}")
        if not 0.0 < self.zero_tol < self.sep_tol:
            raise ValueError(
                f"need 0 < zero_tol < sep_tol, got {self.zero_tol}, {self.sep_tol}")
        if self.cond_limit <= 1.0:
            raise ValueError(f"cond_limit must exceed 1, got {self.cond_limit}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ToleranceConfig":
        return cls(**{k: float(v) for k, v in d.items()})


DEFAULT_CONFIG = ToleranceConfig()


class Value(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"
    # standing hypothesis not met; never produced by a residual comparison.
    SKIPPED = "skipped"


@dataclass(frozen=True)
class Verdict:
    """Banded decision over an exact identity.

    ``value`` is ``holds`` when ``residual <= zero_tol * scale``, ``fails``
    when ``residual >= sep_tol * scale`` and ``indeterminate`` otherwise.  A
    non-empty ``note`` marks a verdict that was downgraded to indeterminate
    for a reason other than its residual (ambiguous rank, ill-conditioning).
    """

    value: Value
    residual: float
    scale: float
    note: str = ""

    @classmethod
    def from_residual(cls, residual: float, scale: float,
                      config: ToleranceConfig = DEFAULT_CONFIG) -> "Verdict":
        residual = float(residual)
        scale = float(scale)
        if residual <= config.zero_tol * scale:
            value = Value.HOLDS
        elif residual >= config.sep_tol * scale:
            value = Value.FAILS
        else:
            value = Value.INDETERMINATE
        return cls(value, residual, scale)

    @classmethod
    def skipped(cls, note: str) -> "Verdict":
        return cls(Value.SKIPPED, 0.0, 1.0, note)

    @property
    def ratio(self) -> float:
        return self.residual / self.scale if self.scale > 0 else self.residual

    @property
    def holds(self) -> bool:
        return self.value is Value.HOLDS

    @property
    def fails(self) -> bool:
        return self.value is Value.FAILS

    @property
    def decisive(self) -> bool:
        return self.value in (Value.HOLDS, Value.FAILS)

    def band(self, config: ToleranceConfig = DEFAULT_CONFIG) -> Value:
        """Band the residual alone falls in, ignoring any downgrade."""
        return Verdict.from_residual(self.residual, self.scale, config).value

    def downgrade(self, note: str) -> "Verdict":
        """Turn any decisive verdict into an indeterminate one."""
        if not self.decisive:
            return self
        return Verdict(Value.INDETERMINATE, self.residual, self.scale, note)

    def distrust_holds(self, note: str) -> "Verdict":
        """Downgrade only a ``holds``; a decisive failure is kept."""
        if self.value is Value.HOLDS:
            return Verdict(Value.INDETERMINATE, self.residual, self.scale, note)
        return self

    def to_dict(self) -> dict:
        d = {"verdict": self.value.value, "residual": self.residual,
             "scale": self.scale}
        if self.note:
            d["note"] = self.note
        return d


def all_of(verdicts: Iterable[Verdict]) -> Verdict:
    """Conjunction: fails if any fails, holds only if every one holds.

    The representative residual is the worst (largest ratio) among the
    verdicts sharing the resulting value.  An empty conjunction holds.
    """
    vs = [v for v in verdicts if v.value is not Value.SKIPPED]
    if not vs:
        return Verdict(Value.HOLDS, 0.0, 1.0)
    for target in (Value.FAILS, Value.INDETERMINATE, Value.HOLDS):
        group = [v for v in vs if v.value is target]
        if group:
            return max(group, key=lambda v: v.ratio)
    raise AssertionError("unreachable")


def any_of(verdicts: Iterable[Verdict]) -> Verdict:
    """Disjunction: holds if any holds, fails only if every one fails."""
    vs = [v for v in verdicts if v.value is not Value.SKIPPED]
    if not vs:
        return Verdict(Value.FAILS, 0.0, 1.0, "empty disjunction")
    for target in (Value.HOLDS, Value.INDETERMINATE, Value.FAILS):
        group = [v for v in vs if v.value is target]
        if group:
            return min(group, key=lambda v: v.ratio)
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# basic helpers

def as_matrix(a) -> np.ndarray:
    """Validate and convert to a 2-D complex128 array with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, "fro"))


def opnorm(a: np.ndarray) -> float:
    """Spectral norm (largest singular value)."""
    if not np.any(a):
        return 0.0
    return float(np.linalg.norm(a, 2))


def _square_pair(a, b):
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ValueError(
            f"need two square matrices of equal size, got {a.shape} and {b.shape}")


# ---------------------------------------------------------------------------
# factorizations

def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``a = W @ diag(sigma) @ V^*``.

    Returns ``(W, sigma, V)`` with ``sigma`` descending.  Note that ``V`` is
    returned, not its adjoint.
    """
    a = as_matrix(a)
    try:
        w, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError:
        # gesdd occasionally fails where the slower gesvd converges
        try:
            w, s, vh = scipy.linalg.svd(a, full_matrices=False,
                                        lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise KernelError(
                f"SVD did not converge for a {a.shape[0]}x{a.shape[1]} matrix"
            ) from exc
    return w, s, dagger(vh)


def eigh(a, config: ToleranceConfig = DEFAULT_CONFIG
         ) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition ``a = Q @ diag(lam) @ Q^*``, ascending."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"eigh needs a square matrix, got {a.shape}")
    scale = fro(a)
    asym = fro(a - dagger(a))
    if asym > config.zero_tol * scale:
        raise NotHermitianError(asym, scale)
    try:
        lam, q = np.linalg.eigh(0.5 * (a + dagger(a)))
    except np.linalg.LinAlgError as exc:
        raise KernelError(
            f"eigh did not converge for a {a.shape[0]}x{a.shape[1]} matrix"
        ) from exc
    return q, lam


def psd_power(a, alpha: float, config: ToleranceConfig = DEFAULT_CONFIG
              ) -> np.ndarray:
    """Fractional power of a Hermitian positive semidefinite matrix.

    Eigenvalues with magnitude at most ``zero_tol * ||a||`` are set to zero
    before powering, so ``0 ** alpha == 0`` for every ``alpha > 0`` and the
    range of the result equals the (numeric) range of ``a``.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    q, lam = eigh(a, config)
    scale = float(np.max(np.abs(lam))) if lam.size else 0.0
    if scale == 0.0:
        return np.zeros_like(q)
    if lam[0] < -config.sep_tol * scale:
        raise NotPSDError(float(lam[0]), scale)
    lam = np.where(lam <= config.zero_tol * scale, 0.0, lam)
    if alpha == 1.0:
        powered = lam
    else:
        powered = np.zeros_like(lam)
        pos = lam > 0
        powered[pos] = lam[pos] ** alpha
    out = (q * powered) @ dagger(q)
    return 0.5 * (out + dagger(out))


def commutator(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    _square_pair(a, b)
    return a @ b - b @ a


def commutes(a, b, config: ToleranceConfig = DEFAULT_CONFIG,
             scale: float | None = None) -> Verdict:
    """Decide ``[a, b] = 0``.

    The residual is ``||[a, b]||_F``.  By default it is measured against
    ``||a||_F * ||b||_F`` (or 1 when either factor is zero); callers that
    know a better normalizer, e.g. because ``a`` is a conjugate of a matrix
    whose norm is known, pass ``scale`` explicitly.
    """
    res = fro(commutator(a, b))
    if scale is None:
        scale = fro(a) * fro(b)
        if scale == 0.0:
            scale = 1.0
    return Verdict.from_residual(res, scale, config)


def close(x, y, config: ToleranceConfig = DEFAULT_CONFIG,
          scale: float | None = None) -> Verdict:
    """Decide ``x = y`` from ``||x - y||_F``."""
    res = fro(np.asarray(x) - np.asarray(y))
    if scale is None:
        scale = max(fro(x), fro(y))
    if scale == 0.0:
        scale = 1.0
    return Verdict.from_residual(res, scale, config)


def numeric_rank(sigma: Sequence[float],
                 config: ToleranceConfig = DEFAULT_CONFIG) -> int:
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size == 0 or sigma[0] <= 0.0:
        return 0
    return int(np.count_nonzero(sigma > config.rank_rtol * sigma[0]))


def rank_ambiguous(sigma: Sequence[float],
                   config: ToleranceConfig = DEFAULT_CONFIG) -> bool:
    """True when some singular value sits within two decades of the cutoff."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size == 0 or sigma[0] <= 0.0:
        return False
    cut = config.rank_rtol * sigma[0]
    return bool(np.any((sigma > cut * 1e-2) & (sigma < cut * 1e2)))


def powers(a: np.ndarray, n: int) -> list[np.ndarray]:
    """``[a, a^2, ..., a^n]`` by repeated multiplication."""
    out = []
    cur = None
    for _ in range(n):
        cur = a.copy() if cur is None else cur @ a
        out.append(cur)
    return out


# ---------------------------------------------------------------------------
# matrix file format: {"rows": r, "cols": c, "data": [[re, im], ...]}

def matrix_to_json(a) -> dict:
    a = as_matrix(a)
    flat = a.reshape(-1)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows = obj["rows"]
        cols = obj["cols"]
        data = obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError("matrix object needs 'rows', 'cols' and 'data'") from exc
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise ValueError(f"rows and cols must be positive integers, got {rows}, {cols}")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ValueError(f"'data' must hold rows*cols = {rows * cols} entries")
    try:
        arr = np.array([complex(float(re), float(im)) for re, im in data],
                       dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ValueError("each entry of 'data' must be a [re, im] pair") from exc
    return as_matrix(arr.reshape(rows, cols))


def load_matrix(path: str | Path) -> np.ndarray:
    """Read a matrix file.  Raises ``json.JSONDecodeError`` or ``ValueError``."""
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def dump_matrix(a, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(a), fh)
        fh.write("\n")
