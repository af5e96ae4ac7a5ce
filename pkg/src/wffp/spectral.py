"""Dense singular spectra and condition-number diagnostics at desk scale.

Everything here materializes operators column by column and runs a full SVD,
guarded at n <= 4096; the effective condition number discards singular values
below 1e-10 of the largest (the periodic constant mode), and the interior
ratio sigma_3/sigma_{n-2} tracks the spectrum with the extreme boundary
values removed.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "DENSE_GUARD",
    "ZERO_REL_CUTOFF",
    "SpectralError",
    "SpectralReport",
    "GrowthFit",
    "materialize",
    "singular_values",
    "growth_fit",
]

DENSE_GUARD = 4096
ZERO_REL_CUTOFF = 1e-10


class SpectralError(RuntimeError):
    pass


@dataclass
class SpectralReport:
    n: int
    sigma: np.ndarray  # sorted descending
    kappa: float
    kappa_eff: float
    interior_ratio: float
    factors: tuple | None = None


@dataclass
class GrowthFit:
    slope: float
    residual: float
    degenerate: bool = False


def materialize(op, max_chunk=None):
    """Dense matrix of a linear operator; columns are op(e_i).

    Refuses sizes above the guard; use iterative estimates for anything
    larger.
    """
    n = op.n
    if n > DENSE_GUARD:
        raise ValueError(
            f"n={n} exceeds the dense guard {DENSE_GUARD}; "
            "use iterative estimates instead of a full materialization"
        )
    chunk = max_chunk or max(1, 2_000_000 // n)
    out = np.empty((n, n))
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        basis = np.zeros((hi - lo, n))
        basis[np.arange(hi - lo), np.arange(lo, hi)] = 1.0
        block = op.apply(basis)
        out[lo:hi] = block.real if np.iscomplexobj(block) else block
    return out.T.copy()


def singular_values(mat, keep_factors=False):
    """Full singular spectrum with condition-number summaries."""
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.all(np.isfinite(mat)):
        raise ValueError("matrix entries must be finite")
    factors = None
    try:
        if keep_factors:
            u, s, vt = np.linalg.svd(mat)
            factors = (u, s, vt)
        else:
            s = np.linalg.svd(mat, compute_uv=False)
    except np.linalg.LinAlgError:
        try:
            s = scipy.linalg.svd(mat, compute_uv=False, lapack_driver="gesvd")
        except Exception as exc:  # pragma: no cover - LAPACK rarely fails twice
            raise SpectralError(f"SVD did not converge: {exc}") from exc
    n = mat.shape[0]
    top = s[0]
    kappa = top / s[-1] if s[-1] > 0 else np.inf
    positive = s[s > ZERO_REL_CUTOFF * top]
    kappa_eff = top / positive[-1] if positive.size else np.inf
    interior = s[2] / s[-3] if n >= 5 else np.nan
    return SpectralReport(n, s, kappa, kappa_eff, interior, factors)


def growth_fit(points):
    """Least-squares slope of log(kappa) against log(N).

    Constant data comes back with slope 0 and the degenerate flag set.
    """
    points = sorted(points)
    if len(points) < 4:
        raise ValueError("need at least 4 (N, kappa) points")
    sizes = np.array([p[0] for p in points], dtype=float)
    kappas = np.array([p[1] for p in points], dtype=float)
    if np.any(np.diff(sizes) <= 0):
        raise ValueError("N values must be strictly increasing")
    if np.any(kappas <= 0) or not np.all(np.isfinite(kappas)):
        raise ValueError("kappa values must be positive and finite")
    logs, logk = np.log(sizes), np.log(kappas)
    if logk.max() - logk.min() < 1e-14:
        return GrowthFit(0.0, 0.0, degenerate=True)
    slope, intercept = np.polyfit(logs, logk, 1)
    fitted = slope * logs + intercept
    residual = float(np.sqrt(np.mean((fitted - logk) ** 2)))
    return GrowthFit(float(slope), residual)
