"""Matrix-free Krylov solvers.

``cg`` is plain conjugate gradients for self-adjoint positive (semi)definite
systems.  ``spcg`` runs CG on the symmetric composite P A P with right-hand
side P f and recovers u = P u~.  ``lbicg`` solves the nonsymmetric left
composite P A u = P f with a stabilized bi-conjugate gradient method (one
restart with a fresh random shadow vector on breakdown).

Convergence is declared on the relative residual of the system actually
iterated; the preconditioned solvers additionally report the true residual
of A u = f.  Singular-but-consistent periodic problems are handled by
projecting the right-hand side (and the returned solution) onto the zero-mean
subspace via ``project=zero_mean``.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .precond import Mode, wire_system

__all__ = [
    "SolveConfig",
    "SolveReport",
    "BreakdownError",
    "zero_mean",
    "cg",
    "spcg",
    "lbicg",
]


class BreakdownError(RuntimeError):
    """Numerical breakdown (NaN, loss of positivity, Lanczos stall)."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []


@dataclass
class SolveConfig:
    tol: float = 1e-10
    max_iter: int | None = None  # defaults to 10*n
    record_history: bool = True
    seed: int = 0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")

    def iter_limit(self, n):
        return self.max_iter if self.max_iter is not None else 10 * n


@dataclass
class SolveReport:
    x: np.ndarray
    iterations: int
    converged: bool
    residuals: list = field(default_factory=list)
    true_residuals: list | None = None
    final_true_residual: float = np.nan
    wall_time: float = 0.0


def zero_mean(v):
    """Projection onto the zero-mean subspace (range of periodic operators
    that annihilate constants)."""
    return v - v.mean()


def _check_finite(value, history):
    if not np.isfinite(value):
        raise BreakdownError("non-finite residual encountered", history)


def _cg_core(apply_fn, b, tol, max_iter, record, true_res=None):
    n = b.size
    x = np.zeros(n)
    bnorm = np.linalg.norm(b)
    residuals, true_hist = [], ([] if (record and true_res is not None) else None)
    if bnorm == 0.0:
        return x, 0, True, residuals, true_hist
    r = b.copy()
    p = r.copy()
    rs = r @ r
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        ap = apply_fn(p)
        pap = p @ ap
        if not np.isfinite(pap) or pap <= 0.0:
            raise BreakdownError(
                f"CG curvature p'Ap = {pap:.3e} is not positive", residuals
            )
        alpha = rs / pap
        x += alpha * p
        r -= alpha * ap
        relres = np.linalg.norm(r) / bnorm
        _check_finite(relres, residuals)
        if record:
            residuals.append(relres)
            if true_hist is not None:
                true_hist.append(true_res(x))
        if relres <= tol:
            converged = True
            break
        rs_new = r @ r
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x, iterations, converged, residuals, true_hist


def _bicgstab_core(apply_fn, b, tol, max_iter, record, rng, true_res=None):
    n = b.size
    x = np.zeros(n)
    bnorm = np.linalg.norm(b)
    residuals, true_hist = [], ([] if (record and true_res is not None) else None)
    if bnorm == 0.0:
        return x, 0, True, residuals, true_hist
    r = b.copy()
    rhat = r.copy()
    rho = alpha = omega = 1.0
    v = np.zeros(n)
    p = np.zeros(n)
    restarted = False
    converged = False
    iterations = 0
    tiny = np.finfo(float).tiny * 1e8

    def note(relres, xs):
        _check_finite(relres, residuals)
        if record:
            residuals.append(relres)
            if true_hist is not None:
                true_hist.append(true_res(xs))

    for iterations in range(1, max_iter + 1):
        rho_new = rhat @ r
        if abs(rho_new) < tiny or abs(omega) < tiny:
            if restarted:
                raise BreakdownError("bi-orthogonality lost twice", residuals)
            restarted = True
            r = b - apply_fn(x)
            rhat = rng.standard_normal(n)
            rho = alpha = omega = 1.0
            v[:] = 0.0
            p[:] = 0.0
            rho_new = rhat @ r
            if abs(rho_new) < tiny:
                raise BreakdownError("restart shadow vector is still degenerate", residuals)
        beta = (rho_new / rho) * (alpha / omega)
        rho = rho_new
        p = r + beta * (p - omega * v)
        v = apply_fn(p)
        denom = rhat @ v
        if abs(denom) < tiny:
            raise BreakdownError("shadow inner product vanished", residuals)
        alpha = rho / denom
        s = r - alpha * v
        if np.linalg.norm(s) / bnorm <= tol:
            x += alpha * p
            note(np.linalg.norm(b - apply_fn(x)) / bnorm, x)
            converged = True
            break
        t = apply_fn(s)
        tt = t @ t
        if tt == 0.0:
            raise BreakdownError("stabilization direction vanished", residuals)
        omega = (t @ s) / tt
        x += alpha * p + omega * s
        r = s - omega * t
        relres = np.linalg.norm(r) / bnorm
        note(relres, x)
        if relres <= tol:
            converged = True
            break
    return x, iterations, converged, residuals, true_hist


def cg(A, f, cfg=None, project=None):
    """Conjugate gradients for self-adjoint positive (semi)definite A.

    For semidefinite systems pass ``project`` to put f (and the solution)
    into the operator's range.
    """
    cfg = cfg or SolveConfig()
    f = np.asarray(f, dtype=float)
    if project is not None:
        f = project(f)
    start = time.perf_counter()
    x, its, ok, res, _ = _cg_core(
        A.apply, f, cfg.tol, cfg.iter_limit(f.size), cfg.record_history
    )
    if project is not None:
        x = project(x)
    wall = time.perf_counter() - start
    bnorm = np.linalg.norm(f)
    final = np.linalg.norm(f - A.apply(x)) / bnorm if bnorm else 0.0
    return SolveReport(x, its, ok, res, None, final, wall)


def spcg(A, P, f, cfg=None, project=None):
    """Symmetric-preconditioned CG: solve P A P u~ = P f, return u = P u~."""
    cfg = cfg or SolveConfig()
    system = wire_system(Mode.SYMMETRIC, A, P)
    f = np.asarray(f, dtype=float)
    if project is not None:
        f = project(f)
    fnorm = np.linalg.norm(f)
    start = time.perf_counter()
    b = system.rhs_transform(f)

    def true_res(u_tilde):
        u = system.recover(u_tilde)
        return np.linalg.norm(f - A.apply(u)) / fnorm if fnorm else 0.0

    xt, its, ok, res, true_hist = _cg_core(
        system.operator.apply, b, cfg.tol, cfg.iter_limit(f.size),
        cfg.record_history, true_res,
    )
    x = system.recover(xt)
    if project is not None:
        x = project(x)
    wall = time.perf_counter() - start
    final = np.linalg.norm(f - A.apply(x)) / fnorm if fnorm else 0.0
    return SolveReport(x, its, ok, res, true_hist, final, wall)


def lbicg(A, P, f, cfg=None, project=None):
    """Left-preconditioned stabilized bi-conjugate gradients on P A u = P f."""
    cfg = cfg or SolveConfig()
    system = wire_system(Mode.LEFT, A, P)
    f = np.asarray(f, dtype=float)
    if project is not None:
        f = project(f)
    fnorm = np.linalg.norm(f)
    rng = np.random.default_rng(cfg.seed)
    start = time.perf_counter()
    b = system.rhs_transform(f)

    def true_res(u):
        return np.linalg.norm(f - A.apply(u)) / fnorm if fnorm else 0.0

    x, its, ok, res, true_hist = _bicgstab_core(
        system.operator.apply, b, cfg.tol, cfg.iter_limit(f.size),
        cfg.record_history, rng, true_res,
    )
    if project is not None:
        x = project(x)
    wall = time.perf_counter() - start
    final = np.linalg.norm(f - A.apply(x)) / fnorm if fnorm else 0.0
    return SolveReport(x, its, ok, res, true_hist, final, wall)
