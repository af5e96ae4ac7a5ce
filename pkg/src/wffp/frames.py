"""Discrete windowed-frame analysis and synthesis on uniform grids.

The grid has N points per axis and K windows per axis at hop M = N/K samples.
Each window covers a patch of 2M samples (one hop of overlap on each side)
and the per-patch DFT length equals the patch length, so the frame is
critically sampled at redundancy 2.  Phases are patch-relative: the atom at
window m and bin k is ``g[p - M] * exp(2i*pi*k*p/N_l)`` with p the in-patch
index.  With a window whose squared translates sum to one this makes F an
isometry (F*F = I) after the 1/sqrt(N_l) scaling used here, for periodic and
Dirichlet layouts alike.

Layouts:

* periodic, K >= 2 -- K windows centered at grid indices 0, M, ..., (K-1)M,
  patches wrap around the seam;
* periodic, K == 1 -- the plain unitary DFT of length N (no windowing);
* Dirichlet -- K+1 windows centered at 0, M, ..., KM; the two end windows
  lose the halves that fall outside the domain and are not renormalized.

Two dimensions use the tensor product of the one-dimensional transform along
each axis; vectors are flat in row-major (x-major) order.
"""

from dataclasses import dataclass

import numpy as np

from .operators import Boundary, LinearOperator
from .windows import Window, WindowProfile, ProfileKind, build_window

__all__ = [
    "FrameLayout",
    "FrameCoefficients",
    "FrameBoundsError",
    "analyze",
    "synthesize",
    "frame_bounds",
    "gram_operator",
]


class FrameBoundsError(RuntimeError):
    """Power iteration failed to settle; carries the best estimates so far."""

    def __init__(self, message, a_est, b_est):
        super().__init__(message)
        self.a_est = a_est
        self.b_est = b_est


@dataclass(frozen=True)
class _Axis:
    """Per-axis gather/scatter geometry shared by both axes in 2-D."""

    axis_len: int
    n_windows: int
    n_bins: int
    pure_fourier: bool
    win: np.ndarray | None
    pairs: tuple  # per window: ((vec_lo, vec_hi), (patch_lo, patch_hi)) slices
    centers: np.ndarray
    xi: np.ndarray


def _axis_pairs(N, K, M, boundary):
    patch_len = 2 * M
    pairs = []
    if boundary is Boundary.PERIODIC:
        for j in range(K):
            s = (j * M - M) % N
            if s + patch_len <= N:
                pairs.append((((s, s + patch_len), (0, patch_len)),))
            else:
                r = N - s
                pairs.append((((s, N), (0, r)), ((0, patch_len - r), (r, patch_len))))
    else:
        # unknowns are grid points 1..N-1, stored at vector index grid-1
        for j in range(K + 1):
            start = j * M - M
            glo = max(start, 1)
            ghi = min(start + patch_len, N)
            pairs.append((((glo - 1, ghi - 1), (glo - start, ghi - start)),))
    return tuple(pairs)


class FrameLayout:
    """Frame geometry for a 1-D or 2-D grid (same window count per axis)."""

    def __init__(self, dim, N, K, boundary, window=None, window_samples=None):
        if dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        boundary = Boundary(boundary)
        if K < 1:
            raise ValueError("K must be at least 1")
        if N % K:
            raise ValueError(f"K must divide N (got K={K}, N={N})")
        M = N // K
        if M < 2:
            raise ValueError("hop N/K must be at least 2 samples")
        self.dim = dim
        self.N = int(N)
        self.K = int(K)
        self.M = M
        self.boundary = boundary
        self.h = 1.0 / N

        if window is None:
            window = build_window(WindowProfile(ProfileKind.H5), 1.0 / K, 2 * M)
        self.window = window

        pure_fourier = boundary is Boundary.PERIODIC and K == 1
        axis_len = N if boundary is Boundary.PERIODIC else N - 1
        if pure_fourier:
            n_windows, n_bins, win, pairs = 1, N, None, ()
        else:
            n_windows = K if boundary is Boundary.PERIODIC else K + 1
            n_bins = 2 * M
            if window_samples is not None:
                win = np.asarray(window_samples, dtype=float)
                if win.shape != (n_bins,):
                    raise ValueError(f"window_samples must have length {n_bins}")
            elif window.samples.size == n_bins:
                win = window.samples
            else:
                win = build_window(window.profile, 1.0 / K, n_bins).samples
            pairs = _axis_pairs(N, K, M, boundary)
        centers = np.arange(n_windows) * (M * self.h)
        xi = 2.0 * np.pi * np.fft.fftfreq(n_bins, d=self.h)
        self._ax = _Axis(axis_len, n_windows, n_bins, pure_fourier, win, pairs, centers, xi)

    # -- geometry ---------------------------------------------------------

    @property
    def axis_len(self):
        return self._ax.axis_len

    @property
    def total_len(self):
        return self._ax.axis_len**self.dim

    @property
    def n_windows(self):
        return self._ax.n_windows

    @property
    def n_bins(self):
        return self._ax.n_bins

    @property
    def pure_fourier(self):
        return self._ax.pure_fourier

    @property
    def v0(self):
        """Hop in physical units on the unit domain."""
        return self.M * self.h

    @property
    def xi0(self):
        """Frequency step: pi/v0 for windowed layouts, 2*pi for the pure DFT."""
        return 2.0 * np.pi * self.N / self.n_bins

    @property
    def frequencies(self):
        """Signed angular frequency per bin (FFT order)."""
        return self._ax.xi

    @property
    def centers(self):
        """Physical midpoints of the window subdomains."""
        return self._ax.centers

    @property
    def coeff_shape(self):
        ax = self._ax
        if self.dim == 1:
            return (ax.n_windows, ax.n_bins)
        return (ax.n_windows, ax.n_windows, ax.n_bins, ax.n_bins)

    def patch_members(self, j):
        """Vector indices and in-patch positions covered by window ``j``."""
        ax = self._ax
        if ax.pure_fourier:
            idx = np.arange(ax.axis_len)
            return idx, idx
        vec, pat = [], []
        for (a0, a1), (p0, p1) in ax.pairs[j]:
            vec.append(np.arange(a0, a1))
            pat.append(np.arange(p0, p1))
        return np.concatenate(vec), np.concatenate(pat)

    def window_samples(self):
        ax = self._ax
        if ax.pure_fourier:
            return np.ones(ax.n_bins)
        return ax.win


@dataclass
class FrameCoefficients:
    """Complex coefficients indexed by (window index per axis, bin per axis)."""

    layout: FrameLayout
    data: np.ndarray

    def __post_init__(self):
        expect = self.layout.coeff_shape
        if self.data.shape != expect:
            raise ValueError(f"coefficient shape {self.data.shape} != {expect}")


# -- axis transforms (batched over leading axes) ---------------------------


def _forward_axis(x, ax):
    if ax.pure_fourier:
        c = np.fft.fft(x, axis=-1) / np.sqrt(ax.n_bins)
        return c[..., None, :]
    pats = np.zeros(x.shape[:-1] + (ax.n_windows, ax.n_bins), dtype=complex)
    for j, prs in enumerate(ax.pairs):
        for (a0, a1), (p0, p1) in prs:
            pats[..., j, p0:p1] = x[..., a0:a1]
    pats *= ax.win
    return np.fft.fft(pats, axis=-1) / np.sqrt(ax.n_bins)


def _adjoint_axis(c, ax):
    if ax.pure_fourier:
        return np.fft.ifft(c[..., 0, :], axis=-1) * np.sqrt(ax.n_bins)
    x = np.fft.ifft(c, axis=-1) * np.sqrt(ax.n_bins)
    x *= ax.win
    out = np.zeros(c.shape[:-2] + (ax.axis_len,), dtype=complex)
    for j, prs in enumerate(ax.pairs):
        for (a0, a1), (p0, p1) in prs:
            out[..., a0:a1] += x[..., j, p0:p1]
    return out


def _analyze_array(layout, u):
    """Forward transform of (..., total_len) arrays."""
    ax = layout._ax
    if layout.dim == 1:
        return _forward_axis(u, ax)
    grid = u.reshape(u.shape[:-1] + (ax.axis_len, ax.axis_len))
    t = _forward_axis(grid, ax)              # (..., nx, Wy, By)
    t = np.moveaxis(t, -3, -1)               # (..., Wy, By, nx)
    t = _forward_axis(t, ax)                 # (..., Wy, By, Wx, Bx)
    return np.moveaxis(t, [-2, -4, -1, -3], [-4, -3, -2, -1])


def _synthesize_array(layout, data):
    """Adjoint transform back to (..., total_len) arrays."""
    ax = layout._ax
    if layout.dim == 1:
        return _adjoint_axis(data, ax)
    t = np.moveaxis(data, [-4, -3, -2, -1], [-2, -4, -1, -3])  # (..., Wy, By, Wx, Bx)
    t = _adjoint_axis(t, ax)                 # (..., Wy, By, nx)
    t = np.moveaxis(t, -1, -3)               # (..., nx, Wy, By)
    t = _adjoint_axis(t, ax)                 # (..., nx, ny)
    return t.reshape(t.shape[:-2] + (ax.axis_len**2,))


# -- public single-vector API ----------------------------------------------


def analyze(layout, u):
    """Frame coefficients of a flat grid vector (length axis_len**dim)."""
    u = np.asarray(u)
    if u.ndim != 1 or u.shape[0] != layout.total_len:
        raise ValueError(
            f"expected a flat vector of length {layout.total_len}, got shape {u.shape}"
        )
    return FrameCoefficients(layout, _analyze_array(layout, u))


def synthesize(coeffs):
    """Adjoint of :func:`analyze`; complex output (real part is exact for
    real-space inputs up to roundoff)."""
    return _synthesize_array(coeffs.layout, coeffs.data)


def gram_operator(layout):
    """F*F as a LinearOperator (identity for partition-of-unity windows)."""

    class _Gram(LinearOperator):
        n = layout.total_len

        def _apply(self, x):
            out = _synthesize_array(layout, _analyze_array(layout, x))
            return out.real if np.isrealobj(x) else out

    return _Gram()


def frame_bounds(layout, trials=16, seed=0, max_iter=5000, tol=1e-12):
    """Estimate the extreme eigenvalues (A, B) of F*F by power iteration.

    The largest eigenvalue is found directly, the smallest through the
    spectral shift ``beta*I - F*F``.  Raises :class:`FrameBoundsError` with
    the best estimates if the Rayleigh quotients fail to settle.
    """
    if trials < 16:
        raise ValueError("trials must be at least 16")
    rng = np.random.default_rng(seed)
    gram = gram_operator(layout)
    n = layout.total_len

    def extreme(apply_fn):
        probes = rng.standard_normal((trials, n))
        probes /= np.linalg.norm(probes, axis=1, keepdims=True)
        best_rq, best_v = -np.inf, None
        for v in probes:
            rq = v @ apply_fn(v)
            if rq > best_rq:
                best_rq, best_v = rq, v
        lam, v = best_rq, best_v
        for _ in range(max_iter):
            w = apply_fn(v)
            lam_new = v @ w
            norm_w = np.linalg.norm(w)
            if norm_w == 0.0:
                return 0.0, True
            v = w / norm_w
            if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
                return lam_new, True
            lam = lam_new
        return lam, False

    b_est, ok_b = extreme(gram.apply)
    beta = 1.05 * b_est + 1e-8
    shift_est, ok_a = extreme(lambda v: beta * v - gram.apply(v))
    a_est = beta - shift_est
    if not (ok_a and ok_b):
        raise FrameBoundsError(
            f"frame-bound power iteration did not settle within {max_iter} steps",
            a_est,
            b_est,
        )
    return a_est, b_est
