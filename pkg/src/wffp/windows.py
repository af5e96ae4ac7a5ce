"""Profile functions and compactly supported windows whose squared translates
sum to one.

A profile ``h`` rises monotonically from 0 to 1 on the canonical interval
``[-1, 0]`` and satisfies ``h(-1/2+y)^2 + h(-1/2-y)^2 = 1``.  The even
reflection ``g(x) = h(-|x|/v0)`` is then a window supported on ``[-v0, v0]``
whose squared translates at hop ``v0`` form an exact partition of unity,
which is what makes the discrete frame built on it tight.

Five families are provided:

* ``h1`` -- a sine of the smoothed exponential step, with sharpness ``c``;
* ``h2``, ``h3`` -- single nested-sine rises;
* ``h4`` -- triple nested-sine rise (faster frequency decay);
* ``h5`` -- dilated variant of ``h1`` with dilation ``d``, the default.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "ProfileKind",
    "WindowProfile",
    "Window",
    "eval_profile",
    "build_window",
    "window_spectrum",
    "squared_translate_sum",
    "band_peak",
    "DEFAULT_C",
    "DEFAULT_D",
]

DEFAULT_C = 1.5
DEFAULT_D = 0.9


class ProfileKind(str, Enum):
    H1 = "h1"
    H2 = "h2"
    H3 = "h3"
    H4 = "h4"
    H5 = "h5"


@dataclass(frozen=True)
class WindowProfile:
    """Rise function selector plus its shape parameters.

    ``c`` (sharpness) is used by ``h1`` and ``h5``; ``d`` (dilation in
    ``(0, 1]``) only by ``h5``.  ``d = 1`` reduces ``h5`` to ``h1``.
    """

    kind: ProfileKind
    c: float = DEFAULT_C
    d: float = DEFAULT_D

    def __post_init__(self):
        if not (np.isfinite(self.c) and self.c > 0):
            raise ValueError("sharpness c must be positive and finite")
        if self.kind is ProfileKind.H5 and not (0.0 < self.d <= 1.0):
            raise ValueError("dilation d must lie in (0, 1]")


def _logistic_rise(t, c):
    # Equivalent to exp(-c/t) / (exp(-c/t) + exp(-c/(1-t))) on (0, 1), but the
    # quotient form hits 0/0 when both exponentials underflow near the seams;
    # this form only ever overflows the inner exp, which IEEE maps to 0 or 1.
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(c / t - c / (1.0 - t)))


def eval_profile(profile, x):
    """Evaluate the monotone rise on the canonical frame: 0 for x <= -1,
    1 for x >= 0, the family formula in between.

    Accepts scalars or arrays; raises ``ValueError`` on non-finite input.
    """
    arr0 = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr0)):
        raise ValueError("profile argument must be finite")
    arr = np.atleast_1d(arr0)
    out = np.where(arr >= 0.0, 1.0, 0.0)
    mid = (arr > -1.0) & (arr < 0.0)
    if np.any(mid):
        xm = arr[mid]
        kind = profile.kind
        if kind is ProfileKind.H1:
            val = np.sin(0.5 * np.pi * _logistic_rise(xm + 1.0, profile.c))
        elif kind is ProfileKind.H2:
            val = np.sin(0.5 * np.pi * np.sin(0.5 * np.pi * (1.0 + xm)) ** 2)
        elif kind is ProfileKind.H3:
            val = np.cos(0.5 * np.pi * np.sin(0.5 * np.pi * xm) ** 2)
        elif kind is ProfileKind.H4:
            inner = np.sin(
                0.5 * np.pi * np.sin(0.5 * np.pi * np.sin(0.5 * np.pi * (2.0 * xm + 1.0)))
            )
            val = np.sin(0.25 * np.pi * (1.0 + inner))
        elif kind is ProfileKind.H5:
            t = 0.5 + profile.d * (xm + 0.5)
            val = np.sin(0.5 * np.pi * _logistic_rise(t, profile.c))
        else:  # pragma: no cover - enum is closed
            raise ValueError(f"unknown profile kind {kind!r}")
        out[mid] = val
    if arr0.ndim == 0:
        return float(out[0])
    return out.reshape(arr0.shape)


@dataclass(frozen=True)
class Window:
    """Even window ``g(x) = h(-|x|/v0)`` sampled on the half-open uniform grid
    ``x_i = (2i - n)/n * v0``, ``i = 0..n-1`` (left endpoint included, right
    excluded; the center sample sits exactly at ``x = 0``)."""

    profile: WindowProfile
    half_support: float
    samples: np.ndarray

    def grid(self):
        n = self.samples.size
        return (2.0 * np.arange(n) - n) / n * self.half_support

    def evaluate(self, x):
        """Window value at arbitrary points; zero for |x| >= v0, one at 0."""
        u = np.abs(np.asarray(x, dtype=float)) / self.half_support
        return eval_profile(self.profile, -u)


def build_window(profile, v0, n_samples):
    """Sample the window generated by ``profile`` on ``[-v0, v0)``.

    The normalized offsets are computed in index space so the endpoint lands
    exactly on -1 (forcing a hard zero) and the center exactly on 0.
    """
    if not (np.isfinite(v0) and v0 > 0):
        raise ValueError("half support v0 must be positive")
    if n_samples < 4 or n_samples % 2:
        raise ValueError("n_samples must be even and at least 4")
    u = (2.0 * np.arange(n_samples) - n_samples) / n_samples
    samples = eval_profile(profile, -np.abs(u))
    return Window(profile, float(v0), samples)


def squared_translate_sum(window, t):
    """Brute-force sum of ``g(t - n*v0)^2`` over all integer shifts.

    Equals 1 for every t when the profile identity holds; used to check the
    partition of unity on arbitrary (oversampled) grids.
    """
    t = np.asarray(t, dtype=float)
    v0 = window.half_support
    n_lo = int(np.floor(t.min() / v0)) - 1
    n_hi = int(np.ceil(t.max() / v0)) + 1
    total = np.zeros_like(t)
    for n in range(n_lo, n_hi + 1):
        total += window.evaluate(t - n * v0) ** 2
    return total


def window_spectrum(window, pad_factor):
    """Magnitude of the window's Fourier transform on a zero-padded grid.

    Returns ``(xi_over_pi, mag)`` for non-negative frequencies; ``mag[0]``
    equals the Riemann sum of the samples (the continuous integral scale).
    """
    if pad_factor < 8:
        raise ValueError("pad_factor must be at least 8")
    n = window.samples.size
    dx = 2.0 * window.half_support / n
    padded_len = int(n * pad_factor)
    mag = np.abs(np.fft.rfft(window.samples, padded_len)) * dx
    xi = 2.0 * np.pi * np.fft.rfftfreq(padded_len, d=dx)
    return xi / np.pi, mag


def band_peak(xi_over_pi, mag, lo, hi):
    """Largest magnitude with xi/pi inside [lo, hi]."""
    mask = (xi_over_pi >= lo) & (xi_over_pi <= hi)
    if not np.any(mask):
        raise ValueError(f"no frequencies in band [{lo}, {hi}]")
    return float(mag[mask].max())
