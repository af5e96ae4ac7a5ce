"""Diagonal multiplier over frame indices and the preconditioner built on it.

The multiplier entry at window j and bin k is the operator's phase-space
weight sigma(x_j, xi_k), evaluated at the window's subdomain midpoint and the
bin's signed frequency.  The preconditioner applies

    P v = synthesize( entries**(-s) * analyze(v) )

with exponent s = 1/2 for the symmetric wiring P A P and s = 1 for the
left/right wirings P A and A P.  All entries are real and even in frequency,
so P is real symmetric positive definite.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple

import numpy as np

from .operators import ComposedOperator, LinearOperator
from .frames import FrameLayout, _analyze_array, _synthesize_array
from .fd import GridProblem

__all__ = [
    "SymbolKind",
    "SymbolTable",
    "Mode",
    "WiringError",
    "Preconditioner",
    "WiredSystem",
    "symbol_value",
    "build_symbol",
    "apply_preconditioner",
    "wire_system",
]


class SymbolKind(str, Enum):
    EXACT_1D = "exact1d"
    EXACT_2D = "exact2d"
    ANISO_2D = "aniso2d"
    ISO_2D = "iso2d"


class Mode(str, Enum):
    SYMMETRIC = "symmetric"
    LEFT = "left"
    RIGHT = "right"


class WiringError(ValueError):
    pass


def symbol_value(kind, xi, eta=None, a=1.0, b=1.0, constant=1.0):
    """Scalar form of the multiplier entries (used to build the tables)."""
    kind = SymbolKind(kind)
    if kind is SymbolKind.EXACT_1D:
        return constant + a * xi**2
    if kind is SymbolKind.EXACT_2D:
        return constant + a * xi**2 + b * eta**2
    if kind is SymbolKind.ANISO_2D:
        return 1.0 + 10.0 * xi**2 + eta**2 / 10.0
    return 1.0 + xi**2 + eta**2


@dataclass(frozen=True)
class SymbolTable:
    """Positive multiplier entries shaped like the frame coefficients."""

    layout: FrameLayout
    kind: SymbolKind
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != self.layout.coeff_shape:
            raise ValueError(
                f"entries shape {self.entries.shape} != {self.layout.coeff_shape}"
            )
        if not np.all(self.entries > 0):
            raise ValueError("multiplier entries must be positive")


def build_symbol(layout, problem, kind=None, constant="one"):
    """Evaluate the multiplier over (window midpoint, bin frequency).

    ``constant="b"`` substitutes the problem's zeroth-order coefficient for
    the fixed constant 1 in the 1-D symbol (it must then be positive at the
    window midpoints).
    """
    if kind is None:
        kind = SymbolKind.EXACT_1D if layout.dim == 1 else SymbolKind.EXACT_2D
    kind = SymbolKind(kind)
    one_d = kind is SymbolKind.EXACT_1D
    if one_d != (layout.dim == 1):
        raise ValueError(f"symbol kind {kind.value} does not match dim {layout.dim}")
    if problem is not None:
        if problem.dim != layout.dim or problem.N != layout.N:
            raise ValueError("layout and problem grids are inconsistent")
        if problem.boundary != layout.boundary:
            raise ValueError("layout and problem boundary modes differ")
    xi = layout.frequencies
    centers = layout.centers
    if layout.dim == 1:
        if constant == "one":
            const = np.ones(centers.size)
        elif constant == "b":
            const = problem.b_at(centers)
            if np.min(const) <= 0:
                raise ValueError("symbol constant from b requires b > 0 at the midpoints")
        else:
            raise ValueError(f"unknown symbol constant mode {constant!r}")
        a_vals = problem.a_at(centers)
        entries = const[:, None] + a_vals[:, None] * xi[None, :] ** 2
    elif kind is SymbolKind.EXACT_2D:
        a_vals = problem.a_at(centers)
        b_vals = problem.b_at(centers)
        entries = (
            1.0
            + a_vals[:, None, None, None] * xi[None, None, :, None] ** 2
            + b_vals[None, :, None, None] * xi[None, None, None, :] ** 2
        )
    else:
        entries = symbol_value(kind, xi[None, None, :, None], xi[None, None, None, :])
        entries = np.broadcast_to(entries, layout.coeff_shape).copy()
    return SymbolTable(layout, kind, entries)


class Preconditioner(LinearOperator):
    """Frame-synthesis preconditioner F* M**(-s) F with s in {1/2, 1}."""

    def __init__(self, layout, table, s):
        if s not in (0.5, 1.0):
            raise WiringError("exponent s must be 1/2 (symmetric) or 1 (left/right)")
        if table.layout is not layout and table.layout.coeff_shape != layout.coeff_shape:
            raise ValueError("symbol table does not match the layout")
        self.layout = layout
        self.table = table
        self.s = float(s)
        self._mult = table.entries ** (-self.s)
        self.n = layout.total_len

    def _apply(self, x):
        c = _analyze_array(self.layout, x)
        c *= self._mult
        out = _synthesize_array(self.layout, c)
        return out.real if np.isrealobj(x) else out


def apply_preconditioner(precond, v):
    """Apply P to a grid vector; real input gives real output."""
    return precond.apply(v)


class WiredSystem(NamedTuple):
    operator: LinearOperator
    rhs_transform: Callable
    recover: Callable


def wire_system(mode, A, P):
    """Compose the preconditioned system for one of the three wirings.

    Returns the composite operator, the right-hand-side map, and the map from
    the composite's solution back to the solution of A u = f.
    """
    mode = Mode(mode)
    if mode is Mode.SYMMETRIC and P.s != 0.5:
        raise WiringError("symmetric wiring needs exponent s = 1/2")
    if mode in (Mode.LEFT, Mode.RIGHT) and P.s != 1.0:
        raise WiringError(f"{mode.value} wiring needs exponent s = 1")
    if A.n != P.n:
        raise ValueError(f"operator sizes differ: {A.n} vs {P.n}")
    identity = lambda v: v
    if mode is Mode.SYMMETRIC:
        return WiredSystem(ComposedOperator([P, A, P]), P.apply, P.apply)
    if mode is Mode.LEFT:
        return WiredSystem(ComposedOperator([P, A]), P.apply, identity)
    return WiredSystem(ComposedOperator([A, P]), identity, P.apply)
