"""Windowed Fourier frame preconditioners for finite-difference elliptic
problems, with an experiment harness reproducing the study's figures."""

from .operators import Boundary, LinearOperator, MatrixOperator, ComposedOperator
from .windows import (
    ProfileKind,
    WindowProfile,
    Window,
    eval_profile,
    build_window,
    window_spectrum,
    squared_translate_sum,
)
from .frames import (
    FrameLayout,
    FrameCoefficients,
    FrameBoundsError,
    analyze,
    synthesize,
    frame_bounds,
    gram_operator,
)
from .fd import (
    CoefficientError,
    GridProblem,
    SparseOperator,
    assemble,
    assemble_1d,
    assemble_2d,
    preset,
    list_presets,
    dirichlet_eigenvalues,
)
from .precond import (
    SymbolKind,
    SymbolTable,
    Mode,
    WiringError,
    Preconditioner,
    build_symbol,
    apply_preconditioner,
    wire_system,
)
from .solvers import SolveConfig, SolveReport, BreakdownError, zero_mean, cg, spcg, lbicg
from .spectral import (
    SpectralError,
    SpectralReport,
    GrowthFit,
    materialize,
    singular_values,
    growth_fit,
)

__version__ = "0.1.0"
