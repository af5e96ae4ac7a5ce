"""Finite-difference assembly of -(a u')' + b u on the unit interval/square,
plus the study's example problems as named presets.

Grid conventions (grid parameter N, spacing h = 1/N per axis):

* Dirichlet: unknowns at the interior points i*h, i = 1..N-1 (boundary values
  eliminated), so the matrix has N-1 rows per axis;
* periodic: unknowns at i*h, i = 0..N-1.

Half-point coefficients are arithmetic averages a_{i+1/2} = (a_i + a_{i+1})/2,
also across discontinuities and across the periodic seam.  In 2-D the operator
is -d/dx(a(x) d/dx) - d/dy(b(y) d/dy), the tensor application of the 1-D
stencil per axis, row-major in (x, y).
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .operators import Boundary, LinearOperator

__all__ = [
    "CoefficientError",
    "GridProblem",
    "SparseOperator",
    "assemble",
    "assemble_1d",
    "assemble_2d",
    "preset",
    "list_presets",
    "dirichlet_eigenvalues",
]


class CoefficientError(ValueError):
    pass


def closed_axis_grid(N, boundary):
    """Sample points carrying the diffusion coefficient along one axis."""
    h = 1.0 / N
    if Boundary(boundary) is Boundary.DIRICHLET:
        return np.arange(N + 1) * h
    return np.arange(N) * h


def unknown_axis_grid(N, boundary):
    """Coordinates of the unknowns along one axis."""
    h = 1.0 / N
    if Boundary(boundary) is Boundary.DIRICHLET:
        return np.arange(1, N) * h
    return np.arange(N) * h


@dataclass
class GridProblem:
    """Discretized boundary-value problem on the unit domain.

    In 1-D ``a`` is the diffusion coefficient (sampled on the closed axis
    grid) and ``b`` the zeroth-order coefficient (sampled at the unknowns).
    In 2-D ``a`` and ``b`` are the x- and y-diffusion coefficients, both on
    the closed axis grid, and there is no zeroth-order term.  ``semidefinite``
    marks periodic operators that annihilate constants.
    """

    dim: int
    N: int
    boundary: Boundary
    a: np.ndarray
    b: np.ndarray
    f: np.ndarray
    a_fn: object = None
    b_fn: object = None
    semidefinite: bool = False
    name: str = "custom"

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if self.N < 4:
            raise ValueError("N must be at least 4")
        self.boundary = Boundary(self.boundary)
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.f = np.asarray(self.f, dtype=float)
        n_axis = self.axis_len
        n_closed = closed_axis_grid(self.N, self.boundary).size
        if self.a.shape != (n_closed,):
            raise ValueError(f"a must have {n_closed} axis samples")
        if self.a.min() <= 0:
            raise CoefficientError("diffusion coefficient a must be positive everywhere")
        if self.dim == 1:
            if self.b.shape != (n_axis,):
                raise ValueError(f"b must have {n_axis} samples (one per unknown)")
            if self.b.min() < 0:
                raise CoefficientError("zeroth-order coefficient b must be non-negative")
            if self.boundary is Boundary.PERIODIC and not self.semidefinite and self.b.min() <= 0:
                raise CoefficientError(
                    "periodic problems need b > 0 or the semidefinite flag"
                )
        else:
            if self.b.shape != (n_closed,):
                raise ValueError(f"b must have {n_closed} axis samples")
            if self.b.min() <= 0:
                raise CoefficientError("diffusion coefficient b must be positive everywhere")
            if self.boundary is Boundary.PERIODIC:
                self.semidefinite = True  # no zeroth-order term in 2-D
        if self.f.shape != (self.n_unknowns,):
            raise ValueError(f"f must have {self.n_unknowns} entries")

    @property
    def h(self):
        return 1.0 / self.N

    @property
    def axis_len(self):
        return self.N if self.boundary is Boundary.PERIODIC else self.N - 1

    @property
    def n_unknowns(self):
        return self.axis_len**self.dim

    def _lookup(self, fn, samples, x):
        if fn is not None:
            return np.asarray(fn(np.asarray(x, dtype=float)), dtype=float)
        idx = np.rint(np.asarray(x, dtype=float) / self.h).astype(int)
        if self.boundary is Boundary.PERIODIC:
            idx %= samples.size
        else:
            idx = np.clip(idx, 0, samples.size - 1)
        return samples[idx]

    def a_at(self, x):
        """Diffusion coefficient at arbitrary points (analytic if available)."""
        return self._lookup(self.a_fn, self.a, x)

    def b_at(self, x):
        return self._lookup(self.b_fn, self.b, x)


class SparseOperator(LinearOperator):
    """Symmetric FD matrix in CSR storage behind the operator protocol."""

    def __init__(self, mat):
        self.mat = sp.csr_matrix(mat)
        self.n = self.mat.shape[0]

    def _apply(self, x):
        if x.ndim == 1:
            return self.mat @ x
        flat = x.reshape(-1, self.n)
        return np.asarray((self.mat @ flat.T).T).reshape(x.shape)

    def toarray(self):
        return self.mat.toarray()


def _axis_stiffness(a, N, boundary):
    """The -(a u')'/h^2 part along one axis; exactly symmetric by sharing one
    computed value per undirected edge."""
    h2inv = float(N) * float(N)
    if boundary is Boundary.PERIODIC:
        half = 0.5 * (a + np.roll(a, -1)) * h2inv  # half[i] ~ a_{i+1/2}
        diag = half + np.roll(half, 1)
        i = np.arange(N)
        j = (i + 1) % N
        rows = np.concatenate([i, i, j])
        cols = np.concatenate([i, j, i])
        data = np.concatenate([diag, -half, -half])
        return sp.coo_matrix((data, (rows, cols)), shape=(N, N)).tocsr()
    half = 0.5 * (a[:-1] + a[1:]) * h2inv  # half[i] ~ a_{i+1/2}, i = 0..N-1
    diag = half[1:] + half[:-1]
    off = -half[1:-1]
    return sp.diags([off, diag, off], [-1, 0, 1], format="csr")


def assemble_1d(problem):
    if problem.dim != 1:
        raise ValueError("assemble_1d needs a 1-D problem")
    mat = _axis_stiffness(problem.a, problem.N, problem.boundary)
    if problem.b.any():
        mat = mat + sp.diags(problem.b)
    return SparseOperator(mat)


def assemble_2d(problem):
    if problem.dim != 2:
        raise ValueError("assemble_2d needs a 2-D problem")
    sx = _axis_stiffness(problem.a, problem.N, problem.boundary)
    sy = _axis_stiffness(problem.b, problem.N, problem.boundary)
    eye = sp.identity(problem.axis_len, format="csr")
    return SparseOperator(sp.kron(sx, eye) + sp.kron(eye, sy))


def assemble(problem):
    return assemble_1d(problem) if problem.dim == 1 else assemble_2d(problem)


def dirichlet_eigenvalues(n, h):
    """Eigenvalues of the n-by-n constant-coefficient Dirichlet matrix
    (a = 1, b = 0, spacing h with h*(n+1) = 1): (4/h^2) sin^2(j pi/(2(n+1)))."""
    j = np.arange(1, n + 1)
    return 4.0 / (h * h) * np.sin(j * np.pi / (2.0 * (n + 1))) ** 2


# -- named example problems -------------------------------------------------


def _ex41(N, boundary):
    boundary = Boundary(boundary)
    a = np.ones(closed_axis_grid(N, boundary).size)
    x = unknown_axis_grid(N, boundary)
    f = np.exp(2.0 * np.pi * (x - 0.5))
    return GridProblem(
        1, N, boundary, a, np.zeros(x.size), f,
        a_fn=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        semidefinite=boundary is Boundary.PERIODIC,
        name=f"ex41_{boundary.value}",
    )


def _a_ex42(x):
    return 10.0 - 9.5 * np.cos(2.0 * np.pi * np.asarray(x, dtype=float))


def _ex42(N):
    xc = closed_axis_grid(N, Boundary.PERIODIC)
    x = unknown_axis_grid(N, Boundary.PERIODIC)
    f = np.where((x > 0.0) & (x <= 0.25), np.exp(x), np.exp(-x))
    return GridProblem(
        1, N, Boundary.PERIODIC, _a_ex42(xc), np.ones(x.size), f,
        a_fn=_a_ex42, name="ex42",
    )


def _a_ex43(x):
    x = np.asarray(x, dtype=float)
    return np.where(x < 0.5, np.exp(x), np.exp(-x))


def _ex43(N, seed):
    if seed is None:
        raise ValueError("ex43 needs a seed for its random right-hand side")
    xc = closed_axis_grid(N, Boundary.DIRICHLET)
    x = unknown_axis_grid(N, Boundary.DIRICHLET)
    rng = np.random.default_rng(seed)
    f = rng.uniform(-1.0, 1.0, x.size)
    return GridProblem(
        1, N, Boundary.DIRICHLET, _a_ex43(xc), np.ones(x.size), f,
        a_fn=_a_ex43, name="ex43",
    )


def _f_2d(N, boundary):
    x = unknown_axis_grid(N, boundary)
    return np.exp(-(x[:, None] + x[None, :])).ravel()


def _aniso2d(N):
    nc = closed_axis_grid(N, Boundary.DIRICHLET).size
    return GridProblem(
        2, N, Boundary.DIRICHLET,
        np.full(nc, 10.0), np.full(nc, 0.1), _f_2d(N, Boundary.DIRICHLET),
        a_fn=lambda t: np.full_like(np.asarray(t, dtype=float), 10.0),
        b_fn=lambda t: np.full_like(np.asarray(t, dtype=float), 0.1),
        name="aniso2d",
    )


def _var2d(N):
    xc = closed_axis_grid(N, Boundary.PERIODIC)
    return GridProblem(
        2, N, Boundary.PERIODIC,
        _a_ex42(xc), np.ones(xc.size), _f_2d(N, Boundary.PERIODIC),
        a_fn=_a_ex42,
        b_fn=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        name="var2d",
    )


_PRESETS = {
    "ex41_dirichlet": ("constant coefficients a=1, b=0 on (0,1), u(0)=u(1)=0", lambda N, seed: _ex41(N, Boundary.DIRICHLET)),
    "ex41_periodic": ("constant coefficients a=1, b=0 on the periodic unit interval", lambda N, seed: _ex41(N, Boundary.PERIODIC)),
    "ex42": ("periodic, a(x)=10-9.5cos(2 pi x), b=1, piecewise-exponential rhs", lambda N, seed: _ex42(N)),
    "ex43": ("Dirichlet, discontinuous a(x) (exp(x)/exp(-x) split at 1/2), b=1, seeded random rhs", _ex43),
    "aniso2d": ("2-D Dirichlet, -10 u_xx - 0.1 u_yy, rhs exp(-(x+y))", lambda N, seed: _aniso2d(N)),
    "var2d": ("2-D periodic, a(x)=10-9.5cos(2 pi x), b(y)=1, rhs exp(-(x+y))", lambda N, seed: _var2d(N)),
}


def list_presets():
    return {name: desc for name, (desc, _) in _PRESETS.items()}


def preset(name, N, seed=None):
    """Build one of the named example problems at grid parameter N."""
    try:
        _, builder = _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; known: {sorted(_PRESETS)}") from None
    return builder(N, seed)
