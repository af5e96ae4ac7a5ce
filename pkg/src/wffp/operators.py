"""Shared operator protocol and boundary-mode enum.

Every operator in the package (finite-difference matrices, frame transforms,
preconditioners, composites) acts on flat vectors of a fixed length ``n`` and
accepts batched input with leading axes, which keeps dense materialization
cheap.
"""

from enum import Enum

import numpy as np

__all__ = ["Boundary", "LinearOperator", "MatrixOperator", "ComposedOperator"]


class Boundary(str, Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"


class LinearOperator:
    """Square operator on flat vectors; subclasses implement ``_apply``.

    ``apply`` accepts arrays of shape ``(..., n)`` and returns the same shape;
    the trailing axis is the vector axis.
    """

    n: int

    def apply(self, x):
        x = np.asarray(x)
        if x.shape[-1] != self.n:
            raise ValueError(
                f"operator of size {self.n} applied to vector of length {x.shape[-1]}"
            )
        return self._apply(x)

    def _apply(self, x):
        raise NotImplementedError


class MatrixOperator(LinearOperator):
    """Dense or scipy.sparse matrix wrapped in the operator protocol."""

    def __init__(self, mat):
        if mat.shape[0] != mat.shape[1]:
            raise ValueError("only square matrices are supported")
        self.mat = mat
        self.n = mat.shape[0]

    def _apply(self, x):
        if x.ndim == 1:
            return self.mat @ x
        flat = x.reshape(-1, self.n)
        return np.asarray((self.mat @ flat.T).T).reshape(x.shape)


class ComposedOperator(LinearOperator):
    """Product of operators, applied right to left like the written product."""

    def __init__(self, factors):
        factors = list(factors)
        if not factors:
            raise ValueError("need at least one factor")
        sizes = {op.n for op in factors}
        if len(sizes) != 1:
            raise ValueError(f"factor sizes differ: {sorted(sizes)}")
        self.factors = factors
        self.n = factors[0].n

    def _apply(self, x):
        for op in reversed(self.factors):
            x = op.apply(x)
        return x
