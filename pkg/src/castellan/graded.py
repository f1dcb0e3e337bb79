"""The homomorphism f: sl(m) -> sl(gl(m)), f(X) = left multiplication by X,
split into graded pieces with respect to gl(m) = <I> + sl(m).

Block matrices act on coordinates (c, y) of c*I + Y, with the line <I> first:

    g_-1 : <I> -> sl(m)   (lower-left column)
    g_0  : block diagonal
    g_1  : sl(m) -> <I>   (upper-right row)

An element xi of g_1 is stored as a trace-free m x m matrix through the
pairing Y -> tr(xi^T Y).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

import numpy as np

from .connection import (
    MatrixBasis,
    frac_array,
    trace,
    trace_free,
    unit,
    zeros,
)


def _sparse_dot(A, B) -> np.ndarray:
    out = zeros((A.shape[0], B.shape[1]))
    for i, k in zip(*np.nonzero(A != 0)):
        row = B[k]
        if any(v != 0 for v in row):
            out[i] = out[i] + A[i, k] * row
    return out


def _bracket(A, B) -> np.ndarray:
    return _sparse_dot(A, B) - _sparse_dot(B, A)


class GradedHom:
    def __init__(self, m: int, xi=None, basis: Optional[MatrixBasis] = None):
        self.m = m
        self.basis = basis or MatrixBasis(m)
        self.xi = None if xi is None else frac_array(xi)
        if self.xi is not None and trace(self.xi) != 0:
            raise ValueError("xi must be trace-free")

    @property
    def size(self) -> int:
        return self.m * self.m

    def coords(self, M) -> np.ndarray:
        """Coordinates of an m x m matrix in the basis (I, sl(m) basis)."""
        M = frac_array(M)
        c = trace(M) / self.m
        return np.concatenate([np.array([c], dtype=object), self.basis.coordinates(trace_free(M))])

    def vector(self, Y) -> np.ndarray:
        return self.coords(Y)

    def f(self, X) -> np.ndarray:
        X = frac_array(X)
        cols = [self.coords(X.dot(np.eye(self.m, dtype=object) * Fraction(1)))]
        cols += [self.coords(X.dot(B)) for B in self.basis.matrices]
        return np.stack(cols, axis=1)

    @staticmethod
    def _split(F):
        low, mid, high = zeros(F.shape), zeros(F.shape), zeros(F.shape)
        low[1:, 0] = F[1:, 0]
        mid[0, 0] = F[0, 0]
        mid[1:, 1:] = F[1:, 1:]
        high[0, 1:] = F[0, 1:]
        return low, mid, high

    def f_minus1(self, X) -> np.ndarray:
        return self._split(self.f(X))[0]

    def f_0(self, X) -> np.ndarray:
        return self._split(self.f(X))[1]

    def f_1(self, X) -> np.ndarray:
        return self._split(self.f(X))[2]

    def xi_matrix(self) -> np.ndarray:
        out = zeros((self.size, self.size))
        if self.xi is None:
            return out
        xt = self.xi.T
        for b, B in enumerate(self.basis.matrices):
            out[0, 1 + b] = trace(xt.dot(B))
        return out

    def f1_shifted(self, X) -> np.ndarray:
        """f_1(X) + [xi, f_0(X)] + 1/2 [xi, [xi, f_-1(X)]] as a block matrix."""
        Xi = self.xi_matrix()
        low, mid, high = self._split(self.f(X))
        out = high + _bracket(Xi, mid) + _bracket(Xi, _bracket(Xi, low)) / 2
        stray = out.copy()
        stray[0, 1:] = 0
        if any(v != 0 for v in stray.reshape(-1)):
            raise AssertionError("shifted f_1 left the degree-1 block")
        return out

    def evaluate(self, A, Y) -> Fraction:
        """Value at Y in sl(m) of a degree-1 block matrix A."""
        return A.dot(self.vector(Y))[0]


def graded_components(m: int, xi=None) -> GradedHom:
    return GradedHom(m, xi)


def f1_shifted(g: GradedHom, X, Y) -> Fraction:
    """f_1'(X)Y computed from the block-matrix brackets."""
    return g.evaluate(g.f1_shifted(X), Y)


def f1_closed_form(m: int, xi, X, Y) -> Fraction:
    """tr(XY)/m + tr(xi^T X Y) - tr(xi^T X) tr(xi^T Y)."""
    X, Y = frac_array(X), frac_array(Y)
    xt = frac_array(xi).T
    return trace(X.dot(Y)) / m + trace(xt.dot(X).dot(Y)) - trace(xt.dot(X)) * trace(xt.dot(Y))


# The four families tabulated for f_1'(X)Y, as (X, Y, printed value).
# i is a 0-based index in 0..m-2; a[p, q] is the (p, q) entry of xi.

def table_row(row: int, m: int, i: int, xi):
    a = frac_array(xi)
    k = m - 1
    if not 0 <= i < k:
        raise ValueError("i must lie in 0..m-2")
    diag = unit(m, i, i) - unit(m, k, k)
    if row == 1:
        return diag, unit(m, i, k), a[i, k] * (1 - (a[i, i] - a[k, k]))
    if row == 2:
        return diag, unit(m, k, i), a[k, i] * (1 + (a[i, i] - a[k, k]))
    if row == 3:
        return unit(m, i, k), unit(m, k, i), Fraction(1, m) + a[i, i] - a[i, k] * a[k, i]
    if row == 4:
        return unit(m, k, i), unit(m, i, k), Fraction(1, m) + a[k, k] - a[k, i] * a[i, k]
    raise ValueError("row must be 1..4")


def random_rational(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_trace_free(rng: random.Random, m: int, bound: int = 9) -> np.ndarray:
    M = frac_array([[random_rational(rng, bound) for _ in range(m)] for _ in range(m)])
    return trace_free(M)
