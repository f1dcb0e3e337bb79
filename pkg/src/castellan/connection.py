"""Exact tensor calculus for left-invariant connections on matrix Lie algebras.

Arrays are numpy object arrays holding ``fractions.Fraction``; "zero" always
means exactly zero.

Index conventions (e_a a basis of the Lie algebra):

* ``gamma[a, b, c]``  coefficient of e_c in nabla_{e_a} e_b
* ``structure[a, b, c]`` coefficient of e_c in [e_a, e_b]
* ``torsion[a, b, c]`` T(e_a, e_b) = sum_c T[a, b, c] e_c
* ``curvature[a, b, c, d]`` R(e_a, e_b) e_c = sum_d R[a, b, c, d] e_d
* ``ricci[b, c]`` = trace of Z -> R(Z, e_b) e_c
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import SingularDimension, SingularL

ZERO = Fraction(0)
ONE = Fraction(1)


def frac_array(values) -> np.ndarray:
    arr = np.array(values, dtype=object)
    flat = arr.reshape(-1)
    for i, v in enumerate(flat):
        flat[i] = Fraction(v)
    return arr


def zeros(shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(ZERO)
    return arr


def identity(n) -> np.ndarray:
    arr = zeros((n, n))
    for i in range(n):
        arr[i, i] = ONE
    return arr


def is_zero(arr) -> bool:
    return all(x == 0 for x in np.asarray(arr, dtype=object).reshape(-1))


def nonzero_entries(arr, limit: Optional[int] = None) -> list:
    out = []
    for idx, v in np.ndenumerate(arr):
        if v != 0:
            out.append((idx, v))
            if limit is not None and len(out) >= limit:
                break
    return out


def unit(m, i, j) -> np.ndarray:
    """E_i^j: the m x m matrix with a single 1 in row i, column j."""
    e = zeros((m, m))
    e[i, j] = ONE
    return e


def trace(M) -> Fraction:
    return sum((M[i, i] for i in range(M.shape[0])), ZERO)


def trace_free(M) -> np.ndarray:
    M = frac_array(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("trace_free expects a square matrix")
    m = M.shape[0]
    return M - identity(m) * (trace(M) / m)


def commutator(A, B) -> np.ndarray:
    return A.dot(B) - B.dot(A)


def _solve_left_inverse(B):
    """Exact (B^T B)^{-1} B^T for a full column rank Fraction matrix B."""
    Bt = B.T
    G = Bt.dot(B)
    n = G.shape[0]
    aug = np.concatenate([G, identity(n)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r, col] != 0), None)
        if piv is None:
            raise ValueError("basis matrices are linearly dependent")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] / aug[col, col]
        for r in range(n):
            if r != col and aug[r, col] != 0:
                aug[r] = aug[r] - aug[col] * aug[r, col]
    return aug[:, n:].dot(Bt)


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants plus a description of the direct-sum blocks."""

    structure: np.ndarray
    blocks: Tuple[Tuple[str, int], ...]

    @property
    def dim(self) -> int:
        return self.structure.shape[0]


class MatrixBasis:
    """A basis of sl(m) given by trace-free matrices.

    The default basis is E_a^b (a != b, row-major) followed by
    E_i^i - E_m^m for i < m.
    """

    def __init__(self, m: int, matrices: Optional[Sequence] = None):
        if m < 2:
            raise ValueError("m must be >= 2")
        self.m = m
        if matrices is None:
            matrices = [unit(m, a, b) for a in range(m) for b in range(m) if a != b]
            matrices += [unit(m, i, i) - unit(m, m - 1, m - 1) for i in range(m - 1)]
        self.matrices = [frac_array(M) for M in matrices]
        if len(self.matrices) != m * m - 1:
            raise ValueError(f"sl({m}) needs {m * m - 1} basis matrices")
        for M in self.matrices:
            if trace(M) != 0:
                raise ValueError("basis matrices must be trace-free")
        B = np.stack([M.reshape(-1) for M in self.matrices], axis=1)
        self._coord = _solve_left_inverse(B)
        self._algebra = None

    @property
    def n(self) -> int:
        return self.m * self.m - 1

    def coordinates(self, M) -> np.ndarray:
        M = frac_array(M)
        if trace(M) != 0:
            raise ValueError("matrix is not trace-free")
        return self._coord.dot(M.reshape(-1))

    def matrix(self, coords) -> np.ndarray:
        out = zeros((self.m, self.m))
        for c, M in zip(coords, self.matrices):
            if c != 0:
                out = out + M * c
        return out

    @property
    def algebra(self) -> LieAlgebra:
        if self._algebra is None:
            n = self.n
            C = zeros((n, n, n))
            for a in range(n):
                for b in range(n):
                    C[a, b] = self.coordinates(commutator(self.matrices[a], self.matrices[b]))
            self._algebra = LieAlgebra(C, ((f"sl({self.m})", n),))
        return self._algebra


def abelian(d: int) -> LieAlgebra:
    if d < 1:
        raise ValueError("d must be >= 1")
    return LieAlgebra(zeros((d, d, d)), ((f"R^{d}", d),))


@dataclass(frozen=True)
class InvariantConnection:
    algebra: LieAlgebra
    gamma: np.ndarray

    def __post_init__(self):
        n = self.algebra.dim
        if self.gamma.shape != (n, n, n):
            raise ValueError(f"gamma must have shape {(n, n, n)}, got {self.gamma.shape}")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def covariant(self, x, y) -> np.ndarray:
        """Coordinates of nabla_X Y for coordinate vectors x, y."""
        return np.einsum("a,b,abc->c", frac_array(x), frac_array(y), self.gamma)


def canonical_connection(m: int, basis: Optional[MatrixBasis] = None) -> InvariantConnection:
    """nabla_X Y = trace-free part of the matrix product XY on sl(m)."""
    basis = basis or MatrixBasis(m)
    n = basis.n
    G = zeros((n, n, n))
    for a, A in enumerate(basis.matrices):
        for b, B in enumerate(basis.matrices):
            G[a, b] = basis.coordinates(trace_free(A.dot(B)))
    return InvariantConnection(basis.algebra, G)


def flat_connection(d: int) -> InvariantConnection:
    """The zero connection on an abelian algebra (a flat torus)."""
    return InvariantConnection(abelian(d), zeros((d, d, d)))


def product_connection(a: InvariantConnection, b: InvariantConnection) -> InvariantConnection:
    na, nb = a.dim, b.dim
    n = na + nb
    G = zeros((n, n, n))
    C = zeros((n, n, n))
    G[:na, :na, :na] = a.gamma
    G[na:, na:, na:] = b.gamma
    C[:na, :na, :na] = a.algebra.structure
    C[na:, na:, na:] = b.algebra.structure
    return InvariantConnection(LieAlgebra(C, a.algebra.blocks + b.algebra.blocks), G)


@dataclass(frozen=True)
class TensorSet:
    torsion: np.ndarray
    curvature: np.ndarray
    ricci: np.ndarray
    p: np.ndarray
    weyl: np.ndarray

    @property
    def dim(self) -> int:
        return self.ricci.shape[0]


def torsion_tensor(conn: InvariantConnection) -> np.ndarray:
    G, C = conn.gamma, conn.algebra.structure
    return G - G.transpose(1, 0, 2) - C


def curvature_tensor(conn: InvariantConnection) -> np.ndarray:
    G, C = conn.gamma, conn.algebra.structure
    return (
        np.einsum("bce,aed->abcd", G, G)
        - np.einsum("ace,bed->abcd", G, G)
        - np.einsum("abe,ecd->abcd", C, G)
    )


def ricci_tensor(R) -> np.ndarray:
    return np.einsum("abca->bc", R)


def p_tensor(ric) -> np.ndarray:
    n = ric.shape[0]
    if n * n - 1 == 0:
        raise SingularDimension("P is undefined in dimension 1")
    return (ric * n + ric.T) / Fraction(n * n - 1)


def weyl_tensor(R, P) -> np.ndarray:
    """W(X,Y)Z = R(X,Y)Z + [P(X,Y) - P(Y,X)]Z - [P(Y,Z)X - P(X,Z)Y]."""
    n = P.shape[0]
    I = identity(n)
    return (
        R
        + np.einsum("ab,cd->abcd", P - P.T, I)
        - np.einsum("bc,ad->abcd", P, I)
        + np.einsum("ac,bd->abcd", P, I)
    )


def tensors(conn: InvariantConnection) -> TensorSet:
    if conn.dim == 1:
        raise SingularDimension("P is undefined in dimension 1")
    T = torsion_tensor(conn)
    R = curvature_tensor(conn)
    ric = ricci_tensor(R)
    P = p_tensor(ric)
    W = weyl_tensor(R, P)
    return TensorSet(T, R, ric, P, W)


def weyl_traces(W) -> Tuple[np.ndarray, np.ndarray]:
    """(tr of Z -> W(X,Y)Z, tr of Z -> W(Z,X)Y); both vanish for torsion-free nabla."""
    return np.einsum("abcc->ab", W), np.einsum("abca->bc", W)


def j_tensor(ric, n: int, m: int, l: Optional[int] = None) -> np.ndarray:
    """J on an (n*m)-dimensional space indexed by pairs (alpha, i) -> alpha*m + i.

    J[(a,i),(b,j)] = {(2 - l^2) Ric[(a,i),(b,j)] - l Ric[(b,i),(a,j)]
                      - l Ric[(a,j),(b,i)] - 2 Ric[(b,j),(a,i)]} / ((l^2 - 4) l)
    with l = n + m.
    """
    if l is None:
        l = n + m
    elif l != n + m:
        raise ValueError(f"l must equal n + m = {n + m}")
    if l == 2:
        raise SingularL("J is undefined for l = 2")
    ric = frac_array(ric)
    if ric.shape != (n * m, n * m):
        raise ValueError(f"ric must be {(n * m, n * m)}")
    R = ric.reshape(n, m, n, m)  # R[a, i, b, j] = Ric[(a,i),(b,j)]
    J = (
        R * (2 - l * l)
        - R.transpose(2, 1, 0, 3) * l  # Ric[(b,i),(a,j)]
        - R.transpose(0, 3, 2, 1) * l  # Ric[(a,j),(b,i)]
        - R.transpose(2, 3, 0, 1) * 2  # Ric[(b,j),(a,i)]
    ) / Fraction((l * l - 4) * l)
    return J.reshape(n * m, n * m)
