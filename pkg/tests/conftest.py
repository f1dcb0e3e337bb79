import math
from collections import deque
from fractions import Fraction

import numpy as np
import pytest

from castellan import connection as cl

# --- independent oracles ------------------------------------------------------


def oracle_residual(l, alpha, t):
    return alpha * (l - alpha) + sum(k * k for k in t) - len(t) + 1 - l * math.prod(t)


def oracle_bfs(l, alpha, bound):
    """Every tuple reachable from the root by castling with entries <= bound.

    Uses its own castling formula and canonicalization; descending moves are
    allowed, so this explores the whole component, not just the BFS tree.
    """
    root = () if alpha == 1 else (alpha,)
    seen = {root}
    queue = deque([root])
    while queue:
        t = queue.popleft()
        slots = list(t) + [1]
        for s in range(len(slots)):
            others = slots[:s] + slots[s + 1:]
            new = l * math.prod(others) - slots[s]
            if new <= 0:
                continue
            nxt = tuple(sorted(k for k in others + [new] if k != 1))
            if any(k > bound for k in nxt) or nxt in seen:
                continue
            seen.add(nxt)
            queue.append(nxt)
    return seen


def _mat(m, entries):
    M = np.empty((m, m), dtype=object)
    M.fill(Fraction(0))
    for (i, j), v in entries.items():
        M[i, j] = Fraction(v)
    return M


def oracle_sl_basis(m):
    """Default sl(m) basis and a coordinate map written out by hand."""
    basis = [_mat(m, {(a, b): 1}) for a in range(m) for b in range(m) if a != b]
    basis += [_mat(m, {(i, i): 1, (m - 1, m - 1): -1}) for i in range(m - 1)]

    def coords(M):
        off = [M[a, b] for a in range(m) for b in range(m) if a != b]
        return off + [M[i, i] for i in range(m - 1)]

    return basis, coords


def oracle_ricci(m):
    """Ricci of nabla_X Y = bar(XY), computed on matrices directly."""
    basis, coords = oracle_sl_basis(m)
    ident = np.eye(m, dtype=object) * Fraction(1)

    def bar(M):
        return M - ident * (sum(M[i, i] for i in range(m)) / m)

    def nab(X, Y):
        return bar(X.dot(Y))

    def R(X, Y, Z):
        return nab(X, nab(Y, Z)) - nab(Y, nab(X, Z)) - nab(X.dot(Y) - Y.dot(X), Z)

    n = len(basis)
    ric = [[Fraction(0)] * n for _ in range(n)]
    for b in range(n):
        for c in range(n):
            ric[b][c] = sum(coords(R(basis[a], basis[b], basis[c]))[a] for a in range(n))
    return ric


# --- shared expensive fixtures -------------------------------------------------

_TENSOR_CACHE = {}


def canonical_tensors(m):
    if m not in _TENSOR_CACHE:
        conn = cl.canonical_connection(m)
        _TENSOR_CACHE[m] = (conn, cl.tensors(conn))
    return _TENSOR_CACHE[m]


_PRODUCT_CACHE = {}


def product_tensors(m, d=2):
    key = (m, d)
    if key not in _PRODUCT_CACHE:
        conn, _ = canonical_tensors(m)
        prod = cl.product_connection(cl.flat_connection(d), conn)
        _PRODUCT_CACHE[key] = (prod, cl.tensors(prod))
    return _PRODUCT_CACHE[key]


# --- acceptance report lines --------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
