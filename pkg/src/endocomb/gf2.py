"""GF(2) linear algebra on two representations.

Dense numpy matrices (uint8, entries 0/1) back the character-lattice
computations; plain python int bitmasks back the small component-group
sweeps, where per-call numpy overhead would dominate.
"""
from __future__ import annotations

from typing import Iterable, Sequence, Tuple

import numpy as np


def to_gf2(matrix) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(matrix, dtype=np.uint8)) & 1
    return arr


def rref(matrix) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Reduced row echelon form over GF(2); returns (matrix, pivot columns)."""
    mat = to_gf2(matrix).copy()
    m, n = mat.shape
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        hits = np.nonzero(mat[row:, col])[0]
        if hits.size == 0:
            continue
        p = row + int(hits[0])
        if p != row:
            mat[[row, p]] = mat[[p, row]]
        others = np.nonzero(mat[:, col])[0]
        others = others[others != row]
        if others.size:
            mat[others] ^= mat[row]
        pivots.append(col)
        row += 1
    return mat, tuple(pivots)


def rank(matrix) -> int:
    if np.asarray(matrix).size == 0:
        return 0
    return len(rref(matrix)[1])


def row_basis(matrix) -> np.ndarray:
    """Nonzero rows of the RREF: a canonical basis of the row space."""
    mat, pivots = rref(matrix)
    return mat[: len(pivots)].copy()


def in_rowspace(vector, matrix) -> bool:
    mat = to_gf2(matrix)
    vec = to_gf2(vector)
    if mat.size == 0:
        return not vec.any()
    return rank(mat) == rank(np.vstack([mat, vec]))


def reduce_mod(vector, basis) -> np.ndarray:
    """Canonical representative of ``vector`` modulo the row space of ``basis``.

    ``basis`` must already be in RREF (see :func:`row_basis`).
    """
    vec = to_gf2(vector).ravel().copy()
    mat, pivots = to_gf2(basis), ()
    if mat.size:
        mat, pivots = rref(mat)
    for i, col in enumerate(pivots):
        if vec[col]:
            vec ^= mat[i]
    return vec


def kernel(matrix) -> np.ndarray:
    """Basis of {x : matrix @ x = 0} over GF(2), rows are kernel vectors."""
    mat = to_gf2(matrix)
    m, n = mat.shape
    red, pivots = rref(mat)
    free = [c for c in range(n) if c not in pivots]
    rows = []
    for f in free:
        vec = np.zeros(n, dtype=np.uint8)
        vec[f] = 1
        for i, col in enumerate(pivots):
            if red[i, f]:
                vec[col] = 1
        rows.append(vec)
    if not rows:
        return np.zeros((0, n), dtype=np.uint8)
    return np.array(rows, dtype=np.uint8)


def solve(matrix, vector):
    """One solution x of matrix^T x-style membership: coefficients c with
    c @ matrix = vector, or None if vector is outside the row space."""
    mat = to_gf2(matrix)
    vec = to_gf2(vector).ravel()
    m, n = mat.shape
    aug = np.concatenate([mat.T, vec[:, None]], axis=1)
    red, pivots = rref(aug)
    if m in pivots:
        return None
    coeff = np.zeros(m, dtype=np.uint8)
    for i, col in enumerate(pivots):
        coeff[col] = red[i, m]
    return coeff


def sum_spaces(a, b) -> np.ndarray:
    a, b = to_gf2(a), to_gf2(b)
    if a.size == 0:
        return row_basis(b)
    if b.size == 0:
        return row_basis(a)
    return row_basis(np.vstack([a, b]))


def intersect_spaces(a, b) -> np.ndarray:
    """Basis of rowspace(a) ∩ rowspace(b) (Zassenhaus-style via kernel)."""
    a, b = row_basis(to_gf2(a)), row_basis(to_gf2(b))
    if a.size == 0 or b.size == 0:
        n = a.shape[1] if a.size else b.shape[1]
        return np.zeros((0, n), dtype=np.uint8)
    stacked = np.vstack([a, b])
    ker = kernel(stacked.T)
    rows = [(coeff[: a.shape[0]] @ a) % 2 for coeff in ker]
    if not rows:
        return np.zeros((0, a.shape[1]), dtype=np.uint8)
    return row_basis(np.array(rows, dtype=np.uint8))


def span_elements(matrix) -> list:
    """All 2^rank vectors of the row space, in a deterministic order."""
    basis = row_basis(to_gf2(matrix))
    n = basis.shape[1]
    out = []
    for mask in range(1 << basis.shape[0]):
        vec = np.zeros(n, dtype=np.uint8)
        for i in range(basis.shape[0]):
            if (mask >> i) & 1:
                vec ^= basis[i]
        out.append(tuple(int(x) for x in vec))
    return sorted(set(out))


def spaces_equal(a, b) -> bool:
    ba, bb = row_basis(to_gf2(a)), row_basis(to_gf2(b))
    if ba.shape != bb.shape:
        return False
    return bool((ba == bb).all())


# ---------------------------------------------------------------------------
# bitmask variant, used in the component-group sweeps

def mask_reduce(masks: Iterable[int]) -> list:
    """Fully reduced (Gauss-Jordan) basis of a list of bitmasks.

    Distinct leading bits, and no vector's leading bit occurs in another;
    this makes mask_canonical a true coset canonical form.
    """
    basis: list = []
    for mask in masks:
        cur = mask
        for b in basis:
            cur = min(cur, cur ^ b)
        if cur:
            basis = [min(b, b ^ cur) for b in basis]
            basis.append(cur)
            basis.sort(reverse=True)
    return basis


def mask_rank(masks: Iterable[int]) -> int:
    return len(mask_reduce(masks))


def mask_in_span(mask: int, basis: Sequence[int]) -> bool:
    for b in basis:
        mask = min(mask, mask ^ b)
    return mask == 0


def mask_canonical(mask: int, basis: Sequence[int]) -> int:
    """Minimal representative of mask + span(basis)."""
    for b in sorted(basis, reverse=True):
        mask = min(mask, mask ^ b)
    return mask
