"""Sparse GF(2) matrices with a dense numpy mirror for elimination."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class BinaryMatrix:
    rows: int
    cols: int
    row_support: list[list[int]]

    def __post_init__(self):
        if len(self.row_support) != self.rows:
            raise ValueError("row count mismatch")
        for supp in self.row_support:
            if any(supp[i] >= supp[i + 1] for i in range(len(supp) - 1)):
                raise ValueError("row support must be strictly increasing")
            if supp and (supp[0] < 0 or supp[-1] >= self.cols):
                raise ValueError("column index out of range")

    @classmethod
    def from_rows(cls, rows: list[list[int]], cols: int) -> "BinaryMatrix":
        return cls(len(rows), cols, [sorted(set(r)) for r in rows])

    @classmethod
    def from_dense(cls, arr: np.ndarray) -> "BinaryMatrix":
        arr = np.asarray(arr, dtype=np.uint8) & 1
        supports = [list(np.flatnonzero(row)) for row in arr]
        return cls(arr.shape[0], arr.shape[1], [list(map(int, s)) for s in supports])

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, supp in enumerate(self.row_support):
            out[i, supp] = 1
        return out


def rank(m: BinaryMatrix | np.ndarray) -> int:
    a = m.to_dense() if isinstance(m, BinaryMatrix) else (np.array(m, dtype=np.uint8) & 1)
    return _eliminate(a)[1]


def _eliminate(a: np.ndarray) -> tuple[np.ndarray, int, list[int]]:
    """Row-reduce in place; returns (matrix, rank, pivot columns)."""
    a = a.copy()
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        hits = np.flatnonzero(a[r:, c])
        if hits.size == 0:
            continue
        piv = r + hits[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        mask = a[:, c].copy()
        mask[r] = 0
        a[mask == 1] ^= a[r]
        pivots.append(c)
        r += 1
    return a, r, pivots


def kernel_basis(m: BinaryMatrix | np.ndarray) -> np.ndarray:
    """Rows span the right null space of m over GF(2)."""
    a = m.to_dense() if isinstance(m, BinaryMatrix) else (np.array(m, dtype=np.uint8) & 1)
    red, r, pivots = _eliminate(a)
    ncols = a.shape[1]
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.uint8)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for row_idx, pc in enumerate(pivots):
            if red[row_idx, fc]:
                basis[i, pc] = 1
    return basis


def in_rowspace(vec: np.ndarray, basis: np.ndarray) -> bool:
    stacked = np.vstack([basis, vec[None, :]]) if basis.size else vec[None, :]
    return rank(stacked) == rank(basis) if basis.size else not vec.any()


def quotient_basis(kernel: np.ndarray, subspace: np.ndarray) -> np.ndarray:
    """Vectors of ``kernel`` extending ``subspace`` to a basis of their span."""
    picked = []
    work = subspace.copy() if subspace.size else np.zeros((0, kernel.shape[1]), np.uint8)
    cur = rank(work)
    for v in kernel:
        cand = np.vstack([work, v[None, :]])
        r = rank(cand)
        if r > cur:
            picked.append(v)
            work, cur = cand, r
    return (
        np.array(picked, dtype=np.uint8)
        if picked
        else np.zeros((0, kernel.shape[1]), np.uint8)
    )


def solve_gf2(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of a @ x = b over GF(2), or None."""
    a = np.array(a, dtype=np.uint8) & 1
    b = np.array(b, dtype=np.uint8) & 1
    aug = np.hstack([a, b[:, None]])
    red, r, pivots = _eliminate(aug)
    ncols = a.shape[1]
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.uint8)
    for row_idx, pc in enumerate(pivots):
        x[pc] = red[row_idx, ncols]
    return x


def invert_gf2(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=np.uint8) & 1
    n = m.shape[0]
    aug = np.hstack([m, np.eye(n, dtype=np.uint8)])
    red, r, pivots = _eliminate(aug)
    if pivots[:n] != list(range(n)) or r != n:
        raise np.linalg.LinAlgError("matrix is singular over GF(2)")
    return red[:, n:]
