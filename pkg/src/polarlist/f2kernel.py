"""GF(2) linear algebra for polar codes.

Bit vectors and bit matrices are plain ``numpy.uint8`` arrays holding 0/1.
Indices are 0-based here; user-facing formats add 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyConstraintsError, InvalidArgument

KERNEL = np.array([[1, 0], [1, 1]], dtype=np.uint8)


def log2_exact(n: int) -> int:
    """Return m with 2**m == n, or raise InvalidArgument."""
    n = int(n)
    if n < 1 or n & (n - 1):
        raise InvalidArgument(f"length must be a power of two, got {n}")
    return n.bit_length() - 1


def as_bits(x, name: str = "bits") -> np.ndarray:
    a = np.asarray(x)
    if a.size == 0:
        raise InvalidArgument(f"{name} must be nonempty")
    if not np.all((a == 0) | (a == 1)):
        raise InvalidArgument(f"{name} must contain only 0/1")
    return a.astype(np.uint8, copy=False)


def polar_transform(u) -> np.ndarray:
    """Compute ``u @ F^{(x)m}`` over GF(2) with butterfly passes.

    Works on a single vector or on a batch of row vectors (last axis).
    Natural index order, no bit reversal.
    """
    x = as_bits(u, "u").copy()
    n = x.shape[-1]
    m = log2_exact(n)
    lead = x.shape[:-1]
    for s in range(m):
        h = 1 << s
        v = x.reshape(lead + (n // (2 * h), 2, h))
        v[..., 0, :] ^= v[..., 1, :]
    return x


def kron_power(m: int) -> np.ndarray:
    """Materialize F^{(x)m} (n x n). Intended for small m and for oracles."""
    g = np.ones((1, 1), dtype=np.uint8)
    for _ in range(m):
        g = np.kron(KERNEL, g)
    return g


def row_weight(i: int, m: int) -> int:
    """Hamming weight of row ``i`` (1-based) of F^{(x)m}."""
    if not 1 <= i <= (1 << m):
        raise InvalidArgument(f"row index {i} out of range 1..{1 << m}")
    return 1 << bin(i - 1).count("1")


def row_weights(n: int) -> np.ndarray:
    """All row weights of F^{(x)log2 n}, indexed 0-based."""
    log2_exact(n)
    idx = np.arange(n)
    pop = np.zeros(n, dtype=np.int64)
    for b in range(n.bit_length()):
        pop += (idx >> b) & 1
    return 1 << pop


def mat_mul_f2(a, b) -> np.ndarray:
    a = np.atleast_2d(as_bits(a, "A"))
    b = np.atleast_2d(as_bits(b, "B"))
    if a.shape[1] != b.shape[0]:
        raise InvalidArgument(f"dimension mismatch {a.shape} x {b.shape}")
    return ((a.astype(np.int64) @ b.astype(np.int64)) & 1).astype(np.uint8)


def rank_f2(mat) -> int:
    """Rank over GF(2) by Gaussian elimination."""
    a = np.atleast_2d(as_bits(mat, "M")).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hit = np.nonzero(a[r:, c])[0]
        if hit.size == 0:
            continue
        p = r + hit[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        a[others] ^= a[r]
        r += 1
    return r


@dataclass(frozen=True)
class ConstraintMatrix:
    """Parity constraints on u in trailing-one form.

    Each row is ``(support, pivot)`` with ``pivot == max(support)``; the XOR of
    ``u`` over ``support`` must be zero. Pivots are pairwise distinct.
    """

    n_cols: int
    rows: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(p for _, p in self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def to_matrix(self) -> np.ndarray:
        out = np.zeros((len(self.rows), self.n_cols), dtype=np.uint8)
        for r, (support, _) in enumerate(self.rows):
            out[r, list(support)] = 1
        return out


def trailing_one_reduce(mat) -> ConstraintMatrix:
    """Row-reduce so that every row's last 1 lies in a distinct column.

    Rows are inserted one at a time; a row whose last 1 collides with an
    existing pivot is XORed with that pivot row until it either lands on a
    free column or vanishes. Output rows are sorted by pivot.
    """
    a = np.atleast_2d(as_bits(mat, "M"))
    if not a.any():
        raise EmptyConstraintsError("matrix has no nonzero rows")
    by_pivot: dict[int, np.ndarray] = {}
    for row in a:
        r = row.copy()
        while True:
            nz = np.flatnonzero(r)
            if nz.size == 0:
                break
            p = int(nz[-1])
            if p in by_pivot:
                r ^= by_pivot[p]
            else:
                by_pivot[p] = r
                break
    rows = tuple(
        (tuple(int(j) for j in np.flatnonzero(by_pivot[p])), p) for p in sorted(by_pivot)
    )
    return ConstraintMatrix(n_cols=a.shape[1], rows=rows)
