"""Square matrices over the two-element field, rows packed into ints."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

MAX_SCAN_N = 5


def gf2_rank(rows, n_cols: int) -> int:
    """Rank of the row vectors (bit ``j`` of a row is column ``j``)."""
    work = list(rows)
    rank = 0
    for col in range(n_cols):
        bit = 1 << col
        pivot = next((r for r in range(rank, len(work)) if work[r] & bit), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and work[r] & bit:
                work[r] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


@dataclass(frozen=True)
class BitMatrix:
    n: int
    rows: tuple

    def __post_init__(self):
        if self.n < 1 or len(self.rows) != self.n:
            raise ValidationError("BitMatrix needs n >= 1 rows")
        if any(not 0 <= r < (1 << self.n) for r in self.rows):
            raise ValidationError("row has bits beyond column n")

    @classmethod
    def from_lists(cls, entries) -> "BitMatrix":
        rows = tuple(sum((int(b) & 1) << j for j, b in enumerate(row)) for row in entries)
        return cls(len(rows), rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    def to_lists(self) -> list:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def __getitem__(self, ij) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def rank(self) -> int:
        return gf2_rank(self.rows, self.n)

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def minus_identity(self) -> "BitMatrix":
        # -I = I over F2
        return BitMatrix(self.n, tuple(r ^ (1 << i) for i, r in enumerate(self.rows)))

    def apply(self, x: int) -> int:
        """Matrix-vector product, ``x`` packed like a row."""
        return sum((bin(r & x).count("1") & 1) << i for i, r in enumerate(self.rows))

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        cols = [other.apply(1 << j) for j in range(self.n)]  # columns of other, packed
        # (self @ other) column j = self.apply(other column j)
        prod_cols = [self.apply(c) for c in cols]
        rows = tuple(sum(((prod_cols[j] >> i) & 1) << j for j in range(self.n))
                     for i in range(self.n))
        return BitMatrix(self.n, rows)


def block_diag(*blocks: BitMatrix) -> BitMatrix:
    rows = []
    off = 0
    for b in blocks:
        rows.extend(r << off for r in b.rows)
        off += b.n
    return BitMatrix(off, tuple(rows))


def _full_rank_mask(rows: np.ndarray, n: int) -> np.ndarray:
    """Vectorized elimination: ``rows`` has shape ``(N, n)``; True where rank is ``n``."""
    R = rows.copy()
    N = R.shape[0]
    ok = np.ones(N, dtype=bool)
    idx = np.arange(N)
    for c in range(n):
        bit = np.uint32(1 << c)
        has = (R[:, c:] & bit) != 0
        ok &= has.any(axis=1)
        piv = c + has.argmax(axis=1)
        prow = R[idx, piv].copy()
        R[idx, piv] = R[:, c]
        R[:, c] = prow
        mask = (R & bit) != 0
        mask[:, c] = False
        R ^= np.where(mask, prow[:, None], np.uint32(0))
    return ok


def _scan_range(n: int, start: int, stop: int) -> tuple:
    codes = np.arange(start, stop, dtype=np.uint64)
    rowmask = np.uint64((1 << n) - 1)
    rows = np.stack([((codes >> np.uint64(n * i)) & rowmask) for i in range(n)], axis=1)
    rows = rows.astype(np.uint32)
    inv = _full_rank_mask(rows, n)
    a = rows[inv]
    shifted = a ^ (np.uint32(1) << np.arange(n, dtype=np.uint32))
    good = _full_rank_mask(shifted, n)
    return int(inv.sum()), int(good.sum())


def gl_counts(n: int, chunk: int = 1 << 20, workers: int = 1) -> tuple:
    """``(|GL_n(F2)|, #{A in GL_n(F2) : A - I invertible})`` by exhaustive scan.

    All ``2^(n*n)`` matrices are tested with bit-parallel elimination over
    numpy arrays, in chunks; ``workers > 1`` shards chunks across processes.
    """
    if not 1 <= n <= MAX_SCAN_N:
        raise ValidationError(f"gl_counts supports 1 <= n <= {MAX_SCAN_N}, got {n}")
    total = 1 << (n * n)
    ranges = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_scan_range, [n] * len(ranges), *zip(*ranges)))
    else:
        parts = [_scan_range(n, s, e) for s, e in ranges]
    return sum(p[0] for p in parts), sum(p[1] for p in parts)


def gl_order(n: int) -> int:
    """``prod_{i<n} (2^n - 2^i)``."""
    out = 1
    for i in range(n):
        out *= (1 << n) - (1 << i)
    return out


A2 = BitMatrix.from_lists([[1, 1], [1, 0]])
A3 = BitMatrix.from_lists([[1, 1, 1], [1, 1, 0], [1, 0, 0]])


def block_matrix(n: int) -> BitMatrix:
    """A matrix ``A`` with ``A`` and ``A - I`` both invertible, for ``n >= 2``.

    Diagonal blocks of ``A2`` (plus one ``A3`` when ``n`` is odd). Both
    invertibility claims are rechecked by elimination before returning.
    """
    if n < 2:
        raise ValidationError(
            "no witness for n = 1: GL_1(F2) contains only the identity, and I - I = 0")
    blocks = [A2] * (n // 2) if n % 2 == 0 else [A2] * ((n - 3) // 2) + [A3]
    A = block_diag(*blocks)
    if not (A.is_invertible() and A.minus_identity().is_invertible()):
        raise ValidationError(f"block matrix for n = {n} failed the invertibility check")
    return A
