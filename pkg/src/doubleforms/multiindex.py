"""Exterior-algebra combinatorics: multi-indices, complements, shuffles.

Public objects use 1-based indices (frame vectors e_1, ..., e_n).  The
cached ``*_table`` helpers work with 0-based positions into the
lexicographic list of increasing index tuples and back every dense kernel
in :mod:`doubleforms.algebra`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .errors import DimensionExceeded, InvalidIndex, InvalidSplit

MAX_DIM = 10


def check_dim(n: int) -> int:
    n = int(n)
    if n < 0:
        raise InvalidIndex(f"dimension must be non-negative, got {n}")
    if n > MAX_DIM:
        raise DimensionExceeded(f"dimension {n} exceeds the cap n <= {MAX_DIM}")
    return n


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (0 if entries repeat)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class MultiIndex:
    """Strictly increasing tuple of 1-based indices in dimension ``n``."""

    indices: tuple[int, ...]
    n: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "n", check_dim(self.n))
        if len(idx) > self.n:
            raise InvalidIndex(f"{idx} is longer than the dimension {self.n}")
        for i in idx:
            if not 1 <= i <= self.n:
                raise InvalidIndex(f"index {i} outside [1, {self.n}]")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise InvalidIndex(f"{idx} is not strictly increasing")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    @property
    def position(self) -> int:
        """Position of this index in the lexicographic basis of Λ^p."""
        return rank_map(self.n, len(self))[tuple(i - 1 for i in self.indices)]

    @classmethod
    def from_position(cls, n: int, p: int, pos: int) -> "MultiIndex":
        return cls(tuple(i + 1 for i in basis(n, p)[pos]), n)


def _as_multiindex(I, n: int | None) -> MultiIndex:
    if isinstance(I, MultiIndex):
        if n is not None and int(n) != I.n:
            raise InvalidIndex(f"multi-index lives in dimension {I.n}, not {n}")
        return I
    if n is None:
        raise InvalidIndex("a dimension is required for a plain index tuple")
    return MultiIndex(tuple(I), n)


def complement(I, n: int | None = None) -> tuple[MultiIndex, int]:
    """Increasing complement of ``I`` and the sign of the permutation (I, I^c)."""
    I = _as_multiindex(I, n)
    rest = tuple(i for i in range(1, I.n + 1) if i not in I.indices)
    return MultiIndex(rest, I.n), permutation_sign(I.indices + rest)


def shuffles(I, k: int, n: int | None = None) -> list[tuple[MultiIndex, MultiIndex, int]]:
    """All splits of ``I`` into an increasing k-part and its increasing remainder.

    Each entry carries the sign of the permutation taking ``I`` to the
    concatenation (I1, I2).  Ordered lexicographically in ``I1``.
    """
    if n is None and not isinstance(I, MultiIndex):
        n = max(I, default=0)
    I = _as_multiindex(I, n)
    if not 0 <= k <= len(I):
        raise InvalidSplit(f"cannot split an index of length {len(I)} at {k}")
    out = []
    for pos in combinations(range(len(I)), k):
        first = tuple(I.indices[a] for a in pos)
        second = tuple(I.indices[a] for a in range(len(I)) if a not in pos)
        sign = -1 if (sum(pos) - k * (k - 1) // 2) % 2 else 1
        out.append((MultiIndex(first, I.n), MultiIndex(second, I.n), sign))
    return out


# ---------------------------------------------------------------------------
# cached 0-based tables for the dense kernels


@lru_cache(maxsize=None)
def basis(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    if not 0 <= p <= n:
        return ()
    return tuple(combinations(range(n), p))


@lru_cache(maxsize=None)
def rank_map(n: int, p: int) -> dict[tuple[int, ...], int]:
    return {I: a for a, I in enumerate(basis(n, p))}


def dim(n: int, p: int) -> int:
    return comb(n, p) if 0 <= p <= n else 0


def _readonly(*arrays):
    for a in arrays:
        a.setflags(write=False)
    return arrays


@lru_cache(maxsize=None)
def shuffle_table(n: int, p: int, r: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rows indexed by increasing (p+r)-tuples; columns by the C(p+r, p) splits.

    Returns positions of the p-part, positions of the r-part and the signs.
    """
    m = p + r
    rows = basis(n, m)
    K = comb(m, p)
    first = np.zeros((len(rows), K), dtype=np.intp)
    second = np.zeros((len(rows), K), dtype=np.intp)
    sign = np.zeros((len(rows), K))
    rp, rr = rank_map(n, p), rank_map(n, r)
    for a, I in enumerate(rows):
        for k, pos in enumerate(combinations(range(m), p)):
            first[a, k] = rp[tuple(I[x] for x in pos)]
            second[a, k] = rr[tuple(I[x] for x in range(m) if x not in pos)]
            sign[a, k] = -1.0 if (sum(pos) - p * (p - 1) // 2) % 2 else 1.0
    return _readonly(first, second, sign)


@lru_cache(maxsize=None)
def complement_table(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """For every increasing p-tuple: position of its complement and the sign."""
    rows = basis(n, p)
    rc = rank_map(n, n - p)
    pos = np.zeros(len(rows), dtype=np.intp)
    sign = np.zeros(len(rows))
    for a, I in enumerate(rows):
        rest = tuple(i for i in range(n) if i not in I)
        pos[a] = rc[rest]
        sign[a] = permutation_sign(I + rest)
    return _readonly(pos, sign)


@lru_cache(maxsize=None)
def insertion_table(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Prepending a vector e_m to an increasing p-tuple.

    ``pos[a, m]`` is the position of sorted(m, I_a) among (p+1)-tuples and
    ``sign[a, m]`` the sign of that sort (0 when m already occurs in I_a).
    """
    rows = basis(n, p)
    rk = rank_map(n, p + 1)
    pos = np.zeros((len(rows), n), dtype=np.intp)
    sign = np.zeros((len(rows), n))
    for a, I in enumerate(rows):
        for m in range(n):
            if m in I:
                continue
            pos[a, m] = rk[tuple(sorted(I + (m,)))]
            sign[a, m] = -1.0 if sum(1 for i in I if i < m) % 2 else 1.0
    return _readonly(pos, sign)


@lru_cache(maxsize=None)
def deletion_table(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """For every increasing p-tuple and slot i: the tuple with slot i removed.

    Returns positions (rows x p) among (p-1)-tuples and the element removed.
    """
    rows = basis(n, p)
    rk = rank_map(n, p - 1)
    pos = np.zeros((len(rows), p), dtype=np.intp)
    removed = np.zeros((len(rows), p), dtype=np.intp)
    for a, I in enumerate(rows):
        for i in range(p):
            pos[a, i] = rk[I[:i] + I[i + 1:]]
            removed[a, i] = I[i]
    return _readonly(pos, removed)
