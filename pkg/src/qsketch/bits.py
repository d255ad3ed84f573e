"""Packed bitstrings and sparse GF(2) matrices.

A :class:`BitString` stores its bits in a single Python integer (bit ``i`` of
the string is bit ``i`` of the integer), so XOR and popcount run over machine
words.  A :class:`SparseGF2Matrix` is stored column-major: column ``j`` is an
``N``-bit integer generated on demand from ``(seed, j)``, which makes
``A @ z`` an XOR of the columns in the support of ``z``.
"""

from collections import OrderedDict
from dataclasses import dataclass, field
from functools import reduce
from operator import xor

import numpy as np

from .seeding import derive_rng


@dataclass(frozen=True)
class BitString:
    """Immutable binary string of fixed length.

    Serialises as an ASCII ``0``/``1`` string with bit 0 first.
    """

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"value does not fit in {self.length} bits")

    @classmethod
    def from_str(cls, s):
        s = s.strip()
        if any(c not in "01" for c in s):
            raise ValueError(f"not a binary string: {s!r}")
        return cls(int(s[::-1], 2) if s else 0, len(s))

    @classmethod
    def from_bits(cls, bits):
        bits = np.asarray(bits, dtype=np.uint8).ravel()
        if bits.size and bits.max() > 1:
            raise ValueError("bits must be 0 or 1")
        packed = np.packbits(bits, bitorder="little")
        return cls(int.from_bytes(packed.tobytes(), "little"), int(bits.size))

    @classmethod
    def zeros(cls, n):
        return cls(0, n)

    @classmethod
    def ones(cls, n):
        return cls((1 << n) - 1, n)

    @classmethod
    def random(cls, n, rng):
        """Uniformly random string drawn from a numpy ``Generator``."""
        nbytes = (n + 7) // 8
        raw = int.from_bytes(rng.bytes(nbytes), "little") if nbytes else 0
        return cls(raw & ((1 << n) - 1), n)

    @classmethod
    def concat(cls, parts):
        value, offset = 0, 0
        for p in parts:
            value |= p.value << offset
            offset += p.length
        return cls(value, offset)

    def __len__(self):
        return self.length

    def __getitem__(self, i):
        if not -self.length <= i < self.length:
            raise IndexError(i)
        return (self.value >> (i % self.length)) & 1

    def __xor__(self, other):
        _check_lengths(self, other)
        return BitString(self.value ^ other.value, self.length)

    def __str__(self):
        if not self.length:
            return ""
        return format(self.value, f"0{self.length}b")[::-1]

    def weight(self):
        return self.value.bit_count()

    def support(self):
        """Indices of the 1-entries, ascending."""
        v, out = self.value, []
        while v:
            low = v & -v
            out.append(low.bit_length() - 1)
            v ^= low
        return out

    def to_array(self):
        nbytes = (self.length + 7) // 8
        raw = np.frombuffer(self.value.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.length]

    def flip(self, positions):
        v = self.value
        for i in positions:
            if not 0 <= i < self.length:
                raise IndexError(i)
            v ^= 1 << i
        return BitString(v, self.length)


def _check_lengths(a, b):
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} != {b.length}")


def hamming_distance(a, b):
    _check_lengths(a, b)
    return (a.value ^ b.value).bit_count()


def weight(z):
    return z.value.bit_count()


class ColumnCache:
    """LRU store of generated matrix columns, bounded by total bytes."""

    def __init__(self, max_bytes=256 << 20):
        self.max_bytes = max_bytes
        self.nbytes = 0
        self._store = OrderedDict()

    def get(self, key):
        col = self._store.get(key)
        if col is not None:
            self._store.move_to_end(key)
        return col

    def put(self, key, col, size):
        if key in self._store:
            return
        self._store[key] = (col, size)
        self.nbytes += size
        while self.nbytes > self.max_bytes and len(self._store) > 1:
            _, (_, s) = self._store.popitem(last=False)
            self.nbytes -= s

    def __len__(self):
        return len(self._store)


@dataclass(frozen=True, eq=False)
class SparseGF2Matrix:
    """Random ``n_rows x n_cols`` matrix over GF(2) with i.i.d. entries.

    Each entry is 1 with probability ``entry_probability``.  Column ``j`` is
    drawn from the stream ``derive_rng(seed, j)``, so the matrix is a pure
    function of ``(seed, n_rows, n_cols, entry_probability)`` and is never
    stored in full; columns are materialised lazily and kept in ``cache``.
    """

    n_rows: int
    n_cols: int
    entry_probability: float
    seed: int
    cache: ColumnCache = field(default=None, repr=False)
    explicit_columns: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if self.explicit_columns is None and not 0 <= self.entry_probability <= 1:
            raise ValueError("entry_probability must lie in [0, 1]")
        if self.cache is None:
            object.__setattr__(self, "cache", ColumnCache())

    @classmethod
    def from_rows(cls, rows, n_cols):
        """Fixed matrix from per-row column-index lists (tests, adversarial inputs)."""
        cols = [0] * n_cols
        for i, row in enumerate(rows):
            for j in row:
                if not 0 <= j < n_cols:
                    raise ValueError(f"column index {j} out of range")
                cols[j] ^= 1 << i
        return cls(len(rows), n_cols, float("nan"), 0, explicit_columns=tuple(cols))

    def column(self, j):
        """Column ``j`` as an ``n_rows``-bit integer."""
        if self.explicit_columns is not None:
            return self.explicit_columns[j]
        key = (self.seed, self.n_rows, self.entry_probability, j)
        hit = self.cache.get(key)
        if hit is not None:
            return hit[0]
        rng = derive_rng(self.seed, j)
        bits = rng.random(self.n_rows) < self.entry_probability
        packed = np.packbits(bits, bitorder="little")
        col = int.from_bytes(packed.tobytes(), "little")
        self.cache.put(key, col, packed.nbytes)
        return col

    def matvec(self, z):
        if z.length != self.n_cols:
            raise ValueError(f"dimension mismatch: matrix has {self.n_cols} columns, vector has {z.length} bits")
        return BitString(reduce(xor, (self.column(j) for j in z.support()), 0), self.n_rows)

    def row_support(self, i):
        return [j for j in range(self.n_cols) if (self.column(j) >> i) & 1]

    def rows(self):
        return [self.row_support(i) for i in range(self.n_rows)]

    def to_dense(self):
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for j in range(self.n_cols):
            out[:, j] = BitString(self.column(j), self.n_rows).to_array()
        return out

    def nnz(self):
        return sum(self.column(j).bit_count() for j in range(self.n_cols))


def gf2_matvec(A, z):
    """``A @ z`` over GF(2): bit ``i`` is the parity of ``z`` on row ``i``'s support."""
    return A.matvec(z)
