"""l1 distance of quantized real vectors via unary encoding into Hamming space.

An entry ``z`` in ``[-1, 1]`` with ``k`` bits becomes the string ``s(z)`` of
length ``2^k`` whose first ``(z + 1) 2^(k-1)`` bits are 1.  Then
``|z - w| = d(s(z), s(w)) / 2^(k-1)`` exactly, and concatenating entries
turns l1 distance into Hamming distance.  Entries are kept as exact
fractions so representability is decided without rounding.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .bits import BitString
from .config import DEFAULT_CONFIG
from .ladder import HammingLadder, ProtocolResult
from .seeding import derive_seed


def _frac(z):
    if isinstance(z, str):
        return Fraction(z.strip())
    return Fraction(z)


def prefix_length(z, k, scale=1):
    """``(z/scale + 1) 2^(k-1)``; raises if it is not an integer in ``[0, 2^k]``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    p = (_frac(z) / _frac(scale) + 1) * 2 ** (k - 1)
    if p.denominator != 1 or not 0 <= p <= 2**k:
        raise ValueError(f"{z} is not representable with k={k} bits at scale {scale}")
    return int(p)


@dataclass(frozen=True)
class QuantizedVector:
    entries: tuple
    bits_k: int
    scale_M: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(_frac(z) for z in self.entries))
        object.__setattr__(self, "scale_M", _frac(self.scale_M))
        if self.scale_M < 1:
            raise ValueError("scale M must be >= 1")
        if not self.entries:
            raise ValueError("vector must have at least one entry")
        for z in self.entries:
            prefix_length(z, self.bits_k, self.scale_M)

    @property
    def dim(self):
        return len(self.entries)

    def prefixes(self):
        return [prefix_length(z, self.bits_k, self.scale_M) for z in self.entries]

    def l1_distance(self, other):
        _check_compatible(self, other)
        return sum(abs(a - b) for a, b in zip(self.entries, other.entries))


def _check_compatible(x, y):
    if x.dim != y.dim or x.bits_k != y.bits_k or x.scale_M != y.scale_M:
        raise ValueError("vectors must share dimension, k and M")


def unary_encode_entry(z, k):
    p = prefix_length(z, k)
    return BitString((1 << p) - 1, 2**k)


def unary_encode_vector(x):
    """Concatenated encodings of ``x / M``; length ``2^k * d``."""
    width = 2**x.bits_k
    return BitString.concat([BitString((1 << p) - 1, width) for p in x.prefixes()])


def l1_from_hamming(dH, k):
    if dH < 0:
        raise ValueError("Hamming distance must be non-negative")
    return dH / 2 ** (k - 1)


def max_bits(dim, config=DEFAULT_CONFIG):
    return math.ceil(math.log2(dim)) + config.l1_extra_bits if dim > 1 else config.l1_extra_bits


class L1Ladder(HammingLadder):
    """Hamming ladder sized for unary encodings of ``dim``-entry, ``k``-bit vectors."""

    def __init__(self, dim, k, eps, config=DEFAULT_CONFIG, setup_seed=0):
        if k > max_bits(dim, config):
            raise ValueError(f"k={k} exceeds the cap ceil(log2 d) + {config.l1_extra_bits} for d={dim}")
        self.dim = dim
        self.bits_k = k
        super().__init__(2**k * dim, eps, config, setup_seed)


def run_l1_epsilon(x, y, eps, config=DEFAULT_CONFIG, master_seed=0, setup=None):
    """Estimate ``||x - y||_1`` to relative error ``eps``."""
    _check_compatible(x, y)
    if setup is None:
        setup = L1Ladder(x.dim, x.bits_k, eps, config, derive_seed(master_seed, "setup"))
    elif (setup.dim, setup.bits_k) != (x.dim, x.bits_k):
        raise ValueError("setup was built for a different dimension or k")
    sx, sy = unary_encode_vector(x), unary_encode_vector(y)
    ham, answers = setup.run(sx, sy, master_seed)
    M = float(x.scale_M)
    estimate = l1_from_hamming(ham, x.bits_k) * M
    return ProtocolResult(estimate, setup.cost_report(), eps, float(x.l1_distance(y)), answers)


def l1_failure_probability(x, y, eps, setup):
    sx, sy = unary_encode_vector(x), unary_encode_vector(y)
    return setup.failure_probability(sx, sy, (sx.value ^ sy.value).bit_count())
