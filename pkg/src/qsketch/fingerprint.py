"""Fingerprint states, the swap test, and the overlap/Hamming estimator.

For an ``N``-bit string ``x`` the fingerprint is
``|h_x> = N^{-1/2} sum_i |i>|x_i>``, so ``<h_y|h_x> = 1 - d(x, y)/N``.  The
swap test on ``|h_x>|h_y>`` outputs 1 with probability ``(1 - <h_y|h_x>^2)/2``.
Swap tests are sampled from that probability directly; :func:`swap_test_dense`
runs the actual circuit on explicit amplitude vectors for small ``N`` and is
used as a cross-check.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._num import ceil_log2, ceil_tol
from .bits import hamming_distance

OVERLAP_TOL = 1e-9
TAIL_CONSTANT = 32


def fingerprint_overlap(x, y):
    """Inner product of the fingerprints of ``x`` and ``y``."""
    d = hamming_distance(x, y)
    if x.length < 1:
        raise ValueError("fingerprints need N >= 1")
    return 1.0 - d / x.length


def swap_accept_prob(overlap):
    if abs(overlap) > 1 + OVERLAP_TOL:
        raise ValueError(f"|overlap| must be <= 1, got {overlap}")
    return max(0.0, (1.0 - overlap * overlap) / 2.0)


def raw_fingerprint_vector(z):
    """Real amplitude vector of ``|h_z>`` in the basis ``|i>|b>`` -> index ``2i + b``."""
    n = z.length
    if n < 1:
        raise ValueError("fingerprints need N >= 1")
    v = np.zeros(2 * n)
    v[2 * np.arange(n) + z.to_array()] = 1.0 / math.sqrt(n)
    return v


def swap_test_dense(u, v):
    """Probability that the swap-test circuit outputs 1, from explicit states.

    Builds ``|0>|u>|v>``, applies H on the ancilla, a controlled SWAP and H
    again, and returns the weight of the ancilla-1 branch.  Cost is
    ``O(dim^2)``; intended for dimensions up to a few dozen.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError("states must have the same dimension")
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    state = np.zeros((2, u.size, v.size), dtype=complex)
    state[0] = np.outer(u, v)
    state = np.tensordot(h, state, axes=(1, 0))
    state[1] = state[1].T.copy()
    state = np.tensordot(h, state, axes=(1, 0))
    return float(np.sum(np.abs(state[1]) ** 2))


@dataclass(frozen=True)
class SwapTestEstimate:
    """Tally of ``copies_k`` swap tests and the derived estimators.

    ``eta_tilde`` estimates the overlap and ``d_tilde`` the Hamming distance
    between the length-``length`` strings behind the fingerprints.
    """

    copies_k: int
    ones_count: int
    length: int = 1

    def __post_init__(self):
        if self.copies_k < 1 or not 0 <= self.ones_count <= self.copies_k:
            raise ValueError("need copies_k >= 1 and 0 <= ones_count <= copies_k")

    @property
    def eta_tilde(self):
        return estimate_overlap(self.ones_count, self.copies_k)

    @property
    def d_tilde(self):
        return self.length * (1.0 - self.eta_tilde)


def estimate_overlap(ones_count, copies_k):
    # radicand clamped at 0 when more than half the tests output 1
    return math.sqrt(max(0.0, 1.0 - 2.0 * ones_count / copies_k))


def sample_swap_tests(p, k, rng, length=1):
    """Run ``k`` swap tests that each output 1 with probability ``p``."""
    if not 0.0 <= p <= 0.5 + OVERLAP_TOL:
        raise ValueError(f"swap-test acceptance probability must lie in [0, 1/2], got {p}")
    ones = int(rng.binomial(k, min(p, 0.5))) if p > 0 else 0
    return SwapTestEstimate(int(k), ones, length)


def copies_needed(eps_est, delta):
    """Smallest ``k`` with ``2 exp(-k eps^4 / 32) <= delta``."""
    if not 0 < eps_est <= 1:
        raise ValueError(f"eps_est must lie in (0, 1], got {eps_est}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return max(1, ceil_tol(TAIL_CONSTANT * math.log(2.0 / delta) / eps_est**4))


def tail_bound(k, eps_est):
    return 2.0 * math.exp(-k * eps_est**4 / TAIL_CONSTANT)


def qubits_per_copy(dimension, jl=False):
    """Qubits in one fingerprint copy.

    Exact fingerprints of ``N``-bit strings need an index register and one bit
    qubit; a JL-compressed real state of dimension ``m`` needs ``ceil(log2 m)``.
    """
    if dimension < 1:
        raise ValueError("dimension must be positive")
    if jl:
        return max(1, ceil_log2(dimension))
    return ceil_log2(dimension) + 1


@dataclass(frozen=True)
class FingerprintSpec:
    """What one party encodes: an ``N``-bit string, or a unit real vector (JL mode)."""

    source: object
    dimension: int
    jl: bool = False

    @classmethod
    def exact(cls, z):
        return cls(z, z.length)

    @classmethod
    def compressed(cls, vector):
        vector = np.asarray(vector, dtype=float)
        if abs(np.linalg.norm(vector) - 1.0) > OVERLAP_TOL:
            raise ValueError("JL-mode fingerprints must have unit norm")
        return cls(vector, vector.size, jl=True)

    @property
    def qubit_cost(self):
        return qubits_per_copy(self.dimension, jl=self.jl)


__all__ = [
    "FingerprintSpec",
    "SwapTestEstimate",
    "copies_needed",
    "estimate_overlap",
    "fingerprint_overlap",
    "qubits_per_copy",
    "raw_fingerprint_vector",
    "sample_swap_tests",
    "swap_accept_prob",
    "swap_test_dense",
    "tail_bound",
]
