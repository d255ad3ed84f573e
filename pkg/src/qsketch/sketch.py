"""Sparse random GF(2) sketches that separate small from large Hamming weight.

With entries drawn 1 with probability ``1/(4d)``, each bit of ``Az`` is the
parity of ``|z|`` such entries and is 1 with probability
``(1 - (1 - 1/(2d))^|z|) / 2``.  That probability is at most
``delta1`` when ``|z| <= d`` and at least ``delta2`` when ``|z| >= (1+eps)d``;
a sketch of length ``N`` concentrates ``|Az|`` within ``N*eta`` of its mean,
``eta = (delta2 - delta1)/4``, so the midpoint ``N(delta1 + delta2)/2``
separates the two cases with margin ``N*eta`` on each side.
"""

import enum
import math
from dataclasses import dataclass

from scipy.stats import binom

from ._num import ceil_tol
from .bits import SparseGF2Matrix
from .fingerprint import copies_needed, qubits_per_copy, sample_swap_tests, swap_accept_prob

DEFAULT_MATRIX_FAIL = 1e-3
EQUALITY_ETA = 0.125
MAX_EXHAUSTIVE_BITS = 20


class Decision(enum.Enum):
    AT_MOST_D = "at_most_d"
    AT_LEAST_SCALED_D = "at_least_scaled_d"


class EqualityDecision(enum.Enum):
    EQUAL = "equal"
    UNEQUAL = "unequal"


def bit_one_probability(d, weight):
    """``Pr_A[(Az)_i = 1]`` for a fixed ``z`` of the given weight."""
    return 0.5 * (1.0 - (1.0 - 1.0 / (2.0 * d)) ** weight)


def delta_bounds(d, eps):
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return bit_one_probability(d, d), bit_one_probability(d, (1.0 + eps) * d)


def _sketch_rows(n, eta, fail):
    return max(1, ceil_tol((n * math.log(2.0) + math.log(2.0 / fail)) / (2.0 * eta * eta)))


def size_sketch(n, d, eps, fail=DEFAULT_MATRIX_FAIL):
    """Sketch length ``N`` making ``2 * 2^n * exp(-2 N eta^2) <= fail``."""
    if not 0 < fail < 1:
        raise ValueError(f"fail must lie in (0, 1), got {fail}")
    delta1, delta2 = delta_bounds(d, eps)
    return _sketch_rows(n, (delta2 - delta1) / 4.0, fail)


@dataclass(frozen=True)
class ThresholdParams:
    d: float
    eps: float
    delta1: float
    delta2: float
    eta: float
    N: int
    decision_threshold: float

    @classmethod
    def build(cls, d, eps, n, fail=DEFAULT_MATRIX_FAIL):
        delta1, delta2 = delta_bounds(d, eps)
        eta = (delta2 - delta1) / 4.0
        N = size_sketch(n, d, eps, fail)
        return cls(d, eps, delta1, delta2, eta, N, N * (delta1 + delta2) / 2.0)


def entry_probability(d):
    """Entry density whose row parities follow :func:`bit_one_probability`."""
    return 1.0 / (4.0 * d)


def sample_sparse_matrix(N, n, d, seed, cache=None):
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return SparseGF2Matrix(N, n, entry_probability(d), int(seed), cache)


def _gray_weights(A):
    """Yield ``(|z|, |Az|)`` for every ``z`` in ``{0,1}^n`` (Gray-code order)."""
    cols = [A.column(j) for j in range(A.n_cols)]
    z_weight, acc = 0, 0
    yield 0, 0
    for i in range(1, 1 << A.n_cols):
        j = (i & -i).bit_length() - 1
        acc ^= cols[j]
        z_weight += 1 if (i ^ (i >> 1)) >> j & 1 else -1
        yield z_weight, acc.bit_count()


def verify_separation(A, d, eps):
    """Exhaustively check that ``A`` separates ``|z| <= d`` from ``|z| >= (1+eps)d``.

    True iff every light ``z`` has ``|Az| < N(delta1 + 2 eta)`` and every heavy
    ``z`` has ``|Az| > N(delta2 - 2 eta)``.  Both bounds equal the midpoint.
    """
    if A.n_cols > MAX_EXHAUSTIVE_BITS:
        raise ValueError(f"exhaustive check limited to n <= {MAX_EXHAUSTIVE_BITS}, got {A.n_cols}")
    delta1, delta2 = delta_bounds(d, eps)
    eta = (delta2 - delta1) / 4.0
    N = A.n_rows
    low, high = N * (delta1 + 2 * eta), N * (delta2 - 2 * eta)
    heavy = (1.0 + eps) * d
    for zw, aw in _gray_weights(A):
        if zw <= d and not aw < low:
            return False
        if zw >= heavy and not aw > high:
            return False
    return True


@dataclass(frozen=True)
class StepCost:
    """Communication for one ladder step: both parties send ``copies_k`` states."""

    value: float
    dimension: int
    copies_k: int
    qubits_per_copy: int
    jl: bool = False

    @property
    def qubits(self):
        return 2 * self.copies_k * self.qubits_per_copy

    def to_dict(self):
        return {
            "value": self.value,
            "dimension": self.dimension,
            "copies_k": self.copies_k,
            "qubits_per_copy": self.qubits_per_copy,
            "jl": self.jl,
            "qubits": self.qubits,
        }


@dataclass(frozen=True)
class StepOutcome:
    decision: object
    estimate: object
    cost: StepCost
    sketch_distance: int = None


def _max_true(pred, hi):
    """Largest ``j`` in ``[0, hi]`` with monotone-decreasing ``pred(j)`` true, else -1."""
    if not pred(0):
        return -1
    lo = 0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


class _SwapStep:
    """Shared machinery: swap tests on sketched fingerprints and a threshold on ``d_tilde``."""

    matrix: SparseGF2Matrix
    copies_k: int
    value: float

    @property
    def length(self):
        return self.matrix.n_rows

    def accepts(self, d_tilde):
        raise NotImplementedError

    def sketch_distance(self, x, y):
        # d(Ax, Ay) = |A(x ^ y)| by linearity; only the support of x ^ y is touched
        return self.matrix.matvec(x ^ y).weight()

    def cost(self, dimension=None, jl=False):
        dim = self.length if dimension is None else dimension
        return StepCost(self.value, dim, self.copies_k, qubits_per_copy(dim, jl=jl), jl)

    def run_overlap(self, overlap, rng):
        est = sample_swap_tests(swap_accept_prob(overlap), self.copies_k, rng, self.length)
        return est, self.accepts(est.d_tilde)

    def accept_ones_limit(self):
        """Largest swap-test 1-count that still yields the accepting answer."""
        N, k = self.length, self.copies_k
        return _max_true(lambda j: self.accepts(N * (1.0 - math.sqrt(max(0.0, 1.0 - 2.0 * j / k)))), k)

    def accept_probability(self, overlap):
        """Exact probability of the accepting answer at the given true overlap."""
        return float(binom.cdf(self.accept_ones_limit(), self.copies_k, swap_accept_prob(overlap)))


class ThresholdStep(_SwapStep):
    """Decide ``d(x,y) <= d`` versus ``d(x,y) >= (1+eps)d`` with one sketch matrix."""

    def __init__(self, params, matrix, delta, value=None):
        if matrix.n_rows != params.N:
            raise ValueError("matrix row count does not match params.N")
        self.params = params
        self.matrix = matrix
        self.delta = delta
        self.value = params.d if value is None else value
        self.copies_k = copies_needed(params.eta, delta)

    def accepts(self, d_tilde):
        return d_tilde <= self.params.decision_threshold

    def run(self, x, y, rng):
        w = self.sketch_distance(x, y)
        est, ok = self.run_overlap(1.0 - w / self.length, rng)
        decision = Decision.AT_MOST_D if ok else Decision.AT_LEAST_SCALED_D
        return StepOutcome(decision, est, self.cost(), w)


class EqualityStep(_SwapStep):
    """The ``d = 0`` step: dense (density 1/2) sketch plus standard fingerprinting.

    Any ``z != 0`` maps to a Bernoulli(1/2) string, so ``|Az| > 3N/8`` for all
    ``z != 0`` except with probability ``fail``; with overlap accuracy 1/8 the
    estimate then stays above ``N/4``, the decision threshold.
    """

    def __init__(self, n, delta, seed, fail=DEFAULT_MATRIX_FAIL, cache=None):
        self.n = n
        self.delta = delta
        self.value = 0.0
        self.matrix = SparseGF2Matrix(equality_sketch_size(n, fail), n, 0.5, int(seed), cache)
        self.copies_k = copies_needed(EQUALITY_ETA, delta)

    @property
    def decision_threshold(self):
        return self.length / 4.0

    def accepts(self, d_tilde):
        return d_tilde < self.decision_threshold

    def run(self, x, y, rng):
        w = self.sketch_distance(x, y)
        est, ok = self.run_overlap(1.0 - w / self.length, rng)
        decision = EqualityDecision.EQUAL if ok else EqualityDecision.UNEQUAL
        return StepOutcome(decision, est, self.cost(), w)


def equality_sketch_size(n, fail=DEFAULT_MATRIX_FAIL):
    if not 0 < fail < 1:
        raise ValueError(f"fail must lie in (0, 1), got {fail}")
    return _sketch_rows(n, EQUALITY_ETA, fail)


def decide_threshold(x, y, params, A, delta, rng):
    """One threshold query: returns a :class:`StepOutcome` with a :class:`Decision`."""
    return ThresholdStep(params, A, delta).run(x, y, rng)


def decide_zero(x, y, delta, seed, rng, fail=DEFAULT_MATRIX_FAIL):
    """Equality query: returns a :class:`StepOutcome` with an :class:`EqualityDecision`."""
    if x.length != y.length:
        raise ValueError(f"length mismatch: {x.length} != {y.length}")
    return EqualityStep(x.length, delta, seed, fail).run(x, y, rng)
