"""Approximate Hamming distance by a geometric ladder of threshold queries.

The referee queries thresholds ``0, 1, 1+eps, (1+eps)^2, ...`` and outputs
the smallest one whose query answered "at most".  If every query is correct
on its side of the gap, the output lies in ``[d/(1+eps), (1+eps)d]``.
"""

import math
import warnings
from dataclasses import dataclass, field

from .bits import ColumnCache
from .config import DEFAULT_CONFIG
from .seeding import derive_rng, derive_seed
from .sketch import Decision, EqualityDecision, EqualityStep, ThresholdParams, ThresholdStep, sample_sparse_matrix


@dataclass(frozen=True)
class LadderSchedule:
    eps: float
    values: tuple
    stop_bound: float

    def __len__(self):
        return len(self.values)


def build_schedule(stop_bound, eps):
    """``[0, 1, 1+eps, ..., (1+eps)^K]`` with ``K`` minimal such that ``(1+eps)^(K+1) > stop_bound``."""
    if stop_bound < 1:
        raise ValueError(f"stop_bound must be >= 1, got {stop_bound}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if stop_bound > 1 and eps < 1.0 / math.log2(stop_bound):
        warnings.warn(
            f"eps={eps} is below 1/log2({stop_bound}); cost bounds assume larger eps",
            stacklevel=2,
        )
    values = [0.0, 1.0]
    ratio = 1.0 + eps
    while values[-1] * ratio <= stop_bound:
        values.append(values[-1] * ratio)
    return LadderSchedule(eps, tuple(values), stop_bound)


def per_step_failure(schedule_len, total_fail):
    if not 0 < total_fail < 1:
        raise ValueError("total_fail must lie in (0, 1)")
    if schedule_len < 1:
        raise ValueError("schedule_len must be positive")
    return total_fail / schedule_len


@dataclass(frozen=True)
class CostReport:
    qubits_total: int
    copies_total: int
    swap_tests_total: int
    steps: tuple = ()

    @classmethod
    def from_steps(cls, steps):
        steps = tuple(steps)
        return cls(
            qubits_total=sum(s.qubits for s in steps),
            copies_total=sum(2 * s.copies_k for s in steps),
            swap_tests_total=sum(s.copies_k for s in steps),
            steps=steps,
        )

    def to_dict(self):
        return {
            "qubits_total": self.qubits_total,
            "copies_total": self.copies_total,
            "swap_tests_total": self.swap_tests_total,
            "steps": [s.to_dict() for s in self.steps],
        }


def within_relative_error(estimate, true, eps, tol=1e-9):
    if true == 0:
        return estimate == 0
    return (1 - eps) * true * (1 - tol) <= estimate <= (1 + eps) * true * (1 + tol)


@dataclass(frozen=True)
class ProtocolResult:
    estimate: float
    cost: CostReport
    eps: float
    true_distance: float = None
    answers: tuple = field(default=(), repr=False)

    @property
    def succeeded(self):
        if self.true_distance is None:
            return None
        return within_relative_error(self.estimate, self.true_distance, self.eps)

    @property
    def relative_error(self):
        if self.true_distance is None or self.true_distance == 0:
            return None
        return abs(self.estimate - self.true_distance) / self.true_distance

    def to_dict(self, include_steps=False):
        out = {
            "estimate": self.estimate,
            "true_distance": self.true_distance,
            "relative_error": self.relative_error,
            "succeeded": self.succeeded,
            "answers": list(self.answers),
            "cost": {k: v for k, v in self.cost.to_dict().items() if include_steps or k != "steps"},
        }
        return out


def referee_output(values, accepted, eps):
    """Smallest accepted value; ``values[-1] * (1+eps)`` when nothing accepted."""
    for v, ok in zip(values, accepted):
        if ok:
            return v
    return values[-1] * (1.0 + eps)


def output_distribution(values, accept_probs, eps):
    """Exact law of the referee output when steps answer independently."""
    dist, none = {}, 1.0
    for v, p in zip(values, accept_probs):
        dist[v] = dist.get(v, 0.0) + none * p
        none *= 1.0 - p
    fallback = values[-1] * (1.0 + eps)
    dist[fallback] = dist.get(fallback, 0.0) + none
    return dist


class HammingLadder:
    """A fixed protocol instance: schedule, sketch matrices and copy counts.

    The matrices are agreed in advance and derived from ``setup_seed``; swap
    tests draw fresh randomness per run.  ``scale`` converts schedule units to
    Hamming units (1 for strings, ``k`` for scale-``k`` graph embeddings) and
    ``stop_bound`` is given in schedule units.
    """

    def __init__(self, n, eps, config=DEFAULT_CONFIG, setup_seed=0, scale=1, stop_bound=None):
        if n < 1:
            raise ValueError("input length must be positive")
        self.n = n
        self.eps = eps
        self.config = config
        self.setup_seed = int(setup_seed)
        self.scale = scale
        self.schedule = build_schedule(n if stop_bound is None else stop_bound, eps)
        self.delta = per_step_failure(len(self.schedule), config.total_fail)
        self.cache = ColumnCache(config.cache_bytes)
        self.steps = [
            EqualityStep(n, self.delta, derive_seed(self.setup_seed, "equality"), config.matrix_fail, self.cache)
        ]
        for s, value in enumerate(self.schedule.values[1:], start=1):
            params = ThresholdParams.build(scale * value, eps, n, config.matrix_fail)
            matrix_seed = derive_seed(self.setup_seed, "threshold", s)
            A = sample_sparse_matrix(params.N, n, params.d, matrix_seed, self.cache)
            self.steps.append(ThresholdStep(params, A, self.delta, value=value))

    @property
    def values(self):
        return self.schedule.values

    def step_overlap(self, s, x, y):
        step = self.steps[s]
        return 1.0 - step.sketch_distance(x, y) / step.length

    def step_cost(self, s):
        return self.steps[s].cost()

    def cost_report(self):
        return CostReport.from_steps(self.step_cost(s) for s in range(len(self.steps)))

    def _check(self, x, y):
        if x.length != self.n or y.length != self.n:
            raise ValueError(f"inputs must have length {self.n}")

    def run(self, x, y, master_seed):
        """Simulate one run; returns ``(estimate_in_schedule_units, answers)``."""
        self._check(x, y)
        accepted, answers = [], []
        for s, step in enumerate(self.steps):
            rng = derive_rng(master_seed, "swap", s)
            _, ok = step.run_overlap(self.step_overlap(s, x, y), rng)
            accepted.append(ok)
            if s == 0:
                answers.append((EqualityDecision.EQUAL if ok else EqualityDecision.UNEQUAL).value)
            else:
                answers.append((Decision.AT_MOST_D if ok else Decision.AT_LEAST_SCALED_D).value)
        return referee_output(self.values, accepted, self.eps), tuple(answers)

    def accept_probabilities(self, x, y):
        self._check(x, y)
        return [step.accept_probability(self.step_overlap(s, x, y)) for s, step in enumerate(self.steps)]

    def failure_probability(self, x, y, true_distance):
        """Exact probability (given this setup) that the output misses ``true_distance`` by more than eps."""
        dist = output_distribution(self.values, self.accept_probabilities(x, y), self.eps)
        return sum(p for v, p in dist.items() if not within_relative_error(v, true_distance, self.eps))

    def contracted_error_bound(self, x, y, true_distance):
        """Union bound over steps whose answer is forced by the gap contract."""
        total = 0.0
        for v, p in zip(self.values, self.accept_probabilities(x, y)):
            if true_distance <= v:
                total += 1.0 - p
            elif true_distance >= (1.0 + self.eps) * v:
                total += p
        return total


def run_ham_epsilon(x, y, eps, config=DEFAULT_CONFIG, master_seed=0, setup=None):
    """Estimate ``d(x, y)`` to relative error ``eps``.

    Without ``setup`` the sketch matrices are derived from ``master_seed``;
    pass a :class:`HammingLadder` to reuse a fixed protocol across runs.
    """
    if x.length != y.length:
        raise ValueError(f"length mismatch: {x.length} != {y.length}")
    if setup is None:
        setup = HammingLadder(x.length, eps, config, derive_seed(master_seed, "setup"))
    estimate, answers = setup.run(x, y, master_seed)
    true = (x.value ^ y.value).bit_count()
    return ProtocolResult(estimate, setup.cost_report(), eps, true, answers)


def exact_failure_probability(x, y, eps, config=DEFAULT_CONFIG, master_seed=0, setup=None):
    """Failure probability of :func:`run_ham_epsilon` over swap-test randomness, by binomial sums."""
    if setup is None:
        setup = HammingLadder(x.length, eps, config, derive_seed(master_seed, "setup"))
    return setup.failure_probability(x, y, (x.value ^ y.value).bit_count())


def plan_cost(n, eps, config=DEFAULT_CONFIG):
    """Cost report of the protocol on ``n``-bit inputs; no matrix is generated."""
    return HammingLadder(n, eps, config).cost_report()
