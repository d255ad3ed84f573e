"""Greater-than from an approximate absolute-difference oracle.

A MOD oracle answers ``|a - b|`` within relative error ``eps``.  Two calls
decide GT: ``z0 = |x - y|`` approximately, then ``z1`` on ``(x, y + z0)``.
If ``x < y`` the second difference grows to roughly ``2|x - y|``; if
``x >= y`` it collapses to at most ``eps |x - y|``.  The gap survives the
oracle error for ``eps < 1/4``.  All arithmetic uses exact fractions.
"""

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import path_graph
from .seeding import derive_rng

EPS_LIMIT = Fraction(1, 4)


class OracleMode(enum.Enum):
    EXACT = "exact"
    RANDOM_RELATIVE = "random"
    ADVERSARIAL_LOW = "low"
    ADVERSARIAL_HIGH = "high"


@dataclass
class ModOracle:
    """Answers ``|a - b|`` scaled by a factor in ``[1 - eps, 1 + eps]``; counts calls."""

    mode: OracleMode
    eps: Fraction = Fraction(0)
    seed: int = 0
    calls: int = 0
    _rng: object = field(default=None, repr=False)

    def __post_init__(self):
        self.mode = OracleMode(self.mode)
        self.eps = Fraction(self.eps)
        if self.mode is OracleMode.EXACT:
            self.eps = Fraction(0)
        if not 0 <= self.eps < 1:
            raise ValueError("oracle eps must lie in [0, 1)")
        self._rng = derive_rng(self.seed, "mod-oracle")

    def factor(self):
        if self.mode is OracleMode.ADVERSARIAL_LOW:
            return 1 - self.eps
        if self.mode is OracleMode.ADVERSARIAL_HIGH:
            return 1 + self.eps
        if self.mode is OracleMode.RANDOM_RELATIVE:
            u = Fraction(float(self._rng.uniform(-1.0, 1.0)))
            return 1 + max(-1, min(1, u)) * self.eps
        return Fraction(1)

    def __call__(self, a, b):
        self.calls += 1
        return abs(Fraction(a) - Fraction(b)) * self.factor()


def gt(x, y):
    return 1 if x >= y else 0


def gt_via_mod(x, y, oracle, eps):
    """Decide ``x >= y`` with two oracle calls; ties output 1."""
    eps = Fraction(eps)
    if not 0 <= eps < EPS_LIMIT:
        raise ValueError(f"eps must lie in [0, 1/4), got {float(eps):g}")
    if getattr(oracle, "eps", 0) > eps:
        raise ValueError("oracle error exceeds eps")
    z0 = oracle(x, y)
    z1 = oracle(x, y + z0)
    return 0 if z0 < z1 else 1


def lower_case_margin(eps):
    """Gap ``(2-eps)(1-eps) - (1+eps)`` (per unit ``|x-y|``) when ``x < y``; positive iff ``eps < 2 - sqrt 3``."""
    return (2 - eps) * (1 - eps) - (1 + eps)


def upper_case_margin(eps):
    """Gap ``(1-eps) - eps(1+eps)`` when ``x >= y``; non-negative iff ``eps <= sqrt 2 - 1``."""
    return (1 - eps) - eps * (1 + eps)


LOWER_CASE_LIMIT = 2 - math.sqrt(3)
UPPER_CASE_LIMIT = math.sqrt(2) - 1


def path_graph_instance(m):
    """Path on ``2^m`` vertices; vertex ``i`` carries the integer ``i``, so distance is ``|x_i - x_j|``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    n = 2**m
    return path_graph(n), tuple(range(n))


def correctness_table(m, eps, modes, seed=0):
    """Exhaustive agreement of :func:`gt_via_mod` with GT over all ``m``-bit pairs, per oracle mode."""
    rows = []
    for mode in modes:
        oracle = ModOracle(mode, eps, seed)
        agree = total = 0
        for x in range(2**m):
            for y in range(2**m):
                agree += gt_via_mod(x, y, oracle, eps) == gt(x, y)
                total += 1
        rows.append(
            {
                "mode": OracleMode(mode).value,
                "eps": float(oracle.eps),
                "pairs": total,
                "agree": agree,
                "calls_per_decision": oracle.calls / total,
            }
        )
    return rows
