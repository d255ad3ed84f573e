import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsketch.bits import BitString
from qsketch.config import ProtocolConfig
from qsketch.ladder import (
    CostReport,
    HammingLadder,
    ProtocolResult,
    build_schedule,
    exact_failure_probability,
    output_distribution,
    per_step_failure,
    plan_cost,
    referee_output,
    run_ham_epsilon,
    within_relative_error,
)
from qsketch.seeding import derive_seed


def test_schedule_examples():
    assert build_schedule(10, 1).values == (0, 1, 2, 4, 8)
    assert build_schedule(1, 0.3).values == (0, 1)
    s = build_schedule(1000, 0.5)
    nz = s.values[1:]
    assert all(b / a == pytest.approx(1.5) for a, b in zip(nz, nz[1:]))
    assert nz[-1] <= 1000 < nz[-1] * 1.5


def test_schedule_warns_below_regime():
    with pytest.warns(UserWarning):
        build_schedule(1024, 0.01)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        build_schedule(1024, 0.5)


@given(st.floats(1, 1e6), st.floats(0.05, 2))
def test_schedule_stop_rule(stop, eps):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        vals = build_schedule(stop, eps).values
    assert len(vals) >= 2
    assert vals[-1] <= stop < vals[-1] * (1 + eps)


def test_per_step_failure_examples():
    assert per_step_failure(1, 0.05) == 0.05
    assert per_step_failure(5, 0.05) == pytest.approx(0.01)
    assert per_step_failure(10, 0.05) == pytest.approx(per_step_failure(5, 0.05) / 2)
    with pytest.raises(ValueError):
        per_step_failure(3, 1.0)


def test_relative_error_rule():
    assert within_relative_error(0, 0, 0.5)
    assert not within_relative_error(0.1, 0, 0.5)
    assert within_relative_error(1.5, 1, 0.5) and within_relative_error(0.5, 1, 0.5)
    assert not within_relative_error(1.51, 1, 0.5)


def perfect_answers(values, d, eps, rng):
    """Answers that are correct on both contracted sides; arbitrary inside the gap."""
    out = []
    for v in values:
        if d <= v:
            out.append(True)
        elif d >= (1 + eps) * v:
            out.append(False)
        else:
            out.append(bool(rng.integers(2)))
    return out


@pytest.mark.filterwarnings("ignore:eps=")
@pytest.mark.parametrize("eps", [0.25, 0.5, 1.0])
def test_sandwich_with_perfect_subroutine(eps):
    rng = np.random.default_rng(0)
    n = 8
    values = build_schedule(n, eps).values
    for x, y in itertools.product(range(2**n), repeat=2):
        d = bin(x ^ y).count("1")
        est = referee_output(values, perfect_answers(values, d, eps, rng), eps)
        assert d / (1 + eps) - 1e-9 <= est <= (1 + eps) * d + 1e-9
        assert within_relative_error(est, d, eps)


def test_all_reject_fallback():
    assert referee_output((0, 1, 2, 4), [False] * 4, 1.0) == 8


def test_output_distribution_sums_to_one():
    dist = output_distribution((0, 1, 2), [0.1, 0.5, 0.3], 1.0)
    assert sum(dist.values()) == pytest.approx(1.0)
    assert dist[0] == pytest.approx(0.1)
    assert dist[4] == pytest.approx(0.9 * 0.5 * 0.7)


@pytest.fixture(scope="module")
def ladder64():
    return HammingLadder(64, 0.5, setup_seed=derive_seed(1, "setup"))


def test_cost_identity(ladder64):
    report = ladder64.cost_report()
    assert report.qubits_total == sum(2 * s.copies_k * s.qubits_per_copy for s in report.steps)
    assert report.swap_tests_total == sum(s.copies_k for s in report.steps)
    assert report.copies_total == 2 * report.swap_tests_total


def test_equal_inputs_give_zero(ladder64):
    x = BitString.random(64, np.random.default_rng(2))
    for seed in range(10):
        r = run_ham_epsilon(x, x, 0.5, master_seed=seed, setup=ladder64)
        assert r.estimate == 0 and r.succeeded
    assert ladder64.failure_probability(x, x, 0) <= ladder64.delta


def test_run_is_reproducible():
    rng = np.random.default_rng(3)
    x = BitString.random(40, rng)
    y = x.flip([1, 2, 3])
    a = run_ham_epsilon(x, y, 0.5, master_seed=77)
    b = run_ham_epsilon(x, y, 0.5, master_seed=77)
    assert a.estimate == b.estimate and a.answers == b.answers


def test_distance_one_returns_one(ladder64):
    x = BitString.random(64, np.random.default_rng(4))
    y = x.flip([10])
    ests = [ladder64.run(x, y, s)[0] for s in range(50)]
    assert sum(e == 1 for e in ests) >= 45


@pytest.mark.parametrize("D", [0, 1, 3, 9, 30, 64])
def test_exact_failure_within_budget(ladder64, D):
    rng = np.random.default_rng(D)
    x = BitString.random(64, rng)
    y = x.flip(rng.choice(64, D, replace=False).tolist())
    assert ladder64.failure_probability(x, y, D) <= ladder64.config.total_fail
    assert ladder64.contracted_error_bound(x, y, D) <= ladder64.config.total_fail
    assert exact_failure_probability(x, y, 0.5, setup=ladder64) == ladder64.failure_probability(x, y, D)


def test_result_invariants():
    r = ProtocolResult(12.0, CostReport(0, 0, 0), 0.5, 10)
    assert r.succeeded and r.relative_error == pytest.approx(0.2)
    assert ProtocolResult(0.0, CostReport(0, 0, 0), 0.5, 0).succeeded
    assert ProtocolResult(1.0, CostReport(0, 0, 0), 0.5).succeeded is None


def test_plan_cost_grows_with_n():
    q = [plan_cost(n, 0.5).qubits_total for n in (256, 1024, 4096)]
    assert q[0] < q[1] < q[2]


def test_config_validation():
    with pytest.raises(ValueError):
        ProtocolConfig(total_fail=0)
    with pytest.raises(ValueError):
        ProtocolConfig(jl_eps=0.6)
    with pytest.raises(ValueError):
        HammingLadder(0, 0.5)
