import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k2sched.errors import ResampleCapExceeded
from k2sched.model import DeadlineModel, dumps
from k2sched.workload import (
    GenConfig,
    make_rng,
    make_taskset,
    multiprocessor_config,
    sample_periods,
    uunifast_discard,
)


def test_single_task():
    assert uunifast_discard(1, 0.7, make_rng(0)) == [0.7]


def test_heavy_target_respects_cap():
    # acceptance rate here is about 2e-5, beyond the default resample cap
    rng = make_rng(1)
    for _ in range(1000):
        us = uunifast_discard(4, 3.9, rng, cap=10**7)
        assert max(us) <= 1 and abs(sum(us) - 3.9) < 1e-9


def test_resample_cap():
    with pytest.raises(ResampleCapExceeded):
        uunifast_discard(4, 3.999, make_rng(2), cap=300)


def test_infeasible_target():
    with pytest.raises(ValueError):
        uunifast_discard(2, 2.5, make_rng(0))


@given(st.integers(1, 20), st.floats(0.01, 0.5), st.integers(0, 2**32))
def test_sum_matches_target(n, frac, seed):
    target = frac * n
    us = uunifast_discard(n, target, make_rng(seed))
    assert len(us) == n and abs(sum(us) - target) < 1e-9


@pytest.mark.parametrize("p, hi", [(1, 10), (2, 100), (3, 1000)])
def test_period_ranges(p, hi):
    ts = sample_periods(2000, p, make_rng(p))
    assert min(ts) >= 1 and max(ts) <= hi
    assert all(round(t, 4) == t for t in ts)


def test_log_periods_uniform():
    logs = np.log10(sample_periods(10_000, 2, make_rng(5))) / 2
    counts, _ = np.histogram(logs, bins=10, range=(0, 1))
    # each bucket expects 1000; 5 sigma is about 150
    assert np.all(np.abs(counts - 1000) < 150)


def test_determinism():
    cfg = GenConfig(10, 0.8, 2, "constrained_0.8_1.0", 42)
    assert dumps(make_taskset(cfg)) == dumps(make_taskset(cfg))
    assert dumps(make_taskset(cfg)) != dumps(make_taskset(GenConfig(10, 0.8, 2, "constrained_0.8_1.0", 43)))


def test_deadline_models():
    imp = make_taskset(GenConfig(10, 0.8, 1, "implicit", 0))
    assert imp.model is DeadlineModel.IMPLICIT and all(t.deadline == t.period for t in imp)
    con = make_taskset(GenConfig(10, 0.8, 1, "constrained_0.8_1.0", 0))
    assert all(0.8 <= t.deadline / t.period <= 1 for t in con)
    arb = make_taskset(GenConfig(10, 0.8, 1, "arbitrary_1.0_2.0", 0))
    assert arb.model is DeadlineModel.ARBITRARY
    assert all(1 <= t.deadline / t.period <= 2 for t in arb)


def test_dm_order_and_total_utilization():
    ts = make_taskset(GenConfig(12, 0.9, 1, "constrained_0.8_1.0", 3))
    ds = [t.deadline for t in ts]
    assert ds == sorted(ds)
    # periods are rounded after the utilizations are drawn, so C = T U keeps the sum exact
    assert math.isclose(ts.utilization, 0.9, abs_tol=1e-9)


def test_multiprocessor_preset():
    cfg = multiprocessor_config(4, 0.5)
    assert cfg.n == 20 and cfg.target_util == 2.0


@pytest.mark.parametrize("kwargs", [
    dict(n=0, target_util=0.5), dict(n=2, target_util=3), dict(n=2, target_util=0),
    dict(n=2, target_util=1, p=0), dict(n=2, target_util=1, deadline_model="weird"),
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        GenConfig(**kwargs)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 15), st.floats(0.05, 0.5), st.integers(0, 2**32))
def test_generated_sets_are_valid(n, frac, seed):
    ts = make_taskset(GenConfig(n, frac * n, 1, "implicit", seed))
    assert len(ts) == n and all(0 <= t.utilization <= 1 for t in ts)
