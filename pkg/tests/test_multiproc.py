import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from k2sched.errors import ModelMismatch
from k2sched.k2q import K2QTerm, quadratic_rhs, uniform_quadratic_rhs
from k2sched.k2u import K2UTerm, extreme_point_rhs, hyperbolic_rhs
from k2sched.model import TaskSet
from k2sched.multiproc import (
    CAPACITY_AUGMENTATION,
    bc2_terms,
    bounded_carryin_pseudo,
    capacity_augmentation_check,
    carry_in_set,
    greedy_carryin_pseudo,
    hp_bc2_test,
    hp_bc_ep_test,
    hp_bc_test,
    hp_gc_test,
    qb_bc_test,
    qb_ff2_test,
    qb_ff_test,
)
from k2sched.uniproc import qb_test, tda_exact
from k2sched.verdict import Status
from k2sched.workload import multiprocessor_config, make_taskset

POLY = (hp_gc_test, hp_bc_test, hp_bc2_test, hp_bc_ep_test, qb_bc_test, qb_ff_test, qb_ff2_test)


def rows(ts):
    return [(t.wcet, t.period, t.deadline) for t in ts]


def test_model_checks():
    with pytest.raises(ModelMismatch):
        greedy_carryin_pseudo(TaskSet.from_tuples([(1, 4, 3), (1, 5, 5)]), 1, 1)
    with pytest.raises(ModelMismatch):
        hp_gc_test(TaskSet.from_tuples([(1, 5), (1, 4)]), 1, 1)
    with pytest.raises(ValueError):
        hp_gc_test(TaskSet.from_tuples([(1, 5)]), 0, 0)


@pytest.mark.parametrize("test", POLY + (greedy_carryin_pseudo, bounded_carryin_pseudo))
def test_fewer_than_m_higher_tasks_is_trivial(test):
    ts = TaskSet.from_tuples([(0.9, 1), (0.9, 2), (1.0, 3)])
    assert all(test(ts, k, 3).schedulable for k in range(3))


def test_greedy_example():
    ts = TaskSet.from_tuples([(1, 4), (1, 10)])
    assert greedy_carryin_pseudo.__wrapped__(ts, 1, 2).schedulable
    assert oracles.carry_in_point_test(rows(ts), 1, 1, bounded=False)


def test_greedy_overload():
    ts = TaskSet.from_tuples([(0.9, 1), (0.9, 1.1), (0.9, 1.2)])
    assert not greedy_carryin_pseudo(ts, 2, 1).schedulable


def test_bounded_m1_is_tda():
    ts = TaskSet.from_tuples([(1, 4), (2, 6), (2, 12)])
    for k in range(3):
        assert bounded_carryin_pseudo(ts, k, 1).schedulable == tda_exact(ts, k).schedulable


def test_hp_gc_examples():
    assert hp_gc_test(TaskSet.from_tuples([(1, 1)]), 0, 1).schedulable
    ts = TaskSet.from_tuples([(0.1, 1), (0.1, 1.1), (0.1, 1.2), (0.5, 2)])
    v = hp_gc_test.__wrapped__(ts, 3, 4)
    assert v.schedulable
    assert (0.5 + 2) * 1.025 ** 3 == pytest.approx(2.692, abs=1e-3)
    full = TaskSet.from_tuples([(0.1, 1), (0.1, 1.1), (2, 2)])
    assert not hp_gc_test(full, 2, 2).schedulable


def test_hp_bc_carry_in_selection():
    ts = TaskSet.from_tuples([(3, 5), (1, 6), (1, 10)])
    assert [t.id for t in carry_in_set(ts.higher(2), 2)] == [0]
    # C_k' = 1 + 3/2 = 2.5, alpha = beta = 1/2
    v = hp_bc_test(ts, 2, 2)
    expected = 2 / ((0.6 / 2 + 1) * (1 / 6 / 2 + 1)) - 1
    assert v.bound == pytest.approx(expected)
    assert v.schedulable == (0.25 <= expected)


def test_hp_bc_m1_is_hyperbolic():
    ts = TaskSet.from_tuples([(0.3, 1), (0.6, 2)])
    assert hp_bc_test(ts, 1, 1).bound == pytest.approx(hyperbolic_rhs([0.3], 1, 1))


def test_hp_bc2_example():
    terms = bc2_terms([0.4, 0.2], 2)
    assert [t.alpha for t in terms] == [0.5, 1.0]
    rhs = extreme_point_rhs(terms)
    assert rhs == pytest.approx(1 - 0.2 / (1.1 * 1.2) - 0.4 * 1.5 / 1.2)
    # the other assignment gives a larger (weaker) RHS
    other = [K2UTerm(1.0, 0.5, 0.2), K2UTerm(0.5, 0.5, 0.4)]
    assert rhs <= extreme_point_rhs(other)
    assert hp_bc2_test(TaskSet.from_tuples([(1, 1)]), 0, 2).schedulable


def test_hp_bc2_m1_is_uniform_extreme_point():
    terms = bc2_terms([0.1, 0.3, 0.2], 1)
    assert all(t.alpha == 1 and t.beta == 1 for t in terms)


def test_bc2_assignment_is_worst_case_brute_force():
    import random
    rng = random.Random(11)
    for _ in range(200):
        m = rng.randint(2, 4)
        us = [rng.uniform(0.01, 0.5) for _ in range(rng.randint(m, 6))]
        ours = extreme_point_rhs(bc2_terms(us, m))
        for carry in itertools.combinations(range(len(us)), m - 1):
            for perm in itertools.permutations(range(len(us))):
                terms = [K2UTerm((2.0 if i in carry else 1.0) / m, 1.0 / m, us[i]) for i in perm]
                assert ours <= extreme_point_rhs(terms) + 1e-12


def test_hp_bc_ep_coefficients():
    # all T_i = T_k / 2 gives the same RHS as HP-BC2
    ts = TaskSet.from_tuples([(0.1, 1), (0.3, 1), (0.2, 1), (0.5, 2)])
    assert hp_bc_ep_test(ts, 3, 2).bound == pytest.approx(hp_bc2_test(ts, 3, 2).bound)
    # T_i = T_k / 3 halves beta
    ts = TaskSet.from_tuples([(0.1, 1), (0.1, 1), (0.3, 3)])
    v = hp_bc_ep_test(ts, 2, 2)
    # carry-in task (id 0) gets alpha = (1 + 1/2)/2, the other 1/2; beta = 1/4
    terms = [K2UTerm(0.75, 0.25, 0.1), K2UTerm(0.5, 0.25, 0.1)]
    assert v.bound == pytest.approx(extreme_point_rhs(terms))


def test_qb_bc_examples():
    ts = TaskSet.from_tuples([(1, 4), (1, 5), (2, 10)])
    v = qb_bc_test(ts, 2, 2)
    # last releases: T=5 at t=5, T=4 at t=8
    terms = [K2QTerm(0.5, 0.5, 0.2, 1), K2QTerm(0.5, 0.5, 0.25, 1)]
    c_prime = 2 + 1 / 2
    assert v.bound == pytest.approx(quadratic_rhs(terms, 10))
    assert v.schedulable == (c_prime / 10 <= v.bound)
    big = TaskSet.from_tuples([(0.9, 1), (0.95, 1.05), (1.0, 1.1), (0.1, 1.2)])
    assert qb_bc_test(big, 3, 1).status is Status.INAPPLICABLE


def test_qb_bc_m1_matches_uniprocessor_qb():
    ts = TaskSet.from_tuples([(0.5, 2), (1, 5), (1.5, 12)])
    for k in range(3):
        assert qb_bc_test(ts, k, 1).schedulable == qb_test(ts, k).schedulable


def test_qb_ff_formula_example():
    rhs = quadratic_rhs([K2QTerm(0.5, 0.5, 0.2, 2)], 10)
    assert rhs == pytest.approx(0.81)
    assert 0.3 <= rhs


def test_qb_ff_saturated():
    ts = TaskSet.from_tuples([(0.1, 1), (0.1, 1.5), (3, 3)])
    assert not qb_ff_test(ts, 2, 2).schedulable


def test_qb_ff2_examples():
    assert uniform_quadratic_rhs([0.2, 0.2], 0.5, 0.5) == pytest.approx(0.63)
    ts = TaskSet.from_tuples([(0.2, 1), (0.22, 1.1), (0.36, 1.2)])
    assert qb_ff2_test(ts, 2, 2).schedulable
    assert uniform_quadratic_rhs([], 0.5, 0.5) == 1.0
    k = 10**6
    assert abs((2 - math.sqrt(2 + 2 * k / (k - 1))) / (k / (k - 1))) < 1e-5


def test_capacity_augmentation_examples():
    limit = 1 / CAPACITY_AUGMENTATION
    assert CAPACITY_AUGMENTATION == pytest.approx(2.823, abs=1e-3)
    assert capacity_augmentation_check(TaskSet.from_tuples([]), 2).schedulable
    u = 0.354
    assert u < limit
    ts = TaskSet.from_tuples([(u, 1), (u * 2, 2), (u * 3, 3)])
    assert capacity_augmentation_check(ts, 3).schedulable
    assert all(qb_ff2_test(ts, k, 3).schedulable for k in range(3))
    assert not capacity_augmentation_check(TaskSet.from_tuples([(0.5, 1)]), 2).schedulable


# -- properties ---------------------------------------------------------------------

def gen(m, u, seed):
    return make_taskset(multiprocessor_config(m, u, 1, seed))


msets = st.builds(gen, st.integers(2, 4), st.floats(0.1, 0.8), st.integers(0, 2**32))


@settings(max_examples=100, deadline=None)
@given(msets, st.data())
def test_pseudo_tests_match_point_enumeration(ts, data):
    m = len(ts) // 5
    for k in range(len(ts)):
        assert greedy_carryin_pseudo(ts, k, m).schedulable == \
            oracles.carry_in_point_test(rows(ts), k, m, bounded=False)
        assert bounded_carryin_pseudo(ts, k, m).schedulable == \
            oracles.carry_in_point_test(rows(ts), k, m, bounded=True)


@settings(max_examples=100, deadline=None)
@given(msets)
def test_polynomial_tests_sound_against_pseudo(ts):
    m = len(ts) // 5
    for k in range(len(ts)):
        greedy = greedy_carryin_pseudo(ts, k, m).schedulable
        bounded = bounded_carryin_pseudo(ts, k, m).schedulable
        assert bounded or not greedy
        if hp_gc_test(ts, k, m).schedulable:
            assert greedy
        for test in (hp_bc_test, hp_bc2_test, hp_bc_ep_test, qb_bc_test):
            if test(ts, k, m).schedulable:
                assert bounded, test.__name__


@settings(max_examples=100, deadline=None)
@given(msets)
def test_hp_bc_ep_dominates_hp_bc2(ts):
    m = len(ts) // 5
    for k in range(len(ts)):
        if hp_bc2_test(ts, k, m).schedulable:
            assert hp_bc_ep_test(ts, k, m).schedulable


def test_qb_ff_and_qb_bc_are_incomparable():
    ff_only = bc_only = 0
    for seed in range(3000):
        ts = gen(2, 0.5 + (seed % 30) / 100, seed)
        for k in range(2, len(ts)):
            ff = qb_ff_test(ts, k, 2).schedulable
            bc = qb_bc_test(ts, k, 2).schedulable
            ff_only += ff and not bc
            bc_only += bc and not ff
        if ff_only and bc_only:
            break
    assert ff_only > 0 and bc_only > 0


def test_equal_periods_are_analysed():
    ts = TaskSet.from_tuples([(0.2, 2), (0.3, 2), (0.2, 2), (0.4, 2)])
    for test in POLY:
        v = test(ts, 3, 2)
        assert v.status is not Status.INAPPLICABLE, test.__name__
        if v.schedulable:
            assert bounded_carryin_pseudo(ts, 3, 2).schedulable
