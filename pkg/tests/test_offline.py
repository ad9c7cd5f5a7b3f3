from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from barelyrandom.core import Instance, Job, make_interval, schedule_feasible
from barelyrandom.generators import GenParams, bad_slot_example, fig1a, gen_instance
from barelyrandom.offline import (NotIntervals, TooLarge, brute_force_intervals,
                                  brute_force_jobs, opt_equal_jobs, opt_intervals,
                                  opt_value)


def test_touching_intervals_are_disjoint():
    jobs = (make_interval(0, 1, 1, "a"), make_interval(1, 1, 1, "b"),
            make_interval(F(1, 2), 1, F(3, 2), "c"))
    res = opt_intervals(Instance(jobs, "EqualLengthIntervals"))
    assert res.value == 2
    assert {j.id for j in res.chosen} == {"a", "b"}


def test_fig1a_opt(eps):
    res = opt_equal_jobs(fig1a(eps))
    assert res.value == 3 + eps
    assert schedule_feasible(res.witness, fig1a(eps)).ok


def test_bad_slot_example_opt_witness_is_optimal():
    inst, tr = bad_slot_example()
    assert schedule_feasible(tr, inst).value == opt_value(inst) == F(303, 100)


def test_non_interval_rejected():
    with pytest.raises(NotIntervals):
        opt_intervals(fig1a())


def test_size_caps():
    jobs = tuple(Job(f"j{i}", 0, 20, 1, 1) for i in range(13))
    with pytest.raises(TooLarge):
        opt_equal_jobs(Instance(jobs, "EqualLengthJobs"))
    with pytest.raises(TooLarge):
        brute_force_jobs(Instance(jobs, "EqualLengthJobs"))


def test_empty():
    assert opt_equal_jobs(Instance((), "EqualLengthJobs")).value == 0
    assert opt_intervals(Instance((), "Monotone")).value == 0


@given(seed=st.integers(0, 2**30), n=st.integers(0, 10),
       cls=st.sampled_from(["EqualLengthIntervals", "Monotone"]))
def test_interval_dp_matches_brute_force(seed, n, cls):
    inst = gen_instance(cls, GenParams(n=n, seed=seed, horizon=F(max(n, 1), 2)))
    res = opt_intervals(inst)
    assert res.value == brute_force_intervals(inst)
    assert schedule_feasible(res.witness, inst).value == res.value


@given(seed=st.integers(0, 2**30), n=st.integers(0, 6))
def test_job_dp_matches_brute_force(seed, n):
    inst = gen_instance("EqualLengthJobs", GenParams(n=n, seed=seed, horizon=F(max(n, 1), 2)))
    res = opt_equal_jobs(inst)
    assert res.value == brute_force_jobs(inst)
    rep = schedule_feasible(res.witness, inst)
    assert rep.ok and rep.value == res.value


@given(st.lists(st.integers(1, 9), min_size=1, max_size=8))
def test_all_overlapping_picks_max(ws):
    jobs = tuple(make_interval(F(k, 16), 1, w, f"i{k}") for k, w in enumerate(ws))
    assert opt_intervals(Instance(jobs, "EqualLengthIntervals")).value == max(ws)
