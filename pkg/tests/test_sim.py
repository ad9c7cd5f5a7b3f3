from fractions import Fraction as F
import math

import pytest

from barelyrandom.core import Instance, make_interval, schedule_feasible
from barelyrandom.generators import fig1a, single_interval
from barelyrandom.policies import make_pair
from barelyrandom.sim import (ClassMismatch, PolicyContractViolation, PolicyPair,
                              ReleaseInPast, Simulation, StepCapExceeded,
                              accepted_per_slot, ratio, run_adaptive, run_mixture,
                              run_online, unit_slots)


class StartIfIdle:
    """Starts any arrival when nothing is running."""
    name = "idle-start"
    classes = None

    def reset(self):
        self.seen = []

    def on_arrival(self, now, job, state):
        self.seen.append((now, job.id, state.running_job and state.running_job.id))
        return job.id if state.running is None else None

    def on_wakeup(self, now, state):
        return None


class Liar(StartIfIdle):
    def on_arrival(self, now, job, state):
        return "ghost"


class Never(StartIfIdle):
    def on_arrival(self, now, job, state):
        return None


def test_completion_precedes_arrival_at_same_time():
    a, b = make_interval(0, 1, 1, "a"), make_interval(1, 1, 1, "b")
    pol = StartIfIdle()
    tr = run_online(Instance((a, b), "EqualLengthIntervals"), pol)
    assert tr.value == 2
    # b sees an idle machine at time 1
    assert pol.seen[1] == (1, "b", None)


def test_simultaneous_arrivals_ordered_by_weight_then_id():
    jobs = (make_interval(0, 1, 2, "z"), make_interval(0, 1, 1, "y"),
            make_interval(0, 1, 2, "a"))
    pol = StartIfIdle()
    run_online(Instance(jobs, "EqualLengthIntervals"), pol)
    assert [s[1] for s in pol.seen] == ["y", "a", "z"]


def test_contract_violation():
    with pytest.raises(PolicyContractViolation):
        run_online(single_interval(), Liar())


def test_class_mismatch():
    with pytest.raises(ClassMismatch):
        run_mixture(fig1a(), make_pair("ran"))


def test_engine_traces_are_feasible():
    inst = fig1a()
    for role in (make_pair("ran-j").a, make_pair("ran-j").b):
        tr = run_online(inst, role)
        assert schedule_feasible(tr, inst).ok


def test_ratio_idle_and_empty():
    assert ratio(F(3), F(0)) == math.inf
    assert ratio(F(0), F(0)) == 1
    assert ratio(F(3), F(2)) == F(3, 2)


def test_incremental_release_matches_batch():
    jobs = [make_interval(F(k, 3), 1, k % 4 + 1, f"j{k}") for k in range(9)]
    whole = Simulation(StartIfIdle(), jobs)
    whole.drain()
    part = Simulation(StartIfIdle(), jobs[:4])
    part.run_until(jobs[3].r)
    part.release(jobs[4:])
    part.drain()
    assert whole.trace() == part.trace()


def test_accepted_per_slot():
    inst = fig1a()
    tr = run_online(inst, make_pair("ran-j").b)
    assert accepted_per_slot(tr, unit_slots(3)) == {2: "X"}


class Script:
    """Adversary that releases fixed batches, one per round."""

    def __init__(self, batches):
        self.batches = list(batches)

    def next(self, obs):
        return self.batches.pop(0) if self.batches else None


def test_adaptive_empty_release():
    res = run_adaptive(Script([]), make_pair("ran"))
    assert res.released_count == 0 and res.expected == 0
    assert len(res.instance) == 0


def test_adaptive_single_interval_vs_ran():
    res = run_adaptive(Script([[make_interval(0, 1, 1, "I")]]), make_pair("ran"))
    assert (res.val_a, res.val_b, res.expected) == (1, 0, F(1, 2))


def test_adaptive_rejects_past_release():
    batches = [[make_interval(1, 1, 1, "a")], [make_interval(1, 1, 1, "b")]]
    with pytest.raises(ReleaseInPast):
        run_adaptive(Script(batches), make_pair("ran"))


def test_adaptive_step_cap():
    batches = [[make_interval(k + 1, 1, 1, f"i{k}")] for k in range(5)]
    with pytest.raises(StepCapExceeded):
        run_adaptive(Script(batches), make_pair("ran"), step_cap=3)


def test_adversary_observes_running_jobs():
    seen = []

    class Spy(Script):
        def next(self, obs):
            seen.append(obs)
            return super().next(obs)

    run_adaptive(Spy([[make_interval(F(1, 4), 1, 1, "I")]]), make_pair("ran"))
    assert seen[-1].clock == F(1, 4)
    assert seen[-1].running_a.id == "I" and seen[-1].running_b is None


def test_pair_probability_bounds():
    with pytest.raises(ValueError):
        PolicyPair(Never(), Never(), F(0))
    p = PolicyPair(Never(), Never(), F(1, 4))
    assert p.expected(F(4), F(8)) == 7
