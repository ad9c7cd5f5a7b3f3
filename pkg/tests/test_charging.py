from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from barelyrandom.charging import (BACKWARD, DOWNWARD, SELF, ChargeLedger, ChargingFailure,
                                   InstanceMismatch, PairingFailure, SlotClass,
                                   charging_report, classify_slots, compute_charges,
                                   owner, pair_bad_slots, slot_of, verify_ratio)
from barelyrandom.core import Instance, Job, Trace, trace_from_runs
from barelyrandom.generators import GenParams, bad_slot_example, fig1a, gen_instance


def test_slots_and_owners():
    assert [slot_of(t) for t in (F(0), F(1, 2), F(1), F(7, 2))] == [1, 1, 2, 4]
    assert owner(1) == 0 and owner(2) == 1
    with pytest.raises(InstanceMismatch):
        slot_of(F(-1, 2))


def test_fig1a_charges(eps):
    led, cls, pairing, rep = charging_report(fig1a(eps))
    assert rep.ok and not cls.bad
    assert led.total() == led.opt_value == 3 + eps
    # every slot stays at or below 1.5 units
    assert all(led.units(s) <= F(3, 2) for s in led.slots())
    assert rep.ratio == (3 + eps) / (2 + 2 * eps)


def test_hand_built_downward_self_backward():
    j, k = Job("j", 0, 5, 1, 2), Job("k", 2, 3, 1, 3)
    inst = Instance((j, k), "EqualLengthJobs")
    a = trace_from_runs([(k, F(2))])
    b = trace_from_runs([(j, F(1))])
    opt = trace_from_runs([(k, F(2)), (j, F(3))])
    led = compute_charges(opt, a, b, inst)
    assert led.charges[3][DOWNWARD].job == "k"
    assert led.charges[2][SELF].job == "j" and led.charges[2][SELF].weight == 1
    assert led.charges[3][BACKWARD].job == "j"
    assert led.units(3) == F(3, 2)
    cls = classify_slots(led)
    assert cls.kind == {2: "Good", 3: "Mid"}
    assert verify_ratio(led, pair_bad_slots(led, cls), cls).ok


def test_bad_slot_example_pairs_with_good_slot():
    inst, opt = bad_slot_example()
    led, cls, pairing, rep = charging_report(inst, opt)
    assert cls.bad == {5: ("X", "Y")}
    assert {led.has(5, k) for k in (DOWNWARD, SELF, BACKWARD)} == {True}
    assert pairing.pairs == {5: 4} and pairing.substep == {5: 1}
    assert rep.ok and led.total() == F(303, 100)


def test_empty_opt_gives_empty_ledger():
    inst = Instance((), "EqualLengthJobs")
    led = compute_charges(Trace(), Trace(), Trace(), inst)
    assert led.slots() == [] and led.total() == 0


def test_trace_for_other_instance_rejected():
    inst = fig1a()
    ghost = Job("Q", 0, 3, 1, 1)
    with pytest.raises(InstanceMismatch):
        compute_charges(trace_from_runs([(ghost, F(0))]), Trace(), Trace(), inst)


def test_wrong_owner_rejected():
    inst = fig1a()
    x = inst.by_id()["X"]
    # slot 2 belongs to B, not A
    with pytest.raises(InstanceMismatch):
        compute_charges(Trace(), trace_from_runs([(x, F(1))]), Trace(), inst)


def test_pairing_failure_on_foreign_ledger():
    x, y = Job("X", 0, 9, 1, 1), Job("Y", 0, 9, 1, 1)
    led = ChargeLedger(accepted={3: x}, opt={4: y})
    led.acc_slot = [{"X": 3}, {}]
    cls = SlotClass({3: "Bad"}, {3: ("X", "Y")})
    with pytest.raises(PairingFailure):
        pair_bad_slots(led, cls)


def test_bad_slot_needs_backward():
    from barelyrandom.charging import Charge
    led = ChargeLedger()
    led.charges[1] = {DOWNWARD: Charge(DOWNWARD, 1, "a", F(1), 1),
                      SELF: Charge(SELF, 1, "b", F(1, 2), 3)}
    led.charges[1]["other"] = Charge(SELF, 1, "c", F(1, 2), 5)
    with pytest.raises(ChargingFailure):
        classify_slots(led)


@given(seed=st.integers(0, 2**30), n=st.integers(1, 9),
       near=st.booleans())
def test_charging_conserves_opt(seed, n, near):
    wr = (F(1), F(11, 10)) if near else (F(1), F(10))
    inst = gen_instance("EqualLengthJobs", GenParams(
        n=n, seed=seed, horizon=F(n, 2), weight_range=wr, grid=100 if near else 4))
    led, cls, pairing, rep = charging_report(inst)
    assert led.total() == led.opt_value
    assert all(led.units(s) <= 2 for s in led.slots())
    assert rep.ok, rep.violations
    assert len(set(pairing.pairs.values())) == len(pairing.pairs)
