from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from barelyrandom.core import (EventKind, Instance, InstanceClass, InvalidJob, Job,
                               NonPositiveLength, Trace, TraceEvent, UnknownJobId,
                               WeightFunction, fmt_rat, make_interval, rat,
                               schedule_feasible, schedule_value, trace_from_runs,
                               validate_class)
from barelyrandom.generators import fig1a

rats = st.fractions(min_value=-50, max_value=50, max_denominator=64)


def test_make_interval_sets_tight_deadline():
    iv = make_interval(0, 1, 5)
    assert (iv.r, iv.d, iv.p, iv.w) == (0, 1, 1, 5)
    iv = make_interval(F(1, 2), 1, F(3, 2))
    assert (iv.r, iv.d, iv.w) == (F(1, 2), F(3, 2), F(3, 2))
    assert iv.is_interval


@pytest.mark.parametrize("p", [0, -1, F(-1, 3)])
def test_make_interval_rejects_non_positive_length(p):
    with pytest.raises(NonPositiveLength):
        make_interval(0, p, 1)


def test_job_validation():
    with pytest.raises(InvalidJob):
        Job("a", 0, F(1, 2), 1, 1)
    with pytest.raises(InvalidJob):
        Job("a", 0, 1, 1, -1)
    assert Job("a", 0, 3, 1, 0).w == 0


def test_rat_is_exact_only():
    assert rat("3/4") == F(3, 4)
    assert rat(2) == 2
    with pytest.raises(TypeError):
        rat(0.5)
    with pytest.raises(ValueError):
        rat("0.5")


@given(rats, rats)
def test_rational_arithmetic_is_exact(a, b):
    assert (a + b) - b == a
    assert rat(fmt_rat(a)) == a


def test_validate_monotone_violation():
    inst = Instance((Job("I", 0, 2, 2, 1), Job("J", 1, F(3, 2), F(1, 2), 1)),
                    InstanceClass.MONOTONE)
    rep = validate_class(inst)
    assert not rep.ok and any("J" in v for v in rep.violations)


def test_validate_benevolent_weights():
    f = WeightFunction("power", (2,))
    ok = Instance((make_interval(0, 2, 4, "a"),), InstanceClass.C_BENEVOLENT, f)
    bad = Instance((make_interval(0, 2, 5, "a"),), InstanceClass.C_BENEVOLENT, f)
    assert validate_class(ok).ok
    assert not validate_class(bad).ok


def test_validate_equal_length_intervals():
    inst = Instance(tuple(make_interval(i, 1, i + 1, f"j{i}") for i in range(4)),
                    InstanceClass.EQUAL_LENGTH_INTERVALS)
    assert validate_class(inst).ok
    # every equal-length interval instance is monotone
    mono = Instance(inst.jobs, InstanceClass.MONOTONE)
    assert validate_class(mono).ok


@given(st.lists(st.tuples(st.integers(0, 20), st.integers(1, 8)), max_size=12))
def test_equal_length_is_monotone(rows):
    jobs = tuple(make_interval(F(r, 4), 1, w, f"j{i}") for i, (r, w) in enumerate(rows))
    assert validate_class(Instance(jobs, InstanceClass.MONOTONE)).ok


def test_weight_function_axioms():
    sq = WeightFunction("power", (2,))
    assert sq(3) == 9 and sq(0) == 0
    assert sq(1) + sq(3) <= sq(0) + sq(4)
    rec = WeightFunction("reciprocal")
    assert rec(2) == F(1, 2) > rec(4) == F(1, 4)
    assert sq.axiom_violations([1, 2, 3]) == []
    assert rec.axiom_violations([1, 2, 3]) == []
    assert WeightFunction("expdecay")(3) == F(1, 8)
    with pytest.raises(ValueError):
        WeightFunction("expdecay")(F(1, 2))


def test_empty_trace_is_feasible():
    inst = Instance((), InstanceClass.EQUAL_LENGTH_INTERVALS)
    rep = schedule_feasible(Trace(), inst)
    assert rep.ok and rep.value == 0
    assert schedule_value(Trace()) == 0


def test_interval_must_start_at_arrival():
    iv = make_interval(0, 1, 1, "I")
    inst = Instance((iv,), InstanceClass.EQUAL_LENGTH_INTERVALS)
    tr = Trace((TraceEvent(F(1, 4), EventKind.START, "I"),
                TraceEvent(F(5, 4), EventKind.COMPLETE, "I")), F(1))
    assert not schedule_feasible(tr, inst).ok


def test_fig1a_traces(eps):
    inst = fig1a(eps)
    x, y, z = (inst.by_id()[k] for k in "XYZ")
    a = trace_from_runs([(x, F(0))])
    rep = schedule_feasible(a, inst)
    assert rep.ok and rep.value == 1 + eps
    opt = trace_from_runs([(y, F(0)), (z, F(1)), (x, F(2))])
    assert schedule_feasible(opt, inst).ok
    assert schedule_value(opt, inst) == 3 + eps == schedule_value(opt)


def test_schedule_value_sums_completions():
    a, b = Job("a", 0, 1, 1, F(1, 3)), Job("b", 1, 2, 1, F(2, 3))
    inst = Instance((a, b), InstanceClass.EQUAL_LENGTH_JOBS)
    assert schedule_value(trace_from_runs([(a, 0), (b, 1)]), inst) == 1


def test_overlap_and_abort_accounting():
    a, b = Job("a", 0, 5, 1, 1), Job("b", 0, 5, 1, 1)
    inst = Instance((a, b), InstanceClass.EQUAL_LENGTH_JOBS)
    overlap = Trace((TraceEvent(F(0), EventKind.START, "a"),
                     TraceEvent(F(1, 2), EventKind.START, "b"),
                     TraceEvent(F(1), EventKind.COMPLETE, "a"),
                     TraceEvent(F(3, 2), EventKind.COMPLETE, "b")), F(2))
    assert not schedule_feasible(overlap, inst).ok
    restart = Trace((TraceEvent(F(0), EventKind.START, "a"),
                     TraceEvent(F(1, 2), EventKind.ABORT, "a"),
                     TraceEvent(F(1, 2), EventKind.START, "a"),
                     TraceEvent(F(3, 2), EventKind.COMPLETE, "a")), F(1))
    rep = schedule_feasible(restart, inst)
    assert rep.ok and rep.value == 1


def test_unknown_job_id():
    inst = Instance((), InstanceClass.EQUAL_LENGTH_JOBS)
    with pytest.raises(UnknownJobId):
        schedule_feasible(Trace((TraceEvent(F(0), EventKind.START, "ghost"),)), inst)


def test_instance_sorted_and_unique():
    a, b = Job("b", 0, 1, 1, 1), Job("a", 0, 1, 1, 1)
    assert [j.id for j in Instance((a, b), "EqualLengthJobs").jobs] == ["a", "b"]
    with pytest.raises(InvalidJob):
        Instance((a, a), "EqualLengthJobs")
