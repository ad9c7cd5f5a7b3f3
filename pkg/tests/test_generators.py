from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from barelyrandom.core import BadPreset, InstanceClass, validate_class
from barelyrandom.fileio import (ParseError, dump_instance, dump_trace, load_instance,
                                 load_trace, read_instance, write_instance)
from barelyrandom.generators import (BadParams, BadRange, GenParams, bad_slot_example,
                                     benevolent_fn, build_set, gen_instance,
                                     named_examples, set_step)

CLASSES = [c for c in InstanceClass]


def _fn(cls):
    if cls == InstanceClass.C_BENEVOLENT:
        return benevolent_fn("quadratic")
    if cls == InstanceClass.D_BENEVOLENT:
        return benevolent_fn("reciprocal")
    return None


@pytest.mark.parametrize("cls", CLASSES, ids=lambda c: c.value)
@given(seed=st.integers(0, 2**30), n=st.integers(0, 30))
def test_generated_instances_are_valid(cls, seed, n):
    inst = gen_instance(cls, GenParams(n=n, seed=seed, f=_fn(cls)))
    assert len(inst) == n
    assert validate_class(inst).ok


def test_generation_is_reproducible():
    p = GenParams(n=12, seed=7)
    assert gen_instance("Monotone", p) == gen_instance("Monotone", p)


def test_bad_params():
    with pytest.raises(BadParams):
        gen_instance("Monotone", GenParams(n=-1))
    with pytest.raises(BadParams):
        gen_instance("Monotone", GenParams(weight_range=(F(2), F(1))))


@given(v=st.fractions(0, 10, max_denominator=8), gap=st.fractions(0, 10, max_denominator=8),
       eps=st.fractions(F(1, 16), 2, max_denominator=16))
def test_build_set_invariants(v, gap, eps):
    w = v + gap
    s = build_set(v, w, eps, 5, F(1, 2))
    ws = [j.w for j in s]
    rs = [j.r for j in s]
    assert ws[0] == v and ws[-1] == w
    assert all(b - a <= eps for a, b in zip(ws, ws[1:]))
    assert ws == sorted(ws) and rs == sorted(rs)
    # pairwise overlapping
    assert max(rs) < min(j.d for j in s)
    assert all(j.is_interval and j.p == 1 for j in s)


def test_build_set_step():
    assert set_step(1, 14, F(1, 4)) == F(1, 4)
    assert set_step(0, 1, F(3, 10)) == F(1, 4)
    assert len(build_set(1, 1, F(1, 2), 0, F(1, 2))) == 1
    with pytest.raises(BadRange):
        build_set(2, 1, F(1, 2), 0, F(1, 2))
    with pytest.raises(BadRange):
        build_set(0, 1, F(1, 2), 0, 1)


@pytest.mark.parametrize("cls", CLASSES, ids=lambda c: c.value)
def test_instance_round_trip(cls):
    inst = gen_instance(cls, GenParams(n=15, seed=3, f=_fn(cls)))
    assert load_instance(dump_instance(inst)) == inst


def test_file_round_trip(tmp_path):
    inst = named_examples()["fig1a"]
    path = tmp_path / "inst.json"
    with open(path, "w") as fh:
        write_instance(inst, fh)
    assert read_instance(path) == inst


def test_trace_round_trip():
    inst, tr = bad_slot_example()
    back = load_trace(dump_trace(tr), tr.value)
    assert back == tr


@pytest.mark.parametrize("text", ["", "{", '{"class": "Nope"}\n',
                                  '{"class": "Monotone"}\n{"id": "a"}\n',
                                  '{"class": "Monotone"}\n{"id": "a", "r": "0", "d": "1", '
                                  '"p": "1", "w": "0.5"}\n'])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        load_instance(text)


def test_unknown_preset():
    with pytest.raises(BadPreset):
        benevolent_fn("cubic-ish")
