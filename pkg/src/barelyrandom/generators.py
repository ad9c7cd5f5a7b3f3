"""Random instance generation and the hand-built instances.

All random values are drawn on a rational grid (multiples of ``1/grid``) so
that instances stay exact and slot boundaries are actually hit.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import (BadPreset, Instance, InstanceClass, Job, ScheduleError, Trace,
                   WeightFunction, make_interval, rat, trace_from_runs)


class BadParams(ScheduleError):
    pass


class BadRange(ScheduleError):
    pass


@dataclass
class GenParams:
    n: int = 10
    seed: int = 0
    horizon: Fraction = Fraction(10)
    weight_range: tuple = (Fraction(1), Fraction(10))
    grid: int = 4
    max_length: Fraction = Fraction(3)
    slack_max: Fraction = Fraction(3)
    f: Optional[WeightFunction] = None


def _grid_range(lo, hi, grid, positive=False) -> range:
    a = math.ceil(lo * grid)
    b = math.floor(hi * grid)
    if positive:
        a = max(a, 1)
    if a > b:
        raise BadParams(f"empty range [{lo}, {hi}] on grid 1/{grid}")
    return range(a, b + 1)


def _draw(rng, lo, hi, grid, positive=False):
    return Fraction(rng.choice(_grid_range(lo, hi, grid, positive)), grid)


def gen_instance(cls, params: GenParams) -> Instance:
    """A random instance of class ``cls``, reproducible from ``params.seed``."""
    cls = InstanceClass(cls)
    p = params
    if p.n < 0 or p.grid < 1 or p.horizon < 0:
        raise BadParams("need n >= 0, grid >= 1, horizon >= 0")
    lo, hi = map(rat, p.weight_range)
    if lo <= 0 or hi < lo:
        raise BadParams("weights must satisfy 0 < lo <= hi")
    rng = random.Random(p.seed)
    width = len(str(max(p.n - 1, 0)))
    ids = [f"j{i:0{width}d}" for i in range(p.n)]
    arrivals = sorted(_draw(rng, 0, p.horizon, p.grid) for _ in range(p.n))
    jobs = []
    f = None
    if cls == InstanceClass.EQUAL_LENGTH_INTERVALS:
        wr = _grid_range(lo, hi, p.grid, True)
        jobs = [make_interval(r, 1, Fraction(rng.choice(wr), p.grid), i)
                for i, r in zip(ids, arrivals)]
    elif cls == InstanceClass.MONOTONE:
        last_d = None
        for i, r in zip(ids, arrivals):
            d = r + _draw(rng, 0, p.max_length, p.grid, True)
            if last_d is not None and d < last_d:
                d = last_d
            last_d = d
            jobs.append(Job(i, r, d, d - r, _draw(rng, lo, hi, p.grid, True)))
    elif cls in (InstanceClass.C_BENEVOLENT, InstanceClass.D_BENEVOLENT):
        f = p.f or WeightFunction("power" if cls == InstanceClass.C_BENEVOLENT
                                  else "reciprocal")
        want = "C" if cls == InstanceClass.C_BENEVOLENT else "D"
        if f.family != want:
            raise BadParams(f"{f.kind} is not {want}-benevolent")
        # expdecay is only rational at whole lengths
        g = 1 if f.kind == "expdecay" else p.grid
        for i, r in zip(ids, arrivals):
            length = _draw(rng, 0, p.max_length, g, True)
            jobs.append(make_interval(r, length, f(length), i))
    elif cls == InstanceClass.EQUAL_LENGTH_JOBS:
        for i, r in zip(ids, arrivals):
            slack = _draw(rng, 0, p.slack_max, p.grid)
            jobs.append(Job(i, r, r + 1 + slack, 1, _draw(rng, lo, hi, p.grid, True)))
    return Instance(tuple(jobs), cls, f)


def set_step(v, w, eps) -> Fraction:
    """Largest step <= eps that divides w - v into a whole number of parts."""
    v, w, eps = rat(v), rat(w), rat(eps)
    if w == v:
        return eps
    return (w - v) / math.ceil((w - v) / eps)


def build_set(v, w, eps, t0, window, prefix: str = "S") -> list[Job]:
    """A bundle of pairwise overlapping unit intervals with weights v, v+e', ..., w.

    Lighter intervals arrive earlier, evenly spaced over ``window`` starting at
    ``t0``; since ``window < 1`` the last one arrives before the first ends.
    """
    v, w, eps, t0, window = map(rat, (v, w, eps, t0, window))
    if not 0 <= v <= w or eps <= 0:
        raise BadRange(f"need 0 <= v <= w and eps > 0, got {v}, {w}, {eps}")
    if not 0 < window < 1:
        raise BadRange(f"window {window} must lie in (0, 1)")
    step = set_step(v, w, eps)
    m = 1 if w == v else int((w - v) / step) + 1
    eta = window / m
    return [make_interval(t0 + k * eta, 1, v + k * step, f"{prefix}.{k}")
            for k in range(m)]


def fig1a(eps=Fraction(1, 100)) -> Instance:
    """Three unit jobs on which RAN-J earns 1+eps while OPT earns 3+eps."""
    eps = rat(eps)
    return Instance((Job("X", 0, 3, 1, 1 + eps), Job("Y", 0, 1, 1, 1),
                     Job("Z", 1, 2, 1, 1)), InstanceClass.EQUAL_LENGTH_JOBS)


def bad_slot_example(eps=Fraction(1, 100)) -> tuple[Instance, Trace]:
    """Three unit jobs and an optimal schedule under which RAN-J's slot 5 is bad.

    B takes Y in slot 2 and X in slot 4, A takes Z in slot 3 and X in slot 5.
    OPT runs Z, Y, X back to back from time 4, so slot 5 collects a downward
    charge from Z, a self charge from X and a backward charge from Y.
    """
    eps = rat(eps)
    x = Job("X", 3, 7, 1, 1 + 2 * eps)
    y = Job("Y", 1, 6, 1, 1)
    z = Job("Z", 2, 5, 1, 1 + eps)
    inst = Instance((x, y, z), InstanceClass.EQUAL_LENGTH_JOBS)
    return inst, trace_from_runs([(z, Fraction(4)), (y, Fraction(5)), (x, Fraction(6))])


def single_interval(w=1) -> Instance:
    return Instance((make_interval(0, 1, w, "I"),),
                    InstanceClass.EQUAL_LENGTH_INTERVALS)


def named_examples(eps=Fraction(1, 100)) -> dict[str, Instance]:
    return {"fig1a": fig1a(eps), "single_interval": single_interval(),
            "bad_slot": bad_slot_example(eps)[0]}


PRESETS = {
    "linear": ("linear", ()),
    "power2": ("power", (2,)),
    "quadratic": ("quadratic", (1, 1)),
    "reciprocal": ("reciprocal", ()),
    "expdecay": ("expdecay", ()),
}


def benevolent_fn(preset: str, params=()) -> WeightFunction:
    """Preset weight functions: C-benevolent linear/power/quadratic, D-benevolent
    reciprocal/expdecay. ``params`` override the preset's defaults."""
    key = preset.lower()
    if key in PRESETS:
        kind, default = PRESETS[key]
        return WeightFunction(kind, params or default)
    if key.startswith("power") and key[5:].isdigit():
        return WeightFunction("power", (int(key[5:]),))
    if key in WeightFunction.C_KINDS + WeightFunction.D_KINDS:
        return WeightFunction(key, params)
    raise BadPreset(f"unknown preset {preset!r}")
