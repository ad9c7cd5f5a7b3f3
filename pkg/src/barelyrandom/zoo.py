"""Simple deterministic interval policies used as opponents for the adversary.

They only ever react to arrivals, like every policy in this package: an
interval can only be started the instant it arrives.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .core import InstanceClass
from .policies import A, B, Ran, ran_pair
from .sim import PolicyPair

_INTERVALS = frozenset({InstanceClass.EQUAL_LENGTH_INTERVALS})


class _Reactive:
    classes = _INTERVALS

    def reset(self):
        pass

    def on_wakeup(self, now, state):
        return None

    def on_arrival(self, now, job, state):
        cur = state.running_job
        if cur is None or self.switch(now, job, cur, state):
            return job.id
        return None

    def switch(self, now, job, cur, state) -> bool:
        raise NotImplementedError

    def __repr__(self):
        return self.name


class Greedy(_Reactive):
    """Switch to any strictly heavier arrival."""

    name = "greedy"

    def switch(self, now, job, cur, state):
        return job.w > cur.w


class KeepFirst(_Reactive):
    """Never abort."""

    name = "keep-first"

    def switch(self, now, job, cur, state):
        return False


class Threshold(_Reactive):
    """Switch only when the arrival is at least ``factor`` times heavier."""

    def __init__(self, factor):
        self.factor = Fraction(factor)
        self.name = f"threshold({self.factor})"

    def switch(self, now, job, cur, state):
        return job.w >= self.factor * cur.w and job.w > cur.w


class ShiftedSlots(_Reactive):
    """RAN-style half: owns every other unit slot of a grid shifted by ``offset``."""

    def __init__(self, parity: int, offset=Fraction(1, 2)):
        self.parity = parity
        self.offset = Fraction(offset)
        self.name = f"shifted({parity},{self.offset})"
        self.started_in = None

    def reset(self):
        self.started_in = None

    def on_arrival(self, now, job, state):
        k = math.floor(now - self.offset)
        if k % 2 != self.parity:
            return None
        cur = state.running_job
        if cur is None or (self.started_in == k and job.w > cur.w):
            self.started_in = k
            return job.id
        return None


class Hesitant(_Reactive):
    """Joins every fresh burst (an arrival at least ``gap`` after the current
    start) at its first interval, even a lighter one; inside a burst it
    climbs to arrivals at least ``factor`` times heavier."""

    def __init__(self, gap=Fraction(1, 2), factor=1):
        self.gap = Fraction(gap)
        self.factor = Fraction(factor)
        self.name = f"hesitant({self.gap},{self.factor})"

    def switch(self, now, job, cur, state):
        start = state.running[1]
        if now - start >= self.gap:
            return True
        return job.w > cur.w and job.w >= self.factor * cur.w


class RandomSwitch(_Reactive):
    """Seeded coin flips: start an arrival when idle with probability ``start``,
    switch to a heavier one with ``up`` and to a lighter one with ``down``.

    Deterministic for a fixed seed, since ``reset`` reseeds the generator.
    """

    def __init__(self, seed: int, start=0.9, up=0.5, down=0.1):
        self.seed, self.start, self.up, self.down = seed, start, up, down
        self.name = f"random({seed})"
        self.rng = random.Random(seed)

    def reset(self):
        self.rng = random.Random(self.seed)

    def on_arrival(self, now, job, state):
        cur = state.running_job
        if cur is None:
            return job.id if self.rng.random() < self.start else None
        bar = self.up if job.w > cur.w else self.down
        return job.id if self.rng.random() < bar else None


def random_pair(seed: int) -> PolicyPair:
    """A random opponent pair: coin biases and the mixing probability come from ``seed``."""
    rng = random.Random(seed)

    def one():
        return RandomSwitch(rng.randrange(1 << 30), rng.choice([0.5, 0.9, 1.0]),
                            rng.choice([0.02, 0.1, 0.3, 0.7, 1.0]),
                            rng.choice([0.0, 0.0, 0.01, 0.05, 0.3]))

    prob = Fraction(rng.choice([1, 1, 1, 2, 3, 4]), rng.choice([2, 4, 5, 8]))
    prob = min(max(prob, Fraction(1, 8)), Fraction(7, 8))
    return PolicyPair(one(), one(), prob, f"random({seed})")


def zoo_pairs() -> dict[str, PolicyPair]:
    """Named opponent pairs; RAN itself is included as ``ran``."""
    h = Fraction(1, 2)
    return {
        "ran": ran_pair(),
        "greedy": PolicyPair(Greedy(), Greedy(), h, "greedy"),
        "keepfirst-greedy": PolicyPair(KeepFirst(), Greedy(), Fraction(1, 4),
                                       "keepfirst-greedy"),
        "greedy-keepfirst": PolicyPair(Greedy(), KeepFirst(), h, "greedy-keepfirst"),
        "threshold-greedy": PolicyPair(Threshold(Fraction(3, 2)), Greedy(), h,
                                       "threshold-greedy"),
        "threshold4-greedy": PolicyPair(Threshold(4), Greedy(), h,
                                        "threshold4-greedy"),
        "threshold-mixed": PolicyPair(Threshold(Fraction(5, 4)),
                                      Threshold(Fraction(11, 10)), Fraction(1, 3),
                                      "threshold-mixed"),
        "shifted-ran": PolicyPair(ShiftedSlots(0), ShiftedSlots(1), h, "shifted-ran"),
        "ran-skewed": PolicyPair(Ran(A), Ran(B), Fraction(1, 4), "ran-skewed"),
        "hesitant-greedy": PolicyPair(Hesitant(), Greedy(), Fraction(1, 3),
                                      "hesitant-greedy"),
        "hesitant-ladder": PolicyPair(Hesitant(h, 2), Hesitant(h), Fraction(1, 4),
                                      "hesitant-ladder"),
    }
