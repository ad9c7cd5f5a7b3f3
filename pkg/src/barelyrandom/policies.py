"""The barely random policy pairs RAN, RAN-M, RAN-C, RAN-D and RAN-J.

Each pair consists of two deterministic policies A and B, mixed with
probability 1/2 each. For the interval algorithms, where the slot boundaries
depend on what *both* halves accepted, every policy object runs a private
copy of the shared slot machinery (a "core") and acts out its own role. The
two halves never interact at run time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import InstanceClass, Job
from .sim import PolicyPair, PolicyState

A, B = 0, 1
HALF = Fraction(1, 2)


def _slot_index(t: Fraction) -> int:
    """Unit slot s_i = [i-1, i) containing ``t``."""
    return math.floor(t) + 1


def _owner(slot: int) -> int:
    return A if slot % 2 == 1 else B


class _CoreDriven:
    """A DecisionPolicy that mirrors one role of a shared core."""

    core_cls = None
    name = ""
    classes = frozenset()

    def __init__(self, role: int):
        self.role = role
        self.core = None

    def reset(self):
        self.core = self.core_cls()

    def _act(self, state: PolicyState) -> Optional[str]:
        want = self.core.running[self.role]
        cur = state.running_job
        if want is None:
            assert cur is None, f"{self.name}: core idle while engine runs {cur.id}"
            return None
        if cur is not None and cur.id == want.id:
            return None
        return want.id

    def on_arrival(self, now, job, state):
        self.core.advance(now)
        self.core.arrive(now, job)
        return self._act(state)

    def on_wakeup(self, now, state):
        self.core.advance(now)
        return self._act(state)

    def __repr__(self):
        return f"{self.name}.{'AB'[self.role]}"


class RanCore:
    """Equal-length intervals: A owns the odd unit slots, B the even ones.

    In its own slot a role starts the first arrival and switches to any
    strictly heavier one; the survivor runs to completion in the next slot.
    """

    def __init__(self):
        self.running = [None, None]
        self.started_in = [None, None]

    def advance(self, now):
        for r in (A, B):
            job = self.running[r]
            if job is not None and job.d <= now:
                self.running[r] = None

    def arrive(self, now, job):
        k = _slot_index(now)
        r = _owner(k)
        cur = self.running[r]
        if cur is None or (self.started_in[r] == k and job.w > cur.w):
            self.running[r] = job
            self.started_in[r] = k


class RanMCore:
    """Monotone intervals; slots follow the deadlines of the accepted chain.

    Slot s_1 = [r(I_0), d(I_0)) with I_0 the earliest-deadline interval among
    the arrivals that open the phase; slot s_i = [d(I_{i-2}), d(I_{i-1})).
    The active role keeps the heaviest arrival of its slot, the other role
    finishes the interval accepted in the previous slot.
    """

    def __init__(self):
        self.running = [None, None]
        self.in_phase = False
        self.slot = 0
        self.lo = self.hi = None
        self.phase_start = None
        self.chain = []  # accepted I_1, I_2, ... of the current phase
        self.history = []  # (slot, lo, hi) of every closed slot

    def active(self):
        return A if self.slot % 2 == 1 else B

    def advance(self, now):
        while self.in_phase and self.hi <= now:
            self._close_slot()

    def _close_slot(self):
        act = self.active()
        other = 1 - act
        self.history.append((self.slot, self.lo, self.hi))
        # the passive role finishes exactly at hi
        if self.running[other] is not None:
            assert self.running[other].d == self.hi
            self.running[other] = None
        acc = self.running[act]
        if acc is None or acc.d == self.hi:
            self.running[act] = None
            self.in_phase = False
            return
        assert acc.d > self.hi
        self.chain.append(acc)
        self.slot += 1
        self.lo, self.hi = self.hi, acc.d

    def _open_phase(self, now, job):
        self.in_phase = True
        self.slot = 1
        self.lo, self.hi = now, job.d
        self.phase_start = now
        self.chain = []

    def arrive(self, now, job):
        if not self.in_phase:
            self._open_phase(now, job)
        elif self.slot == 1 and now == self.phase_start and job.d < self.hi:
            # simultaneous opening arrivals: I_0 has the earliest deadline
            self.hi = job.d
        act = self.active()
        cur = self.running[act]
        if cur is None or job.w > cur.w:
            self.running[act] = job


class RanCCore(RanMCore):
    """C-benevolent intervals.

    B runs I_0, the longest of the opening arrivals. In each slot the active
    role tracks the longest interval that arrives in the slot and ends after
    the slot does; intervals that fit inside the slot are ignored.
    """

    def _open_phase(self, now, job):
        super()._open_phase(now, job)
        self.running[B] = job

    def arrive(self, now, job):
        if not self.in_phase:
            self._open_phase(now, job)
            return
        if self.slot == 1 and now == self.phase_start:
            if job.p > self.running[B].p:
                self.running[B] = job
                self.hi = job.d
            return
        if job.d <= self.hi:
            return
        act = self.active()
        cur = self.running[act]
        if cur is None or job.p > cur.p:
            self.running[act] = job

    def _close_slot(self):
        if self.slot == 1:
            # s_1 is closed by B finishing I_0; A holds the candidate I_1
            assert self.running[B] is not None and self.running[B].d == self.hi
        super()._close_slot()


@dataclass
class RanDSnapshot:
    time: Fraction
    slot: int
    e: Fraction
    main: Optional[Job]
    residual: Optional[Job]
    phase: int = 0


class RanDCore:
    """D-benevolent intervals with a provisional, shrinkable slot end ``e``.

    The active role holds the main interval, the other role the residual one.
    On an arrival I:

    1. d(I) >= e and w(I) > w(main): I replaces main.
    2. d(I) < e: I replaces both main and residual, and e := d(I).
    3. otherwise I is discarded.

    At time e the slot closes; an unfinished main becomes the next residual.
    """

    def __init__(self, record: bool = False):
        self.running = [None, None]
        self.in_phase = False
        self.slot = 0
        self.e = None
        self.phase = 0
        self.record = record
        self.history: list[RanDSnapshot] = []

    def active(self):
        return A if self.slot % 2 == 1 else B

    @property
    def main(self):
        return self.running[self.active()]

    @property
    def residual(self):
        return self.running[1 - self.active()]

    def _snap(self, now):
        if self.record:
            self.history.append(RanDSnapshot(now, self.slot, self.e, self.main,
                                             self.residual, self.phase))

    def advance(self, now):
        while self.in_phase and self.e <= now:
            act = self.active()
            main = self.running[act]
            res = self.running[1 - act]
            if res is not None:
                assert res.d == self.e
            self.running[1 - act] = None
            if main is None or main.d == self.e:
                self.running[act] = None
                self.in_phase = False
            else:
                self.slot += 1
                self.e = main.d
            self._snap(self.e if self.in_phase else now)

    def arrive(self, now, job):
        if not self.in_phase:
            self.in_phase = True
            self.phase += 1
            self.slot = 1
            self.e = job.d
        act = self.active()
        main = self.running[act]
        w_main = main.w if main is not None else 0
        if job.d >= self.e and job.w > w_main:
            self.running[act] = job
        elif job.d < self.e:
            self.running[A] = self.running[B] = job
            self.e = job.d
        self._snap(now)


class Ran(_CoreDriven):
    core_cls = RanCore
    name = "ran"
    classes = frozenset({InstanceClass.EQUAL_LENGTH_INTERVALS})


class RanM(_CoreDriven):
    core_cls = RanMCore
    name = "ran-m"
    classes = frozenset({InstanceClass.MONOTONE,
                         InstanceClass.EQUAL_LENGTH_INTERVALS})


class RanC(_CoreDriven):
    core_cls = RanCCore
    name = "ran-c"
    classes = frozenset({InstanceClass.C_BENEVOLENT})


class RanD(_CoreDriven):
    core_cls = RanDCore
    name = "ran-d"
    classes = frozenset({InstanceClass.D_BENEVOLENT})


class RanJ:
    """Equal-length jobs with restarts.

    At the start of each of its slots the role starts the heaviest pending job
    that can still finish (ties: smallest id); a strictly heavier arrival in
    the same slot preempts it. The job running at the slot end is finished.
    Preempted jobs stay pending and may be restarted from scratch later.
    """

    name = "ran-j"
    classes = frozenset({InstanceClass.EQUAL_LENGTH_JOBS,
                         InstanceClass.EQUAL_LENGTH_INTERVALS})

    def __init__(self, role: int):
        self.role = role
        self.started_in = None

    def reset(self):
        self.started_in = None

    def _own(self, slot):
        return _owner(slot) == self.role

    def _next_own_start(self, now) -> Fraction:
        k = _slot_index(now) + 1
        if not self._own(k):
            k += 1
        return Fraction(k - 1)

    def _best(self, now, state):
        run = state.running_job
        cands = [j for j in state.pending_jobs()
                 if (run is None or j.id != run.id) and j.can_finish_from(now)]
        if not cands:
            return None
        return min(cands, key=lambda j: (-j.w, j.id))

    def _plan_wakeup(self, now, state):
        t = self._next_own_start(now)
        if any(j.d >= t + 1 for j in state.pending_jobs()):
            state.request_wakeup(t)

    def on_wakeup(self, now, state):
        action = None
        k = _slot_index(now)
        if now == k - 1 and self._own(k) and state.running is None:
            best = self._best(now, state)
            if best is not None:
                action = best.id
                self.started_in = k
        self._plan_wakeup(now, state)
        return action

    def on_arrival(self, now, job, state):
        action = None
        k = _slot_index(now)
        if self._own(k):
            cur = state.running_job
            if cur is None or (self.started_in == k and job.w > cur.w):
                action = job.id
                self.started_in = k
        self._plan_wakeup(now, state)
        return action

    def __repr__(self):
        return f"ran-j.{'AB'[self.role]}"


def _pair(cls, name):
    return PolicyPair(cls(A), cls(B), HALF, name)


def ran_pair() -> PolicyPair:
    return _pair(Ran, "ran")


def ran_m_pair() -> PolicyPair:
    return _pair(RanM, "ran-m")


def ran_c_pair() -> PolicyPair:
    return _pair(RanC, "ran-c")


def ran_d_pair() -> PolicyPair:
    return _pair(RanD, "ran-d")


def ran_j_pair() -> PolicyPair:
    return _pair(RanJ, "ran-j")


PAIRS = {
    "ran": ran_pair,
    "ran-m": ran_m_pair,
    "ran-c": ran_c_pair,
    "ran-d": ran_d_pair,
    "ran-j": ran_j_pair,
}


def make_pair(name: str) -> PolicyPair:
    try:
        return PAIRS[name]()
    except KeyError:
        raise KeyError(f"unknown policy {name!r}; choose from {sorted(PAIRS)}")
