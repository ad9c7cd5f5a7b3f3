"""Event-driven simulation of one deterministic policy, plus the adaptive loop.

A policy reacts only to job arrivals and to wakeups it asked for. It answers
with ``None`` (keep doing what you do) or the id of a job to start, which
aborts the running job if there is one. There is no way to abort into idle.

At equal times the engine processes, in order: the completion of the running
job, the wakeups, then the arrivals sorted by ``(w, id)``.
"""
from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Protocol, Sequence

from .core import (EventKind, Instance, InstanceClass, Job, ScheduleError,
                   Trace, TraceEvent)


class PolicyContractViolation(ScheduleError):
    pass


class ClassMismatch(ScheduleError):
    pass


class ReleaseInPast(ScheduleError):
    pass


class StepCapExceeded(ScheduleError):
    pass


class SlotGap(ScheduleError):
    pass


@dataclass
class PolicyState:
    """What a policy may look at. Owned and updated by the engine."""

    running: Optional[tuple[Job, Fraction]] = None
    pending: set = field(default_factory=set)
    arrived: dict = field(default_factory=dict)
    wakeups: set = field(default_factory=set)

    @property
    def running_job(self) -> Optional[Job]:
        return self.running[0] if self.running else None

    def request_wakeup(self, t: Fraction) -> None:
        self.wakeups.add(t)

    def pending_jobs(self) -> list[Job]:
        return [self.arrived[j] for j in sorted(self.pending)]


class DecisionPolicy(Protocol):
    name: str
    classes: frozenset

    def reset(self) -> None: ...

    def on_arrival(self, now: Fraction, job: Job,
                   state: PolicyState) -> Optional[str]: ...

    def on_wakeup(self, now: Fraction, state: PolicyState) -> Optional[str]: ...


@dataclass
class PolicyPair:
    a: DecisionPolicy
    b: DecisionPolicy
    prob_a: Fraction = Fraction(1, 2)
    name: str = ""

    def __post_init__(self):
        self.prob_a = Fraction(self.prob_a)
        if not 0 < self.prob_a <= 1:
            raise ValueError("prob_a must lie in (0, 1]")

    def expected(self, val_a: Fraction, val_b: Fraction) -> Fraction:
        return self.prob_a * val_a + (1 - self.prob_a) * val_b

    def check_class(self, instance: Instance) -> None:
        for pol in (self.a, self.b):
            check_class(pol, instance)


def check_class(policy, instance: Instance) -> None:
    classes = getattr(policy, "classes", None)
    if classes is not None and instance.class_tag not in classes:
        raise ClassMismatch(
            f"{policy.name} does not handle {instance.class_tag.value} instances")


class Simulation:
    """Incremental simulation of one policy; jobs may be released over time."""

    def __init__(self, policy: DecisionPolicy, jobs: Iterable[Job] = ()):
        self.policy = policy
        policy.reset()
        self.state = PolicyState()
        self.now: Optional[Fraction] = None
        self.events: list[TraceEvent] = []
        self.value = Fraction(0)
        self.completed: set = set()
        self._arrivals: list = []
        self._next = 0
        self._wake_heap: list = []
        self._known: set = set()
        self.release(jobs)

    def release(self, jobs: Iterable[Job]) -> None:
        batch = []
        for job in jobs:
            if self.now is not None and job.r <= self.now:
                raise ReleaseInPast(
                    f"{job.id} arrives at {job.r}, clock already at {self.now}")
            if job.id in self._known:
                raise ScheduleError(f"job id {job.id} released twice")
            self._known.add(job.id)
            batch.append((job.r, job.w, job.id, job))
        if not batch:
            return
        batch.sort(key=lambda e: e[:3])
        # arrivals stay a sorted list read through a cursor; adaptive releases
        # usually come after everything queued, so appending is the common case
        rest = self._arrivals[self._next:]
        if rest and rest[-1][:3] > batch[0][:3]:
            batch = sorted(rest + batch, key=lambda e: e[:3])
        else:
            batch = rest + batch
        self._arrivals, self._next = batch, 0

    def _completion_time(self):
        if self.state.running is None:
            return None
        job, start = self.state.running
        return start + job.p

    def _sync_wakeups(self):
        for t in self.state.wakeups:
            if self.now is None or t > self.now:
                heapq.heappush(self._wake_heap, t)
        self.state.wakeups.clear()

    def _peek_arrival(self):
        return self._arrivals[self._next][0] if self._next < len(self._arrivals) else None

    def next_time(self) -> Optional[Fraction]:
        self._sync_wakeups()
        while self._wake_heap and self.now is not None and self._wake_heap[0] <= self.now:
            heapq.heappop(self._wake_heap)
        best = self._completion_time()
        for t in (self._wake_heap[0] if self._wake_heap else None, self._peek_arrival()):
            if t is not None and (best is None or t < best):
                best = t
        return best

    def _expire(self, now):
        st = self.state
        run = st.running[0].id if st.running is not None else None
        arrived = st.arrived
        dead = [j for j in st.pending if j != run and now > arrived[j]._latest]
        for j in dead:
            st.pending.discard(j)

    def _apply(self, now, action):
        if action is None:
            return
        st = self.state
        job = st.arrived.get(action)
        if job is None or action not in st.pending:
            raise PolicyContractViolation(
                f"{self.policy.name} started unknown or finished job {action!r}")
        if not job.can_finish_from(now):
            raise PolicyContractViolation(
                f"{self.policy.name} started {action} at {now}; it cannot finish")
        if st.running is not None:
            if st.running[0].id == action:
                raise PolicyContractViolation(
                    f"{self.policy.name} restarted {action}, which is running")
            prev = st.running[0]
            self.events.append(TraceEvent(now, EventKind.ABORT, prev.id))
            if now > prev._latest:
                st.pending.discard(prev.id)
        self.events.append(TraceEvent(now, EventKind.START, action))
        st.running = (job, now)

    def step(self) -> bool:
        """Process every event at the next event time. False when idle forever."""
        t = self.next_time()
        if t is None:
            return False
        self.now = t
        st = self.state
        if self._completion_time() == t:
            job = st.running[0]
            self.events.append(TraceEvent(t, EventKind.COMPLETE, job.id))
            self.value += job.w
            self.completed.add(job.id)
            st.pending.discard(job.id)
            st.running = None
        # nothing can become unfinishable later within the same instant, except
        # an aborted job, which _apply handles
        self._expire(t)
        if self._wake_heap and self._wake_heap[0] == t:
            while self._wake_heap and self._wake_heap[0] == t:
                heapq.heappop(self._wake_heap)
            self._apply(t, self.policy.on_wakeup(t, st))
        arr = self._arrivals
        while self._next < len(arr) and arr[self._next][0] == t:
            job = arr[self._next][3]
            self._next += 1
            st.arrived[job.id] = job
            st.pending.add(job.id)
            self._apply(t, self.policy.on_arrival(t, job, st))
        return True

    def run_until(self, t: Fraction) -> None:
        while True:
            nt = self.next_time()
            if nt is None or nt > t:
                break
            self.step()

    def drain(self) -> None:
        while self.step():
            pass

    def trace(self) -> Trace:
        return Trace(tuple(self.events), self.value)


def run_online(instance: Instance, policy: DecisionPolicy,
               check: bool = True) -> Trace:
    if check:
        check_class(policy, instance)
    sim = Simulation(policy, instance.jobs)
    sim.drain()
    return sim.trace()


@dataclass
class MixtureResult:
    val_a: Fraction
    val_b: Fraction
    expected: Fraction
    trace_a: Trace = None
    trace_b: Trace = None


def run_mixture(instance: Instance, pair: PolicyPair,
                check: bool = True) -> MixtureResult:
    if check:
        pair.check_class(instance)
    ta = run_online(instance, pair.a, check=False)
    tb = run_online(instance, pair.b, check=False)
    return MixtureResult(ta.value, tb.value, pair.expected(ta.value, tb.value),
                         ta, tb)


@dataclass(frozen=True)
class Observation:
    """What an adaptive adversary sees after its last release was processed."""

    clock: Optional[Fraction]
    running_a: Optional[Job]
    running_b: Optional[Job]
    value_a: Fraction
    value_b: Fraction


class AdversarySource(Protocol):
    def next(self, obs: Observation) -> Optional[Sequence[Job]]:
        """Jobs to release next (arrivals after ``obs.clock``), or None to stop."""


@dataclass
class AdaptiveResult:
    instance: Instance
    val_a: Fraction
    val_b: Fraction
    expected: Fraction
    released_count: int
    rounds: int
    trace_a: Trace = None
    trace_b: Trace = None


def run_adaptive(adv: AdversarySource, pair: PolicyPair,
                 step_cap: int = 10_000,
                 class_tag=InstanceClass.EQUAL_LENGTH_INTERVALS) -> AdaptiveResult:
    """Alternate adversary releases and policy reactions until the adversary stops.

    Each round the adversary observes both policies immediately after the last
    arrival of its previous release.
    """
    sa, sb = Simulation(pair.a), Simulation(pair.b)
    released: list[Job] = []
    clock = None
    rounds = 0
    while True:
        obs = Observation(clock, sa.state.running_job, sb.state.running_job,
                          sa.value, sb.value)
        batch = adv.next(obs)
        if batch is None:
            break
        rounds += 1
        if rounds > step_cap:
            raise StepCapExceeded(f"adversary still releasing after {step_cap} rounds")
        batch = list(batch)
        if not batch:
            continue
        for job in batch:
            if clock is not None and job.r <= clock:
                raise ReleaseInPast(f"{job.id} at {job.r} <= clock {clock}")
        sa.release(batch)
        sb.release(batch)
        released.extend(batch)
        clock = max(j.r for j in batch)
        sa.run_until(clock)
        sb.run_until(clock)
    sa.drain()
    sb.drain()
    inst = Instance(tuple(released), class_tag)
    return AdaptiveResult(inst, sa.value, sb.value, pair.expected(sa.value, sb.value),
                          len(released), rounds, sa.trace(), sb.trace())


def unit_slots(n: int, start: int = 0) -> list[tuple[Fraction, Fraction]]:
    return [(Fraction(start + i), Fraction(start + i + 1)) for i in range(n)]


def accepted_per_slot(trace: Trace, slots: Sequence[tuple[Fraction, Fraction]]
                      ) -> dict[int, str]:
    """Map slot index (1-based) to the job started there and later completed."""
    starts = [lo for lo, _ in slots]
    out = {}
    for job, start, _end, done in trace.runs():
        k = _slot_of(start, slots, starts)
        if k is None:
            raise SlotGap(f"start of {job} at {start} lies in no slot")
        if done:
            if k in out:
                raise ScheduleError(f"two jobs accepted in slot {k}")
            out[k] = job
    return out


def _slot_of(t, slots, starts):
    i = bisect.bisect_right(starts, t) - 1
    if i >= 0 and slots[i][0] <= t < slots[i][1]:
        return i + 1
    return None


def ratio(opt: Fraction, expected: Fraction):
    """OPT / E[ALG] as an exact Fraction; ``math.inf`` when ALG gains nothing."""
    if expected == 0:
        return math.inf if opt > 0 else Fraction(1)
    return opt / expected
