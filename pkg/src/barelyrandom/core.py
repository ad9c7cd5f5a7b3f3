"""Exact domain types: jobs, instances, weight functions, traces.

Every time, length and weight is a :class:`fractions.Fraction`. Nothing in
this package compares floats.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rat = Fraction


class ScheduleError(Exception):
    """Base class for every error raised by this package."""


class NonPositiveLength(ScheduleError):
    pass


class InvalidJob(ScheduleError):
    pass


class UnknownJobId(ScheduleError):
    pass


class BadPreset(ScheduleError):
    pass


def rat(x) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction.

    Floats are rejected: they would silently break exactness.
    """
    if type(x) is Fraction or isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if "." in x or "e" in x.lower():
            raise ValueError(f"decimal notation not allowed: {x!r}")
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def fmt_rat(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class InstanceClass(str, enum.Enum):
    EQUAL_LENGTH_INTERVALS = "EqualLengthIntervals"
    MONOTONE = "Monotone"
    C_BENEVOLENT = "CBenevolent"
    D_BENEVOLENT = "DBenevolent"
    EQUAL_LENGTH_JOBS = "EqualLengthJobs"


@dataclass(frozen=True)
class Job:
    """A job with arrival ``r``, deadline ``d``, length ``p`` and weight ``w``.

    An interval is a job whose deadline is tight (``d == r + p``); it can only
    run if it starts the instant it arrives.
    """

    id: str
    r: Fraction
    d: Fraction
    p: Fraction
    w: Fraction

    def __post_init__(self):
        for name in ("r", "d", "p", "w"):
            object.__setattr__(self, name, rat(getattr(self, name)))
        object.__setattr__(self, "id", str(self.id))
        if self.p <= 0:
            raise NonPositiveLength(f"job {self.id}: length {self.p} <= 0")
        if self.d < self.r + self.p:
            raise InvalidJob(f"job {self.id}: deadline {self.d} < r + p")
        if self.w < 0:
            raise InvalidJob(f"job {self.id}: negative weight {self.w}")
        # latest feasible start, cached since the engine asks for it constantly
        object.__setattr__(self, "_latest", self.d - self.p)

    @property
    def latest_start(self) -> Fraction:
        return self._latest

    @property
    def is_interval(self) -> bool:
        return self._latest == self.r

    def can_finish_from(self, t: Fraction) -> bool:
        return self.r <= t <= self._latest


def make_interval(r, p, w, id: str = "I") -> Job:
    """Build an interval: a job whose deadline is ``r + p``."""
    r, p, w = rat(r), rat(p), rat(w)
    if p <= 0:
        raise NonPositiveLength(f"length {p} <= 0")
    return Job(id, r, r + p, p, w)


class WeightFunction:
    """Weight as a function of interval length, for benevolent instances.

    C-benevolent kinds (``f(0) = 0``, strictly increasing, convex):

    ``linear``     f(p) = a*p
    ``power``      f(p) = p**k for an integer k >= 1
    ``quadratic``  f(p) = a*p**2 + b*p with a, b > 0

    D-benevolent kinds (``f(0) = 0``, positive and decreasing on p > 0):

    ``reciprocal`` f(p) = c/p
    ``expdecay``   f(p) = c * 2**(-p), integer lengths only
    """

    C_KINDS = ("linear", "power", "quadratic")
    D_KINDS = ("reciprocal", "expdecay")

    def __init__(self, kind: str, params: Sequence = ()):
        kind = kind.lower()
        params = tuple(rat(x) for x in params)
        if kind == "linear":
            params = params or (Fraction(1),)
            ok = len(params) == 1 and params[0] > 0
        elif kind == "power":
            params = params or (Fraction(2),)
            ok = (len(params) == 1 and params[0].denominator == 1
                  and params[0] >= 1)
        elif kind == "quadratic":
            params = params or (Fraction(1), Fraction(1))
            ok = len(params) == 2 and params[0] > 0 and params[1] > 0
        elif kind in ("reciprocal", "expdecay"):
            params = params or (Fraction(1),)
            ok = len(params) == 1 and params[0] > 0
        else:
            raise BadPreset(f"unknown weight function kind {kind!r}")
        if not ok:
            raise BadPreset(f"bad parameters {params} for {kind}")
        self.kind = kind
        self.params = params

    @property
    def family(self) -> str:
        return "C" if self.kind in self.C_KINDS else "D"

    def __call__(self, p) -> Fraction:
        p = rat(p)
        if p < 0:
            raise ValueError("negative length")
        if p == 0:
            return Fraction(0)
        k = self.kind
        if k == "linear":
            return self.params[0] * p
        if k == "power":
            return p ** int(self.params[0])
        if k == "quadratic":
            a, b = self.params
            return a * p * p + b * p
        if k == "reciprocal":
            return self.params[0] / p
        # expdecay
        if p.denominator != 1:
            raise ValueError("expdecay is only rational at integer lengths")
        return self.params[0] / 2 ** int(p)

    def axiom_violations(self, lengths: Iterable[Fraction]) -> list[str]:
        """Check the class axioms of ``f`` on the given lengths (and 0)."""
        pts = sorted(set(rat(x) for x in lengths) | {Fraction(0)})
        vals = [self(x) for x in pts]
        out = []
        if vals[0] != 0:
            out.append("f(0) != 0")
        if any(v <= 0 for v in vals[1:]):
            out.append("f(p) <= 0 for some p > 0")
        if self.family == "C":
            for (x0, y0), (x1, y1) in zip(zip(pts, vals), zip(pts[1:], vals[1:])):
                if y1 <= y0:
                    out.append(f"f not strictly increasing at {x1}")
            slopes = [(y1 - y0) / (x1 - x0) for x0, x1, y0, y1
                      in zip(pts, pts[1:], vals, vals[1:])]
            for s0, s1 in zip(slopes, slopes[1:]):
                if s1 < s0:
                    out.append("f not convex on the lengths present")
                    break
        else:
            for x0, x1, y0, y1 in zip(pts[1:], pts[2:], vals[1:], vals[2:]):
                if y1 > y0:
                    out.append(f"f increasing between {x0} and {x1}")
        return out

    def merge_gap(self, parts: Iterable, total) -> Fraction:
        """``f(total) - sum(f(p) for p in parts)``; non-negative for a
        C-benevolent ``f`` whenever ``total >= sum(parts)``."""
        return self(total) - sum((self(p) for p in parts), Fraction(0))

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": [fmt_rat(x) for x in self.params]}

    @classmethod
    def from_json(cls, obj) -> "WeightFunction":
        return cls(obj["kind"], obj.get("params", ()))

    def __eq__(self, other):
        return (isinstance(other, WeightFunction) and self.kind == other.kind
                and self.params == other.params)

    def __hash__(self):
        return hash((self.kind, self.params))

    def __repr__(self):
        args = ", ".join(str(x) for x in self.params)
        return f"WeightFunction({self.kind!r}, ({args}))"


@dataclass(frozen=True)
class Instance:
    jobs: tuple[Job, ...]
    class_tag: InstanceClass
    f: Optional[WeightFunction] = None

    def __post_init__(self):
        jobs = tuple(sorted(self.jobs, key=lambda j: (j.r, j.id)))
        ids = [j.id for j in jobs]
        if len(set(ids)) != len(ids):
            raise InvalidJob("duplicate job ids")
        object.__setattr__(self, "jobs", jobs)
        object.__setattr__(self, "class_tag", InstanceClass(self.class_tag))

    def __len__(self):
        return len(self.jobs)

    def by_id(self) -> dict[str, Job]:
        return {j.id: j for j in self.jobs}


@dataclass
class ClassReport:
    ok: bool
    violations: list[str] = field(default_factory=list)


def validate_class(instance: Instance) -> ClassReport:
    """Report every way ``instance`` fails to belong to its declared class."""
    tag = instance.class_tag
    jobs = instance.jobs
    bad = []
    if tag in (InstanceClass.EQUAL_LENGTH_INTERVALS,
               InstanceClass.EQUAL_LENGTH_JOBS):
        bad += [f"{j.id}: length {j.p} != 1" for j in jobs if j.p != 1]
    if tag != InstanceClass.EQUAL_LENGTH_JOBS:
        bad += [f"{j.id}: not an interval" for j in jobs if not j.is_interval]
    if tag == InstanceClass.MONOTONE:
        # jobs are sorted by r; compare each arrival group with all earlier ones
        max_d = None
        i = 0
        while i < len(jobs):
            k = i
            while k < len(jobs) and jobs[k].r == jobs[i].r:
                k += 1
            group = jobs[i:k]
            if max_d is not None:
                for j in group:
                    if j.d < max_d:
                        bad.append(f"{j.id}: arrives later but ends earlier")
            gmax = max(j.d for j in group)
            max_d = gmax if max_d is None else max(max_d, gmax)
            i = k
    if tag in (InstanceClass.C_BENEVOLENT, InstanceClass.D_BENEVOLENT):
        f = instance.f
        want = "C" if tag == InstanceClass.C_BENEVOLENT else "D"
        if f is None:
            bad.append("benevolent instance without a weight function")
        elif f.family != want:
            bad.append(f"weight function {f.kind} is not {want}-benevolent")
        else:
            bad += [f"{j.id}: w = {j.w} != f(p) = {f(j.p)}"
                    for j in jobs if j.w != f(j.p)]
            bad += f.axiom_violations(j.p for j in jobs)
    return ClassReport(not bad, bad)


class EventKind(str, enum.Enum):
    START = "start"
    ABORT = "abort"
    COMPLETE = "complete"


@dataclass(frozen=True)
class TraceEvent:
    time: Fraction
    kind: EventKind
    job: str


@dataclass(frozen=True)
class Trace:
    events: tuple[TraceEvent, ...] = ()
    value: Fraction = Fraction(0)

    def completed(self) -> list[str]:
        return [e.job for e in self.events if e.kind == EventKind.COMPLETE]

    def runs(self) -> list[tuple[str, Fraction, Fraction, bool]]:
        """Each run as ``(job, start, end, completed)``."""
        open_ = {}
        out = []
        for e in self.events:
            if e.kind == EventKind.START:
                open_[e.job] = e.time
            else:
                out.append((e.job, open_.pop(e.job), e.time,
                            e.kind == EventKind.COMPLETE))
        return out


def trace_from_runs(runs: Iterable[tuple[Job, Fraction]]) -> Trace:
    """A non-preemptive trace from ``(job, start)`` pairs."""
    events = []
    value = Fraction(0)
    for job, start in sorted(runs, key=lambda x: x[1]):
        events.append(TraceEvent(start, EventKind.START, job.id))
        events.append(TraceEvent(start + job.p, EventKind.COMPLETE, job.id))
        value += job.w
    events.sort(key=lambda e: (e.time, e.kind != EventKind.COMPLETE))
    return Trace(tuple(events), value)


@dataclass
class FeasibilityReport:
    ok: bool
    value: Fraction
    violations: list[str] = field(default_factory=list)


def schedule_feasible(trace: Trace, instance: Instance) -> FeasibilityReport:
    jobs = instance.by_id()
    bad = []
    running = None  # (job id, start)
    starts, closes, completes = {}, {}, {}
    last_t = None
    for e in trace.events:
        if e.job not in jobs:
            raise UnknownJobId(e.job)
        job = jobs[e.job]
        if last_t is not None and e.time < last_t:
            bad.append(f"event at {e.time} out of order")
        last_t = e.time
        if e.kind == EventKind.START:
            starts[e.job] = starts.get(e.job, 0) + 1
            if running is not None:
                bad.append(f"{e.job} started at {e.time} while {running[0]} runs")
            if e.time < job.r:
                bad.append(f"{e.job} started before arrival")
            if e.time + job.p > job.d:
                bad.append(f"{e.job} started at {e.time}, cannot meet deadline")
            running = (e.job, e.time)
            continue
        closes[e.job] = closes.get(e.job, 0) + 1
        if running is None or running[0] != e.job:
            bad.append(f"{e.kind.value} of {e.job} at {e.time} without a run")
            continue
        start = running[1]
        running = None
        if e.kind == EventKind.COMPLETE:
            completes[e.job] = completes.get(e.job, 0) + 1
            if e.time != start + job.p:
                bad.append(f"{e.job} completed after {e.time - start}, not {job.p}")
            if e.time > job.d:
                bad.append(f"{e.job} completed after its deadline")
        elif e.time < start:
            bad.append(f"{e.job} aborted before it started")
    if running is not None:
        bad.append(f"{running[0]} never closed")
    bad += [f"{j} completed {n} times" for j, n in completes.items() if n > 1]
    bad += [f"{j}: {n} starts vs {closes.get(j, 0)} closes"
            for j, n in starts.items() if n != closes.get(j, 0)]
    value = sum((jobs[j].w for j in completes), Fraction(0))
    if value != trace.value:
        bad.append(f"trace claims value {trace.value}, completions give {value}")
    return FeasibilityReport(not bad, value, bad)


def schedule_value(trace: Trace, instance: Optional[Instance] = None) -> Fraction:
    """Total weight of the jobs completed in ``trace``.

    Without an instance this is the value the trace carries; with one, the
    weights are looked up afresh.
    """
    if instance is None:
        return trace.value
    jobs = instance.by_id()
    return sum((jobs[j].w for j in trace.completed()), Fraction(0))
