"""Randomised verification suites shared by the CLI ``verify`` command and the tests.

Each suite returns a ``SuiteResult``; nothing here raises on a failed check,
failures are collected (capped) so a report can show them.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .charging import (ChargingFailure, PairingFailure, charging_report)
from .core import Instance, InstanceClass, validate_class
from .generators import GenParams, bad_slot_example, benevolent_fn, gen_instance
from .offline import (brute_force_intervals, brute_force_jobs, opt_equal_jobs,
                      opt_intervals, opt_value)
from .policies import A, RanD, make_pair
from .sim import Simulation, run_mixture

MAX_FAILURES = 20


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def fail(self, msg: str):
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(msg)
        else:
            self.stats["more_failures"] = self.stats.get("more_failures", 0) + 1

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = " ".join(f"{k}={v}" for k, v in self.stats.items())
        return f"{status} {self.name}: {self.checked} checked, {len(self.failures)} failures" \
               f"{' ' + extra if extra else ''} ({self.seconds:.1f}s)"


def _timed(fn):
    def run(*args, **kw):
        t = time.perf_counter()
        res = fn(*args, **kw)
        res.seconds = time.perf_counter() - t
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def random_params(rng: random.Random, n_max: int, seed: int, **kw) -> GenParams:
    """Instance parameters scaled so that jobs actually compete."""
    n = rng.randint(1, n_max)
    horizon = Fraction(max(1, n * rng.choice([1, 2, 3])), 4)
    return GenParams(n=n, seed=seed, horizon=horizon, **kw)


def _fmt(x) -> str:
    return str(x) if not isinstance(x, Fraction) else f"{x.numerator}/{x.denominator}"


@_timed
def competitive(cls, policy: str, count: int, n_max: int, seed: int = 0,
                preset: Optional[str] = None, factor=Fraction(1),
                opt: Callable = None) -> SuiteResult:
    """OPT <= factor * (val(A) + val(B)) on ``count`` random instances."""
    cls = InstanceClass(cls)
    label = f"{policy} on {cls.value}{'/' + preset if preset else ''}"
    res = SuiteResult(f"competitive[{label}]")
    pair = make_pair(policy)
    f = benevolent_fn(preset) if preset else None
    rng = random.Random(seed)
    opt = opt or opt_value
    worst = Fraction(0)
    kw = {"max_length": Fraction(3)} if cls != InstanceClass.EQUAL_LENGTH_JOBS else {}
    for i in range(count):
        params = random_params(rng, n_max, rng.randrange(1 << 30), f=f, **kw)
        inst = gen_instance(cls, params)
        rep = validate_class(inst)
        if not rep.ok:
            res.fail(f"seed {params.seed}: generator produced invalid instance "
                     f"({rep.violations[0]})")
            continue
        mix = run_mixture(inst, pair)
        best = opt(inst)
        total = mix.val_a + mix.val_b
        if best > factor * total:
            res.fail(f"seed {params.seed} n={params.n}: OPT {best} > {factor} * {total}")
        if mix.expected:
            worst = max(worst, best / mix.expected)
        res.checked += 1
    res.stats["max_ratio"] = _fmt(worst)
    return res


@_timed
def oracles(n_intervals: int = 1000, n_jobs: int = 500, seed: int = 0,
            opt_iv: Callable = None) -> SuiteResult:
    """Dynamic programs agree with exhaustive search."""
    res = SuiteResult("oracles")
    opt_iv = opt_iv or (lambda inst: opt_intervals(inst).value)
    rng = random.Random(seed)
    classes = [InstanceClass.EQUAL_LENGTH_INTERVALS, InstanceClass.MONOTONE,
               InstanceClass.C_BENEVOLENT, InstanceClass.D_BENEVOLENT]
    for i in range(n_intervals):
        cls = classes[i % len(classes)]
        f = None
        if cls == InstanceClass.C_BENEVOLENT:
            f = benevolent_fn(rng.choice(["linear", "power2", "quadratic"]))
        elif cls == InstanceClass.D_BENEVOLENT:
            f = benevolent_fn(rng.choice(["reciprocal", "expdecay"]))
        inst = gen_instance(cls, random_params(rng, 12, rng.randrange(1 << 30), f=f))
        a, b = opt_iv(inst), brute_force_intervals(inst, cap=12)
        if a != b:
            res.fail(f"{cls.value} n={len(inst)}: dp {a} != brute {b}")
        res.checked += 1
    for i in range(n_jobs):
        params = random_params(rng, 7, rng.randrange(1 << 30))
        inst = gen_instance(InstanceClass.EQUAL_LENGTH_JOBS, params)
        a, b = opt_equal_jobs(inst).value, brute_force_jobs(inst, cap=7)
        if a != b:
            res.fail(f"jobs seed {params.seed}: dp {a} != brute {b}")
        res.checked += 1
    return res


@_timed
def charging(count: int = 2000, n_max: int = 12, seed: int = 0) -> SuiteResult:
    """Every check of the RAN-J charging argument, on random instances."""
    res = SuiteResult("charging")
    rng = random.Random(seed)
    n_bad = 0
    inst, opt_trace = bad_slot_example()
    led, cls, pairing, rep = charging_report(inst, opt_trace)
    if len(cls.bad) != 1 or len(pairing.pairs) != 1 or not rep.ok:
        res.fail(f"bad-slot example: bad={cls.bad}, pairs={pairing.pairs}, "
                 f"violations={rep.violations}")
    n_bad += len(cls.bad)
    for i in range(count):
        # near-equal weights make bad slots far more likely
        if i % 2:
            wr = (Fraction(1), Fraction(11, 10))
            grid = 100
        else:
            wr, grid = (Fraction(1), Fraction(10)), 4
        n = rng.randint(1, n_max)
        params = GenParams(n=n, seed=rng.randrange(1 << 30), weight_range=wr,
                           horizon=Fraction(max(1, n * rng.choice([2, 3, 4])), 4),
                           grid=grid, slack_max=Fraction(rng.choice([1, 2, 4])))
        inst = gen_instance(InstanceClass.EQUAL_LENGTH_JOBS, params)
        try:
            led, cls, pairing, rep = charging_report(inst)
        except (ChargingFailure, PairingFailure) as exc:
            res.fail(f"seed {params.seed}: {exc}")
            continue
        over = [s for s in led.slots() if led.units(s) > 2]
        if over:
            res.fail(f"seed {params.seed}: slots {over} above 2 units")
        for msg in rep.violations:
            res.fail(f"seed {params.seed}: {msg}")
        n_bad += len(cls.bad)
        res.checked += 1
    res.stats["bad_slots"] = n_bad
    return res


def ran_d_history(instance: Instance, role: int = A):
    """Run one RAN-D half and return its core's snapshots."""
    pol = RanD(role)
    sim = Simulation(pol, instance.jobs)
    pol.core.record = True
    sim.drain()
    return pol.core.history


def ran_d_violations(history) -> list[str]:
    out = []
    last = {}
    for snap in history:
        key = (snap.phase, snap.slot)
        if snap.residual is not None and snap.residual.d != snap.e:
            out.append(f"t={snap.time}: residual ends at {snap.residual.d}, e={snap.e}")
        if snap.main is not None and snap.main.d < snap.e:
            out.append(f"t={snap.time}: main ends at {snap.main.d} before e={snap.e}")
        if key in last and snap.e > last[key]:
            out.append(f"t={snap.time}: e grew from {last[key]} to {snap.e} in slot {key}")
        last[key] = snap.e
    return out


@_timed
def ran_d_invariant(count: int = 5000, n_max: int = 30, seed: int = 0) -> SuiteResult:
    """Slot end equals the residual's deadline, never exceeds the main's, and only shrinks."""
    res = SuiteResult("ran-d-invariant")
    rng = random.Random(seed)
    events = 0
    for i in range(count):
        f = benevolent_fn(rng.choice(["reciprocal", "expdecay"]))
        inst = gen_instance(InstanceClass.D_BENEVOLENT,
                            random_params(rng, n_max, rng.randrange(1 << 30), f=f))
        hist = ran_d_history(inst)
        events += len(hist)
        for msg in ran_d_violations(hist)[:3]:
            res.fail(msg)
        res.checked += 1
    res.stats["events"] = events
    return res


@_timed
def merging_lemma(count: int = 10000, seed: int = 0,
                  presets=("linear", "power2", "quadratic")) -> SuiteResult:
    """f(P) >= sum f(p_i) whenever P >= sum p_i, for C-benevolent presets."""
    res = SuiteResult("merging-lemma")
    rng = random.Random(seed)
    for name in presets:
        f = benevolent_fn(name)
        for _ in range(count):
            k = rng.randint(1, 6)
            parts = [Fraction(rng.randint(1, 40), rng.randint(1, 8)) for _ in range(k)]
            total = sum(parts) + Fraction(rng.randint(0, 20), rng.randint(1, 8))
            if f.merge_gap(parts, total) < 0:
                res.fail(f"{name}: parts {parts}, total {total}")
            res.checked += 1
    return res


ALL = ("oracles", "charging", "rand", "lemma", "competitive")


def run_suite(name: str, quick: bool = False, seed: int = 0) -> list[SuiteResult]:
    scale = 10 if quick else 1
    if name == "oracles":
        return [oracles(1000 // scale, 500 // scale, seed)]
    if name in ("charging", "conservation"):
        return [charging(2000 // scale, 12, seed)]
    if name == "rand":
        return [ran_d_invariant(5000 // scale, 30, seed)]
    if name == "lemma":
        return [merging_lemma(10000 // scale, seed)]
    if name == "competitive":
        return [competitive("EqualLengthIntervals", "ran", 2000 // scale, 50, seed),
                competitive("Monotone", "ran-m", 1000 // scale, 40, seed),
                competitive("CBenevolent", "ran-c", 1000 // scale, 40, seed, "power2"),
                competitive("DBenevolent", "ran-d", 1000 // scale, 40, seed, "reciprocal"),
                competitive("EqualLengthJobs", "ran-j", 500 // scale, 10, seed,
                            factor=Fraction(3, 2))]
    if name == "all":
        return [r for s in ALL for r in run_suite(s, quick, seed)]
    raise KeyError(f"unknown suite {name!r}; choose from {ALL + ('all',)}")
