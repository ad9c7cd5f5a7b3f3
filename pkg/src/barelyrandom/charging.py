"""Charging argument for RAN-J, run on concrete traces.

Unit slot ``s`` is ``[s-1, s)``; A accepts only in odd slots and B only in
even ones, so every slot has at most one accepted job, ``acc(s)``.

Each job OPT starts in slot ``s`` is charged as follows, with P the policy
owning ``s`` and Q the other one:

* P accepted something at least as heavy in ``s``: the full weight goes to
  ``s`` (downward, 1 unit);
* otherwise half goes to the earlier slot where P accepted the job (self,
  0.5 unit), and the other half either to the slot where Q accepted it
  earlier (self) or to ``s - 1`` (backward, 0.5 unit).

Slots with 2 units are bad and get paired with distinct good slots (at most
1 unit) holding a job at least as heavy as the one behind the backward
charge. Anything the argument takes for granted and the traces contradict is
raised as ``ChargingFailure`` / ``PairingFailure``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (Instance, ScheduleError, Trace, UnknownJobId,
                   schedule_feasible)

DOWNWARD, SELF, BACKWARD = "downward", "self", "backward"
UNITS = {DOWNWARD: Fraction(1), SELF: Fraction(1, 2), BACKWARD: Fraction(1, 2)}
A, B = 0, 1


class InstanceMismatch(ScheduleError):
    pass


class ChargingFailure(ScheduleError):
    pass


class PairingFailure(ScheduleError):
    pass


def slot_of(t: Fraction) -> int:
    if t < 0:
        raise InstanceMismatch(f"start time {t} before slot 1")
    return math.floor(t) + 1


def owner(slot: int) -> int:
    return A if slot % 2 == 1 else B


@dataclass(frozen=True)
class Charge:
    kind: str
    slot: int
    job: str
    weight: Fraction  # weight actually charged (half the job for self/backward)
    source: int  # the OPT slot generating it

    @property
    def units(self) -> Fraction:
        return UNITS[self.kind]


@dataclass
class ChargeLedger:
    charges: dict = field(default_factory=dict)  # slot -> {kind: Charge}
    accepted: dict = field(default_factory=dict)  # slot -> Job (A in odd, B in even)
    acc_slot: list = field(default_factory=lambda: [{}, {}])  # policy -> job id -> slot
    opt: dict = field(default_factory=dict)  # slot -> Job
    opt_value: Fraction = Fraction(0)
    val_a: Fraction = Fraction(0)
    val_b: Fraction = Fraction(0)

    def units(self, slot) -> Fraction:
        return sum((c.units for c in self.charges.get(slot, {}).values()), Fraction(0))

    def weight(self, slot) -> Fraction:
        return sum((c.weight for c in self.charges.get(slot, {}).values()), Fraction(0))

    def has(self, slot, kind) -> bool:
        return kind in self.charges.get(slot, {})

    def acc_weight(self, slot) -> Fraction:
        j = self.accepted.get(slot)
        return j.w if j is not None else Fraction(0)

    def total(self) -> Fraction:
        return sum((self.weight(s) for s in self.charges), Fraction(0))

    def slots(self):
        return sorted(set(self.charges) | set(self.accepted))

    def to_json(self) -> dict:
        from .core import fmt_rat
        out = {}
        for s in self.slots():
            acc = self.accepted.get(s)
            opt = self.opt.get(s)
            out[str(s)] = {
                "owner": "AB"[owner(s)],
                "accepted": acc.id if acc else None,
                "opt": opt.id if opt else None,
                "units": fmt_rat(self.units(s)),
                "charges": {k: {"job": c.job, "weight": fmt_rat(c.weight),
                                "from": c.source}
                            for k, c in sorted(self.charges.get(s, {}).items())},
            }
        return out


def _accepted(trace: Trace, by_id, who: int):
    out = {}
    for jid, start, _end, done in trace.runs():
        if jid not in by_id:
            raise InstanceMismatch(f"trace mentions unknown job {jid}")
        if not done:
            continue
        s = slot_of(start)
        if owner(s) != who:
            raise InstanceMismatch(f"{'AB'[who]} accepted {jid} in slot {s}, "
                                   "which it does not own")
        if s in out:
            raise InstanceMismatch(f"two jobs accepted in slot {s}")
        out[s] = by_id[jid]
    return out


def compute_charges(opt_trace: Trace, a_trace: Trace, b_trace: Trace,
                    instance: Instance) -> ChargeLedger:
    for name, tr in (("OPT", opt_trace), ("A", a_trace), ("B", b_trace)):
        try:
            rep = schedule_feasible(tr, instance)
        except UnknownJobId as exc:
            raise InstanceMismatch(f"{name} trace mentions unknown job {exc}") from exc
        if not rep.ok:
            raise InstanceMismatch(f"{name} trace infeasible: {rep.violations[0]}")
    by_id = instance.by_id()
    led = ChargeLedger()
    for who, tr in ((A, a_trace), (B, b_trace)):
        acc = _accepted(tr, by_id, who)
        led.accepted.update(acc)
        led.acc_slot[who] = {j.id: s for s, j in acc.items()}
    led.val_a = sum((j.w for s, j in led.accepted.items() if owner(s) == A), Fraction(0))
    led.val_b = sum((j.w for s, j in led.accepted.items() if owner(s) == B), Fraction(0))

    def add(kind, slot, job, weight, source):
        if slot < 1:
            raise ChargingFailure(f"{kind} charge of {job.id} to slot {slot}")
        bucket = led.charges.setdefault(slot, {})
        if kind in bucket:
            raise ChargingFailure(f"slot {slot} gets a second {kind} charge")
        bucket[kind] = Charge(kind, slot, job.id, weight, source)

    for jid, start, _end, done in opt_trace.runs():
        if not done:
            continue
        job = by_id[jid]
        s = slot_of(start)
        if s in led.opt:
            raise InstanceMismatch(f"OPT starts two jobs in slot {s}")
        led.opt[s] = job
        led.opt_value += job.w
        p, q = owner(s), 1 - owner(s)
        if led.acc_weight(s) >= job.w and s in led.accepted:
            add(DOWNWARD, s, job, job.w, s)
            continue
        sp = led.acc_slot[p].get(jid)
        if sp is None or sp >= s:
            raise ChargingFailure(
                f"{'AB'[p]} neither outweighs nor accepted earlier OPT job {jid} (slot {s})")
        add(SELF, sp, job, job.w / 2, s)
        sq = led.acc_slot[q].get(jid)
        if sq is not None and sq < s:
            add(SELF, sq, job, job.w / 2, s)
        else:
            add(BACKWARD, s - 1, job, job.w / 2, s)
    return led


GOOD, MID, BAD = "Good", "Mid", "Bad"


@dataclass
class SlotClass:
    kind: dict  # slot -> Good / Mid / Bad
    bad: dict  # bad slot -> (X, Y) job ids

    def good_slots(self):
        return [s for s, k in self.kind.items() if k == GOOD]


def classify_slots(led: ChargeLedger) -> SlotClass:
    kind, bad = {}, {}
    for s in led.slots():
        u = led.units(s)
        if u <= 1:
            kind[s] = GOOD
        elif u == Fraction(3, 2):
            kind[s] = MID
        else:
            kind[s] = BAD
            if not led.has(s, BACKWARD):
                raise ChargingFailure(f"bad slot {s} without a backward charge")
            x = led.accepted.get(s)
            y = led.opt.get(s + 1)
            bad[s] = (x.id if x else None, y.id if y else None)
    return SlotClass(kind, bad)


def check_bad_slots(led: ChargeLedger, cls: SlotClass) -> list[str]:
    """Both X and Y of a bad slot were accepted by the other policy before it."""
    problems = []
    for s, (x, y) in cls.bad.items():
        other = led.acc_slot[1 - owner(s)]
        for name, jid in (("X", x), ("Y", y)):
            t = other.get(jid)
            if jid is None or t is None or t >= s:
                problems.append(f"bad slot {s}: {name}={jid} not accepted by "
                                f"{'AB'[1 - owner(s)]} before it")
    return problems


@dataclass
class PairStep:
    special: int
    identified: tuple
    z: Optional[str] = None


@dataclass
class Pairing:
    pairs: dict  # bad slot -> good slot
    substep: dict  # bad slot -> 1 or 2
    trail: dict  # bad slot -> list of PairStep


def _pair_one(s: int, x: str, y: str, led: ChargeLedger, cls: SlotClass):
    q = 1 - owner(s)
    q_slot = led.acc_slot[q]
    try:
        found = sorted({q_slot[x], q_slot[y]})
    except KeyError as exc:
        raise PairingFailure(f"bad slot {s}: {exc} never accepted by {'AB'[q]}")
    if len(found) != 2 or found[1] >= s:
        raise PairingFailure(f"bad slot {s}: X/Y slots {found} not both before it")
    special = found[1]
    trail = []
    while True:
        trail.append(PairStep(special, tuple(found)))
        # step .1
        if led.units(special) <= 1:
            return special, 1, trail
        # step .2
        if not led.has(special, DOWNWARD):
            raise PairingFailure(f"bad slot {s}: special slot {special} has no downward")
        prev = special - 1
        if led.has(prev, BACKWARD):
            raise PairingFailure(f"bad slot {s}: slot {prev} has a backward charge")
        if not led.has(prev, SELF):
            if prev not in led.accepted:
                raise PairingFailure(f"bad slot {s}: good slot {prev} accepts nothing")
            return prev, 2, trail
        # step .3
        z = led.accepted.get(prev)
        trail[-1].z = z.id
        s_opt = next((t for t, j in led.opt.items() if j.id == z.id), None)
        s2 = q_slot.get(z.id)
        if s_opt is None or s2 is None or s2 >= min(s, s_opt):
            raise PairingFailure(f"bad slot {s}: {z.id} not accepted by "
                                 f"{'AB'[q]} before min({s}, {s_opt})")
        if s2 in found:
            raise PairingFailure(f"bad slot {s}: slot {s2} identified twice")
        special = max(found[0], s2)
        found = sorted(found + [s2])


def pair_bad_slots(led: ChargeLedger, cls: SlotClass) -> Pairing:
    pairs, substep, trail = {}, {}, {}
    for s, (x, y) in sorted(cls.bad.items()):
        good, sub, tr = _pair_one(s, x, y, led, cls)
        if led.acc_weight(good) < led.opt[s + 1].w:
            raise PairingFailure(f"good slot {good} lighter than Y of bad slot {s}")
        pairs[s], substep[s], trail[s] = good, sub, tr
    used = {}
    for s, g in pairs.items():
        if g in used:
            raise PairingFailure(f"bad slots {used[g]} and {s} share good slot {g}")
        used[g] = s
    return Pairing(pairs, substep, trail)


@dataclass
class Report:
    ok: bool
    violations: list
    opt: Fraction
    val_a: Fraction
    val_b: Fraction
    charged: Fraction

    @property
    def ratio(self):
        total = self.val_a + self.val_b
        return self.opt / total if total else math.inf


def verify_ratio(led: ChargeLedger, pairing: Pairing, cls: Optional[SlotClass] = None
                 ) -> Report:
    bound = Fraction(3, 2)
    bad = []
    for slot, charges in led.charges.items():
        for c in charges.values():
            full = c.weight if c.kind == DOWNWARD else 2 * c.weight
            if full > led.acc_weight(slot):
                bad.append(f"slot {slot}: {c.kind} charge of {c.job} heavier than "
                           "the accepted job")
    if cls is not None:
        bad.extend(check_bad_slots(led, cls))
    paired = set(pairing.pairs) | set(pairing.pairs.values())
    for s in led.slots():
        if s not in paired and led.weight(s) > bound * led.acc_weight(s):
            bad.append(f"slot {s}: charged {led.weight(s)} > 1.5 * {led.acc_weight(s)}")
    for s, g in pairing.pairs.items():
        if led.weight(s) + led.weight(g) > bound * (led.acc_weight(s) + led.acc_weight(g)):
            bad.append(f"pair ({s}, {g}) over 1.5")
    charged = led.total()
    if charged != led.opt_value:
        bad.append(f"charged {charged} != OPT {led.opt_value}")
    if led.opt_value > bound * (led.val_a + led.val_b):
        bad.append(f"OPT {led.opt_value} > 1.5 * ({led.val_a} + {led.val_b})")
    return Report(not bad, bad, led.opt_value, led.val_a, led.val_b, charged)


def charging_report(instance: Instance, opt_trace=None, pair=None):
    """Run RAN-J and OPT on ``instance`` and the whole argument; returns
    ``(ledger, classes, pairing, report)``."""
    from .offline import opt_equal_jobs
    from .policies import ran_j_pair
    from .sim import run_mixture
    pair = pair or ran_j_pair()
    mix = run_mixture(instance, pair)
    if opt_trace is None:
        opt_trace = opt_equal_jobs(instance).witness
    led = compute_charges(opt_trace, mix.trace_a, mix.trace_b, instance)
    cls = classify_slots(led)
    pairing = pair_bad_slots(led, cls)
    return led, cls, pairing, verify_ratio(led, pairing, cls)
