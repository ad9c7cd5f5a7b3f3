"""Adaptive adversary forcing OPT / E[ALG] >= 2 - delta on any two-policy mixture.

The adversary releases bundles of overlapping unit intervals (sets) and
watches what the two halves of the mixture are running after each bundle.
Depending on that it either escalates with a new, nested set, or releases one
or two extra intervals that the mixture cannot profit from, and stops.

Every terminal move comes with a *claimed* optimal schedule (a chain of
disjoint released intervals); the exact offline optimum of the released
instance is computed at the end and must dominate the claim.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from .core import InstanceClass, Instance, Job, ScheduleError, make_interval, rat
from .generators import build_set
from .offline import opt_intervals
from .sim import Observation, PolicyPair, StepCapExceeded, ratio, run_adaptive

DEFAULT_RELEASE_CAP = 10_000_000


class UnclassifiableState(ScheduleError):
    pass


class DegenerateU(ScheduleError):
    pass


class CaseTag(str, Enum):
    CONTINUE_2_SETS = "Continue2Sets"
    STAYED_ON_BOTH = "StayedOnBoth"
    Y_EARLY = "YEarly"
    A_HEAVY = "AHeavy"
    AB_SEPARATE = "ABSeparate"
    LARGE_J = "LargeJ"
    STEP_ON = "StepOn"
    TERMINAL = "Terminal"


def _release_cap() -> int:
    env = os.environ.get("SCHED_STEP_CAP")
    return int(env) if env else DEFAULT_RELEASE_CAP


@dataclass
class GameConfig:
    delta: Fraction = Fraction(1, 2)
    v1: Fraction = Fraction(1)
    step_cap: int = 200
    release_cap: int = field(default_factory=_release_cap)
    # arrivals of a release occupy the middle (1 - 2*margin) of their window
    margin: Fraction = Fraction(1, 4)

    def __post_init__(self):
        self.delta, self.v1, self.margin = rat(self.delta), rat(self.v1), rat(self.margin)
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.v1 < 1:
            raise ValueError("v1 must be at least 1")
        if not 0 < self.margin < Fraction(1, 2):
            raise ValueError("margin must lie in (0, 1/2)")

    @property
    def c(self) -> Fraction:
        return 2 - self.delta / 2

    @property
    def eps1(self) -> Fraction:
        return self.delta / 8

    def w1(self, p) -> Fraction:
        return self.c * ((1 - p) / p) * (4 / self.delta) * self.v1

    def u(self, p) -> Fraction:
        den = 1 - 2 * p + p * self.delta / 2
        if den <= 0:
            raise DegenerateU(f"1 - 2p + p*delta/2 = {den} for p={p}")
        return (1 - p + p * self.delta / 4) / den


@dataclass
class SetInfo:
    index: int
    v: Fraction
    w: Fraction
    eps: Fraction
    jobs: list
    base: Fraction  # weight of the claimed schedule before this set


@dataclass
class GameState:
    step: int = 0
    sets: list = field(default_factory=list)
    steps: list = field(default_factory=list)  # observed (I_j, J_j)
    member: dict = field(default_factory=dict)  # job id -> (set, position)
    released: int = 0
    status: str = "Stepping"
    opt_claimed: Fraction = Fraction(0)
    terminal_case: Optional[CaseTag] = None
    cases: list = field(default_factory=list)  # every tag dispatched, in order

    def pred(self, job: Job) -> Optional[Job]:
        """The interval released just before ``job`` in its set, if any."""
        s, k = self.member[job.id]
        return s.jobs[k - 1] if k > 0 else None

    def pred_w(self, job: Job) -> Fraction:
        p = self.pred(job)
        return p.w if p is not None else Fraction(0)


@dataclass
class GameOutcome:
    instance: Instance
    opt_claimed: Fraction
    opt_dp: Fraction
    expected_alg: Fraction
    ratio: object
    steps_used: int
    terminal_case: CaseTag
    p: Fraction
    cases: tuple = ()
    val_a: Fraction = Fraction(0)
    val_b: Fraction = Fraction(0)

    def to_json(self) -> dict:
        from .core import fmt_rat
        r = self.ratio
        return {"opt_claimed": fmt_rat(self.opt_claimed), "opt_dp": fmt_rat(self.opt_dp),
                "expected_alg": fmt_rat(self.expected_alg),
                "ratio": "inf" if r == float("inf") else fmt_rat(r),
                "ratio_decimal": float(r), "steps_used": self.steps_used,
                "terminal_case": self.terminal_case.value, "p": fmt_rat(self.p),
                "cases": [c.value for c in self.cases],
                "released": len(self.instance.jobs)}


def _window(lo, hi, margin):
    if not lo < hi:
        raise ScheduleError(f"empty release window ({lo}, {hi})")
    return lo + (hi - lo) * margin, (hi - lo) * (1 - 2 * margin)


class LowerBoundAdversary:
    """The game as an ``AdversarySource``; side A is the one with probability p <= 1/2."""

    def __init__(self, cfg: GameConfig, p):
        self.cfg = cfg
        self.p = rat(p)
        if not 0 < self.p <= Fraction(1, 2):
            raise ValueError("the adversary needs 0 < p <= 1/2")
        self.q = 1 - self.p
        self.state = GameState()
        self._gen = self._play()
        self._started = False
        self._special = 0

    # -- AdversarySource -------------------------------------------------
    def next(self, obs: Observation):
        try:
            if not self._started:
                self._started = True
                return next(self._gen)
            return self._gen.send(obs)
        except StopIteration:
            return None

    # -- releases ----------------------------------------------------------
    def _count(self, n):
        self.state.released += n
        if self.state.released > self.cfg.release_cap:
            raise StepCapExceeded(
                f"{self.state.released} intervals released, cap {self.cfg.release_cap}")

    def _new_set(self, v, w, eps, lo, hi, base) -> SetInfo:
        st = self.state
        t0, span = _window(lo, hi, self.cfg.margin)
        idx = len(st.sets) + 1
        # check the size before materialising the intervals
        from .generators import set_step
        m = 1 if w == v else int((w - v) / set_step(v, w, eps)) + 1
        self._count(m)
        jobs = build_set(v, w, eps, t0, span, prefix=f"S{idx}")
        s = SetInfo(idx, v, w, eps, jobs, base)
        st.sets.append(s)
        for k, j in enumerate(jobs):
            st.member[j.id] = (s, k)
        return s

    def _single(self, w, lo, hi) -> Job:
        if not lo < hi:
            raise ScheduleError(f"empty release window ({lo}, {hi})")
        self._count(1)
        self._special += 1
        return make_interval((lo + hi) / 2, 1, w, f"P{self._special}")

    # -- bookkeeping ------------------------------------------------------------
    def _in_set(self, job) -> bool:
        return job is not None and job.id in self.state.member

    def _fresh(self, job) -> bool:
        """A set interval heavier than the set's first one."""
        return self._in_set(job) and self.state.member[job.id][1] > 0

    def _stop_value(self, obs: Observation) -> Fraction:
        """Expected gain if nothing more were released."""
        wa = obs.running_a.w if obs.running_a else 0
        wb = obs.running_b.w if obs.running_b else 0
        return self.p * (obs.value_a + wa) + self.q * (obs.value_b + wb)

    def _finish(self, tag: CaseTag, claimed: Fraction):
        st = self.state
        st.status = "Terminal"
        st.terminal_case = tag
        st.opt_claimed = claimed

    # -- case detection ------------------------------------------------------
    def detect_case(self, obs: Observation, cur: SetInfo):
        """Classify the state right after the last arrival of ``cur``.

        Returns ``(tag, info)``; ``info`` holds the intervals the chosen
        punishment works with.
        """
        a, b = obs.running_a, obs.running_b
        target = (2 - self.cfg.delta) * self._stop_value(obs)
        if cur.base + cur.w >= target:
            moved = any(self._in_set(x) and self.state.member[x.id][0] is cur
                        for x in (a, b))
            return (CaseTag.CONTINUE_2_SETS if moved else CaseTag.STAYED_ON_BOTH), ()
        if self._fresh(a) and self._fresh(b) and b.w <= a.w and b.r <= a.r:
            return CaseTag.A_HEAVY, (a, b)
        for x, y in ((a, b), (b, a)):
            if self._fresh(x) and (y is None or (y.w <= x.w and y.r > x.r)):
                return CaseTag.Y_EARLY, (x, y)
        if self._fresh(a) and self._fresh(b):
            sa, sb = self.state.member[a.id][0], self.state.member[b.id][0]
            if sa is cur and sb is cur and a.w < b.w:
                tag = CaseTag.LARGE_J if b.w >= 2 * a.w else CaseTag.STEP_ON
                return tag, (a, b)
        for x, y in ((b, a), (a, b)):
            if self._fresh(x) and y is not None and y.w <= x.w and y.r <= x.r:
                return CaseTag.AB_SEPARATE, (x, y)
        raise UnclassifiableState(
            f"running A={a and (a.id, a.w)}, B={b and (b.id, b.w)} after set {cur.index}")

    # -- punishments --------------------------------------------------------------
    def _copy_after_pred(self, x: Job, clock, upper=None):
        """A copy of ``x`` released after its predecessor ends and before ``x`` ends."""
        pred = self.state.pred(x)
        lo = max(clock, pred.d) if pred is not None else clock
        hi = x.d if upper is None else min(x.d, upper)
        return self._single(x.w, lo, hi)

    def _claim_after_pred(self, x: Job) -> Fraction:
        s = self.state.member[x.id][0]
        return s.base + self.state.pred_w(x) + x.w

    def punish(self, tag: CaseTag, info, obs: Observation):
        """Generator: release the punishing interval(s), then record the claim."""
        if tag in (CaseTag.Y_EARLY, CaseTag.AB_SEPARATE):
            x, _ = info
            yield [self._copy_after_pred(x, obs.clock)]
            self._finish(tag, self._claim_after_pred(x))
        elif tag == CaseTag.A_HEAVY:
            heavy, light = info
            yield from self._a_heavy(heavy, light, obs, tag)
        else:
            raise ValueError(f"{tag} is not a punishment case")

    def _a_heavy(self, heavy: Job, light: Job, obs: Observation, tag):
        # a copy of the heavier interval, overlapping the lighter one
        jp = self._copy_after_pred(light, obs.clock)
        jp = make_interval(jp.r, 1, heavy.w, jp.id)
        obs = yield [jp]
        # the lighter interval is always B's
        b = obs.running_b
        light_side_left = b is not None and b.id == jp.id
        if light_side_left:
            yield [self._copy_after_pred(heavy, obs.clock, upper=jp.d)]
            self._finish(CaseTag.Y_EARLY, self._claim_after_pred(heavy))
        else:
            s = self.state.member[light.id][0]
            self._finish(tag, s.base + self.state.pred_w(light) + heavy.w)

    # -- escalation ----------------------------------------------------------
    def step_release(self, cur: SetInfo, i_job: Job, j_job: Job, clock) -> SetInfo:
        st = self.state
        st.steps.append((i_job, j_job))
        ws = [i.w for i, _ in st.steps]
        assert all(x < y for x, y in zip(ws, ws[1:])), "w(I_i) must strictly increase"
        v = i_job.w
        w = max(self.cfg.c * (self.p * i_job.w + self.q * j_job.w) - sum(ws), v)
        eps = self.cfg.eps1 / 2 ** len(st.steps)
        pred = st.pred(i_job)
        return self._new_set(v, w, eps, max(clock, pred.d), i_job.d,
                             cur.base + pred.w)

    def large_j_branch(self, cur: SetInfo, i_job: Job, j_job: Job, obs: Observation):
        """Generator for the branch where B's interval is at least twice A's."""
        pred = self.state.pred(j_job)
        u = self.cfg.u(self.p)
        su = self._new_set(Fraction(0), u * j_job.w, cur.eps, max(obs.clock, pred.d),
                           j_job.d, cur.base + pred.w)
        obs = yield su.jobs
        self._last_obs = obs
        b = obs.running_b
        if b is not None and b.id == j_job.id:
            self._finish(CaseTag.LARGE_J, su.base + su.w)
            return
        a = obs.running_a
        if su.base + su.w >= (2 - self.cfg.delta) * self._stop_value(obs):
            self._finish(CaseTag.LARGE_J, su.base + su.w)
            return
        if b is None or not self._in_set(b):
            raise UnclassifiableState(f"B left {j_job.id} for {b and b.id}")
        if a is not None and self._in_set(a) and a.w > b.w:
            if a.r >= b.r and self._fresh(b):
                yield from self._a_heavy(a, b, obs, CaseTag.LARGE_J)
                return
            raise UnclassifiableState(f"A on {a.id} heavier than B on {b.id}")
        if a is None or not self._in_set(a) or a.id == b.id:
            # A did not move into S_u: punish B's interval directly
            yield [self._copy_after_pred(b, obs.clock)]
            self._finish(CaseTag.LARGE_J, self._claim_after_pred(b))
            return
        # a copy of B's interval overlapping A's
        jpp = self._copy_after_pred(a, obs.clock)
        jpp = make_interval(jpp.r, 1, b.w, jpp.id)
        obs = yield [jpp]
        a2 = obs.running_a
        if a2 is not None and a2.id == jpp.id and self._fresh(b):
            yield [self._copy_after_pred(b, obs.clock, upper=jpp.d)]
            self._finish(CaseTag.LARGE_J, self._claim_after_pred(b))
        else:
            self._finish(CaseTag.LARGE_J, su.base + self.state.pred_w(a) + b.w)

    # -- the game ------------------------------------------------------------
    def _play(self):
        cfg = self.cfg
        cur = self._new_set(cfg.v1, cfg.w1(self.p), cfg.eps1, Fraction(0), Fraction(1),
                            Fraction(0))
        obs = yield cur.jobs
        while True:
            self._last_obs = obs
            if len(self.state.steps) >= cfg.step_cap:
                raise StepCapExceeded(f"game still stepping after {cfg.step_cap} steps")
            if cur.v == cur.w and self.state.steps:
                self.state.cases.append(CaseTag.TERMINAL)
                self._finish(CaseTag.TERMINAL, cur.base + cur.w)
                return
            tag, info = self.detect_case(obs, cur)
            self.state.cases.append(tag)
            if tag in (CaseTag.STAYED_ON_BOTH, CaseTag.CONTINUE_2_SETS):
                self._finish(tag, cur.base + cur.w)
                return
            if tag == CaseTag.STEP_ON:
                cur = self.step_release(cur, *info, obs.clock)
                obs = yield cur.jobs
                continue
            if tag == CaseTag.LARGE_J:
                yield from self.large_j_branch(cur, *info, obs)
                return
            yield from self.punish(tag, info, obs)
            return


def lower_bound_game(pair: PolicyPair, cfg: Optional[GameConfig] = None) -> GameOutcome:
    """Play the adversary against ``pair`` and certify the ratio with the exact optimum."""
    cfg = cfg or GameConfig()
    if pair.prob_a > Fraction(1, 2):
        pair = PolicyPair(pair.b, pair.a, 1 - pair.prob_a, pair.name)
    if pair.prob_a == 0:
        raise ValueError("a deterministic algorithm has no probability-p side")
    adv = LowerBoundAdversary(cfg, pair.prob_a)
    res = run_adaptive(adv, pair, step_cap=cfg.step_cap * 4 + 16,
                       class_tag=InstanceClass.EQUAL_LENGTH_INTERVALS)
    st = adv.state
    opt = opt_intervals(res.instance).value
    return GameOutcome(res.instance, st.opt_claimed, opt, res.expected,
                       ratio(opt, res.expected), len(st.steps), st.terminal_case,
                       pair.prob_a, tuple(st.cases), res.val_a, res.val_b)
