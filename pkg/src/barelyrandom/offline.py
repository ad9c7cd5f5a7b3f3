"""Exact offline optima, plus brute-force oracles that cross-check them.

The offline optimum never needs to abort: an aborted restart-run is wasted
work, so an optimal schedule exists among non-preemptive ones. Both the
dynamic programs and the brute-force oracles search that space.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .core import Instance, ScheduleError, Trace, trace_from_runs


class NotIntervals(ScheduleError):
    pass


class TooLarge(ScheduleError):
    pass


@dataclass
class OptResult:
    value: Fraction
    witness: Trace
    chosen: tuple = ()


def _intervals(instance):
    jobs = instance.jobs if isinstance(instance, Instance) else tuple(instance)
    for j in jobs:
        if not j.is_interval:
            raise NotIntervals(f"{j.id} is not an interval")
    return jobs


def opt_intervals(instance) -> OptResult:
    """Maximum-weight set of pairwise disjoint intervals.

    Classic weighted interval scheduling: sort by deadline, and for each
    interval binary-search the last one that ends by its arrival.
    """
    jobs = sorted(_intervals(instance), key=lambda j: (j.d, j.r, j.id))
    ends = [j.d for j in jobs]
    best = [Fraction(0)] * (len(jobs) + 1)
    take = [False] * (len(jobs) + 1)
    prev = [0] * (len(jobs) + 1)
    for k, j in enumerate(jobs, 1):
        prev[k] = bisect.bisect_right(ends, j.r, 0, k - 1)
        with_j = best[prev[k]] + j.w
        if with_j > best[k - 1]:
            best[k], take[k] = with_j, True
        else:
            best[k] = best[k - 1]
    chosen = []
    k = len(jobs)
    while k > 0:
        if take[k]:
            chosen.append(jobs[k - 1])
            k = prev[k]
        else:
            k -= 1
    chosen.reverse()
    return OptResult(best[-1], trace_from_runs((j, j.r) for j in chosen),
                     tuple(chosen))


def brute_force_intervals(instance, cap: int = 16) -> Fraction:
    """Best total weight over all pairwise compatible subsets."""
    jobs = list(_intervals(instance))
    n = len(jobs)
    if n > cap:
        raise TooLarge(f"{n} intervals > {cap}")
    clash = [0] * n
    for a, b in combinations(range(n), 2):
        ja, jb = jobs[a], jobs[b]
        if ja.r < jb.d and jb.r < ja.d:
            clash[a] |= 1 << b
            clash[b] |= 1 << a
    best = Fraction(0)

    def rec(i, mask, val):
        nonlocal best
        if i == n:
            best = max(best, val)
            return
        rec(i + 1, mask, val)
        if not clash[i] & mask:
            rec(i + 1, mask | 1 << i, val + jobs[i].w)

    rec(0, 0, Fraction(0))
    return best


def _scaled_times(jobs):
    scale = math.lcm(*(x.denominator for j in jobs for x in (j.r, j.d, j.p)))
    return scale, [(int(j.r * scale), int(j.d * scale)) for j in jobs]


def opt_equal_jobs(instance, cap: int = 12) -> OptResult:
    """Optimum for unit-length jobs by a time-indexed DP on a canonical grid.

    Some optimal schedule starts every job at a release time plus a whole
    number of lengths, so the candidate start times are
    ``{r_j + k : 0 <= k < n}``. The state is (grid position, jobs still
    usable); jobs that can no longer finish are dropped from the state.
    """
    jobs = list(instance.jobs if isinstance(instance, Instance) else instance)
    n = len(jobs)
    if n > cap:
        raise TooLarge(f"{n} jobs > {cap}")
    if n == 0:
        return OptResult(Fraction(0), Trace())
    if any(j.p != 1 for j in jobs):
        raise ScheduleError("opt_equal_jobs needs unit lengths")
    scale, rd = _scaled_times(jobs)
    grid = sorted({r + k * scale for r, _ in rd for k in range(n)})
    nxt = [bisect.bisect_left(grid, t + scale) for t in grid]
    weights = [j.w for j in jobs]

    @lru_cache(maxsize=None)
    def f(g, avail):
        if g == len(grid) or not avail:
            return Fraction(0), None
        t = grid[g]
        live = avail
        for i in range(n):
            if live >> i & 1 and t + scale > rd[i][1]:
                live &= ~(1 << i)
        if live != avail:
            return f(g, live)
        best, arg = f(g + 1, live)[0], None
        for i in range(n):
            if live >> i & 1 and rd[i][0] <= t:
                v = weights[i] + f(nxt[g], live & ~(1 << i))[0]
                if v > best:
                    best, arg = v, i
        return best, arg

    full = (1 << n) - 1
    value = f(0, full)[0]
    runs = []
    g, avail = 0, full
    while g < len(grid) and avail:
        t = grid[g]
        live = avail
        for i in range(n):
            if live >> i & 1 and t + scale > rd[i][1]:
                live &= ~(1 << i)
        avail = live
        _, arg = f(g, avail)
        if arg is None:
            g += 1
        else:
            runs.append((jobs[arg], Fraction(t, scale)))
            avail &= ~(1 << arg)
            g = nxt[g]
    f.cache_clear()
    return OptResult(value, trace_from_runs(runs), tuple(j for j, _ in runs))


def brute_force_jobs(instance, cap: int = 8) -> Fraction:
    """Best value over every ordered subset, each job started as early as possible."""
    jobs = list(instance.jobs if isinstance(instance, Instance) else instance)
    if len(jobs) > cap:
        raise TooLarge(f"{len(jobs)} jobs > {cap}")
    best = Fraction(0)

    def rec(t, left, val):
        nonlocal best
        best = max(best, val)
        for j in left:
            s = j.r if t is None or t < j.r else t
            if s + j.p <= j.d:
                rec(s + j.p, [k for k in left if k is not j], val + j.w)

    rec(None, jobs, Fraction(0))
    return best


def opt_value(instance: Instance) -> Fraction:
    """Dispatch to the right exact optimum for the instance's class."""
    if all(j.is_interval for j in instance.jobs):
        return opt_intervals(instance).value
    return opt_equal_jobs(instance).value
