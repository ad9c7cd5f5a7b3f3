"""Command-line front end: ``barelyrandom <command> ...``.

Exit codes: 0 ok, 1 a verification or guarantee failed, 2 bad input or
parameters, 3 policy/instance class mismatch, 4 adversary cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .adversary import GameConfig, UnclassifiableState, lower_bound_game
from .charging import charging_report
from .core import InstanceClass, ScheduleError, fmt_rat, rat, validate_class
from .fileio import ParseError, dump_instance, read_instance
from .generators import (GenParams, bad_slot_example, benevolent_fn, gen_instance,
                         named_examples)
from .offline import opt_equal_jobs, opt_intervals, opt_value
from .policies import PAIRS, make_pair
from .sim import ClassMismatch, StepCapExceeded, ratio, run_mixture
from .zoo import random_pair, zoo_pairs

EXIT_FAIL, EXIT_INPUT, EXIT_CLASS, EXIT_CAP = 1, 2, 3, 4


class InputError(Exception):
    pass


def _rat_arg(text: str) -> Fraction:
    try:
        return rat(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} ({exc})")


def _ratio_fields(r) -> dict:
    if r == math.inf:
        return {"ratio": "inf", "ratio_decimal": "inf"}
    return {"ratio": fmt_rat(r), "ratio_decimal": f"{float(r):.6f}"}


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load(path):
    try:
        inst = read_instance(path)
    except OSError as exc:
        raise InputError(str(exc))
    except (ParseError, ScheduleError) as exc:
        raise InputError(f"{path}: {exc}")
    rep = validate_class(inst)
    if not rep.ok:
        raise InputError(f"{path}: not a valid {inst.class_tag.value} instance: "
                         f"{rep.violations[0]}")
    return inst


def report(inst, pair, **meta) -> dict:
    t = time.perf_counter()
    mix = run_mixture(inst, pair)
    best = opt_value(inst)
    out = dict(meta)
    out.update({"policy": pair.name, "class": inst.class_tag.value,
                "n": len(inst.jobs), "val_a": fmt_rat(mix.val_a),
                "val_b": fmt_rat(mix.val_b), "expected": fmt_rat(mix.expected),
                "opt": fmt_rat(best)})
    out.update(_ratio_fields(ratio(best, mix.expected)))
    out["seconds"] = round(time.perf_counter() - t, 6)
    return out


def cmd_simulate(args) -> int:
    inst = _load(args.instance)
    rep = report(inst, make_pair(args.policy), instance=str(args.instance))
    _emit(rep)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rep))
            w.writeheader()
            w.writerow(rep)
    return 0


def _game_pair(name: str, seed: int):
    if name == "random":
        return random_pair(seed)
    if name in PAIRS:
        return make_pair(name)
    zoo = zoo_pairs()
    if name in zoo:
        return zoo[name]
    raise InputError(f"unknown policy {name!r}; choose from "
                     f"{sorted(set(PAIRS) | set(zoo) | {'random'})}")


def cmd_adversary(args) -> int:
    if not 0 < args.delta < 1:
        raise InputError("--delta must lie in (0, 1)")
    pair = _game_pair(args.policy, args.seed)
    if args.p is not None:
        if not 0 < args.p <= Fraction(1, 2):
            raise InputError("--p must lie in (0, 1/2]")
        pair.prob_a = args.p
    cfg = GameConfig(delta=args.delta, v1=args.v1)
    if args.step_cap is not None:
        cfg.step_cap = args.step_cap
    out = lower_bound_game(pair, cfg)
    rec = {"policy": pair.name, "delta": fmt_rat(args.delta), "seed": args.seed}
    rec.update(out.to_json())
    rec.update(_ratio_fields(out.ratio))
    rec["guarantee"] = fmt_rat(2 - args.delta)
    rec["holds"] = out.ratio >= 2 - args.delta and out.opt_dp >= out.opt_claimed
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dump_instance(out.instance))
        rec["instance_file"] = str(args.out)
    _emit(rec)
    return 0 if rec["holds"] else EXIT_FAIL


def _sweep_row(job):
    cls, policy, preset, n, seed = job
    f = benevolent_fn(preset) if preset else None
    inst = gen_instance(cls, GenParams(n=n, seed=seed, f=f,
                                       horizon=Fraction(max(1, n), 2)))
    pair = make_pair(policy)
    mix = run_mixture(inst, pair)
    best = opt_value(inst)
    r = ratio(best, mix.expected)
    row = {"seed": seed, "n": n, "val_a": fmt_rat(mix.val_a), "val_b": fmt_rat(mix.val_b),
           "expected": fmt_rat(mix.expected), "opt": fmt_rat(best)}
    row.update(_ratio_fields(r))
    return row, r


def cmd_sweep(args) -> int:
    if args.count < 1 or args.n < 1:
        raise InputError("--count and --n must be positive")
    cls = InstanceClass(args.cls)
    preset = args.preset
    if preset is None and cls == InstanceClass.C_BENEVOLENT:
        preset = "power2"
    if preset is None and cls == InstanceClass.D_BENEVOLENT:
        preset = "reciprocal"
    pair = make_pair(args.policy)
    if cls not in pair.a.classes:
        raise ClassMismatch(f"{args.policy} does not handle {cls.value} instances")
    jobs = [(cls, args.policy, preset, args.n, args.seed + i) for i in range(args.count)]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as ex:
            results = list(ex.map(_sweep_row, jobs, chunksize=64))
    else:
        results = [_sweep_row(j) for j in jobs]
    results.sort(key=lambda x: x[0]["seed"])
    fields = ["seed", "n", "val_a", "val_b", "expected", "opt", "ratio", "ratio_decimal"]
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=fields)
        w.writeheader()
        for row, _ in results:
            w.writerow(row)
        worst = max(r for _, r in results)
        summary = {"seed": "max", "n": args.n}
        summary.update(_ratio_fields(worst))
        w.writerow(summary)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_verify(args) -> int:
    from . import suites
    if args.charging is not None:
        if args.charging == "example":
            inst, opt_trace = bad_slot_example()
        else:
            inst = _load(args.charging)
            opt_trace = opt_equal_jobs(inst).witness
        led, cls, pairing, rep = charging_report(inst, opt_trace)
        _emit({"ledger": led.to_json(),
               "classes": {str(s): k for s, k in sorted(cls.kind.items())},
               "bad": {str(s): list(xy) for s, xy in cls.bad.items()},
               "pairing": {str(s): g for s, g in pairing.pairs.items()},
               "ok": rep.ok, "violations": rep.violations,
               "opt": fmt_rat(rep.opt), "val_a": fmt_rat(rep.val_a),
               "val_b": fmt_rat(rep.val_b)})
        return 0 if rep.ok else EXIT_FAIL
    if args.inject_fault:
        # negative control: an optimum that is off by one must be caught
        orig = suites.opt_intervals
        suites.opt_intervals = lambda inst: type(orig(inst))(
            orig(inst).value + (1 if inst.jobs else 0), None)
    try:
        results = suites.run_suite(args.suite, quick=args.quick, seed=args.seed)
    finally:
        if args.inject_fault:
            suites.opt_intervals = orig
    for r in results:
        print(r.line())
        for f in r.failures[:5]:
            print(f"    {f}")
    return 0 if all(r.ok for r in results) else EXIT_FAIL


def cmd_gen(args) -> int:
    if args.example:
        examples = named_examples(args.eps)
        if args.example not in examples:
            raise InputError(f"unknown example {args.example!r}; choose from {sorted(examples)}")
        inst = examples[args.example]
    else:
        f = benevolent_fn(args.preset) if args.preset else None
        params = GenParams(n=args.n, seed=args.seed, f=f,
                           horizon=args.horizon if args.horizon is not None
                           else Fraction(max(1, args.n), 2))
        inst = gen_instance(args.cls, params)
    text = dump_instance(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_opt(args) -> int:
    inst = _load(args.instance)
    if all(j.is_interval for j in inst.jobs):
        res = opt_intervals(inst)
    else:
        res = opt_equal_jobs(inst)
    starts = {}
    for jid, start, _end, done in res.witness.runs():
        if done:
            starts[jid] = fmt_rat(start)
    _emit({"class": inst.class_tag.value, "opt": fmt_rat(res.value),
           "opt_decimal": f"{float(res.value):.6f}", "schedule": starts})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="barelyrandom",
                                 description="Barely random online scheduling toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    classes = [c.value for c in InstanceClass]

    p = sub.add_parser("simulate", help="run a policy pair on an instance file")
    p.add_argument("instance")
    p.add_argument("--policy", required=True, choices=sorted(PAIRS))
    p.add_argument("--csv")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("adversary", help="play the lower-bound game")
    p.add_argument("--policy", default="ran")
    p.add_argument("--delta", type=_rat_arg, default=Fraction(1, 2))
    p.add_argument("--p", type=_rat_arg, default=None,
                   help="probability of the first policy (default: the pair's own)")
    p.add_argument("--v1", type=_rat_arg, default=Fraction(1))
    p.add_argument("--seed", type=int, default=0, help="seed for --policy random")
    p.add_argument("--step-cap", type=int, default=None)
    p.add_argument("--out", help="write the released instance here")
    p.set_defaults(fn=cmd_adversary)

    p = sub.add_parser("sweep", help="CSV of ratios over random instances")
    p.add_argument("--class", dest="cls", required=True, choices=classes)
    p.add_argument("--policy", required=True, choices=sorted(PAIRS))
    p.add_argument("--preset", default=None)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", default="all",
                   choices=["oracles", "charging", "conservation", "rand", "lemma",
                            "competitive", "all"])
    p.add_argument("--quick", action="store_true", help="a tenth of the default sizes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--charging", nargs="?", const="example", default=None,
                   metavar="INSTANCE",
                   help="print the charging ledger for INSTANCE (default: built-in example)")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("gen", help="write a random or named instance")
    p.add_argument("--class", dest="cls", default="EqualLengthIntervals", choices=classes)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--preset", default=None)
    p.add_argument("--horizon", type=_rat_arg, default=None)
    p.add_argument("--example", default=None)
    p.add_argument("--eps", type=_rat_arg, default=Fraction(1, 100))
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("opt", help="exact offline optimum of an instance file")
    p.add_argument("instance")
    p.set_defaults(fn=cmd_opt)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ClassMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLASS
    except StepCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except UnclassifiableState as exc:
        print(f"finding: adversary reached an unclassified state: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, ScheduleError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
