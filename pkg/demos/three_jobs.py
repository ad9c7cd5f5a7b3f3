"""RAN-J on three unit jobs: both halves grab the heavy job X and lose the rest.

    python demos/three_jobs.py
"""
from fractions import Fraction

from barelyrandom import fig1a, make_pair, opt_equal_jobs, run_mixture
from barelyrandom.core import fmt_rat

for eps in (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)):
    inst = fig1a(eps)
    mix = run_mixture(inst, make_pair("ran-j"))
    opt = opt_equal_jobs(inst)
    print(f"eps={fmt_rat(eps)}")
    for role, tr in (("A", mix.trace_a), ("B", mix.trace_b)):
        runs = ", ".join(f"{j}@{fmt_rat(s)}" for j, s, _, done in tr.runs() if done)
        print(f"  {role}: {runs}  -> {fmt_rat(tr.value)}")
    runs = ", ".join(f"{j}@{fmt_rat(s)}" for j, s, _, _ in opt.witness.runs())
    print(f"  OPT: {runs}  -> {fmt_rat(opt.value)}")
    print(f"  ratio {fmt_rat(opt.value / mix.expected)} = {float(opt.value / mix.expected):.4f}")
