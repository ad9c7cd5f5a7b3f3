"""Barely random online scheduling: two deterministic policies mixed by one coin flip.

Exact-arithmetic simulation of the RAN family of algorithms, exact offline
optima, an adaptive lower-bound adversary and an executable charging
argument for RAN-J.
"""
from .core import (EventKind, Instance, InstanceClass, Job, ScheduleError, Trace,
                   TraceEvent, WeightFunction, make_interval, rat, schedule_feasible,
                   schedule_value, trace_from_runs, validate_class)
from .sim import (Observation, PolicyPair, Simulation, accepted_per_slot, ratio,
                  run_adaptive, run_mixture, run_online)
from .policies import (ran_c_pair, ran_d_pair, ran_j_pair, ran_m_pair, ran_pair,
                       make_pair)
from .offline import (brute_force_intervals, brute_force_jobs, opt_equal_jobs,
                      opt_intervals, opt_value)
from .generators import (GenParams, bad_slot_example, benevolent_fn, build_set, fig1a,
                         gen_instance, named_examples, single_interval)
from .adversary import CaseTag, GameConfig, GameOutcome, lower_bound_game
from .charging import (classify_slots, compute_charges, pair_bad_slots,
                       verify_ratio)

__all__ = [
    "CaseTag",
    "EventKind",
    "GameConfig",
    "GameOutcome",
    "GenParams",
    "Instance",
    "InstanceClass",
    "Job",
    "Observation",
    "PolicyPair",
    "ScheduleError",
    "Simulation",
    "Trace",
    "TraceEvent",
    "WeightFunction",
    "accepted_per_slot",
    "bad_slot_example",
    "benevolent_fn",
    "brute_force_intervals",
    "brute_force_jobs",
    "build_set",
    "classify_slots",
    "compute_charges",
    "fig1a",
    "gen_instance",
    "lower_bound_game",
    "make_interval",
    "make_pair",
    "named_examples",
    "opt_equal_jobs",
    "opt_intervals",
    "opt_value",
    "pair_bad_slots",
    "ran_c_pair",
    "ran_d_pair",
    "ran_j_pair",
    "ran_m_pair",
    "ran_pair",
    "rat",
    "ratio",
    "run_adaptive",
    "run_mixture",
    "run_online",
    "schedule_feasible",
    "schedule_value",
    "single_interval",
    "trace_from_runs",
    "validate_class",
    "verify_ratio",
]

__version__ = "0.1.0"
