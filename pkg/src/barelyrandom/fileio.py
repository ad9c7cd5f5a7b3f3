"""Line-oriented JSON formats for instances and traces.

Instance file: a header object ``{"class": ..., "f": ...}`` followed by one
object per job ``{"id", "r", "d", "p", "w"}``. Every rational is a
``"num/den"`` string, so files round-trip bit-exactly.
"""
from __future__ import annotations

import json
from typing import IO

from .core import (EventKind, Instance, InstanceClass, Job, ScheduleError,
                   Trace, TraceEvent, WeightFunction, fmt_rat, rat)


class ParseError(ScheduleError):
    pass


def dump_instance(instance: Instance) -> str:
    header = {"class": instance.class_tag.value,
              "f": instance.f.to_json() if instance.f else None}
    lines = [json.dumps(header)]
    for j in instance.jobs:
        lines.append(json.dumps({"id": j.id, "r": fmt_rat(j.r), "d": fmt_rat(j.d),
                                 "p": fmt_rat(j.p), "w": fmt_rat(j.w)}))
    return "\n".join(lines) + "\n"


def load_instance(text: str) -> Instance:
    rows = []
    for n, line in enumerate(text.splitlines(), 1):
        if line.strip():
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {n}: {exc}") from exc
    if not rows or "class" not in rows[0]:
        raise ParseError("missing header line with a 'class' field")
    header, body = rows[0], rows[1:]
    try:
        cls = InstanceClass(header["class"])
        f = WeightFunction.from_json(header["f"]) if header.get("f") else None
        jobs = tuple(Job(row["id"], rat(row["r"]), rat(row["d"]), rat(row["p"]),
                         rat(row["w"])) for row in body)
        return Instance(jobs, cls, f)
    except (KeyError, ValueError, TypeError, ScheduleError) as exc:
        raise ParseError(str(exc)) from exc


def write_instance(instance: Instance, fh: IO[str]) -> None:
    fh.write(dump_instance(instance))


def read_instance(path) -> Instance:
    with open(path) as fh:
        return load_instance(fh.read())


def dump_trace(trace: Trace) -> str:
    return "".join(json.dumps({"time": fmt_rat(e.time), "kind": e.kind.value,
                               "job": e.job}) + "\n" for e in trace.events)


def load_trace(text: str, value=0) -> Trace:
    events = []
    for line in text.splitlines():
        if line.strip():
            row = json.loads(line)
            events.append(TraceEvent(rat(row["time"]), EventKind(row["kind"]),
                                     row["job"]))
    return Trace(tuple(events), rat(value))
