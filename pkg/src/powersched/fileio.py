"""Line-oriented text formats for instances, supplies and schedules.

Instance files: a header ``m Q D``, a count line ``n``, then one ``r d p``
line per job. Supply files: a count line, then ``a b mult`` lines.
Schedule files: one ``machine i: [a,b) ...`` line per machine followed by
``t machine job`` lines for every processed slot. Lines starting with ``#``
are comments. All times in files are in the original (unshifted) clock;
parsing re-normalizes and emission restores the recorded offset.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .core import Instance, Interval
from .schedule import Schedule


class ParseError(ValueError):
    pass


def _data_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def _ints(line: str, count: int, what: str) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise ParseError(f"expected {count} fields for {what}: {line!r}")
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise ParseError(f"non-integer field in {what}: {line!r}") from exc


def parse_instance(text: str) -> Instance:
    lines = _data_lines(text)
    if len(lines) < 2:
        raise ParseError("instance file needs a header and a job count")
    m, q, horizon = _ints(lines[0], 3, "header")
    (n,) = _ints(lines[1], 1, "job count")
    if n < 0 or len(lines) != 2 + n:
        raise ParseError(f"expected {n} job lines, found {len(lines) - 2}")
    jobs = [tuple(_ints(line, 3, "job")) for line in lines[2:]]
    try:
        return Instance.build(jobs, m, q, horizon)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def emit_instance(instance: Instance) -> str:
    off = instance.offset
    lines = [
        f"{instance.machines} {instance.wakeup} {instance.horizon + off}",
        f"{len(instance.jobs)}",
    ]
    for j in instance.jobs:
        lines.append(f"{j.release + off} {j.deadline + off} {j.ptime}")
    return "\n".join(lines) + "\n"


def parse_supply(text: str, instance: Instance) -> list[Interval]:
    """Supply intervals in the instance's normalized clock, expanded by
    multiplicity."""
    lines = _data_lines(text)
    if not lines:
        raise ParseError("supply file needs a count line")
    (k,) = _ints(lines[0], 1, "supply count")
    if len(lines) != 1 + k:
        raise ParseError(f"expected {k} supply lines, found {len(lines) - 1}")
    out = []
    for line in lines[1:]:
        a, b, mult = _ints(line, 3, "supply interval")
        if mult < 0:
            raise ParseError(f"negative multiplicity: {line!r}")
        try:
            iv = Interval(a - instance.offset, b - instance.offset)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        out.extend([iv] * mult)
    return sorted(out)


def emit_supply(intervals, instance: Instance) -> str:
    counts: dict[Interval, int] = {}
    for iv in intervals:
        counts[iv] = counts.get(iv, 0) + 1
    off = instance.offset
    lines = [str(len(counts))]
    for iv in sorted(counts):
        lines.append(f"{iv.start + off} {iv.end + off} {counts[iv]}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ScheduleDoc:
    """Parsed schedule file: active intervals per machine plus assignments."""

    machine_intervals: tuple[tuple[Interval, ...], ...]
    assignment: tuple[tuple[int, int, int], ...]


_MACHINE_RE = re.compile(r"^machine\s+(\d+):\s*(.*)$")
_SPAN_RE = re.compile(r"\[(\d+),(\d+)\)")


def emit_schedule(instance: Instance, schedule: Schedule) -> str:
    off = instance.offset
    lines = []
    for k, ivs in enumerate(schedule.machine_intervals):
        spans = " ".join(
            f"[{iv.start + off},{iv.end + off})" for iv in sorted(ivs)
        )
        lines.append(f"machine {k}:" + (f" {spans}" if spans else ""))
    for t, mach, job in schedule.assignment:
        lines.append(f"{t + off} {mach} {job}")
    return "\n".join(lines) + "\n"


def parse_schedule(text: str) -> ScheduleDoc:
    machines: list[tuple[Interval, ...]] = []
    records = []
    for line in _data_lines(text):
        match = _MACHINE_RE.match(line)
        if match:
            idx = int(match.group(1))
            if idx != len(machines):
                raise ParseError(f"machine lines out of order at {line!r}")
            ivs = tuple(
                Interval(int(a), int(b))
                for a, b in _SPAN_RE.findall(match.group(2))
            )
            machines.append(ivs)
        else:
            t, mach, job = _ints(line, 3, "assignment")
            records.append((t, mach, job))
    return ScheduleDoc(tuple(machines), tuple(records))
