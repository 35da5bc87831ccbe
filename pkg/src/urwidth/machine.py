"""The streaming Evaluate-Detect-Construct machine.

State is a frozen, growing library of local classifiers: each entry is a
sampled geodesic ball around the point whose arrival raised the alarm,
carrying the constant label observed there.  Detection computes the
prediction residue min_i max(0, d(x, center_i) - radius_i); at residue
above the tolerance the machine constructs a new entry, otherwise it
evaluates with the best-matching entry.  Entries are append-only: no
record is ever modified after insertion, and replaying the event log
reproduces the library bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .spaces import MetricSpace

__all__ = [
    "LibraryEntry",
    "StepRecord",
    "MachineState",
    "Trace",
    "machine_new",
    "alarm",
    "step",
    "run_stream",
    "replay_log",
]

_EVAL_TOL = 1e-12


@dataclass(frozen=True)
class LibraryEntry:
    """One frozen local classifier: a constant-label sampled ball."""

    center: object
    radius: float
    label: object
    support: tuple
    step_index: int


@dataclass(frozen=True)
class StepRecord:
    index: int
    kind: str  # "evaluate" or "construct"
    point: object
    label: object
    residue: float
    entry: int
    predicted: object = None
    correct: bool | None = None


@dataclass
class MachineState:
    space: MetricSpace
    tau: float
    d0: float
    r_construct: float
    labels: tuple | None
    entries: list[LibraryEntry] = field(default_factory=list)
    log: list[StepRecord] = field(default_factory=list)

    @property
    def library_size(self) -> int:
        return len(self.entries)


def machine_new(
    space: MetricSpace,
    tau: float,
    d0: float,
    r_construct: float,
    labels=None,
) -> MachineState:
    """Fresh machine: empty library, empty log.

    Constructed balls must respect the locality scale, hence the
    requirement 0 < 2*r_construct <= D0.
    """
    if tau < 0:
        raise ValueError(f"tolerance must be nonnegative, got tau={tau}")
    if not 0 < 2 * r_construct <= d0:
        raise ValueError(
            f"need 0 < 2*r_construct <= D0, got r_construct={r_construct}, D0={d0}"
        )
    return MachineState(space, tau, d0, r_construct, tuple(labels) if labels else None)


def alarm(state: MachineState, x) -> float:
    """Prediction residue of ``x``: distance beyond the nearest entry's
    ball, +inf on an empty library."""
    if not state.entries:
        return math.inf
    return min(
        max(0.0, state.space.dist(x, e.center) - e.radius) for e in state.entries
    )


def _sampled_ball(space: MetricSpace, center, radius: float) -> tuple:
    support = [p for p in space.sample_set if space.dist(center, p) <= radius]
    if center not in set(support):
        support.append(center)
    return tuple(support)


def step(state: MachineState, sample: tuple) -> StepRecord:
    """One Evaluate-Detect-Construct cycle; appends to the log.

    Residue within tolerance: evaluate with the minimal-residue entry
    (lowest index on ties); constructed entries are constant, so the
    prediction is that entry's label.  Otherwise: construct a new entry,
    a sampled ball of radius r_construct around the alarming point.
    """
    x, y = sample
    if state.labels is not None and y not in state.labels:
        raise ValueError(f"label {y!r} outside the concept space {state.labels}")
    best = None
    for i, e in enumerate(state.entries):
        r = max(0.0, state.space.dist(x, e.center) - e.radius)
        if best is None or r < best[0]:
            best = (r, i)
    index = len(state.log)
    if best is not None and best[0] <= state.tau + _EVAL_TOL:
        residue, i = best
        predicted = state.entries[i].label
        rec = StepRecord(
            index, "evaluate", x, y, residue, i, predicted, predicted == y
        )
    else:
        entry = LibraryEntry(
            x,
            state.r_construct,
            y,
            _sampled_ball(state.space, x, state.r_construct),
            index,
        )
        state.entries.append(entry)
        rec = StepRecord(
            index,
            "construct",
            x,
            y,
            best[0] if best is not None else math.inf,
            len(state.entries) - 1,
        )
    state.log.append(rec)
    return rec


@dataclass
class Trace:
    records: list[StepRecord]
    size_curve: list[int]
    errors: int


def run_stream(state: MachineState, stream) -> Trace:
    """Fold ``step`` over a sample sequence.

    The size curve lists the library size after each step; an empty
    stream yields the current size as a single entry.
    """
    records = []
    curve = []
    errors = 0
    for sample in stream:
        rec = step(state, sample)
        records.append(rec)
        curve.append(state.library_size)
        if rec.kind == "evaluate" and not rec.correct:
            errors += 1
    if not curve:
        curve = [state.library_size]
    return Trace(records, curve, errors)


def replay_log(
    space: MetricSpace,
    tau: float,
    d0: float,
    r_construct: float,
    log,
    labels=None,
) -> MachineState:
    """Rebuild a machine by re-running the logged inputs in order.

    Because entries are append-only and construction is deterministic in
    (space, point, label), any log prefix reproduces the corresponding
    library prefix bit-exactly.
    """
    state = machine_new(space, tau, d0, r_construct, labels)
    for rec in log:
        step(state, (rec.point, rec.label))
    return state
