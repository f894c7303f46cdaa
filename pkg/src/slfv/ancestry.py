"""Marked-partition ancestral process on the labels {A, a, B, b}.

A block is a set of labels carried by one ancestral individual together
with that individual's location (mark). Labels A and a are the first
locus of the two sampled individuals, B and b the second. Events merge
blocks landing on the same parent (coalescence); a recombinant draw in
a small event splits a block by locus. Large events never recombine.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .events import Event
from .geometry import TorusPoint, distance, wrap
from .params import ModelParams


class Label(enum.IntEnum):
    A = K.LAB_A
    a = K.LAB_a
    B = K.LAB_B
    b = K.LAB_b

    @property
    def locus(self) -> int:
        return 1 if self.value & K.LOCUS1_MASK else 2


def _mask(labels: frozenset[Label]) -> int:
    m = 0
    for lab in labels:
        m |= int(lab)
    return m


def _labels(mask: int) -> frozenset[Label]:
    return frozenset(lab for lab in Label if mask & int(lab))


@dataclass(frozen=True)
class Block:
    """Nonempty label set plus the ancestor's location."""

    labels: frozenset[Label]
    mark: TorusPoint

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValueError("block label set must be nonempty")


@dataclass(frozen=True)
class AncestryState:
    """Partition of the tracked labels at elapsed backward time ``time``."""

    time: float
    blocks: tuple[Block, ...]

    def tracked_labels(self) -> frozenset[Label]:
        out: frozenset[Label] = frozenset()
        for b in self.blocks:
            out |= b.labels
        return out

    def block_of(self, label: Label) -> Block:
        for b in self.blocks:
            if label in b.labels:
                return b
        raise KeyError(f"label {label!r} not tracked")

    def check_invariants(self, L: float) -> None:
        """Assert partition validity and pairwise-distinct marks."""
        seen = 0
        for b in self.blocks:
            m = _mask(b.labels)
            if seen & m:
                raise AssertionError("blocks are not disjoint")
            seen |= m
        marks = [b.mark for b in self.blocks]
        for i in range(len(marks)):
            for j in range(i + 1, len(marks)):
                if distance(marks[i], marks[j], L) == 0.0:
                    raise AssertionError("distinct blocks share a mark")


def init_sample(
    params: ModelParams,
    separation: tuple[float, float] | None = None,
    mode: str = "two-locus",
    marks: list[TorusPoint] | None = None,
) -> AncestryState:
    """Initial configurations of the ancestral process.

    Modes: "two-locus" ({A,B} and {a,b} at the given separation),
    "single-locus" ({A} and {a}), "same-individual" (one block {A,B}),
    "four-singleton" ({A},{a},{B},{b} at four given marks).
    """
    L = params.L
    origin = TorusPoint(0.0, 0.0)
    if mode == "same-individual":
        return AncestryState(0.0, (Block(frozenset({Label.A, Label.B}), origin),))
    if mode == "four-singleton":
        if marks is None or len(marks) != 4:
            raise ValueError("four-singleton init needs exactly 4 marks")
        if len({(m[0], m[1]) for m in marks}) != 4:
            raise ValueError("four-singleton marks must be pairwise distinct")
        labs = (Label.A, Label.a, Label.B, Label.b)
        return AncestryState(
            0.0, tuple(Block(frozenset({lab}), m) for lab, m in zip(labs, marks))
        )
    if separation is None:
        separation = params.sampling_separation()
    other = wrap(separation, L)
    if distance(origin, other, L) == 0.0:
        raise ValueError("two-block init needs a nonzero separation")
    if mode == "two-locus":
        return AncestryState(
            0.0,
            (
                Block(frozenset({Label.A, Label.B}), origin),
                Block(frozenset({Label.a, Label.b}), other),
            ),
        )
    if mode == "single-locus":
        return AncestryState(
            0.0,
            (
                Block(frozenset({Label.A}), origin),
                Block(frozenset({Label.a}), other),
            ),
        )
    raise ValueError(f"unknown init mode {mode!r}")


def apply_event(
    state: AncestryState,
    event: Event,
    params: ModelParams,
    rng: np.random.Generator,
) -> AncestryState:
    """Resolve one event on the partition.

    Covered blocks are independently affected with probability
    event.impact; affected blocks move to a uniformly chosen parent,
    splitting by locus instead with probability params.r in small events
    with at least two parents. Groups landing on the same parent merge.
    """
    n = len(state.blocks)
    labels = np.empty(max(n, 4), np.int64)
    xs = np.empty(max(n, 4), np.float64)
    ys = np.empty(max(n, 4), np.float64)
    for k, b in enumerate(state.blocks):
        labels[k] = _mask(b.labels)
        xs[k] = b.mark[0]
        ys[k] = b.mark[1]
    r2 = event.radius**2 * (1.0 + 1e-9)
    covered = np.empty(max(n, 4), np.bool_)
    for k in range(n):
        covered[k] = (
            K._dist2(xs[k], ys[k], event.center[0], event.center[1], params.L) <= r2
        )
    j = event.num_parents
    px = np.array([p[0] for p in event.parent_positions], dtype=np.float64)
    py = np.array([p[1] for p in event.parent_positions], dtype=np.float64)
    group = np.empty(j, np.int64)
    newlab = np.empty(n + j, np.int64)
    newx = np.empty(n + j, np.float64)
    newy = np.empty(n + j, np.float64)
    aff = np.empty(max(n, 4), np.bool_)
    is_large = 1 if event.kind == "large" else 0
    n_new, _ = K.apply_body(
        labels,
        xs,
        ys,
        n,
        covered,
        event.impact,
        params.r if not is_large else 0.0,
        is_large,
        j,
        px,
        py,
        K.LOCUS1_MASK,
        rng,
        group,
        newlab,
        newx,
        newy,
        aff,
    )
    blocks = tuple(
        Block(_labels(int(labels[k])), TorusPoint(float(xs[k]), float(ys[k])))
        for k in range(n_new)
    )
    return AncestryState(state.time + event.dt, blocks)


def step(
    state: AncestryState, params: ModelParams, rng: np.random.Generator
) -> AncestryState:
    """Generate the next accepted event for the current marks and apply it."""
    from .events import next_event

    if not state.blocks:
        raise ValueError("state has no blocks")
    marks = [b.mark for b in state.blocks]
    ev = next_event(marks, params, rng)
    return apply_event(state, ev, params, rng)


def trajectory(
    state: AncestryState,
    params: ModelParams,
    n_events: int,
    rng: np.random.Generator,
    check: bool = False,
):
    """Yield successive states over ``n_events`` accepted events.

    With ``check=True``, partition validity and distinct marks are
    asserted after every event (debugging aid).
    """
    for _ in range(n_events):
        state = step(state, params, rng)
        if check:
            state.check_invariants(params.L)
        yield state


def dump_trajectory(
    state: AncestryState,
    params: ModelParams,
    n_events: int,
    rng: np.random.Generator,
    path,
) -> None:
    """Write a debugging CSV: one row per block per event.

    Columns: event, time, labels (ordered label names), mark_x, mark_y.
    """
    from .output import write_csv

    rows = []
    for ev, s in enumerate(trajectory(state, params, n_events, rng), start=1):
        for b in s.blocks:
            names = "".join(sorted(l.name for l in b.labels))
            rows.append([ev, s.time, names, b.mark.x, b.mark.y])
    write_csv(path, ["event", "time", "labels", "mark_x", "mark_y"], rows)
