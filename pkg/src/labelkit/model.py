"""Core domain types and leader geometry.

Screen coordinates: origin at the top-left corner, y grows downward, ports
sit on the bottom edge at y == screen_height.  A leader connects a feature
to a port with two segments: horizontal from the feature to the port's x,
then vertical down to the port.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DataError

Point = Tuple[float, float]

METHODS = ("multipage", "sliding", "stacking")


@dataclass(frozen=True)
class Feature:
    """A weighted point of interest inside the viewport."""

    id: str
    x: float
    y: float
    weight: float
    name: Optional[str] = None
    category: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise DataError("feature id must be a non-empty string")
        # Integer px inputs are accepted but all arithmetic is real-valued.
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "weight", float(self.weight))
        if not 0.0 <= self.weight <= 1.0:
            raise DataError(
                f"feature {self.id!r}: weight {self.weight} outside [0, 1]"
            )


@dataclass(frozen=True)
class Instance:
    """Viewport geometry, label geometry, port count, and the feature set."""

    screen_width: float
    screen_height: float
    label_width: float
    label_height: float
    k: int
    features: Tuple[Feature, ...]

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        for field_name in ("screen_width", "screen_height", "label_width", "label_height"):
            object.__setattr__(self, field_name, float(getattr(self, field_name)))
        if self.screen_width <= 0 or self.screen_height <= 0:
            raise DataError("screen dimensions must be positive")
        if not (isinstance(self.k, int) and self.k >= 1):
            raise DataError(f"k must be a positive integer, got {self.k!r}")
        if self.k * self.label_width > self.screen_width + 1e-9:
            raise DataError(
                f"k*label_width = {self.k * self.label_width} exceeds "
                f"screen_width = {self.screen_width}: attached labels overlap"
            )
        seen_ids = set()
        seen_xy = set()
        for f in self.features:
            if f.id in seen_ids:
                raise DataError(f"duplicate feature id {f.id!r}")
            seen_ids.add(f.id)
            if (f.x, f.y) in seen_xy:
                raise DataError(
                    f"feature {f.id!r}: coordinates ({f.x}, {f.y}) collide "
                    "with another feature"
                )
            seen_xy.add((f.x, f.y))
            if not 0.0 <= f.x <= self.screen_width:
                raise DataError(
                    f"feature {f.id!r}: x = {f.x} outside [0, {self.screen_width}]"
                )
            if not 0.0 <= f.y < self.screen_height:
                raise DataError(
                    f"feature {f.id!r}: y = {f.y} outside [0, {self.screen_height})"
                )

    @property
    def n(self) -> int:
        return len(self.features)

    def feature_map(self) -> Dict[str, Feature]:
        return {f.id: f for f in self.features}


@dataclass(frozen=True)
class State:
    """One display frame: an injective assignment of the k ports to features.

    ``assignment[j]`` holds the feature id attached to port j+1 (ports are
    1-based in all user-facing formats, 0-based in this tuple).
    """

    assignment: Tuple[str, ...]
    page_index: int

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if self.page_index < 1:
            raise DataError(f"page_index must be >= 1, got {self.page_index}")
        if len(set(self.assignment)) != len(self.assignment):
            raise DataError("state assignment must be injective")

    @property
    def k(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class StackSet:
    """k ordered stacks partitioning the features; position 0 is topmost.

    Padding entries (when n is not divisible by k) are listed in
    ``dummy_ids`` and never rendered or measured.
    """

    stacks: Tuple[Tuple[str, ...], ...]
    dummy_ids: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(
            self, "stacks", tuple(tuple(s) for s in self.stacks)
        )
        object.__setattr__(self, "dummy_ids", frozenset(self.dummy_ids))
        all_ids = [fid for stack in self.stacks for fid in stack]
        if len(set(all_ids)) != len(all_ids):
            raise DataError("stacks must not repeat a feature")
        depths = {len(s) for s in self.stacks}
        if len(depths) > 1:
            raise DataError(f"stacks must have equal depth, got depths {sorted(depths)}")

    @property
    def k(self) -> int:
        return len(self.stacks)

    @property
    def depth(self) -> int:
        return len(self.stacks[0]) if self.stacks else 0


@dataclass(frozen=True)
class Labeling:
    """An ordered sequence of states plus method tag and padding info."""

    method: str
    alpha: float
    states: Tuple[State, ...]
    dummy_ids: frozenset = frozenset()
    optimal: bool = True
    stacks: Optional[StackSet] = None

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "dummy_ids", frozenset(self.dummy_ids))
        if self.method not in METHODS:
            raise DataError(f"unknown labeling method {self.method!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise DataError(f"alpha = {self.alpha} outside [0, 1]")

    def feature_ids(self) -> set:
        """Ids of all real (non-dummy) features contained in some state."""
        out = set()
        for s in self.states:
            out.update(s.assignment)
        return out - self.dummy_ids


def port_positions(instance: Instance) -> List[Point]:
    """Port coordinates on the bottom edge, left to right.

    Ports sit at the midpoints of k equal cells partitioning the bottom
    edge, so adjacent labels of width screen_width/k tile it exactly.
    """
    w, h, k = instance.screen_width, instance.screen_height, instance.k
    return [((j + 0.5) * w / k, h) for j in range(k)]


def leader_length(port: Point, feature: Feature) -> float:
    """Total length of the two-segment leader from ``feature`` to ``port``."""
    px, py = port
    if feature.y >= py:
        raise DataError(
            f"feature {feature.id!r}: y = {feature.y} is on or below the "
            f"port line y = {py}"
        )
    return abs(feature.x - px) + (py - feature.y)


def _leaders_cross_xy(
    f1x: float, f1y: float, p1x: float, f2x: float, f2y: float, p2x: float
) -> bool:
    # Horizontal of one leader vs vertical of the other, strict interiors.
    # The vertical segment of a leader spans heights [feature.y, screen_height],
    # so it meets the other horizontal (at the other feature's y) only when its
    # own feature lies strictly above.
    lo1 = f1x if f1x < p1x else p1x
    hi1 = p1x if f1x < p1x else f1x
    if lo1 < p2x < hi1 and f2y < f1y:
        return True
    lo2 = f2x if f2x < p2x else p2x
    hi2 = p2x if f2x < p2x else f2x
    if lo2 < p1x < hi2 and f1y < f2y:
        return True
    return False


def leaders_cross(l1: Tuple[Point, Feature], l2: Tuple[Point, Feature]) -> bool:
    """True iff the two leaders properly cross.

    Each argument is a (port, feature) pair.  Coincident horizontal
    segments (equal feature y) do not count as a crossing.
    """
    (p1, f1), (p2, f2) = l1, l2
    return _leaders_cross_xy(f1.x, f1.y, p1[0], f2.x, f2.y, p2[0])


def make_dummy_ids(count: int, taken: Iterable[str]) -> List[str]:
    """Generate ``count`` padding ids that do not collide with ``taken``."""
    taken = set(taken)
    out = []
    i = 1
    prefix = "dummy"
    while len(out) < count:
        cand = f"{prefix}-{i}"
        while cand in taken:
            prefix = "_" + prefix
            cand = f"{prefix}-{i}"
        out.append(cand)
        taken.add(cand)
        i += 1
    return out
