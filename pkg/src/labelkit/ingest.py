"""Load point datasets and turn them into solver-ready instances.

CSV rows carry an id, source coordinates (projected x/y or lon/lat), a star
rating, and optional display fields.  A plate carree (linear) projection
maps source coordinates onto the viewport; at the few-kilometre extents
this tool targets the projection error is sub-pixel, so no geodesy library
is pulled in.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import DataError
from .model import Feature, Instance

LEGAL_STARS = tuple(1.0 + 0.5 * i for i in range(9))  # 1, 1.5, ..., 5

REQUIRED_COLUMNS = ("id", "x", "y", "stars")
OPTIONAL_COLUMNS = ("name", "category")


@dataclass(frozen=True)
class RawRecord:
    id: str
    x: float
    y: float
    stars: float
    name: Optional[str] = None
    category: Optional[str] = None


@dataclass(frozen=True)
class BBox:
    """Source-coordinate rectangle; max_y is the top edge when y grows up."""

    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        if not (self.min_x < self.max_x and self.min_y < self.max_y):
            raise DataError("bbox must be nondegenerate")

    def contains(self, x: float, y: float) -> bool:
        return self.min_x <= x <= self.max_x and self.min_y <= y <= self.max_y


@dataclass(frozen=True)
class ProjectionReport:
    """What projection had to touch: bottom-edge nudges and jittered ids."""

    nudged_ids: Tuple[str, ...]
    jittered_ids: Tuple[str, ...]


def load_csv(path, mapping: Mapping[str, str]) -> List[RawRecord]:
    """Parse a CSV of point records using a column mapping.

    ``mapping`` binds the logical names id/x/y/stars (and optionally
    name/category) to CSV column headers.
    """
    for logical in REQUIRED_COLUMNS:
        if logical not in mapping:
            raise DataError(f"column mapping is missing {logical!r}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for logical in REQUIRED_COLUMNS + tuple(
            c for c in OPTIONAL_COLUMNS if c in mapping
        ):
            col = mapping[logical]
            if col not in header:
                raise DataError(f"missing column {col!r} (mapped from {logical!r})")
        records = []
        seen = set()
        for row_idx, row in enumerate(reader, start=2):  # header is line 1
            try:
                rid = row[mapping["id"]].strip()
                x = float(row[mapping["x"]])
                y = float(row[mapping["y"]])
                stars = float(row[mapping["stars"]])
            except (TypeError, ValueError, AttributeError) as exc:
                raise DataError(f"unparsable row {row_idx}: {exc}") from exc
            if not rid:
                raise DataError(f"unparsable row {row_idx}: empty id")
            if rid in seen:
                raise DataError(f"duplicate id {rid!r}")
            seen.add(rid)
            name = row[mapping["name"]] if "name" in mapping else None
            category = row[mapping["category"]] if "category" in mapping else None
            records.append(
                RawRecord(id=rid, x=x, y=y, stars=stars, name=name, category=category)
            )
    return records


def normalize_weights(stars: float) -> float:
    """Map a star rating in {1, 1.5, ..., 5} onto [0, 1] linearly."""
    if stars not in LEGAL_STARS:
        raise DataError(f"star rating {stars} outside the legal set {LEGAL_STARS}")
    return (stars - 1.0) / 4.0


def project_to_screen(
    records: Sequence[RawRecord],
    bbox: BBox,
    screen_width: float = 300.0,
    screen_height: float = 300.0,
    label_width: float = 60.0,
    label_height: float = 60.0,
    k: int = 5,
    flip_y: bool = True,
    jitter_seed: int = 0,
) -> Tuple[Instance, ProjectionReport]:
    """Affine-map records inside ``bbox`` onto the viewport.

    ``flip_y`` treats source y as growing upward (latitude) while screen y
    grows downward.  Features landing on the bottom edge are nudged up one
    pixel; coordinate collisions are resolved with a seeded half-pixel
    jitter.  Both fixes are reported.
    """
    outside = [r.id for r in records if not bbox.contains(r.x, r.y)]
    if outside:
        raise DataError(f"records outside bbox: {', '.join(sorted(outside))}")
    sx = screen_width / (bbox.max_x - bbox.min_x)
    sy = screen_height / (bbox.max_y - bbox.min_y)
    rng = random.Random(jitter_seed)
    nudged: List[str] = []
    jittered: List[str] = []
    taken: Dict[Tuple[float, float], str] = {}
    feats: List[Feature] = []
    for r in records:
        x = (r.x - bbox.min_x) * sx
        if flip_y:
            y = (bbox.max_y - r.y) * sy
        else:
            y = (r.y - bbox.min_y) * sy
        if y >= screen_height:
            y = screen_height - 1.0
            nudged.append(r.id)
        xy = (x, y)
        while xy in taken:
            x = min(max(x + (rng.random() - 0.5), 0.0), screen_width)
            y = min(max(y + (rng.random() - 0.5), 0.0), screen_height - 1.0)
            xy = (x, y)
            if r.id not in jittered:
                jittered.append(r.id)
        taken[xy] = r.id
        feats.append(
            Feature(
                id=r.id,
                x=x,
                y=y,
                weight=normalize_weights(r.stars),
                name=r.name,
                category=r.category,
            )
        )
    instance = Instance(
        screen_width=screen_width,
        screen_height=screen_height,
        label_width=label_width,
        label_height=label_height,
        k=k,
        features=tuple(feats),
    )
    return instance, ProjectionReport(tuple(nudged), tuple(jittered))


def sample_instances(
    records: Sequence[RawRecord],
    count: int = 100,
    n: int = 30,
    seed: int = 0,
    section_fraction: float = 1.0 / 3.0,
    grid: int = 10,
    screen_width: float = 300.0,
    screen_height: float = 300.0,
    label_width: float = 60.0,
    label_height: float = 60.0,
    k: int = 5,
    flip_y: bool = True,
) -> List[Instance]:
    """Sample ``count`` map sections of the data, each with ``n`` features.

    Candidate sections form a uniform grid over the records' extent, each
    section spanning ``section_fraction`` of it; sections holding fewer
    than ``n`` records are discarded.  Reproducible for a fixed seed.
    """
    if len(records) < n:
        raise DataError(f"need at least {n} records, got {len(records)}")
    min_x = min(r.x for r in records)
    max_x = max(r.x for r in records)
    min_y = min(r.y for r in records)
    max_y = max(r.y for r in records)
    span_x = max_x - min_x
    span_y = max_y - min_y
    if span_x <= 0 or span_y <= 0:
        raise DataError("records are degenerate: zero extent")
    w = span_x * section_fraction
    h = span_y * section_fraction
    sections: List[BBox] = []
    for gi in range(grid):
        for gj in range(grid):
            x0 = min_x + (span_x - w) * gi / max(1, grid - 1)
            y0 = min_y + (span_y - h) * gj / max(1, grid - 1)
            box = BBox(x0, y0, x0 + w, y0 + h)
            inside = sum(1 for r in records if box.contains(r.x, r.y))
            if inside >= n:
                sections.append(box)
    if not sections:
        raise DataError(
            f"no map section of fraction {section_fraction} holds {n} records"
        )
    rng = random.Random(seed)
    out: List[Instance] = []
    for idx in range(count):
        box = sections[rng.randrange(len(sections))]
        inside = [r for r in records if box.contains(r.x, r.y)]
        chosen = rng.sample(inside, n)
        instance, _ = project_to_screen(
            chosen,
            box,
            screen_width=screen_width,
            screen_height=screen_height,
            label_width=label_width,
            label_height=label_height,
            k=k,
            flip_y=flip_y,
            jitter_seed=seed * 100003 + idx,
        )
        out.append(instance)
    return out
