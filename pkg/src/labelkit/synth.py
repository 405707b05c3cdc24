"""Synthetic instance generation for evaluation and benchmarks.

Positions are uniform over the viewport; weights come from the star grid
{1, 1.5, ..., 5} normalized onto [0, 1], mirroring rating-shaped data.
"""

from __future__ import annotations

import random
from typing import List

from .errors import DataError
from .ingest import LEGAL_STARS, normalize_weights
from .model import Feature, Instance


def generate_instance(
    n: int = 30,
    k: int = 5,
    seed: int = 0,
    screen_width: float = 300.0,
    screen_height: float = 300.0,
    label_width: float = 60.0,
    label_height: float = 60.0,
    id_prefix: str = "p",
) -> Instance:
    if n < 1:
        raise DataError("n must be >= 1")
    rng = random.Random(seed)
    feats: List[Feature] = []
    seen = set()
    for i in range(n):
        while True:
            x = rng.uniform(0.0, screen_width)
            y = rng.uniform(0.0, screen_height - 1e-9)
            if (x, y) not in seen:
                seen.add((x, y))
                break
        stars = LEGAL_STARS[rng.randrange(len(LEGAL_STARS))]
        feats.append(
            Feature(
                id=f"{id_prefix}{i:03d}",
                x=x,
                y=y,
                weight=normalize_weights(stars),
            )
        )
    return Instance(
        screen_width=screen_width,
        screen_height=screen_height,
        label_width=label_width,
        label_height=label_height,
        k=k,
        features=tuple(feats),
    )


def generate_instances(
    count: int = 100,
    n: int = 30,
    k: int = 5,
    seed: int = 0,
    **kwargs,
) -> List[Instance]:
    """``count`` independent instances; instance i uses seed ``seed + i``."""
    if count < 1:
        raise DataError("count must be >= 1")
    return [generate_instance(n=n, k=k, seed=seed + i, **kwargs) for i in range(count)]
