"""Canonical JSON for instances and labelings.

Canonical form: keys sorted, compact separators, floats carried at nine
significant digits.  Floats are rounded once at build time, so serializing,
parsing, and serializing again is byte-identical.
"""

from __future__ import annotations

import json
import math
from typing import Dict, List, Optional, Tuple

from .costs import cost_mpl, cost_slid, state_costs
from .errors import DataError
from .model import Feature, Instance, Labeling, StackSet, State

_SCHEMA_INSTANCE = {"screen", "label", "k", "features"}
_SCHEMA_FEATURE = {"id", "x", "y", "weight", "name", "category"}
_SCHEMA_LABELING = {
    "method",
    "alpha",
    "k",
    "optimal",
    "states",
    "totals",
    "stacks",
    "dummy_ids",
}


def canonical_float(x: float) -> float:
    """Round to nine significant digits (idempotent)."""
    if not math.isfinite(x):
        raise DataError(f"non-finite value {x} cannot be serialized")
    return float(f"{x:.9g}")


def _canonicalize(obj):
    if isinstance(obj, float):
        return canonical_float(obj)
    if isinstance(obj, dict):
        return {k: _canonicalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonicalize(v) for v in obj]
    return obj


def dumps_canonical(obj) -> str:
    return json.dumps(_canonicalize(obj), sort_keys=True, separators=(",", ":")) + "\n"


def _reject_unknown(d: dict, allowed: set, where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise DataError(f"unknown field(s) in {where}: {', '.join(sorted(unknown))}")


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise DataError(f"missing field {key!r} in {where}")
    return d[key]


def instance_to_dict(instance: Instance) -> dict:
    feats = []
    for f in instance.features:
        item: Dict[str, object] = {
            "id": f.id,
            "x": f.x,
            "y": f.y,
            "weight": f.weight,
        }
        if f.name is not None:
            item["name"] = f.name
        if f.category is not None:
            item["category"] = f.category
        feats.append(item)
    return {
        "screen": {"width": instance.screen_width, "height": instance.screen_height},
        "label": {"width": instance.label_width, "height": instance.label_height},
        "k": instance.k,
        "features": feats,
    }


def instance_from_dict(d: dict) -> Instance:
    if not isinstance(d, dict):
        raise DataError("instance JSON must be an object")
    _reject_unknown(d, _SCHEMA_INSTANCE, "instance")
    screen = _require(d, "screen", "instance")
    label = _require(d, "label", "instance")
    _reject_unknown(screen, {"width", "height"}, "instance.screen")
    _reject_unknown(label, {"width", "height"}, "instance.label")
    feats = []
    for idx, fd in enumerate(_require(d, "features", "instance")):
        _reject_unknown(fd, _SCHEMA_FEATURE, f"features[{idx}]")
        feats.append(
            Feature(
                id=_require(fd, "id", f"features[{idx}]"),
                x=float(_require(fd, "x", f"features[{idx}]")),
                y=float(_require(fd, "y", f"features[{idx}]")),
                weight=float(_require(fd, "weight", f"features[{idx}]")),
                name=fd.get("name"),
                category=fd.get("category"),
            )
        )
    k = _require(d, "k", "instance")
    if not isinstance(k, int):
        raise DataError(f"k must be an integer, got {k!r}")
    return Instance(
        screen_width=float(_require(screen, "width", "instance.screen")),
        screen_height=float(_require(screen, "height", "instance.screen")),
        label_width=float(_require(label, "width", "instance.label")),
        label_height=float(_require(label, "height", "instance.label")),
        k=k,
        features=tuple(feats),
    )


def labeling_to_dict(labeling: Labeling, instance: Instance) -> dict:
    states = []
    tot_w = tot_c = tot_d = tot_l = 0.0
    for s in labeling.states:
        sc = state_costs(s, instance, labeling.dummy_ids)
        tot_w += sc.c_w
        tot_c += sc.c_c
        tot_d += sc.c_d
        tot_l += sc.c_l
        states.append(
            {
                "index": s.page_index,
                "assignment": [
                    {"port": j + 1, "feature": fid}
                    for j, fid in enumerate(s.assignment)
                ],
                "costs": {
                    "c_w": sc.c_w,
                    "c_c": sc.c_c,
                    "c_d": sc.c_d,
                    "c_l": sc.c_l,
                    "cross_count": sc.cross_count,
                },
            }
        )
    out = {
        "method": labeling.method,
        "alpha": labeling.alpha,
        "k": instance.k,
        "optimal": labeling.optimal,
        "states": states,
        "totals": {
            "c_w": tot_w,
            "c_c": tot_c,
            "c_d": tot_d,
            "c_l": tot_l,
            "c_mpl": cost_mpl(labeling, instance, labeling.alpha),
            "c_slid": cost_slid(labeling, instance, labeling.alpha),
        },
        "dummy_ids": sorted(labeling.dummy_ids),
    }
    if labeling.stacks is not None:
        out["stacks"] = [list(stack) for stack in labeling.stacks.stacks]
    return out


def labeling_from_dict(d: dict) -> Labeling:
    if not isinstance(d, dict):
        raise DataError("labeling JSON must be an object")
    _reject_unknown(d, _SCHEMA_LABELING, "labeling")
    states = []
    for idx, sd in enumerate(_require(d, "states", "labeling")):
        _reject_unknown(sd, {"index", "assignment", "costs"}, f"states[{idx}]")
        items = _require(sd, "assignment", f"states[{idx}]")
        by_port = {}
        for a in items:
            _reject_unknown(a, {"port", "feature"}, f"states[{idx}].assignment")
            by_port[_require(a, "port", "assignment")] = _require(
                a, "feature", "assignment"
            )
        k = len(by_port)
        if sorted(by_port) != list(range(1, k + 1)):
            raise DataError(f"states[{idx}]: ports must be exactly 1..{k}")
        states.append(
            State(
                assignment=tuple(by_port[j] for j in range(1, k + 1)),
                page_index=int(_require(sd, "index", f"states[{idx}]")),
            )
        )
    dummy_ids = frozenset(d.get("dummy_ids", []))
    stacks: Optional[StackSet] = None
    if "stacks" in d:
        stacks = StackSet(
            stacks=tuple(tuple(s) for s in d["stacks"]), dummy_ids=dummy_ids
        )
    return Labeling(
        method=_require(d, "method", "labeling"),
        alpha=float(_require(d, "alpha", "labeling")),
        states=tuple(states),
        dummy_ids=dummy_ids,
        optimal=bool(_require(d, "optimal", "labeling")),
        stacks=stacks,
    )


def save_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(instance_to_dict(instance)))


def json_safe(obj):
    """Reports may carry NaN (empty aggregates); JSON cannot.  Map to null."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    return obj


def load_instance(path) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON: {exc}") from exc
    return instance_from_dict(d)


def save_labeling(labeling: Labeling, instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(labeling_to_dict(labeling, instance)))


def load_labeling(path) -> Labeling:
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON: {exc}") from exc
    return labeling_from_dict(d)
