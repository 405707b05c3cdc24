"""HTTP facade for the interactive demo.

Stateless JSON API: instances live in a directory, every response is a pure
function of (stored instances, request body).  Stack popping happens client
side on the stacks embedded in the labeling JSON.  Solver results are
memoized in-process behind a lock (LRU, 256 entries).
"""

from __future__ import annotations

import hashlib
import json
import threading
from collections import OrderedDict
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import jsonio
from .errors import BudgetExceededError, DataError, LabelkitError
from .model import METHODS, Instance
from .multipage import solve_multipage
from .sliding import Budget, solve_sliding_exact, solve_sliding_heuristic
from .stacking import solve_stacking, sort_stacks_by_weight, stacks_to_pages

SOLVE_TIME_BUDGET_S = 5.0
MEMO_CAPACITY = 256


class SolveRequest(BaseModel):
    instance_id: Optional[str] = None
    instance: Optional[dict] = None
    method: str
    alpha: float = 0.5
    mode: Optional[str] = None
    hard_c1: bool = False
    seed: int = 0
    iterations: int = 5000


def _json_response(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=jsonio.dumps_canonical(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, message: str) -> Response:
    return _json_response({"error": message}, status_code)


def create_app(instances_dir) -> FastAPI:
    root = Path(instances_dir)
    app = FastAPI(title="labelkit")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    memo: "OrderedDict[tuple, dict]" = OrderedDict()
    memo_lock = threading.Lock()

    def memo_get(key):
        with memo_lock:
            if key in memo:
                memo.move_to_end(key)
                return memo[key]
        return None

    def memo_put(key, value):
        with memo_lock:
            memo[key] = value
            memo.move_to_end(key)
            while len(memo) > MEMO_CAPACITY:
                memo.popitem(last=False)

    @app.get("/api/health")
    def health():
        return _json_response({"status": "ok"})

    @app.get("/api/instances")
    def list_instances():
        try:
            files = sorted(p for p in root.iterdir() if p.is_file())
        except OSError as exc:
            return _error(500, f"instance directory unreadable: {exc}")
        entries = []
        for path in files:
            if path.suffix != ".json":
                entries.append({"id": path.name, "warning": "not an instance file"})
                continue
            try:
                inst = jsonio.load_instance(path)
            except (DataError, OSError) as exc:
                entries.append({"id": path.stem, "warning": str(exc)})
                continue
            entries.append(
                {
                    "id": path.stem,
                    "n": inst.n,
                    "k": inst.k,
                    "screen": {
                        "width": inst.screen_width,
                        "height": inst.screen_height,
                    },
                }
            )
        return _json_response({"instances": entries})

    @app.get("/api/instances/{instance_id}")
    def get_instance(instance_id: str):
        path = root / f"{instance_id}.json"
        if not path.is_file():
            return _error(404, f"unknown instance {instance_id!r}")
        try:
            inst = jsonio.load_instance(path)
        except DataError as exc:
            return _error(500, str(exc))
        return _json_response(jsonio.instance_to_dict(inst))

    @app.post("/api/solve")
    def solve(req: SolveRequest):
        if req.method not in METHODS:
            return _error(400, f"alpha/method validation failed: unknown method {req.method!r}")
        if not 0.0 <= req.alpha <= 1.0:
            return _error(400, f"alpha must be in [0, 1], got {req.alpha}")
        if req.mode is not None and req.method != "sliding":
            return _error(422, f"mode {req.mode!r} is only valid for the sliding method")
        if req.mode is not None and req.mode not in ("exact", "heuristic"):
            return _error(400, f"unknown mode {req.mode!r}")

        if req.instance is not None:
            try:
                instance = jsonio.instance_from_dict(req.instance)
            except DataError as exc:
                return _error(400, f"instance: {exc}")
            body = json.dumps(req.instance, sort_keys=True).encode()
            instance_key = "inline:" + hashlib.sha256(body).hexdigest()
        elif req.instance_id is not None:
            path = root / f"{req.instance_id}.json"
            if not path.is_file():
                return _error(404, f"unknown instance {req.instance_id!r}")
            try:
                instance = jsonio.load_instance(path)
            except DataError as exc:
                return _error(500, str(exc))
            instance_key = req.instance_id
        else:
            return _error(400, "instance_id or instance is required")

        key = (
            instance_key,
            req.method,
            req.alpha,
            req.mode,
            req.hard_c1,
            req.seed,
            req.iterations,
        )
        cached = memo_get(key)
        if cached is not None:
            return _json_response(cached)

        try:
            if req.method == "multipage":
                labeling = solve_multipage(instance, req.alpha)
            elif req.method == "stacking":
                stacks = sort_stacks_by_weight(solve_stacking(instance), instance)
                labeling = stacks_to_pages(stacks, alpha=req.alpha)
            else:
                mode = req.mode or "heuristic"
                if mode == "heuristic":
                    labeling = solve_sliding_heuristic(
                        instance,
                        req.alpha,
                        hard_c1=req.hard_c1,
                        iterations=req.iterations,
                        seed=req.seed,
                    )
                else:
                    try:
                        labeling = solve_sliding_exact(
                            instance,
                            req.alpha,
                            hard_c1=req.hard_c1,
                            budget=Budget(time_limit=SOLVE_TIME_BUDGET_S),
                        )
                    except BudgetExceededError as exc:
                        labeling = exc.incumbent
        except DataError as exc:
            return _error(400, str(exc))
        except LabelkitError as exc:
            return _error(500, str(exc))

        payload = jsonio.labeling_to_dict(labeling, instance)
        memo_put(key, payload)
        return _json_response(payload)

    @app.exception_handler(404)
    async def not_found(request, exc):
        return _error(404, "not found")

    return app
