"""Backend tuning constants.

``kappa``, ``gamma`` and ``xi`` are the neighbourhood radii used by the
depth-2 automaton and the polygon cuts.  Defaults are per backend kind; a
JSON file named by ``HYPERSACK_CONSTANTS`` may override any of them, e.g.

    {"finite": {"xi": 1}, "free_product": {"kappa": 1, "h": 2}}

``gamma`` is always raised to at least ``2*delta + 2*kappa``.
"""
from __future__ import annotations

import json
import os
from functools import lru_cache

ENV_VAR = "HYPERSACK_CONSTANTS"

DEFAULTS: dict[str, dict] = {
    "free": {"kappa": 0, "gamma": 1, "xi": 0},
    "finite": {"kappa": 0, "gamma": 1, "xi": 0},
    "free_product": {"kappa": 0, "gamma": 1, "xi": 0},
}


@lru_cache(maxsize=None)
def _load(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object keyed by backend kind")
    return data


def backend_settings(kind: str) -> dict:
    cfg = dict(DEFAULTS.get(kind, DEFAULTS["finite"]))
    path = os.environ.get(ENV_VAR)
    if path:
        cfg.update(_load(path).get(kind, {}))
    return cfg
