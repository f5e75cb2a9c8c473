"""Conversion of report dataclasses into plain JSON-able values."""

import dataclasses

import numpy as np


def jsonable(obj):
    """Recursively convert dataclasses, numpy arrays and scalars to plain
    python values; certificate-style classes contribute their ``kind``."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {}
        kind = getattr(obj, "kind", None)
        if isinstance(kind, str):
            out["kind"] = kind
        for f in dataclasses.fields(obj):
            out[f.name] = jsonable(getattr(obj, f.name))
        return out
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and (obj != obj or obj in (float("inf"), float("-inf"))):
        return None
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    return obj
