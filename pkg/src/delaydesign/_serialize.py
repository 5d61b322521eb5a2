"""Deterministic JSON encoding with 17-significant-digit floats.

Every number that round-trips through this encoder reconstructs the exact
IEEE double, and identical inputs always produce identical bytes (dict
insertion order is preserved, no whitespace).  NaN and infinities are not
representable in JSON and encode as null.
"""

from __future__ import annotations

import json
import math

import numpy as np

__all__ = ["dumps_17g"]


def _write(o, out):
    if o is None:
        out.append("null")
    elif o is True:
        out.append("true")
    elif o is False:
        out.append("false")
    elif isinstance(o, str):
        out.append(json.dumps(o))
    elif isinstance(o, (int, np.integer)):
        out.append(str(int(o)))
    elif isinstance(o, (float, np.floating)):
        x = float(o)
        out.append("null" if not math.isfinite(x) else "%.17g" % x)
    elif isinstance(o, dict):
        out.append("{")
        first = True
        for k, v in o.items():
            if not isinstance(k, str):
                raise TypeError(f"JSON object keys must be strings, got {type(k)}")
            if not first:
                out.append(",")
            first = False
            out.append(json.dumps(k))
            out.append(":")
            _write(v, out)
        out.append("}")
    elif isinstance(o, (list, tuple)) or isinstance(o, np.ndarray):
        seq = o.tolist() if isinstance(o, np.ndarray) else o
        out.append("[")
        first = True
        for v in seq:
            if not first:
                out.append(",")
            first = False
            _write(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot encode {type(o).__name__} as JSON")


def dumps_17g(obj) -> str:
    out = []
    _write(obj, out)
    return "".join(out)
