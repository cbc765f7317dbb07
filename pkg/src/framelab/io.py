"""File formats: frame JSON, report JSON/CSV, trace CSV.

Frame files look like::

    {"field": "real", "n": 2, "m": 3, "entries": [[...], [...]]}

with ``entries`` given row by row and complex entries as ``[re, im]``.
"""

import csv
import io
import json
import math

import numpy as np

from .core import Frame, ScalarField
from .errors import InvalidShape, ParseError

SCHEMA_VERSION = 1


def _reject_constant(name):
    raise ParseError(f"non-finite value {name} in JSON input")


def frame_to_dict(frame):
    a = frame.entries
    if frame.field is ScalarField.REAL:
        rows = [[float(x) for x in row] for row in a]
    else:
        rows = [[[float(x.real), float(x.imag)] for x in row] for row in a]
    return {"field": frame.field.value, "n": frame.n_dim, "m": frame.n_vecs, "entries": rows}


def frame_from_dict(d):
    try:
        fld = ScalarField(d["field"])
        n, m = int(d["n"]), int(d["m"])
        rows = d["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed frame object: {exc}") from exc
    if len(rows) != n or any(len(r) != m for r in rows):
        raise ParseError(f"entries do not form a {n} x {m} matrix")
    try:
        if fld is ScalarField.REAL:
            a = np.array(rows, dtype=np.float64)
        else:
            pairs = np.array(rows, dtype=np.float64)
            if pairs.shape != (n, m, 2):
                raise ParseError("complex entries must be [re, im] pairs")
            a = pairs[..., 0] + 1j * pairs[..., 1]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"entries are not numeric: {exc}") from exc
    if not np.all(np.isfinite(a)):
        raise ParseError("frame entries must be finite")
    try:
        return Frame(a, fld)
    except InvalidShape as exc:
        raise ParseError(str(exc)) from exc


def dumps(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def loads(text):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc


def write_frame(frame, path):
    with open(path, "w") as fh:
        fh.write(dumps(frame_to_dict(frame)))


def read_frame(path):
    with open(path) as fh:
        return frame_from_dict(loads(fh.read()))


def _clean(obj):
    """Make a report JSON-safe: enums to values, NaN/inf to None, tuples to lists."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "value") and not isinstance(obj, (int, float, str)):
        return obj.value
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def report_json(report):
    d = {"schema": SCHEMA_VERSION, **report.to_dict()}
    return dumps(_clean(d))


def report_csv(report):
    from .measures import report_rows
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["measure", "k", "value", "bound_lower", "bound_upper"])
    for row in report_rows(report):
        w.writerow(["" if v is None else (repr(float(v)) if isinstance(v, float) else v) for v in row])
    return buf.getvalue()


def trace_csv(trace):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iter", "f_smooth", "f_true", "grad_norm", "step"])
    for r in trace.records:
        w.writerow([r.iter, repr(r.f_smooth), repr(r.f_true), repr(r.grad_norm), repr(r.step)])
    return buf.getvalue()
