"""JSON encodings for quaternions, frames, series and HL elements.

Formats:

* quaternion: ``[w, x, y, z]``
* frame: ``{"i": [x, y, z], "j": [x, y, z]}`` (vector parts only)
* series: list of quaternions, or ``{"coeffs": [...], "cap": N}``
* split pair: ``{"f1": [[re, im], ...], "f2": [...], "frame": {...}}``
* sliced function: ``{"terms": {"(n,m)": quaternion}, "frame": {...}}``
* HL element: ``{"F1": [[re, im], ...], "F2": [...], "frame": {...}}``

Decoders raise :class:`ParseError` carrying a JSON-path style location.
"""

import json
import math
from pathlib import Path

import numpy as np

from .bergman import SliceSampledFunction
from .bundle import HLElement
from .quaternion import Frame, imag
from .series import DEFAULT_DEGREE, SliceRegularSeries, SplitPair


class ParseError(ValueError):
    def __init__(self, message, location="$", source=None):
        self.message = message
        self.location = location
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{location}: {message}")


def _real(x, loc):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {type(x).__name__}", loc)
    if not math.isfinite(x):
        raise ParseError("number must be finite", loc)
    return float(x)


def _reals(x, n, loc):
    if not isinstance(x, list) or len(x) != n:
        raise ParseError(f"expected a list of {n} numbers", loc)
    return [_real(v, f"{loc}[{k}]") for k, v in enumerate(x)]


# -- encoders ---------------------------------------------------------------


def quat_to_json(q):
    return [float(v) for v in np.asarray(q, dtype=np.float64)]


def frame_to_json(fr):
    return {"i": [float(v) for v in fr.i[1:]], "j": [float(v) for v in fr.j[1:]]}


def series_to_json(f):
    return [quat_to_json(a) for a in f.coeffs]


def complex_list(c):
    return [[float(v.real), float(v.imag)] for v in np.asarray(c, dtype=np.complex128)]


def split_to_json(sp):
    return {"f1": complex_list(sp.f1), "f2": complex_list(sp.f2), "frame": frame_to_json(sp.frame)}


def hl_to_json(A):
    return {"F1": complex_list(A.F1), "F2": complex_list(A.F2), "frame": frame_to_json(A.frame)}


def sampled_to_json(f):
    return {
        "terms": {f"({n},{m})": quat_to_json(c) for (n, m), c in sorted(f.terms.items())},
        "frame": frame_to_json(f.slice_frame),
    }


# -- decoders ---------------------------------------------------------------


def quat_from_json(x, loc="$"):
    return np.array(_reals(x, 4, loc))


def frame_from_json(x, loc="$"):
    if not isinstance(x, dict) or "i" not in x or "j" not in x:
        raise ParseError('frame needs keys "i" and "j"', loc)
    i = _reals(x["i"], 3, f"{loc}.i")
    j = _reals(x["j"], 3, f"{loc}.j")
    try:
        return Frame.from_vectors(imag(np.array(i)), imag(np.array(j)))
    except ValueError as exc:
        raise ParseError(str(exc), loc) from None


def series_from_json(x, loc="$", cap=None):
    if isinstance(x, dict):
        if "coeffs" not in x:
            raise ParseError('series object needs "coeffs"', loc)
        if cap is None and "cap" in x:
            cap = int(_real(x["cap"], f"{loc}.cap"))
        x, loc = x["coeffs"], f"{loc}.coeffs"
    if not isinstance(x, list) or not x:
        raise ParseError("series must be a non-empty list of quaternions", loc)
    coeffs = [quat_from_json(a, f"{loc}[{k}]") for k, a in enumerate(x)]
    cap = max(DEFAULT_DEGREE, len(coeffs) - 1) if cap is None else cap
    try:
        return SliceRegularSeries(np.array(coeffs), cap)
    except ValueError as exc:
        raise ParseError(str(exc), loc) from None


def _complex_seq(x, loc):
    if not isinstance(x, list):
        raise ParseError("expected a list of [re, im] pairs", loc)
    vals = [_reals(p, 2, f"{loc}[{k}]") for k, p in enumerate(x)]
    return np.array([complex(a, b) for a, b in vals], dtype=np.complex128)


def _frame_or_standard(x, loc):
    return frame_from_json(x["frame"], f"{loc}.frame") if "frame" in x else Frame.standard()


def split_from_json(x, loc="$", cap=DEFAULT_DEGREE):
    if not isinstance(x, dict) or "f1" not in x or "f2" not in x:
        raise ParseError('split pair needs keys "f1" and "f2"', loc)
    return SplitPair(
        _complex_seq(x["f1"], f"{loc}.f1"),
        _complex_seq(x["f2"], f"{loc}.f2"),
        _frame_or_standard(x, loc),
        cap,
    )


def hl_from_json(x, loc="$", cap=DEFAULT_DEGREE):
    if not isinstance(x, dict) or "F1" not in x or "F2" not in x:
        raise ParseError('HL element needs keys "F1" and "F2"', loc)
    F1 = _complex_seq(x["F1"], f"{loc}.F1")
    F2 = _complex_seq(x["F2"], f"{loc}.F2")
    cap = max(cap, len(F1) - 1, len(F2) - 1)
    return HLElement(F1, F2, _frame_or_standard(x, loc), cap)


def sampled_from_json(x, loc="$"):
    if not isinstance(x, dict) or "terms" not in x:
        raise ParseError('sliced function needs key "terms"', loc)
    terms = x["terms"]
    if not isinstance(terms, dict):
        raise ParseError("terms must be an object", f"{loc}.terms")
    parsed = {}
    for key, c in terms.items():
        kloc = f"{loc}.terms[{key!r}]"
        try:
            n, m = (int(p) for p in key.strip().strip("()").split(","))
        except ValueError:
            raise ParseError('term key must look like "(n,m)"', kloc) from None
        if n < 0 or m < 0:
            raise ParseError("exponents must be non-negative", kloc)
        parsed[(n, m)] = quat_from_json(c, kloc)
    return SliceSampledFunction(_frame_or_standard(x, loc), parsed)


def load_json(path):
    """Read a JSON file, turning syntax errors into located ParseErrors."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file ({exc.strerror})", "$", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}", str(path)) from None


def load(path, decoder):
    data = load_json(path)
    try:
        return decoder(data)
    except ParseError as exc:
        raise ParseError(exc.message, exc.location, str(path)) from None


def dumps(obj):
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
