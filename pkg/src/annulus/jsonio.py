"""Lossless, deterministic JSON forms of the package's objects.

Complex numbers are ``[re, im]`` pairs. Python's float repr round-trips
exactly, and keys are sorted, so encoding the same object twice gives the
same bytes.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .charts import ChartPoint
from .circle import TWO_PI, CircleHomeo
from .complexfn import DiskMap, ExteriorMap
from .errors import AnnulusError, InputError, InvalidInput, OrientationError
from .riemann import JordanCurve
from .semigroup import FLAG_ORDER, RiggedAnnulus

KINDS = ("circle_homeo", "disk_map", "exterior_map", "rigged_annulus", "curve", "chart_point", "series")


def _pair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _pairs(values) -> list:
    return [_pair(z) for z in np.asarray(values, dtype=complex)]


def encode(obj) -> dict:
    if isinstance(obj, CircleHomeo):
        return {"kind": "circle_homeo", "n": obj.n, "lift": [float(v) for v in obj.lift]}
    if isinstance(obj, DiskMap):
        return {"kind": "disk_map", "m": obj.trunc_m, "coeffs": _pairs(obj.coeffs)}
    if isinstance(obj, ExteriorMap):
        return {"kind": "exterior_map", "lead": _pair(obj.lead), "const": _pair(obj.const),
                "neg": _pairs(obj.neg)}
    if isinstance(obj, RiggedAnnulus):
        out = {"kind": "rigged_annulus", "f": encode(obj.f), "g": encode(obj.g), "tag": obj.tag,
               "flags": obj.sorted_flags()}
        if obj.tag == "a_normalized":
            out["a"] = _pair(obj.a)
        return out
    if isinstance(obj, JordanCurve):
        return {"kind": "curve", "points": _pairs(obj.points)}
    if isinstance(obj, ChartPoint):
        return {"kind": "chart_point", "u0": _pairs(obj.u0), "q0": _pair(obj.q0),
                "uinf": _pairs(obj.uinf), "qinf": _pair(obj.qinf)}
    if isinstance(obj, np.ndarray) and obj.ndim == 1:
        return {"kind": "series", "coeffs": _pairs(obj)}
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def dumps(obj) -> str:
    data = obj if isinstance(obj, dict) else encode(obj)
    return json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def _get(data, key, path):
    if not isinstance(data, dict) or key not in data:
        raise InvalidInput(f"missing field {key!r}", path)
    return data[key]


def _real(value, path) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise InvalidInput("expected a finite number", path)
    return float(value)


def _complex(value, path) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise InvalidInput("expected a [re, im] pair", path)
    return complex(_real(value[0], f"{path}[0]"), _real(value[1], f"{path}[1]"))


def _complex_list(value, path) -> np.ndarray:
    if not isinstance(value, list):
        raise InvalidInput("expected a list of [re, im] pairs", path)
    return np.array([_complex(v, f"{path}[{i}]") for i, v in enumerate(value)], dtype=complex)


def _lift(data, path) -> CircleHomeo:
    raw = _get(data, "lift", path)
    if not isinstance(raw, list) or not raw:
        raise InvalidInput("expected a non-empty list of reals", f"{path}.lift")
    lift = np.array([_real(v, f"{path}.lift[{i}]") for i, v in enumerate(raw)])
    n = _get(data, "n", path)
    if n != lift.size:
        raise InvalidInput(f"n = {n} but lift has {lift.size} samples", f"{path}.n")
    if lift.size > 1 and lift[-1] < lift[0]:
        raise OrientationError(f"{path}.lift: decreasing lift reverses orientation")
    if lift[-1] - lift[0] >= TWO_PI:
        raise OrientationError(f"{path}.lift: lift spans 2 pi or more, degree is not one")
    try:
        return CircleHomeo(lift)
    except AnnulusError as exc:
        raise type(exc)(f"{path}.lift: {exc}") from None


def decode(data, expect: str | None = None, path: str = "$"):
    kind = _get(data, "kind", path)
    if kind not in KINDS:
        raise InvalidInput(f"unknown kind {kind!r}", f"{path}.kind")
    if expect is not None and kind != expect:
        raise InvalidInput(f"expected kind {expect!r}, got {kind!r}", f"{path}.kind")
    try:
        if kind == "circle_homeo":
            return _lift(data, path)
        if kind == "disk_map":
            coeffs = _complex_list(_get(data, "coeffs", path), f"{path}.coeffs")
            m = _get(data, "m", path)
            if m != coeffs.size:
                raise InvalidInput(f"m = {m} but {coeffs.size} coefficients given", f"{path}.m")
            return DiskMap(coeffs)
        if kind == "exterior_map":
            return ExteriorMap(_complex(_get(data, "lead", path), f"{path}.lead"),
                               _complex(_get(data, "const", path), f"{path}.const"),
                               _complex_list(_get(data, "neg", path), f"{path}.neg"))
        if kind == "rigged_annulus":
            f = decode(_get(data, "f", path), "disk_map", f"{path}.f")
            g = decode(_get(data, "g", path), "exterior_map", f"{path}.g")
            tag = _get(data, "tag", path)
            flags = data.get("flags", [])
            if not isinstance(flags, list) or any(fl not in FLAG_ORDER for fl in flags):
                raise InvalidInput(f"flags must be drawn from {list(FLAG_ORDER)}", f"{path}.flags")
            a = _complex(data["a"], f"{path}.a") if "a" in data else None
            return RiggedAnnulus(f, g, tag=tag, a=a, flags=frozenset(flags))
        if kind == "curve":
            return JordanCurve(_complex_list(_get(data, "points", path), f"{path}.points"))
        if kind == "chart_point":
            return ChartPoint(_complex_list(_get(data, "u0", path), f"{path}.u0"),
                              _complex(_get(data, "q0", path), f"{path}.q0"),
                              _complex_list(_get(data, "uinf", path), f"{path}.uinf"),
                              _complex(_get(data, "qinf", path), f"{path}.qinf"))
        return _complex_list(_get(data, "coeffs", path), f"{path}.coeffs")
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InvalidInput(str(exc), path) from None


def loads(text: str, expect: str | None = None):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed JSON: {exc.msg} at line {exc.lineno}", "$") from None
    return decode(data, expect)


def load(path, expect: str | None = None):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read file: {exc.strerror}", str(p)) from None
    try:
        return loads(text, expect)
    except InvalidInput as exc:
        raise InvalidInput(str(exc), str(p)) from None


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj))
