"""Domain and symbol spec files, and deterministic report serialization.

Domain spec (JSON)::

    {"type": "bidisk", "r": 1.0, "s": 1.0}
    {"type": "ball", "radius": 1.0}
    {"type": "egg", "p": 2.0, "q": 4.0}            # optional "scale"
    {"type": "polygon", "vertices": [[0, 1], [0.5, 1], [1, 0]]}

Symbol spec (JSON)::

    {"terms": [{"j": 1, "k": 0, "re": 2.0, "im": 0.0}, ...]}
"""
from __future__ import annotations

import json
import math
from numbers import Integral, Real

from .domain import Ball, Bidisk, DomainError, Egg, PolygonShadow, ShadowDomain
from .hankel import PolySymbol


class SpecError(ValueError):
    """Malformed spec; ``field`` names the offending entry."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


_DOMAIN_KEYS = {
    "bidisk": ({"r", "s"}, set()),
    "ball": ({"radius"}, set()),
    "egg": ({"p", "q"}, {"scale"}),
    "polygon": ({"vertices"}, set()),
}


def _number(spec, key):
    value = spec[key]
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
        raise SpecError(key, f"expected a finite number, got {value!r}")
    return float(value)


def _positive(spec, key):
    value = _number(spec, key)
    if value <= 0:
        raise SpecError(key, f"must be > 0, got {value!r}")
    return value


def domain_from_mapping(spec) -> ShadowDomain:
    if not isinstance(spec, dict):
        raise SpecError("<root>", "expected a JSON object")
    if "type" not in spec:
        raise SpecError("type", "missing")
    kind = spec["type"]
    if kind not in _DOMAIN_KEYS:
        raise SpecError("type", f"unknown domain type {kind!r}")
    required, optional = _DOMAIN_KEYS[kind]
    keys = set(spec) - {"type"}
    for key in sorted(required - keys):
        raise SpecError(key, "missing")
    for key in sorted(keys - required - optional):
        raise SpecError(key, f"unknown key for type {kind!r}")

    if kind == "bidisk":
        return Bidisk(_positive(spec, "r"), _positive(spec, "s"))
    if kind == "ball":
        return Ball(_positive(spec, "radius"))
    if kind == "egg":
        p, q = _number(spec, "p"), _number(spec, "q")
        for name, value in (("p", p), ("q", q)):
            if value < 1:
                raise SpecError(name, f"{name} must be ≥ 1 for convexity")
        scale = _positive(spec, "scale") if "scale" in spec else 1.0
        return Egg(p, q, scale)

    verts = spec["vertices"]
    if not isinstance(verts, list):
        raise SpecError("vertices", "expected a list of [x, y] pairs")
    pairs = []
    for i, v in enumerate(verts):
        if not isinstance(v, list) or len(v) != 2:
            raise SpecError(f"vertices[{i}]", "expected an [x, y] pair")
        pairs.append((_number({"x": v[0]}, "x"), _number({"y": v[1]}, "y")))
    try:
        return PolygonShadow(tuple(pairs))
    except DomainError as exc:
        raise SpecError("vertices", str(exc).removeprefix("vertices: ")) from None


def parse_domain_spec(text: str) -> ShadowDomain:
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError("<root>", f"invalid JSON: {exc}") from None
    return domain_from_mapping(spec)


def symbol_from_mapping(spec) -> PolySymbol:
    if not isinstance(spec, dict):
        raise SpecError("<root>", "expected a JSON object")
    extra = set(spec) - {"terms"}
    if extra:
        raise SpecError(sorted(extra)[0], "unknown key")
    terms = spec.get("terms")
    if not isinstance(terms, list):
        raise SpecError("terms", "expected a list")
    coeffs = {}
    for i, term in enumerate(terms):
        where = f"terms[{i}]"
        if not isinstance(term, dict):
            raise SpecError(where, "expected an object")
        extra = set(term) - {"j", "k", "re", "im"}
        if extra:
            raise SpecError(f"{where}.{sorted(extra)[0]}", "unknown key")
        for key in ("j", "k"):
            if key not in term:
                raise SpecError(f"{where}.{key}", "missing")
            value = term[key]
            if isinstance(value, bool) or not isinstance(value, Integral):
                raise SpecError(f"{where}.{key}", f"expected an integer, got {value!r}")
            if value < 0:
                raise SpecError(f"{where}.{key}", f"exponent must be >= 0, got {value}")
        if "re" not in term:
            raise SpecError(f"{where}.re", "missing")
        re_ = _number(term, "re")
        im_ = _number(term, "im") if "im" in term else 0.0
        idx = (int(term["j"]), int(term["k"]))
        if idx in coeffs:
            raise SpecError(where, f"duplicate term {idx}")
        coeffs[idx] = complex(re_, im_)
    return PolySymbol(coeffs)


def parse_symbol_spec(text: str) -> PolySymbol:
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError("<root>", f"invalid JSON: {exc}") from None
    return symbol_from_mapping(spec)


def symbol_to_spec(f: PolySymbol) -> dict:
    return {"terms": [{"j": j, "k": k, "re": c.real, "im": c.imag} for (j, k), c in f.coeffs.items()]}


def serialize_domain(domain: ShadowDomain) -> str:
    return dumps(domain.to_spec())


def serialize_symbol(f: PolySymbol) -> str:
    return dumps(symbol_to_spec(f))


def format_float(x: float) -> str:
    """17 significant digits; non-finite values become ``null``."""
    if not math.isfinite(x):
        return "null"
    text = f"{x:.17g}"
    if all(ch not in text for ch in ".en"):
        text += ".0"
    return text


def dumps(obj, indent: int = 2) -> str:
    """JSON text with insertion-ordered keys and 17-digit floats."""
    pad = " " * indent

    def enc(value, level):
        if value is None or isinstance(value, bool):
            return json.dumps(value)
        if isinstance(value, Integral):
            return str(int(value))
        if isinstance(value, Real):
            return format_float(float(value))
        if isinstance(value, str):
            return json.dumps(value, ensure_ascii=False)
        inner = pad * (level + 1)
        if isinstance(value, dict):
            if not value:
                return "{}"
            items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {enc(v, level + 1)}"
                     for k, v in value.items()]
            return "{\n" + ",\n".join(items) + "\n" + pad * level + "}"
        if isinstance(value, (list, tuple)):
            if not value:
                return "[]"
            if all(isinstance(v, (Real, type(None))) for v in value):
                return "[" + ", ".join(enc(v, level + 1) for v in value) + "]"
            items = [inner + enc(v, level + 1) for v in value]
            return "[\n" + ",\n".join(items) + "\n" + pad * level + "]"
        raise TypeError(f"cannot serialize {type(value).__name__}")

    return enc(obj, 0) + "\n"
