"""Versioned JSON instance files with exact rational round-tripping.

Scalars serialize as "p/q" strings (or "p" for integers); decimal strings
and JSON integers are accepted on input and converted exactly, so
parse(write(x)) == x holds coordinate for coordinate.  Unknown top-level
fields are rejected in strict mode and preserved through a round trip in
lenient mode.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Union

from .geometry import Hyperplane, Instance, check_general_position
from .measures import FlatMeasureSpec

FORMAT_VERSION = 1

_KNOWN_FIELDS = {
    "format_version",
    "dim",
    "hyperplanes",
    "colors",
    "general_position",
    "measure",
    "metadata",
}


class ParseError(Exception):
    """Instance file rejection; ``code`` is a stable machine-readable tag."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


def scalar_to_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_scalar(raw) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError("bad-scalar", f"boolean is not a scalar: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError("bad-scalar", f"cannot parse scalar {raw!r}") from exc
    if isinstance(raw, float):
        # JSON floats arrive as decimal text; convert through it exactly
        return Fraction(repr(raw))
    raise ParseError("bad-scalar", f"unsupported scalar type {type(raw).__name__}")


def parse_instance(data: Union[bytes, str], strict: bool = False) -> Instance:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("malformed-json", "file is not UTF-8") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError("malformed-json", str(exc)) from exc
    if not isinstance(obj, dict):
        raise ParseError("malformed-json", "top level must be an object")

    version = obj.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError("bad-version", f"unsupported format_version {version}")

    unknown = set(obj) - _KNOWN_FIELDS
    if unknown and strict:
        raise ParseError("unknown-field", f"unknown fields {sorted(unknown)}")

    try:
        dim = int(obj["dim"])
        raw_planes = obj["hyperplanes"]
    except KeyError as exc:
        raise ParseError("malformed-json", f"missing field {exc}") from exc
    if dim < 1:
        raise ParseError("dimension-mismatch", f"dim must be positive, got {dim}")

    hyperplanes = []
    for i, hp in enumerate(raw_planes):
        normal = [parse_scalar(v) for v in hp["normal"]]
        if len(normal) != dim:
            raise ParseError(
                "dimension-mismatch",
                f"hyperplane {i} normal has length {len(normal)}, expected {dim}",
            )
        if all(v == 0 for v in normal):
            raise ParseError("zero-normal", f"hyperplane {i} has zero normal")
        offset = parse_scalar(hp["offset"])
        hyperplanes.append(Hyperplane(tuple(normal), offset))

    colors = obj.get("colors")
    if colors is not None:
        if len(colors) != len(hyperplanes):
            raise ParseError("bad-color", "colors length differs from hyperplane count")
        for c in colors:
            if not isinstance(c, int) or isinstance(c, bool) or not 0 <= c <= dim:
                raise ParseError("bad-color", f"color {c!r} out of range [0, {dim}]")

    metadata = dict(obj.get("metadata", {}))
    if unknown:
        metadata["_extra_fields"] = {k: obj[k] for k in sorted(unknown)}
    if "measure" in obj and obj["measure"] is not None:
        try:
            metadata["_measure"] = FlatMeasureSpec.from_json(obj["measure"])
        except (KeyError, ValueError) as exc:
            raise ParseError("malformed-json", f"bad measure stanza: {exc}") from exc

    inst = Instance(dim, hyperplanes, colors=colors, metadata=metadata)
    if obj.get("general_position"):
        gp = check_general_position(inst)
        if not gp.ok:
            raise ParseError(
                "general-position-violation",
                f"{gp.reason} subset {gp.violation}",
            )
        metadata["general_position"] = True
    return inst


def instance_measure(inst: Instance):
    """The measure stanza attached to an instance file, if any."""
    return inst.metadata.get("_measure")


def write_instance(inst: Instance) -> bytes:
    obj = {
        "format_version": FORMAT_VERSION,
        "dim": inst.dim,
        "hyperplanes": [
            {
                "normal": [scalar_to_str(v) for v in h.normal],
                "offset": scalar_to_str(h.offset),
            }
            for h in inst.hyperplanes
        ],
    }
    if inst.colors is not None:
        obj["colors"] = list(inst.colors)
    metadata = {
        k: v for k, v in inst.metadata.items() if not k.startswith("_")
    }
    if metadata.pop("general_position", None):
        obj["general_position"] = True
    measure = inst.metadata.get("_measure")
    if measure is not None:
        obj["measure"] = measure.to_json()
    if metadata:
        obj["metadata"] = metadata
    extra = inst.metadata.get("_extra_fields", {})
    for k, v in extra.items():
        obj[k] = v
    return (json.dumps(obj, indent=2, sort_keys=False) + "\n").encode("utf-8")
