"""Canonical JSON emission: sorted keys, floats at 17 significant digits.

Identical report objects serialize to byte-identical text, which downstream
reproducibility scripts rely on.
"""

from __future__ import annotations

import math


def _emit(obj, indent, level):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return repr(obj)
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            raise ValueError(f"non-finite float {obj!r} cannot be serialized")
        return format(obj, ".17g")
    if isinstance(obj, str):
        out = ['"']
        for ch in obj:
            if ch == '"':
                out.append('\\"')
            elif ch == "\\":
                out.append("\\\\")
            elif ord(ch) < 0x20:
                out.append(f"\\u{ord(ch):04x}")
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad_in + _emit(x, indent, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            items.append(
                pad_in + _emit(key, indent, level + 1) + ": " + _emit(obj[key], indent, level + 1)
            )
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    # numpy scalars and similar
    for caster in (int, float):
        try:
            if isinstance(obj, bool):
                break
            cast = caster(obj)
            if cast == obj:
                return _emit(cast, indent, level)
        except (TypeError, ValueError):
            continue
    raise TypeError(f"cannot serialize {type(obj)}")


def canonical_dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text with sorted keys and %.17g floats."""
    return _emit(obj, indent, 0) + "\n"
