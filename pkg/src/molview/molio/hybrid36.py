"""Hybrid-36 serial numbers for PDB fields that overflow their column width.

Values beyond the decimal capacity continue in base 36, first with uppercase
digits then lowercase, so a 5-column serial reaches 2^25-ish instead of 99999.
"""

from __future__ import annotations

_UPPER = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"
_LOWER = _UPPER.lower()


def encode(width: int, value: int) -> str:
    if value < 0:
        raise ValueError("hybrid-36 does not encode negatives")
    if value < 10 ** width:
        return str(value).rjust(width)
    value -= 10 ** width
    span = 26 * 36 ** (width - 1)
    if value < span:
        return _encode_pure(_UPPER, value + 10 * 36 ** (width - 1), width)
    value -= span
    if value < span:
        return _encode_pure(_LOWER, value + 10 * 36 ** (width - 1), width)
    raise ValueError(f"value out of hybrid-36 range for width {width}")


def decode(field: str) -> int:
    s = field.strip()
    if not s:
        raise ValueError("empty hybrid-36 field")
    width = len(field)
    try:
        return int(s)
    except ValueError:
        pass
    base = 10 * 36 ** (width - 1)
    if s[0] in _UPPER[10:]:
        return _decode_pure(_UPPER, s) - base + 10 ** width
    if s[0] in _LOWER[10:]:
        return _decode_pure(_LOWER, s) - base + 10 ** width + 26 * 36 ** (width - 1)
    raise ValueError(f"not a hybrid-36 number: {field!r}")


def _encode_pure(digits: str, value: int, width: int) -> str:
    out = []
    while value:
        value, rem = divmod(value, 36)
        out.append(digits[rem])
    return "".join(reversed(out)).rjust(width, "0")


def _decode_pure(digits: str, s: str) -> int:
    value = 0
    for ch in s:
        idx = digits.find(ch)
        if idx < 0:
            raise ValueError(f"bad digit {ch!r}")
        value = value * 36 + idx
    return value
