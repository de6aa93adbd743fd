# utils/utils.py
# ---------------------------------------------------------------------
# Rational parsing/formatting for the "num/den" wire format
# Subset <-> 1-based element list helpers
# Deterministic JSON output for reports
# ---------------------------------------------------------------------
from __future__ import annotations

import json
import os
import re
from fractions import Fraction
from typing import Any, Iterable, Optional

from core.exceptions import ValidationError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


# ------------------ Rationals --------------------------------------------

def parse_rational(text: str) -> Fraction:
    """Parse "num/den" (or an integer). Decimal and float spellings are refused."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise ValidationError(f"not an exact rational 'num/den': {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValidationError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def parse_rational_list(text: str | Iterable[str]) -> list[Fraction]:
    """Accepts "1/2,1/3" or an iterable of rational strings."""
    if isinstance(text, str):
        parts = [p for p in text.split(",") if p.strip()]
    else:
        parts = list(text)
    if not parts:
        raise ValidationError("empty rational list")
    return [parse_rational(p) for p in parts]


def format_rational(value: Fraction | int) -> str:
    return str(Fraction(value))


# ------------------ Subsets as 1-based element lists ---------------------

def mask_of(elements: Iterable[int]) -> int:
    """{1,3} -> 0b101 (element l <-> bit l-1)."""
    mask = 0
    for e in elements:
        if int(e) < 1:
            raise ValidationError(f"ground elements are 1-based, got {e}")
        mask |= 1 << (int(e) - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    ell = 1
    while mask:
        if mask & 1:
            out.append(ell)
        mask >>= 1
        ell += 1
    return out


def iter_bits(value: int):
    """Indices of set bits, ascending."""
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


# ------------------ JSON ------------------------------------------------

def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"cannot read JSON from {path}: {e}")


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def write_json(payload: Any, path: Optional[str] = None) -> str:
    """Write to `path` (or return for stdout). Output is written once, whole."""
    text = dump_json(payload)
    if path:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    return text
