"""Parse numbers carrying SI prefixes and unit names, e.g. ``10MHz``, ``2pF``, ``100uA/V``."""

from __future__ import annotations

import re
from decimal import Decimal

# prefix -> power of ten; scaling is done in decimal so 100u is exactly float("100e-6")
PREFIXES = {"T": 12, "G": 9, "M": 6, "k": 3, "m": -3, "u": -6, "n": -9, "p": -12, "f": -15}
UNITS = ("A/V", "Hz", "Ohm", "F", "A", "V", "s", "K", "S")

_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PATTERN = re.compile(
    rf"^\s*(?P<num>{_NUMBER})\s*(?P<prefix>[{''.join(PREFIXES)}])?"
    rf"(?P<unit>{'|'.join(re.escape(u) for u in UNITS)})?\s*$"
)


def parse_quantity(text: str) -> float:
    """Bare numbers are SI base units. Raises ValueError on anything else."""
    m = _PATTERN.match(text)
    if not m:
        raise ValueError(f"cannot parse quantity {text!r}")
    value = Decimal(m.group("num"))
    if m.group("prefix"):
        value = value.scaleb(PREFIXES[m.group("prefix")])
    return float(value)


def format_quantity(value: float) -> str:
    """Round-trippable text for a float."""
    return repr(float(value))
