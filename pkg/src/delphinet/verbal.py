"""Verbal probability descriptors (ICD-203 bands) and probability parsing.

The nine bands partition [0, 1] exactly.  Interior bounds are
lower-exclusive / upper-inclusive; 0 and 1 are singleton bands.  The standard
source table mislabels the 5-20% band with the same name as 0-5%; here it is
"Very Unlikely", which keeps the mapping invertible.
"""

from __future__ import annotations

from enum import Enum

from .errors import OutOfRangeError, ParseError, UnknownDescriptorError


class Descriptor(str, Enum):
    NO_CHANCE = "No Chance"
    ALMOST_NO_CHANCE = "Almost No Chance"
    VERY_UNLIKELY = "Very Unlikely"
    UNLIKELY = "Unlikely"
    ROUGHLY_EVEN_CHANCE = "Roughly Even Chance"
    LIKELY = "Likely"
    VERY_LIKELY = "Very Likely"
    ALMOST_CERTAIN = "Almost Certain"
    CERTAIN = "Certain"


# (descriptor, exclusive lower bound, inclusive upper bound) for the interior
# bands; 0.0 and 1.0 are handled as singletons.
_BANDS: list[tuple[Descriptor, float, float]] = [
    (Descriptor.ALMOST_NO_CHANCE, 0.00, 0.05),
    (Descriptor.VERY_UNLIKELY, 0.05, 0.20),
    (Descriptor.UNLIKELY, 0.20, 0.45),
    (Descriptor.ROUGHLY_EVEN_CHANCE, 0.45, 0.55),
    (Descriptor.LIKELY, 0.55, 0.80),
    (Descriptor.VERY_LIKELY, 0.80, 0.95),
    (Descriptor.ALMOST_CERTAIN, 0.95, 1.00),
]

_BAND_ORDER: dict[Descriptor, int] = {d: i for i, d in enumerate(Descriptor)}

# Representative value per band: the range midpoint (singletons map to
# themselves).
_MIDPOINTS: dict[Descriptor, float] = {
    Descriptor.NO_CHANCE: 0.0,
    Descriptor.ALMOST_NO_CHANCE: 0.025,
    Descriptor.VERY_UNLIKELY: 0.125,
    Descriptor.UNLIKELY: 0.325,
    Descriptor.ROUGHLY_EVEN_CHANCE: 0.50,
    Descriptor.LIKELY: 0.675,
    Descriptor.VERY_LIKELY: 0.875,
    Descriptor.ALMOST_CERTAIN: 0.975,
    Descriptor.CERTAIN: 1.0,
}

_BY_NAME: dict[str, Descriptor] = {d.value.lower(): d for d in Descriptor}


def to_descriptor(p: float) -> Descriptor:
    """Map a probability to the unique band containing it."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeError(f"probability {p!r} outside [0, 1]")
    if p == 0.0:
        return Descriptor.NO_CHANCE
    if p == 1.0:
        return Descriptor.CERTAIN
    for descriptor, low, high in _BANDS:
        if low < p <= high:
            return descriptor
    # p in (0.95, 1) falls through only for floats just below 1.0
    return Descriptor.ALMOST_CERTAIN


def from_descriptor(d: Descriptor) -> float:
    """Representative probability for a band (its midpoint)."""
    return _MIDPOINTS[d]


def band_index(d: Descriptor) -> int:
    """Position of the band in the 0..8 low-to-high order."""
    return _BAND_ORDER[d]


def parse_probability_input(text: str, mode: str) -> float:
    """Parse a probability entered either as a percentage or as a band name.

    ``mode`` is ``"percentage"`` or ``"descriptor"``.  Percentage mode accepts
    decimal percentages ("32.41", optionally with a trailing %); descriptor
    mode matches band names case-insensitively and returns the band midpoint.
    """
    stripped = text.strip()
    if mode == "percentage":
        body = stripped[:-1].strip() if stripped.endswith("%") else stripped
        if not body:
            raise ParseError("empty percentage", position=0)
        try:
            value = float(body)
        except ValueError:
            bad = next(
                (i for i, ch in enumerate(body) if not (ch.isdigit() or ch in ".+-e")),
                0,
            )
            raise ParseError(f"not a number: {body!r}", position=bad) from None
        if not 0.0 <= value <= 100.0:
            raise OutOfRangeError(f"percentage {value!r} outside [0, 100]")
        return value / 100.0
    if mode == "descriptor":
        descriptor = _BY_NAME.get(stripped.lower())
        if descriptor is None:
            raise UnknownDescriptorError(f"no probability band named {stripped!r}")
        return from_descriptor(descriptor)
    raise ParseError(f"unknown input mode {mode!r}", position=0)


def render_probability(p: float) -> str:
    """Dual rendering used everywhere generated text quotes a probability."""
    return f"{to_descriptor(p).value} ({p * 100:.2f}%)"
