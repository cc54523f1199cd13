/**
 * Verbal probability descriptors and probability parsing.
 *
 * Mirrors the server's band table exactly: the nine bands partition [0, 1],
 * interior bounds are lower-exclusive / upper-inclusive, and 0 and 1 are
 * singleton bands.  Keeping the client table identical to the server's means
 * a value entered as a descriptor here round-trips through the API without
 * shifting bands.
 */

export type Descriptor =
  | "No Chance"
  | "Almost No Chance"
  | "Very Unlikely"
  | "Unlikely"
  | "Roughly Even Chance"
  | "Likely"
  | "Very Likely"
  | "Almost Certain"
  | "Certain";

export const DESCRIPTORS: readonly Descriptor[] = [
  "No Chance",
  "Almost No Chance",
  "Very Unlikely",
  "Unlikely",
  "Roughly Even Chance",
  "Likely",
  "Very Likely",
  "Almost Certain",
  "Certain",
];

// (descriptor, exclusive lower bound, inclusive upper bound) for the interior
// bands; 0 and 1 are handled as singletons.
const BANDS: readonly [Descriptor, number, number][] = [
  ["Almost No Chance", 0.0, 0.05],
  ["Very Unlikely", 0.05, 0.2],
  ["Unlikely", 0.2, 0.45],
  ["Roughly Even Chance", 0.45, 0.55],
  ["Likely", 0.55, 0.8],
  ["Very Likely", 0.8, 0.95],
  ["Almost Certain", 0.95, 1.0],
];

// Representative value per band: the range midpoint (singletons map to
// themselves).
const MIDPOINTS: Readonly<Record<Descriptor, number>> = {
  "No Chance": 0.0,
  "Almost No Chance": 0.025,
  "Very Unlikely": 0.125,
  Unlikely: 0.325,
  "Roughly Even Chance": 0.5,
  Likely: 0.675,
  "Very Likely": 0.875,
  "Almost Certain": 0.975,
  Certain: 1.0,
};

const BY_NAME = new Map<string, Descriptor>(
  DESCRIPTORS.map((d) => [d.toLowerCase(), d]),
);

/** Error carrying a machine-readable reason, mirroring the API envelope. */
export class InputError extends Error {
  readonly reason: string;

  constructor(reason: string, message: string) {
    super(message);
    this.name = "InputError";
    this.reason = reason;
  }
}

/** Map a probability to the unique band containing it. */
export function toDescriptor(p: number): Descriptor {
  if (!(p >= 0 && p <= 1)) {
    throw new InputError("OUT_OF_RANGE", `probability ${p} outside [0, 1]`);
  }
  if (p === 0) return "No Chance";
  if (p === 1) return "Certain";
  for (const [descriptor, low, high] of BANDS) {
    if (low < p && p <= high) return descriptor;
  }
  // p in (0.95, 1) falls through only for floats just below 1.
  return "Almost Certain";
}

/** Representative probability for a band (its midpoint). */
export function fromDescriptor(d: Descriptor): number {
  return MIDPOINTS[d];
}

/** Position of the band in the 0..8 low-to-high order. */
export function bandIndex(d: Descriptor): number {
  return DESCRIPTORS.indexOf(d);
}

export type EntryMode = "percentage" | "descriptor";

/**
 * Parse a probability entered either as a percentage or as a band name.
 *
 * Percentage mode accepts decimal percentages ("32.41", optionally with a
 * trailing %); descriptor mode matches band names case-insensitively and
 * returns the band midpoint.  Throws InputError on bad input so editors can
 * flag the cell inline.
 */
export function parseProbabilityInput(text: string, mode: EntryMode): number {
  const stripped = text.trim();
  if (mode === "percentage") {
    const body = stripped.endsWith("%")
      ? stripped.slice(0, -1).trim()
      : stripped;
    if (!body) {
      throw new InputError("PARSE", "empty percentage");
    }
    const value = Number(body);
    if (!Number.isFinite(value)) {
      throw new InputError("PARSE", `not a number: ${JSON.stringify(body)}`);
    }
    if (!(value >= 0 && value <= 100)) {
      throw new InputError(
        "OUT_OF_RANGE",
        `percentage ${value} outside [0, 100]`,
      );
    }
    return value / 100;
  }
  const descriptor = BY_NAME.get(stripped.toLowerCase());
  if (descriptor === undefined) {
    throw new InputError(
      "UNKNOWN_DESCRIPTOR",
      `no probability band named ${JSON.stringify(stripped)}`,
    );
  }
  return fromDescriptor(descriptor);
}

/** Format a probability as a percentage with two decimals, e.g. "32.41%". */
export function formatPercent(p: number): string {
  return `${(p * 100).toFixed(2)}%`;
}

/** Dual rendering used wherever the UI quotes a probability. */
export function renderProbability(p: number): string {
  return `${toDescriptor(p)} (${(p * 100).toFixed(2)}%)`;
}
