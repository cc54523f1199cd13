/** Deterministic helpers for the test suites: a seeded RNG and random
 * generators for CPT documents and DAG structures. */

import type { CptDoc, VariableDoc } from "../src/api/types";
import type { NetworkStructure, Point } from "../src/layout/layout";

/** mulberry32: small, fast, seedable PRNG; plenty for test-data generation. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randInt(rng: () => number, low: number, high: number): number {
  return low + Math.floor(rng() * (high - low + 1));
}

export function choice<T>(rng: () => number, items: readonly T[]): T {
  return items[Math.floor(rng() * items.length)]!;
}

function variable(id: string, states: string[], isTarget = false): VariableDoc {
  return {
    id,
    name: id.toUpperCase(),
    kind: "Unordered",
    states,
    isTarget,
    description: null,
    rationale: null,
  };
}

export interface RandomCpt {
  doc: CptDoc;
  child: VariableDoc;
  parents: VariableDoc[];
}

/** A random CPT document: 0-3 parents with 2-3 states each, a 2-4 state
 * child, and cells holding full-precision random doubles or blanks. */
export function randomCpt(rng: () => number): RandomCpt {
  const childStates = Array.from(
    { length: randInt(rng, 2, 4) },
    (_, i) => `s${i}`,
  );
  const child = variable("child", childStates);
  const parents = Array.from({ length: randInt(rng, 0, 3) }, (_, i) =>
    variable(
      `p${i}`,
      Array.from({ length: randInt(rng, 2, 3) }, (_, j) => `v${j}`),
    ),
  );

  let combos: string[][] = [[]];
  for (const parent of parents) {
    combos = combos.flatMap((combo) =>
      parent.states.map((state) => [...combo, state]),
    );
  }

  const doc: CptDoc = {
    child: child.id,
    parents: parents.map((p) => p.id),
    rows: combos.map((combo) => {
      const cells: Record<string, number | null> = {};
      for (const state of childStates) {
        cells[state] = rng() < 0.2 ? null : rng();
      }
      return { combo, cells };
    }),
  };
  return { doc, child, parents };
}

/** A random DAG: ids in a random topological order, each candidate edge
 * kept with probability ~0.3, so acyclicity holds by construction. */
export function randomDag(rng: () => number, maxNodes = 15): NetworkStructure {
  const n = randInt(rng, 1, maxNodes);
  const order = Array.from({ length: n }, (_, i) => `n${i}`);
  for (let i = order.length - 1; i > 0; i -= 1) {
    const j = Math.floor(rng() * (i + 1));
    [order[i], order[j]] = [order[j]!, order[i]!];
  }
  const arrows: { from: string; to: string }[] = [];
  for (let i = 0; i < n; i += 1) {
    for (let j = i + 1; j < n; j += 1) {
      if (rng() < 0.3) arrows.push({ from: order[i]!, to: order[j]! });
    }
  }
  return {
    nodes: Array.from({ length: n }, (_, i) => ({
      id: `n${i}`,
      name: `Node ${i}`,
      isTarget: rng() < 0.15,
    })),
    arrows,
  };
}

/** Non-overlapping random pin positions: cells of a spaced grid, shuffled —
 * mirrors the drag layer, which refuses to drop one node onto another. */
export function randomPins(
  rng: () => number,
  structure: NetworkStructure,
  fraction = 0.3,
): Record<string, Point> {
  const cells: Point[] = [];
  for (let gx = 0; gx < 8; gx += 1) {
    for (let gy = 0; gy < 8; gy += 1) {
      cells.push({ x: 80 + gx * 300, y: 50 + gy * 150 });
    }
  }
  for (let i = cells.length - 1; i > 0; i -= 1) {
    const j = Math.floor(rng() * (i + 1));
    [cells[i], cells[j]] = [cells[j]!, cells[i]!];
  }
  const pins: Record<string, Point> = {};
  let next = 0;
  for (const node of structure.nodes) {
    if (rng() < fraction) pins[node.id] = cells[next++]!;
  }
  return pins;
}
