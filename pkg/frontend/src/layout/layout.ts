/**
 * Layered left-to-right network layout with pin constraints.
 *
 * Given an acyclic structure, nodes are assigned to layers by longest path
 * from a root, ordered within each layer by a barycenter heuristic, and
 * placed on a fixed column/row grid.  Because an unpinned child always sits
 * at least one layer to the right of its unpinned parents, every arrow
 * between unpinned nodes points left-to-right — the causal "flow" reads in
 * one direction.
 *
 * Pinned positions are authoritative: a pinned node keeps exactly the
 * coordinates the user dragged it to, and only unpinned nodes move to keep
 * the canvas overlap-free.  (The drag layer refuses to drop one node onto
 * another, so two pins never collide.)
 *
 * Everything here is deterministic: identical input yields identical
 * coordinates, down to iteration order.
 */

export interface StructureNode {
  id: string;
  name?: string;
  isTarget?: boolean;
}

export interface StructureArrow {
  from: string;
  to: string;
}

export interface NetworkStructure {
  nodes: StructureNode[];
  arrows: StructureArrow[];
}

export interface Point {
  x: number;
  y: number;
}

export interface NodeGlyph {
  id: string;
  name: string;
  /** Center of the glyph box. */
  x: number;
  y: number;
  width: number;
  height: number;
  layer: number;
  pinned: boolean;
  /** Target variables render in the emphasis colour, all others neutral. */
  colour: "target" | "neutral";
}

export interface ArrowGlyph {
  from: string;
  to: string;
  /** Where the line leaves the source glyph. */
  tail: Point;
  /** Where the arrowhead is drawn, on the target glyph's boundary. */
  head: Point;
  /** Direction of travel at the head, radians; orients the arrowhead. */
  headAngle: number;
}

export interface CanvasLayout {
  nodes: NodeGlyph[];
  arrows: ArrowGlyph[];
  width: number;
  height: number;
}

const LAYER_SPACING = 260;
const ROW_SPACING = 64;
const MARGIN_X = 140;
const MARGIN_Y = 60;
const GLYPH_HEIGHT = 36;
const GLYPH_MIN_WIDTH = 80;
const GLYPH_MAX_WIDTH = 232;
const GLYPH_PADDING = 8;
const ORDERING_SWEEPS = 4;

function glyphWidth(name: string): number {
  const w = 28 + name.length * 8;
  return Math.max(GLYPH_MIN_WIDTH, Math.min(GLYPH_MAX_WIDTH, w));
}

/** Longest-path layer per node; throws if the structure has a cycle. */
function assignLayers(
  ids: string[],
  parents: Map<string, string[]>,
): Map<string, number> {
  const layer = new Map<string, number>();
  const visiting = new Set<string>();

  const visit = (id: string): number => {
    const known = layer.get(id);
    if (known !== undefined) return known;
    if (visiting.has(id)) {
      throw new Error(`structure contains a cycle through ${JSON.stringify(id)}`);
    }
    visiting.add(id);
    let depth = 0;
    for (const parent of parents.get(id) ?? []) {
      depth = Math.max(depth, visit(parent) + 1);
    }
    visiting.delete(id);
    layer.set(id, depth);
    return depth;
  };

  for (const id of ids) visit(id);
  return layer;
}

/** Barycenter ordering: repeatedly sort each layer by the mean row index of
 * its neighbours in adjacent sweeps.  Ties keep the current order, which
 * starts as the id sort, so the result is deterministic. */
function orderLayers(
  layers: string[][],
  parents: Map<string, string[]>,
  children: Map<string, string[]>,
): void {
  const rowIndex = new Map<string, number>();
  const refresh = () => {
    for (const row of layers) {
      row.forEach((id, i) => rowIndex.set(id, i));
    }
  };
  refresh();

  const sortBy = (row: string[], neighbours: Map<string, string[]>) => {
    const score = new Map<string, number>();
    for (const id of row) {
      const ns = (neighbours.get(id) ?? []).filter((n) => rowIndex.has(n));
      const mean = ns.length
        ? ns.reduce((acc, n) => acc + (rowIndex.get(n) ?? 0), 0) / ns.length
        : rowIndex.get(id) ?? 0;
      score.set(id, mean);
    }
    row.sort((a, b) => {
      const d = (score.get(a) ?? 0) - (score.get(b) ?? 0);
      if (d !== 0) return d;
      return (rowIndex.get(a) ?? 0) - (rowIndex.get(b) ?? 0);
    });
  };

  for (let sweep = 0; sweep < ORDERING_SWEEPS; sweep += 1) {
    for (let l = 1; l < layers.length; l += 1) {
      sortBy(layers[l]!, parents);
      refresh();
    }
    for (let l = layers.length - 2; l >= 0; l -= 1) {
      sortBy(layers[l]!, children);
      refresh();
    }
  }
}

interface Box {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

function boxFor(x: number, y: number, width: number, height: number): Box {
  const halfW = width / 2 + GLYPH_PADDING;
  const halfH = height / 2 + GLYPH_PADDING;
  return { left: x - halfW, right: x + halfW, top: y - halfH, bottom: y + halfH };
}

function boxesIntersect(a: Box, b: Box): boolean {
  return a.left < b.right && b.left < a.right && a.top < b.bottom && b.top < a.bottom;
}

/** Intersection of the segment from the box centre towards `towards` with the
 * box boundary; used to anchor arrow endpoints on glyph edges. */
function boundaryPoint(glyph: NodeGlyph, towards: Point): Point {
  const dx = towards.x - glyph.x;
  const dy = towards.y - glyph.y;
  if (dx === 0 && dy === 0) return { x: glyph.x, y: glyph.y };
  const halfW = glyph.width / 2;
  const halfH = glyph.height / 2;
  const scaleX = dx === 0 ? Number.POSITIVE_INFINITY : halfW / Math.abs(dx);
  const scaleY = dy === 0 ? Number.POSITIVE_INFINITY : halfH / Math.abs(dy);
  const scale = Math.min(scaleX, scaleY);
  return { x: glyph.x + dx * scale, y: glyph.y + dy * scale };
}

/**
 * Compute the canvas layout for a network structure.
 *
 * `pinnedPositions` maps node ids to the centres the user dragged them to;
 * every other node flows onto the layered grid.  A single unpinned node
 * lands at the canvas centre.
 */
export function layoutNetwork(
  structure: NetworkStructure,
  pinnedPositions: Record<string, Point> = {},
): CanvasLayout {
  const nodes = [...structure.nodes].sort((a, b) => a.id.localeCompare(b.id));
  const ids = nodes.map((n) => n.id);
  const byId = new Map(nodes.map((n) => [n.id, n]));

  const parents = new Map<string, string[]>(ids.map((id) => [id, []]));
  const children = new Map<string, string[]>(ids.map((id) => [id, []]));
  const arrows = [...structure.arrows].sort(
    (a, b) => a.from.localeCompare(b.from) || a.to.localeCompare(b.to),
  );
  for (const arrow of arrows) {
    if (!byId.has(arrow.from) || !byId.has(arrow.to)) {
      throw new Error(
        `arrow ${arrow.from} -> ${arrow.to} references an unknown node`,
      );
    }
    parents.get(arrow.to)!.push(arrow.from);
    children.get(arrow.from)!.push(arrow.to);
  }

  const layerOf = assignLayers(ids, parents);
  const layerCount = ids.length ? Math.max(...layerOf.values()) + 1 : 0;

  // Only unpinned nodes occupy grid slots; pinned nodes sit wherever the
  // user left them.
  const layers: string[][] = Array.from({ length: layerCount }, () => []);
  for (const id of ids) {
    if (!(id in pinnedPositions)) layers[layerOf.get(id)!]!.push(id);
  }
  orderLayers(layers, parents, children);

  const tallest = Math.max(1, ...layers.map((row) => row.length));
  const centerY = MARGIN_Y + ((tallest - 1) * ROW_SPACING) / 2;

  const glyphs = new Map<string, NodeGlyph>();
  const placedBoxes: Box[] = [];

  const place = (id: string, x: number, y: number, pinned: boolean): void => {
    const node = byId.get(id)!;
    const name = node.name ?? node.id;
    const width = glyphWidth(name);
    let finalY = y;
    if (!pinned) {
      // Bump straight down past anything already placed (pins included);
      // downward-only keeps the resolution deterministic.
      let box = boxFor(x, finalY, width, GLYPH_HEIGHT);
      let guard = 0;
      while (placedBoxes.some((other) => boxesIntersect(box, other))) {
        finalY += ROW_SPACING / 2;
        box = boxFor(x, finalY, width, GLYPH_HEIGHT);
        guard += 1;
        if (guard > 10_000) {
          throw new Error("layout failed to resolve node overlap");
        }
      }
      placedBoxes.push(box);
    } else {
      placedBoxes.push(boxFor(x, finalY, width, GLYPH_HEIGHT));
    }
    glyphs.set(id, {
      id,
      name,
      x,
      y: finalY,
      width,
      height: GLYPH_HEIGHT,
      layer: layerOf.get(id)!,
      pinned,
      colour: node.isTarget ? "target" : "neutral",
    });
  };

  // Pins first (they never move), then the grid layer by layer.
  for (const id of ids) {
    const pin = pinnedPositions[id];
    if (pin) place(id, pin.x, pin.y, true);
  }
  for (const row of layers) {
    row.forEach((id, index) => {
      const x = MARGIN_X + layerOf.get(id)! * LAYER_SPACING;
      const y = centerY + (index - (row.length - 1) / 2) * ROW_SPACING;
      place(id, x, y, false);
    });
  }

  const arrowGlyphs: ArrowGlyph[] = arrows.map((arrow) => {
    const source = glyphs.get(arrow.from)!;
    const target = glyphs.get(arrow.to)!;
    const tail = boundaryPoint(source, target);
    const head = boundaryPoint(target, source);
    return {
      from: arrow.from,
      to: arrow.to,
      tail,
      head,
      headAngle: Math.atan2(target.y - tail.y, target.x - tail.x),
    };
  });

  // Canvas dimensions are symmetric around the grid, so a lone unpinned
  // node sits at the exact centre; the margins already allow for glyph
  // extents, and only pins or bump-resolved nodes outside the grid grow the
  // canvas further (with a little clearance).
  const EDGE_CLEARANCE = 20;
  let width = 2 * MARGIN_X + Math.max(0, layerCount - 1) * LAYER_SPACING;
  let height = 2 * MARGIN_Y + (tallest - 1) * ROW_SPACING;
  for (const glyph of glyphs.values()) {
    width = Math.max(width, glyph.x + glyph.width / 2 + EDGE_CLEARANCE);
    height = Math.max(height, glyph.y + glyph.height / 2 + EDGE_CLEARANCE);
  }

  return {
    nodes: ids.map((id) => glyphs.get(id)!),
    arrows: arrowGlyphs,
    width,
    height,
  };
}
