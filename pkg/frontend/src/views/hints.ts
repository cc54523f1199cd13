/**
 * Embedded help as data: product tour stops, contextual tooltips, and the
 * "What do I do next?" hint for each page.
 *
 * The registry is purely declarative — pages look their entries up by id and
 * render them verbatim, so help content can be authored and revised without
 * touching view code.  `DEFAULT_HINTS` ships a baseline set; deployments can
 * merge their own entries over it.
 */

export interface HintEntry {
  /** Page the hint belongs to, e.g. "step4" or "scenarios". */
  page: string;
  /** Element anchor for tooltips, or "tour:<n>" for tour stops. */
  anchor: string;
  text: string;
}

export interface PageHints {
  tour: string[];
  tooltips: Record<string, string>;
  whatNext: string | null;
}

export class HintRegistry {
  private readonly entries: HintEntry[];

  constructor(entries: HintEntry[]) {
    this.entries = [...entries];
  }

  /** All hints for one page, grouped for rendering. */
  forPage(page: string): PageHints {
    const tour: [number, string][] = [];
    const tooltips: Record<string, string> = {};
    let whatNext: string | null = null;
    for (const entry of this.entries) {
      if (entry.page !== page) continue;
      const stop = /^tour:(\d+)$/.exec(entry.anchor);
      if (stop) {
        tour.push([Number(stop[1]), entry.text]);
      } else if (entry.anchor === "what-next") {
        whatNext = entry.text;
      } else {
        tooltips[entry.anchor] = entry.text;
      }
    }
    tour.sort((a, b) => a[0] - b[0]);
    return { tour: tour.map(([, text]) => text), tooltips, whatNext };
  }

  /** A new registry with `extra` merged on top of this one. */
  extend(extra: HintEntry[]): HintRegistry {
    return new HintRegistry([...this.entries, ...extra]);
  }
}

export const DEFAULT_HINTS: HintEntry[] = [
  {
    page: "step1",
    anchor: "what-next",
    text: "List the variables the question turns on, then share your draft so you can see your colleagues' lists.",
  },
  {
    page: "step3",
    anchor: "tour:1",
    text: "Drag an arrow from cause to effect. The canvas keeps causes to the left so the story reads left-to-right.",
  },
  {
    page: "step3",
    anchor: "canvas",
    text: "Drag a variable to pin it in place; everything else re-flows around it.",
  },
  {
    page: "step3",
    anchor: "what-next",
    text: "Connect every variable that directly influences another, then share your structure.",
  },
  {
    page: "step4",
    anchor: "mode-toggle",
    text: "Switch between the table and one question at a time, or between percentages and words — your numbers are kept either way.",
  },
  {
    page: "step4",
    anchor: "what-next",
    text: "Fill in each row; leave a cell blank to split the remainder evenly when the table is completed.",
  },
  {
    page: "scenarios",
    anchor: "tour:1",
    text: "The base scenario shows the network with no evidence. Add scenarios to ask what-if questions.",
  },
  {
    page: "scenarios",
    anchor: "evaluate",
    text: "Evaluate recomputes the outputs and refreshes the written summary beneath them.",
  },
  {
    page: "scenarios",
    anchor: "what-next",
    text: "Create a scenario for each situation the group cares about, evaluate it, and compare the outputs side by side.",
  },
];
