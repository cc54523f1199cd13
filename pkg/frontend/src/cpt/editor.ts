/**
 * CPT editor model: four input modes over one immutable store of numbers.
 *
 * The editor keeps probabilities as the numbers the user's input parsed to,
 * and a mode is nothing but a rendering/parsing lens over that store:
 * `layout` chooses between the spreadsheet table and the one-question-per-
 * parent-combination interview, `entry` chooses whether cells read and write
 * percentages or verbal descriptors.  Because switching modes only swaps the
 * lens and never rewrites the store, any sequence of switches leaves every
 * value bit-identical — losslessness is structural, not incidental.
 *
 * Blank cells stay blank; the server fills them uniformly on completion.
 */

import type { CptDoc, CptRowDoc, VariableDoc } from "../api/types";
import {
  formatPercent,
  InputError,
  parseProbabilityInput,
  toDescriptor,
} from "../verbal";

export type LayoutMode = "table" | "question";
export type CellEntryMode = "percent" | "descriptor";

export interface CptEditorMode {
  layout: LayoutMode;
  entry: CellEntryMode;
}

export interface CellView {
  state: string;
  /** Exact stored probability, or null when blank. */
  value: number | null;
  /** What the active entry mode shows in the cell. */
  display: string;
  /** Inline error from the last rejected input, if any. */
  flag: string | null;
}

export interface RowView {
  combo: string[];
  /** "Parent = state, Parent = state" caption for the row. */
  caption: string;
  cells: CellView[];
  /** Sum of the filled cells; drives the inline overflow warning. */
  total: number;
  overflow: boolean;
}

export interface TableView {
  kind: "table";
  /** Parent combinations grow downwards, never sideways. */
  scroll: "vertical";
  columns: string[];
  rows: RowView[];
}

export interface QuestionView {
  kind: "question";
  /** Exactly one prompt per parent-state combination. */
  prompts: { prompt: string; row: RowView }[];
}

const ROW_SUM_EPSILON = 1e-9;

function cellKey(rowIndex: number, state: string): string {
  return `${rowIndex}:${state}`;
}

export class CptEditor {
  private readonly child: VariableDoc;
  private readonly parentNames: Map<string, string>;
  private readonly parentsOrder: string[];
  private readonly rows: CptRowDoc[];
  private readonly flags = new Map<string, string>();
  private modeState: CptEditorMode;

  constructor(
    doc: CptDoc,
    child: VariableDoc,
    parents: VariableDoc[],
    mode: CptEditorMode = { layout: "table", entry: "percent" },
  ) {
    this.child = child;
    this.parentNames = new Map(parents.map((p) => [p.id, p.name]));
    // Copy rows so editing never mutates the caller's document.
    this.rows = doc.rows.map((row) => ({
      combo: [...row.combo],
      cells: { ...row.cells },
    }));
    this.modeState = { ...mode };
    this.parentsOrder = [...doc.parents];
  }

  get mode(): CptEditorMode {
    return { ...this.modeState };
  }

  /** Swap the rendering/parsing lens; the stored values are untouched. */
  setMode(next: Partial<CptEditorMode>): void {
    this.modeState = { ...this.modeState, ...next };
  }

  /** Exact stored probability for one cell (null when blank). */
  cellValue(rowIndex: number, state: string): number | null {
    return this.row(rowIndex).cells[state] ?? null;
  }

  /**
   * Parse `text` under the active entry mode and store the result.  Invalid
   * input leaves the stored value alone and flags the cell inline; the flag
   * clears on the next accepted input.  Returns the inline flag, if any.
   */
  setCell(rowIndex: number, state: string, text: string): string | null {
    const row = this.row(rowIndex);
    if (!(state in row.cells)) {
      throw new Error(`no child state ${JSON.stringify(state)}`);
    }
    const key = cellKey(rowIndex, state);
    if (text.trim() === "") {
      row.cells[state] = null;
      this.flags.delete(key);
      return null;
    }
    try {
      const parsed = parseProbabilityInput(
        text,
        this.modeState.entry === "percent" ? "percentage" : "descriptor",
      );
      row.cells[state] = parsed;
      this.flags.delete(key);
      return null;
    } catch (err) {
      if (err instanceof InputError) {
        this.flags.set(key, err.message);
        return err.message;
      }
      throw err;
    }
  }

  /** Current surface for the active mode. */
  render(): TableView | QuestionView {
    const rows = this.rows.map((row, index) => this.rowView(row, index));
    if (this.modeState.layout === "table") {
      return {
        kind: "table",
        scroll: "vertical",
        columns: [...this.child.states],
        rows,
      };
    }
    return {
      kind: "question",
      prompts: rows.map((row) => ({ prompt: this.promptFor(row), row })),
    };
  }

  /** The underlying document, with every stored value exactly as entered. */
  toDoc(): CptDoc {
    return {
      child: this.child.id,
      parents: [...this.parentsOrder],
      rows: this.rows.map((row) => ({
        combo: [...row.combo],
        cells: { ...row.cells },
      })),
    };
  }

  private row(rowIndex: number): CptRowDoc {
    const row = this.rows[rowIndex];
    if (!row) throw new Error(`no CPT row ${rowIndex}`);
    return row;
  }

  private caption(combo: string[]): string {
    return combo
      .map((state, i) => {
        const pid = this.parentsOrder[i] ?? `parent ${i}`;
        return `${this.parentNames.get(pid) ?? pid} = ${state}`;
      })
      .join(", ");
  }

  private promptFor(row: RowView): string {
    const about = `how likely is each outcome of ${this.child.name}?`;
    if (row.combo.length === 0) {
      return `In general, ${about}`;
    }
    return `Given ${row.caption}, ${about}`;
  }

  private rowView(row: CptRowDoc, rowIndex: number): RowView {
    const cells: CellView[] = this.child.states.map((state) => {
      const value = row.cells[state] ?? null;
      return {
        state,
        value,
        display: this.displayFor(value),
        flag: this.flags.get(cellKey(rowIndex, state)) ?? null,
      };
    });
    const total = cells.reduce((acc, cell) => acc + (cell.value ?? 0), 0);
    return {
      combo: [...row.combo],
      caption: this.caption(row.combo),
      cells,
      total,
      overflow: total > 1 + ROW_SUM_EPSILON,
    };
  }

  private displayFor(value: number | null): string {
    if (value === null) return "";
    if (this.modeState.entry === "percent") return formatPercent(value);
    return toDescriptor(value);
  }
}
