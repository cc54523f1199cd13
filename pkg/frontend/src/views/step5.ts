/**
 * Step-5 scenario workspace: a pure view model for the three-panel screen.
 *
 * Left panel lists the scenarios (base scenario first, exactly one active
 * and expanded); the middle panel shows the network with the active
 * scenario's evidence variables highlighted; the right panel shows the
 * output distributions of the latest evaluation with the summary
 * explanation beneath, refreshed on every evaluation.  Evaluation errors
 * surface as inline notices in the right panel rather than replacing the
 * screen.
 *
 * The model is a plain function of its inputs: two instances built from the
 * same documents render independently (two browser windows on two scenarios
 * see the same data without sharing state).
 */

import type {
  EvaluationResponse,
  NetworkDoc,
  ScenarioDoc,
} from "../api/types";
import { ApiError } from "../api/client";
import {
  layoutNetwork,
  type CanvasLayout,
  type NetworkStructure,
  type Point,
} from "../layout/layout";
import { formatPercent, renderProbability } from "../verbal";
import { screenForError, type LockedScreen } from "./gates";

export interface ScenarioListItem {
  id: string;
  name: string;
  description: string | null;
  isBase: boolean;
  active: boolean;
  expanded: boolean;
  invalidated: boolean;
}

export interface NetworkPanel {
  layout: CanvasLayout;
  /** Variable ids highlighted because the active scenario sets them. */
  highlighted: string[];
  /** The active scenario's evidence, for the per-node state badges. */
  evidence: Record<string, string>;
}

export interface DistributionRow {
  state: string;
  probability: number;
  percent: string;
  /** Dual rendering, e.g. "Very Likely (95.79%)". */
  rendered: string;
}

export interface OutputBlock {
  variable: string;
  name: string;
  isTarget: boolean;
  rows: DistributionRow[];
}

export interface OutputPanel {
  scenarioId: string | null;
  outputs: OutputBlock[];
  /** Summary explanation shown beneath the distributions. */
  summaryText: string | null;
  fromCache: boolean;
  /** Inline notice from a failed evaluation, if any. */
  notice: LockedScreen | null;
}

export interface ThreePanelView {
  scenarios: ScenarioListItem[];
  network: NetworkPanel;
  results: OutputPanel;
}

/** Canvas structure for a network document. */
export function structureOf(network: NetworkDoc): NetworkStructure {
  return {
    nodes: network.variables.map((v) => ({
      id: v.id,
      name: v.name,
      isTarget: v.isTarget,
    })),
    arrows: network.arrows.map((a) => ({ from: a.from, to: a.to })),
  };
}

export class Step5Workspace {
  private readonly network: NetworkDoc;
  private readonly scenarios: ScenarioDoc[];
  private readonly pins: Record<string, Point>;
  private readonly targets: Set<string>;
  private readonly evaluations = new Map<string, EvaluationResponse>();
  private notice: LockedScreen | null = null;
  private activeId: string;

  constructor(
    network: NetworkDoc,
    scenarios: ScenarioDoc[],
    options: { pinnedPositions?: Record<string, Point>; activeId?: string } = {},
  ) {
    this.network = network;
    // Base scenario first, then the saved scenarios in server order.
    this.scenarios = [...scenarios].sort(
      (a, b) => Number(b.is_base) - Number(a.is_base),
    );
    if (this.scenarios.length === 0) {
      throw new Error("the scenario list always contains the base scenario");
    }
    this.pins = options.pinnedPositions ?? {};
    this.targets = new Set(
      network.variables.filter((v) => v.isTarget).map((v) => v.id),
    );
    this.activeId = options.activeId ?? this.scenarios[0]!.id;
  }

  get active(): ScenarioDoc {
    const found = this.scenarios.find((s) => s.id === this.activeId);
    return found ?? this.scenarios[0]!;
  }

  /** Make a scenario active (and expanded); clears any inline notice. */
  activate(scenarioId: string): void {
    if (!this.scenarios.some((s) => s.id === scenarioId)) {
      throw new Error(`no scenario ${JSON.stringify(scenarioId)}`);
    }
    this.activeId = scenarioId;
    this.notice = null;
  }

  /** Record an evaluation result; the right panel refreshes from it. */
  applyEvaluation(evaluation: EvaluationResponse): void {
    this.evaluations.set(evaluation.scenario.id, evaluation);
    if (evaluation.scenario.id === this.activeId) this.notice = null;
  }

  /** Record a failed evaluation as an inline notice for the active scenario. */
  applyError(error: ApiError): void {
    this.notice = screenForError(error);
  }

  view(): ThreePanelView {
    const active = this.active;
    const evaluation = this.evaluations.get(active.id) ?? null;
    return {
      scenarios: this.scenarios.map((s) => ({
        id: s.id,
        name: s.name,
        description: s.description,
        isBase: s.is_base,
        active: s.id === active.id,
        expanded: s.id === active.id,
        invalidated: s.invalidated,
      })),
      network: {
        layout: layoutNetwork(structureOf(this.network), this.pins),
        highlighted: Object.keys(active.evidence).sort(),
        evidence: { ...active.evidence },
      },
      results: {
        scenarioId: evaluation ? active.id : null,
        outputs: evaluation
          ? evaluation.posteriors.map((post) => ({
              variable: post.variable,
              name: post.name,
              isTarget: this.targets.has(post.variable),
              rows: this.distributionRows(post.variable, post.distribution),
            }))
          : [],
        summaryText: evaluation ? evaluation.summary.text : null,
        fromCache: evaluation ? evaluation.from_cache : false,
        notice: this.notice,
      },
    };
  }

  private distributionRows(
    variable: string,
    distribution: Record<string, number>,
  ): DistributionRow[] {
    const doc = this.network.variables.find((v) => v.id === variable);
    const states = doc ? doc.states : Object.keys(distribution).sort();
    return states
      .filter((state) => state in distribution)
      .map((state) => {
        const p = distribution[state]!;
        return {
          state,
          probability: p,
          percent: formatPercent(p),
          rendered: renderProbability(p),
        };
      });
  }
}
