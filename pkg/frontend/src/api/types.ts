/**
 * Typed mirrors of the JSON documents the service exchanges.
 *
 * These are wire types, not view models: field names match the server's JSON
 * exactly (snake_case where the server uses snake_case).  View modules
 * translate them into whatever shape the page needs.
 */

// -- network documents ------------------------------------------------------

export type VariableKind = "Boolean" | "Ordered" | "Unordered";

export interface VariableDoc {
  id: string;
  name: string;
  kind: VariableKind;
  states: string[];
  isTarget: boolean;
  description: string | null;
  rationale: string | null;
}

export interface ArrowDoc {
  from: string;
  to: string;
  label: string | null;
}

/** One CPT row: the parent-state combination plus a cell per child state.
 * A null cell is a blank the server will fill uniformly on completion. */
export interface CptRowDoc {
  combo: string[];
  cells: Record<string, number | null>;
}

export interface CptDoc {
  child: string;
  parents: string[];
  rows: CptRowDoc[];
}

export interface NetworkDoc {
  format: "delphinet-network";
  version: number;
  name: string | null;
  variables: VariableDoc[];
  arrows: ArrowDoc[];
  cpts: CptDoc[];
}

// -- scenarios and evaluation -----------------------------------------------

export interface ScenarioDoc {
  id: string;
  name: string;
  description: string | null;
  evidence: Record<string, string>;
  outputs: string[];
  is_base: boolean;
  /** True when the network changed since the scenario was saved. */
  invalidated: boolean;
}

export interface ScenarioListResponse {
  scenarios: ScenarioDoc[];
  network_version: number;
  signature: string;
}

export interface PosteriorDoc {
  variable: string;
  name: string;
  distribution: Record<string, number>;
}

export interface TargetStatementDoc {
  variable: string;
  variable_name: string;
  state: string;
  prior: number;
  posterior: number;
  prior_text: string;
  posterior_text: string;
}

export interface SummaryDoc {
  text: string;
  statements: TargetStatementDoc[];
  evidence: string[];
  changes: string[];
}

export interface EvaluationResponse {
  scenario: {
    id: string;
    name: string;
    evidence: Record<string, string>;
    outputs: string[];
  };
  posteriors: PosteriorDoc[];
  summary: SummaryDoc;
  from_cache: boolean;
}

export interface ExplanationSummaryResponse {
  level: "summary";
  scenario: { id: string; name: string };
  summary: SummaryDoc;
}

export interface ExplanationDetailResponse {
  level: "detail";
  scenario: { id: string; name: string };
  sections: { id: string; text: string }[];
  network_hash: string;
}

// -- workflow ----------------------------------------------------------------

export interface WorkStatusResponse {
  step: number;
  version: number;
  status: string;
}

export interface AdvanceResponse {
  current: number;
  max_reached: number;
}

export interface LoginResponse {
  token: string;
}

// -- error envelope -----------------------------------------------------------

/** Reason codes the locked-screen renderer distinguishes.  The server may
 * send others (NAME_COLLISION, DEADLINE, ...); they fall through to the
 * generic handler. */
export type KnownReason =
  | "DELPHI_GATE"
  | "ROLE"
  | "VERSION_CONFLICT"
  | "IMPOSSIBLE_EVIDENCE";

/** Sub-reason sent with DELPHI_GATE errors saying which gate refused. */
export type GateReason =
  | "viewer_not_shared"
  | "owner_not_shared"
  | "classic_mode"
  | "not_published"
  | "not_released"
  | "not_shared"
  | "not_reached";

export interface ErrorBody {
  reason: string;
  message: string;
  gate?: string;
  context?: Record<string, unknown>;
}

export interface ErrorEnvelope {
  error: ErrorBody;
}
