/**
 * Locked-state screens for server refusals.
 *
 * The client never second-guesses the server: it attempts the action the
 * user asked for, and when the server says no it renders a screen that
 * explains the refusal and offers the one or two actions that make sense.
 * Every reason code gets its own distinct, non-blank presentation, so a 403
 * is never a dead end and never a blank page.
 */

import { ApiError } from "../api/client";

export interface ScreenAction {
  id: string;
  label: string;
}

export interface LockedScreen {
  /** Which family of presentation to use. */
  kind: "locked" | "forbidden" | "conflict" | "inline-notice" | "error";
  /** The server reason code this screen was built from. */
  code: string;
  icon: "lock" | "badge" | "merge" | "warning" | "alert";
  title: string;
  body: string;
  actions: ScreenAction[];
}

/** Per-gate wording for DELPHI_GATE refusals, keyed by the server's gate
 * sub-reason.  Unknown sub-reasons fall back to the generic gate body. */
const GATE_BODIES: Record<string, string> = {
  viewer_not_shared:
    "Share your own work on this step before looking at anyone else's. " +
    "Once you share, the step re-opens with your colleagues' work visible.",
  owner_not_shared:
    "This colleague has not shared their work on this step yet. " +
    "It becomes visible the moment they share.",
  classic_mode:
    "This problem runs in classic mode: colleagues' work stays hidden " +
    "until the facilitator releases the step.",
  not_published:
    "No group solution has been published for this step yet. " +
    "The facilitator publishes it when the group is ready.",
  not_released:
    "The facilitator has not released this step yet. " +
    "You will be notified when it opens.",
  not_shared:
    "This content is waiting on a share that has not happened yet.",
  not_reached:
    "The group has not reached this step yet. " +
    "Finish the earlier steps to unlock it.",
};

const GENERIC_GATE_BODY =
  "A process gate is holding this view closed for now. " +
  "It opens automatically as the group moves on.";

export function screenForError(error: ApiError): LockedScreen {
  switch (error.reason) {
    case "DELPHI_GATE":
      return {
        kind: "locked",
        code: "DELPHI_GATE",
        icon: "lock",
        title: "This step is still gated",
        body: GATE_BODIES[error.gate ?? ""] ?? GENERIC_GATE_BODY,
        actions: [
          { id: "back", label: "Back to my work" },
          { id: "refresh", label: "Check again" },
        ],
      };
    case "ROLE":
      return {
        kind: "forbidden",
        code: "ROLE",
        icon: "badge",
        title: "Not available for your role",
        body:
          `${error.message}. ` +
          "If you believe you should have access, ask your facilitator.",
        actions: [{ id: "back", label: "Back" }],
      };
    case "VERSION_CONFLICT":
      return {
        kind: "conflict",
        code: "VERSION_CONFLICT",
        icon: "merge",
        title: "Someone else saved first",
        body:
          "Your copy is out of date. Reload to get the latest version, " +
          "then merge your changes back in — nothing you wrote is lost.",
        actions: [
          { id: "reload-merge", label: "Reload and merge" },
          { id: "discard", label: "Discard my changes" },
        ],
      };
    case "IMPOSSIBLE_EVIDENCE":
      return {
        kind: "inline-notice",
        code: "IMPOSSIBLE_EVIDENCE",
        icon: "warning",
        title: "This evidence combination has zero probability",
        body:
          `${error.message}. ` +
          "The network rules this combination out entirely, so no posterior " +
          "exists. Remove or change one of the evidence settings.",
        actions: [{ id: "edit-evidence", label: "Edit evidence" }],
      };
    default:
      return {
        kind: "error",
        code: error.reason,
        icon: "alert",
        title: "The server declined that request",
        body: error.message || `Request failed (${error.reason}).`,
        actions: [{ id: "back", label: "Back" }],
      };
  }
}

/** True when a screen can be shown as-is: something to read, something to do. */
export function isRenderable(screen: LockedScreen): boolean {
  return (
    screen.title.trim().length > 0 &&
    screen.body.trim().length > 0 &&
    screen.actions.length > 0
  );
}
