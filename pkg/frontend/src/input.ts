// Mouse/keyboard intent for the shill, coalesced to at most one set_shill
// message per animation frame.  The machine never emits while the session
// has no shill slot or the autopilot owns it; blocked input raises a hint
// for the UI instead.

import type { AgentFrame, SetShillMessage } from "./protocol.js";
import { PROTOCOL_VERSION } from "./protocol.js";

export type ControlSource = "manual" | "ubeta" | "none";

export const HEADING_STEP = Math.PI / 36; // 5 degrees per key press / wheel notch

const TAU = 2 * Math.PI;

function normalize(angle: number): number {
  let a = angle % TAU;
  if (a < 0) a += TAU;
  return a >= TAU ? 0 : a;
}

export class ShillInput {
  private pendingPosition: { x: number; y: number } | null = null;
  private headingDirty = false;
  private heading = 0;
  private blockedHint = false;

  constructor(private readonly step: number = HEADING_STEP) {}

  get headingRad(): number {
    return this.heading;
  }

  /** Latest pointer intent wins; world coordinates. */
  pointTo(worldX: number, worldY: number): void {
    this.pendingPosition = { x: worldX, y: worldY };
  }

  /** Rotate the heading dial by whole 5-degree steps (negative = clockwise). */
  turn(steps: number): void {
    if (steps === 0) return;
    this.heading = normalize(this.heading + steps * this.step);
    this.headingDirty = true;
  }

  /** Set the dial directly (drag on the dial). */
  setHeading(angle: number): void {
    this.heading = normalize(angle);
    this.headingDirty = true;
  }

  /** Adopt the server's shill heading so the dial starts where the shill is. */
  syncFrom(shill: AgentFrame | null): void {
    if (shill !== null && !this.headingDirty && this.pendingPosition === null) {
      this.heading = normalize(shill.heading);
    }
  }

  /** True when input arrived while the shill was not manually controllable;
   * reading clears the flag. */
  takeBlockedHint(): boolean {
    const hint = this.blockedHint;
    this.blockedHint = false;
    return hint;
  }

  /**
   * Called once per animation frame: returns at most one message.  Without a
   * pointer intent the shill's current position anchors a heading-only turn;
   * with neither a position reference nor any intent there is nothing to send.
   */
  drain(source: ControlSource, currentShill: AgentFrame | null): SetShillMessage | null {
    const hasIntent = this.pendingPosition !== null || this.headingDirty;
    if (!hasIntent) return null;
    if (source !== "manual") {
      this.pendingPosition = null;
      this.headingDirty = false;
      this.blockedHint = true;
      return null;
    }
    let x: number;
    let y: number;
    if (this.pendingPosition !== null) {
      x = this.pendingPosition.x;
      y = this.pendingPosition.y;
    } else if (currentShill !== null) {
      x = currentShill.x;
      y = currentShill.y;
    } else {
      return null; // heading-only intent with nowhere to anchor it yet
    }
    this.pendingPosition = null;
    this.headingDirty = false;
    return { v: PROTOCOL_VERSION, type: "set_shill", x, y, heading: this.heading };
  }
}
