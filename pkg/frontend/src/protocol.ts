// Protocol schema v1: JSON text frames over a single websocket.

export const PROTOCOL_VERSION = 1;

export interface AgentFrame {
  x: number;
  y: number;
  heading: number;
}

export interface StateFrame {
  v: number;
  type: "state";
  tick: number;
  agents: AgentFrame[];
  shill: AgentFrame | null;
  delta: number | null;
}

export interface SyncFrame {
  v: number;
  type: "sync";
  tick: number;
}

export interface AckFrame {
  v: number;
  type: "ack";
  of: string;
  session_id?: string;
  state?: StateFrame;
  mode?: string;
  tick_rate?: number;
  control_source?: string;
  tick?: number;
}

export interface ErrorFrame {
  v: number;
  type: "error";
  code: string;
  detail: string;
}

export type ServerFrame = StateFrame | SyncFrame | AckFrame | ErrorFrame;

export interface SetShillMessage {
  v: number;
  type: "set_shill";
  x: number;
  y: number;
  heading: number;
}

function isAgentFrame(value: unknown): value is AgentFrame {
  if (typeof value !== "object" || value === null) return false;
  const a = value as Record<string, unknown>;
  return (
    typeof a.x === "number" && typeof a.y === "number" && typeof a.heading === "number"
  );
}

/** Parse one incoming frame; null means schema mismatch (show the banner,
 * draw nothing). */
export function parseServerFrame(raw: string): ServerFrame | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const frame = data as Record<string, unknown>;
  if (frame.v !== PROTOCOL_VERSION) return null;
  switch (frame.type) {
    case "state": {
      if (typeof frame.tick !== "number" || !Array.isArray(frame.agents)) return null;
      if (!frame.agents.every(isAgentFrame)) return null;
      if (frame.shill !== null && !isAgentFrame(frame.shill)) return null;
      if (frame.delta !== null && typeof frame.delta !== "number") return null;
      return frame as unknown as StateFrame;
    }
    case "sync":
      return typeof frame.tick === "number" ? (frame as unknown as SyncFrame) : null;
    case "ack":
      return typeof frame.of === "string" ? (frame as unknown as AckFrame) : null;
    case "error":
      return typeof frame.code === "string" ? (frame as unknown as ErrorFrame) : null;
    default:
      return null;
  }
}
