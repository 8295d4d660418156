import { describe, expect, it } from "vitest";

import { parseServerFrame } from "../src/protocol.js";

const STATE = {
  v: 1,
  type: "state",
  tick: 3,
  agents: [{ x: 0.5, y: -1.5, heading: 0.25 }],
  shill: { x: 0, y: 0, heading: 3.14 },
  delta: 0.9,
};

describe("frame parsing", () => {
  it("accepts well-formed v1 frames", () => {
    expect(parseServerFrame(JSON.stringify(STATE))).toEqual(STATE);
    expect(parseServerFrame(JSON.stringify({ v: 1, type: "sync", tick: 9 }))).toEqual({
      v: 1,
      type: "sync",
      tick: 9,
    });
    expect(
      parseServerFrame(JSON.stringify({ v: 1, type: "ack", of: "init", session_id: "a" })),
    ).toMatchObject({ type: "ack", of: "init" });
    expect(
      parseServerFrame(JSON.stringify({ v: 1, type: "error", code: "no_shill", detail: "" })),
    ).toMatchObject({ code: "no_shill" });
  });

  it("accepts null shill and null delta", () => {
    const frame = parseServerFrame(JSON.stringify({ ...STATE, shill: null, delta: null }));
    expect(frame).not.toBeNull();
  });

  it("rejects other protocol versions", () => {
    expect(parseServerFrame(JSON.stringify({ ...STATE, v: 2 }))).toBeNull();
    const { v, ...missing } = STATE;
    expect(parseServerFrame(JSON.stringify(missing))).toBeNull();
  });

  it("rejects malformed payloads without throwing", () => {
    expect(parseServerFrame("{nope")).toBeNull();
    expect(parseServerFrame("42")).toBeNull();
    expect(parseServerFrame(JSON.stringify({ v: 1, type: "mystery" }))).toBeNull();
    expect(
      parseServerFrame(JSON.stringify({ ...STATE, agents: [{ x: "a", y: 0, heading: 0 }] })),
    ).toBeNull();
    expect(parseServerFrame(JSON.stringify({ ...STATE, shill: 5 }))).toBeNull();
  });
});
