import { describe, expect, it } from "vitest";

import { canvasToWorld, fit, makeCamera, pan, worldToCanvas, zoom } from "../src/camera.js";

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe("camera transform", () => {
  it("round-trips 1000 random points within 0.5 px", () => {
    const rand = mulberry32(2024);
    let cam = makeCamera(900, 600);
    cam = { ...cam, centerX: 2.5, centerY: -1.25, scale: 173.4 };
    for (let i = 0; i < 1000; i++) {
      const wx = (rand() - 0.5) * 20;
      const wy = (rand() - 0.5) * 20;
      const px = worldToCanvas(cam, wx, wy);
      const back = canvasToWorld(cam, px.x, px.y);
      const errPx = Math.hypot(back.x - wx, back.y - wy) * cam.scale;
      expect(errPx).toBeLessThan(0.5);
    }
  });

  it("also round-trips canvas -> world -> canvas", () => {
    const rand = mulberry32(7);
    const cam = { ...makeCamera(800, 500), centerX: -3, centerY: 9, scale: 41 };
    for (let i = 0; i < 1000; i++) {
      const cx = rand() * 800;
      const cy = rand() * 500;
      const world = canvasToWorld(cam, cx, cy);
      const back = worldToCanvas(cam, world.x, world.y);
      expect(Math.hypot(back.x - cx, back.y - cy)).toBeLessThan(0.5);
    }
  });

  it("keeps canvas y pointing down and world y pointing up", () => {
    const cam = makeCamera(100, 100);
    const up = worldToCanvas(cam, 0, 1);
    const origin = worldToCanvas(cam, 0, 0);
    expect(up.y).toBeLessThan(origin.y);
  });

  it("pan shifts the view by the drag in pixels", () => {
    const cam = makeCamera(200, 200);
    const before = worldToCanvas(cam, 1, 1);
    const panned = pan(cam, 30, -12);
    const after = worldToCanvas(panned, 1, 1);
    expect(after.x - before.x).toBeCloseTo(30, 9);
    expect(after.y - before.y).toBeCloseTo(-12, 9);
  });

  it("zoom keeps the anchor point fixed", () => {
    const cam = { ...makeCamera(640, 480), centerX: 4, centerY: -2, scale: 55 };
    const anchor = { x: 120, y: 400 };
    const worldUnderAnchor = canvasToWorld(cam, anchor.x, anchor.y);
    const zoomed = zoom(cam, 1.6, anchor.x, anchor.y);
    const after = worldToCanvas(zoomed, worldUnderAnchor.x, worldUnderAnchor.y);
    expect(after.x).toBeCloseTo(anchor.x, 6);
    expect(after.y).toBeCloseTo(anchor.y, 6);
    expect(zoomed.scale).toBeCloseTo(55 * 1.6, 9);
  });

  it("fit frames all points inside the canvas", () => {
    const cam = makeCamera(400, 300);
    const points = [
      { x: -5, y: 2 },
      { x: 9, y: 4 },
      { x: 1, y: -6 },
    ];
    const fitted = fit(cam, points, 20);
    for (const p of points) {
      const c = worldToCanvas(fitted, p.x, p.y);
      expect(c.x).toBeGreaterThanOrEqual(0);
      expect(c.x).toBeLessThanOrEqual(400);
      expect(c.y).toBeGreaterThanOrEqual(0);
      expect(c.y).toBeLessThanOrEqual(300);
    }
  });
});
