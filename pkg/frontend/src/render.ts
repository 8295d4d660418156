// Canvas drawing: oriented triangles for agents, a ringed triangle for the
// shill, and the objective-distance sparkline.  Renders only what the server
// sent; no extrapolation between frames.

import type { Camera } from "./camera.js";
import { worldToCanvas } from "./camera.js";
import type { StateFrame } from "./protocol.js";
import type { RingBuffer } from "./ring.js";

const AGENT_COLOR = "#4cc3ff";
const SHILL_COLOR = "#ff9d2e";
const BACKGROUND = "#10141a";

function triangle(
  ctx: CanvasRenderingContext2D,
  x: number,
  y: number,
  heading: number,
  size: number,
  color: string,
): void {
  // canvas y grows downward, so the rotation flips sign
  const cos = Math.cos(-heading);
  const sin = Math.sin(-heading);
  const pts = [
    [size, 0],
    [-0.6 * size, 0.55 * size],
    [-0.6 * size, -0.55 * size],
  ];
  ctx.beginPath();
  pts.forEach(([px, py], i) => {
    const rx = x + px * cos - py * sin;
    const ry = y + px * sin + py * cos;
    if (i === 0) ctx.moveTo(rx, ry);
    else ctx.lineTo(rx, ry);
  });
  ctx.closePath();
  ctx.fillStyle = color;
  ctx.fill();
}

export function drawScene(ctx: CanvasRenderingContext2D, frame: StateFrame, cam: Camera): void {
  ctx.fillStyle = BACKGROUND;
  ctx.fillRect(0, 0, cam.width, cam.height);
  const size = Math.max(4, Math.min(12, cam.scale * 0.12));
  for (const agent of frame.agents) {
    const p = worldToCanvas(cam, agent.x, agent.y);
    triangle(ctx, p.x, p.y, agent.heading, size, AGENT_COLOR);
  }
  if (frame.shill !== null) {
    const p = worldToCanvas(cam, frame.shill.x, frame.shill.y);
    ctx.beginPath();
    ctx.arc(p.x, p.y, size * 1.6, 0, 2 * Math.PI);
    ctx.strokeStyle = SHILL_COLOR;
    ctx.lineWidth = 2;
    ctx.stroke();
    triangle(ctx, p.x, p.y, frame.shill.heading, size * 1.2, SHILL_COLOR);
  }
}

export function drawSparkline(
  ctx: CanvasRenderingContext2D,
  history: RingBuffer,
  width: number,
  height: number,
): void {
  ctx.fillStyle = BACKGROUND;
  ctx.fillRect(0, 0, width, height);
  const values = history.values();
  if (values.length < 2) return;
  const stepX = width / (history.capacity - 1);
  ctx.beginPath();
  let started = false;
  values.forEach((value, i) => {
    if (value === null) {
      started = false;
      return;
    }
    const x = i * stepX;
    const y = height - (value / Math.PI) * (height - 2) - 1;
    if (!started) {
      ctx.moveTo(x, y);
      started = true;
    } else {
      ctx.lineTo(x, y);
    }
  });
  ctx.strokeStyle = "#7de38b";
  ctx.lineWidth = 1.5;
  ctx.stroke();
}

export function drawDial(
  ctx: CanvasRenderingContext2D,
  heading: number,
  size: number,
): void {
  const c = size / 2;
  ctx.clearRect(0, 0, size, size);
  ctx.beginPath();
  ctx.arc(c, c, c - 3, 0, 2 * Math.PI);
  ctx.strokeStyle = "#666";
  ctx.lineWidth = 2;
  ctx.stroke();
  ctx.beginPath();
  ctx.moveTo(c, c);
  ctx.lineTo(c + (c - 6) * Math.cos(-heading), c + (c - 6) * Math.sin(-heading));
  ctx.strokeStyle = SHILL_COLOR;
  ctx.lineWidth = 2.5;
  ctx.stroke();
}
