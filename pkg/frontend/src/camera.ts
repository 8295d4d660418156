// World <-> canvas transform with pan and zoom. World y points up, canvas
// y points down; scale is pixels per world unit.

export interface Camera {
  centerX: number;
  centerY: number;
  scale: number;
  width: number;
  height: number;
}

export interface Point {
  x: number;
  y: number;
}

export function makeCamera(width: number, height: number): Camera {
  return { centerX: 0, centerY: 0, scale: 80, width, height };
}

export function worldToCanvas(cam: Camera, wx: number, wy: number): Point {
  return {
    x: (wx - cam.centerX) * cam.scale + cam.width / 2,
    y: cam.height / 2 - (wy - cam.centerY) * cam.scale,
  };
}

export function canvasToWorld(cam: Camera, cx: number, cy: number): Point {
  return {
    x: (cx - cam.width / 2) / cam.scale + cam.centerX,
    y: (cam.height / 2 - cy) / cam.scale + cam.centerY,
  };
}

/** Shift the view by a canvas-space drag. */
export function pan(cam: Camera, dxPx: number, dyPx: number): Camera {
  return {
    ...cam,
    centerX: cam.centerX - dxPx / cam.scale,
    centerY: cam.centerY + dyPx / cam.scale,
  };
}

/** Zoom by a factor, keeping the given canvas point fixed in world space. */
export function zoom(cam: Camera, factor: number, anchorX: number, anchorY: number): Camera {
  const clamped = Math.min(Math.max(cam.scale * factor, 1e-3), 1e6);
  const before = canvasToWorld(cam, anchorX, anchorY);
  const scaled = { ...cam, scale: clamped };
  const after = canvasToWorld(scaled, anchorX, anchorY);
  return {
    ...scaled,
    centerX: scaled.centerX + (before.x - after.x),
    centerY: scaled.centerY + (before.y - after.y),
  };
}

/** Frame a set of world points with a margin (in pixels). */
export function fit(cam: Camera, points: Point[], marginPx = 40): Camera {
  if (points.length === 0) return cam;
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const p of points) {
    minX = Math.min(minX, p.x);
    maxX = Math.max(maxX, p.x);
    minY = Math.min(minY, p.y);
    maxY = Math.max(maxY, p.y);
  }
  const spanX = Math.max(maxX - minX, 1e-6);
  const spanY = Math.max(maxY - minY, 1e-6);
  const scale = Math.min(
    (cam.width - 2 * marginPx) / spanX,
    (cam.height - 2 * marginPx) / spanY,
  );
  return {
    ...cam,
    centerX: (minX + maxX) / 2,
    centerY: (minY + maxY) / 2,
    scale: Math.min(Math.max(scale, 1e-3), 1e6),
  };
}
