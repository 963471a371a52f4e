/**
 * Detection overlays: marker outlines and id labels drawn on a canvas
 * layered over the processed image. The drawing surface is expressed as a
 * minimal structural interface so tests can pass a recording fake; a real
 * CanvasRenderingContext2D satisfies it as-is.
 */

import { Detection } from "./api.js";

export interface OverlaySurface {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
  clearRect(x: number, y: number, w: number, h: number): void;
}

export interface OverlayStyle {
  strokeColor: string;
  labelColor: string;
  lineWidth: number;
  font: string;
}

export const DEFAULT_STYLE: OverlayStyle = {
  strokeColor: "#00ff66",
  labelColor: "#00ff66",
  lineWidth: 2,
  font: "14px monospace",
};

/** Position for a detection's id label: just above its first corner. */
export function labelAnchor(det: Detection): [number, number] {
  const first = det.corners[0] ?? [0, 0];
  return [first[0] + 4, first[1] - 6];
}

/**
 * Draws every detection as a closed quad outline plus an id label.
 * Clears the surface first so stale outlines never persist.
 */
export function drawDetections(
  ctx: OverlaySurface,
  detections: Detection[],
  width: number,
  height: number,
  style: OverlayStyle = DEFAULT_STYLE,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = style.strokeColor;
  ctx.fillStyle = style.labelColor;
  ctx.lineWidth = style.lineWidth;
  ctx.font = style.font;
  for (const det of detections) {
    if (det.corners.length === 0) continue;
    ctx.beginPath();
    const start = det.corners[0]!;
    ctx.moveTo(start[0], start[1]);
    for (let i = 1; i < det.corners.length; i++) {
      const c = det.corners[i]!;
      ctx.lineTo(c[0], c[1]);
    }
    ctx.closePath();
    ctx.stroke();
    const [lx, ly] = labelAnchor(det);
    ctx.fillText(`id ${det.pattern_id}`, lx, ly);
  }
}
