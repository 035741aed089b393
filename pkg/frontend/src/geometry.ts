import type { Box } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

/** Canvas display coordinates -> original image pixels. */
export function displayToImage(p: Point, scaleX: number, scaleY: number): Point {
  return { x: p.x / scaleX, y: p.y / scaleY };
}

export function imageToDisplay(p: Point, scaleX: number, scaleY: number): Point {
  return { x: p.x * scaleX, y: p.y * scaleY };
}

/**
 * Turn a click-drag (in image pixels) into a valid box: corners normalized so
 * x_min < x_max and y_min < y_max, clamped to the image bounds. Returns null
 * when the clamped drag is degenerate (under a pixel in either direction).
 */
export function dragToBox(start: Point, end: Point,
                          imageWidth: number, imageHeight: number): Box | null {
  const clamp = (v: number, hi: number) => Math.min(Math.max(v, 0), hi);
  const x0 = clamp(Math.min(start.x, end.x), imageWidth);
  const x1 = clamp(Math.max(start.x, end.x), imageWidth);
  const y0 = clamp(Math.min(start.y, end.y), imageHeight);
  const y1 = clamp(Math.max(start.y, end.y), imageHeight);
  if (x1 - x0 < 1 || y1 - y0 < 1) {
    return null;
  }
  return { x_min: x0, y_min: y0, x_max: x1, y_max: y1 };
}

export function isValidBox(box: Box, imageWidth: number, imageHeight: number): boolean {
  return (
    box.x_min < box.x_max &&
    box.y_min < box.y_max &&
    box.x_min >= 0 &&
    box.y_min >= 0 &&
    box.x_max <= imageWidth &&
    box.y_max <= imageHeight
  );
}
