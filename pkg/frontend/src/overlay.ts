import { dragToBox, displayToImage } from "./geometry.js";
import type { Box, DetectionView } from "./types.js";

export interface OverlayState {
  image: HTMLImageElement;
  detection: DetectionView;
  drawnBox: Box | null; // image pixels
}

/** Scale factors between the displayed canvas and the native image. */
export function scaleFactors(canvas: HTMLCanvasElement, image: HTMLImageElement) {
  return {
    scaleX: canvas.width / image.naturalWidth,
    scaleY: canvas.height / image.naturalHeight,
  };
}

export function drawOverlay(ctx: CanvasRenderingContext2D, canvas: HTMLCanvasElement,
                            state: OverlayState): void {
  const { scaleX, scaleY } = scaleFactors(canvas, state.image);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.drawImage(state.image, 0, 0, canvas.width, canvas.height);

  const det = state.detection;
  ctx.lineWidth = 2;
  ctx.strokeStyle = "#00e0ff";
  ctx.strokeRect(det.x_min * scaleX, det.y_min * scaleY,
                 (det.x_max - det.x_min) * scaleX, (det.y_max - det.y_min) * scaleY);
  const label = `${det.article_type} ${(det.score * 100).toFixed(0)}%`;
  ctx.font = "13px sans-serif";
  ctx.fillStyle = "rgba(0,0,0,0.65)";
  ctx.fillRect(det.x_min * scaleX, Math.max(0, det.y_min * scaleY - 16),
               ctx.measureText(label).width + 8, 16);
  ctx.fillStyle = "#fff";
  ctx.fillText(label, det.x_min * scaleX + 4, Math.max(11, det.y_min * scaleY - 4));

  if (state.drawnBox !== null) {
    const b = state.drawnBox;
    ctx.strokeStyle = "#ffae00";
    ctx.setLineDash([5, 3]);
    ctx.strokeRect(b.x_min * scaleX, b.y_min * scaleY,
                   (b.x_max - b.x_min) * scaleX, (b.y_max - b.y_min) * scaleY);
    ctx.setLineDash([]);
  }
}

/**
 * Click-drag box redraw. Coordinates convert to original-image pixels and
 * clamp to the image bounds on mouse-up.
 */
export function attachBoxDrawing(canvas: HTMLCanvasElement,
                                 image: HTMLImageElement,
                                 onBox: (box: Box | null) => void): () => void {
  let dragStart: { x: number; y: number } | null = null;

  const toImagePoint = (ev: MouseEvent) => {
    const rect = canvas.getBoundingClientRect();
    const { scaleX, scaleY } = scaleFactors(canvas, image);
    return displayToImage(
      { x: ev.clientX - rect.left, y: ev.clientY - rect.top }, scaleX, scaleY);
  };

  const onDown = (ev: MouseEvent) => {
    dragStart = toImagePoint(ev);
  };
  const onUp = (ev: MouseEvent) => {
    if (dragStart === null) {
      return;
    }
    const box = dragToBox(dragStart, toImagePoint(ev),
                          image.naturalWidth, image.naturalHeight);
    dragStart = null;
    onBox(box);
  };
  canvas.addEventListener("mousedown", onDown);
  canvas.addEventListener("mouseup", onUp);
  return () => {
    canvas.removeEventListener("mousedown", onDown);
    canvas.removeEventListener("mouseup", onUp);
  };
}
