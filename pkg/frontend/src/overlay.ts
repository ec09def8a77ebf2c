// Canvas overlay for crop snippets. The crop PNG is rendered with a margin
// around the detection box, so the overlay offsets the box into crop space.

import type { Box } from './boxes.js';
import { toCorners } from './boxes.js';

export const CROP_MARGIN = 8;

interface Context2DLike {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  beginPath(): void;
  rect(x: number, y: number, w: number, h: number): void;
  stroke(): void;
}

export function cropSpaceRect(
  box: Box,
  frameRows: number,
  frameCols: number,
): { x: number; y: number; w: number; h: number } {
  const c = toCorners(box);
  const originX = Math.max(Math.floor(c.x0) - CROP_MARGIN, 0);
  const originY = Math.max(Math.floor(c.y0) - CROP_MARGIN, 0);
  return {
    x: c.x0 - originX,
    y: c.y0 - originY,
    w: Math.min(c.x1, frameCols) - c.x0,
    h: Math.min(c.y1, frameRows) - c.y0,
  };
}

export function drawBoxOverlay(
  ctx: Context2DLike,
  box: Box,
  frameRows: number,
  frameCols: number,
  color = '#ff3355',
): void {
  const rect = cropSpaceRect(box, frameRows, frameCols);
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.rect(rect.x, rect.y, rect.w, rect.h);
  ctx.stroke();
}
