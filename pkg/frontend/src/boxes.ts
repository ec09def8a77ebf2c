// Box geometry shared by the overlay and the edit form. Detector boxes are
// pixel-valued, so edits snap to integer pixel corners.

export interface Box {
  x: number; // center
  y: number;
  w: number;
  h: number;
}

export interface Corners {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export function toCorners(box: Box): Corners {
  return {
    x0: box.x - box.w / 2,
    y0: box.y - box.h / 2,
    x1: box.x + box.w / 2,
    y1: box.y + box.h / 2,
  };
}

export function fromCorners(c: Corners): Box {
  return {
    x: (c.x0 + c.x1) / 2,
    y: (c.y0 + c.y1) / 2,
    w: c.x1 - c.x0,
    h: c.y1 - c.y0,
  };
}

export function snapToPixels(box: Box): Box {
  const c = toCorners(box);
  const snapped = {
    x0: Math.round(c.x0),
    y0: Math.round(c.y0),
    x1: Math.round(c.x1),
    y1: Math.round(c.y1),
  };
  if (snapped.x1 <= snapped.x0) snapped.x1 = snapped.x0 + 1;
  if (snapped.y1 <= snapped.y0) snapped.y1 = snapped.y0 + 1;
  return fromCorners(snapped);
}

export function insideFrame(box: Box, rows: number, cols: number): boolean {
  const c = toCorners(box);
  return c.x0 >= 0 && c.y0 >= 0 && c.x1 <= cols && c.y1 <= rows && box.w > 0 && box.h > 0;
}

export function asTuple(box: Box): [number, number, number, number] {
  return [box.x, box.y, box.w, box.h];
}

export function fromTuple(t: [number, number, number, number]): Box {
  return { x: t[0], y: t[1], w: t[2], h: t[3] };
}
