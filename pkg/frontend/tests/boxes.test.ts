import { describe, expect, it } from 'vitest';

import { asTuple, fromCorners, fromTuple, insideFrame, snapToPixels, toCorners } from '../src/boxes.js';
import { cropSpaceRect } from '../src/overlay.js';

describe('box geometry', () => {
  it('corner conversions roundtrip', () => {
    const box = { x: 20.5, y: 13.25, w: 9.5, h: 4.75 };
    const back = fromCorners(toCorners(box));
    expect(back.x).toBeCloseTo(box.x, 10);
    expect(back.h).toBeCloseTo(box.h, 10);
  });

  it('snaps edits to integer pixel corners', () => {
    const snapped = snapToPixels({ x: 20.3, y: 10.6, w: 9.4, h: 5.1 });
    const c = toCorners(snapped);
    for (const v of [c.x0, c.y0, c.x1, c.y1]) {
      expect(Number.isInteger(v)).toBe(true);
    }
  });

  it('snapping never collapses a box', () => {
    const snapped = snapToPixels({ x: 5.5, y: 5.5, w: 0.2, h: 0.2 });
    expect(snapped.w).toBeGreaterThanOrEqual(1);
    expect(snapped.h).toBeGreaterThanOrEqual(1);
  });

  it('validates edits against the source frame', () => {
    expect(insideFrame({ x: 50, y: 50, w: 20, h: 20 }, 100, 100)).toBe(true);
    expect(insideFrame({ x: 95, y: 50, w: 20, h: 20 }, 100, 100)).toBe(false);
    expect(insideFrame({ x: 5, y: 5, w: 20, h: 20 }, 100, 100)).toBe(false);
  });

  it('tuple conversions match the wire format', () => {
    const tuple: [number, number, number, number] = [10, 12, 4, 6];
    expect(asTuple(fromTuple(tuple))).toEqual(tuple);
  });
});

describe('crop overlay', () => {
  it('offsets the box into crop space by the server margin', () => {
    const rect = cropSpaceRect({ x: 50, y: 40, w: 20, h: 10 }, 256, 256);
    // box corners (40,35)-(60,45); crop origin (32,27)
    expect(rect.x).toBe(8);
    expect(rect.y).toBe(8);
    expect(rect.w).toBe(20);
    expect(rect.h).toBe(10);
  });

  it('clamps the origin at the frame edge', () => {
    const rect = cropSpaceRect({ x: 4, y: 4, w: 8, h: 8 }, 256, 256);
    expect(rect.x).toBe(0);
    expect(rect.y).toBe(0);
  });
});
