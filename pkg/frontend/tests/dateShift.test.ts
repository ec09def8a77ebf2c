import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { submitOffset, validateOffset } from '../src/dateShift.js';
import { TagReviewSheet } from '../src/tagReview.js';

describe('date shift validation', () => {
  it('rejects empty, zero, fractional and out-of-range offsets', () => {
    expect(validateOffset('').ok).toBe(false);
    expect(validateOffset('0').ok).toBe(false);
    expect(validateOffset('1.5').ok).toBe(false);
    expect(validateOffset('4000').ok).toBe(false);
    expect(validateOffset('-30').ok).toBe(true);
    expect(validateOffset('365').ok).toBe(true);
  });

  it('submits valid offsets and surfaces server rejections verbatim', async () => {
    const okClient = new ApiClient('', async () =>
      new Response(JSON.stringify({ fixed_offset: -30 }), { status: 200 }));
    expect((await submitOffset(okClient, '-30')).ok).toBe(true);

    const badClient = new ApiClient('', async () =>
      new Response(JSON.stringify({ detail: 'rejected by policy' }), { status: 422 }));
    const outcome = await submitOffset(badClient, '-30');
    expect(outcome.ok).toBe(false);
    expect(outcome.message).toMatch(/rejected by policy/);
  });

  it('never posts invalid offsets', async () => {
    let posted = false;
    const client = new ApiClient('', async () => {
      posted = true;
      return new Response('{}', { status: 200 });
    });
    await submitOffset(client, '0');
    expect(posted).toBe(false);
  });
});

describe('tag review overrides', () => {
  const rows = [
    { tag: '(0010,0010)', name: 'PatientName', had_value: true, action: 'Z' as const, result: '', present: true },
  ];

  it('limits overrides to the replace/blank/keep vocabulary', () => {
    const sheet = new TagReviewSheet(rows);
    expect(sheet.setOverride('(0010,0010)', 'D')).toBe(true);
    expect(sheet.setOverride('(0010,0010)', 'X')).toBe(false);
    expect(sheet.setOverride('(0010,0010)', 'WAT')).toBe(false);
    expect(sheet.effectiveAction('(0010,0010)')).toBe('D');
    sheet.clearOverride('(0010,0010)');
    expect(sheet.effectiveAction('(0010,0010)')).toBe('Z');
  });

  it('exports a recipe overlay document', () => {
    const sheet = new TagReviewSheet(rows);
    sheet.setOverride('(0010,0010)', 'K');
    expect(sheet.exportRecipeOverlay()).toEqual({
      entries: [{ pattern: '0010,0010', action: 'K' }],
    });
  });
});
