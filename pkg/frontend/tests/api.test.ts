import { describe, expect, it, vi } from 'vitest';

import { ApiClient, ConflictError, NotFoundError } from '../src/api.js';

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

describe('ApiClient', () => {
  it('fetches the queue from /api/queue and nothing else', async () => {
    const calls: string[] = [];
    const fetchMock = vi.fn(async (url: string) => {
      calls.push(url);
      return jsonResponse(200, { items: [], count: 0, withheld_files: [] });
    });
    const client = new ApiClient('http://x', fetchMock);
    const body = await client.fetchQueue();
    expect(body.count).toBe(0);
    expect(calls).toEqual(['http://x/api/queue']);
  });

  it('posts decisions as JSON with the documented shape', async () => {
    const fetchMock = vi.fn(async (_url: string, init?: RequestInit) => {
      expect(init?.method).toBe('POST');
      expect(JSON.parse(String(init?.body))).toEqual({
        decision: 'EDITED',
        box: [10, 12, 6, 4],
      });
      return jsonResponse(200, {
        item_id: 'i1', decision: 'EDITED', file_id: 'f1',
        file_status: 'released', output_path: '/out/f1.dcm',
      });
    });
    const client = new ApiClient('', fetchMock);
    const result = await client.postDecision('i1', 'EDITED', [10, 12, 6, 4]);
    expect(result.file_status).toBe('released');
  });

  it('maps 409 to ConflictError', async () => {
    const client = new ApiClient('', async () =>
      jsonResponse(409, { detail: 'item is not PENDING' }));
    await expect(client.postDecision('i1', 'APPROVED')).rejects.toBeInstanceOf(ConflictError);
  });

  it('maps 404 to NotFoundError', async () => {
    const client = new ApiClient('', async () => jsonResponse(404, { detail: 'unknown item' }));
    await expect(client.fetchItem('nope')).rejects.toBeInstanceOf(NotFoundError);
  });

  it('surfaces server validation messages verbatim', async () => {
    const client = new ApiClient('', async () =>
      jsonResponse(422, { detail: 'fixed_offset must be nonzero and within +-3650 days' }));
    await expect(client.setDateShift(0)).rejects.toThrowError(
      /fixed_offset must be nonzero/);
  });
});
