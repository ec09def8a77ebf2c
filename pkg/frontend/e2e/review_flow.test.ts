// End-to-end review flow against a live backend: the fixture trains a tiny
// detector, quarantines every detection on a 12-file corpus and serves the
// API; this test drives the same client/controller stack the page uses.

import { spawn, type ChildProcess } from 'node:child_process';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { QueueController } from '../src/queue.js';

let child: ChildProcess;
let api: ApiClient;
let staleItemId: string | null = null;

function startFixture(): Promise<number> {
  return new Promise((resolve, reject) => {
    child = spawn('python3', ['e2e/serve_fixture.py'], {
      cwd: new URL('..', import.meta.url).pathname,
      stdio: ['ignore', 'pipe', 'inherit'],
    });
    let buffer = '';
    child.stdout!.on('data', (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/READY (\d+)/);
      if (match) resolve(Number(match[1]));
    });
    child.on('exit', (code) => reject(new Error(`fixture exited early: ${code}`)));
    setTimeout(() => reject(new Error('fixture startup timed out')), 150_000);
  });
}

beforeAll(async () => {
  const port = await startFixture();
  api = new ApiClient(`http://127.0.0.1:${port}`);
}, 160_000);

afterAll(() => {
  child?.kill();
});

describe('review flow against the live API', () => {
  it('starts with pending items and withheld files', async () => {
    const controller = new QueueController(api);
    await controller.refresh();
    expect(controller.state.items.length).toBeGreaterThan(0);
    expect(controller.state.withheldFiles.length).toBeGreaterThan(0);
    staleItemId = controller.state.items[0].id;
  });

  it('adjudicating every pending item releases every withheld file', async () => {
    const controller = new QueueController(api);
    await controller.refresh();

    // One file's items get rejected (keep pixels); the rest are approved.
    const rejectFile = controller.state.withheldFiles[0];
    let rejected = 0;
    let approved = 0;

    while (controller.state.items.length > 0) {
      const item = controller.state.items[0];
      const decision = item.file_id === rejectFile ? 'REJECTED' : 'APPROVED';
      const result = await controller.adjudicate(item.id, decision);
      expect(result).not.toBeNull();
      if (decision === 'REJECTED') rejected += 1;
      else approved += 1;
    }

    expect(approved).toBeGreaterThan(0);
    expect(rejected).toBeGreaterThan(0);
    expect(controller.state.items).toHaveLength(0);
    expect(controller.state.withheldFiles).toHaveLength(0);

    const report = await api.fetchReport();
    expect(report.pending_items).toBe(0);
    expect(report.files['withheld'] ?? 0).toBe(0);
    expect(report.files['released']).toBeGreaterThan(0);
  }, 120_000);

  it('a stale double-decision surfaces a conflict without changing state', async () => {
    expect(staleItemId).toBeTruthy();
    const before = await api.fetchReport();

    const controller = new QueueController(api);
    await controller.refresh();
    const outcome = await controller.adjudicate(staleItemId!, 'REJECTED');
    expect(outcome).toBeNull();
    expect(controller.state.lastConflict).toMatch(/not PENDING/);

    const after = await api.fetchReport();
    expect(after.files['released']).toBe(before.files['released']);
    expect(after.pending_items).toBe(0);
  });

  it('tag review rows expose actions but never original values', async () => {
    const report = await api.fetchReport();
    expect(report.files['released']).toBeGreaterThan(0);
    // any released file id works; find one via the queue's file list is
    // empty now, so look one up through a decision response captured above
    // is gone — instead scan the audit of the stale item's file.
    const item = await api.fetchItem(staleItemId!);
    const tags = await api.fetchTags(item.file_id);
    const patient = tags.tags.find((row) => row.name === 'PatientName');
    expect(patient).toBeDefined();
    expect(patient!.action).toBe('Z');
    expect(patient!.had_value).toBe(true);
    expect(patient!.result).toBe('');
    expect(Object.keys(patient!)).not.toContain('value');
  });
});
