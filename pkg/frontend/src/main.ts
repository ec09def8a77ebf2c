// Single-page review app: queue list, item detail with crop overlay, tag
// review table and the date-shift form. All state flows through the API.

import { ApiClient, NotFoundError } from './api.js';
import { asTuple, fromTuple, insideFrame, snapToPixels } from './boxes.js';
import { submitOffset } from './dateShift.js';
import { drawBoxOverlay } from './overlay.js';
import { createPoller } from './poller.js';
import { QueueController } from './queue.js';
import { TagReviewSheet } from './tagReview.js';
import type { QueueItem } from './types.js';

const api = new ApiClient('');
const queue = new QueueController(api);
let selected: QueueItem | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function renderQueue(): void {
  const list = el<HTMLUListElement>('queue-list');
  list.innerHTML = '';
  el<HTMLSpanElement>('queue-count').textContent = String(queue.state.items.length);
  el<HTMLSpanElement>('withheld-count').textContent = String(queue.state.withheldFiles.length);
  for (const item of queue.state.items) {
    const li = document.createElement('li');
    li.className = 'queue-item' + (selected?.id === item.id ? ' selected' : '');
    li.textContent = `NV ${item.nv.toFixed(3)} · ${item.proposed} · ${item.ocr_text || '(no OCR text)'}`;
    li.onclick = () => selectItem(item);
    list.appendChild(li);
  }
  const banner = el<HTMLDivElement>('conflict-banner');
  if (queue.state.lastConflict) {
    banner.textContent = `Conflict: ${queue.state.lastConflict} — queue refreshed`;
    banner.hidden = false;
  } else {
    banner.hidden = true;
  }
}

async function selectItem(item: QueueItem): Promise<void> {
  selected = item;
  renderQueue();
  el<HTMLDivElement>('detail').hidden = false;
  el<HTMLSpanElement>('detail-nv').textContent = item.nv.toFixed(4);
  el<HTMLSpanElement>('detail-proposed').textContent = item.proposed;
  el<HTMLSpanElement>('detail-ocr').textContent = item.ocr_text || '(empty)';
  el<HTMLSpanElement>('detail-spans').textContent = item.ner_spans
    .map((s) => `${s.label}[${s.start},${s.end})`)
    .join(' ') || '(none)';

  const canvas = el<HTMLCanvasElement>('crop-canvas');
  const image = new Image();
  image.onload = () => {
    canvas.width = image.width;
    canvas.height = image.height;
    const ctx = canvas.getContext('2d');
    if (!ctx) return;
    ctx.drawImage(image, 0, 0);
    drawBoxOverlay(ctx, fromTuple(item.box), Number.MAX_SAFE_INTEGER, Number.MAX_SAFE_INTEGER);
  };
  image.src = api.cropUrl(item.id);

  const editBox = el<HTMLInputElement>('edit-box');
  editBox.value = item.box.map((v) => v.toFixed(1)).join(', ');

  try {
    const tags = await api.fetchTags(item.file_id);
    renderTags(new TagReviewSheet(tags.tags));
  } catch (error) {
    if (!(error instanceof NotFoundError)) throw error;
  }
}

function renderTags(sheet: TagReviewSheet): void {
  const table = el<HTMLTableSectionElement>('tag-rows');
  table.innerHTML = '';
  for (const row of sheet.rows) {
    const tr = document.createElement('tr');
    const result = row.present ? (row.result ?? '(binary)') : '(removed)';
    tr.innerHTML =
      `<td>${row.tag}</td><td>${row.name}</td>` +
      `<td>${row.had_value ? 'yes' : 'no'}</td>` +
      `<td>${row.action}</td><td>${result}</td>`;
    const override = document.createElement('td');
    const select = document.createElement('select');
    for (const option of ['', 'D', 'Z', 'K']) {
      const node = document.createElement('option');
      node.value = option;
      node.textContent = option || '(recipe)';
      select.appendChild(node);
    }
    select.onchange = () => {
      if (select.value) sheet.setOverride(row.tag, select.value);
      else sheet.clearOverride(row.tag);
    };
    override.appendChild(select);
    tr.appendChild(override);
    table.appendChild(tr);
  }
}

async function decide(decision: 'APPROVED' | 'REJECTED' | 'EDITED'): Promise<void> {
  if (!selected) return;
  let boxTuple: [number, number, number, number] | undefined;
  if (decision === 'EDITED') {
    const parts = el<HTMLInputElement>('edit-box').value.split(',').map(Number);
    if (parts.length !== 4 || parts.some(Number.isNaN)) {
      el<HTMLDivElement>('detail-error').textContent = 'box must be x, y, w, h';
      return;
    }
    const snapped = snapToPixels(fromTuple(parts as [number, number, number, number]));
    if (!insideFrame(snapped, Number.MAX_SAFE_INTEGER, Number.MAX_SAFE_INTEGER)) {
      el<HTMLDivElement>('detail-error').textContent = 'box outside the frame';
      return;
    }
    boxTuple = asTuple(snapped);
  }
  el<HTMLDivElement>('detail-error').textContent = '';
  await queue.adjudicate(selected.id, decision, boxTuple);
  selected = null;
  el<HTMLDivElement>('detail').hidden = true;
  renderQueue();
}

async function refresh(): Promise<void> {
  await queue.refresh();
  renderQueue();
}

export function start(): void {
  el<HTMLButtonElement>('approve').onclick = () => void decide('APPROVED');
  el<HTMLButtonElement>('reject').onclick = () => void decide('REJECTED');
  el<HTMLButtonElement>('edit').onclick = () => void decide('EDITED');
  el<HTMLButtonElement>('refresh').onclick = () => void refresh();

  const offsetInput = el<HTMLInputElement>('date-offset');
  const offsetButton = el<HTMLButtonElement>('date-offset-submit');
  const offsetMessage = el<HTMLSpanElement>('date-offset-message');
  offsetInput.oninput = () => {
    offsetButton.disabled = offsetInput.value.trim() === '';
  };
  offsetButton.disabled = true;
  offsetButton.onclick = async () => {
    const outcome = await submitOffset(api, offsetInput.value);
    offsetMessage.textContent = outcome.ok ? 'saved' : outcome.message ?? '';
  };

  const poller = createPoller(refresh, 2000);
  poller.start();
  void refresh();
}

start();
