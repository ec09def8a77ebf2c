// Queue state: always NV-descending, refetch after every mutation, and
// conflicts never commit anything locally.

import { ApiClient, ConflictError } from './api.js';
import type { Decision, DecisionResponse, QueueItem } from './types.js';

export interface QueueState {
  items: QueueItem[];
  withheldFiles: string[];
  lastConflict: string | null;
}

export function sortedByNv(items: QueueItem[]): QueueItem[] {
  return [...items].sort((a, b) => b.nv - a.nv || a.id.localeCompare(b.id));
}

export class QueueController {
  state: QueueState = { items: [], withheldFiles: [], lastConflict: null };

  constructor(private readonly api: ApiClient) {}

  async refresh(): Promise<QueueState> {
    const body = await this.api.fetchQueue();
    this.state = {
      items: sortedByNv(body.items),
      withheldFiles: [...body.withheld_files].sort(),
      lastConflict: this.state.lastConflict,
    };
    return this.state;
  }

  /**
   * Post a decision and refetch. On 409 the server state wins: the queue is
   * refreshed, nothing is committed locally, and the conflict is surfaced
   * through `lastConflict`.
   */
  async adjudicate(
    itemId: string,
    decision: Decision,
    box?: [number, number, number, number],
  ): Promise<DecisionResponse | null> {
    try {
      const result = await this.api.postDecision(itemId, decision, box);
      this.state.lastConflict = null;
      await this.refresh();
      return result;
    } catch (error) {
      if (error instanceof ConflictError) {
        this.state.lastConflict = `item ${itemId}: ${error.message}`;
        await this.refresh();
        return null;
      }
      throw error;
    }
  }

  clearConflict(): void {
    this.state.lastConflict = null;
  }

  filterByFile(fileId: string | null): QueueItem[] {
    if (!fileId) return this.state.items;
    return this.state.items.filter((item) => item.file_id === fileId);
  }

  filterByLabel(label: string | null): QueueItem[] {
    if (!label) return this.state.items;
    return this.state.items.filter((item) =>
      item.ner_spans.some((span) => span.label === label),
    );
  }
}
