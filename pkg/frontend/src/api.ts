// Typed client for the review API. Every server mutation in the UI flows
// through this module, and nothing else touches the network.

import type {
  Decision,
  DecisionResponse,
  QueueResponse,
  QueueItem,
  ReportResponse,
  TagReviewResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ConflictError extends ApiError {
  constructor(message: string) {
    super(409, message);
  }
}

export class NotFoundError extends ApiError {
  constructor(message: string) {
    super(404, message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    if (response.status === 409) {
      throw new ConflictError(await safeDetail(response));
    }
    if (response.status === 404) {
      throw new NotFoundError(await safeDetail(response));
    }
    if (!response.ok) {
      throw new ApiError(response.status, await safeDetail(response));
    }
    return response.json() as Promise<T>;
  }

  fetchQueue(): Promise<QueueResponse> {
    return this.request<QueueResponse>('/api/queue');
  }

  fetchItem(itemId: string): Promise<QueueItem> {
    return this.request<QueueItem>(`/api/items/${encodeURIComponent(itemId)}`);
  }

  cropUrl(itemId: string): string {
    return `${this.base}/api/items/${encodeURIComponent(itemId)}/crop`;
  }

  postDecision(
    itemId: string,
    decision: Decision,
    box?: [number, number, number, number],
  ): Promise<DecisionResponse> {
    return this.request<DecisionResponse>(
      `/api/items/${encodeURIComponent(itemId)}/decision`,
      {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(box ? { decision, box } : { decision }),
      },
    );
  }

  fetchTags(fileId: string): Promise<TagReviewResponse> {
    return this.request<TagReviewResponse>(`/api/files/${encodeURIComponent(fileId)}/tags`);
  }

  setDateShift(fixedOffset: number | null): Promise<{ fixed_offset: number | null }> {
    return this.request('/api/config/date-shift', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ fixed_offset: fixedOffset }),
    });
  }

  fetchReport(): Promise<ReportResponse> {
    return this.request<ReportResponse>('/api/report');
  }
}

async function safeDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: string };
    return body.detail ?? response.statusText;
  } catch {
    return response.statusText;
  }
}
