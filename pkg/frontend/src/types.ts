// Wire types for the review API (/api, JSON).

export interface NerSpan {
  label: string;
  start: number;
  end: number;
  confidence: number;
}

export interface QueueItem {
  id: string;
  file_id: string;
  frame_index: number;
  box: [number, number, number, number]; // center x, y, width, height
  nv: number;
  ocr_text: string;
  ner_spans: NerSpan[];
  proposed: 'REDACT' | 'KEEP';
  decision: 'PENDING' | 'APPROVED' | 'REJECTED' | 'EDITED';
  decided_box: [number, number, number, number] | null;
  crop_url?: string;
}

export interface QueueResponse {
  items: QueueItem[];
  count: number;
  withheld_files: string[];
}

export type Decision = 'APPROVED' | 'REJECTED' | 'EDITED';

export interface DecisionResponse {
  item_id: string;
  decision: Decision;
  file_id: string;
  file_status: string | null;
  output_path: string | null;
}

export interface TagRow {
  tag: string;
  name: string;
  had_value: boolean;
  action: 'X' | 'Z' | 'D' | 'K' | 'C' | 'U';
  result: string | null;
  present: boolean;
}

export interface TagReviewResponse {
  file_id: string;
  status: string;
  tags: TagRow[];
}

export interface ReportResponse {
  files: Record<string, number>;
  pending_items: number;
  date_shift_fixed_offset: number | null;
  nv_threshold: number;
}
