// Tag review worksheet: per-tag action table with local override notes.
//
// The API intentionally exposes no tag-mutation endpoint, so overrides here
// are review annotations only; they export as a recipe-overlay JSON that can
// be fed back to a batch run as a recipe file.

import type { TagRow } from './types.js';

export const OVERRIDE_ACTIONS = ['D', 'Z', 'K'] as const;
export type OverrideAction = (typeof OVERRIDE_ACTIONS)[number];

export interface TagOverride {
  tag: string;
  action: OverrideAction;
}

export class TagReviewSheet {
  private overrides = new Map<string, OverrideAction>();

  constructor(readonly rows: TagRow[]) {}

  setOverride(tag: string, action: string): boolean {
    if (!(OVERRIDE_ACTIONS as readonly string[]).includes(action)) {
      return false; // overrides limited to the replace/blank/keep vocabulary
    }
    this.overrides.set(tag, action as OverrideAction);
    return true;
  }

  clearOverride(tag: string): void {
    this.overrides.delete(tag);
  }

  effectiveAction(tag: string): string | undefined {
    const override = this.overrides.get(tag);
    if (override) return override;
    return this.rows.find((row) => row.tag === tag)?.action;
  }

  /** Recipe-overlay document understood by the batch runner. */
  exportRecipeOverlay(): { entries: { pattern: string; action: string }[] } {
    const entries = [...this.overrides.entries()].map(([tag, action]) => ({
      pattern: tag.replace(/[()]/g, '').toLowerCase(),
      action,
    }));
    return { entries };
  }
}
