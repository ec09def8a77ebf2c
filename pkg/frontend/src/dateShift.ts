// Longitudinal date-shift configuration form logic.

import { ApiClient } from './api.js';

export interface OffsetValidation {
  ok: boolean;
  message: string | null;
}

export const MAX_OFFSET_DAYS = 3650;

export function validateOffset(raw: string): OffsetValidation {
  if (raw.trim() === '') {
    return { ok: false, message: 'enter a day offset' };
  }
  const value = Number(raw);
  if (!Number.isInteger(value)) {
    return { ok: false, message: 'offset must be a whole number of days' };
  }
  if (value === 0) {
    return { ok: false, message: 'offset must be nonzero' };
  }
  if (Math.abs(value) > MAX_OFFSET_DAYS) {
    return { ok: false, message: `offset must stay within ±${MAX_OFFSET_DAYS} days` };
  }
  return { ok: true, message: null };
}

export async function submitOffset(
  api: ApiClient,
  raw: string,
): Promise<{ ok: boolean; message: string | null }> {
  const validation = validateOffset(raw);
  if (!validation.ok) {
    return validation;
  }
  try {
    await api.setDateShift(Number(raw));
    return { ok: true, message: null };
  } catch (error) {
    // Server rejection surfaces verbatim.
    return { ok: false, message: error instanceof Error ? error.message : String(error) };
  }
}
