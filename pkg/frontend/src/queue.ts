import { ApiClient } from './api';
import { EnvelopeResult, SubmissionEnvelope } from './types';

/** Minimal slice of window.localStorage, so tests can use a plain object. */
export interface KeyValueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const QUEUE_KEY = 'paracurate.queue';

/**
 * The local submission queue: user actions append here in order, the queue
 * survives page reloads, and on reconnect it drains strictly in order.
 * An entry leaves the queue only once the server acknowledged it (any
 * per-envelope result counts as acknowledged; a transport error keeps it).
 */
export class LocalQueue {
  private entries: SubmissionEnvelope[];
  private draining = false;

  constructor(private readonly storage: KeyValueStorage) {
    const raw = storage.getItem(QUEUE_KEY);
    this.entries = raw ? JSON.parse(raw) : [];
  }

  private persist() {
    this.storage.setItem(QUEUE_KEY, JSON.stringify(this.entries));
  }

  size(): number {
    return this.entries.length;
  }

  peekAll(): SubmissionEnvelope[] {
    return [...this.entries];
  }

  enqueue(envelope: SubmissionEnvelope) {
    this.entries.push(envelope);
    this.persist();
  }

  /** Undo is possible only while the envelope is still local and unsent. */
  removeLast(clientOpId: string): boolean {
    const last = this.entries[this.entries.length - 1];
    if (!last || last.clientOpId !== clientOpId || this.draining) return false;
    this.entries.pop();
    this.persist();
    return true;
  }

  /**
   * Upload the queue in order as one batch. Acknowledged envelopes are
   * removed; on a transport error everything stays for the next attempt.
   * Returns the per-envelope results (empty when the queue was empty or
   * the upload failed).
   */
  async drain(api: ApiClient): Promise<EnvelopeResult[]> {
    if (this.draining || this.entries.length === 0) return [];
    this.draining = true;
    try {
      const batch = [...this.entries];
      let results: EnvelopeResult[];
      try {
        results = await api.submit(batch);
      } catch {
        return []; // still offline; keep the queue intact
      }
      const acknowledged = new Set(
        results.map((r) => r.clientOpId).filter((id): id is string => id !== null),
      );
      this.entries = this.entries.filter((e) => !acknowledged.has(e.clientOpId));
      this.persist();
      return results;
    } finally {
      this.draining = false;
    }
  }
}

export function makeClientOpId(userId: string, rng: () => number = Math.random): string {
  const noise = Math.floor(rng() * 0xffffffff).toString(16).padStart(8, '0');
  return `${userId}-${Date.now().toString(16)}-${noise}`;
}
