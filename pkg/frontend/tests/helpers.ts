import { KeyValueStorage } from '../src/queue';
import { SubmissionEnvelope, WorkspaceItem, WorkspaceView } from '../src/types';

export function memoryStorage(): KeyValueStorage & { dump(): Record<string, string> } {
  const data: Record<string, string> = {};
  return {
    getItem: (key) => (key in data ? data[key] : null),
    setItem: (key, value) => {
      data[key] = value;
    },
    dump: () => ({ ...data }),
  };
}

export function nkoTask(n: number): WorkspaceItem {
  return {
    task: {
      taskId: `seed/00000${n}/translation`,
      workflowId: `seed/00000${n}`,
      datasetId: 'seed',
      segmentId: `00000${n}`,
      type: 'translation',
      round: 0,
      leaseExpiresAt: '2024-03-03T00:00:00+00:00',
    },
    sources: [
      { language: 'eng_Latn', direction: 'ltr', text: `English sentence ${n}.` },
      { language: 'fra_Latn', direction: 'ltr', text: `Phrase française ${n}.` },
    ],
    targetLanguage: { code: 'nqo_Nkoo', direction: 'rtl' },
    seedText: null,
    seedVersionLabel: null,
  };
}

export function workspaceView(items: WorkspaceItem[]): WorkspaceView {
  return {
    userId: 'aminata',
    uiLanguage: 'eng_Latn',
    tasks: items,
    counters: {
      translation: { open: items.length, completed: 0 },
      copyedit: { open: 0, completed: 0 },
    },
    languageDirections: { eng_Latn: 'ltr', fra_Latn: 'ltr', nqo_Nkoo: 'rtl' },
  };
}

/**
 * Scripted stand-in for the curation service: an `online` switch that makes
 * the network fail hard, per-op dedup, and a log of the applied envelopes
 * in arrival order.
 */
export class FakeServer {
  online = true;
  applied: SubmissionEnvelope[] = [];
  seenOpIds = new Set<string>();
  view: WorkspaceView;

  constructor(items: WorkspaceItem[]) {
    this.view = workspaceView(items);
  }

  private json(body: unknown, status = 200): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { 'Content-Type': 'application/json' },
    });
  }

  fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    if (!this.online) throw new TypeError('network unreachable');
    if (url.endsWith('/v1/ping')) return this.json({ status: 'ok' });
    if (url.endsWith('/v1/auth/login')) {
      return this.json({ token: 'test-token', expiresAt: '2024-12-31T00:00:00+00:00' });
    }
    if (url.endsWith('/v1/me/workspace')) return this.json(this.view);
    if (url.endsWith('/v1/config/languages')) return this.json({ rtl: ['nqo_Nkoo'], default: 'ltr' });
    if (url.endsWith('/v1/submissions')) {
      const body = JSON.parse(String(init?.body));
      const results = [];
      for (const envelope of body.envelopes as SubmissionEnvelope[]) {
        if (this.seenOpIds.has(envelope.clientOpId)) {
          results.push({ clientOpId: envelope.clientOpId, result: 'duplicate', status: 200 });
          continue;
        }
        this.seenOpIds.add(envelope.clientOpId);
        const known = this.view.tasks.some((t) => t.task.taskId === envelope.taskId);
        if (!known) {
          results.push({ clientOpId: envelope.clientOpId, result: 'not-found', status: 404 });
          continue;
        }
        this.applied.push(envelope);
        results.push({ clientOpId: envelope.clientOpId, result: 'applied', status: 200 });
      }
      return this.json({ results });
    }
    return this.json({ detail: 'no such route' }, 404);
  };
}
