import { EnvelopeResult, SubmissionEnvelope, WorkspaceView } from './types';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/**
 * Thin client for the curation service. The fetch function is injected so
 * tests (and the offline drill) can swap in a scripted network.
 */
export class ApiClient {
  private token: string | null = null;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  setToken(token: string | null) {
    this.token = token;
  }

  hasToken(): boolean {
    return this.token !== null;
  }

  private headers(): Record<string, string> {
    const headers: Record<string, string> = { 'Content-Type': 'application/json' };
    if (this.token) headers['Authorization'] = `Bearer ${this.token}`;
    return headers;
  }

  async login(userId: string, secret: string): Promise<void> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/auth/login`, {
      method: 'POST',
      headers: this.headers(),
      body: JSON.stringify({ userId, secret }),
    });
    if (!response.ok) throw new Error(`login failed: ${response.status}`);
    const body = await response.json();
    this.token = body.token;
  }

  async ping(): Promise<boolean> {
    try {
      const response = await this.fetchFn(`${this.baseUrl}/v1/ping`);
      return response.ok;
    } catch {
      return false;
    }
  }

  async workspace(): Promise<WorkspaceView> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/me/workspace`, {
      headers: this.headers(),
    });
    if (!response.ok) throw new Error(`workspace failed: ${response.status}`);
    return response.json();
  }

  async submit(envelopes: SubmissionEnvelope[]): Promise<EnvelopeResult[]> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/submissions`, {
      method: 'POST',
      headers: this.headers(),
      body: JSON.stringify({ envelopes }),
    });
    if (!response.ok) throw new Error(`submissions failed: ${response.status}`);
    const body = await response.json();
    return body.results;
  }

  async languageDirections(): Promise<Record<string, 'ltr' | 'rtl'>> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/config/languages`, {
      headers: this.headers(),
    });
    if (!response.ok) throw new Error(`config failed: ${response.status}`);
    const body = await response.json();
    const map: Record<string, 'ltr' | 'rtl'> = {};
    for (const tag of body.rtl ?? []) map[tag] = 'rtl';
    return map;
  }
}
