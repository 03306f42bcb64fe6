/**
 * Thin client for the curation service. The fetch function is injected so
 * tests (and the offline drill) can swap in a scripted network.
 */
export class ApiClient {
    constructor(baseUrl, fetchFn = (url, init) => fetch(url, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
        this.token = null;
    }
    setToken(token) {
        this.token = token;
    }
    hasToken() {
        return this.token !== null;
    }
    headers() {
        const headers = { 'Content-Type': 'application/json' };
        if (this.token)
            headers['Authorization'] = `Bearer ${this.token}`;
        return headers;
    }
    async login(userId, secret) {
        const response = await this.fetchFn(`${this.baseUrl}/v1/auth/login`, {
            method: 'POST',
            headers: this.headers(),
            body: JSON.stringify({ userId, secret }),
        });
        if (!response.ok)
            throw new Error(`login failed: ${response.status}`);
        const body = await response.json();
        this.token = body.token;
    }
    async ping() {
        try {
            const response = await this.fetchFn(`${this.baseUrl}/v1/ping`);
            return response.ok;
        }
        catch {
            return false;
        }
    }
    async workspace() {
        const response = await this.fetchFn(`${this.baseUrl}/v1/me/workspace`, {
            headers: this.headers(),
        });
        if (!response.ok)
            throw new Error(`workspace failed: ${response.status}`);
        return response.json();
    }
    async submit(envelopes) {
        const response = await this.fetchFn(`${this.baseUrl}/v1/submissions`, {
            method: 'POST',
            headers: this.headers(),
            body: JSON.stringify({ envelopes }),
        });
        if (!response.ok)
            throw new Error(`submissions failed: ${response.status}`);
        const body = await response.json();
        return body.results;
    }
    async languageDirections() {
        const response = await this.fetchFn(`${this.baseUrl}/v1/config/languages`, {
            headers: this.headers(),
        });
        if (!response.ok)
            throw new Error(`config failed: ${response.status}`);
        const body = await response.json();
        const map = {};
        for (const tag of body.rtl ?? [])
            map[tag] = 'rtl';
        return map;
    }
}
