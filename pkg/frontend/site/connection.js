export const PING_INTERVAL_MS = 15_000;
/**
 * Connectivity probe behind the header indicator. The state flips only on
 * probe results, so the indicator always reflects the last ping.
 */
export class ConnectionMonitor {
    constructor(api) {
        this.api = api;
        this.online = false;
        this.timer = null;
        this.listeners = [];
    }
    isOnline() {
        return this.online;
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    async probe() {
        const alive = await this.api.ping();
        if (alive !== this.online) {
            this.online = alive;
            for (const listener of this.listeners)
                listener(alive);
        }
        return alive;
    }
    start(intervalMs = PING_INTERVAL_MS) {
        if (this.timer)
            return;
        this.timer = setInterval(() => void this.probe(), intervalMs);
    }
    stop() {
        if (this.timer)
            clearInterval(this.timer);
        this.timer = null;
    }
}
