import { ApiClient } from './api';

export const PING_INTERVAL_MS = 15_000;

/**
 * Connectivity probe behind the header indicator. The state flips only on
 * probe results, so the indicator always reflects the last ping.
 */
export class ConnectionMonitor {
  private online = false;
  private timer: ReturnType<typeof setInterval> | null = null;
  private listeners: Array<(online: boolean) => void> = [];

  constructor(private readonly api: ApiClient) {}

  isOnline(): boolean {
    return this.online;
  }

  onChange(listener: (online: boolean) => void) {
    this.listeners.push(listener);
  }

  async probe(): Promise<boolean> {
    const alive = await this.api.ping();
    if (alive !== this.online) {
      this.online = alive;
      for (const listener of this.listeners) listener(alive);
    }
    return alive;
  }

  start(intervalMs = PING_INTERVAL_MS) {
    if (this.timer) return;
    this.timer = setInterval(() => void this.probe(), intervalMs);
  }

  stop() {
    if (this.timer) clearInterval(this.timer);
    this.timer = null;
  }
}
