import { makeClientOpId } from './queue';
const EMPTY_COUNTERS = {
    translation: { open: 0, completed: 0 },
    copyedit: { open: 0, completed: 0 },
};
/**
 * One-task-at-a-time workspace state. Submissions and skips append to the
 * local queue and the view advances immediately; the queue drains whenever
 * the connection is up. While an envelope is still local and unsent the
 * user may undo it, which puts the task back on screen.
 */
export class WorkspaceController {
    constructor(userId, api, queue, cache, clock = () => new Date()) {
        this.userId = userId;
        this.api = api;
        this.queue = queue;
        this.cache = cache;
        this.clock = clock;
        this.items = [];
        this.counters = EMPTY_COUNTERS;
        this.notices = [];
        this.undoable = null;
    }
    current() {
        return this.items[0] ?? null;
    }
    /** Refresh from the server when online; otherwise show the cached list. */
    async load(online) {
        if (!online) {
            this.items = this.cache.list();
            return;
        }
        const view = await this.api.workspace();
        const currentBefore = this.current();
        this.counters = view.counters;
        this.items = view.tasks;
        for (const item of view.tasks)
            this.cache.put(item);
        if (currentBefore && !view.tasks.some((t) => t.task.taskId === currentBefore.task.taskId)) {
            // The task on screen vanished server-side (lease revoked or completed
            // elsewhere): tell the user and carry on with the next one.
            this.cache.remove(currentBefore.task.taskId);
            this.notices.push({ key: 'noticeTaskRevoked' });
        }
    }
    recordAction(action, text) {
        const item = this.current();
        if (!item)
            return;
        const opId = makeClientOpId(this.userId);
        const envelope = {
            clientOpId: opId,
            taskId: item.task.taskId,
            action,
            clientTimestamp: this.clock().toISOString(),
            ...(action === 'submit' ? { text } : {}),
        };
        this.queue.enqueue(envelope);
        this.undoable = { opId, item };
        this.items = this.items.slice(1);
        this.cache.remove(item.task.taskId);
    }
    submit(text) {
        if (!text.trim() || !this.current())
            return false;
        this.recordAction('submit', text);
        return true;
    }
    skip() {
        if (!this.current())
            return false;
        this.recordAction('skip');
        return true;
    }
    /** Valid only while the envelope is still queued locally. */
    undo() {
        if (!this.undoable)
            return false;
        const { opId, item } = this.undoable;
        if (!this.queue.removeLast(opId))
            return false;
        this.items = [item, ...this.items];
        this.cache.put(item);
        this.undoable = null;
        return true;
    }
    pendingUploads() {
        return this.queue.size();
    }
    /** Push the local queue to the server; called on reconnect and after actions. */
    async drain() {
        const results = await this.queue.drain(this.api);
        if (results.length > 0)
            this.undoable = null; // sent: past the undo window
        for (const result of results) {
            if (result.result === 'lease-violation') {
                this.notices.push({ key: 'noticeLeaseViolation' });
            }
            else if (result.result === 'not-found') {
                this.notices.push({ key: 'noticeTaskGone' });
            }
        }
        return results;
    }
    takeNotices() {
        const out = this.notices;
        this.notices = [];
        return out;
    }
}
