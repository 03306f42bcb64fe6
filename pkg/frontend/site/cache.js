/**
 * LRU cache of assigned tasks so the workspace still renders offline.
 * Bounded (default 50): the oldest untouched task falls out first.
 */
export class TaskCache {
    constructor(capacity = 50) {
        this.capacity = capacity;
        this.items = new Map();
    }
    put(item) {
        const key = item.task.taskId;
        this.items.delete(key);
        this.items.set(key, item);
        while (this.items.size > this.capacity) {
            const oldest = this.items.keys().next().value;
            this.items.delete(oldest);
        }
    }
    remove(taskId) {
        this.items.delete(taskId);
    }
    list() {
        return [...this.items.values()];
    }
    size() {
        return this.items.size;
    }
}
