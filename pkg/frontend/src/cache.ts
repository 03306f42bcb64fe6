import { WorkspaceItem } from './types';

/**
 * LRU cache of assigned tasks so the workspace still renders offline.
 * Bounded (default 50): the oldest untouched task falls out first.
 */
export class TaskCache {
  private items = new Map<string, WorkspaceItem>();

  constructor(private readonly capacity = 50) {}

  put(item: WorkspaceItem) {
    const key = item.task.taskId;
    this.items.delete(key);
    this.items.set(key, item);
    while (this.items.size > this.capacity) {
      const oldest = this.items.keys().next().value as string;
      this.items.delete(oldest);
    }
  }

  remove(taskId: string) {
    this.items.delete(taskId);
  }

  list(): WorkspaceItem[] {
    return [...this.items.values()];
  }

  size(): number {
    return this.items.size;
  }
}
