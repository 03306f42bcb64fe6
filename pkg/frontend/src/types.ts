export type Direction = 'ltr' | 'rtl';

export interface SourcePane {
  language: string;
  direction: Direction;
  text: string;
}

export interface TaskInfo {
  taskId: string;
  workflowId: string;
  datasetId: string;
  segmentId: string;
  type: 'translation' | 'copyedit';
  round: number;
  leaseExpiresAt: string | null;
}

export interface WorkspaceItem {
  task: TaskInfo;
  sources: SourcePane[];
  targetLanguage: { code: string | null; direction: Direction };
  seedText: string | null;
  seedVersionLabel: string | null;
}

export interface Counters {
  translation: { open: number; completed: number };
  copyedit: { open: number; completed: number };
}

export interface WorkspaceView {
  userId: string;
  uiLanguage: string;
  tasks: WorkspaceItem[];
  counters: Counters;
  languageDirections: Record<string, Direction>;
}

export interface SubmissionEnvelope {
  clientOpId: string;
  taskId: string;
  action: 'submit' | 'skip';
  text?: string;
  clientTimestamp: string;
}

export type SubmissionResult =
  | 'applied'
  | 'duplicate'
  | 'lease-violation'
  | 'not-found'
  | 'malformed';

export interface EnvelopeResult {
  clientOpId: string | null;
  result: SubmissionResult;
  status: number;
}
