// Shapes of the interview-service JSON API. The client renders these
// verbatim; it never derives legal content on its own.

export interface PromptPayload {
  nodeId: string;
  text: string;
  elaboration?: string | null;
  answers: string[];
  answerTexts: Record<string, string>;
  entityTooltips: Record<string, string>;
  sectionTitles: string[];
}

export interface TranscriptItem {
  index: number;
  node: string;
  answer?: string | null;
  kind: string;
  text?: string | null;
  answerText?: string | null;
  answers?: string[];
  answerTexts?: Record<string, string>;
}

export interface ReportValue {
  key: string;
  name: string;
  tooltip: string;
  longText?: string | null;
}

export interface ReportEntry {
  path: string;
  kind: 'atomic' | 'aggregate';
  name: string;
  tooltip: string;
  longText?: string | null;
  value?: ReportValue | null;
  values?: ReportValue[];
}

export interface FinalReport {
  model: string;
  version: string;
  locale?: string | null;
  entries: ReportEntry[];
}

export interface SessionState {
  sessionId: string;
  modelId: string;
  version: string;
  locale?: string | null;
  finished: boolean;
  prompt?: PromptPayload | null;
  report?: FinalReport | null;
  transcript: TranscriptItem[];
}

export interface ModelIndexEntry {
  modelId: string;
  version: string;
  title: string;
  locales: string[];
}

export interface CommentBody {
  modelId: string;
  version: string;
  locale?: string | null;
  nodeId?: string | null;
  text: string;
}
