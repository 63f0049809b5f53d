import type { CommentBody, ModelIndexEntry, SessionState } from './types';

export class ApiError extends Error {
  constructor(public status: number, public body: unknown) {
    super(`API error ${status}`);
  }
}

export class NetworkError extends Error {
  constructor(public cause: unknown) {
    super('network failure');
  }
}

export class InterviewApi {
  constructor(
    private baseUrl = '',
    private fetchImpl: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body !== undefined ? { 'Content-Type': 'application/json' } : undefined,
        body: body !== undefined ? JSON.stringify(body) : undefined,
      });
    } catch (cause) {
      throw new NetworkError(cause);
    }
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      payload = null;
    }
    if (!response.ok) {
      throw new ApiError(response.status, payload);
    }
    return payload as T;
  }

  listModels(): Promise<{ models: ModelIndexEntry[] }> {
    return this.request('GET', '/api/models');
  }

  createSession(
    modelId: string,
    version: string,
    locale?: string | null,
    key?: string | null,
  ): Promise<SessionState> {
    const query = key ? `?key=${encodeURIComponent(key)}` : '';
    return this.request(
      'POST',
      `/api/models/${encodeURIComponent(modelId)}/${encodeURIComponent(version)}/sessions${query}`,
      { locale: locale ?? null },
    );
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.request('GET', `/api/sessions/${encodeURIComponent(sessionId)}`);
  }

  answer(sessionId: string, nodeId: string, answer: string): Promise<SessionState> {
    return this.request('POST', `/api/sessions/${encodeURIComponent(sessionId)}/answers`, {
      nodeId,
      answer,
    });
  }

  revise(sessionId: string, index: number, answer: string): Promise<SessionState> {
    return this.request('POST', `/api/sessions/${encodeURIComponent(sessionId)}/revise`, {
      index,
      answer,
    });
  }

  postComment(body: CommentBody): Promise<{ commentId: string }> {
    return this.request('POST', '/api/comments', body);
  }
}
