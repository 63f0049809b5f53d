import { ApiError, InterviewApi, NetworkError } from './api';
import { ClientSessionState, initialState, textDirection, withServerState } from './state';
import {
  el,
  renderAccessDenied,
  renderCommentBox,
  renderErrorBanner,
  renderHistory,
  renderModelIndex,
  renderQuestion,
  renderReport,
} from './ui';

// Single-page controller: server-held state, one in-flight request at a
// time, session id kept in the URL so reloads recover the interview.

export class InterviewApp {
  state: ClientSessionState = initialState();

  constructor(
    private root: HTMLElement,
    private api: InterviewApi = new InterviewApi(),
    private urlParams: URLSearchParams = new URLSearchParams(window.location.search),
    private onSessionUrl: (sessionId: string) => void = (sessionId) => {
      const url = new URL(window.location.href);
      url.searchParams.set('session', sessionId);
      window.history.replaceState(null, '', url.toString());
    },
  ) {}

  async boot(): Promise<void> {
    const sessionId = this.urlParams.get('session');
    const modelId = this.urlParams.get('model');
    if (sessionId) {
      await this.load(() => this.api.getSession(sessionId));
      return;
    }
    if (modelId) {
      await this.load(() =>
        this.api.createSession(
          modelId,
          this.urlParams.get('version') ?? 'latest',
          this.urlParams.get('locale'),
          this.urlParams.get('key'),
        ),
      );
      if (this.state.session) this.onSessionUrl(this.state.session.sessionId);
      return;
    }
    await this.showIndex();
  }

  private async showIndex(): Promise<void> {
    try {
      const index = await this.api.listModels();
      this.root.replaceChildren(
        renderModelIndex(index.models, (model) => {
          this.urlParams.set('model', model.modelId);
          this.urlParams.set('version', model.version);
          void this.boot();
        }),
      );
    } catch (error) {
      this.fail(error, () => void this.showIndex());
      this.render();
    }
  }

  /** Run one server call; retries, conflicts, and failures update state. */
  private async load(call: () => Promise<import('./types').SessionState>): Promise<void> {
    if (this.state.busy) return;
    this.state = { ...this.state, busy: true, error: null, retry: null };
    this.render();
    try {
      const session = await call();
      this.state = withServerState(this.state, session);
    } catch (error) {
      if (error instanceof ApiError && error.status === 409 && this.state.session) {
        // out of sync with the server: refetch the authoritative state
        const sessionId = this.state.session.sessionId;
        try {
          const fresh = await this.api.getSession(sessionId);
          this.state = withServerState(this.state, fresh);
        } catch (refetchError) {
          this.fail(refetchError, () => void this.load(call));
        }
      } else {
        this.fail(error, () => void this.load(call));
      }
    }
    this.render();
  }

  private fail(error: unknown, retry: () => void): void {
    if (error instanceof ApiError && error.status === 403) {
      this.state = { ...this.state, busy: false, accessDenied: true };
      return;
    }
    const message =
      error instanceof NetworkError
        ? 'Connection lost. Your progress is saved on the server.'
        : `Something went wrong (${error instanceof ApiError ? error.status : 'error'}).`;
    this.state = { ...this.state, busy: false, error: message, retry };
  }

  answer(key: string): void {
    const session = this.state.session;
    if (!session || !session.prompt || this.state.busy) return;
    const nodeId = session.prompt.nodeId;
    void this.load(() => this.api.answer(session.sessionId, nodeId, key));
  }

  openRevise(index: number | null): void {
    this.state = { ...this.state, revising: index };
    this.render();
  }

  revise(index: number, key: string): void {
    const session = this.state.session;
    if (!session || this.state.busy) return;
    void this.load(() => this.api.revise(session.sessionId, index, key));
  }

  async comment(text: string): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    try {
      await this.api.postComment({
        modelId: session.modelId,
        version: session.version,
        locale: session.locale ?? null,
        nodeId: session.prompt?.nodeId ?? session.transcript.at(-1)?.node ?? null,
        text,
      });
      this.state = { ...this.state, commentSent: true };
    } catch (error) {
      this.fail(error, () => void this.comment(text));
    }
    this.render();
  }

  render(): void {
    const { session, busy, error, retry, accessDenied, revising, commentSent } = this.state;
    document.documentElement.dir = textDirection(session?.locale);
    const children: HTMLElement[] = [];
    if (error) children.push(renderErrorBanner(error, retry));
    if (accessDenied) {
      children.push(renderAccessDenied());
      this.root.replaceChildren(...children);
      return;
    }
    if (!session) {
      if (!error) children.push(el('p', { class: 'loading' }, ['Loading…']));
      this.root.replaceChildren(...children);
      return;
    }
    if (session.finished && session.report) {
      children.push(renderReport(session.report));
    } else if (session.prompt) {
      children.push(renderQuestion(session.prompt, busy, (key) => this.answer(key)));
    }
    children.push(
      renderHistory(
        session.transcript,
        revising,
        busy,
        (index) => this.openRevise(index),
        (index, key) => this.revise(index, key),
      ),
    );
    children.push(renderCommentBox(commentSent, busy, (text) => void this.comment(text)));
    this.root.replaceChildren(...children);
  }
}

export function mount(): void {
  const root = document.getElementById('app');
  if (!root) throw new Error('missing #app container');
  const app = new InterviewApp(root);
  void app.boot();
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  mount();
}
