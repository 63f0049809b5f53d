import type { SessionState } from './types';

// Mirrors server truth plus transient UI concerns. The server owns all
// interview state; reloads recover from the session id in the URL.
export interface ClientSessionState {
  session: SessionState | null;
  busy: boolean;
  error: string | null;
  retry: (() => void) | null;
  accessDenied: boolean;
  revising: number | null; // transcript index with an open answer picker
  commentSent: boolean;
}

export function initialState(): ClientSessionState {
  return {
    session: null,
    busy: false,
    error: null,
    retry: null,
    accessDenied: false,
    revising: null,
    commentSent: false,
  };
}

export function withServerState(
  state: ClientSessionState,
  session: SessionState,
): ClientSessionState {
  return {
    ...state,
    session,
    busy: false,
    error: null,
    retry: null,
    revising: null,
  };
}

const RTL_PRIMARY_SUBTAGS = new Set(['ar', 'dv', 'fa', 'he', 'ps', 'ur', 'yi']);

export function textDirection(locale: string | null | undefined): 'ltr' | 'rtl' {
  if (!locale) return 'ltr';
  const primary = locale.split('-')[0].toLowerCase();
  return RTL_PRIMARY_SUBTAGS.has(primary) ? 'rtl' : 'ltr';
}
