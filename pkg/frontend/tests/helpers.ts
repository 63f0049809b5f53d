import type { SessionState } from '../src/types';

export interface RecordedCall {
  method: string;
  url: string;
  body: unknown;
}

export interface MockRoute {
  method: string;
  path: string | RegExp;
  status?: number;
  body?: unknown;
  fail?: boolean;
}

/** fetch stand-in that matches routes in order of declaration and records calls. */
export function mockFetch(routes: MockRoute[]) {
  const calls: RecordedCall[] = [];
  const impl = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    const method = init?.method ?? 'GET';
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    calls.push({ method, url, body });
    for (const route of routes) {
      const matches =
        route.method === method &&
        (typeof route.path === 'string' ? url === route.path : route.path.test(url));
      if (matches) {
        if (route.fail) throw new TypeError('network down');
        return new Response(JSON.stringify(route.body ?? {}), {
          status: route.status ?? 200,
          headers: { 'Content-Type': 'application/json' },
        });
      }
    }
    throw new Error(`no mock route for ${method} ${url}`);
  };
  return { impl: impl as typeof fetch, calls };
}

export function lastStep(path: SessionState[]): SessionState {
  return path[path.length - 1];
}

export function tick(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
