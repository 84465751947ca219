/**
 * Fetch-level fake of the rosterd API plus fixture builders.
 *
 * Tests stub the client's fetch with FakeApi.fetch so every component
 * exercise goes through real URL building, headers and error mapping.
 */

import type {
  AccountSummary,
  Candidate,
  ExchangeRequest,
  Schedule,
  ScheduleSettings,
  Shift,
  ShiftsPage,
} from "../src/api/types.js";

export interface RecordedCall {
  method: string;
  path: string;
  query: URLSearchParams;
  headers: Record<string, string>;
  body: unknown;
}

export interface HandlerResult {
  status?: number;
  body?: unknown;
  headers?: Record<string, string>;
}

type Handler = (call: RecordedCall) => HandlerResult;

function jsonResponse(status: number, body: unknown,
                      headers: Record<string, string> = {}): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json", ...headers },
  });
}

export class FakeApi {
  calls: RecordedCall[] = [];
  private handlers = new Map<string, Handler>();

  on(method: string, path: string, result: HandlerResult | Handler): this {
    const handler = typeof result === "function" ? result : () => result;
    this.handlers.set(`${method.toUpperCase()} ${path}`, handler);
    return this;
  }

  callsTo(method: string, path: string): RecordedCall[] {
    return this.calls.filter(
      (c) => c.method === method.toUpperCase() && c.path === path);
  }

  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = new URL(String(input), "http://testserver");
    const method = (init?.method ?? "GET").toUpperCase();
    const headers: Record<string, string> = {};
    for (const [key, value] of Object.entries(init?.headers ?? {})) {
      headers[key.toLowerCase()] = String(value);
    }
    const call: RecordedCall = {
      method,
      path: url.pathname,
      query: url.searchParams,
      headers,
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    };
    this.calls.push(call);
    const handler = this.handlers.get(`${method} ${url.pathname}`);
    if (!handler) {
      return jsonResponse(
        404, { error: "NotFound", detail: `no route ${method} ${url.pathname}` });
    }
    const result = handler(call);
    return jsonResponse(result.status ?? 200, result.body ?? {}, result.headers);
  };
}

/** Let pending promise chains settle. */
export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

// -------------------------------------------------------------- fixtures

export function settingsFixture(overrides: Partial<ScheduleSettings> = {}): ScheduleSettings {
  return {
    swap_requires_approval: false,
    swap_enabled: true,
    claiming_enabled: true,
    give_up_enabled: true,
    drop_enabled: true,
    ...overrides,
  };
}

export function scheduleFixture(overrides: Partial<Schedule> = {}): Schedule {
  return {
    id: "s-1",
    name: "Front desk",
    location: null,
    members: ["a-1", "a-2", "a-3"],
    is_public: false,
    settings: settingsFixture(),
    ...overrides,
  };
}

export function shiftFixture(overrides: Partial<Shift> = {}): Shift {
  return {
    id: "sh-1",
    schedule: "s-1",
    title: "Open",
    interval: { start: "2026-09-07T09:00Z", end: "2026-09-07T17:00Z" },
    min_staff: 1,
    max_staff: null,
    required_positions: [],
    favorites: [],
    assignments: [],
    recurrence: null,
    work_from_home: false,
    understaffed: true,
    ...overrides,
  };
}

export function pageFixture(shifts: Shift[], version = 1): ShiftsPage {
  return { schedule: "s-1", version, shifts };
}

export function accountFixture(overrides: Partial<AccountSummary> = {}): AccountSummary {
  return {
    id: "a-1",
    given_name: "Alice",
    family_name: "Ame",
    display_name: "Alice Ame",
    role: "Agent",
    color: "#4363d8",
    positions: [],
    anonymized: false,
    ...overrides,
  };
}

export function candidateFixture(overrides: Partial<Candidate> = {}): Candidate {
  return {
    account: "a-1",
    favorite: false,
    selectable: true,
    conflicts: [],
    violations: [],
    ...overrides,
  };
}

export function requestFixture(overrides: Partial<ExchangeRequest> = {}): ExchangeRequest {
  return {
    id: "req-1",
    kind: "GiveUp",
    shift: "sh-1",
    initiator: "a-1",
    created_at: "2026-09-01T08:00Z",
    counterparty: null,
    counter_shift: null,
    state: "Open",
    ...overrides,
  };
}
