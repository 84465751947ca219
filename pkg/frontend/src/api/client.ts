/**
 * Thin typed wrapper over the rosterd HTTP API.
 *
 * All decisions (eligibility, conflicts, quotas, workflow legality) are
 * made server side; this module only moves JSON and maps error bodies
 * onto ApiError so views can show them.
 */

import type {
  AccountSummary,
  AutoScheduleParams,
  AutoScheduleResult,
  Candidate,
  ExchangeRequest,
  OpeningCalendar,
  PublicSchedulePage,
  Schedule,
  Session,
  Shift,
  ShiftsPage,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  code: string;
  detail: string;
  /** Structured extras some errors carry (quota reports, validation lists). */
  extras: Record<string, unknown>;

  constructor(status: number, code: string, detail: string,
              extras: Record<string, unknown> = {}) {
    super(`${code}: ${detail}`);
    this.status = status;
    this.code = code;
    this.detail = detail;
    this.extras = extras;
  }
}

export interface ClientOptions {
  baseUrl?: string;
  locale?: string;
  /** Injectable for tests; defaults to the global fetch. */
  fetchFn?: typeof fetch;
}

interface RequestOptions {
  body?: unknown;
  /** Schedule version for optimistic concurrency, sent as If-Match. */
  ifMatch?: number;
  auth?: boolean;
}

export class RosterClient {
  private baseUrl: string;
  private locale: string;
  private fetchFn: typeof fetch;
  token: string | null = null;

  constructor(options: ClientOptions = {}) {
    this.baseUrl = options.baseUrl ?? "";
    this.locale = options.locale ?? "en";
    this.fetchFn = options.fetchFn ?? globalThis.fetch.bind(globalThis);
  }

  private async request<T>(method: string, path: string,
                           options: RequestOptions = {}): Promise<T> {
    const headers: Record<string, string> = {
      "Accept-Language": this.locale,
    };
    if (options.auth !== false && this.token) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    if (options.body !== undefined) {
      headers["Content-Type"] = "application/json";
    }
    if (options.ifMatch !== undefined) {
      headers["If-Match"] = `"${options.ifMatch}"`;
    }
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: options.body !== undefined ? JSON.stringify(options.body) : undefined,
    });
    if (!response.ok) {
      let code = `HTTP${response.status}`;
      let detail = response.statusText;
      let extras: Record<string, unknown> = {};
      try {
        const body = await response.json();
        if (body && typeof body === "object") {
          code = (body.error as string) ?? (body.detail ? "HTTPError" : code);
          detail = (body.detail as string) ?? detail;
          const { error: _e, detail: _d, ...rest } = body;
          extras = rest;
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, detail, extras);
    }
    if (response.status === 204) {
      return undefined as T;
    }
    return (await response.json()) as T;
  }

  // ------------------------------------------------------------ session

  async login(email: string, password: string): Promise<Session> {
    const session = await this.request<Session>("POST", "/auth/login", {
      body: { email, password },
      auth: false,
    });
    this.token = session.token;
    return session;
  }

  async logout(): Promise<void> {
    await this.request("POST", "/auth/logout");
    this.token = null;
  }

  me(): Promise<AccountSummary> {
    return this.request("GET", "/me");
  }

  // ---------------------------------------------------------- schedules

  listSchedules(): Promise<Schedule[]> {
    return this.request("GET", "/schedules");
  }

  getSchedule(scheduleId: string): Promise<Schedule> {
    return this.request("GET", `/schedules/${scheduleId}`);
  }

  listShifts(scheduleId: string, start?: string, end?: string): Promise<ShiftsPage> {
    let path = `/schedules/${scheduleId}/shifts`;
    if (start && end) {
      const query = new URLSearchParams({ start, end });
      path += `?${query}`;
    }
    return this.request("GET", path);
  }

  // ------------------------------------------------------------- shifts

  eligible(shiftId: string, force = false): Promise<{ candidates: Candidate[] }> {
    const suffix = force ? "?force=true" : "";
    return this.request("GET", `/shifts/${shiftId}/eligible${suffix}`);
  }

  assign(shiftId: string, account: string,
         opts: { force?: boolean; ifMatch?: number } = {}): Promise<Shift> {
    return this.request("POST", `/shifts/${shiftId}/assign`, {
      body: { account, force: opts.force ?? false },
      ifMatch: opts.ifMatch,
    });
  }

  unassign(shiftId: string, account: string, ifMatch?: number): Promise<Shift> {
    return this.request("POST", `/shifts/${shiftId}/unassign`, {
      body: { account },
      ifMatch,
    });
  }

  // ---------------------------------------------------------- workflows

  claim(shiftId: string, ifMatch?: number): Promise<Shift> {
    return this.request("POST", `/shifts/${shiftId}/claim`, { ifMatch });
  }

  giveUp(shiftId: string): Promise<ExchangeRequest> {
    return this.request("POST", `/shifts/${shiftId}/give-up`);
  }

  drop(shiftId: string, replacement: string | null = null,
       ifMatch?: number): Promise<Shift> {
    return this.request("POST", `/shifts/${shiftId}/drop`, {
      body: { replacement },
      ifMatch,
    });
  }

  swap(shiftId: string, counterparty: string,
       counterShift: string | null = null): Promise<ExchangeRequest> {
    return this.request("POST", `/shifts/${shiftId}/swap`, {
      body: { counterparty, counter_shift: counterShift },
    });
  }

  listRequests(filter: { schedule?: string; state?: string } = {}): Promise<ExchangeRequest[]> {
    const query = new URLSearchParams();
    if (filter.schedule) query.set("schedule", filter.schedule);
    if (filter.state) query.set("state", filter.state);
    const suffix = query.size ? `?${query}` : "";
    return this.request("GET", `/requests${suffix}`);
  }

  acceptRequest(requestId: string): Promise<ExchangeRequest> {
    return this.request("POST", `/requests/${requestId}/accept`);
  }

  cancelRequest(requestId: string): Promise<ExchangeRequest> {
    return this.request("POST", `/requests/${requestId}/cancel`);
  }

  resolveRequest(requestId: string, decision: string): Promise<ExchangeRequest> {
    return this.request("POST", `/requests/${requestId}/resolve`, {
      body: { decision },
    });
  }

  // ------------------------------------------------------ auto-schedule

  autoschedule(params: AutoScheduleParams, preview: boolean,
               ifMatch?: number): Promise<AutoScheduleResult> {
    return this.request("POST", "/autoschedule", {
      body: { ...params, preview },
      ifMatch,
    });
  }

  // -------------------------------------------------------------- misc

  listAccounts(): Promise<AccountSummary[]> {
    return this.request("GET", "/accounts");
  }

  openingHours(): Promise<OpeningCalendar[]> {
    return this.request("GET", "/opening-hours");
  }

  publicSchedule(scheduleId: string): Promise<PublicSchedulePage> {
    return this.request("GET", `/public/schedules/${scheduleId}`, { auth: false });
  }
}
