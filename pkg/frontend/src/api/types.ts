/**
 * Wire types for the rosterd JSON API.
 *
 * These mirror the server resources one to one. The client renders what
 * the API says and never re-derives eligibility, conflicts or quotas.
 */

export interface Session {
  token: string;
  account: string;
  role: string;
  expires_at: string;
}

export interface ElevatedRights {
  manage_shifts: boolean;
  view_stats: boolean;
  approve_time_off: boolean;
}

export interface ScheduleSettings {
  swap_requires_approval: boolean;
  swap_enabled: boolean;
  claiming_enabled: boolean;
  give_up_enabled: boolean;
  drop_enabled: boolean;
}

export interface Schedule {
  id: string;
  name: string;
  location: string | null;
  members: string[];
  is_public: boolean;
  settings: ScheduleSettings;
  /** Present only when the caller manages the schedule. */
  grants?: Record<string, ElevatedRights>;
}

export interface WireInterval {
  start: string;
  end: string;
}

export interface Recurrence {
  weekdays: number[];
  until: string;
}

export interface Shift {
  id: string;
  schedule: string;
  title: string;
  interval: WireInterval;
  min_staff: number;
  max_staff: number | null;
  required_positions: string[];
  favorites: string[];
  assignments: string[];
  recurrence: Recurrence | null;
  work_from_home: boolean;
  understaffed: boolean;
}

/** Envelope returned by GET /schedules/{id}/shifts. */
export interface ShiftsPage {
  schedule: string;
  version: number;
  shifts: Shift[];
}

export interface AccountSummary {
  id: string;
  given_name: string;
  family_name: string;
  display_name: string;
  role: string;
  color: string;
  positions: string[];
  anonymized: boolean;
}

export interface ConflictReport {
  kind: string;
  other: string;
}

export interface QuotaViolation {
  which: string;
  limit: number;
  would_be: number;
  advisory: boolean;
}

export interface Candidate {
  account: string;
  favorite: boolean;
  selectable: boolean;
  conflicts: ConflictReport[];
  violations: QuotaViolation[];
}

export interface ExchangeRequest {
  id: string;
  kind: string;
  shift: string;
  initiator: string;
  created_at: string;
  counterparty: string | null;
  counter_shift: string | null;
  state: string;
}

export interface AutoScheduleParams {
  schedules: string[];
  start: string;
  end: string;
  favorites_only?: boolean;
  max_shifts_per_day?: number | null;
  min_gap_minutes?: number | null;
  seed?: number;
}

export interface AutoScheduleResult {
  preview: boolean;
  assignments: { shift: string; account: string }[];
  unfilled: string[];
}

/** Minute-of-day pair, half open. */
export type OpenSpan = [number, number];

export interface OpeningPeriod {
  name: string;
  /** Covers dates in [start, end), ISO formatted. */
  start: string;
  end: string;
  /** Weekday "0" (Monday) through "6" to open spans. */
  hours: Record<string, OpenSpan[]>;
}

export interface OpeningCalendar {
  id: string;
  periods: OpeningPeriod[];
  /** Date-specific exceptions that replace the weekly grid. */
  overrides: Record<string, OpenSpan[]>;
}

export interface PublicAssignee {
  name: string;
  color: string;
}

export interface PublicShift {
  id: string;
  title: string;
  start: string;
  end: string;
  understaffed: boolean;
  assignees: PublicAssignee[];
}

export interface PublicSchedulePage {
  schedule: { id: string; name: string };
  shifts: PublicShift[];
}
