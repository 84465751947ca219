/**
 * Week grid: one column per day, shift cards placed in payload order,
 * opening hours drawn as a background band behind each column.
 *
 * Whether a shift is understaffed comes from the API payload; the grid
 * only translates that flag into the hatched overlay class.
 */

import type { AccountSummary, OpeningCalendar, OpenSpan, ShiftsPage } from "./api/types.js";
import { t, type LocaleCode } from "./i18n.js";

export interface GridOptions {
  /** ISO date (YYYY-MM-DD) of the Monday the view starts on. */
  weekStart: string;
  locale?: LocaleCode;
}

const DAY_MS = 24 * 60 * 60 * 1000;

function isoDay(date: Date): string {
  return date.toISOString().slice(0, 10);
}

function minuteLabel(wire: string): string {
  // "2026-09-07T09:00Z" -> "09:00"; plain string surgery, no Date math
  return wire.slice(11, 16);
}

/** Open spans for one date: an override wins, else the covering period's weekly grid. */
function bandsFor(calendar: OpeningCalendar | null, day: string): OpenSpan[] {
  if (!calendar) return [];
  const override = calendar.overrides[day];
  if (override !== undefined) return override;
  for (const period of calendar.periods) {
    if (period.start <= day && day < period.end) {
      const weekday = (new Date(`${day}T00:00:00Z`).getUTCDay() + 6) % 7;
      return period.hours[String(weekday)] ?? [];
    }
  }
  return [];
}

export class ScheduleGrid {
  private container: HTMLElement;
  private locale: LocaleCode;
  private weekStart: string;

  constructor(options: GridOptions) {
    this.locale = options.locale ?? "en";
    this.weekStart = options.weekStart;
    this.container = document.createElement("div");
    this.container.className = "schedule-grid";
  }

  render(target: HTMLElement): void {
    target.appendChild(this.container);
  }

  destroy(): void {
    this.container.remove();
  }

  getElement(): HTMLElement {
    return this.container;
  }

  /** Redraw from fresh API payloads. */
  setData(page: ShiftsPage, accounts: Map<string, AccountSummary>,
          opening: OpeningCalendar | null = null): void {
    this.container.replaceChildren();
    this.container.dataset.version = String(page.version);

    const monday = new Date(`${this.weekStart}T00:00:00Z`);
    const heading = document.createElement("h2");
    heading.className = "grid-heading";
    heading.textContent = t(this.locale, "grid.week_of", {
      date: new Intl.DateTimeFormat(this.locale, {
        day: "numeric", month: "long", timeZone: "UTC",
      }).format(monday),
    });
    this.container.appendChild(heading);

    const row = document.createElement("div");
    row.className = "grid-days";
    this.container.appendChild(row);

    const dayFormat = new Intl.DateTimeFormat(this.locale, {
      weekday: "short", day: "numeric", timeZone: "UTC",
    });

    for (let i = 0; i < 7; i++) {
      const day = new Date(monday.getTime() + i * DAY_MS);
      const key = isoDay(day);
      const column = document.createElement("div");
      column.className = "grid-day";
      column.dataset.date = key;

      const label = document.createElement("div");
      label.className = "day-label";
      label.textContent = dayFormat.format(day);
      column.appendChild(label);

      for (const [startMinute, endMinute] of bandsFor(opening, key)) {
        const band = document.createElement("div");
        band.className = "hours-band";
        band.dataset.startMinute = String(startMinute);
        band.dataset.endMinute = String(endMinute);
        band.title = t(this.locale, "grid.opening_hours");
        column.appendChild(band);
      }

      // Payload order is preserved; the server already sorts by time.
      for (const shift of page.shifts) {
        if (shift.interval.start.slice(0, 10) !== key) continue;
        column.appendChild(this.shiftCard(shift, accounts));
      }
      row.appendChild(column);
    }

    if (page.shifts.length === 0) {
      const empty = document.createElement("p");
      empty.className = "grid-empty";
      empty.textContent = t(this.locale, "grid.empty");
      this.container.appendChild(empty);
    }
  }

  private shiftCard(shift: ShiftsPage["shifts"][number],
                    accounts: Map<string, AccountSummary>): HTMLElement {
    const card = document.createElement("div");
    card.className = shift.understaffed ? "shift hatched" : "shift";
    card.dataset.shiftId = shift.id;
    if (shift.understaffed) {
      card.title = t(this.locale, "grid.understaffed");
    }

    const time = document.createElement("span");
    time.className = "shift-time";
    time.textContent =
      `${minuteLabel(shift.interval.start)} - ${minuteLabel(shift.interval.end)}`;
    card.appendChild(time);

    const title = document.createElement("span");
    title.className = "shift-title";
    title.textContent = shift.title;
    card.appendChild(title);

    const chips = document.createElement("span");
    chips.className = "shift-assignees";
    for (const accountId of shift.assignments) {
      const info = accounts.get(accountId);
      const chip = document.createElement("span");
      chip.className = "assignee-chip";
      chip.textContent = info ? info.display_name : accountId;
      if (info) {
        chip.style.backgroundColor = info.color;
      }
      chips.appendChild(chip);
    }
    card.appendChild(chips);
    return card;
  }
}
