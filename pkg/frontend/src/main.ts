/**
 * Page shell: sign in, pick a schedule, then show the week grid with
 * the exchange panel underneath. Managers additionally get the assign
 * dropdown and the auto-scheduler.
 *
 * Data flows one way: fetch, hand the payloads to the components,
 * refetch after every mutation, and poll every ten seconds.
 */

import { ApiError, RosterClient } from "./api/client.js";
import type { AccountSummary, OpeningCalendar, Schedule } from "./api/types.js";
import { AutoscheduleDialog } from "./autoschedule.js";
import { AssignDropdown } from "./dropdown.js";
import { ExchangePanel } from "./exchange.js";
import { ScheduleGrid } from "./grid.js";
import { t, type LocaleCode } from "./i18n.js";

const POLL_MS = 10_000;

function mondayOf(today: Date): string {
  const shifted = new Date(today.getTime());
  const offset = (shifted.getUTCDay() + 6) % 7;
  shifted.setUTCDate(shifted.getUTCDate() - offset);
  return shifted.toISOString().slice(0, 10);
}

function addDays(isoDate: string, days: number): string {
  const date = new Date(`${isoDate}T00:00:00Z`);
  date.setUTCDate(date.getUTCDate() + days);
  return date.toISOString().slice(0, 10);
}

export class App {
  private client: RosterClient;
  private locale: LocaleCode;
  private root: HTMLElement;
  private status: HTMLElement;
  private content: HTMLElement;

  private me: AccountSummary | null = null;
  private schedule: Schedule | null = null;
  private weekStart: string;
  private grid: ScheduleGrid | null = null;
  private panel: ExchangePanel | null = null;
  private dropdown: AssignDropdown | null = null;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(root: HTMLElement, options: { locale?: LocaleCode; baseUrl?: string } = {}) {
    this.locale = options.locale ?? "en";
    this.client = new RosterClient({ baseUrl: options.baseUrl ?? "", locale: this.locale });
    this.root = root;
    this.weekStart = mondayOf(new Date());

    this.status = document.createElement("p");
    this.status.className = "app-status";
    this.content = document.createElement("div");
    this.content.className = "app-content";
    root.appendChild(this.status);
    root.appendChild(this.content);

    this.showLogin();
  }

  destroy(): void {
    if (this.timer) clearInterval(this.timer);
    this.root.replaceChildren();
  }

  private showLogin(): void {
    this.content.replaceChildren();
    const form = document.createElement("form");
    form.className = "login-form";

    const email = document.createElement("input");
    email.type = "email";
    email.name = "email";
    email.placeholder = t(this.locale, "login.email");
    const password = document.createElement("input");
    password.type = "password";
    password.name = "password";
    password.placeholder = t(this.locale, "login.password");
    const submit = document.createElement("button");
    submit.type = "submit";
    submit.textContent = t(this.locale, "login.sign_in");

    form.append(email, password, submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.signIn(email.value, password.value);
    });
    this.content.appendChild(form);
  }

  private async signIn(email: string, password: string): Promise<void> {
    try {
      await this.client.login(email, password);
      this.me = await this.client.me();
    } catch (err) {
      this.status.textContent = err instanceof ApiError
        ? t(this.locale, "login.failed")
        : String(err);
      return;
    }
    this.status.textContent = "";
    await this.showSchedulePicker();
  }

  private async showSchedulePicker(): Promise<void> {
    const schedules = await this.client.listSchedules();
    if (schedules.length === 1) {
      await this.openSchedule(schedules[0]);
      return;
    }
    this.content.replaceChildren();
    const list = document.createElement("ul");
    list.className = "schedule-list";
    for (const schedule of schedules) {
      const item = document.createElement("li");
      const link = document.createElement("button");
      link.textContent = schedule.name;
      link.addEventListener("click", () => { void this.openSchedule(schedule); });
      item.appendChild(link);
      list.appendChild(item);
    }
    this.content.appendChild(list);
  }

  private canManage(schedule: Schedule): boolean {
    if (!this.me) return false;
    if (this.me.role === "Admin") return true;
    return schedule.grants?.[this.me.id]?.manage_shifts ?? false;
  }

  private async openSchedule(schedule: Schedule): Promise<void> {
    this.schedule = schedule;
    this.content.replaceChildren();

    this.grid = new ScheduleGrid({ weekStart: this.weekStart, locale: this.locale });
    this.grid.render(this.content);

    this.panel = new ExchangePanel(this.client, {
      account: this.me!.id,
      locale: this.locale,
      onChanged: () => { void this.refresh(); },
    });
    this.panel.render(this.content);

    if (this.canManage(schedule)) {
      this.dropdown = new AssignDropdown(this.client, {
        locale: this.locale,
        canManage: true,
        onAssigned: () => { void this.refresh(); },
      });
      this.dropdown.render(this.content);

      const autoButton = document.createElement("button");
      autoButton.className = "open-autoschedule";
      autoButton.textContent = t(this.locale, "autoschedule.title");
      autoButton.addEventListener("click", () => { this.openAutoschedule(); });
      this.content.appendChild(autoButton);
    }

    await this.refresh();
    if (this.timer) clearInterval(this.timer);
    this.timer = setInterval(() => { void this.refresh(); }, POLL_MS);
  }

  private openAutoschedule(): void {
    if (!this.schedule) return;
    const version = Number(this.grid?.getElement().dataset.version ?? "0");
    const dialog = new AutoscheduleDialog(this.client, {
      schedules: [this.schedule.id],
      start: this.weekStart,
      end: addDays(this.weekStart, 7),
      locale: this.locale,
      version,
      onApplied: () => { void this.refresh(); },
    });
    dialog.render(this.content);
  }

  private async refresh(): Promise<void> {
    if (!this.schedule) return;
    try {
      const [page, accounts, requests, opening] = await Promise.all([
        this.client.listShifts(this.schedule.id,
          `${this.weekStart}T00:00Z`, `${addDays(this.weekStart, 7)}T00:00Z`),
        this.canManage(this.schedule)
          ? this.client.listAccounts()
          : Promise.resolve<AccountSummary[]>([]),
        this.client.listRequests({ schedule: this.schedule.id }),
        this.client.openingHours().catch(() => [] as OpeningCalendar[]),
      ]);
      const byId = new Map(accounts.map((a) => [a.id, a]));
      this.grid?.setData(page, byId, opening[0] ?? null);
      this.panel?.setData(this.schedule, page, requests);
      this.status.textContent = "";
    } catch (err) {
      this.status.textContent = err instanceof ApiError
        ? t(this.locale, "error.api", { detail: err.detail })
        : String(err);
    }
  }
}

const mount = document.getElementById("app");
if (mount) {
  new App(mount);
}
