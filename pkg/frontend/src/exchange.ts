/**
 * Claim / give-up / drop / swap panel for one schedule, from the point
 * of view of one signed-in member.
 *
 * Buttons appear only when the schedule settings enable the workflow;
 * a disabled feature leaves no trace in the DOM. Request rows show the
 * lifecycle state reported by the API, and every action is followed by
 * a refetch (no optimistic updates). Losing an accept race surfaces the
 * not-pending notice instead of a success.
 */

import { ApiError, type RosterClient } from "./api/client.js";
import type { ExchangeRequest, Schedule, Shift, ShiftsPage } from "./api/types.js";
import { t, type LocaleCode } from "./i18n.js";

export interface ExchangePanelOptions {
  /** The signed-in account id the panel renders for. */
  account: string;
  locale?: LocaleCode;
  /** Called after any successful mutation so the page can refetch. */
  onChanged?: () => void;
  /** The swap flow needs a counterparty; the page owns that picker. */
  onSwapRequested?: (shift: Shift) => void;
}

export class ExchangePanel {
  private client: RosterClient;
  private account: string;
  private locale: LocaleCode;
  private onChanged?: () => void;
  private onSwapRequested?: (shift: Shift) => void;

  private container: HTMLElement;
  private notice: HTMLElement;
  private shiftList: HTMLElement;
  private requestList: HTMLElement;
  private version: number | undefined;

  constructor(client: RosterClient, options: ExchangePanelOptions) {
    this.client = client;
    this.account = options.account;
    this.locale = options.locale ?? "en";
    this.onChanged = options.onChanged;
    this.onSwapRequested = options.onSwapRequested;

    this.container = document.createElement("div");
    this.container.className = "exchange-panel";
    this.notice = document.createElement("p");
    this.notice.className = "notice";
    this.container.appendChild(this.notice);
    this.shiftList = document.createElement("div");
    this.shiftList.className = "exchange-shifts";
    this.container.appendChild(this.shiftList);
    this.requestList = document.createElement("div");
    this.requestList.className = "exchange-requests";
    this.container.appendChild(this.requestList);
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

  noticeText(): string {
    return this.notice.textContent ?? "";
  }

  setData(schedule: Schedule, page: ShiftsPage, requests: ExchangeRequest[]): void {
    this.version = page.version;
    this.shiftList.replaceChildren();
    this.requestList.replaceChildren();

    for (const shift of page.shifts) {
      this.shiftList.appendChild(this.shiftRow(schedule, shift));
    }
    for (const request of requests) {
      this.requestList.appendChild(this.requestRow(request));
    }
  }

  private shiftRow(schedule: Schedule, shift: Shift): HTMLElement {
    const row = document.createElement("div");
    row.className = "exchange-shift";
    row.dataset.shiftId = shift.id;

    const title = document.createElement("span");
    title.className = "shift-title";
    title.textContent = shift.title;
    row.appendChild(title);

    const settings = schedule.settings;
    const mine = shift.assignments.includes(this.account);

    if (mine) {
      if (settings.give_up_enabled) {
        row.appendChild(this.button("give-up", t(this.locale, "exchange.give_up"),
          () => this.run(() => this.client.giveUp(shift.id), "exchange.give_up_opened")));
      }
      if (settings.drop_enabled) {
        row.appendChild(this.button("drop", t(this.locale, "exchange.drop"),
          () => this.run(() => this.client.drop(shift.id, null, this.version))));
      }
      if (settings.swap_enabled) {
        row.appendChild(this.button("swap", t(this.locale, "exchange.swap"),
          () => { this.onSwapRequested?.(shift); }));
      }
    } else if (settings.claiming_enabled && shift.understaffed) {
      row.appendChild(this.button("claim", t(this.locale, "exchange.claim"),
        () => this.run(() => this.client.claim(shift.id, this.version),
                       "exchange.accepted")));
    }
    return row;
  }

  private requestRow(request: ExchangeRequest): HTMLElement {
    const row = document.createElement("div");
    row.className = "exchange-request";
    row.dataset.requestId = request.id;
    row.dataset.state = request.state;

    const label = document.createElement("span");
    label.className = "request-label";
    label.textContent =
      `${t(this.locale, `kind.${request.kind}`)}: ${t(this.locale, `state.${request.state}`)}`;
    row.appendChild(label);

    if (request.state === "Open") {
      if (request.initiator === this.account) {
        row.appendChild(this.button("cancel", t(this.locale, "exchange.cancel"),
          () => this.run(() => this.client.cancelRequest(request.id))));
      } else if (request.kind === "GiveUp") {
        row.appendChild(this.button("accept", t(this.locale, "exchange.accept"),
          () => this.run(() => this.client.acceptRequest(request.id),
                         "exchange.accepted")));
      }
    }
    return row;
  }

  private button(action: string, label: string,
                 onClick: () => void): HTMLButtonElement {
    const button = document.createElement("button");
    button.className = `action-${action}`;
    button.dataset.action = action;
    button.textContent = label;
    button.addEventListener("click", onClick);
    return button;
  }

  /** Run one mutation; show a success or failure notice, then refetch. */
  private async run(call: () => Promise<unknown>,
                    successKey?: string): Promise<void> {
    try {
      await call();
      this.notice.textContent = successKey ? t(this.locale, successKey) : "";
      this.notice.classList.remove("error");
    } catch (err) {
      if (!(err instanceof ApiError)) throw err;
      this.notice.textContent = err.code === "NotPending"
        ? t(this.locale, "exchange.not_pending")
        : t(this.locale, "error.api", { detail: err.detail });
      this.notice.classList.add("error");
      return;
    }
    this.onChanged?.();
  }
}
