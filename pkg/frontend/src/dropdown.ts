/**
 * Candidate picker for one shift. The list mirrors the eligible payload
 * exactly: same entries, same order, selectable flags taken verbatim.
 * Clicking a blocked entry does nothing; only selectable entries issue
 * an assign call. Managers get a force toggle that re-asks the server
 * with force=true and sends force on the assign.
 */

import { ApiError, type RosterClient } from "./api/client.js";
import type { AccountSummary, Candidate, Shift } from "./api/types.js";
import { t, type LocaleCode } from "./i18n.js";

export interface DropdownOptions {
  locale?: LocaleCode;
  /** Shown the force toggle; the caller derives this from grants. */
  canManage: boolean;
  accounts?: Map<string, AccountSummary>;
  onAssigned?: (shift: Shift) => void;
}

export class AssignDropdown {
  private client: RosterClient;
  private locale: LocaleCode;
  private canManage: boolean;
  private accounts: Map<string, AccountSummary>;
  private onAssigned?: (shift: Shift) => void;

  private container: HTMLElement;
  private list: HTMLElement;
  private notice: HTMLElement;
  private forceToggle: HTMLInputElement | null = null;
  private shiftId: string | null = null;
  private version: number | undefined;

  constructor(client: RosterClient, options: DropdownOptions) {
    this.client = client;
    this.locale = options.locale ?? "en";
    this.canManage = options.canManage;
    this.accounts = options.accounts ?? new Map();
    this.onAssigned = options.onAssigned;

    this.container = document.createElement("div");
    this.container.className = "assign-dropdown";
    this.notice = document.createElement("p");
    this.notice.className = "notice";
    this.container.appendChild(this.notice);

    if (this.canManage) {
      const label = document.createElement("label");
      label.className = "force-toggle";
      this.forceToggle = document.createElement("input");
      this.forceToggle.type = "checkbox";
      this.forceToggle.addEventListener("change", () => {
        if (this.shiftId) void this.load(this.shiftId, this.version);
      });
      label.appendChild(this.forceToggle);
      label.appendChild(document.createTextNode(t(this.locale, "dropdown.force")));
      this.container.appendChild(label);
    }

    this.list = document.createElement("ul");
    this.list.className = "candidates";
    this.container.appendChild(this.list);
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

  private get force(): boolean {
    return this.forceToggle?.checked ?? false;
  }

  /** Fetch the candidate list for a shift and rebuild the menu. */
  async load(shiftId: string, version?: number): Promise<void> {
    this.shiftId = shiftId;
    this.version = version;
    this.notice.textContent = "";
    const { candidates } = await this.client.eligible(shiftId, this.force);
    this.list.replaceChildren();
    if (candidates.length === 0) {
      const empty = document.createElement("li");
      empty.className = "candidate empty";
      empty.textContent = t(this.locale, "dropdown.no_candidates");
      this.list.appendChild(empty);
      return;
    }
    for (const candidate of candidates) {
      this.list.appendChild(this.entry(candidate));
    }
  }

  private entry(candidate: Candidate): HTMLElement {
    const item = document.createElement("li");
    item.className = candidate.selectable ? "candidate" : "candidate blocked";
    item.dataset.account = candidate.account;

    const name = document.createElement("span");
    name.className = "candidate-name";
    const info = this.accounts.get(candidate.account);
    name.textContent = info ? info.display_name : candidate.account;
    item.appendChild(name);

    if (candidate.favorite) {
      const star = document.createElement("span");
      star.className = "favorite-mark";
      star.textContent = "★";
      star.title = t(this.locale, "dropdown.favorite");
      item.appendChild(star);
    }

    const reports = [
      ...candidate.conflicts.map((c) =>
        t(this.locale, `conflict.${c.kind}`)),
      ...candidate.violations.map((v) =>
        t(this.locale, `quota.${v.which}`, { limit: v.limit, would_be: v.would_be })),
    ];
    if (reports.length > 0) {
      const why = document.createElement("span");
      why.className = "candidate-reports";
      why.textContent = reports.join("; ");
      item.appendChild(why);
    }

    item.addEventListener("click", () => {
      if (!candidate.selectable || !this.shiftId) return;
      void this.assign(candidate.account);
    });
    return item;
  }

  private async assign(account: string): Promise<void> {
    try {
      const shift = await this.client.assign(this.shiftId!, account, {
        force: this.force,
        ifMatch: this.version,
      });
      this.onAssigned?.(shift);
    } catch (err) {
      if (err instanceof ApiError) {
        this.notice.textContent = t(this.locale, "error.api", { detail: err.detail });
        return;
      }
      throw err;
    }
  }
}
