/**
 * Auto-scheduler dialog: run a preview, inspect the proposed delta,
 * then apply it under a version guard. Applying without a fresh
 * preview is blocked, and a version conflict on apply asks for a new
 * preview instead of retrying blindly.
 */

import { ApiError, type RosterClient } from "./api/client.js";
import type { AutoScheduleResult } from "./api/types.js";
import { t, type LocaleCode } from "./i18n.js";

export interface AutoscheduleDialogOptions {
  schedules: string[];
  start: string;
  end: string;
  locale?: LocaleCode;
  /** Version of the schedule being viewed, used as the apply guard. */
  version?: number;
  seed?: number;
  onApplied?: (result: AutoScheduleResult) => void;
  onCancelled?: () => void;
}

export class AutoscheduleDialog {
  private client: RosterClient;
  private options: AutoscheduleDialogOptions;
  private locale: LocaleCode;

  private container: HTMLElement;
  private notice: HTMLElement;
  private results: HTMLElement;
  private favoritesOnly: HTMLInputElement;
  private applyButton: HTMLButtonElement;
  private previewed = false;

  constructor(client: RosterClient, options: AutoscheduleDialogOptions) {
    this.client = client;
    this.options = options;
    this.locale = options.locale ?? "en";

    this.container = document.createElement("div");
    this.container.className = "autoschedule-dialog";

    const heading = document.createElement("h3");
    heading.textContent = t(this.locale, "autoschedule.title");
    this.container.appendChild(heading);

    const favLabel = document.createElement("label");
    favLabel.className = "favorites-only";
    this.favoritesOnly = document.createElement("input");
    this.favoritesOnly.type = "checkbox";
    favLabel.appendChild(this.favoritesOnly);
    favLabel.appendChild(
      document.createTextNode(t(this.locale, "autoschedule.favorites_only")));
    this.container.appendChild(favLabel);

    this.notice = document.createElement("p");
    this.notice.className = "notice";
    this.container.appendChild(this.notice);

    this.results = document.createElement("div");
    this.results.className = "autoschedule-results";
    this.container.appendChild(this.results);

    const controls = document.createElement("div");
    controls.className = "dialog-controls";
    const previewButton = document.createElement("button");
    previewButton.className = "action-preview";
    previewButton.textContent = t(this.locale, "autoschedule.preview");
    previewButton.addEventListener("click", () => { void this.preview(); });
    controls.appendChild(previewButton);

    this.applyButton = document.createElement("button");
    this.applyButton.className = "action-apply";
    this.applyButton.textContent = t(this.locale, "autoschedule.apply");
    this.applyButton.disabled = true;
    this.applyButton.addEventListener("click", () => { void this.apply(); });
    controls.appendChild(this.applyButton);

    const cancelButton = document.createElement("button");
    cancelButton.className = "action-cancel";
    cancelButton.textContent = t(this.locale, "autoschedule.cancel");
    cancelButton.addEventListener("click", () => {
      this.options.onCancelled?.();
      this.destroy();
    });
    controls.appendChild(cancelButton);
    this.container.appendChild(controls);
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

  private params() {
    return {
      schedules: this.options.schedules,
      start: this.options.start,
      end: this.options.end,
      favorites_only: this.favoritesOnly.checked,
      seed: this.options.seed ?? 0,
    };
  }

  async preview(): Promise<void> {
    this.notice.textContent = "";
    const result = await this.client.autoschedule(this.params(), true);
    this.showResult(result);
    this.previewed = true;
    this.applyButton.disabled = false;
  }

  async apply(): Promise<void> {
    if (!this.previewed) return;
    try {
      const result = await this.client.autoschedule(
        this.params(), false, this.options.version);
      this.options.onApplied?.(result);
      this.destroy();
    } catch (err) {
      if (err instanceof ApiError && err.status === 412) {
        // Someone edited the roster since the preview; ask for a new one.
        this.notice.textContent = t(this.locale, "autoschedule.stale");
        this.previewed = false;
        this.applyButton.disabled = true;
        return;
      }
      throw err;
    }
  }

  private showResult(result: AutoScheduleResult): void {
    this.results.replaceChildren();
    if (result.assignments.length === 0 && result.unfilled.length === 0) {
      const none = document.createElement("p");
      none.className = "autoschedule-none";
      none.textContent = t(this.locale, "autoschedule.none");
      this.results.appendChild(none);
      return;
    }

    const assignedHead = document.createElement("h4");
    assignedHead.textContent = t(this.locale, "autoschedule.assignments", {
      count: result.assignments.length,
    });
    this.results.appendChild(assignedHead);
    const assigned = document.createElement("ul");
    assigned.className = "proposed-assignments";
    for (const entry of result.assignments) {
      const item = document.createElement("li");
      item.dataset.shift = entry.shift;
      item.dataset.account = entry.account;
      item.textContent = `${entry.shift}: ${entry.account}`;
      assigned.appendChild(item);
    }
    this.results.appendChild(assigned);

    const unfilledHead = document.createElement("h4");
    unfilledHead.textContent = t(this.locale, "autoschedule.unfilled", {
      count: result.unfilled.length,
    });
    this.results.appendChild(unfilledHead);
    const unfilled = document.createElement("ul");
    unfilled.className = "unfilled-shifts";
    for (const shiftId of result.unfilled) {
      const item = document.createElement("li");
      item.dataset.shift = shiftId;
      item.textContent = shiftId;
      unfilled.appendChild(item);
    }
    this.results.appendChild(unfilled);
  }
}
