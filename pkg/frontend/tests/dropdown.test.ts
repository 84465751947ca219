/**
 * Assign dropdown: the candidate list is the eligible payload verbatim
 * (same order, same verdicts), blocked entries never issue a mutation,
 * and the force toggle exists only for managers.
 */

import { beforeEach, describe, expect, it } from "vitest";
import { RosterClient } from "../src/api/client.js";
import { AssignDropdown } from "../src/dropdown.js";
import {
  accountFixture,
  candidateFixture,
  FakeApi,
  flush,
  shiftFixture,
} from "./helpers.js";

let api: FakeApi;
let client: RosterClient;

beforeEach(() => {
  api = new FakeApi();
  client = new RosterClient({ fetchFn: api.fetch as typeof fetch });
  client.token = "tok";
});

function listedAccounts(root: HTMLElement): string[] {
  return [...root.querySelectorAll(".candidate")].map(
    (el) => (el as HTMLElement).dataset.account ?? "");
}

describe("list rendering", () => {
  it("keeps the DOM order identical to the payload order", async () => {
    // Deliberately not alphabetical and not favorite-first: the server
    // already ranked these, the client must not re-sort.
    api.on("GET", "/shifts/sh-1/eligible", {
      body: {
        candidates: [
          candidateFixture({ account: "a-3" }),
          candidateFixture({ account: "a-1", favorite: true }),
          candidateFixture({ account: "a-2" }),
        ],
      },
    });
    const dropdown = new AssignDropdown(client, { canManage: false });
    const root = document.createElement("div");
    dropdown.render(root);
    await dropdown.load("sh-1");

    expect(listedAccounts(root)).toEqual(["a-3", "a-1", "a-2"]);
  });

  it("greys blocked candidates and shows their reports", async () => {
    api.on("GET", "/shifts/sh-1/eligible", {
      body: {
        candidates: [
          candidateFixture({
            account: "a-2",
            selectable: false,
            conflicts: [{ kind: "TimeOffOverlap", other: "to-7" }],
            violations: [{
              which: "max_hours_per_week", limit: 2400, would_be: 2460,
              advisory: false,
            }],
          }),
        ],
      },
    });
    const dropdown = new AssignDropdown(client, { canManage: false });
    const root = document.createElement("div");
    dropdown.render(root);
    await dropdown.load("sh-1");

    const entry = root.querySelector(".candidate") as HTMLElement;
    expect(entry.classList.contains("blocked")).toBe(true);
    const reports = entry.querySelector(".candidate-reports")!.textContent!;
    expect(reports).toContain("Overlaps time off");
    expect(reports).toContain("2460 of 2400");
  });

  it("marks favorites and shows display names when known", async () => {
    api.on("GET", "/shifts/sh-1/eligible", {
      body: { candidates: [candidateFixture({ account: "a-1", favorite: true })] },
    });
    const dropdown = new AssignDropdown(client, {
      canManage: false,
      accounts: new Map([["a-1", accountFixture({ display_name: "Alice Ame" })]]),
    });
    const root = document.createElement("div");
    dropdown.render(root);
    await dropdown.load("sh-1");

    expect(root.querySelector(".candidate-name")?.textContent).toBe("Alice Ame");
    expect(root.querySelector(".favorite-mark")).not.toBeNull();
  });
});

describe("click behavior", () => {
  it("issues no mutation when a blocked candidate is clicked", async () => {
    api.on("GET", "/shifts/sh-1/eligible", {
      body: {
        candidates: [candidateFixture({ account: "a-2", selectable: false })],
      },
    });
    const dropdown = new AssignDropdown(client, { canManage: false });
    const root = document.createElement("div");
    dropdown.render(root);
    await dropdown.load("sh-1");

    (root.querySelector(".candidate") as HTMLElement).click();
    await flush();

    expect(api.callsTo("POST", "/shifts/sh-1/assign")).toHaveLength(0);
  });

  it("assigns a selectable candidate under the schedule version guard", async () => {
    api.on("GET", "/shifts/sh-1/eligible", {
      body: { candidates: [candidateFixture({ account: "a-1" })] },
    });
    api.on("POST", "/shifts/sh-1/assign", {
      body: shiftFixture({ assignments: ["a-1"], understaffed: false }),
    });
    let assigned: string[] = [];
    const dropdown = new AssignDropdown(client, {
      canManage: false,
      onAssigned: (shift) => { assigned = [...shift.assignments]; },
    });
    const root = document.createElement("div");
    dropdown.render(root);
    await dropdown.load("sh-1", 7);

    (root.querySelector(".candidate") as HTMLElement).click();
    await flush();

    const calls = api.callsTo("POST", "/shifts/sh-1/assign");
    expect(calls).toHaveLength(1);
    expect(calls[0].body).toEqual({ account: "a-1", force: false });
    expect(calls[0].headers["if-match"]).toBe('"7"');
    expect(assigned).toEqual(["a-1"]);
  });

  it("obeys the payload verdict even when reports are listed", async () => {
    // The server can mark a conflicted candidate selectable (force
    // semantics); the client must follow the flag, not the reports.
    api.on("GET", "/shifts/sh-1/eligible", {
      body: {
        candidates: [candidateFixture({
          account: "a-2",
          selectable: true,
          conflicts: [{ kind: "OverlapSameSchedule", other: "sh-9" }],
        })],
      },
    });
    api.on("POST", "/shifts/sh-1/assign", { body: shiftFixture() });
    const dropdown = new AssignDropdown(client, { canManage: true });
    const root = document.createElement("div");
    dropdown.render(root);
    await dropdown.load("sh-1");

    (root.querySelector(".candidate") as HTMLElement).click();
    await flush();

    expect(api.callsTo("POST", "/shifts/sh-1/assign")).toHaveLength(1);
  });

  it("surfaces an assign refusal inline", async () => {
    api.on("GET", "/shifts/sh-1/eligible", {
      body: { candidates: [candidateFixture({ account: "a-1" })] },
    });
    api.on("POST", "/shifts/sh-1/assign", {
      status: 409,
      body: { error: "QuotaRefused", detail: "weekly limit reached" },
    });
    const dropdown = new AssignDropdown(client, { canManage: false });
    const root = document.createElement("div");
    dropdown.render(root);
    await dropdown.load("sh-1");

    (root.querySelector(".candidate") as HTMLElement).click();
    await flush();

    expect(root.querySelector(".notice")?.textContent)
      .toBe("Request failed: weekly limit reached");
  });
});

describe("force toggle", () => {
  it("does not exist for callers without manage rights", async () => {
    api.on("GET", "/shifts/sh-1/eligible", { body: { candidates: [] } });
    const dropdown = new AssignDropdown(client, { canManage: false });
    const root = document.createElement("div");
    dropdown.render(root);
    await dropdown.load("sh-1");

    expect(root.querySelector(".force-toggle")).toBeNull();
  });

  it("re-asks the server with force=true and sends force on assign", async () => {
    api.on("GET", "/shifts/sh-1/eligible", (call) => ({
      body: {
        candidates: [candidateFixture({
          account: "a-2",
          selectable: call.query.get("force") === "true",
          conflicts: [{ kind: "TimeOffOverlap", other: "to-1" }],
        })],
      },
    }));
    api.on("POST", "/shifts/sh-1/assign", { body: shiftFixture() });
    const dropdown = new AssignDropdown(client, { canManage: true });
    const root = document.createElement("div");
    dropdown.render(root);
    await dropdown.load("sh-1", 3);

    // Blocked without force: click does nothing.
    (root.querySelector(".candidate") as HTMLElement).click();
    await flush();
    expect(api.callsTo("POST", "/shifts/sh-1/assign")).toHaveLength(0);

    const toggle = root.querySelector(".force-toggle input") as HTMLInputElement;
    toggle.checked = true;
    toggle.dispatchEvent(new Event("change"));
    await flush();

    const reloads = api.callsTo("GET", "/shifts/sh-1/eligible");
    expect(reloads[reloads.length - 1].query.get("force")).toBe("true");

    (root.querySelector(".candidate") as HTMLElement).click();
    await flush();

    const calls = api.callsTo("POST", "/shifts/sh-1/assign");
    expect(calls).toHaveLength(1);
    expect(calls[0].body).toEqual({ account: "a-2", force: true });
  });
});
