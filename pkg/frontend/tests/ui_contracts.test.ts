/**
 * Contract tests: with the service mocked, the two views must issue the
 * exact operation payloads, and a 409 must trigger a refetch plus a toast.
 */

import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { slotColor } from "../src/colors.js";

const CLUSTERS_FIXTURE = {
  session_id: "s000001",
  revision: 3,
  k: 8,
  clusters: [
    {
      id: 1,
      slot: "Cause",
      score: 0.9,
      size: 2,
      representative: [
        {
          id: "q1",
          doc_id: "d1",
          text: "what drug is associated with myocardial ischemia?",
          answer: "cocaine",
          cluster_id: 1,
          representative: true,
        },
      ],
      non_representative: [
        {
          id: "q2",
          doc_id: "d1",
          text: "what is the difference between cn and rc users?",
          answer: "cn",
          cluster_id: 1,
          representative: false,
        },
      ],
      global_representatives: ["q1"],
    },
    {
      id: 6,
      slot: "Treatment",
      score: 0.8,
      size: 1,
      representative: [
        {
          id: "q6",
          doc_id: "d2",
          text: "what kind of change in patient's treatment need to be done?",
          answer: "change",
          cluster_id: 6,
          representative: true,
        },
      ],
      non_representative: [],
      global_representatives: ["q6"],
    },
    {
      id: 7,
      slot: "Treatment",
      score: 0.7,
      size: 1,
      representative: [
        {
          id: "q7",
          doc_id: "d2",
          text: "what did the patient's treatment change to focus on?",
          answer: "focus",
          cluster_id: 7,
          representative: true,
        },
      ],
      non_representative: [],
      global_representatives: ["q7"],
    },
  ],
};

const DOCUMENT_FIXTURE = {
  session_id: "s000001",
  revision: 3,
  doc_id: "d1",
  text: "cocaine is associated with myocardial ischemia. the cn users differ.",
  gold: [{ slot: "Cause", answers: ["cocaine"] }],
  highlights: [
    {
      start: 0,
      end: 7,
      surface: "cocaine",
      question_id: "q1",
      cluster_id: 1,
      slot: "Cause",
      representative: true,
    },
  ],
  questions: [
    {
      id: "q1",
      doc_id: "d1",
      text: "what drug is associated with myocardial ischemia?",
      answer: "cocaine",
      cluster_id: 1,
      representative: true,
      slot: "Cause",
    },
    {
      id: "q2",
      doc_id: "d1",
      text: "what is the difference between cn and rc users?",
      answer: "cn",
      cluster_id: 1,
      representative: false,
      slot: "Cause",
    },
  ],
};

const EVALUATION_FIXTURE = {
  session_id: "s000001",
  revision: 3,
  action_count: 0,
  report: {
    per_slot: {
      Cause: { tp: 1, fp: 0, fn: 0, precision: 1, recall: 1, f1: 1 },
      Treatment: { tp: 0, fp: 0, fn: 1, precision: 0, recall: 0, f1: 0 },
    },
    micro: { tp: 1, fp: 0, fn: 1, precision: 1, recall: 0.5, f1: 0.666667 },
    macro: { precision: 0.5, recall: 0.5, f1: 0.5 },
    action_count: 0,
  },
};

interface CapturedPost {
  url: string;
  body: { revision: number; op: Record<string, unknown> };
}

function jsonResponse(data: unknown, status = 200) {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => data,
  } as Response;
}

function installMockFetch(options: { failNextPostWith409?: boolean } = {}) {
  const posts: CapturedPost[] = [];
  const gets: string[] = [];
  const state = { failNextPostWith409: options.failNextPostWith409 ?? false };
  const mock = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    if (init?.method === "POST") {
      posts.push({ url, body: JSON.parse(String(init.body)) });
      if (state.failNextPostWith409) {
        state.failNextPostWith409 = false;
        return jsonResponse(
          {
            code: "stale_revision",
            message: "stale revision",
            details: { current_revision: 4 },
          },
          409,
        );
      }
      return jsonResponse({ session_id: "s000001", revision: 4, digest: {} });
    }
    gets.push(url);
    if (url.includes("/clusters")) return jsonResponse(CLUSTERS_FIXTURE);
    if (url.includes("/documents/")) return jsonResponse(DOCUMENT_FIXTURE);
    if (url.includes("/evaluation")) return jsonResponse(EVALUATION_FIXTURE);
    return jsonResponse({ code: "not_found", message: "?" }, 404);
  });
  globalThis.fetch = mock as unknown as typeof fetch;
  return { posts, gets, state };
}

async function mountClusters() {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = new App(new ApiClient(), "s000001", root, { page: "clusters" });
  await app.refresh();
  return { root, app };
}

async function mountDocument() {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = new App(new ApiClient(), "s000001", root, { page: "document", docId: "d1" });
  await app.refresh();
  return { root, app };
}

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("cluster view contracts", () => {
  it("merge-select of clusters 6,7 posts MergeClusters{ids:[6,7]}", async () => {
    const { posts } = installMockFetch();
    const { root } = await mountClusters();
    for (const id of [6, 7]) {
      root
        .querySelector<HTMLInputElement>(`.merge-select[data-cluster-id="${id}"]`)!
        .click();
    }
    root.querySelector<HTMLButtonElement>(".merge-submit")!.click();
    await flush();
    expect(posts).toHaveLength(1);
    expect(posts[0].url).toBe("/sessions/s000001/operations");
    expect(posts[0].body).toEqual({
      revision: 3,
      op: { type: "merge_clusters", ids: [6, 7] },
    });
  });

  it("upweight form posts UpweightWords{words,factor}", async () => {
    const { posts } = installMockFetch();
    const { root } = await mountClusters();
    root.querySelector<HTMLInputElement>(".upweight-words")!.value = "increase decrease";
    root.querySelector<HTMLInputElement>(".upweight-factor")!.value = "10";
    root
      .querySelector<HTMLFormElement>(".upweight-form")!
      .dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await flush();
    expect(posts[0].body).toEqual({
      revision: 3,
      op: { type: "upweight_words", words: ["increase", "decrease"], factor: 10 },
    });
  });

  it("delete button posts DeleteQuestion{qid}", async () => {
    const { posts } = installMockFetch();
    const { root } = await mountClusters();
    const row = root.querySelector<HTMLElement>('.question-row[data-qid="q2"]')!;
    expect(row.textContent).toContain("difference between cn and rc users");
    row.querySelector<HTMLButtonElement>(".delete-question")!.click();
    await flush();
    expect(posts[0].body).toEqual({
      revision: 3,
      op: { type: "delete_question", qid: "q2" },
    });
  });

  it("edit-in-place posts EditQuestion{qid,new_text}", async () => {
    const { posts } = installMockFetch();
    const { root } = await mountClusters();
    const row = root.querySelector<HTMLElement>('.question-row[data-qid="q1"]')!;
    row.querySelector<HTMLButtonElement>(".edit-question")!.click();
    const input = row.querySelector<HTMLInputElement>(".edit-input")!;
    input.value = "what drug causes myocardial ischemia?";
    row.querySelector<HTMLButtonElement>(".save-edit")!.click();
    await flush();
    expect(posts[0].body).toEqual({
      revision: 3,
      op: {
        type: "edit_question",
        qid: "q1",
        new_text: "what drug causes myocardial ischemia?",
      },
    });
  });

  it("promote button posts PromoteQuestion{qid}", async () => {
    const { posts } = installMockFetch();
    const { root } = await mountClusters();
    root
      .querySelector<HTMLElement>('.question-row[data-qid="q2"]')!
      .querySelector<HTMLButtonElement>(".promote-question")!
      .click();
    await flush();
    expect(posts[0].body.op).toEqual({ type: "promote_question", qid: "q2" });
  });
});

describe("document view contracts", () => {
  it("move select posts MoveQuestion{qid,to_cluster}", async () => {
    const { posts } = installMockFetch();
    const { root } = await mountDocument();
    const row = root.querySelector<HTMLElement>('.question-row[data-qid="q1"]')!;
    const mover = row.querySelector<HTMLSelectElement>(".move-select")!;
    mover.value = "6";
    mover.dispatchEvent(new Event("change", { bubbles: true }));
    await flush();
    expect(posts[0].body).toEqual({
      revision: 3,
      op: { type: "move_question", qid: "q1", to_cluster: 6 },
    });
  });

  it("ask form posts AddQuestion{text,target_cluster}", async () => {
    const { posts } = installMockFetch();
    const { root } = await mountDocument();
    const form = root.querySelector<HTMLFormElement>(".ask-question-form")!;
    form.querySelector<HTMLInputElement>(".ask-question-text")!.value =
      "By which task were the participants assessed on?";
    form.querySelector<HTMLSelectElement>(".ask-question-cluster")!.value = "7";
    form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await flush();
    expect(posts[0].body).toEqual({
      revision: 3,
      op: {
        type: "add_question",
        text: "By which task were the participants assessed on?",
        target_cluster: 7,
      },
    });
  });

  it("demote button posts DemoteQuestion{qid}", async () => {
    const { posts } = installMockFetch();
    const { root } = await mountDocument();
    const row = root.querySelector<HTMLElement>('.question-row[data-qid="q1"]')!;
    row.querySelector<HTMLButtonElement>(".demote-question")!.click();
    await flush();
    expect(posts[0].body.op).toEqual({ type: "demote_question", qid: "q1" });
  });

  it("delete in document view posts DeleteQuestion for the paper's example question", async () => {
    const { posts } = installMockFetch();
    const { root } = await mountDocument();
    const row = root.querySelector<HTMLElement>('.question-row[data-qid="q2"]')!;
    expect(row.textContent).toContain("difference between cn and rc users");
    row.querySelector<HTMLButtonElement>(".delete-question")!.click();
    await flush();
    expect(posts[0].body.op).toEqual({ type: "delete_question", qid: "q2" });
  });
});

describe("stale revision handling", () => {
  it("a 409 triggers an automatic refetch and a toast", async () => {
    const { posts, gets, state } = installMockFetch();
    const { root } = await mountClusters();
    const getsBefore = gets.length;
    state.failNextPostWith409 = true;
    root
      .querySelector<HTMLElement>('.question-row[data-qid="q2"]')!
      .querySelector<HTMLButtonElement>(".delete-question")!
      .click();
    await flush();
    await flush();
    expect(posts).toHaveLength(1);
    expect(gets.length).toBeGreaterThan(getsBefore); // auto-refetched
    const toast = document.querySelector(".toast");
    expect(toast?.textContent).toBe("state updated elsewhere");
  });

  it("successful mutations also refetch (no optimistic state)", async () => {
    const { gets } = installMockFetch();
    const { root } = await mountClusters();
    const getsBefore = gets.length;
    root
      .querySelector<HTMLElement>('.question-row[data-qid="q2"]')!
      .querySelector<HTMLButtonElement>(".delete-question")!
      .click();
    await flush();
    await flush();
    expect(gets.length).toBeGreaterThan(getsBefore);
  });
});

describe("slot colors", () => {
  it("is a pure function of the slot name", () => {
    expect(slotColor("Cause")).toBe(slotColor("Cause"));
    expect(slotColor("Cause")).not.toBe(slotColor("Treatment"));
  });

  it("matches between cluster chips and document highlights", async () => {
    installMockFetch();
    const { root } = await mountClusters();
    const chip = root.querySelector<HTMLElement>('.slot-chip[data-slot="Cause"]')!;
    const chipColor = chip.style.background;

    document.body.innerHTML = "";
    installMockFetch();
    const { root: docRoot } = await mountDocument();
    const mark = docRoot.querySelector<HTMLElement>('mark[data-slot="Cause"]')!;
    expect(mark.style.background).toBe(chipColor);
    expect(mark.style.background).toBe(slotColor("Cause"));
  });
});
