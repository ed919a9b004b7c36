import type { ClustersView, Operation, QuestionPayload } from "./api.js";
import { slotColor } from "./colors.js";

export interface OpSubmitter {
  submit(op: Operation): Promise<void>;
}

function questionRow(
  q: QuestionPayload,
  actions: OpSubmitter,
  extras: ("demote" | "promote")[],
): HTMLElement {
  const row = document.createElement("li");
  row.className = "question-row";
  row.dataset.qid = q.id;

  const text = document.createElement("span");
  text.className = "question-text";
  text.textContent = q.text;
  const answer = document.createElement("span");
  answer.className = "question-answer";
  answer.textContent = ` → ${q.answer} (${q.doc_id})`;
  row.append(text, answer);

  const edit = document.createElement("button");
  edit.textContent = "edit";
  edit.className = "edit-question";
  edit.addEventListener("click", () => {
    const editor = document.createElement("span");
    const input = document.createElement("input");
    input.className = "edit-input";
    input.value = q.text;
    const save = document.createElement("button");
    save.textContent = "save";
    save.className = "save-edit";
    save.addEventListener("click", () => {
      void actions.submit({ type: "edit_question", qid: q.id, new_text: input.value });
    });
    editor.append(input, save);
    row.replaceChildren(editor);
  });
  row.appendChild(edit);

  const del = document.createElement("button");
  del.textContent = "delete";
  del.className = "delete-question";
  del.addEventListener("click", () => {
    void actions.submit({ type: "delete_question", qid: q.id });
  });
  row.appendChild(del);

  for (const extra of extras) {
    const button = document.createElement("button");
    button.textContent = extra;
    button.className = `${extra}-question`;
    button.addEventListener("click", () => {
      void actions.submit(
        extra === "demote"
          ? { type: "demote_question", qid: q.id }
          : { type: "promote_question", qid: q.id },
      );
    });
    row.appendChild(button);
  }
  return row;
}

/**
 * Cluster view: one card per cluster, representative block on top,
 * non-representative collapsed, with merge / upweight / edit / delete /
 * add-question controls. All mutations round-trip through the API.
 */
export function renderClusterView(view: ClustersView, actions: OpSubmitter): HTMLElement {
  const root = document.createElement("div");
  root.className = "cluster-view";

  const toolbar = document.createElement("form");
  toolbar.className = "upweight-form";
  toolbar.innerHTML = `
    <label>upweight words <input name="words" class="upweight-words" placeholder="increase decrease"></label>
    <label>factor <input name="factor" class="upweight-factor" type="number" value="10" step="any"></label>
    <button type="submit" class="upweight-submit">Upweight & recluster</button>`;
  root.appendChild(toolbar);

  const mergeBar = document.createElement("div");
  mergeBar.className = "merge-bar";
  const mergeButton = document.createElement("button");
  mergeButton.textContent = "Merge selected";
  mergeButton.className = "merge-submit";
  mergeBar.appendChild(mergeButton);
  root.appendChild(mergeBar);

  const cards = document.createElement("div");
  cards.className = "cluster-cards";
  for (const cluster of view.clusters) {
    const card = document.createElement("section");
    card.className = "cluster-card";
    card.dataset.clusterId = String(cluster.id);

    const header = document.createElement("header");
    const select = document.createElement("input");
    select.type = "checkbox";
    select.className = "merge-select";
    select.dataset.clusterId = String(cluster.id);
    const title = document.createElement("h3");
    title.innerHTML = `Cluster ${cluster.id} <span class="slot-chip" data-slot="${cluster.slot}" style="background:${slotColor(cluster.slot)}">${cluster.slot}</span>`;
    header.append(select, title);
    card.appendChild(header);

    const reps = document.createElement("ul");
    reps.className = "representative-block";
    for (const q of cluster.representative) {
      reps.appendChild(questionRow(q, actions, ["demote"]));
    }
    card.appendChild(reps);

    const nonRepWrap = document.createElement("details");
    nonRepWrap.className = "non-representative-block";
    const summary = document.createElement("summary");
    summary.textContent = `non-representative (${cluster.non_representative.length})`;
    nonRepWrap.appendChild(summary);
    const nonReps = document.createElement("ul");
    for (const q of cluster.non_representative) {
      nonReps.appendChild(questionRow(q, actions, ["promote"]));
    }
    nonRepWrap.appendChild(nonReps);
    card.appendChild(nonRepWrap);

    const addForm = document.createElement("form");
    addForm.className = "add-question-form";
    addForm.innerHTML = `
      <input class="add-question-text" placeholder="ask a new question…">
      <button type="submit" class="add-question-submit">Add to cluster ${cluster.id}</button>`;
    addForm.addEventListener("submit", (event) => {
      event.preventDefault();
      const input = addForm.querySelector<HTMLInputElement>(".add-question-text")!;
      if (!input.value.trim()) return;
      void actions.submit({
        type: "add_question",
        text: input.value.trim(),
        target_cluster: cluster.id,
      });
    });
    card.appendChild(addForm);

    cards.appendChild(card);
  }
  root.appendChild(cards);

  toolbar.addEventListener("submit", (event) => {
    event.preventDefault();
    const words = toolbar
      .querySelector<HTMLInputElement>(".upweight-words")!
      .value.split(/[\s,]+/)
      .filter(Boolean);
    const factor = Number(toolbar.querySelector<HTMLInputElement>(".upweight-factor")!.value);
    if (!words.length || !(factor > 0)) return;
    void actions.submit({ type: "upweight_words", words, factor });
  });

  mergeButton.addEventListener("click", () => {
    const ids = Array.from(
      root.querySelectorAll<HTMLInputElement>(".merge-select:checked"),
      (el) => Number(el.dataset.clusterId),
    );
    if (ids.length < 2) return;
    void actions.submit({ type: "merge_clusters", ids });
  });

  return root;
}
