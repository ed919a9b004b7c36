import type { DocumentViewData, Highlight } from "./api.js";
import type { OpSubmitter } from "./clusterView.js";
import { slotColor } from "./colors.js";

function renderText(text: string, highlights: Highlight[]): HTMLElement {
  const container = document.createElement("div");
  container.className = "document-text";
  const ordered = [...highlights].sort((a, b) => a.start - b.start || a.end - b.end);
  let cursor = 0;
  for (const h of ordered) {
    if (h.start < cursor) continue; // overlapping pivot of another question
    if (h.start > cursor) {
      container.appendChild(document.createTextNode(text.slice(cursor, h.start)));
    }
    const mark = document.createElement("mark");
    mark.className = "answer-highlight";
    mark.dataset.slot = h.slot;
    mark.dataset.questionId = h.question_id;
    mark.style.background = slotColor(h.slot);
    mark.title = `${h.slot} (cluster ${h.cluster_id})`;
    mark.textContent = text.slice(h.start, h.end);
    container.appendChild(mark);
    cursor = h.end;
  }
  if (cursor < text.length) {
    container.appendChild(document.createTextNode(text.slice(cursor)));
  }
  return container;
}

/**
 * Document view: the text with per-slot colored answer highlights, plus the
 * document's questions grouped by cluster with move / delete / demote /
 * edit-in-place / ask-new-question controls.
 */
export function renderDocumentView(
  view: DocumentViewData,
  clusterIds: number[],
  actions: OpSubmitter,
): HTMLElement {
  const root = document.createElement("div");
  root.className = "document-view";

  const heading = document.createElement("h2");
  heading.textContent = `Document ${view.doc_id}`;
  root.appendChild(heading);
  root.appendChild(renderText(view.text, view.highlights));

  const groups = document.createElement("div");
  groups.className = "question-groups";
  const byCluster = new Map<number, typeof view.questions>();
  for (const q of view.questions) {
    const list = byCluster.get(q.cluster_id) ?? [];
    list.push(q);
    byCluster.set(q.cluster_id, list);
  }

  for (const [clusterId, questions] of [...byCluster.entries()].sort((a, b) => a[0] - b[0])) {
    const group = document.createElement("section");
    group.className = "question-group";
    group.dataset.clusterId = String(clusterId);
    const slot = questions[0]?.slot ?? "∅";
    group.innerHTML = `<h4>Cluster ${clusterId} <span class="slot-chip" data-slot="${slot}" style="background:${slotColor(slot)}">${slot}</span></h4>`;
    const list = document.createElement("ul");
    for (const q of questions) {
      const row = document.createElement("li");
      row.className = "question-row";
      row.dataset.qid = q.id;

      const label = document.createElement("span");
      label.className = q.representative ? "question-text representative" : "question-text";
      label.textContent = q.text;
      row.appendChild(label);

      const mover = document.createElement("select");
      mover.className = "move-select";
      const placeholder = document.createElement("option");
      placeholder.value = "";
      placeholder.textContent = "move to…";
      mover.appendChild(placeholder);
      for (const cid of clusterIds) {
        if (cid === q.cluster_id) continue;
        const option = document.createElement("option");
        option.value = String(cid);
        option.textContent = `cluster ${cid}`;
        mover.appendChild(option);
      }
      mover.addEventListener("change", () => {
        if (mover.value === "") return;
        void actions.submit({
          type: "move_question",
          qid: q.id,
          to_cluster: Number(mover.value),
        });
      });
      row.appendChild(mover);

      const edit = document.createElement("button");
      edit.textContent = "edit";
      edit.className = "edit-question";
      edit.addEventListener("click", () => {
        const input = document.createElement("input");
        input.className = "edit-input";
        input.value = q.text;
        const save = document.createElement("button");
        save.textContent = "save";
        save.className = "save-edit";
        save.addEventListener("click", () => {
          void actions.submit({ type: "edit_question", qid: q.id, new_text: input.value });
        });
        row.replaceChildren(input, save);
      });
      row.appendChild(edit);

      const del = document.createElement("button");
      del.textContent = "delete";
      del.className = "delete-question";
      del.addEventListener("click", () => {
        void actions.submit({ type: "delete_question", qid: q.id });
      });
      row.appendChild(del);

      if (q.representative) {
        const demote = document.createElement("button");
        demote.textContent = "demote";
        demote.className = "demote-question";
        demote.addEventListener("click", () => {
          void actions.submit({ type: "demote_question", qid: q.id });
        });
        row.appendChild(demote);
      }
      list.appendChild(row);
    }
    group.appendChild(list);
    groups.appendChild(group);
  }
  root.appendChild(groups);

  const ask = document.createElement("form");
  ask.className = "ask-question-form";
  const options = clusterIds
    .map((cid) => `<option value="${cid}">cluster ${cid}</option>`)
    .join("");
  ask.innerHTML = `
    <input class="ask-question-text" placeholder="ask a question about this document…">
    <select class="ask-question-cluster"><option value="">nearest cluster</option>${options}</select>
    <button type="submit" class="ask-question-submit">Ask</button>`;
  ask.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = ask.querySelector<HTMLInputElement>(".ask-question-text")!.value.trim();
    if (!text) return;
    const chosen = ask.querySelector<HTMLSelectElement>(".ask-question-cluster")!.value;
    void actions.submit({
      type: "add_question",
      text,
      target_cluster: chosen === "" ? null : Number(chosen),
    });
  });
  root.appendChild(ask);

  return root;
}
