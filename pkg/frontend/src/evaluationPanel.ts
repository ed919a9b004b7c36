import type { EvaluationView } from "./api.js";
import { slotColor } from "./colors.js";

function fmt(value: number): string {
  return value.toFixed(3);
}

/** Per-slot P/R/F1 table plus micro/macro rows; shown on both pages. */
export function renderEvaluationPanel(evaluation: EvaluationView): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "evaluation-panel";
  const report = evaluation.report;
  const rows: string[] = [];
  for (const slot of Object.keys(report.per_slot).sort()) {
    const score = report.per_slot[slot];
    rows.push(
      `<tr><td><span class="chip" style="background:${slotColor(slot)}"></span>${slot}</td>` +
        `<td>${fmt(score.precision)}</td><td>${fmt(score.recall)}</td><td>${fmt(score.f1)}</td></tr>`,
    );
  }
  rows.push(
    `<tr class="aggregate"><td>micro</td><td>${fmt(report.micro.precision)}</td>` +
      `<td>${fmt(report.micro.recall)}</td><td>${fmt(report.micro.f1)}</td></tr>`,
  );
  rows.push(
    `<tr class="aggregate"><td>macro</td><td>${fmt(report.macro.precision)}</td>` +
      `<td>${fmt(report.macro.recall)}</td><td>${fmt(report.macro.f1)}</td></tr>`,
  );
  panel.innerHTML = `
    <h3>Evaluation <small>after ${evaluation.action_count} action(s), revision ${evaluation.revision}</small></h3>
    <table class="metrics">
      <thead><tr><th>slot</th><th>P</th><th>R</th><th>F1</th></tr></thead>
      <tbody>${rows.join("")}</tbody>
    </table>`;
  return panel;
}
