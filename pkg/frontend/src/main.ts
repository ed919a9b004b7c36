import { ApiClient } from "./api.js";
import { App, parseRoute } from "./app.js";
import { toast } from "./toast.js";

function sessionIdFromLocation(): string | null {
  const params = new URLSearchParams(window.location.search);
  return params.get("session");
}

function renderLanding(root: HTMLElement): void {
  const form = document.createElement("form");
  form.className = "landing";
  form.innerHTML = `
    <h2>Open a session</h2>
    <input class="session-id" placeholder="session id, e.g. s000001">
    <button type="submit">Open</button>
    <p>Create sessions with <code>slotforge serve</code> + <code>POST /sessions</code>,
    or the CLI: <code>slotforge induce --corpus docs.jsonl --out session.json</code>.</p>`;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const id = form.querySelector<HTMLInputElement>(".session-id")!.value.trim();
    if (!id) return;
    const url = new URL(window.location.href);
    url.searchParams.set("session", id);
    window.location.href = url.toString();
  });
  root.replaceChildren(form);
}

export function boot(): void {
  const root = document.querySelector<HTMLElement>("#app");
  if (!root) return;
  const sessionId = sessionIdFromLocation();
  if (!sessionId) {
    renderLanding(root);
    return;
  }
  const app = new App(new ApiClient(), sessionId, root, parseRoute(window.location.hash));
  window.addEventListener("hashchange", () => {
    app.setRoute(parseRoute(window.location.hash));
    void app.refresh().catch((error) => toast(String(error), "error"));
  });
  void app.refresh().catch((error) => toast(String(error), "error"));
}

boot();
