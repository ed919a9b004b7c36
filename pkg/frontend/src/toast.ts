/** Transient message banner; tests query `.toast` elements. */

export function toast(message: string, kind: "info" | "error" = "info"): void {
  let host = document.querySelector<HTMLElement>("#toasts");
  if (!host) {
    host = document.createElement("div");
    host.id = "toasts";
    document.body.appendChild(host);
  }
  const el = document.createElement("div");
  el.className = `toast toast-${kind}`;
  el.textContent = message;
  host.appendChild(el);
  setTimeout(() => el.remove(), 4000);
}
