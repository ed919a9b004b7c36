import { ApiClient, ApiError, type Operation } from "./api.js";
import { renderClusterView, type OpSubmitter } from "./clusterView.js";
import { renderDocumentView } from "./documentView.js";
import { renderEvaluationPanel } from "./evaluationPanel.js";
import { toast } from "./toast.js";

export type Route = { page: "clusters" } | { page: "document"; docId: string };

export function parseRoute(hash: string): Route {
  const match = hash.match(/^#\/documents\/(.+)$/);
  if (match) return { page: "document", docId: decodeURIComponent(match[1]) };
  return { page: "clusters" };
}

/**
 * Page controller. Holds the last revision fetched from the server; every
 * mutation posts against it and then refetches. A 409 (someone else moved the
 * session forward) auto-refetches and tells the user.
 */
export class App implements OpSubmitter {
  revision = 0;

  constructor(
    private client: ApiClient,
    private sessionId: string,
    private root: HTMLElement,
    private route: Route = { page: "clusters" },
  ) {}

  setRoute(route: Route): void {
    this.route = route;
  }

  async refresh(): Promise<void> {
    const evaluation = await this.client.getEvaluation(this.sessionId);
    let body: HTMLElement;
    if (this.route.page === "clusters") {
      const view = await this.client.getClusters(this.sessionId);
      this.revision = view.revision;
      body = renderClusterView(view, this);
    } else {
      const clusters = await this.client.getClusters(this.sessionId);
      const view = await this.client.getDocument(this.sessionId, this.route.docId);
      this.revision = view.revision;
      body = renderDocumentView(
        view,
        clusters.clusters.map((c) => c.id),
        this,
      );
    }
    const nav = this.renderNav();
    this.root.replaceChildren(nav, renderEvaluationPanel(evaluation), body);
  }

  private renderNav(): HTMLElement {
    const nav = document.createElement("nav");
    nav.className = "top-nav";
    const clustersLink = document.createElement("a");
    clustersLink.href = "#/clusters";
    clustersLink.textContent = "Cluster View";
    nav.appendChild(clustersLink);
    const label = document.createElement("span");
    label.className = "session-label";
    label.textContent = `session ${this.sessionId} @ r${this.revision}`;
    nav.appendChild(label);
    return nav;
  }

  async submit(op: Operation): Promise<void> {
    try {
      await this.client.postOperation(this.sessionId, this.revision, op);
      await this.refresh();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        toast("state updated elsewhere", "info");
        await this.refresh();
        return;
      }
      if (error instanceof ApiError) {
        toast(`${error.code}: ${error.message}`, "error");
        return;
      }
      toast(String(error), "error");
    }
  }
}
