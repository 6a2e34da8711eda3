/**
 * Application shell: three tabs over a shared filter bar, state mirrored in
 * the URL fragment, one in-flight request per view with cancellation of
 * superseded requests.
 */

import {
  ApiClient,
  ApiError,
  type EntityResponse,
  type MarkerCluster,
  type NetResponse,
  type SubgraphResponse,
  type TimelineBin,
  type TreeNode,
} from "./api.js";
import { clear, el } from "./dom.js";
import { MapView, type MapData } from "./map.js";
import { NetView, type NetData } from "./net.js";
import {
  decodeState,
  defaultState,
  encodeState,
  type Granularity,
  type ViewName,
  type ViewState,
  type Viewport,
} from "./state.js";
import { TreeView } from "./tree.js";
import { viewportBBox } from "./mercator.js";

type Responses = {
  tree: TreeNode | null;
  net: NetData | null;
  map: MapData | null;
};

export class App {
  state: ViewState = defaultState();
  private responses: Responses = { tree: null, net: null, map: null };
  private notice: string | null = null;
  private inflight = new Map<ViewName, AbortController>();

  private readonly treeView: TreeView;
  private readonly netView: NetView;
  private readonly mapView: MapView;
  private readonly viewHost: HTMLElement;
  private readonly detailPanel: HTMLElement;
  private readonly errorBanner: HTMLElement;
  private readonly tabs: HTMLElement;
  private readonly filterBar: HTMLElement;

  constructor(
    root: HTMLElement,
    readonly api: ApiClient = new ApiClient(),
    private readonly pushUrl: boolean = true,
  ) {
    this.errorBanner = el("div", { class: "error-banner hidden" });
    this.tabs = el("nav", { class: "tabs" });
    this.filterBar = el("div", { class: "filter-bar" });
    this.viewHost = el("main", { class: "view-host" });
    this.detailPanel = el("aside", { class: "detail-panel" }, el("p", { class: "empty-note" }, "select an entity"));
    const layout = el("div", { class: "layout" }, this.viewHost, this.detailPanel);
    root.append(el("header", {}, el("h1", {}, "geoviz"), this.tabs), this.filterBar, this.errorBanner, layout);

    this.treeView = new TreeView(this.viewHost, {
      onAxisChange: (axis) => this.update({ axis }),
      onMemberClick: (id) => void this.showDetail(id),
    });
    this.netView = new NetView(this.viewHost, {
      onNodeDoubleClick: (id) => this.update({ focus: id, k: 2 }),
      onNodeClick: (id) => void this.showDetail(id),
      onDiscover: () => void this.runDiscovery(),
      onClearFocus: () => this.update({ focus: null }),
    });
    this.mapView = new MapView(this.viewHost, {
      onViewportChange: (viewport: Viewport) => this.update({ viewport }),
      onMarkerClick: (cluster: MarkerCluster) => void this.onMarkerClick(cluster),
      onTimelineBarClick: (bin: TimelineBin) =>
        this.update({ timeStart: bin.start, timeEnd: bin.end }),
      onGranularityChange: (granularity: Granularity) => this.update({ granularity }),
    });
  }

  start(): void {
    this.state = decodeState(window.location.hash);
    window.addEventListener("hashchange", () => {
      this.state = decodeState(window.location.hash);
      void this.refresh();
    });
    void this.refresh();
  }

  /** Apply a state patch, sync the URL, and refetch the active view. */
  update(patch: Partial<ViewState>): void {
    const clearsDiscovery =
      "focus" in patch || "timeStart" in patch || "timeEnd" in patch || "view" in patch || "k" in patch;
    this.state = { ...this.state, ...patch };
    if (clearsDiscovery) this.state.discoveryResults = [];
    this.notice = null;
    if (this.pushUrl) {
      const fragment = encodeState(this.state);
      if (window.location.hash.replace(/^#/, "") !== fragment) {
        // hashchange listener will refetch
        window.location.hash = fragment;
        return;
      }
    }
    void this.refresh();
  }

  private signalFor(view: ViewName): AbortSignal {
    this.inflight.get(view)?.abort();
    const controller = new AbortController();
    this.inflight.set(view, controller);
    return controller.signal;
  }

  async refresh(): Promise<void> {
    this.renderChrome();
    const { state } = this;
    try {
      this.hideError();
      if (state.view === "tree") {
        const signal = this.signalFor("tree");
        this.responses.tree = await this.api.tree(state.axis, signal);
      } else if (state.view === "net") {
        const signal = this.signalFor("net");
        const filter = { timeStart: state.timeStart, timeEnd: state.timeEnd };
        if (state.focus) {
          const sub: SubgraphResponse = await this.api.subgraph(state.focus, state.k, filter, signal);
          this.responses.net = {
            nodes: sub.nodes,
            edges: sub.edges,
            truncated: false,
            focus: sub.focus,
          };
        } else {
          const net: NetResponse = await this.api.net(filter, signal);
          this.responses.net = {
            nodes: net.nodes,
            edges: net.edges,
            truncated: net.truncated,
            focus: null,
          };
        }
      } else {
        const signal = this.signalFor("map");
        const bbox = viewportBBox(
          state.viewport.lat,
          state.viewport.lon,
          state.viewport.zoom,
          this.mapView.width,
          this.mapView.height,
        );
        const base = {
          timeStart: state.timeStart,
          timeEnd: state.timeEnd,
          keyword: state.keyword,
        };
        const markers = await this.api.markers(
          { ...base, bbox, zoom: state.viewport.zoom },
          signal,
        );
        const timeline = await this.api.timeline(state.granularity, base, signal);
        this.responses.map = {
          clusters: markers.clusters,
          total: markers.total,
          bins: timeline.bins,
        };
      }
    } catch (error) {
      if (this.isAbort(error)) return;
      this.showError(error);
    }
    this.renderView();
  }

  private async runDiscovery(): Promise<void> {
    const { state } = this;
    if (!state.focus) {
      this.notice = "zoom into a node first: discovery runs on the visible subgraph";
      this.renderView();
      return;
    }
    try {
      const response = await this.api.discover(state.focus, state.k, {
        timeStart: state.timeStart,
        timeEnd: state.timeEnd,
      });
      this.state.discoveryResults = response.candidates;
      this.notice = response.candidates.length
        ? null
        : "no candidate links above the threshold";
    } catch (error) {
      if (!this.isAbort(error)) this.showError(error);
    }
    this.renderView();
  }

  private async onMarkerClick(cluster: MarkerCluster): Promise<void> {
    if (cluster.count === 1 && cluster.members?.length) {
      await this.showDetail(cluster.members[0]);
    } else {
      // zoom toward the cluster
      this.update({
        viewport: {
          lat: cluster.lat,
          lon: cluster.lon,
          zoom: Math.min(18, this.state.viewport.zoom + 2),
        },
      });
    }
  }

  async showDetail(id: string): Promise<void> {
    try {
      const detail: EntityResponse = await this.api.entity(id);
      this.renderDetail(detail);
    } catch (error) {
      if (!this.isAbort(error)) this.showError(error);
    }
  }

  private renderChrome(): void {
    clear(this.tabs);
    for (const view of ["tree", "net", "map"] as ViewName[]) {
      const tab = el(
        "button",
        { class: this.state.view === view ? "tab active" : "tab", "data-view": view },
        `knowledge ${view}`,
      );
      tab.addEventListener("click", () => this.update({ view }));
      this.tabs.append(tab);
    }

    clear(this.filterBar);
    const start = el("input", {
      type: "date",
      class: "time-start",
      value: this.state.timeStart ?? "",
    }) as HTMLInputElement;
    const end = el("input", {
      type: "date",
      class: "time-end",
      value: this.state.timeEnd ?? "",
    }) as HTMLInputElement;
    const keyword = el("input", {
      type: "search",
      class: "keyword",
      placeholder: "keyword",
      value: this.state.keyword,
    }) as HTMLInputElement;
    const apply = el("button", { class: "apply-filter" }, "apply");
    apply.addEventListener("click", () =>
      this.update({
        timeStart: start.value || null,
        timeEnd: end.value || null,
        keyword: keyword.value,
      }),
    );
    const clearButton = el("button", { class: "clear-filter" }, "clear");
    clearButton.addEventListener("click", () =>
      this.update({ timeStart: null, timeEnd: null, keyword: "" }),
    );
    this.filterBar.append(
      el("label", {}, "from "),
      start,
      el("label", {}, " to "),
      end,
      keyword,
      apply,
      clearButton,
    );
  }

  renderView(): void {
    const { state } = this;
    if (state.view === "tree") {
      this.treeView.render(state.axis, this.responses.tree);
    } else if (state.view === "net") {
      this.netView.render(this.responses.net, state.discoveryResults, this.notice);
    } else {
      this.mapView.render(state.viewport, state.granularity, this.responses.map);
    }
  }

  private renderDetail(detail: EntityResponse): void {
    clear(this.detailPanel);
    const e = detail.entity;
    const rows: [string, string][] = [["kind", e.kind]];
    if (e.time) rows.push(["time", `${e.time.start} → ${e.time.end} (exclusive)`]);
    if (e.location) rows.push(["location", `${e.location.lat}, ${e.location.lon}`]);
    if (e.region) rows.push(["region", `${e.region.continent} / ${e.region.country}`]);
    for (const [key, value] of Object.entries(e.attrs)) rows.push([key, value]);
    const table = el("table", { class: "detail-table" });
    for (const [key, value] of rows) {
      table.append(el("tr", {}, el("th", {}, key), el("td", {}, value)));
    }
    const edges = el("ul", { class: "edge-list" });
    for (const edge of detail.edges) {
      edges.append(el("li", {}, `${edge.source} —${edge.predicate}→ ${edge.target}`));
    }
    this.detailPanel.append(
      el("h2", { class: "detail-label" }, e.label),
      el("div", { class: "detail-id" }, e.id),
      table,
      el("h3", {}, `relations (${detail.edges.length})`),
      edges,
    );
  }

  private isAbort(error: unknown): boolean {
    return error instanceof DOMException && error.name === "AbortError";
  }

  private showError(error: unknown): void {
    const text =
      error instanceof ApiError
        ? `${error.code}: ${error.detail}`
        : `request failed: ${String(error)}`;
    this.errorBanner.textContent = text;
    this.errorBanner.classList.remove("hidden");
  }

  private hideError(): void {
    this.errorBanner.classList.add("hidden");
  }
}

export function mount(root: HTMLElement): App {
  const app = new App(root);
  app.start();
  return app;
}
