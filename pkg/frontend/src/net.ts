/**
 * Knowledge-net view: force-laid graph with zoom-in on double-click and a
 * discovery button that overlays candidate links as dashed edges.
 *
 * Candidate edges live only in the current render; any refetch draws the
 * stored graph without them.
 */

import type { CandidateLink, EdgeRecord, NodeSummary } from "./api.js";
import { clear, el, svg } from "./dom.js";
import { layout } from "./force.js";

export interface NetCallbacks {
  onNodeDoubleClick(id: string): void;
  onNodeClick(id: string): void;
  onDiscover(): void;
  onClearFocus(): void;
}

export interface NetData {
  nodes: NodeSummary[];
  edges: EdgeRecord[];
  truncated: boolean;
  focus: string | null;
}

const KIND_CLASSES = new Map<string, string>([
  ["concept", "node-concept"],
  ["place", "node-place"],
  ["debris_flow", "node-debris"],
  ["landslide", "node-landslide"],
]);

export class NetView {
  private width = 900;
  private height = 560;

  constructor(
    private readonly container: HTMLElement,
    private readonly callbacks: NetCallbacks,
  ) {}

  render(data: NetData | null, candidates: CandidateLink[], notice: string | null): void {
    clear(this.container);
    const toolbar = el("div", { class: "toolbar" });
    const discover = el("button", { class: "discover-button" }, "discovery");
    discover.addEventListener("click", () => this.callbacks.onDiscover());
    toolbar.append(discover);
    if (data?.focus) {
      const back = el("button", { class: "clear-focus" }, "show whole net");
      back.addEventListener("click", () => this.callbacks.onClearFocus());
      toolbar.append(back, el("span", { class: "focus-note" }, `focus: ${data.focus}`));
    } else {
      toolbar.append(
        el("span", { class: "hint" }, "double-click a node to zoom into its neighborhood"),
      );
    }
    this.container.append(toolbar);
    if (notice) {
      this.container.append(el("p", { class: "notice" }, notice));
    }
    if (!data) {
      this.container.append(el("p", { class: "empty-note" }, "no graph loaded"));
      return;
    }
    if (data.truncated) {
      this.container.append(
        el("p", { class: "notice cap-note" }, "result capped by the server; narrow the filter"),
      );
    }

    const canvas = svg("svg", {
      class: "net-canvas",
      viewBox: `0 0 ${this.width} ${this.height}`,
      preserveAspectRatio: "xMidYMid meet",
    });
    const positions = layout(
      data.nodes.map((n) => n.id),
      data.edges,
      { width: this.width, height: this.height },
    );

    for (const edge of data.edges) {
      const a = positions.get(edge.source);
      const b = positions.get(edge.target);
      if (!a || !b) continue;
      const line = svg("line", {
        class: "edge stored-edge",
        x1: String(a.x),
        y1: String(a.y),
        x2: String(b.x),
        y2: String(b.y),
      });
      line.append(svg("title", {}, edge.predicate));
      canvas.append(line);
    }

    for (const candidate of candidates) {
      const a = positions.get(candidate.a);
      const b = positions.get(candidate.b);
      if (!a || !b) continue;
      const line = svg("line", {
        class: "edge candidate-edge",
        "stroke-dasharray": "6 4",
        x1: String(a.x),
        y1: String(a.y),
        x2: String(b.x),
        y2: String(b.y),
        "data-score": candidate.score.toFixed(4),
      });
      line.append(svg("title", {}, `${candidate.explanation}`));
      canvas.append(line);
    }

    for (const node of data.nodes) {
      const p = positions.get(node.id);
      if (!p) continue;
      const kindClass = KIND_CLASSES.get(node.kind) ?? "node-other";
      const focusClass = node.id === data.focus ? " node-focus" : "";
      const group = svg("g", {
        class: `net-node ${kindClass}${focusClass}`,
        "data-id": node.id,
        transform: `translate(${p.x},${p.y})`,
      });
      const circle = svg("circle", { r: node.id === data.focus ? "11" : "8" });
      circle.append(svg("title", {}, `${node.label} [${node.kind}]`));
      group.append(circle);
      group.append(svg("text", { class: "node-label", dy: "-14" }, node.label));
      group.addEventListener("dblclick", () => this.callbacks.onNodeDoubleClick(node.id));
      group.addEventListener("click", () => this.callbacks.onNodeClick(node.id));
      canvas.append(group);
    }
    this.container.append(canvas);
  }
}
