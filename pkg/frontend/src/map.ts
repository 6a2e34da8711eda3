/**
 * Knowledge-map view: slippy basemap with clustered markers and a
 * timeline histogram whose bars narrow the shared time filter.
 *
 * Basemap tiles come from a configurable template URL; when tiles fail to
 * load the view falls back to a plain graticule so markers stay usable.
 */

import type { MarkerCluster, TimelineBin } from "./api.js";
import { clear, el, svg } from "./dom.js";
import { project, TILE_SIZE, visibleTiles, worldSize } from "./mercator.js";
import type { Granularity, Viewport } from "./state.js";

export interface MapCallbacks {
  onViewportChange(viewport: Viewport): void;
  onMarkerClick(cluster: MarkerCluster): void;
  onTimelineBarClick(bin: TimelineBin): void;
  onGranularityChange(granularity: Granularity): void;
}

export interface MapData {
  clusters: MarkerCluster[];
  total: number;
  bins: TimelineBin[];
}

export const DEFAULT_TILE_TEMPLATE = "https://tile.openstreetmap.org/{z}/{x}/{y}.png";

export class MapView {
  width = 900;
  height = 430;
  private tilesBroken = false;

  constructor(
    private readonly container: HTMLElement,
    private readonly callbacks: MapCallbacks,
    private readonly tileTemplate: string = DEFAULT_TILE_TEMPLATE,
  ) {}

  render(viewport: Viewport, granularity: Granularity, data: MapData | null): void {
    clear(this.container);
    const pane = el("div", {
      class: "map-pane",
      style: `width:${this.width}px;height:${this.height}px`,
    });
    pane.append(this.renderTilesOrGraticule(viewport));
    pane.append(this.renderMarkers(viewport, data?.clusters ?? []));
    pane.append(this.renderControls(viewport));
    pane.append(
      el("div", { class: "attribution" }, "basemap © OpenStreetMap contributors"),
    );
    this.container.append(pane);
    this.container.append(
      el(
        "div",
        { class: "map-total" },
        data ? `${data.total} entities in view` : "loading…",
      ),
    );
    this.container.append(this.renderTimeline(granularity, data?.bins ?? []));
  }

  private renderTilesOrGraticule(viewport: Viewport): HTMLElement {
    const layer = el("div", { class: "tile-layer" });
    if (this.tilesBroken) {
      layer.append(this.renderGraticule(viewport));
      return layer;
    }
    for (const tile of visibleTiles(viewport.lat, viewport.lon, viewport.zoom, this.width, this.height)) {
      const url = this.tileTemplate
        .replace("{z}", String(tile.z))
        .replace("{x}", String(tile.x))
        .replace("{y}", String(tile.y));
      const img = el("img", {
        class: "tile",
        src: url,
        alt: "",
        style: `left:${tile.left}px;top:${tile.top}px;width:${TILE_SIZE}px;height:${TILE_SIZE}px`,
      });
      img.addEventListener("error", () => {
        if (!this.tilesBroken) {
          this.tilesBroken = true;
          const fresh = el("div", { class: "tile-layer" }, this.renderGraticule(viewport));
          layer.replaceWith(fresh);
        }
      });
      layer.append(img);
    }
    return layer;
  }

  private renderGraticule(viewport: Viewport): SVGSVGElement {
    const canvas = svg("svg", {
      class: "graticule",
      viewBox: `0 0 ${this.width} ${this.height}`,
    });
    const center = project(viewport.lat, viewport.lon, viewport.zoom);
    const originX = center.x - this.width / 2;
    const originY = center.y - this.height / 2;
    for (let lon = -180; lon <= 180; lon += 30) {
      const x = project(0, lon, viewport.zoom).x - originX;
      if (x >= 0 && x <= this.width) {
        canvas.append(
          svg("line", { class: "grid-line", x1: String(x), y1: "0", x2: String(x), y2: String(this.height) }),
        );
      }
    }
    for (let lat = -60; lat <= 80; lat += 30) {
      const y = project(lat, 0, viewport.zoom).y - originY;
      if (y >= 0 && y <= this.height) {
        canvas.append(
          svg("line", { class: "grid-line", x1: "0", y1: String(y), x2: String(this.width), y2: String(y) }),
        );
      }
    }
    return canvas;
  }

  private renderMarkers(viewport: Viewport, clusters: MarkerCluster[]): SVGSVGElement {
    const canvas = svg("svg", {
      class: "marker-layer",
      viewBox: `0 0 ${this.width} ${this.height}`,
    });
    const size = worldSize(viewport.zoom);
    const center = project(viewport.lat, viewport.lon, viewport.zoom);
    for (const cluster of clusters) {
      const p = project(cluster.lat, cluster.lon, viewport.zoom);
      // place relative to viewport, preferring the wrapped copy nearest center
      let x = p.x - (center.x - this.width / 2);
      if (x < -size / 2) x += size;
      if (x > this.width + size / 2) x -= size;
      const y = p.y - (center.y - this.height / 2);
      if (x < -30 || x > this.width + 30 || y < -30 || y > this.height + 30) continue;
      const radius = Math.min(22, 8 + 3 * Math.log2(cluster.count));
      const group = svg("g", {
        class: cluster.count === 1 ? "marker single" : "marker cluster",
        "data-count": String(cluster.count),
        transform: `translate(${x},${y})`,
      });
      if (cluster.members?.length === 1) group.setAttribute("data-entity", cluster.members[0]);
      const circle = svg("circle", { r: String(radius) });
      circle.append(svg("title", {}, `${cluster.count} entity(ies)`));
      group.append(circle);
      group.append(svg("text", { class: "marker-count", dy: "4" }, String(cluster.count)));
      group.addEventListener("click", () => this.callbacks.onMarkerClick(cluster));
      canvas.append(group);
    }
    return canvas;
  }

  private renderControls(viewport: Viewport): HTMLElement {
    const controls = el("div", { class: "map-controls" });
    const zoomed = (dz: number) => ({
      ...viewport,
      zoom: Math.max(0, Math.min(18, viewport.zoom + dz)),
    });
    const panned = (dLat: number, dLon: number) => ({
      ...viewport,
      lat: Math.max(-85, Math.min(85, viewport.lat + dLat)),
      lon: viewport.lon + dLon,
    });
    const step = 120 / 2 ** viewport.zoom;
    const buttons: [string, string, Viewport][] = [
      ["+", "zoom-in", zoomed(1)],
      ["−", "zoom-out", zoomed(-1)],
      ["←", "pan-west", panned(0, -step)],
      ["→", "pan-east", panned(0, step)],
      ["↑", "pan-north", panned(step / 2, 0)],
      ["↓", "pan-south", panned(-step / 2, 0)],
    ];
    for (const [text, cls, next] of buttons) {
      const button = el("button", { class: `map-button ${cls}` }, text);
      button.addEventListener("click", () => this.callbacks.onViewportChange(next));
      controls.append(button);
    }
    return controls;
  }

  private renderTimeline(granularity: Granularity, bins: TimelineBin[]): HTMLElement {
    const wrap = el("div", { class: "timeline" });
    const toolbar = el("div", { class: "toolbar" });
    for (const choice of ["decade", "year"] as Granularity[]) {
      const button = el(
        "button",
        { class: granularity === choice ? "gran-toggle active" : "gran-toggle" },
        choice,
      );
      button.addEventListener("click", () => this.callbacks.onGranularityChange(choice));
      toolbar.append(button);
    }
    wrap.append(toolbar);
    if (!bins.length) {
      wrap.append(el("p", { class: "empty-note" }, "no timed entities under the current filter"));
      return wrap;
    }
    const maxCount = Math.max(...bins.map((b) => b.count), 1);
    const bars = el("div", { class: "timeline-bars" });
    for (const bin of bins) {
      const year = bin.start.slice(0, 4).replace(/^0+(?=\d)/, "");
      const labelText = granularity === "decade" ? `${year}s` : year;
      const bar = el(
        "div",
        {
          class: "timeline-bar",
          "data-start": bin.start,
          "data-end": bin.end,
          title: `${labelText}: ${bin.count}`,
        },
        el("div", {
          class: "bar-fill",
          style: `height:${Math.round((bin.count / maxCount) * 80)}px`,
        }),
        el("div", { class: "bar-label" }, labelText),
      );
      bar.addEventListener("click", () => this.callbacks.onTimelineBarClick(bin));
      bars.append(bar);
    }
    wrap.append(bars);
    return wrap;
  }
}
