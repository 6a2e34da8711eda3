/**
 * Shared view state, serialized to the URL fragment so any view is a
 * shareable link. Discovery results are deliberately not part of the
 * fragment: candidate edges are ephemeral and vanish on refetch.
 */

import type { CandidateLink } from "./api.js";

export type ViewName = "tree" | "net" | "map";
export type Axis = "temporal" | "spatial";
export type Granularity = "year" | "decade";

export interface Viewport {
  lat: number;
  lon: number;
  zoom: number;
}

export interface ViewState {
  view: ViewName;
  axis: Axis;
  timeStart: string | null;
  timeEnd: string | null;
  keyword: string;
  focus: string | null;
  k: number;
  granularity: Granularity;
  viewport: Viewport;
  discoveryResults: CandidateLink[];
}

export const DEFAULT_VIEWPORT: Viewport = { lat: 25, lon: 95, zoom: 3 };

export function defaultState(): ViewState {
  return {
    view: "tree",
    axis: "temporal",
    timeStart: null,
    timeEnd: null,
    keyword: "",
    focus: null,
    k: 2,
    granularity: "decade",
    viewport: { ...DEFAULT_VIEWPORT },
    discoveryResults: [],
  };
}

const VIEWS: ViewName[] = ["tree", "net", "map"];
const AXES: Axis[] = ["temporal", "spatial"];

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("view", state.view);
  if (state.axis !== "temporal") params.set("axis", state.axis);
  if (state.timeStart) params.set("ts", state.timeStart);
  if (state.timeEnd) params.set("te", state.timeEnd);
  if (state.keyword) params.set("q", state.keyword);
  if (state.focus) params.set("focus", state.focus);
  if (state.k !== 2) params.set("k", String(state.k));
  if (state.granularity !== "decade") params.set("g", state.granularity);
  const { lat, lon, zoom } = state.viewport;
  if (lat !== DEFAULT_VIEWPORT.lat || lon !== DEFAULT_VIEWPORT.lon || zoom !== DEFAULT_VIEWPORT.zoom) {
    params.set("c", `${lat.toFixed(4)},${lon.toFixed(4)},${zoom}`);
  }
  return params.toString();
}

export function decodeState(fragment: string): ViewState {
  const state = defaultState();
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  const view = params.get("view");
  if (view && (VIEWS as string[]).includes(view)) state.view = view as ViewName;
  const axis = params.get("axis");
  if (axis && (AXES as string[]).includes(axis)) state.axis = axis as Axis;
  state.timeStart = params.get("ts");
  state.timeEnd = params.get("te");
  state.keyword = params.get("q") ?? "";
  state.focus = params.get("focus");
  const k = Number(params.get("k") ?? "2");
  if (Number.isInteger(k) && k >= 0 && k <= 6) state.k = k;
  if (params.get("g") === "year") state.granularity = "year";
  const center = params.get("c");
  if (center) {
    const [lat, lon, zoom] = center.split(",").map(Number);
    if ([lat, lon, zoom].every(Number.isFinite)) {
      state.viewport = {
        lat: Math.max(-85, Math.min(85, lat)),
        lon: Math.max(-180, Math.min(180, lon)),
        zoom: Math.max(0, Math.min(18, Math.round(zoom))),
      };
    }
  }
  return state;
}
