/**
 * Typed client for the geoviz HTTP API.
 *
 * This module is the only place the UI talks to the network, so the set of
 * endpoints and query parameters used here is the full contract surface.
 */

export interface TreeNode {
  key: string;
  level: number;
  count: number;
  children: TreeNode[];
  members: string[];
}

export interface NodeSummary {
  id: string;
  label: string;
  kind: string;
}

export interface EdgeRecord {
  source: string;
  target: string;
  predicate: string;
}

export interface NetResponse {
  nodes: NodeSummary[];
  edges: EdgeRecord[];
  total: number;
  truncated: boolean;
}

export interface SubgraphResponse {
  focus: string;
  k: number;
  nodes: NodeSummary[];
  edges: EdgeRecord[];
  candidates: CandidateLink[];
}

export interface CandidateLink {
  a: string;
  b: string;
  score: number;
  explanation: string;
}

export interface DiscoverResponse {
  focus: string;
  k: number;
  provider: string;
  threshold: number;
  scope_size: number;
  candidates: CandidateLink[];
}

export interface MarkerCluster {
  lat: number;
  lon: number;
  count: number;
  members?: string[];
}

export interface MarkersResponse {
  clusters: MarkerCluster[];
  total: number;
}

export interface TimelineBin {
  start: string;
  end: string;
  count: number;
}

export interface TimelineResponse {
  granularity: string;
  bins: TimelineBin[];
}

export interface SearchResponse {
  count: number;
  entities: NodeSummary[];
}

export interface EntityRecord {
  id: string;
  label: string;
  kind: string;
  attrs: Record<string, string>;
  time: { start: string; end: string } | null;
  location: { lat: number; lon: number } | null;
  region: { continent: string; country: string } | null;
}

export interface EntityResponse {
  entity: EntityRecord;
  edges: EdgeRecord[];
}

export interface HealthResponse {
  status: string;
  entities: number;
  edges: number;
}

export interface TimeFilter {
  timeStart: string | null;
  timeEnd: string | null;
}

export interface MapQuery extends TimeFilter {
  bbox: string | null;
  zoom: number;
  keyword: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

function timeParams(params: URLSearchParams, filter: TimeFilter): void {
  if (filter.timeStart) params.set("time_start", filter.timeStart);
  if (filter.timeEnd) params.set("time_end", filter.timeEnd);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    if (!response.ok) {
      let code = "http_error";
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { error?: string; detail?: string };
        code = body.error ?? code;
        detail = body.detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, detail);
    }
    return (await response.json()) as T;
  }

  private get<T>(path: string, params: URLSearchParams, signal?: AbortSignal): Promise<T> {
    const qs = params.toString();
    return this.request<T>(qs ? `${path}?${qs}` : path, { signal });
  }

  health(): Promise<HealthResponse> {
    return this.request("/health");
  }

  tree(axis: "temporal" | "spatial", signal?: AbortSignal): Promise<TreeNode> {
    const params = new URLSearchParams({ axis });
    return this.get("/tree", params, signal);
  }

  net(filter: TimeFilter, signal?: AbortSignal): Promise<NetResponse> {
    const params = new URLSearchParams();
    timeParams(params, filter);
    return this.get("/net", params, signal);
  }

  subgraph(
    focus: string,
    k: number,
    filter: TimeFilter,
    signal?: AbortSignal,
  ): Promise<SubgraphResponse> {
    const params = new URLSearchParams({ focus, k: String(k) });
    timeParams(params, filter);
    return this.get("/net/subgraph", params, signal);
  }

  discover(
    focus: string,
    k: number,
    filter: TimeFilter,
    signal?: AbortSignal,
  ): Promise<DiscoverResponse> {
    const body: Record<string, unknown> = { focus, k, provider: "fallback" };
    if (filter.timeStart) body.time_start = filter.timeStart;
    if (filter.timeEnd) body.time_end = filter.timeEnd;
    return this.request("/net/discover", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
  }

  markers(query: MapQuery, signal?: AbortSignal): Promise<MarkersResponse> {
    const params = new URLSearchParams();
    if (query.bbox) params.set("bbox", query.bbox);
    params.set("zoom", String(query.zoom));
    timeParams(params, query);
    if (query.keyword) params.set("q", query.keyword);
    return this.get("/map/markers", params, signal);
  }

  timeline(
    granularity: "year" | "decade",
    query: Omit<MapQuery, "zoom" | "bbox">,
    signal?: AbortSignal,
  ): Promise<TimelineResponse> {
    const params = new URLSearchParams({ granularity });
    timeParams(params, query);
    if (query.keyword) params.set("q", query.keyword);
    return this.get("/map/timeline", params, signal);
  }

  search(q: string, signal?: AbortSignal): Promise<SearchResponse> {
    const params = new URLSearchParams({ q });
    return this.get("/search", params, signal);
  }

  entity(id: string, signal?: AbortSignal): Promise<EntityResponse> {
    return this.request(`/entity/${encodeURIComponent(id)}`, { signal });
  }
}
