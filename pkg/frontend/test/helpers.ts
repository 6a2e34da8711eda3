/** Shared fixtures: canned server responses and a recording fetch stub. */

import { vi } from "vitest";
import type {
  DiscoverResponse,
  NetResponse,
  SubgraphResponse,
  TreeNode,
} from "../src/api.js";

export const FIXTURE_TREE: TreeNode = {
  key: "ALL",
  level: 0,
  count: 3,
  members: [],
  children: [
    {
      key: "2010s",
      level: 1,
      count: 2,
      members: [],
      children: [
        { key: "2017", level: 2, count: 2, members: ["debris_flow_1", "landslide_1"], children: [] },
      ],
    },
    { key: "Unknown", level: 1, count: 1, members: ["place_1"], children: [] },
  ],
};

export const FIXTURE_NET: NetResponse = {
  nodes: [
    { id: "debris_flow_1", label: "Debris flow", kind: "debris_flow" },
    { id: "landslide_1", label: "Landslide", kind: "landslide" },
    { id: "place_1", label: "The valley", kind: "place" },
  ],
  edges: [
    { source: "debris_flow_1", target: "place_1", predicate: "occurred_in" },
    { source: "landslide_1", target: "place_1", predicate: "occurred_in" },
  ],
  total: 3,
  truncated: false,
};

export const FIXTURE_SUBGRAPH: SubgraphResponse = {
  focus: "debris_flow_1",
  k: 2,
  nodes: FIXTURE_NET.nodes,
  edges: FIXTURE_NET.edges,
  candidates: [],
};

export const FIXTURE_DISCOVER: DiscoverResponse = {
  focus: "debris_flow_1",
  k: 2,
  provider: "trigram-256",
  threshold: 0.5,
  scope_size: 3,
  candidates: [
    {
      a: "debris_flow_1",
      b: "landslide_1",
      score: 0.7542,
      explanation: "'Debris flow' and 'Landslide' have similar descriptions (cosine 0.7542)",
    },
  ],
};

export const FIXTURES: Record<string, unknown> = {
  "/health": { status: "ok", entities: 3, edges: 2 },
  "/tree": FIXTURE_TREE,
  "/net": FIXTURE_NET,
  "/net/subgraph": FIXTURE_SUBGRAPH,
  "/net/discover": FIXTURE_DISCOVER,
  "/map/markers": {
    clusters: [
      { lat: 30.88, lon: 101.89, count: 1, members: ["debris_flow_1"] },
      { lat: 35.0, lon: 120.0, count: 2, members: ["landslide_1", "place_1"] },
    ],
    total: 3,
  },
  "/map/timeline": {
    granularity: "decade",
    bins: [
      { start: "2010-01-01", end: "2020-01-01", count: 2 },
      { start: "2020-01-01", end: "2030-01-01", count: 1 },
    ],
  },
  "/search": { count: 1, entities: [{ id: "landslide_1", label: "Landslide", kind: "landslide" }] },
  "/entity/debris_flow_1": {
    entity: {
      id: "debris_flow_1",
      label: "Debris flow",
      kind: "debris_flow",
      attrs: { severity: "major" },
      time: { start: "2017-06-24", end: "2017-06-25" },
      location: { lat: 30.88, lon: 101.89 },
      region: { continent: "Asia", country: "CN" },
    },
    edges: [{ source: "debris_flow_1", target: "place_1", predicate: "occurred_in" }],
  },
};

export interface RecordedRequest {
  url: URL;
  method: string;
  body: unknown;
}

/** Install a fixture-backed fetch; returns the request log. */
export function stubFetch(fixtures: Record<string, unknown> = FIXTURES): RecordedRequest[] {
  const log: RecordedRequest[] = [];
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: string | URL, init?: RequestInit) => {
      const url = new URL(String(input), "http://fixture.test");
      log.push({
        url,
        method: init?.method ?? "GET",
        body: init?.body ? JSON.parse(String(init.body)) : null,
      });
      const fixture = fixtures[url.pathname];
      if (fixture === undefined) {
        return new Response(JSON.stringify({ error: "unknown_entity", detail: url.pathname }), {
          status: 404,
          headers: { "Content-Type": "application/json" },
        });
      }
      return new Response(JSON.stringify(fixture), {
        status: 200,
        headers: { "Content-Type": "application/json" },
      });
    }),
  );
  return log;
}

export const tick = async (times = 3): Promise<void> => {
  for (let i = 0; i < times; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
};

export async function waitFor(predicate: () => boolean, timeoutMs = 10_000): Promise<void> {
  const started = Date.now();
  while (!predicate()) {
    if (Date.now() - started > timeoutMs) throw new Error("waitFor timed out");
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}
