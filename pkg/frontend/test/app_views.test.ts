/**
 * View behavior against a fixture server: tree collapse, net discovery
 * rendering exactly the returned candidates, timeline bar click narrowing
 * the time filter, and the whole-app documented-endpoint contract.
 */

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { FIXTURES, FIXTURE_DISCOVER, stubFetch, tick, type RecordedRequest } from "./helpers.js";

let log: RecordedRequest[];
let app: App;
let root: HTMLElement;

beforeEach(() => {
  log = stubFetch();
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.append(root);
  app = new App(root, new ApiClient(), false);
});

afterEach(() => vi.unstubAllGlobals());

describe("tree view", () => {
  it("renders hierarchy with count badges", async () => {
    await app.refresh();
    const badges = [...root.querySelectorAll(".badge")].map((b) => b.textContent);
    expect(badges).toContain("3");
    expect(root.querySelector('[data-key="2010s"]')).toBeTruthy();
  });

  it("collapsing the root hides all descendants", async () => {
    await app.refresh();
    const rootHead = root.querySelector<HTMLElement>('[data-key="ALL"] > .tree-head')!;
    rootHead.click();
    const body = root.querySelector('[data-key="ALL"] > .tree-body')!;
    expect(body.classList.contains("hidden")).toBe(true);
    rootHead.click();
    expect(body.classList.contains("hidden")).toBe(false);
  });

  it("axis toggle refetches the other axis", async () => {
    await app.refresh();
    root.querySelector<HTMLElement>('[data-axis="spatial"]')!.click();
    await tick();
    const treeCalls = log.filter((r) => r.url.pathname === "/tree");
    expect(treeCalls.at(-1)!.url.searchParams.get("axis")).toBe("spatial");
  });

  it("clicking a member opens entity detail", async () => {
    await app.refresh();
    const member = [...root.querySelectorAll<HTMLElement>(".tree-member")].find(
      (m) => m.textContent === "debris_flow_1",
    )!;
    member.click();
    await tick();
    expect(log.some((r) => r.url.pathname === "/entity/debris_flow_1")).toBe(true);
    expect(document.querySelector(".detail-label")!.textContent).toBe("Debris flow");
  });
});

describe("net view", () => {
  beforeEach(async () => {
    app.state.view = "net";
    await app.refresh();
  });

  it("draws stored edges solid and nodes per kind", () => {
    expect(root.querySelectorAll(".stored-edge").length).toBe(2);
    expect(root.querySelectorAll(".candidate-edge").length).toBe(0);
    expect(root.querySelectorAll(".net-node").length).toBe(3);
  });

  it("double-click zooms into the node's subgraph with k=2", async () => {
    const node = root.querySelector<SVGGElement>('[data-id="debris_flow_1"]')!;
    node.dispatchEvent(new Event("dblclick"));
    await tick();
    const call = log.find((r) => r.url.pathname === "/net/subgraph")!;
    expect(call.url.searchParams.get("focus")).toBe("debris_flow_1");
    expect(call.url.searchParams.get("k")).toBe("2");
    expect(app.state.focus).toBe("debris_flow_1");
  });

  it("discovery renders exactly the returned candidates as dashed edges", async () => {
    app.state.focus = "debris_flow_1";
    await app.refresh();
    root.querySelector<HTMLElement>(".discover-button")!.click();
    await tick();
    const dashed = [...root.querySelectorAll<SVGLineElement>(".candidate-edge")];
    expect(dashed.length).toBe(FIXTURE_DISCOVER.candidates.length);
    expect(dashed[0].getAttribute("stroke-dasharray")).toBeTruthy();
    expect(dashed[0].getAttribute("data-score")).toBe("0.7542");
    expect(dashed[0].querySelector("title")!.textContent).toContain("similar descriptions");
    const post = log.find((r) => r.url.pathname === "/net/discover")!;
    expect(post.method).toBe("POST");
  });

  it("discovery with zero candidates shows an empty-state notice", async () => {
    const fixture = FIXTURES["/net/discover"] as { candidates: unknown[] };
    const original = fixture.candidates;
    fixture.candidates = [];
    try {
      app.state.focus = "debris_flow_1";
      await app.refresh();
      root.querySelector<HTMLElement>(".discover-button")!.click();
      await tick();
      expect(root.querySelectorAll(".candidate-edge").length).toBe(0);
      expect(root.querySelector(".notice")!.textContent).toContain("no candidate links");
    } finally {
      fixture.candidates = original;
    }
  });

  it("candidates vanish on refetch and never persist", async () => {
    app.state.focus = "debris_flow_1";
    await app.refresh();
    root.querySelector<HTMLElement>(".discover-button")!.click();
    await tick();
    expect(root.querySelectorAll(".candidate-edge").length).toBe(1);
    app.update({ timeStart: "2017-01-01", timeEnd: "2018-01-01" });
    await tick();
    expect(app.state.discoveryResults).toEqual([]);
    expect(root.querySelectorAll(".candidate-edge").length).toBe(0);
  });

  it("discovery without a focus asks the user to zoom first", async () => {
    root.querySelector<HTMLElement>(".discover-button")!.click();
    await tick();
    expect(log.some((r) => r.url.pathname === "/net/discover")).toBe(false);
    expect(root.querySelector(".notice")!.textContent).toContain("zoom into a node");
  });
});

describe("map view", () => {
  beforeEach(async () => {
    app.state.view = "map";
    await app.refresh();
  });

  it("renders one marker per cluster with counts", () => {
    const markers = [...root.querySelectorAll<SVGGElement>(".marker")];
    expect(markers.length).toBe(2);
    expect(markers.map((m) => m.getAttribute("data-count")).sort()).toEqual(["1", "2"]);
  });

  it("clicking a decade bar narrows the time filter to that bin", async () => {
    const bar = root.querySelector<HTMLElement>('[data-start="2010-01-01"]')!;
    bar.click();
    await tick();
    expect(app.state.timeStart).toBe("2010-01-01");
    expect(app.state.timeEnd).toBe("2020-01-01");
    const timelineCalls = log.filter((r) => r.url.pathname === "/map/timeline");
    const last = timelineCalls.at(-1)!;
    expect(last.url.searchParams.get("time_start")).toBe("2010-01-01");
    expect(last.url.searchParams.get("time_end")).toBe("2020-01-01");
  });

  it("clicking a single-count marker opens entity detail", async () => {
    const single = root.querySelector<SVGGElement>('.marker[data-count="1"]')!;
    single.dispatchEvent(new Event("click"));
    await tick();
    expect(log.some((r) => r.url.pathname === "/entity/debris_flow_1")).toBe(true);
  });

  it("clicking a multi-count marker zooms toward it", async () => {
    const before = app.state.viewport.zoom;
    const multi = root.querySelector<SVGGElement>('.marker[data-count="2"]')!;
    multi.dispatchEvent(new Event("click"));
    await tick();
    expect(app.state.viewport.zoom).toBe(before + 2);
  });

  it("keyword filter feeds both markers and timeline", async () => {
    app.update({ keyword: "landslide" });
    await tick();
    const markerCall = log.filter((r) => r.url.pathname === "/map/markers").at(-1)!;
    const timelineCall = log.filter((r) => r.url.pathname === "/map/timeline").at(-1)!;
    expect(markerCall.url.searchParams.get("q")).toBe("landslide");
    expect(timelineCall.url.searchParams.get("q")).toBe("landslide");
  });
});

describe("whole-app endpoint contract", () => {
  it("all traffic stays on documented endpoints", async () => {
    const documented = new Set([
      "/health", "/tree", "/net", "/net/subgraph", "/net/discover",
      "/map/markers", "/map/timeline", "/search",
    ]);
    await app.refresh();
    app.update({ view: "net" });
    await tick();
    app.update({ view: "net", focus: "debris_flow_1" });
    await tick();
    root.querySelector<HTMLElement>(".discover-button")?.click();
    await tick();
    app.update({ view: "map" });
    await tick();
    for (const request of log) {
      const ok =
        documented.has(request.url.pathname) || request.url.pathname.startsWith("/entity/");
      expect(ok, `undocumented request ${request.url.pathname}`).toBe(true);
    }
  });
});
