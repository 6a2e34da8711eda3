import { describe, expect, it } from "vitest";
import { decodeState, defaultState, encodeState } from "../src/state.js";

describe("view state url fragment", () => {
  it("default state encodes compactly and round-trips", () => {
    const state = defaultState();
    const fragment = encodeState(state);
    expect(fragment).toBe("view=tree");
    expect(decodeState(fragment)).toEqual(state);
  });

  it("full state round-trips", () => {
    const state = defaultState();
    state.view = "net";
    state.axis = "spatial";
    state.timeStart = "2010-01-01";
    state.timeEnd = "2020-01-01";
    state.keyword = "danba landslide";
    state.focus = "event_danba_debris_flow";
    state.k = 3;
    state.granularity = "year";
    state.viewport = { lat: 30.88, lon: 101.89, zoom: 7 };
    const decoded = decodeState(encodeState(state));
    expect(decoded).toEqual({ ...state, discoveryResults: [] });
  });

  it("ignores junk and clamps out-of-range values", () => {
    const decoded = decodeState("#view=bogus&k=99&c=999,999,99");
    expect(decoded.view).toBe("tree");
    expect(decoded.k).toBe(2);
    expect(decoded.viewport.lat).toBeLessThanOrEqual(85);
    expect(decoded.viewport.zoom).toBeLessThanOrEqual(18);
  });

  it("discovery results never serialize", () => {
    const state = defaultState();
    state.discoveryResults = [{ a: "x", b: "y", score: 0.9, explanation: "e" }];
    expect(encodeState(state)).not.toContain("x");
    expect(decodeState(encodeState(state)).discoveryResults).toEqual([]);
  });
});
