/** Web-mercator math for the slippy map: world pixels, tiles, viewports. */

export const TILE_SIZE = 256;
export const MAX_MERCATOR_LAT = 85.0511;

const clampLat = (lat: number) => Math.max(-MAX_MERCATOR_LAT, Math.min(MAX_MERCATOR_LAT, lat));

export function worldSize(zoom: number): number {
  return TILE_SIZE * 2 ** zoom;
}

/** Longitude/latitude to absolute world-pixel coordinates at a zoom. */
export function project(lat: number, lon: number, zoom: number): { x: number; y: number } {
  const size = worldSize(zoom);
  const x = ((lon + 180) / 360) * size;
  const rad = (clampLat(lat) * Math.PI) / 180;
  const y = ((1 - Math.log(Math.tan(rad) + 1 / Math.cos(rad)) / Math.PI) / 2) * size;
  return { x, y };
}

export function unproject(x: number, y: number, zoom: number): { lat: number; lon: number } {
  const size = worldSize(zoom);
  const lon = (x / size) * 360 - 180;
  const n = Math.PI - (2 * Math.PI * y) / size;
  const lat = (180 / Math.PI) * Math.atan(0.5 * (Math.exp(n) - Math.exp(-n)));
  return { lat, lon };
}

export interface TileRef {
  z: number;
  x: number;
  y: number;
  /** CSS position inside the viewport, in pixels. */
  left: number;
  top: number;
}

/** Tiles covering a centered viewport of width x height pixels. */
export function visibleTiles(
  centerLat: number,
  centerLon: number,
  zoom: number,
  width: number,
  height: number,
): TileRef[] {
  const tiles: TileRef[] = [];
  const count = 2 ** zoom;
  const center = project(centerLat, centerLon, zoom);
  const originX = center.x - width / 2;
  const originY = center.y - height / 2;
  const first = { x: Math.floor(originX / TILE_SIZE), y: Math.floor(originY / TILE_SIZE) };
  const last = {
    x: Math.floor((originX + width) / TILE_SIZE),
    y: Math.floor((originY + height) / TILE_SIZE),
  };
  for (let ty = first.y; ty <= last.y; ty++) {
    if (ty < 0 || ty >= count) continue;
    for (let tx = first.x; tx <= last.x; tx++) {
      const wrapped = ((tx % count) + count) % count; // longitude wraps
      tiles.push({
        z: zoom,
        x: wrapped,
        y: ty,
        left: tx * TILE_SIZE - originX,
        top: ty * TILE_SIZE - originY,
      });
    }
  }
  return tiles;
}

/**
 * Server bbox string ("minLat,minLon,maxLat,maxLon") for a centered
 * viewport. A viewport wider than the world degenerates to the global box.
 */
export function viewportBBox(
  centerLat: number,
  centerLon: number,
  zoom: number,
  width: number,
  height: number,
): string {
  const size = worldSize(zoom);
  const center = project(centerLat, centerLon, zoom);
  const top = Math.max(0, center.y - height / 2);
  const bottom = Math.min(size, center.y + height / 2);
  const nw = unproject(center.x - width / 2, top, zoom);
  const se = unproject(center.x + width / 2, bottom, zoom);
  const minLat = Math.max(-90, Math.min(se.lat, nw.lat));
  const maxLat = Math.min(90, Math.max(se.lat, nw.lat));
  let west = nw.lon;
  let east = se.lon;
  if (width >= size) {
    west = -180;
    east = 180;
  } else {
    // normalize into [-180, 180]; west > east encodes antimeridian crossing
    west = ((((west + 180) % 360) + 360) % 360) - 180;
    east = ((((east + 180) % 360) + 360) % 360) - 180;
  }
  const fmt = (v: number) => v.toFixed(5);
  return `${fmt(minLat)},${fmt(west)},${fmt(maxLat)},${fmt(east)}`;
}
