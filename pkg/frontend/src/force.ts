/**
 * Minimal deterministic force-directed layout.
 *
 * Initial positions are seeded from a hash of each node id, so the same
 * graph always lays out the same way; the simulation runs a fixed number
 * of synchronous ticks (no animation-frame dependency, test-friendly).
 */

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface LayoutLink {
  source: string;
  target: string;
}

function hash01(text: string, salt: number): number {
  let h = 2166136261 >>> 0;
  for (let i = 0; i < text.length; i++) {
    h = Math.imul(h ^ text.charCodeAt(i), 16777619) >>> 0;
  }
  h = Math.imul(h ^ salt, 16777619) >>> 0;
  return h / 4294967296;
}

export interface LayoutOptions {
  width: number;
  height: number;
  ticks?: number;
  linkDistance?: number;
  repulsion?: number;
}

export function layout(
  nodeIds: string[],
  links: LayoutLink[],
  options: LayoutOptions,
): Map<string, LayoutNode> {
  const { width, height } = options;
  const ticks = options.ticks ?? 150;
  const linkDistance = options.linkDistance ?? 70;
  const repulsion = options.repulsion ?? 1200;

  const nodes = new Map<string, LayoutNode>();
  for (const id of nodeIds) {
    nodes.set(id, {
      id,
      x: width * (0.15 + 0.7 * hash01(id, 1)),
      y: height * (0.15 + 0.7 * hash01(id, 2)),
      vx: 0,
      vy: 0,
    });
  }
  const list = [...nodes.values()];
  const edges = links
    .map((l) => [nodes.get(l.source), nodes.get(l.target)] as const)
    .filter((pair): pair is readonly [LayoutNode, LayoutNode] => !!pair[0] && !!pair[1]);

  for (let tick = 0; tick < ticks; tick++) {
    const cooling = 1 - tick / ticks;
    for (let i = 0; i < list.length; i++) {
      for (let j = i + 1; j < list.length; j++) {
        const a = list[i];
        const b = list[j];
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let d2 = dx * dx + dy * dy;
        if (d2 < 1) {
          // coincident nodes: split deterministically
          dx = 0.5 + hash01(a.id + b.id, 3);
          dy = 0.5;
          d2 = dx * dx + dy * dy;
        }
        const force = (repulsion / d2) * cooling;
        const d = Math.sqrt(d2);
        const fx = (dx / d) * force;
        const fy = (dy / d) * force;
        a.vx += fx;
        a.vy += fy;
        b.vx -= fx;
        b.vy -= fy;
      }
    }
    for (const [a, b] of edges) {
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(1, Math.sqrt(dx * dx + dy * dy));
      const force = ((d - linkDistance) / d) * 0.05 * cooling;
      a.vx += dx * force;
      a.vy += dy * force;
      b.vx -= dx * force;
      b.vy -= dy * force;
    }
    for (const node of list) {
      node.vx += (width / 2 - node.x) * 0.002 * cooling;
      node.vy += (height / 2 - node.y) * 0.002 * cooling;
      node.x += Math.max(-12, Math.min(12, node.vx));
      node.y += Math.max(-12, Math.min(12, node.vy));
      node.vx *= 0.6;
      node.vy *= 0.6;
      node.x = Math.max(16, Math.min(width - 16, node.x));
      node.y = Math.max(16, Math.min(height - 16, node.y));
    }
  }
  return nodes;
}
