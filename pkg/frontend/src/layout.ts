import type { Edge } from "./types.js";

export interface NodePosition {
  id: number;
  layer: number;
  x: number;
  y: number;
}

export interface DagLayout {
  positions: NodePosition[];
  width: number;
  height: number;
}

/** Deterministic topological order: repeatedly take the smallest-id node
 * with no remaining incoming edges.  Throws on cyclic input; every graph
 * displayed by the explorer is a DAG. */
export function topologicalOrder(d: number, edges: Edge[]): number[] {
  const indegree = Array(d).fill(0);
  const successors: number[][] = Array.from({ length: d }, () => []);
  for (const [u, w] of edges) {
    indegree[w] += 1;
    successors[u].push(w);
  }
  const ready: number[] = [];
  for (let v = 0; v < d; v++) if (indegree[v] === 0) ready.push(v);
  const order: number[] = [];
  while (ready.length > 0) {
    ready.sort((a, b) => a - b);
    const u = ready.shift()!;
    order.push(u);
    for (const w of successors[u]) {
      indegree[w] -= 1;
      if (indegree[w] === 0) ready.push(w);
    }
  }
  if (order.length !== d) {
    throw new Error("graph is not acyclic");
  }
  return order;
}

const CELL_W = 110;
const CELL_H = 70;
const MARGIN = 40;

/** Layered layout: a node's layer is the longest path from any source
 * (computed in topological order), x is its rank within the layer by id.
 * Purely a function of the edge set, so identical graphs always render
 * identically. */
export function layeredLayout(d: number, edges: Edge[]): DagLayout {
  const order = topologicalOrder(d, edges);
  const layer = Array(d).fill(0);
  for (const u of order) {
    for (const [a, b] of edges) {
      if (a === u) layer[b] = Math.max(layer[b], layer[u] + 1);
    }
  }
  const byLayer = new Map<number, number[]>();
  for (let v = 0; v < d; v++) {
    const list = byLayer.get(layer[v]) ?? [];
    list.push(v);
    byLayer.set(layer[v], list);
  }
  const layerCount = Math.max(...layer) + 1;
  const widest = Math.max(...[...byLayer.values()].map((l) => l.length));
  const positions: NodePosition[] = [];
  for (const [ly, nodes] of [...byLayer.entries()].sort((a, b) => a[0] - b[0])) {
    nodes.sort((a, b) => a - b);
    nodes.forEach((v, rank) => {
      positions.push({
        id: v,
        layer: ly,
        x: MARGIN + rank * CELL_W + (widest - nodes.length) * (CELL_W / 2),
        y: MARGIN + ly * CELL_H,
      });
    });
  }
  positions.sort((a, b) => a.id - b.id);
  return {
    positions,
    width: MARGIN * 2 + (widest - 1) * CELL_W + 60,
    height: MARGIN * 2 + (layerCount - 1) * CELL_H + 20,
  };
}

/** Standalone SVG for one DAG; string output keeps this testable without a
 * DOM. */
export function dagSvg(d: number, edges: Edge[], names: string[]): string {
  const layout = layeredLayout(d, edges);
  const pos = new Map(layout.positions.map((p) => [p.id, p]));
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${layout.width} ${layout.height}" ` +
      `width="${layout.width}" height="${layout.height}">`,
  );
  parts.push(
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" ` +
      `markerHeight="7" orient="auto-start-reverse">` +
      `<path d="M 0 0 L 10 5 L 0 10 z" fill="#445"/></marker></defs>`,
  );
  for (const [u, w] of [...edges].sort((a, b) => a[0] - b[0] || a[1] - b[1])) {
    const a = pos.get(u)!;
    const b = pos.get(w)!;
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const len = Math.hypot(dx, dy) || 1;
    const r = 16;
    const x1 = a.x + (dx / len) * r;
    const y1 = a.y + (dy / len) * r;
    const x2 = b.x - (dx / len) * (r + 3);
    const y2 = b.y - (dy / len) * (r + 3);
    parts.push(
      `<line x1="${x1.toFixed(1)}" y1="${y1.toFixed(1)}" x2="${x2.toFixed(1)}" ` +
        `y2="${y2.toFixed(1)}" stroke="#445" stroke-width="1.6" marker-end="url(#arrow)"/>`,
    );
  }
  for (const p of layout.positions) {
    parts.push(
      `<circle cx="${p.x}" cy="${p.y}" r="16" fill="#eef2ff" stroke="#556"/>` +
        `<text x="${p.x}" y="${p.y + 4}" text-anchor="middle" font-size="11">` +
        `${escapeXml(names[p.id] ?? String(p.id))}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

function escapeXml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
