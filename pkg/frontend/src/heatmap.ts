import type { Edge } from "./types.js";

/** One heatmap cell: the server-reported fraction of solutions containing
 * the directed edge (row -> column). */
export interface HeatmapCell {
  from: number;
  to: number;
  value: number;
  label: string;
  color: string;
}

export const DISPLAY_DECIMALS = 3;

export function formatFrequency(value: number): string {
  return value.toFixed(DISPLAY_DECIMALS);
}

/** White -> deep blue ramp; input clamped to [0, 1]. */
export function colorFor(value: number): string {
  const v = Math.max(0, Math.min(1, value));
  const light = Math.round(97 - 55 * v);
  return `hsl(215, 85%, ${light}%)`;
}

/** Flatten a frequency matrix into renderable cells (diagonal excluded). */
export function heatmapCells(matrix: number[][], names: string[]): HeatmapCell[] {
  const d = matrix.length;
  const cells: HeatmapCell[] = [];
  for (let i = 0; i < d; i++) {
    if (matrix[i].length !== d) {
      throw new Error(`frequency matrix row ${i} is not square`);
    }
    for (let j = 0; j < d; j++) {
      if (i === j) continue;
      const value = matrix[i][j];
      if (value < 0 || value > 1) {
        throw new Error(`frequency out of range at (${i}, ${j}): ${value}`);
      }
      cells.push({
        from: i,
        to: j,
        value,
        label: `${names[i]} → ${names[j]}: ${formatFrequency(value)}`,
        color: colorFor(value),
      });
    }
  }
  return cells;
}

/** Frequencies recomputed from an explicit solution list; used only by tests
 * to cross-check the server's matrix, never for display. */
export function frequenciesOf(solutionEdges: Edge[][], d: number): number[][] {
  const counts: number[][] = Array.from({ length: d }, () => Array(d).fill(0));
  for (const edges of solutionEdges) {
    for (const [u, w] of edges) {
      counts[u][w] += 1;
    }
  }
  const n = solutionEdges.length;
  return counts.map((row) => row.map((c) => (n === 0 ? 0 : c / n)));
}
