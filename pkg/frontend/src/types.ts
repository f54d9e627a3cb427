/** Shared wire and model types for the explorer. */

export type Edge = [number, number];

/** Conjunctive constraints, mirroring the server's constraint schema. */
export interface ConstraintSet {
  sinks: number[];
  required_edges: Edge[];
  forbidden_edges: Edge[];
  required_absent_pairs: Edge[];
}

export interface Meta {
  names: string[];
  solution_count: number;
  c_star: number | null;
  budget: number;
}

export interface SolutionSample {
  index: number;
  cost: number;
  edges: Edge[];
}

export interface FilterResponse {
  count: number;
  frequencies: number[][] | null;
  samples: SolutionSample[];
  seed: number;
}

export function emptyConstraints(): ConstraintSet {
  return { sinks: [], required_edges: [], forbidden_edges: [], required_absent_pairs: [] };
}

/** Canonical deep copy used for history snapshots. */
export function cloneConstraints(c: ConstraintSet): ConstraintSet {
  return {
    sinks: [...c.sinks].sort((a, b) => a - b),
    required_edges: sortEdges(c.required_edges),
    forbidden_edges: sortEdges(c.forbidden_edges),
    required_absent_pairs: sortEdges(c.required_absent_pairs),
  };
}

export function sortEdges(edges: Edge[]): Edge[] {
  return edges
    .map((e): Edge => [e[0], e[1]])
    .sort((a, b) => a[0] - b[0] || a[1] - b[1]);
}

export function constraintsEqual(a: ConstraintSet, b: ConstraintSet): boolean {
  return JSON.stringify(cloneConstraints(a)) === JSON.stringify(cloneConstraints(b));
}
