import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { ConstraintSet, FilterResponse, Meta } from "./types.js";
import { cloneConstraints, constraintsEqual, emptyConstraints } from "./types.js";

/** One history entry: a constraint set together with the server's answer
 * for it.  Counts and frequencies are always server-computed; the client
 * never recomputes them for display. */
export interface Snapshot {
  constraints: ConstraintSet;
  response: FilterResponse;
}

export interface SessionOptions {
  sampleN?: number;
  seed?: number;
}

/** Client-side state for the narrowing loop: the active constraint set, the
 * latest server response, an undo/redo history of snapshots, and a sequence
 * number that discards stale responses when requests overlap. */
export class SessionModel {
  readonly meta: Meta;
  private history: Snapshot[] = [];
  private cursor = -1; // index of the active snapshot
  private requestSeq = 0;
  private appliedSeq = 0;
  lastError: string | null = null;

  private constructor(
    private readonly api: ApiClient,
    meta: Meta,
    private readonly options: Required<SessionOptions>,
  ) {
    this.meta = meta;
  }

  static async connect(api: ApiClient, options: SessionOptions = {}): Promise<SessionModel> {
    const resolved = { sampleN: options.sampleN ?? 3, seed: options.seed ?? 0 };
    const session = new SessionModel(api, await api.meta(), resolved);
    await session.applyConstraints(emptyConstraints());
    return session;
  }

  get constraints(): ConstraintSet {
    return cloneConstraints(this.history[this.cursor].constraints);
  }

  get response(): FilterResponse {
    return this.history[this.cursor].response;
  }

  get count(): number {
    return this.response.count;
  }

  get canUndo(): boolean {
    return this.cursor > 0;
  }

  get canRedo(): boolean {
    return this.cursor < this.history.length - 1;
  }

  /** POST the constraint set; on success push a snapshot (dropping any redo
   * tail), on failure keep the current state and surface the message.
   * Responses arriving out of order are discarded by sequence number. */
  async applyConstraints(next: ConstraintSet): Promise<boolean> {
    const constraints = cloneConstraints(next);
    const seq = ++this.requestSeq;
    try {
      const response = await this.api.filter(constraints, this.options.sampleN, this.options.seed);
      if (seq <= this.appliedSeq) {
        return false; // a newer request already landed
      }
      this.appliedSeq = seq;
      this.history = this.history.slice(0, this.cursor + 1);
      this.history.push({ constraints, response });
      this.cursor = this.history.length - 1;
      this.lastError = null;
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        this.lastError =
          error.status === 409 ? `contradictory constraints: ${error.message}` : error.message;
        return false;
      }
      throw error;
    }
  }

  /** Convenience edits; each round-trips through the server. */
  async addSink(id: number): Promise<boolean> {
    const c = this.constraints;
    if (!c.sinks.includes(id)) c.sinks.push(id);
    return this.applyConstraints(c);
  }

  async requireEdge(from: number, to: number): Promise<boolean> {
    const c = this.constraints;
    if (!c.required_edges.some((e) => e[0] === from && e[1] === to)) {
      c.required_edges.push([from, to]);
    }
    return this.applyConstraints(c);
  }

  async forbidEdge(from: number, to: number): Promise<boolean> {
    const c = this.constraints;
    if (!c.forbidden_edges.some((e) => e[0] === from && e[1] === to)) {
      c.forbidden_edges.push([from, to]);
    }
    return this.applyConstraints(c);
  }

  async clearConstraints(): Promise<boolean> {
    return this.applyConstraints(emptyConstraints());
  }

  /** Step back to the previous snapshot; state is restored exactly (deep
   * equality), without a server round-trip. */
  undo(): boolean {
    if (!this.canUndo) return false;
    this.cursor -= 1;
    this.lastError = null;
    return true;
  }

  redo(): boolean {
    if (!this.canRedo) return false;
    this.cursor += 1;
    this.lastError = null;
    return true;
  }

  /** Jump to an arbitrary history index (0 is the unconstrained root). */
  jumpTo(index: number): boolean {
    if (index < 0 || index >= this.history.length) return false;
    this.cursor = index;
    this.lastError = null;
    return true;
  }

  get historyLength(): number {
    return this.history.length;
  }

  get historyIndex(): number {
    return this.cursor;
  }

  /** True when the active snapshot's constraints deep-equal the given set. */
  matches(c: ConstraintSet): boolean {
    return constraintsEqual(this.constraints, c);
  }
}
