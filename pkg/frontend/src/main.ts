import { httpClient } from "./api.js";
import { heatmapCells } from "./heatmap.js";
import { dagSvg } from "./layout.js";
import { SessionModel } from "./session.js";
import type { ConstraintSet } from "./types.js";

/** Server base URL: ?server=... overrides, default is the page's origin. */
function serverUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("server");
  return fromQuery ?? window.location.origin;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function describeConstraints(c: ConstraintSet, names: string[]): string[] {
  const chips: string[] = [];
  for (const v of c.sinks) chips.push(`sink: ${names[v]}`);
  for (const [u, w] of c.required_edges) chips.push(`require: ${names[u]} → ${names[w]}`);
  for (const [u, w] of c.forbidden_edges) chips.push(`forbid: ${names[u]} → ${names[w]}`);
  for (const [i, j] of c.required_absent_pairs) chips.push(`no edge: ${names[i]} – ${names[j]}`);
  return chips;
}

class App {
  private root: HTMLElement;

  constructor(
    private readonly session: SessionModel,
  ) {
    this.root = document.getElementById("app")!;
  }

  render(): void {
    const names = this.session.meta.names;
    this.root.replaceChildren();

    const header = el("header");
    header.append(
      el("h1", undefined, "Solution explorer"),
      el(
        "p",
        "meta",
        `${this.session.meta.solution_count} enumerated DAGs, minimum cost ` +
          `${this.session.meta.c_star ?? "unknown"}, budget ${this.session.meta.budget}`,
      ),
    );
    this.root.append(header);

    if (this.session.lastError) {
      this.root.append(el("div", "error", this.session.lastError));
    }

    const countLine = el("div", "count", `${this.session.count} DAGs match`);
    this.root.append(countLine);

    // history / undo controls
    const controls = el("div", "controls");
    const undoBtn = el("button", undefined, "undo");
    undoBtn.disabled = !this.session.canUndo;
    undoBtn.onclick = () => {
      this.session.undo();
      this.render();
    };
    const redoBtn = el("button", undefined, "redo");
    redoBtn.disabled = !this.session.canRedo;
    redoBtn.onclick = () => {
      this.session.redo();
      this.render();
    };
    const clearBtn = el("button", undefined, "clear constraints");
    clearBtn.onclick = () => {
      void this.session.clearConstraints().then(() => this.render());
    };
    controls.append(undoBtn, redoBtn, clearBtn);
    this.root.append(controls);

    // active constraints
    const chipRow = el("div", "chips");
    const chips = describeConstraints(this.session.constraints, names);
    if (chips.length === 0) chipRow.append(el("span", "chip muted", "no constraints"));
    for (const text of chips) chipRow.append(el("span", "chip", text));
    this.root.append(chipRow);

    // sink picker
    const sinkRow = el("div", "sinks");
    sinkRow.append(el("span", undefined, "mark sink: "));
    names.forEach((name, id) => {
      const button = el("button", "small", name);
      button.onclick = () => {
        void this.session.addSink(id).then(() => this.render());
      };
      sinkRow.append(button);
    });
    this.root.append(sinkRow);

    // frequency heatmap (server-computed values only)
    const freq = this.session.response.frequencies;
    if (freq === null) {
      this.root.append(el("p", "empty", "No DAG satisfies the active constraints."));
    } else {
      this.root.append(this.heatmap(freq, names));
    }

    // sampled solutions
    const samples = this.session.response.samples;
    if (samples.length > 0) {
      const sampleHeader = el("h2", undefined, `sampled solutions (${samples.length})`);
      this.root.append(sampleHeader);
      const row = el("div", "samples");
      for (const sample of samples) {
        const card = el("figure", "sample");
        card.innerHTML = dagSvg(names.length, sample.edges, names);
        card.append(el("figcaption", undefined, `#${sample.index} (cost ${sample.cost})`));
        row.append(card);
      }
      this.root.append(row);
    }
  }

  private heatmap(freq: number[][], names: string[]): HTMLElement {
    const d = names.length;
    const table = el("table", "heatmap");
    const head = el("tr");
    head.append(el("th"));
    for (const name of names) head.append(el("th", undefined, name));
    table.append(head);
    const cells = heatmapCells(freq, names);
    const byKey = new Map(cells.map((c) => [`${c.from}:${c.to}`, c]));
    for (let i = 0; i < d; i++) {
      const tr = el("tr");
      tr.append(el("th", undefined, names[i]));
      for (let j = 0; j < d; j++) {
        const td = el("td");
        if (i !== j) {
          const cell = byKey.get(`${i}:${j}`)!;
          td.style.background = cell.color;
          td.title = cell.label;
          td.textContent = cell.value === 0 ? "" : cell.value.toFixed(2);
          td.onclick = () => this.cellMenu(cell.from, cell.to, cell.label);
        } else {
          td.className = "diag";
        }
        tr.append(td);
      }
      table.append(tr);
    }
    return table;
  }

  /** Click on a cell offers require / forbid for that directed pair. */
  private cellMenu(from: number, to: number, label: string): void {
    const names = this.session.meta.names;
    const choice = window.prompt(
      `${label}\n1 = require ${names[from]} → ${names[to]}, 2 = forbid it`,
      "1",
    );
    if (choice === "1") {
      void this.session.requireEdge(from, to).then(() => this.render());
    } else if (choice === "2") {
      void this.session.forbidEdge(from, to).then(() => this.render());
    }
  }
}

async function start(): Promise<void> {
  const root = document.getElementById("app")!;
  try {
    const session = await SessionModel.connect(httpClient(serverUrl()), { sampleN: 3, seed: 0 });
    new App(session).render();
  } catch (error) {
    root.textContent = `failed to reach the result service: ${String(error)}`;
  }
}

void start();
