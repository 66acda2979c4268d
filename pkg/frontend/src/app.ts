/** The studio UI: operator palette, node canvas, slot autocompletion, run &
 * inspect. Rendering is plain DOM + an SVG edge layer; the graph model owns
 * all program logic. */

import { ApiClient, ApiError, NetworkError } from "./api";
import { CanvasGraph } from "./graph";
import type { MetaResponse, OperatorMeta } from "./types";

export interface AppOptions {
  /** Asked before a parse replaces an edited canvas. */
  confirmReplace?: () => boolean;
}

export class StudioApp {
  graph: CanvasGraph;
  /** Resolves when the most recent async action settles; tests await this. */
  busy: Promise<void> = Promise.resolve();

  selectedId: string | null = null;
  linkingFrom: string | null = null;
  private byIndex: string[] = [];
  private running = false;
  private confirmReplace: () => boolean;

  private canvasEl!: HTMLElement;
  private edgesEl!: SVGSVGElement;
  private questionEl!: HTMLInputElement;
  private parseBtn!: HTMLButtonElement;
  private runBtn!: HTMLButtonElement;
  private bannerEl!: HTMLElement;
  private noticeEl!: HTMLElement;

  constructor(
    private rootEl: HTMLElement,
    private api: ApiClient,
    public meta: MetaResponse,
    options: AppOptions = {},
  ) {
    this.confirmReplace =
      options.confirmReplace ??
      (() => (typeof window !== "undefined" && window.confirm ? window.confirm("Replace the edited program?") : true));
    this.graph = new CanvasGraph(meta.operators);
    this.buildShell();
    this.render();
  }

  // -- shell -----------------------------------------------------------------

  private buildShell(): void {
    this.rootEl.innerHTML = `
      <div class="studio">
        <header class="toolbar">
          <input class="question" placeholder="Ask a question about the knowledge base…">
          <button class="parse-btn">Parse</button>
          <button class="run-btn">Run</button>
          <span class="answer-banner" hidden></span>
          <span class="notice" hidden></span>
        </header>
        <div class="studio-body">
          <aside class="palette"></aside>
          <main class="canvas-wrap">
            <svg class="edges"></svg>
            <div class="canvas"></div>
          </main>
        </div>
      </div>`;
    this.canvasEl = this.rootEl.querySelector(".canvas")!;
    this.edgesEl = this.rootEl.querySelector(".edges")!;
    this.questionEl = this.rootEl.querySelector(".question")!;
    this.parseBtn = this.rootEl.querySelector(".parse-btn")!;
    this.runBtn = this.rootEl.querySelector(".run-btn")!;
    this.bannerEl = this.rootEl.querySelector(".answer-banner")!;
    this.noticeEl = this.rootEl.querySelector(".notice")!;

    this.buildPalette();
    this.parseBtn.addEventListener("click", () => this.track(this.parseQuestion()));
    this.runBtn.addEventListener("click", () => this.track(this.run()));

    const wrap = this.rootEl.querySelector<HTMLElement>(".canvas-wrap")!;
    wrap.addEventListener("dragover", (event) => event.preventDefault());
    wrap.addEventListener("drop", (event) => {
      event.preventDefault();
      const op = (event as DragEvent).dataTransfer?.getData("text/op") || this.dragOp;
      this.dragOp = null;
      if (!op) return;
      const rect = wrap.getBoundingClientRect();
      const node = this.graph.addNode(
        op,
        Math.max(8, ((event as DragEvent).clientX || 0) - rect.left),
        Math.max(8, ((event as DragEvent).clientY || 0) - rect.top),
      );
      this.selectedId = node.id;
      this.render();
    });

    this.rootEl.ownerDocument.addEventListener("keydown", (event) => {
      if (event.key !== "Backspace") return;
      const target = event.target as HTMLElement | null;
      if (target && ("value" in target || target.isContentEditable)) return;
      if (!this.selectedId) return;
      this.graph.deleteNode(this.selectedId);
      this.selectedId = null;
      this.render();
    });
  }

  private dragOp: string | null = null;

  private buildPalette(): void {
    const palette = this.rootEl.querySelector(".palette")!;
    const byCategory = new Map<string, OperatorMeta[]>();
    for (const op of this.meta.operators) {
      byCategory.set(op.category, [...(byCategory.get(op.category) ?? []), op]);
    }
    for (const [category, ops] of byCategory) {
      const heading = document.createElement("h3");
      heading.textContent = category;
      palette.appendChild(heading);
      for (const op of ops) {
        const button = document.createElement("button");
        button.className = "palette-op";
        button.textContent = op.name;
        button.dataset.op = op.name;
        button.draggable = true;
        button.title = `${op.name}(${op.args.map((a) => a.name).join(", ")}) — ${op.dependencies.length} input(s)`;
        button.addEventListener("dragstart", (event) => {
          this.dragOp = op.name;
          (event as DragEvent).dataTransfer?.setData("text/op", op.name);
        });
        button.addEventListener("dblclick", () => {
          const node = this.graph.addNode(op.name, 24 + this.graph.nodes.size * 12, 24 + this.graph.nodes.size * 12);
          this.selectedId = node.id;
          this.render();
        });
        palette.appendChild(button);
      }
    }
  }

  private track(work: Promise<void>): void {
    this.busy = work.catch((err) => this.showNotice(`unexpected failure: ${err}`, false));
  }

  // -- flows -------------------------------------------------------------------

  async parseQuestion(): Promise<void> {
    const question = this.questionEl.value.trim();
    if (!question) {
      this.showNotice("type a question first", false);
      return;
    }
    if (this.graph.dirty && this.graph.nodes.size > 0 && !this.confirmReplace()) return;
    this.showBanner(null);
    try {
      const { program } = await this.api.parseQuestion(question);
      this.graph.loadProgram(program);
      this.selectedId = null;
      this.showNotice(null);
    } catch (err) {
      this.graph.loadProgram([]);
      if (err instanceof ApiError && err.body.code === "parse_error") {
        this.showNotice("could not parse the question — build the program on the blank canvas", false);
      } else if (err instanceof NetworkError) {
        this.showNotice("backend unreachable — check the server and retry", true);
      } else {
        throw err;
      }
    }
    this.render();
  }

  async run(): Promise<void> {
    if (this.runBtn.disabled || this.running) return;
    const { program, byIndex } = this.graph.serialize();
    this.byIndex = byIndex;
    this.running = true;
    this.graph.clearMarks();
    this.render();
    try {
      const result = await this.api.run(program, true);
      this.graph.applyTrace(result.trace ?? [], byIndex);
      this.showBanner(result.answer);
      this.showNotice(null);
    } catch (err) {
      this.showBanner(null);
      if (err instanceof ApiError && err.body.code === "validation_error") {
        for (const diagnostic of err.body.diagnostics ?? []) {
          if (diagnostic.severity !== "error") continue;
          const id = this.byIndex[diagnostic.node];
          const node = id ? this.graph.nodes.get(id) : undefined;
          if (node) node.error = diagnostic.message;
        }
        this.showNotice("the program is not valid — the offending operators are highlighted", false);
      } else if (err instanceof ApiError && err.body.code === "runtime_error") {
        const id = this.byIndex[err.body.node_index ?? -1];
        const node = id ? this.graph.nodes.get(id) : undefined;
        if (node) node.error = err.body.message;
        this.showNotice(`execution failed: ${err.body.message}`, false);
      } else if (err instanceof NetworkError) {
        this.showNotice("backend unreachable — retry", true);
      } else {
        throw err;
      }
    } finally {
      this.running = false;
      this.render();
    }
  }

  // -- rendering ----------------------------------------------------------------

  private showBanner(answer: string | null): void {
    this.bannerEl.hidden = answer === null;
    this.bannerEl.textContent = answer === null ? "" : `Answer: ${answer}`;
  }

  private showNotice(text: string | null, retryable = false): void {
    this.noticeEl.hidden = text === null;
    this.noticeEl.textContent = text ?? "";
    this.noticeEl.classList.toggle("retryable", retryable);
  }

  render(): void {
    const problems = this.graph.arityProblems();
    const problemByNode = new Map<string, string>();
    for (const problem of problems) {
      if (problem.nodeId && !problemByNode.has(problem.nodeId)) {
        problemByNode.set(problem.nodeId, problem.message);
      }
    }
    this.runBtn.disabled = this.running || problems.length > 0;
    this.runBtn.title = problems.length ? problems.map((p) => p.message).join("\n") : "Run the program";

    this.canvasEl.textContent = "";
    for (const node of this.graph.nodes.values()) {
      this.canvasEl.appendChild(this.renderNode(node.id, problemByNode.get(node.id) ?? null));
    }
    this.renderEdges();
  }

  private renderNode(id: string, problem: string | null): HTMLElement {
    const node = this.graph.nodes.get(id)!;
    const meta = this.graph.operator(node.op);
    const card = document.createElement("div");
    card.className = "node";
    card.dataset.id = id;
    card.dataset.op = node.op;
    card.style.left = `${node.x}px`;
    card.style.top = `${node.y}px`;
    card.classList.toggle("selected", this.selectedId === id);
    card.classList.toggle("invalid", problem !== null);
    card.classList.toggle("errored", node.error !== null);
    if (problem) card.title = problem;

    const head = document.createElement("div");
    head.className = "node-head";
    head.textContent = node.op;
    if (node.trace) {
      const badge = document.createElement("span");
      badge.className = "badge";
      badge.textContent = String(node.trace.count);
      badge.title = `${node.trace.kind}, ${node.trace.count} item(s)`;
      head.appendChild(badge);
    }
    head.addEventListener("click", () => {
      this.selectedId = this.selectedId === id ? null : id;
      this.render();
    });
    card.appendChild(head);

    const portsIn = document.createElement("div");
    portsIn.className = "ports-in";
    meta.dependencies.forEach((label, port) => {
      const portBtn = document.createElement("button");
      portBtn.className = "port-in";
      portBtn.dataset.port = String(port);
      portBtn.title = `input ${port + 1}: ${label}`;
      portBtn.textContent = "◦";
      const wired = this.graph.dependenciesOf(id)[port] !== null;
      portBtn.classList.toggle("wired", wired);
      portBtn.addEventListener("click", () => {
        if (this.linkingFrom && this.linkingFrom !== id) {
          this.graph.connect(this.linkingFrom, id, port);
          this.linkingFrom = null;
          this.render();
        } else if (wired) {
          this.graph.disconnect(id, port);
          this.render();
        }
      });
      portsIn.appendChild(portBtn);
    });
    card.appendChild(portsIn);

    const portOut = document.createElement("button");
    portOut.className = "port-out";
    portOut.title = `output: ${meta.output}`;
    portOut.textContent = "●";
    portOut.classList.toggle("linking", this.linkingFrom === id);
    portOut.addEventListener("click", () => {
      this.linkingFrom = this.linkingFrom === id ? null : id;
      this.render();
    });
    card.appendChild(portOut);

    const slots = document.createElement("div");
    slots.className = "slots";
    meta.args.forEach((slot, index) => {
      slots.appendChild(this.renderSlot(id, index, slot.name, slot.complete, slot.choices));
    });
    card.appendChild(slots);

    if (node.error) {
      const errorEl = document.createElement("div");
      errorEl.className = "node-error";
      errorEl.textContent = node.error;
      card.appendChild(errorEl);
    }

    if (node.trace) {
      const details = document.createElement("details");
      details.className = "preview";
      const summary = document.createElement("summary");
      summary.textContent = `${node.trace.count} result(s)`;
      details.appendChild(summary);
      const list = document.createElement("ul");
      for (const item of node.trace.preview) {
        const li = document.createElement("li");
        li.textContent = item;
        list.appendChild(li);
      }
      details.appendChild(list);
      card.appendChild(details);
    }
    return card;
  }

  private renderSlot(
    id: string,
    index: number,
    name: string,
    completeKind: string | undefined,
    choices: string[] | undefined,
  ): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "slot";
    const label = document.createElement("label");
    label.textContent = name;
    wrap.appendChild(label);
    const value = this.graph.nodes.get(id)!.slots[index] ?? "";

    if (choices) {
      const select = document.createElement("select");
      select.className = "slot-input";
      select.dataset.slot = String(index);
      const blank = document.createElement("option");
      blank.value = "";
      blank.textContent = "—";
      select.appendChild(blank);
      for (const choice of choices) {
        const option = document.createElement("option");
        option.value = choice;
        option.textContent = choice;
        select.appendChild(option);
      }
      select.value = value;
      select.addEventListener("change", () => {
        this.graph.setSlot(id, index, select.value);
        this.refreshRunGate();
      });
      wrap.appendChild(select);
      return wrap;
    }

    const input = document.createElement("input");
    input.className = "slot-input";
    input.dataset.slot = String(index);
    input.value = value;
    input.addEventListener("input", () => {
      this.graph.setSlot(id, index, input.value);
      this.refreshRunGate();
      if (completeKind) this.track(this.openDropdown(wrap, input, id, index, completeKind));
    });
    input.addEventListener("focus", () => {
      if (completeKind) this.track(this.openDropdown(wrap, input, id, index, completeKind));
    });
    wrap.appendChild(input);
    return wrap;
  }

  /** Fetch candidates for a schema-backed slot and show them under the input. */
  private async openDropdown(
    wrap: HTMLElement,
    input: HTMLInputElement,
    id: string,
    index: number,
    kind: string,
  ): Promise<void> {
    wrap.querySelector(".dropdown")?.remove();
    let candidates: string[];
    try {
      candidates = await this.api.complete(kind, input.value, 8);
    } catch {
      return; // completion is best-effort
    }
    wrap.querySelector(".dropdown")?.remove();
    if (!candidates.length) return;
    const dropdown = document.createElement("ul");
    dropdown.className = "dropdown";
    for (const candidate of candidates) {
      const item = document.createElement("li");
      item.textContent = candidate;
      item.addEventListener("mousedown", () => {
        this.graph.setSlot(id, index, candidate);
        input.value = candidate;
        dropdown.remove();
        this.refreshRunGate();
      });
      dropdown.appendChild(item);
    }
    wrap.appendChild(dropdown);
  }

  /** Cheap partial refresh while typing: only the Run gate, no re-render. */
  private refreshRunGate(): void {
    const problems = this.graph.arityProblems();
    this.runBtn.disabled = this.running || problems.length > 0;
  }

  private renderEdges(): void {
    this.edgesEl.textContent = "";
    const ns = "http://www.w3.org/2000/svg";
    for (const edge of this.graph.edges) {
      const from = this.graph.nodes.get(edge.from);
      const to = this.graph.nodes.get(edge.to);
      if (!from || !to) continue;
      const path = document.createElementNS(ns, "path");
      const x1 = from.x + 160;
      const y1 = from.y + 24;
      const x2 = to.x;
      const y2 = to.y + 24 + edge.port * 14;
      const bend = Math.max(30, (x2 - x1) / 2);
      path.setAttribute("d", `M ${x1} ${y1} C ${x1 + bend} ${y1}, ${x2 - bend} ${y2}, ${x2} ${y2}`);
      path.setAttribute("class", "edge");
      this.edgesEl.appendChild(path);
    }
  }
}

export async function createApp(
  rootEl: HTMLElement,
  baseUrl: string,
  options: AppOptions = {},
): Promise<StudioApp> {
  const api = new ApiClient(baseUrl);
  const meta = await api.meta();
  return new StudioApp(rootEl, api, meta, options);
}
