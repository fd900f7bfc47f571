/** The parameter-sweep screen: enter alpha and lambda grids, render the
 * topic-by-pair table with the server's per-pair top-n selections
 * highlighted. Grid values are validated client-side; the server's
 * validation is the backstop. Cell values come straight from the
 * payload (`data-value`), blanks mean the topic left the top n.
 */

import type { GatewayClient, SweepPayload } from "./api.js";

export function parseGrid(text: string): number[] | null {
  const parts = text.split(",").map((p) => p.trim()).filter((p) => p.length > 0);
  if (parts.length === 0) {
    return null;
  }
  const values = parts.map(Number);
  return values.every((v) => Number.isFinite(v)) ? values : null;
}

export class SweepScreen {
  readonly element: HTMLElement;
  readonly alphasInput: HTMLInputElement;
  readonly lambdasInput: HTMLInputElement;
  readonly submit: HTMLButtonElement;
  private readonly tableHost: HTMLElement;
  lastPayload: SweepPayload | null = null;

  constructor(
    private readonly client: GatewayClient,
    private readonly sessionId: string,
  ) {
    this.element = document.createElement("div");
    this.element.className = "sweep-screen";

    const form = document.createElement("form");
    form.className = "sweep-form";

    this.alphasInput = document.createElement("input");
    this.alphasInput.className = "sweep-alphas";
    this.alphasInput.placeholder = "alphas, e.g. 0.1,0.2";
    this.lambdasInput = document.createElement("input");
    this.lambdasInput.className = "sweep-lambdas";
    this.lambdasInput.placeholder = "lambdas, e.g. 0.5,1.5";
    this.submit = document.createElement("button");
    this.submit.type = "submit";
    this.submit.className = "sweep-submit";
    this.submit.textContent = "run sweep";
    this.submit.disabled = true;

    const revalidate = () => {
      this.submit.disabled =
        parseGrid(this.alphasInput.value) === null ||
        parseGrid(this.lambdasInput.value) === null;
    };
    this.alphasInput.addEventListener("input", revalidate);
    this.lambdasInput.addEventListener("input", revalidate);

    form.appendChild(this.alphasInput);
    form.appendChild(this.lambdasInput);
    form.appendChild(this.submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.run();
    });
    this.element.appendChild(form);

    this.tableHost = document.createElement("div");
    this.tableHost.className = "sweep-table-host";
    this.element.appendChild(this.tableHost);
  }

  async run(): Promise<SweepPayload | null> {
    const alphas = parseGrid(this.alphasInput.value);
    const lambdas = parseGrid(this.lambdasInput.value);
    if (alphas === null || lambdas === null) {
      return null;
    }
    try {
      const payload = await this.client.sweep(this.sessionId, alphas, lambdas);
      this.lastPayload = payload;
      this.renderTable(payload);
      return payload;
    } catch (error) {
      this.tableHost.replaceChildren();
      const box = document.createElement("div");
      box.className = "error-box";
      box.textContent = String(error instanceof Error ? error.message : error);
      this.tableHost.appendChild(box);
      return null;
    }
  }

  private renderTable(payload: SweepPayload): void {
    this.tableHost.replaceChildren();
    const table = document.createElement("table");
    table.className = "sweep-table";

    const head = table.createTHead().insertRow();
    for (const column of payload.columns) {
      const th = document.createElement("th");
      th.textContent = column;
      head.appendChild(th);
    }

    const body = table.createTBody();
    payload.rows.forEach((row) => {
      const tr = body.insertRow();
      const topic = String(row[0]);
      tr.dataset.topic = topic;
      const th = document.createElement("th");
      th.textContent = topic;
      tr.appendChild(th);
      row.slice(1).forEach((cell, p) => {
        const td = tr.insertCell();
        td.className = "sweep-cell";
        td.dataset.value = String(cell);
        td.textContent = String(cell);
        // top-n membership comes from the server's selection list
        if (cell !== "" && payload.selections[p].includes(topic)) {
          td.classList.add("selected");
        }
      });
    });
    this.tableHost.appendChild(table);

    const caption = document.createElement("p");
    caption.className = "sweep-caption";
    caption.textContent =
      `blank cells: topic outside the per-pair top ${payload.top_n}; ` +
      "highlighted cells are the server's selections";
    this.tableHost.appendChild(caption);
  }
}
