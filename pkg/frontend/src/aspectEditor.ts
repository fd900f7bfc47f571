/** Keyword editor used when continuing with an edited aspect.
 *
 * The editor always produces a complete replacement payload (label plus
 * every entry); the server does no diffing.
 */

import type { AspectPayload } from "./api.js";

export class AspectEditor {
  readonly element: HTMLElement;
  private readonly labelInput: HTMLInputElement;
  private readonly rowsBody: HTMLTableSectionElement;

  constructor(initial: AspectPayload) {
    this.element = document.createElement("div");
    this.element.className = "aspect-editor";

    const labelField = document.createElement("label");
    labelField.textContent = "aspect label ";
    this.labelInput = document.createElement("input");
    this.labelInput.className = "aspect-label";
    this.labelInput.value = initial.label;
    labelField.appendChild(this.labelInput);
    this.element.appendChild(labelField);

    const table = document.createElement("table");
    const head = table.createTHead().insertRow();
    for (const text of ["term", "weight", ""]) {
      const th = document.createElement("th");
      th.textContent = text;
      head.appendChild(th);
    }
    this.rowsBody = table.createTBody();
    this.element.appendChild(table);

    for (const [term, weight] of initial.entries) {
      this.addRow(term, String(weight));
    }

    const add = document.createElement("button");
    add.type = "button";
    add.className = "aspect-add";
    add.textContent = "add keyword";
    add.addEventListener("click", () => this.addRow("", "1"));
    this.element.appendChild(add);
  }

  addRow(term: string, weight: string): void {
    const tr = this.rowsBody.insertRow();
    const termCell = tr.insertCell();
    const termInput = document.createElement("input");
    termInput.className = "aspect-term";
    termInput.value = term;
    termCell.appendChild(termInput);

    const weightCell = tr.insertCell();
    const weightInput = document.createElement("input");
    weightInput.className = "aspect-weight";
    weightInput.value = weight;
    weightCell.appendChild(weightInput);

    const removeCell = tr.insertCell();
    const remove = document.createElement("button");
    remove.type = "button";
    remove.className = "aspect-remove";
    remove.textContent = "remove";
    remove.addEventListener("click", () => tr.remove());
    removeCell.appendChild(remove);
  }

  setWeight(term: string, weight: number): boolean {
    for (const row of Array.from(this.rowsBody.querySelectorAll("tr"))) {
      const termInput = row.querySelector<HTMLInputElement>(".aspect-term");
      const weightInput = row.querySelector<HTMLInputElement>(".aspect-weight");
      if (termInput && weightInput && termInput.value === term) {
        weightInput.value = String(weight);
        return true;
      }
    }
    return false;
  }

  /** Full replacement payload; rows with blank terms or non-finite
   * weights are dropped. */
  value(): { label: string; entries: [string, number][] } {
    const entries: [string, number][] = [];
    for (const row of Array.from(this.rowsBody.querySelectorAll("tr"))) {
      const term = row.querySelector<HTMLInputElement>(".aspect-term")?.value.trim() ?? "";
      const weight = Number(row.querySelector<HTMLInputElement>(".aspect-weight")?.value);
      if (term && Number.isFinite(weight) && weight >= 0) {
        entries.push([term, weight]);
      }
    }
    return { label: this.labelInput.value, entries };
  }

  setLabel(label: string): void {
    this.labelInput.value = label;
  }
}
