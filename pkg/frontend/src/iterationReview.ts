/** The iteration review screen: selected topics with keywords and Q
 * trajectories, reward breakdown, model-comparison heatmap, document
 * alignment grid, and the continue/stop decision with an aspect editor.
 *
 * All numbers are rendered exactly as received from the gateway
 * (`data-value` attributes carry the payload strings); decision actions
 * are enabled only while the server reports status `awaiting_decision`.
 */

import type {
  BundlePayload,
  DocsimPayload,
  GatewayClient,
  IterationRecord,
  SessionSummary,
} from "./api.js";
import { AspectEditor } from "./aspectEditor.js";
import { renderMatrix } from "./heatmap.js";

export interface ReviewCallbacks {
  onDecision?: (summary: SessionSummary) => void;
  onError?: (error: unknown) => void;
}

function exactCell(row: HTMLTableRowElement, value: number | string, cls: string): void {
  const td = row.insertCell();
  td.className = cls;
  td.dataset.value = String(value);
  td.textContent = String(value);
}

function renderSelectedTopics(record: IterationRecord): HTMLElement {
  const section = document.createElement("section");
  section.className = "selected-topics";
  const heading = document.createElement("h3");
  heading.textContent =
    `iteration ${record.index}: aspect '${record.aspect_label}', ` +
    `selected ${record.selected_topics.join(", ")}`;
  section.appendChild(heading);

  const table = document.createElement("table");
  const head = table.createTHead().insertRow();
  for (const text of [
    "topic", "top keywords (weight)", "q before", "q after",
    "approx reward", "base reward", "modified reward", "max future q",
  ]) {
    const th = document.createElement("th");
    th.textContent = text;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const detail of record.selected_topic_details) {
    const tr = body.insertRow();
    tr.dataset.topic = detail.label;
    const labelCell = tr.insertCell();
    labelCell.className = "topic-label";
    labelCell.textContent = detail.label;

    const kw = tr.insertCell();
    kw.className = "topic-keywords";
    for (const [term, weight] of detail.keywords) {
      const span = document.createElement("span");
      span.className = "keyword";
      span.dataset.term = term;
      span.dataset.value = String(weight);
      span.textContent = `${term} (${String(weight)})`;
      kw.appendChild(span);
      kw.appendChild(document.createTextNode(" "));
    }

    exactCell(tr, detail.q_before, "q-before");
    exactCell(tr, detail.q_after, "q-after");
    exactCell(tr, detail.approx_reward, "approx-reward");
    exactCell(tr, detail.base_reward, "base-reward");
    exactCell(tr, detail.modified_reward, "modified-reward");
    exactCell(tr, record.max_future_q, "max-future-q");
  }
  section.appendChild(table);
  return section;
}

export class IterationReviewScreen {
  readonly element: HTMLElement;
  editor: AspectEditor | null = null;
  summary: SessionSummary | null = null;
  private record: IterationRecord | null = null;

  constructor(
    private readonly client: GatewayClient,
    private readonly sessionId: string,
    private readonly callbacks: ReviewCallbacks = {},
  ) {
    this.element = document.createElement("div");
    this.element.className = "iteration-review";
  }

  /** Fetch the session plus one iteration (latest by default) and render. */
  async load(index?: number): Promise<void> {
    try {
      const summary = await this.client.session(this.sessionId);
      if (summary.iteration_count === 0) {
        this.summary = summary;
        this.element.replaceChildren();
        const note = document.createElement("p");
        note.className = "status-line";
        note.textContent = `status ${summary.status}: no iterations yet`;
        this.element.appendChild(note);
        return;
      }
      const n = index ?? summary.iteration_count;
      const [record, bundle, docsim] = await Promise.all([
        this.client.iteration(this.sessionId, n),
        this.client.heatmap(this.sessionId, n),
        this.client.docsim(this.sessionId, n),
      ]);
      this.summary = summary;
      this.record = record;
      this.render(summary, record, bundle, docsim);
    } catch (error) {
      this.renderError(error);
    }
  }

  private renderError(error: unknown): void {
    this.element.replaceChildren();
    const box = document.createElement("div");
    box.className = "error-box";
    box.textContent = String(error instanceof Error ? error.message : error);
    const retry = document.createElement("button");
    retry.type = "button";
    retry.className = "retry";
    retry.textContent = "retry";
    retry.addEventListener("click", () => void this.load(this.record?.index));
    box.appendChild(retry);
    this.element.appendChild(box);
    this.callbacks.onError?.(error);
  }

  private render(
    summary: SessionSummary,
    record: IterationRecord,
    bundle: BundlePayload,
    docsim: DocsimPayload,
  ): void {
    this.element.replaceChildren();

    const status = document.createElement("p");
    status.className = "status-line";
    status.dataset.status = summary.status;
    status.textContent = `session ${summary.id}: status ${summary.status}`;
    this.element.appendChild(status);

    this.element.appendChild(renderSelectedTopics(record));

    this.element.appendChild(
      renderMatrix({
        rowLabels: bundle.topic_labels,
        colLabels: bundle.topic_labels,
        values: bundle.similarity_matrix,
        caption: "model comparison: previous topics (rows) vs refined topics (columns)",
      }),
    );

    this.element.appendChild(
      renderMatrix({
        rowLabels: docsim.doc_ids,
        colLabels: docsim.topic_labels,
        values: docsim.sims,
        caption: "validation documents vs refined topics",
      }),
    );

    this.element.appendChild(this.renderDecisionPanel(summary, record));
  }

  private renderDecisionPanel(summary: SessionSummary, record: IterationRecord): HTMLElement {
    const panel = document.createElement("section");
    panel.className = "decision-panel";

    const editable = summary.status === "awaiting_decision";
    this.editor = new AspectEditor({
      label: record.aspect_label,
      entries: record.aspect_entries,
    });
    panel.appendChild(this.editor.element);

    const notes = document.createElement("textarea");
    notes.className = "decision-notes";
    notes.placeholder = "expert notes";
    panel.appendChild(notes);

    const continueButton = document.createElement("button");
    continueButton.type = "button";
    continueButton.className = "decide-continue";
    continueButton.textContent = "continue (promote refined model)";
    const stopButton = document.createElement("button");
    stopButton.type = "button";
    stopButton.className = "decide-stop";
    stopButton.textContent = "stop (novel patterns found)";
    continueButton.disabled = !editable;
    stopButton.disabled = !editable;

    const send = async (go: boolean) => {
      continueButton.disabled = true;
      stopButton.disabled = true;
      try {
        const edited = this.editor!.value();
        const next = await this.client.decide(this.sessionId, {
          continue: go,
          notes: notes.value,
          edited_aspect: go ? edited : undefined,
        });
        this.callbacks.onDecision?.(next);
        await this.load(record.index);
      } catch (error) {
        this.renderError(error);
      }
    };
    continueButton.addEventListener("click", () => void send(true));
    stopButton.addEventListener("click", () => void send(false));

    panel.appendChild(continueButton);
    panel.appendChild(stopButton);
    return panel;
  }
}
