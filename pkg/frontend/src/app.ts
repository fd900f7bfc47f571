/** Console shell: create or open a session, stage aspects, run
 * iterations, review results, and sweep parameters. Optimistic UI is
 * deliberately avoided; every action waits for the server round-trip
 * and re-renders from the response.
 */

import { GatewayClient, type SessionSummary } from "./api.js";
import { IterationReviewScreen } from "./iterationReview.js";
import { SweepScreen } from "./sweepScreen.js";

function field(labelText: string, input: HTMLElement): HTMLElement {
  const label = document.createElement("label");
  label.textContent = labelText + " ";
  label.appendChild(input);
  return label;
}

export class ConsoleApp {
  readonly element: HTMLElement;
  readonly statusBar: HTMLElement;
  review: IterationReviewScreen | null = null;
  sweep: SweepScreen | null = null;
  private sessionId: string | null = null;
  private readonly workspace: HTMLElement;

  constructor(readonly client: GatewayClient) {
    this.element = document.createElement("div");
    this.element.className = "console-app";

    this.statusBar = document.createElement("p");
    this.statusBar.className = "status-bar";
    this.statusBar.textContent = "no session";
    this.element.appendChild(this.statusBar);

    this.element.appendChild(this.renderSetupPanel());
    this.element.appendChild(this.renderAspectPanel());
    this.element.appendChild(this.renderRunPanel());

    this.workspace = document.createElement("div");
    this.workspace.className = "workspace";
    this.element.appendChild(this.workspace);
  }

  private report(text: string): void {
    this.statusBar.textContent = text;
  }

  private fail(error: unknown): void {
    this.report(`error: ${error instanceof Error ? error.message : String(error)}`);
  }

  private renderSetupPanel(): HTMLElement {
    const panel = document.createElement("section");
    panel.className = "setup-panel";

    const corpusInput = document.createElement("input");
    corpusInput.className = "setup-corpus";
    corpusInput.placeholder = "registered corpus name";
    const kInput = document.createElement("input");
    kInput.className = "setup-k";
    kInput.value = "6";
    const seedInput = document.createElement("input");
    seedInput.className = "setup-seed";
    seedInput.value = "0";
    const itersInput = document.createElement("input");
    itersInput.className = "setup-iterations";
    itersInput.value = "150";

    const create = document.createElement("button");
    create.type = "button";
    create.className = "setup-create";
    create.textContent = "create session";
    create.addEventListener("click", () => {
      void this.client
        .createSession({
          corpus: corpusInput.value.trim(),
          k: Number(kInput.value),
          seed: Number(seedInput.value),
          iterations: Number(itersInput.value),
        })
        .then((summary) => this.openSession(summary))
        .catch((error) => this.fail(error));
    });

    const openInput = document.createElement("input");
    openInput.className = "setup-open-id";
    openInput.placeholder = "existing session id";
    const open = document.createElement("button");
    open.type = "button";
    open.className = "setup-open";
    open.textContent = "open";
    open.addEventListener("click", () => {
      void this.client
        .session(openInput.value.trim())
        .then((summary) => this.openSession(summary))
        .catch((error) => this.fail(error));
    });

    panel.appendChild(field("corpus", corpusInput));
    panel.appendChild(field("topics", kInput));
    panel.appendChild(field("seed", seedInput));
    panel.appendChild(field("iterations", itersInput));
    panel.appendChild(create);
    panel.appendChild(field("or open", openInput));
    panel.appendChild(open);
    return panel;
  }

  private renderAspectPanel(): HTMLElement {
    const panel = document.createElement("section");
    panel.className = "aspect-panel";

    const labelInput = document.createElement("input");
    labelInput.className = "aspect-submit-label";
    labelInput.placeholder = "aspect label";
    const corpusInput = document.createElement("input");
    corpusInput.className = "aspect-submit-corpus";
    corpusInput.placeholder = "registered aspect-text corpus";
    const submit = document.createElement("button");
    submit.type = "button";
    submit.className = "aspect-submit";
    submit.textContent = "extract + stage aspect";
    submit.addEventListener("click", () => {
      if (!this.sessionId) {
        this.report("create or open a session first");
        return;
      }
      void this.client
        .submitAspect(this.sessionId, {
          label: labelInput.value,
          corpus: corpusInput.value.trim(),
        })
        .then((response) =>
          this.report(
            `staged aspect '${response.staged_aspect.label}' ` +
              `(${response.staged_aspect.entries.length} keywords)`,
          ),
        )
        .catch((error) => this.fail(error));
    });

    panel.appendChild(field("label", labelInput));
    panel.appendChild(field("from corpus", corpusInput));
    panel.appendChild(submit);
    return panel;
  }

  private renderRunPanel(): HTMLElement {
    const panel = document.createElement("section");
    panel.className = "run-panel";

    const validationInput = document.createElement("input");
    validationInput.className = "run-validation";
    validationInput.placeholder = "registered validation corpus";
    const run = document.createElement("button");
    run.type = "button";
    run.className = "run-iteration";
    run.textContent = "run iteration";
    run.addEventListener("click", () => {
      if (!this.sessionId) {
        this.report("create or open a session first");
        return;
      }
      this.report("running iteration...");
      void this.client
        .runIteration(this.sessionId, validationInput.value.trim())
        .then(async (record) => {
          this.report(
            `iteration ${record.index} selected ${record.selected_topics.join(", ")}`,
          );
          await this.review?.load(record.index);
        })
        .catch((error) => this.fail(error));
    });

    panel.appendChild(field("validation", validationInput));
    panel.appendChild(run);
    return panel;
  }

  openSession(summary: SessionSummary): void {
    this.sessionId = summary.id;
    this.report(`session ${summary.id}: status ${summary.status}`);
    this.workspace.replaceChildren();
    this.review = new IterationReviewScreen(this.client, summary.id, {
      onDecision: (next) => this.report(`session ${next.id}: status ${next.status}`),
      onError: (error) => this.fail(error),
    });
    this.sweep = new SweepScreen(this.client, summary.id);
    this.workspace.appendChild(this.review.element);
    this.workspace.appendChild(this.sweep.element);
    void this.review.load();
  }
}

export function mountConsole(root: HTMLElement, baseUrl: string): ConsoleApp {
  const app = new ConsoleApp(new GatewayClient(baseUrl));
  root.appendChild(app.element);
  return app;
}
