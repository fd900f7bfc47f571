/** View-logic tests with a stubbed client: no gateway, no network. */

import { beforeEach, describe, expect, it } from "vitest";

import type {
  BundlePayload,
  DocsimPayload,
  GatewayClient,
  IterationRecord,
  SessionSummary,
  SweepPayload,
} from "../src/api.js";
import { AspectEditor } from "../src/aspectEditor.js";
import { renderMatrix } from "../src/heatmap.js";
import { IterationReviewScreen } from "../src/iterationReview.js";
import { SweepScreen, parseGrid } from "../src/sweepScreen.js";

function summaryFixture(status: string): SessionSummary {
  return {
    id: "sess-1",
    status,
    corpus_ref: "mini",
    iteration_count: 1,
    topic_labels: ["T01", "T02"],
    ctp1: "m1",
    ctp2: "m2",
    q: { T01: 1.5, T02: 0.25 },
    staged_aspect: null,
    config: {},
  };
}

function recordFixture(): IterationRecord {
  return {
    index: 1,
    aspect_label: "protocols",
    aspect_entries: [["verifi", 0.5], ["photon", 0.25]],
    selected_topics: ["T01"],
    approx_rewards: { T01: 1.25, T02: 0.5 },
    provisional_q: { T01: 2.0, T02: 0.75 },
    base_rewards: { T01: 0.4, T02: 0.2 },
    modified_rewards: { T01: 0.9, T02: 0.45 },
    max_future_q: 0.4,
    q_before: { T01: 1.5, T02: 0.25 },
    q_after: { T01: 1.73, T02: 0.25 },
    model_old_id: "m1",
    model_new_id: "m2",
    validation_ref: "v2023",
    novelty_flag: false,
    expert_notes: "",
    selected_topic_details: [
      {
        label: "T01",
        keywords: [["verifi", 0.9182736455463728], ["photon", 0.25]],
        q_before: 1.5,
        q_after: 1.7300000000000004,
        approx_reward: 1.25,
        base_reward: 0.4,
        modified_reward: 0.9,
      },
    ],
  };
}

function bundleFixture(): BundlePayload {
  return {
    topic_labels: ["T01", "T02"],
    similarity_matrix: [
      [0.9, 0.1],
      [0.2, 0.8],
    ],
    corresponding_similarity: [0.9, 0.8],
    magnitude: [1.5, 0.25],
    adns: [0.3, 0.4],
    entropy_old: [1.0, 1.1],
    entropy_new: [0.9, 1.2],
    entropy_delta: [-0.1, 0.1],
    degenerate: [false, false],
    entropy_base: "nat",
  };
}

function docsimFixture(): DocsimPayload {
  return {
    doc_ids: ["d1", "d2"],
    topic_labels: ["T01", "T02"],
    sims: [
      [0.5, 0.1],
      [0.30000000000000004, 0.7],
    ],
    empty_docs: [],
  };
}

function stubClient(status: string, onDecide?: (body: unknown) => void): GatewayClient {
  const stub = {
    session: async () => summaryFixture(status),
    iteration: async () => recordFixture(),
    heatmap: async () => bundleFixture(),
    docsim: async () => docsimFixture(),
    decide: async (_id: string, body: unknown) => {
      onDecide?.(body);
      return summaryFixture("ended");
    },
  };
  return stub as unknown as GatewayClient;
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("parseGrid", () => {
  it("parses comma lists", () => {
    expect(parseGrid("0.1, 0.2 ,0.3")).toEqual([0.1, 0.2, 0.3]);
  });

  it("rejects empty and non-numeric input", () => {
    expect(parseGrid("")).toBeNull();
    expect(parseGrid("  ,, ")).toBeNull();
    expect(parseGrid("0.1,abc")).toBeNull();
  });
});

describe("SweepScreen form", () => {
  it("disables submit until both grids are valid", () => {
    const screen = new SweepScreen(stubClient("ended"), "sess-1");
    document.body.appendChild(screen.element);
    expect(screen.submit.disabled).toBe(true);

    screen.alphasInput.value = "0.1";
    screen.alphasInput.dispatchEvent(new Event("input"));
    expect(screen.submit.disabled).toBe(true);

    screen.lambdasInput.value = "0.5,x";
    screen.lambdasInput.dispatchEvent(new Event("input"));
    expect(screen.submit.disabled).toBe(true);

    screen.lambdasInput.value = "0.5,1.5";
    screen.lambdasInput.dispatchEvent(new Event("input"));
    expect(screen.submit.disabled).toBe(false);
  });

  it("renders cells verbatim and highlights only server selections", async () => {
    const payload: SweepPayload = {
      columns: ["topic", "(a=0.1; l=0.5)", "(a=0.1; l=1.5)"],
      rows: [
        ["T01", 1.2300000000000002, ""],
        ["T02", "", 2.5],
      ],
      pairs: [
        [0.1, 0.5],
        [0.1, 1.5],
      ],
      selections: [["T01"], ["T02"]],
      top_n: 1,
    };
    const client = { sweep: async () => payload } as unknown as GatewayClient;
    const screen = new SweepScreen(client, "sess-1");
    document.body.appendChild(screen.element);
    screen.alphasInput.value = "0.1";
    screen.lambdasInput.value = "0.5,1.5";
    await screen.run();

    const cells = screen.element.querySelectorAll<HTMLElement>(".sweep-cell");
    expect(cells).toHaveLength(4);
    expect(cells[0].dataset.value).toBe(String(1.2300000000000002));
    expect(cells[0].classList.contains("selected")).toBe(true);
    expect(cells[1].dataset.value).toBe("");
    expect(cells[1].classList.contains("selected")).toBe(false);
    expect(cells[3].classList.contains("selected")).toBe(true);
  });
});

describe("AspectEditor", () => {
  it("produces a complete replacement payload", () => {
    const editor = new AspectEditor({ label: "protocols", entries: [["verifi", 0.5]] });
    document.body.appendChild(editor.element);
    editor.setLabel("protocols (edited)");
    expect(editor.setWeight("verifi", 0.75)).toBe(true);
    editor.addRow("photon", "0.3");
    expect(editor.value()).toEqual({
      label: "protocols (edited)",
      entries: [
        ["verifi", 0.75],
        ["photon", 0.3],
      ],
    });
  });

  it("drops blank and invalid rows", () => {
    const editor = new AspectEditor({ label: "x", entries: [["keep", 1]] });
    editor.addRow("", "2");
    editor.addRow("bad", "not-a-number");
    expect(editor.value().entries).toEqual([["keep", 1]]);
  });

  it("remove buttons delete rows", () => {
    const editor = new AspectEditor({ label: "x", entries: [["a", 1], ["b", 2]] });
    document.body.appendChild(editor.element);
    editor.element.querySelector<HTMLButtonElement>(".aspect-remove")!.click();
    expect(editor.value().entries).toEqual([["b", 2]]);
  });
});

describe("renderMatrix", () => {
  it("keeps exact payload values in data attributes and titles", () => {
    const el = renderMatrix({
      rowLabels: ["r1"],
      colLabels: ["c1", "c2"],
      values: [[0.1234567890123456, 1]],
      caption: "test",
    });
    const cells = el.querySelectorAll<HTMLElement>("td.cell");
    expect(cells[0].dataset.value).toBe(String(0.1234567890123456));
    expect(cells[0].title).toBe(String(0.1234567890123456));
    expect(el.textContent).toContain("color scale local to this view");
  });
});

describe("IterationReviewScreen", () => {
  it("renders payload numbers exactly and enables decisions when awaiting", async () => {
    const decisions: unknown[] = [];
    const screen = new IterationReviewScreen(
      stubClient("awaiting_decision", (body) => decisions.push(body)),
      "sess-1",
    );
    document.body.appendChild(screen.element);
    await screen.load();

    const record = recordFixture();
    const row = screen.element.querySelector<HTMLElement>("tr[data-topic='T01']")!;
    const detail = record.selected_topic_details[0];
    expect(row.querySelector<HTMLElement>(".q-after")!.dataset.value).toBe(
      String(detail.q_after),
    );
    expect(row.querySelector<HTMLElement>(".modified-reward")!.dataset.value).toBe(
      String(detail.modified_reward),
    );
    const keyword = row.querySelector<HTMLElement>(".keyword")!;
    expect(keyword.dataset.value).toBe(String(detail.keywords[0][1]));

    const continueButton =
      screen.element.querySelector<HTMLButtonElement>(".decide-continue")!;
    expect(continueButton.disabled).toBe(false);
    continueButton.click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(decisions).toHaveLength(1);
    expect(decisions[0]).toMatchObject({ continue: true });
  });

  it("disables decisions on ended sessions", async () => {
    const screen = new IterationReviewScreen(stubClient("ended"), "sess-1");
    document.body.appendChild(screen.element);
    await screen.load();
    expect(
      screen.element.querySelector<HTMLButtonElement>(".decide-continue")!.disabled,
    ).toBe(true);
    expect(
      screen.element.querySelector<HTMLButtonElement>(".decide-stop")!.disabled,
    ).toBe(true);
  });
});
