/** Mocked scoring service and recording canvas used by the component tests. */

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import type { Canvas2D } from "../src/pcp.js";
import type {
  AxisSummary,
  BrushClauseDto,
  ScalingMode,
  ScoreRow,
} from "../src/types.js";

type Json = Record<string, unknown>;

export interface RecordedRequest {
  method: string;
  path: string;
  body: Json | null;
}

/** Scores per mode for a six-word, two-axis fixture. */
const WORDS = ["terrorist", "bomb", "corrupt", "nuns", "teacher", "chair"];
const PCT: Record<string, [number, number]> = {
  terrorist: [-0.9, -0.95],
  bomb: [-0.8, -0.85],
  corrupt: [-0.85, 0.2],
  nuns: [0.9, 0.9],
  teacher: [0.7, 0.1],
  chair: [0.05, -0.05],
};
const MODE_FACTOR: Record<ScalingMode, number> = {
  percentile: 1,
  minmax: 0.5,
  raw: 0.25,
};

export class MockBackend {
  requests: RecordedRequest[] = [];
  axes: AxisSummary[] = [
    {
      name: "Gender",
      neg: { name: "Male", resolved_words: 20 },
      pos: { name: "Female", resolved_words: 19 },
    },
    {
      name: "Religion",
      neg: { name: "Islam", resolved_words: 18 },
      pos: { name: "Christianity", resolved_words: 15 },
    },
  ];

  rows(mode: ScalingMode): ScoreRow[] {
    const factor = MODE_FACTOR[mode];
    return WORDS.map((word) => {
      const [gender, religion] = PCT[word]!;
      const scores: Record<string, number> = {};
      for (const axis of this.axes) {
        if (axis.name === "Gender") scores[axis.name] = gender * factor;
        else if (axis.name === "Religion") scores[axis.name] = religion * factor;
        else scores[axis.name] = 0;
      }
      const values = Object.values(scores);
      const meanAbs =
        values.reduce((acc, v) => acc + Math.abs(v), 0) / values.length;
      return { word, scores, mean_abs: meanAbs };
    });
  }

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const parsed = new URL(url, "http://mock");
    const path = parsed.pathname;
    const body = init?.body ? (JSON.parse(String(init.body)) as Json) : null;
    this.requests.push({ method, path: path + parsed.search, body });
    return this.route(method, parsed, body);
  };

  requestsTo(path: string): RecordedRequest[] {
    return this.requests.filter((r) => r.path.startsWith(path));
  }

  private json(payload: unknown, status = 200): Response {
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }

  private route(method: string, url: URL, body: Json | null): Response {
    const path = url.pathname;
    if (path === "/healthz") {
      return this.json({ status: "ok", words: WORDS.length, axes: this.axes.map((a) => a.name) });
    }
    if (path === "/axes" && method === "GET") {
      return this.json({ axes: this.axes });
    }
    if (path === "/axes" && method === "POST") {
      const def = body as unknown as {
        name: string;
        neg: { name: string; words: string[] };
        pos: { name: string; words: string[] };
      };
      const summary: AxisSummary = {
        name: def.name,
        neg: { name: def.neg.name, resolved_words: def.neg.words.length },
        pos: { name: def.pos.name, resolved_words: def.pos.words.length },
      };
      this.axes = [...this.axes, summary];
      return this.json(summary, 201);
    }
    if (path.startsWith("/axes/") && method === "DELETE") {
      const name = decodeURIComponent(path.slice("/axes/".length));
      this.axes = this.axes.filter((a) => a.name !== name);
      return new Response(null, { status: 204 });
    }
    if (path === "/scores") {
      const mode = (url.searchParams.get("mode") ?? "raw") as ScalingMode;
      const offset = Number(url.searchParams.get("offset") ?? "0");
      const limit = Number(url.searchParams.get("limit") ?? "1000");
      const rows = this.rows(mode);
      return this.json({
        mode,
        offset,
        limit,
        total: rows.length,
        axes: this.axes.map((a) => a.name),
        rows: rows.slice(offset, offset + limit),
      });
    }
    if (path === "/histogram") {
      const mode = (url.searchParams.get("mode") ?? "raw") as ScalingMode;
      const factor = MODE_FACTOR[mode];
      return this.json({
        selector: url.searchParams.get("selector") ?? "ALL",
        mode,
        bin_edges: [0, 0.25 * factor, 0.5 * factor, 0.75 * factor, 1 * factor],
        counts: [1, 1, 2, 2],
      });
    }
    if (path === "/query/brush") {
      const { clauses, mode } = body as unknown as {
        clauses: BrushClauseDto[];
        mode: ScalingMode;
      };
      const rows = this.rows(mode);
      const hits = rows.filter((row) =>
        clauses.every((c) => {
          const v = row.scores[c.axis] ?? 0;
          return v >= c.range[0] && v <= c.range[1];
        }),
      );
      return this.json({
        mode,
        words: hits.map((row) => ({
          word: row.word,
          scores: Object.fromEntries(
            clauses.map((c) => [c.axis, row.scores[c.axis] ?? 0]),
          ),
        })),
      });
    }
    if (path === "/query/intersectional") {
      return this.json({ query: body, mode: "percentile", threshold: 0.75, results: [] });
    }
    if (path === "/neutral-sets") {
      return this.json({
        sets: [
          { name: "Profession", words: ["teacher", "nurse"] },
          { name: "Extremism", words: ["terrorist", "bomb"] },
        ],
      });
    }
    if (path === "/audit") {
      const { set } = body as unknown as { set: string };
      const flags =
        set === "Extremism"
          ? [
              { word: "terrorist", axis: "Gender", end: "neg", score: -0.9 },
              { word: "terrorist", axis: "Religion", end: "neg", score: -0.95 },
              { word: "bomb", axis: "Religion", end: "neg", score: -0.85 },
            ]
          : [];
      return this.json({
        query: { set },
        mode: "percentile",
        threshold: 0.75,
        results: [],
        flags,
        coverage: 1.0,
      });
    }
    if (path.startsWith("/words/")) {
      const word = decodeURIComponent(path.slice("/words/".length));
      if (!WORDS.includes(word)) {
        return this.json(
          { detail: { word, suggestions: WORDS.filter((w) => w.startsWith(word[0] ?? "")) } },
          404,
        );
      }
      const [gender, religion] = PCT[word]!;
      return this.json({
        word,
        per_axis: [
          { axis: "Gender", raw: gender * 0.25, minmax: gender * 0.5, percentile: gender },
          { axis: "Religion", raw: religion * 0.25, minmax: religion * 0.5, percentile: religion },
        ],
        mean_abs: {
          raw: 0.25 * (Math.abs(gender) + Math.abs(religion)) / 2,
          minmax: 0.5 * (Math.abs(gender) + Math.abs(religion)) / 2,
          percentile: (Math.abs(gender) + Math.abs(religion)) / 2,
        },
        neighbors: WORDS.filter((w) => w !== word)
          .slice(0, 3)
          .map((w, i) => ({ word: w, distance: 0.1 * (i + 1) })),
      });
    }
    return this.json({ detail: `unrouted ${method} ${path}` }, 500);
  }
}

/** Canvas2D stub counting polylines per frame. */
export class RecordingCanvas implements Canvas2D {
  strokeStyle = "";
  globalAlpha = 1;
  lineWidth = 1;
  clears = 0;
  strokesSinceClear = 0;
  totalStrokes = 0;

  clearRect(): void {
    this.clears += 1;
    this.strokesSinceClear = 0;
  }
  beginPath(): void {}
  moveTo(): void {}
  lineTo(): void {}
  quadraticCurveTo(): void {}
  stroke(): void {
    this.strokesSinceClear += 1;
    this.totalStrokes += 1;
  }
}

export interface TestHarness {
  app: App;
  backend: MockBackend;
  mainCanvas: RecordingCanvas;
  histogramCanvas: RecordingCanvas;
}

export async function buildApp(): Promise<TestHarness> {
  const backend = new MockBackend();
  const api = new ApiClient("http://mock", backend.fetch);
  const mainCanvas = new RecordingCanvas();
  const histogramCanvas = new RecordingCanvas();
  const panels = {
    control: document.createElement("div"),
    main: document.createElement("div"),
    search: document.createElement("div"),
  };
  document.body.append(panels.control, panels.main, panels.search);
  const app = new App(document, panels, api, {
    pcpCtx: mainCanvas,
    histogramCtx: histogramCanvas,
    scheduler: (run) => run(), // drain progressive chunks synchronously
  });
  await app.init();
  return { app, backend, mainCanvas, histogramCanvas };
}
