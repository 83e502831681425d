/** Parallel-coordinates main view.
 *
 * One vertical axis per bias type plus a terminal word axis; every word is
 * a polyline across them.  Polylines are painted onto a raster canvas in
 * progressively scheduled chunks so tens of thousands of rows never block
 * the UI thread.  Axis brushing is delegated to the caller (the app owns
 * pointer wiring); this class renders, lays out labels, and hit-tests.
 */

import type { ScalingMode, ScoreRow } from "./types.js";

/** The 2d-context subset the renderer touches (stubbed in tests). */
export interface Canvas2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  quadraticCurveTo(cx: number, cy: number, x: number, y: number): void;
  stroke(): void;
  strokeStyle: string;
  globalAlpha: number;
  lineWidth: number;
}

export type Scheduler = (run: () => void) => void;

const rafScheduler: Scheduler = (run) => {
  if (typeof requestAnimationFrame === "function") {
    requestAnimationFrame(() => run());
  } else {
    setTimeout(run, 0);
  }
};

export interface PcpOptions {
  width: number;
  height: number;
  chunkSize?: number;
  maxLabels?: number;
  schedule?: Scheduler;
}

export interface PcpView {
  opacity: number;
  smoothness: number;
  highlighted: Set<string>;
}

const MARGIN = { top: 24, bottom: 16, left: 48, right: 120 };

export class ParallelCoordinates {
  private axes: string[] = [];
  private rows: ScoreRow[] = [];
  private mode: ScalingMode = "percentile";
  private view: PcpView = { opacity: 0.35, smoothness: 0, highlighted: new Set() };
  private labels: { word: string; y: number }[] = [];
  private renderToken = 0;
  private chunkSize: number;
  private maxLabels: number;
  private schedule: Scheduler;

  constructor(private ctx: Canvas2D, private options: PcpOptions) {
    this.chunkSize = options.chunkSize ?? 500;
    this.maxLabels = options.maxLabels ?? 200;
    this.schedule = options.schedule ?? rafScheduler;
  }

  setData(axes: string[], rows: ScoreRow[], mode: ScalingMode): void {
    this.axes = [...axes];
    this.rows = rows;
    this.mode = mode;
    this.layoutLabels();
    this.render();
  }

  setView(view: Partial<PcpView>): void {
    this.view = { ...this.view, ...view };
    this.render();
  }

  renderedWords(): string[] {
    return this.rows.map((r) => r.word);
  }

  wordLabels(): { word: string; y: number }[] {
    return this.labels;
  }

  axisX(index: number): number {
    const span = this.options.width - MARGIN.left - MARGIN.right;
    const slots = this.axes.length; // word axis occupies the final slot
    return MARGIN.left + (span * index) / Math.max(slots, 1);
  }

  scoreY(value: number): number {
    // scaled scores live in [-1, 1]; raw scores in [-2, 2] degenerate rarely,
    // so clamp rather than rescale to keep zero centered
    const clamped = Math.max(-1, Math.min(1, value));
    const span = this.options.height - MARGIN.top - MARGIN.bottom;
    return MARGIN.top + (span * (1 - clamped)) / 2;
  }

  /** The word whose label sits closest to `y` on the word axis, if any. */
  wordAt(y: number, tolerance = 8): string | null {
    let best: { word: string; y: number } | null = null;
    for (const label of this.labels) {
      if (Math.abs(label.y - y) <= tolerance) {
        if (!best || Math.abs(label.y - y) < Math.abs(best.y - y)) {
          best = label;
        }
      }
    }
    return best ? best.word : null;
  }

  private layoutLabels(): void {
    // densest view wins: label the strongest words by mean |score|
    const byStrength = [...this.rows].sort((a, b) => b.mean_abs - a.mean_abs);
    const chosen = byStrength.slice(0, this.maxLabels);
    const order = new Map(this.rows.map((row, i) => [row.word, i] as const));
    chosen.sort((a, b) => (order.get(a.word) ?? 0) - (order.get(b.word) ?? 0));
    const span = this.options.height - MARGIN.top - MARGIN.bottom;
    this.labels = chosen.map((row, i) => ({
      word: row.word,
      y: MARGIN.top + (span * (i + 0.5)) / Math.max(chosen.length, 1),
    }));
  }

  /** Paint all polylines in scheduled chunks; resolves when this render is
   * complete or superseded by a newer one. */
  render(): Promise<void> {
    const token = ++this.renderToken;
    const { width, height } = this.options;
    this.ctx.clearRect(0, 0, width, height);
    const rows = this.rows;
    const labelY = new Map(this.labels.map((l) => [l.word, l.y]));
    return new Promise((resolve) => {
      const drawChunk = (start: number) => {
        if (token !== this.renderToken) {
          resolve();
          return;
        }
        const end = Math.min(start + this.chunkSize, rows.length);
        for (let i = start; i < end; i++) {
          const row = rows[i]!;
          const highlighted = this.view.highlighted.has(row.word);
          this.ctx.globalAlpha = highlighted ? 1 : this.view.opacity;
          this.ctx.strokeStyle = highlighted ? "#d62728" : "#4878a8";
          this.ctx.lineWidth = highlighted ? 2 : 1;
          this.tracePolyline(row, labelY.get(row.word));
          this.ctx.stroke();
        }
        if (end < rows.length) {
          this.schedule(() => drawChunk(end));
        } else {
          resolve();
        }
      };
      drawChunk(0);
    });
  }

  private tracePolyline(row: ScoreRow, wordY: number | undefined): void {
    this.ctx.beginPath();
    const points: { x: number; y: number }[] = this.axes.map((axis, i) => ({
      x: this.axisX(i),
      y: this.scoreY(row.scores[axis] ?? 0),
    }));
    // terminal word axis: labelled words land on their label, others center
    points.push({
      x: this.options.width - MARGIN.right,
      y: wordY ?? this.options.height / 2,
    });
    const first = points[0]!;
    this.ctx.moveTo(first.x, first.y);
    const s = this.view.smoothness;
    for (let i = 1; i < points.length; i++) {
      const prev = points[i - 1]!;
      const next = points[i]!;
      if (s <= 0) {
        this.ctx.lineTo(next.x, next.y);
      } else {
        // smoothness bends each segment around its midpoint, straight at 0
        const mx = (prev.x + next.x) / 2;
        this.ctx.quadraticCurveTo(
          mx - s * (next.x - prev.x) * 0.25,
          prev.y,
          mx,
          (prev.y + next.y) / 2,
        );
        this.ctx.quadraticCurveTo(
          mx + s * (next.x - prev.x) * 0.25,
          next.y,
          next.x,
          next.y,
        );
      }
    }
  }
}
