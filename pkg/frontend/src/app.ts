/** Composition root: wires the control panel, parallel-coordinates main
 * view, and search panel to the scoring service.
 *
 * Data flow: score rows are fetched whole (paged) per scaling mode and
 * filtered client-side by the histogram ranges; axis brushes run as
 * conjunction queries on the service and land in the search panel.  Every
 * async response is sequence-guarded so a stale reply never clobbers a
 * newer view.
 */

import { ApiClient, WordNotFound } from "./api.js";
import { ControlPanel } from "./controls.js";
import { HistogramView } from "./histogram.js";
import { ParallelCoordinates, type Canvas2D, type Scheduler } from "./pcp.js";
import { SearchPanel } from "./search.js";
import { RequestSequencer, Store } from "./state.js";
import type { AxisSummary, End, ScoreRow } from "./types.js";
import { ALL_AXES } from "./types.js";

export interface AppPanels {
  control: HTMLElement;
  main: HTMLElement;
  search: HTMLElement;
}

export interface AppOptions {
  pcpCtx?: Canvas2D;
  histogramCtx?: Canvas2D;
  scheduler?: Scheduler;
  bins?: number;
  neighborCount?: number;
  auditThreshold?: number;
}

export class App {
  readonly store = new Store();
  readonly controls: ControlPanel;
  readonly search: SearchPanel;
  readonly pcp: ParallelCoordinates;
  readonly histogram: HistogramView;

  private axes: AxisSummary[] = [];
  private allRows: ScoreRow[] = [];
  private scoresSeq = new RequestSequencer();
  private brushSeq = new RequestSequencer();
  private histogramSeq = new RequestSequencer();
  private bins: number;
  private neighborCount: number;
  private auditThreshold: number;

  constructor(
    doc: Document,
    panels: AppPanels,
    private api: ApiClient,
    options: AppOptions = {},
  ) {
    this.bins = options.bins ?? 20;
    this.neighborCount = options.neighborCount ?? 10;
    this.auditThreshold = options.auditThreshold ?? 0.75;
    this.controls = new ControlPanel(doc, panels.control);
    this.search = new SearchPanel(doc, panels.search);

    const mainCanvas = doc.createElement("canvas");
    mainCanvas.width = 900;
    mainCanvas.height = 520;
    panels.main.innerHTML = "";
    panels.main.append(mainCanvas);
    const pcpCtx =
      options.pcpCtx ?? (mainCanvas.getContext("2d") as unknown as Canvas2D);
    this.pcp = new ParallelCoordinates(pcpCtx, {
      width: mainCanvas.width,
      height: mainCanvas.height,
      schedule: options.scheduler,
    });

    const histCtx =
      options.histogramCtx ??
      (this.controls.histogramCanvas.getContext("2d") as unknown as Canvas2D);
    this.histogram = new HistogramView(histCtx, {
      width: this.controls.histogramCanvas.width,
      height: this.controls.histogramCanvas.height,
    });

    this.wire();
  }

  private wire(): void {
    this.controls.onModeChange = (mode) => {
      this.store.setMode(mode);
      this.search.setDownloadUrl(this.api.exportUrl(mode));
      void this.refreshScores();
      void this.refreshHistogram();
      void this.runBrushQuery(); // ranges were reset: clears stale results
    };
    this.controls.onSelectorChange = (selector) => {
      this.store.update((s) => {
        s.histogramSelector = selector;
        s.histogramRanges = [];
      });
      void this.refreshHistogram();
      this.applyHistogramFilter();
    };
    this.controls.onOpacityChange = (value) => {
      this.store.update((s) => {
        s.opacity = value;
      });
      this.pcp.setView({ opacity: value });
    };
    this.controls.onSmoothnessChange = (value) => {
      this.store.update((s) => {
        s.smoothness = value;
      });
      this.pcp.setView({ smoothness: value });
    };
    this.controls.onAddAxis = (definition) => {
      void this.api.addAxis(definition).then(() => this.reloadAxes());
    };
    this.controls.onDeleteAxis = (name) => {
      void this.api.deleteAxis(name).then(() => {
        this.store.clearBrush(name);
        return this.reloadAxes();
      });
    };
    this.controls.onPlayNeutralSet = (name) => {
      void this.playNeutralSet(name);
    };
    this.histogram.onRangesChange = (ranges) => {
      this.store.setHistogramRanges(ranges);
      this.applyHistogramFilter();
    };
    this.search.onSearch = (word) => {
      void this.lookupWord(word);
    };
  }

  async init(): Promise<void> {
    this.search.setDownloadUrl(this.api.exportUrl(this.store.state.mode));
    await this.reloadAxes();
    this.controls.setNeutralSets(await this.api.neutralSets());
  }

  private async reloadAxes(): Promise<void> {
    this.axes = await this.api.axes();
    this.controls.setAxes(this.axes);
    await Promise.all([this.refreshScores(), this.refreshHistogram()]);
  }

  axisNames(): string[] {
    return this.axes.map((ax) => ax.name);
  }

  async refreshScores(): Promise<void> {
    const token = this.scoresSeq.next();
    const page = await this.api.allScores(this.store.state.mode);
    if (!this.scoresSeq.isCurrent(token)) {
      return; // a newer request superseded this response
    }
    this.allRows = page.rows;
    this.applyHistogramFilter();
  }

  async refreshHistogram(): Promise<void> {
    const token = this.histogramSeq.next();
    const { histogramSelector, mode } = this.store.state;
    const data = await this.api.histogram(histogramSelector, mode, this.bins);
    if (!this.histogramSeq.isCurrent(token)) {
      return;
    }
    this.histogram.setData(data);
  }

  /** Rows passing the current histogram range disjunction. */
  visibleRows(): ScoreRow[] {
    const { histogramSelector, histogramRanges } = this.store.state;
    if (histogramRanges.length === 0) {
      return this.allRows;
    }
    const value = (row: ScoreRow): number =>
      histogramSelector === ALL_AXES
        ? row.mean_abs
        : row.scores[histogramSelector] ?? 0;
    return this.allRows.filter((row) =>
      histogramRanges.some(([lo, hi]) => {
        const v = value(row);
        return v >= lo && v <= hi;
      }),
    );
  }

  applyHistogramFilter(): void {
    this.pcp.setData(this.axisNames(), this.visibleRows(), this.store.state.mode);
    this.pcp.setView({
      opacity: this.store.state.opacity,
      smoothness: this.store.state.smoothness,
      highlighted: this.store.state.highlighted,
    });
  }

  /** Brush one axis end; ranges snap to the 0.5 / 0.75 / 0.9 presets. */
  setAxisBrush(axis: string, end: End, lo: number, hi: number): Promise<void> {
    this.store.setBrush(axis, end, lo, hi);
    return this.runBrushQuery();
  }

  clearAxisBrush(axis: string): Promise<void> {
    this.store.clearBrush(axis);
    return this.runBrushQuery();
  }

  /** Translate a pixel drag along an axis into a signed score interval. */
  brushFromPixels(axis: string, y0: number, y1: number): Promise<void> {
    const v0 = this.valueAtY(Math.min(y0, y1));
    const v1 = this.valueAtY(Math.max(y0, y1));
    let lo = Math.min(v0, v1);
    let hi = Math.max(v0, v1);
    const end: End = Math.abs(hi) >= Math.abs(lo) ? "pos" : "neg";
    if (end === "pos") {
      lo = Math.max(lo, 0);
    } else {
      hi = Math.min(hi, 0);
    }
    return this.setAxisBrush(axis, end, lo, hi);
  }

  private valueAtY(y: number): number {
    // inverse of the pcp score scale over [-1, 1]
    const top = this.pcp.scoreY(1);
    const bottom = this.pcp.scoreY(-1);
    const t = (y - top) / (bottom - top);
    return Math.max(-1, Math.min(1, 1 - 2 * t));
  }

  async runBrushQuery(): Promise<void> {
    const clauses = this.store.activeClauses();
    const token = this.brushSeq.next();
    if (clauses.length === 0) {
      this.search.showBrushResults([]);
      return;
    }
    const response = await this.api.brush(clauses, this.store.state.mode);
    if (!this.brushSeq.isCurrent(token)) {
      return;
    }
    this.search.showBrushResults(response.words);
    this.store.update((s) => {
      s.highlighted = new Set(response.words.map((w) => w.word));
    });
    this.pcp.setView({ highlighted: this.store.state.highlighted });
  }

  async lookupWord(word: string): Promise<void> {
    try {
      const profile = await this.api.word(word, this.neighborCount);
      this.search.showProfile(profile);
      const highlighted = new Set([
        profile.word,
        ...profile.neighbors.map((n) => n.word),
      ]);
      this.store.update((s) => {
        s.searchedWord = profile.word;
        s.highlighted = highlighted;
      });
      this.pcp.setView({ highlighted });
    } catch (err) {
      if (err instanceof WordNotFound) {
        this.search.showNotFound(err.detail.word, err.detail.suggestions);
        return;
      }
      throw err;
    }
  }

  async hoverWordAxis(y: number): Promise<void> {
    const word = this.pcp.wordAt(y);
    const highlighted = word ? new Set([word]) : new Set<string>();
    this.store.update((s) => {
      s.highlighted = highlighted;
    });
    this.pcp.setView({ highlighted });
  }

  async playNeutralSet(name: string): Promise<void> {
    const report = await this.api.audit(
      name,
      this.auditThreshold,
      this.store.state.mode,
    );
    const highlighted = new Set(report.flags.map((f) => f.word));
    this.store.update((s) => {
      s.neutralSet = name;
      s.highlighted = highlighted;
    });
    this.pcp.setView({ highlighted });
    this.search.status.textContent = `${name}: ${report.flags.length} flagged associations`;
  }
}
