/** Control-panel histogram: score distribution for one selector plus
 * multi-range selection on its x axis.  Selected ranges act as a
 * disjunction; the app filters the main view to their union. */

import type { Canvas2D } from "./pcp.js";
import type { HistogramData } from "./types.js";

export interface HistogramOptions {
  width: number;
  height: number;
}

export class HistogramView {
  private data: HistogramData | null = null;
  private selections: [number, number][] = [];
  onRangesChange: (ranges: [number, number][]) => void = () => {};

  constructor(private ctx: Canvas2D, private options: HistogramOptions) {}

  setData(data: HistogramData): void {
    this.data = data;
    this.selections = [];
    this.render();
  }

  ranges(): [number, number][] {
    return [...this.selections];
  }

  /** Value range of one bar, for tooltip text and click-to-select. */
  binRange(index: number): [number, number] | null {
    if (!this.data) return null;
    const lo = this.data.bin_edges[index];
    const hi = this.data.bin_edges[index + 1];
    return lo === undefined || hi === undefined ? null : [lo, hi];
  }

  /** Add one brushed interval (in score units); ranges accumulate. */
  addRange(lo: number, hi: number): void {
    if (hi < lo) [lo, hi] = [hi, lo];
    this.selections.push([lo, hi]);
    this.render();
    this.onRangesChange(this.ranges());
  }

  clearRanges(): void {
    this.selections = [];
    this.render();
    this.onRangesChange([]);
  }

  /** Pixel x -> score value, for pointer-driven brushing. */
  valueAt(x: number): number {
    if (!this.data) return 0;
    const edges = this.data.bin_edges;
    const lo = edges[0]!;
    const hi = edges[edges.length - 1]!;
    return lo + (hi - lo) * Math.max(0, Math.min(1, x / this.options.width));
  }

  private render(): void {
    const { width, height } = this.options;
    this.ctx.clearRect(0, 0, width, height);
    if (!this.data) return;
    const counts = this.data.counts;
    const max = Math.max(...counts, 1);
    const barWidth = width / counts.length;
    for (let i = 0; i < counts.length; i++) {
      const h = (height - 4) * (counts[i]! / max);
      const range = this.binRange(i);
      const selected =
        range !== null &&
        this.selections.some(([lo, hi]) => range[1] > lo && range[0] < hi);
      this.ctx.globalAlpha = 1;
      this.ctx.strokeStyle = selected ? "#d62728" : "#4878a8";
      this.ctx.lineWidth = Math.max(barWidth - 1, 1);
      this.ctx.beginPath();
      this.ctx.moveTo(i * barWidth + barWidth / 2, height);
      this.ctx.lineTo(i * barWidth + barWidth / 2, height - h);
      this.ctx.stroke();
    }
  }
}
