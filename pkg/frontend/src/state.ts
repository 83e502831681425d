/** View state shared by the three panels, with a tiny subscription store.
 *
 * Scaling-mode switches keep each axis brush's end but clear its range, so
 * handles stay on the pole the user chose while stale intervals never
 * filter against rescaled scores.  Responses are guarded by sequence
 * numbers: anything that resolves after a newer request is discarded.
 */

import type { End, ScalingMode } from "./types.js";

export interface AxisBrush {
  end: End;
  /** null = handle parked on `end` but not filtering */
  range: [number, number] | null;
}

export interface ViewState {
  mode: ScalingMode;
  histogramSelector: string;
  histogramRanges: [number, number][];
  brushes: Map<string, AxisBrush>;
  searchedWord: string | null;
  opacity: number;
  smoothness: number;
  neutralSet: string | null;
  highlighted: Set<string>;
}

export function initialViewState(): ViewState {
  return {
    mode: "percentile",
    histogramSelector: "ALL",
    histogramRanges: [],
    brushes: new Map(),
    searchedWord: null,
    opacity: 0.35,
    smoothness: 0,
    neutralSet: null,
    highlighted: new Set(),
  };
}

export const BRUSH_PRESETS = [0.5, 0.75, 0.9];
const SNAP_TOLERANCE = 0.05;

/** Snap a brushed interval to the nearest [t,1] / [-1,-t] preset when the
 * handles land close to one; otherwise keep the freehand interval. */
export function snapBrushRange(end: End, lo: number, hi: number): [number, number] {
  for (const t of BRUSH_PRESETS) {
    if (end === "pos" && Math.abs(lo - t) <= SNAP_TOLERANCE && hi >= 1 - SNAP_TOLERANCE) {
      return [t, 1];
    }
    if (end === "neg" && Math.abs(hi + t) <= SNAP_TOLERANCE && lo <= -1 + SNAP_TOLERANCE) {
      return [-1, -t];
    }
  }
  return [lo, hi];
}

export class Store {
  private listeners: ((state: ViewState) => void)[] = [];

  constructor(public state: ViewState = initialViewState()) {}

  subscribe(listener: (state: ViewState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(mutate: (state: ViewState) => void): void {
    mutate(this.state);
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  setMode(mode: ScalingMode): void {
    this.update((s) => {
      s.mode = mode;
      s.histogramRanges = [];
      for (const brush of s.brushes.values()) {
        brush.range = null; // ends persist, ranges reset
      }
    });
  }

  setBrush(axis: string, end: End, lo: number, hi: number): void {
    this.update((s) => {
      s.brushes.set(axis, { end, range: snapBrushRange(end, lo, hi) });
    });
  }

  clearBrush(axis: string): void {
    this.update((s) => {
      s.brushes.delete(axis);
    });
  }

  /** Active clauses in wire format, ready for the brush endpoint. */
  activeClauses(): { axis: string; end: End; range: [number, number] }[] {
    const clauses = [];
    for (const [axis, brush] of this.state.brushes) {
      if (brush.range) {
        clauses.push({ axis, end: brush.end, range: brush.range });
      }
    }
    return clauses;
  }

  setHistogramRanges(ranges: [number, number][]): void {
    this.update((s) => {
      s.histogramRanges = ranges;
    });
  }
}

/** Monotone counter for discarding stale async responses. */
export class RequestSequencer {
  private seq = 0;

  next(): number {
    return ++this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}
