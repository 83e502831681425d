/** Control panel: scaling mode, histogram selector, axis add/delete form,
 * neutral-word sets, and the opacity / curve-smoothness sliders. */

import type { AxisDefinition, AxisSummary, NeutralSetDto, ScalingMode } from "./types.js";
import { SCALING_MODES, ALL_AXES } from "./types.js";

export class ControlPanel {
  readonly modeSelect: HTMLSelectElement;
  readonly selectorSelect: HTMLSelectElement;
  readonly histogramCanvas: HTMLCanvasElement;
  readonly opacitySlider: HTMLInputElement;
  readonly smoothnessSlider: HTMLInputElement;
  readonly axisForm: HTMLFormElement;
  readonly deleteSelect: HTMLSelectElement;
  readonly deleteButton: HTMLButtonElement;
  readonly neutralSelect: HTMLSelectElement;
  readonly playButton: HTMLButtonElement;

  onModeChange: (mode: ScalingMode) => void = () => {};
  onSelectorChange: (selector: string) => void = () => {};
  onAddAxis: (definition: AxisDefinition) => void = () => {};
  onDeleteAxis: (name: string) => void = () => {};
  onPlayNeutralSet: (name: string) => void = () => {};
  onOpacityChange: (value: number) => void = () => {};
  onSmoothnessChange: (value: number) => void = () => {};

  constructor(doc: Document, root: HTMLElement) {
    root.innerHTML = "";
    const title = doc.createElement("h2");
    title.textContent = "Controls";

    this.modeSelect = doc.createElement("select");
    this.modeSelect.className = "mode";
    for (const mode of SCALING_MODES) {
      const option = doc.createElement("option");
      option.value = mode;
      option.textContent = mode;
      this.modeSelect.append(option);
    }
    this.modeSelect.value = "percentile";
    this.modeSelect.addEventListener("change", () => {
      this.onModeChange(this.modeSelect.value as ScalingMode);
    });

    this.selectorSelect = doc.createElement("select");
    this.selectorSelect.className = "selector";
    this.selectorSelect.addEventListener("change", () => {
      this.onSelectorChange(this.selectorSelect.value);
    });

    this.histogramCanvas = doc.createElement("canvas");
    this.histogramCanvas.width = 260;
    this.histogramCanvas.height = 120;

    this.opacitySlider = this.slider(doc, 0, 1, 0.35);
    this.opacitySlider.addEventListener("input", () => {
      this.onOpacityChange(Number(this.opacitySlider.value));
    });
    this.smoothnessSlider = this.slider(doc, 0, 1, 0);
    this.smoothnessSlider.addEventListener("input", () => {
      this.onSmoothnessChange(Number(this.smoothnessSlider.value));
    });

    this.axisForm = doc.createElement("form");
    this.axisForm.className = "add-axis";
    for (const name of ["axis", "negName", "negWords", "posName", "posWords"]) {
      const input = doc.createElement("input");
      input.name = name;
      input.placeholder = name;
      this.axisForm.append(input);
    }
    const addButton = doc.createElement("button");
    addButton.type = "submit";
    addButton.textContent = "Add Axis";
    this.axisForm.append(addButton);
    this.axisForm.addEventListener("submit", (event) => {
      event.preventDefault();
      const value = (name: string) =>
        (this.axisForm.elements.namedItem(name) as HTMLInputElement).value.trim();
      const words = (name: string) => value(name).split(/[\s,]+/).filter(Boolean);
      this.onAddAxis({
        name: value("axis"),
        neg: { name: value("negName"), words: words("negWords") },
        pos: { name: value("posName"), words: words("posWords") },
      });
    });

    this.deleteSelect = doc.createElement("select");
    this.deleteSelect.className = "delete-axis";
    this.deleteButton = doc.createElement("button");
    this.deleteButton.textContent = "Delete Axis";
    this.deleteButton.addEventListener("click", () => {
      if (this.deleteSelect.value) {
        this.onDeleteAxis(this.deleteSelect.value);
      }
    });

    this.neutralSelect = doc.createElement("select");
    this.neutralSelect.className = "neutral-set";
    this.playButton = doc.createElement("button");
    this.playButton.textContent = "▶";
    this.playButton.className = "play";
    this.playButton.addEventListener("click", () => {
      if (this.neutralSelect.value) {
        this.onPlayNeutralSet(this.neutralSelect.value);
      }
    });

    root.append(
      title,
      this.modeSelect,
      this.selectorSelect,
      this.histogramCanvas,
      this.opacitySlider,
      this.smoothnessSlider,
      this.axisForm,
      this.deleteSelect,
      this.deleteButton,
      this.neutralSelect,
      this.playButton,
    );
  }

  private slider(doc: Document, min: number, max: number, value: number): HTMLInputElement {
    const input = doc.createElement("input");
    input.type = "range";
    input.min = String(min);
    input.max = String(max);
    input.step = "0.01";
    input.value = String(value);
    return input;
  }

  setAxes(axes: AxisSummary[]): void {
    const doc = this.selectorSelect.ownerDocument;
    const keep = this.selectorSelect.value || ALL_AXES;
    this.selectorSelect.innerHTML = "";
    const all = doc.createElement("option");
    all.value = ALL_AXES;
    all.textContent = ALL_AXES;
    this.selectorSelect.append(all);
    this.deleteSelect.innerHTML = "";
    for (const axis of axes) {
      const option = doc.createElement("option");
      option.value = axis.name;
      option.textContent = `${axis.name} (${axis.neg.name} / ${axis.pos.name})`;
      this.selectorSelect.append(option);
      this.deleteSelect.append(option.cloneNode(true));
    }
    this.selectorSelect.value = [...this.selectorSelect.options].some(
      (o) => o.value === keep,
    )
      ? keep
      : ALL_AXES;
  }

  setNeutralSets(sets: NeutralSetDto[]): void {
    const doc = this.neutralSelect.ownerDocument;
    this.neutralSelect.innerHTML = "";
    for (const set of sets) {
      const option = doc.createElement("option");
      option.value = set.name;
      option.textContent = set.name;
      this.neutralSelect.append(option);
    }
  }
}
