/** Search panel: word lookup, synonym display, brush results, CSV download. */

import type { BrushResultEntry, WordProfileDto } from "./types.js";

export class SearchPanel {
  readonly input: HTMLInputElement;
  readonly status: HTMLElement;
  readonly synonyms: HTMLElement;
  readonly results: HTMLUListElement;
  readonly download: HTMLAnchorElement;
  onSearch: (word: string) => void = () => {};

  constructor(private doc: Document, root: HTMLElement) {
    root.innerHTML = "";
    const title = doc.createElement("h2");
    title.textContent = "Search";
    this.input = doc.createElement("input");
    this.input.type = "search";
    this.input.placeholder = "look up a word";
    this.input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter" && this.input.value.trim()) {
        this.onSearch(this.input.value.trim());
      }
    });
    this.status = doc.createElement("p");
    this.status.className = "status";
    this.synonyms = doc.createElement("p");
    this.synonyms.className = "synonyms";
    this.results = doc.createElement("ul");
    this.results.className = "brush-results";
    this.download = doc.createElement("a");
    this.download.textContent = "Download scores (CSV)";
    this.download.className = "download";
    root.append(title, this.input, this.status, this.synonyms, this.results, this.download);
  }

  setDownloadUrl(url: string): void {
    this.download.href = url;
  }

  showProfile(profile: WordProfileDto): void {
    const parts = profile.per_axis
      .map((s) => `${s.axis} ${s.percentile.toFixed(2)}`)
      .join(", ");
    this.status.textContent = `${profile.word}: ${parts}`;
    const names = profile.neighbors.map((n) => n.word);
    this.synonyms.textContent = names.length ? `synonyms: ${names.join(", ")}` : "";
  }

  showNotFound(word: string, suggestions: string[]): void {
    this.status.textContent = suggestions.length
      ? `'${word}' not found; did you mean ${suggestions.join(", ")}?`
      : `'${word}' not found`;
    this.synonyms.textContent = "";
  }

  showBrushResults(entries: BrushResultEntry[]): void {
    this.results.innerHTML = "";
    for (const entry of entries) {
      const item = this.doc.createElement("li");
      const scores = Object.entries(entry.scores)
        .map(([axis, score]) => `${axis} ${score.toFixed(2)}`)
        .join(", ");
      item.textContent = scores ? `${entry.word} (${scores})` : entry.word;
      item.dataset.word = entry.word;
      this.results.append(item);
    }
  }

  resultWords(): string[] {
    return Array.from(this.results.children).map(
      (item) => (item as HTMLElement).dataset.word ?? "",
    );
  }
}
