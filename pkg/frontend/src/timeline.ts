import { renderScene } from "./renderer";
import type { SceneDocument, StepRecord } from "./types";

/**
 * History timeline: one entry per applied step; selecting an entry shows
 * the before/after scene snapshots side by side.
 */

export function buildTimeline(root: HTMLElement,
                              onSelect: (index: number) => void): {
  update: (steps: StepRecord[], selected: number | null) => void;
  showComparison: (before: SceneDocument, after: SceneDocument) => void;
  clearComparison: () => void;
} {
  const list = document.createElement("ol");
  list.className = "timeline";
  const placeholder = document.createElement("div");
  placeholder.className = "timeline-placeholder";
  placeholder.textContent = "No steps yet";
  const comparison = document.createElement("div");
  comparison.className = "timeline-comparison";
  root.appendChild(placeholder);
  root.appendChild(list);
  root.appendChild(comparison);

  function update(steps: StepRecord[], selected: number | null): void {
    list.replaceChildren();
    placeholder.style.display = steps.length ? "none" : "block";
    steps.forEach((step, index) => {
      const item = document.createElement("li");
      item.className = "timeline-entry";
      if (index === selected) item.classList.add("selected");
      item.dataset.index = String(index);
      item.textContent = `${index + 1}. [${step.route}] ${step.instruction}`;
      item.addEventListener("click", () => onSelect(index));
      list.appendChild(item);
    });
  }

  function showComparison(before: SceneDocument, after: SceneDocument): void {
    comparison.replaceChildren();
    for (const [label, doc] of [["before", before], ["after", after]] as const) {
      const pane = document.createElement("div");
      pane.className = `comparison-pane comparison-${label}`;
      const caption = document.createElement("div");
      caption.className = "comparison-label";
      caption.textContent = label;
      pane.appendChild(caption);
      const viewport = document.createElement("div");
      renderScene(viewport, doc, { quadView: false, panelSize: 180 });
      pane.appendChild(viewport);
      comparison.appendChild(pane);
    }
  }

  return {
    update,
    showComparison,
    clearComparison: () => comparison.replaceChildren(),
  };
}
