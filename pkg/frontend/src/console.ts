import type { StepRecord } from "./types";

/**
 * Instruction console: a text input, submit + undo buttons, and the
 * last-step detail panel (route badge, emitted request, tokens, latency).
 */

export interface ConsoleHandlers {
  onSubmit: (instruction: string) => void;
  onUndo: () => void;
}

export function buildConsole(root: HTMLElement, handlers: ConsoleHandlers): {
  showStep: (step: StepRecord) => void;
  showError: (message: string) => void;
  clearFeedback: () => void;
} {
  const form = document.createElement("form");
  form.className = "console-form";

  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = 'e.g. "Move the red sphere next to the blue cube."';
  input.className = "console-input";
  form.appendChild(input);

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Apply";
  submit.className = "console-submit";
  form.appendChild(submit);

  const undoButton = document.createElement("button");
  undoButton.type = "button";
  undoButton.textContent = "Undo";
  undoButton.className = "console-undo";
  form.appendChild(undoButton);

  const feedback = document.createElement("div");
  feedback.className = "console-feedback";

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (text) {
      handlers.onSubmit(text);
      input.value = "";
    }
  });
  undoButton.addEventListener("click", () => handlers.onUndo());

  root.appendChild(form);
  root.appendChild(feedback);

  function showStep(step: StepRecord): void {
    feedback.replaceChildren();
    const badge = document.createElement("span");
    badge.className = `route-badge route-${step.route}`;
    badge.textContent = step.route;
    feedback.appendChild(badge);

    const request = document.createElement("pre");
    request.className = "request-text";
    request.textContent = step.request_text;
    feedback.appendChild(request);

    const meta = document.createElement("div");
    meta.className = "step-meta";
    const ms = (v: number) => `${(v * 1000).toFixed(1)}ms`;
    meta.textContent =
      `tokens ${step.tokens.prompt}+${step.tokens.completion} | ` +
      `api ${ms(step.latency.api_s)} | parse+exec ${ms(step.latency.parse_execute_s)} | ` +
      `render ${ms(step.latency.render_ready_s)} | total ${ms(step.latency.total_s)}`;
    feedback.appendChild(meta);
  }

  function showError(message: string): void {
    feedback.replaceChildren();
    const toast = document.createElement("div");
    toast.className = "toast error";
    toast.textContent = message;
    feedback.appendChild(toast);
  }

  return { showStep, showError, clearFeedback: () => feedback.replaceChildren() };
}
