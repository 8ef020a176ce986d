import { SessionApi } from "./api";
import { buildConsole } from "./console";
import { DEFAULT_CAMERA, renderScene, type OrbitCamera } from "./renderer";
import { buildTimeline } from "./timeline";
import type { SceneDocument, ViewState } from "./types";

/**
 * The editor shell. All scene state comes from the service; the client
 * keeps only the snapshot history needed for before/after scrubbing and
 * renders whatever the last confirmed response said.
 */
export class EditorApp {
  readonly state: ViewState;
  private camera: OrbitCamera = { ...DEFAULT_CAMERA };
  private viewport!: HTMLElement;
  private consoleUi!: ReturnType<typeof buildConsole>;
  private timelineUi!: ReturnType<typeof buildTimeline>;

  constructor(private root: HTMLElement, private api: SessionApi,
              strategy = "simple_cga") {
    this.state = {
      sessionId: null,
      strategy,
      selectedStep: null,
      snapshots: [],
      scene: null,
      steps: [],
    };
  }

  async init(): Promise<void> {
    this.root.replaceChildren();
    const layout = document.createElement("div");
    layout.className = "editor-layout";
    this.viewport = document.createElement("div");
    this.viewport.className = "viewport-root";
    const consoleRoot = document.createElement("div");
    consoleRoot.className = "console-root";
    const timelineRoot = document.createElement("div");
    timelineRoot.className = "timeline-root";
    layout.append(this.viewport, this.buildToolbar(consoleRoot), timelineRoot);
    this.root.appendChild(layout);
    this.bindOrbitControls();

    this.consoleUi = buildConsole(consoleRoot, {
      onSubmit: (text) => void this.submit(text),
      onUndo: () => void this.undo(),
    });
    this.timelineUi = buildTimeline(timelineRoot, (index) => this.selectStep(index));

    await this.startSession(this.state.strategy);
  }

  private buildToolbar(consoleRoot: HTMLElement): HTMLElement {
    const wrapper = document.createElement("div");
    wrapper.className = "console-root-wrapper";
    const bar = document.createElement("div");
    bar.className = "toolbar";
    const label = document.createElement("label");
    label.textContent = "method ";
    const select = document.createElement("select");
    select.className = "strategy-select";
    for (const name of ["simple_cga", "shenlong_cga", "euclidean_mat4", "compact_se3"]) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      if (name === this.state.strategy) option.selected = true;
      select.appendChild(option);
    }
    select.addEventListener("change", () => {
      void this.startSession(select.value);
    });
    label.appendChild(select);
    bar.appendChild(label);
    wrapper.append(bar, consoleRoot);
    return wrapper;
  }

  /** Start (or restart, on a method switch) a fresh session. */
  async startSession(strategy: string): Promise<void> {
    const session = await this.api.createSession(strategy);
    this.state.strategy = strategy;
    this.state.sessionId = session.id;
    this.state.scene = session.scene;
    this.state.snapshots = [session.scene];
    this.state.steps = [];
    this.state.selectedStep = null;
    this.timelineUi.clearComparison();
    this.consoleUi.clearFeedback();
    this.redraw();
  }

  private bindOrbitControls(): void {
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    this.viewport.addEventListener("mousedown", (event) => {
      const target = event.target as Element | null;
      if (target?.closest('[data-view="perspective"]')) {
        dragging = true;
        lastX = event.clientX;
        lastY = event.clientY;
      }
    });
    window.addEventListener("mouseup", () => {
      dragging = false;
    });
    window.addEventListener("mousemove", (event) => {
      if (!dragging) return;
      const dx = event.clientX - lastX;
      const dy = event.clientY - lastY;
      lastX = event.clientX;
      lastY = event.clientY;
      const elevation = Math.max(
        -1.4, Math.min(1.4, this.camera.elevationRad + dy * 0.01));
      this.setCamera({
        azimuthRad: this.camera.azimuthRad - dx * 0.01,
        elevationRad: elevation,
      });
    });
  }

  async submit(instruction: string): Promise<void> {
    if (!this.state.sessionId) return;
    try {
      const response = await this.api.applyInstruction(this.state.sessionId, instruction);
      if (!response.ok || !response.step) {
        // Failed instructions leave the scene and history untouched.
        this.consoleUi.showError(response.error ?? "instruction failed");
        return;
      }
      this.state.scene = response.scene;
      this.state.steps = [...this.state.steps, response.step];
      this.state.snapshots = [...this.state.snapshots, response.scene];
      this.state.selectedStep = null;
      this.consoleUi.showStep(response.step);
      this.redraw();
    } catch (error) {
      this.consoleUi.showError(error instanceof Error ? error.message : String(error));
    }
  }

  async undo(): Promise<void> {
    if (!this.state.sessionId) return;
    try {
      const response = await this.api.undo(this.state.sessionId);
      this.state.scene = response.scene;
      this.state.steps = this.state.steps.slice(0, -1);
      this.state.snapshots = this.state.snapshots.slice(0, -1);
      if (this.state.selectedStep !== null &&
          this.state.selectedStep >= this.state.steps.length) {
        this.state.selectedStep = null;
      }
      this.consoleUi.clearFeedback();
      this.redraw();
    } catch (error) {
      this.consoleUi.showError(error instanceof Error ? error.message : String(error));
    }
  }

  selectStep(index: number): void {
    if (index < 0 || index >= this.state.steps.length) return;
    this.state.selectedStep = index;
    const before = this.state.snapshots[index];
    const after = this.state.snapshots[index + 1];
    this.timelineUi.showComparison(before, after);
    this.timelineUi.update(this.state.steps, index);
  }

  setCamera(camera: Partial<OrbitCamera>): void {
    this.camera = { ...this.camera, ...camera };
    this.redraw();
  }

  currentScene(): SceneDocument | null {
    return this.state.scene;
  }

  private redraw(): void {
    if (this.state.scene) {
      renderScene(this.viewport, this.state.scene, { camera: this.camera });
    }
    this.timelineUi.update(this.state.steps, this.state.selectedStep);
  }
}
