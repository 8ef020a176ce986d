export type Vec3 = [number, number, number];

export interface SceneObjectDoc {
  name: string;
  shape: "sphere" | "cube";
  color: string;
  center: Vec3;
  size: number;
}

export interface SceneDocument {
  version: number;
  revision: number;
  objects: SceneObjectDoc[];
}

export interface StepRecord {
  index: number;
  instruction: string;
  route: "template" | "llm" | "fallback_template";
  matched_keyword: string | null;
  strategy: string;
  request_text: string;
  verdict: { parse_ok: boolean };
  tokens: { prompt: number; completion: number };
  latency: {
    api_s: number;
    parse_execute_s: number;
    render_ready_s: number;
    total_s: number;
  };
  before_revision: number;
  after_revision: number;
}

export interface ApplyResponse {
  ok: boolean;
  scene: SceneDocument;
  step?: StepRecord;
  error?: string;
  route?: string;
}

export interface ViewState {
  sessionId: string | null;
  strategy: string;
  selectedStep: number | null;
  /** Scene snapshot before each step; snapshots[i] precedes step i. */
  snapshots: SceneDocument[];
  scene: SceneDocument | null;
  steps: StepRecord[];
}
