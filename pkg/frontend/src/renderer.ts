import type { SceneDocument, SceneObjectDoc, Vec3 } from "./types";

/**
 * SVG scene renderer: a perspective view plus three axis-aligned
 * orthographic views, all Y-up (e1 = X right, e2 = Y up, e3 = Z towards
 * the viewer). Every drawn primitive carries data-* attributes so tests
 * and the timeline can read geometry straight off the DOM.
 */

export interface OrbitCamera {
  azimuthRad: number;
  elevationRad: number;
  distance: number;
}

export const DEFAULT_CAMERA: OrbitCamera = {
  azimuthRad: Math.PI / 5,
  elevationRad: Math.PI / 8,
  distance: 26,
};

export interface RenderOptions {
  camera?: OrbitCamera;
  quadView?: boolean;
  panelSize?: number;
  unitsPerPanel?: number;
}

interface Projected {
  x: number; // world-unit screen coordinates, +x right
  y: number; // +y up (flipped to pixels later)
  depth: number; // larger = closer to the camera
  radius: number; // world units after any perspective shrink
}

type Projector = (p: Vec3, size: number) => Projected | null;

const SVG_NS = "http://www.w3.org/2000/svg";

function orthographic(sx: (p: Vec3) => number, sy: (p: Vec3) => number,
                      depth: (p: Vec3) => number): Projector {
  return (p, size) => ({ x: sx(p), y: sy(p), depth: depth(p), radius: size });
}

export function perspectiveProjector(camera: OrbitCamera): Projector {
  const cosAz = Math.cos(camera.azimuthRad);
  const sinAz = Math.sin(camera.azimuthRad);
  const cosEl = Math.cos(camera.elevationRad);
  const sinEl = Math.sin(camera.elevationRad);
  const eye: Vec3 = [
    camera.distance * cosEl * sinAz,
    camera.distance * sinEl,
    camera.distance * cosEl * cosAz,
  ];
  const forward = normalize([-eye[0], -eye[1], -eye[2]]);
  const right = normalize(cross(forward, [0, 1, 0]));
  const up = cross(right, forward);
  const focal = 18;
  return (p, size) => {
    const rel: Vec3 = [p[0] - eye[0], p[1] - eye[1], p[2] - eye[2]];
    const z = dot(rel, forward);
    if (z < 0.5) return null; // behind or clipping the camera
    return {
      x: (focal * dot(rel, right)) / z,
      y: (focal * dot(rel, up)) / z,
      depth: -z,
      radius: (focal * size) / z,
    };
  };
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function normalize(v: Vec3): Vec3 {
  const n = Math.hypot(v[0], v[1], v[2]);
  return [v[0] / n, v[1] / n, v[2] / n];
}

interface ViewSpec {
  id: string;
  label: string;
  projector: Projector;
  /** Screen-space direction of each basis axis for the gizmo, world units. */
  gizmo: Array<{ axis: "e1" | "e2" | "e3"; dx: number; dy: number }>;
}

function viewSpecs(camera: OrbitCamera): ViewSpec[] {
  const perspective = perspectiveProjector(camera);
  const unit = 1.6;
  const gizmoFor = (projector: Projector) => {
    const origin = projector([0, 0, 0], 0);
    return (["e1", "e2", "e3"] as const).map((axis, i) => {
      const tip: Vec3 = [0, 0, 0];
      tip[i] = unit;
      const projected = projector(tip, 0);
      return origin && projected
        ? { axis, dx: projected.x - origin.x, dy: projected.y - origin.y }
        : { axis, dx: 0, dy: 0 };
    });
  };
  return [
    { id: "perspective", label: "perspective", projector: perspective,
      gizmo: gizmoFor(perspective) },
    { id: "front", label: "front (e1-e2)", gizmo: [
        { axis: "e1", dx: unit, dy: 0 }, { axis: "e2", dx: 0, dy: unit },
        { axis: "e3", dx: 0, dy: 0 }],
      projector: orthographic((p) => p[0], (p) => p[1], (p) => p[2]) },
    { id: "top", label: "top (e1-e3)", gizmo: [
        { axis: "e1", dx: unit, dy: 0 }, { axis: "e2", dx: 0, dy: 0 },
        { axis: "e3", dx: 0, dy: -unit }],
      projector: orthographic((p) => p[0], (p) => -p[2], (p) => p[1]) },
    { id: "side", label: "side (e3-e2)", gizmo: [
        { axis: "e1", dx: 0, dy: 0 }, { axis: "e2", dx: 0, dy: unit },
        { axis: "e3", dx: -unit, dy: 0 }],
      projector: orthographic((p) => -p[2], (p) => p[1], (p) => p[0]) },
  ];
}

function validScene(doc: unknown): doc is SceneDocument {
  if (typeof doc !== "object" || doc === null) return false;
  const candidate = doc as SceneDocument;
  if (!Array.isArray(candidate.objects)) return false;
  return candidate.objects.every(
    (o) =>
      typeof o.name === "string" &&
      Array.isArray(o.center) &&
      o.center.length === 3 &&
      o.center.every((c) => typeof c === "number" && Number.isFinite(c)) &&
      typeof o.size === "number" &&
      o.size > 0,
  );
}

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

function drawObject(svg: SVGSVGElement, obj: SceneObjectDoc, projected: Projected,
                    toPixelX: (x: number) => number, toPixelY: (y: number) => number,
                    scale: number): void {
  const cx = toPixelX(projected.x);
  const cy = toPixelY(projected.y);
  const r = Math.max(1, projected.radius * scale);
  let shape: SVGElement;
  if (obj.shape === "cube") {
    shape = svgEl("rect");
    shape.setAttribute("x", String(cx - r));
    shape.setAttribute("y", String(cy - r));
    shape.setAttribute("width", String(2 * r));
    shape.setAttribute("height", String(2 * r));
  } else {
    shape = svgEl("circle");
    shape.setAttribute("cx", String(cx));
    shape.setAttribute("cy", String(cy));
    shape.setAttribute("r", String(r));
  }
  shape.setAttribute("fill", obj.color);
  shape.setAttribute("fill-opacity", "0.85");
  shape.setAttribute("stroke", "#1f2430");
  shape.classList.add("scene-object");
  shape.dataset.name = obj.name;
  shape.dataset.shape = obj.shape;
  shape.dataset.center = JSON.stringify(obj.center);
  shape.dataset.size = String(obj.size);
  const title = svgEl("title");
  title.textContent = `${obj.name} ${obj.shape} [${obj.center.join(", ")}] size ${obj.size}`;
  shape.appendChild(title);
  svg.appendChild(shape);
}

function drawGizmo(svg: SVGSVGElement, spec: ViewSpec,
                   toPixelX: (x: number) => number, panel: number): void {
  const margin = 26;
  const ox = margin;
  const oy = panel - margin;
  const pixelsPerUnit = (toPixelX(1) - toPixelX(0));
  for (const arrow of spec.gizmo) {
    if (arrow.dx === 0 && arrow.dy === 0) continue; // axis into the screen
    const x2 = ox + arrow.dx * pixelsPerUnit;
    const y2 = oy - arrow.dy * pixelsPerUnit; // Y-up flip
    const line = svgEl("line");
    line.setAttribute("x1", String(ox));
    line.setAttribute("y1", String(oy));
    line.setAttribute("x2", String(x2));
    line.setAttribute("y2", String(y2));
    line.setAttribute("stroke", { e1: "#d04848", e2: "#3f9d4e", e3: "#3a6fd8" }[arrow.axis]);
    line.setAttribute("stroke-width", "2");
    line.classList.add("gizmo-axis");
    line.dataset.axis = arrow.axis;
    svg.appendChild(line);
    const label = svgEl("text");
    label.setAttribute("x", String(x2 + 3));
    label.setAttribute("y", String(y2 - 3));
    label.setAttribute("font-size", "10");
    label.classList.add("gizmo-label");
    label.dataset.axis = arrow.axis;
    label.textContent = arrow.axis;
    svg.appendChild(label);
  }
}

/** Render the scene document into `root`; malformed documents produce a
 * visible error banner instead of a crash. */
export function renderScene(root: HTMLElement, doc: unknown,
                            options: RenderOptions = {}): void {
  root.replaceChildren();
  if (!validScene(doc)) {
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = "Malformed scene document";
    root.appendChild(banner);
    return;
  }
  const camera = options.camera ?? DEFAULT_CAMERA;
  const panel = options.panelSize ?? 260;
  const unitsAcross = options.unitsPerPanel ?? 16;
  const scale = panel / unitsAcross;
  const specs = viewSpecs(camera);
  const views = options.quadView === false ? specs.slice(0, 1) : specs;
  const grid = document.createElement("div");
  grid.className = "viewport-grid";
  for (const spec of views) {
    const cell = document.createElement("div");
    cell.className = "viewport-cell";
    cell.dataset.view = spec.id;
    const caption = document.createElement("div");
    caption.className = "viewport-label";
    caption.textContent = spec.label;
    cell.appendChild(caption);
    const svg = svgEl("svg");
    svg.setAttribute("width", String(panel));
    svg.setAttribute("height", String(panel));
    svg.setAttribute("viewBox", `0 0 ${panel} ${panel}`);
    svg.classList.add("viewport");
    svg.dataset.view = spec.id;
    const toPixelX = (x: number) => panel / 2 + x * scale;
    const toPixelY = (y: number) => panel / 2 - y * scale; // Y-up
    const frame = svgEl("rect");
    frame.setAttribute("x", "0");
    frame.setAttribute("y", "0");
    frame.setAttribute("width", String(panel));
    frame.setAttribute("height", String(panel));
    frame.setAttribute("fill", "#f5f6f8");
    frame.setAttribute("stroke", "#c9ccd4");
    svg.appendChild(frame);
    const projected = doc.objects
      .map((obj) => ({ obj, p: spec.projector(obj.center, obj.size) }))
      .filter((entry): entry is { obj: SceneObjectDoc; p: Projected } => entry.p !== null)
      .sort((a, b) => a.p.depth - b.p.depth); // painter's order, far first
    for (const { obj, p } of projected) {
      drawObject(svg, obj, p, toPixelX, toPixelY, scale);
    }
    drawGizmo(svg, spec, toPixelX, panel);
    cell.appendChild(svg);
    grid.appendChild(cell);
  }
  root.appendChild(grid);
}
