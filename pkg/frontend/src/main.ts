// App wiring: forms -> API -> state -> canvases. All numerics live on the
// server; this file moves values between DOM, requests, and plots.

import {
  Api,
  describeFailure,
  type Contour,
  type InitialCondition,
  type Quasi,
  type RootSet,
} from "./api";
import { legend } from "./colors";
import {
  equallySpacedRoots,
  parseNumberList,
  validateControlMid,
  validateGenericCrrid,
  validateGenericMid,
  validateRect,
  validateSimulation,
  validateSweep,
  validateWindow,
  type FieldErrors,
} from "./forms";
import { snapToContour } from "./picker";
import {
  autoFit,
  drawAxes,
  drawContour,
  drawSpectra,
  drawTrajectory,
  hitTestRoots,
  pxToData,
  type Viewport,
} from "./plots";
import {
  activeDesign,
  editInput,
  initialState,
  setMode,
  withResult,
  type Inputs,
  type Mode,
  type SessionState,
} from "./state";
import { downloadCanvasPng, downloadText, PanelRequest, SUPERSEDED, toCsv } from "./util";

const api = new Api("");
let state: SessionState = initialState();

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};
const input = (id: string) => el<HTMLInputElement>(id);

// ---------------------------------------------------------------------------
// Field parsing (text inputs -> state edits)
// ---------------------------------------------------------------------------

function numberOrNull(text: string): number | null {
  const trimmed = text.trim();
  if (trimmed === "") return null;
  const v = Number(trimmed);
  return Number.isFinite(v) ? v : NaN;
}

function readProblemInputs(): void {
  const n = Number(input("in-n").value);
  const m = Number(input("in-m").value);
  edit("n", Number.isInteger(n) ? n : NaN);
  edit("m", Number.isInteger(m) ? m : NaN);
  edit("a", parseNumberList(input("in-a").value) ?? [NaN]);
  edit("roots", parseNumberList(input("in-roots").value) ?? [NaN]);
  edit("tau", numberOrNull(input("in-tau").value));
  edit("s0", numberOrNull(input("in-s0").value));
}

function edit<K extends keyof Inputs>(field: K, value: Inputs[K]): void {
  if (JSON.stringify(state.inputs[field]) === JSON.stringify(value)) return;
  state = editInput(state, field, value);
}

function showErrors(target: HTMLElement, errors: FieldErrors): boolean {
  target.textContent = Object.values(errors).join("\n");
  return Object.keys(errors).length > 0;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

const ctxOf = (id: string) => el<HTMLCanvasElement>(id).getContext("2d")!;
let regionView: Viewport | null = null;
let rootsView: Viewport | null = null;
let pendingPick: { s0: number; tau: number } | null = null;

function renderModeVisibility(): void {
  document.querySelectorAll<HTMLElement>("[data-mode]").forEach((node) => {
    const modes = (node.dataset.mode ?? "").split(" ");
    node.style.display = modes.includes(state.mode) ? "" : "none";
  });
  document.querySelectorAll<HTMLElement>("[data-mode-box]").forEach((node) => {
    node.style.display = node.dataset.modeBox === state.mode ? "" : "none";
  });
}

function renderDesignSummary(): void {
  const host = el("design-summary");
  if (!state.designs) {
    host.innerHTML = state.contour || state.rootset ? "" : "";
    host.textContent = "";
    return;
  }
  const rows = state.designs
    .map((d, i) => {
      const q = d.quasipolynomial;
      const solved = d.solved_parameter === null ? "" : ` · solved ${d.solved_parameter}`;
      return (
        `<div class="note">branch ${i}${solved}</div>` +
        `<table><tr><th>a</th><td>${q.a.join("</td><td>")}</td></tr>` +
        `<tr><th>b</th><td>${q.b.join("</td><td>")}</td></tr>` +
        `<tr><th>residual</th><td colspan="${Math.max(q.a.length, 1)}">${d.residuals.join(", ")}</td></tr></table>`
      );
    })
    .join("");
  host.innerHTML = rows;
}

function renderRegion(): void {
  const ctx = ctxOf("cv-region");
  const canvas = el<HTMLCanvasElement>("cv-region");
  if (!state.contour) {
    regionView = null;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#777";
    ctx.fillText("no admissibility plot — use “Plot region”", 16, 24);
    return;
  }
  const r = state.contour.rectangle;
  regionView = {
    xMin: r.s0_min,
    xMax: r.s0_max,
    yMin: r.tau_min,
    yMax: r.tau_max,
    width: canvas.width,
    height: canvas.height,
  };
  drawAxes(ctx, regionView, "s0", "tau");
  drawContour(ctx, regionView, state.contour, pendingPick);
}

function spectrumLayers(): { k: number; K: number; rs: RootSet }[] {
  const layers: { k: number; K: number; rs: RootSet }[] = [];
  if (state.sweep) {
    for (const key of Object.keys(state.sweep.per_k)) {
      layers.push({ k: Number(key), K: state.sweep.K, rs: state.sweep.per_k[key] });
    }
  }
  return layers;
}

function renderRoots(): void {
  const canvas = el<HTMLCanvasElement>("cv-roots");
  const ctx = ctxOf("cv-roots");
  const host = el("roots-table");
  if (!state.rootset) {
    rootsView = null;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#777";
    ctx.fillText(state.designs ? "stale — run “Find roots”" : "design first", 16, 24);
    host.textContent = "";
    return;
  }
  const r = state.rootset.rectangle;
  rootsView = {
    xMin: r.x_min,
    xMax: r.x_max,
    yMin: r.y_min,
    yMax: r.y_max,
    width: canvas.width,
    height: canvas.height,
  };
  drawAxes(ctx, rootsView, "Re s", "Im s");
  drawSpectra(ctx, rootsView, [{ k: 0, K: 1, rs: state.rootset }]);
  const rows = state.rootset.roots
    .map(
      ([re, im, mult, res]) =>
        `<tr><td>${re}</td><td>${im}</td><td>${mult}</td><td>${res}</td></tr>`,
    )
    .join("");
  host.innerHTML =
    `<table><tr><th>Re</th><th>Im</th><th>mult</th><th>residual</th></tr>${rows}</table>` +
    `<div class="note">winding ${state.rootset.winding_count} · rightmost ` +
    `${state.rootset.window_abscissa ?? "—"}</div>` +
    (state.rootset.roots.length === 0 ? `<div class="note">window contains no roots</div>` : "");
}

function renderSweep(): void {
  const canvas = el<HTMLCanvasElement>("cv-sweep");
  const ctx = ctxOf("cv-sweep");
  const legendHost = el("sweep-legend");
  if (!state.sweep) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#777";
    ctx.fillText(state.designs ? "stale — run “Sweep delay”" : "design first", 16, 24);
    legendHost.textContent = "";
    return;
  }
  const layers = spectrumLayers();
  const points: [number, number][] = [];
  for (const { rs } of layers) for (const [re, im] of rs.roots) points.push([re, im]);
  const view = autoFit(points, canvas.width, canvas.height);
  drawAxes(ctx, view, "Re s", "Im s");
  drawSpectra(ctx, view, layers);
  legendHost.innerHTML = legend(state.sweep.K)
    .map(
      ({ k, color, marker }) =>
        `<span><span class="swatch" style="background:${color};` +
        (marker === "diamond" ? "transform:rotate(45deg);" : "border-radius:50%;") +
        `"></span>k=${k}</span>`,
    )
    .join("");
}

function renderSim(): void {
  const canvas = el<HTMLCanvasElement>("cv-sim");
  const ctx = ctxOf("cv-sim");
  if (!state.trajectory) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#777";
    ctx.fillText(state.designs ? "stale — run “Simulate”" : "design first", 16, 24);
    return;
  }
  const pts: [number, number][] = state.trajectory.t.map((t, i) => [
    t,
    state.trajectory!.y[i],
  ]);
  const view = autoFit(pts, canvas.width, canvas.height);
  drawAxes(ctx, view, "t", "y");
  drawTrajectory(ctx, view, state.trajectory);
}

function render(): void {
  renderModeVisibility();
  renderDesignSummary();
  renderRegion();
  renderRoots();
  renderSweep();
  renderSim();
}

// ---------------------------------------------------------------------------
// Requests (one in flight per panel)
// ---------------------------------------------------------------------------

const regionReq = new PanelRequest();
const designReq = new PanelRequest();
const rootsReq = new PanelRequest();
const sweepReq = new PanelRequest();
const simReq = new PanelRequest();

function currentQuasi(): Quasi | null {
  const d = activeDesign(state);
  return d ? d.quasipolynomial : null;
}

async function runRegion(): Promise<void> {
  readProblemInputs();
  edit("s0Min", Number(input("in-s0min").value));
  edit("tauMax", Number(input("in-taumax").value));
  const err = el("err-region");
  err.textContent = "";
  const winErrors = validateWindow(state.inputs);
  if (state.mode !== "control-mid") winErrors.mode = "the admissibility map applies to control-oriented MID";
  if (showErrors(el("err-window"), winErrors)) return;
  const body = {
    n: state.inputs.n,
    m: state.inputs.m,
    a: state.inputs.a,
    s0_min: state.inputs.s0Min,
    tau_max: state.inputs.tauMax,
    grid: [300, 300] as [number, number],
  };
  const result = await regionReq.run((signal) => api.admissibility(body, signal)).catch((e) => {
    err.textContent = describeFailure(e);
    return SUPERSEDED;
  });
  if (result === SUPERSEDED) return;
  state = withResult(state, "contour", result as Contour);
  pendingPick = null;
  render();
}

async function runDesign(): Promise<void> {
  readProblemInputs();
  const err = el("err-problem");
  err.textContent = "";
  const { n, m, a, tau, s0, roots } = state.inputs;
  let request: Promise<unknown>;
  if (state.mode === "generic-mid") {
    if (showErrors(err, validateGenericMid({ n, m, tau, s0 }))) return;
    request = api.genericMid({ n, m, tau: tau!, s0: s0! }).then((d) => [d]);
  } else if (state.mode === "generic-crrid") {
    if (showErrors(err, validateGenericCrrid({ n, m, tau, roots }))) return;
    request = api.genericCrrid({ n, m, tau: tau!, roots }).then((d) => [d]);
  } else {
    if (showErrors(err, validateControlMid({ n, m, a, tau, s0 }))) return;
    const given = tau !== null ? { tau } : { s0: s0! };
    request = api.controlMid({ n, m, a, given });
  }
  const result = await designReq.run(() => request).catch((e) => {
    err.textContent = describeFailure(e);
    return SUPERSEDED;
  });
  if (result === SUPERSEDED) return;
  state = withResult(state, "designs", result as SessionState["designs"]);
  render();
}

async function runRoots(): Promise<void> {
  const err = el("err-roots");
  err.textContent = "";
  const q = currentQuasi();
  if (!q) {
    err.textContent = "design first";
    return;
  }
  const rect = {
    x_min: Number(input("rect-xmin").value),
    x_max: Number(input("rect-xmax").value),
    y_min: Number(input("rect-ymin").value),
    y_max: Number(input("rect-ymax").value),
  };
  if (showErrors(err, validateRect(rect))) return;
  edit("rect", rect);
  const result = await rootsReq.run((signal) => api.roots({ q, rect }, signal)).catch((e) => {
    err.textContent = describeFailure(e);
    return SUPERSEDED;
  });
  if (result === SUPERSEDED) return;
  state = withResult(state, "rootset", result as RootSet);
  render();
}

async function runSweep(): Promise<void> {
  const err = el("err-sweep");
  err.textContent = "";
  const q = currentQuasi();
  if (!q) {
    err.textContent = "design first";
    return;
  }
  edit("epsilon", Number(input("in-eps").value));
  const kRaw = Number(input("in-K").value);
  edit("K", Number.isInteger(kRaw) ? kRaw : NaN);
  const { epsilon, K, rect } = state.inputs;
  if (showErrors(err, validateSweep({ epsilon, K, tau: q.tau }))) return;
  const result = await sweepReq
    .run((signal) => api.sensitivity({ q, rect, epsilon, K }, signal))
    .catch((e) => {
      err.textContent = describeFailure(e);
      return SUPERSEDED;
    });
  if (result === SUPERSEDED) return;
  state = withResult(state, "sweep", result as SessionState["sweep"]);
  render();
}

function currentIc(): InitialCondition | null {
  const kind = el<HTMLSelectElement>("ic-kind").value;
  const values = parseNumberList(input("ic-values").value) ?? [NaN];
  edit("ic", { kind: kind as Inputs["ic"]["kind"], values });
  if (kind === "constant") return { constant: values[0] };
  if (kind === "polynomial") return { polynomial: values };
  if (kind === "exponential") return { exponential: { amplitude: values[0], rate: values[1] } };
  return {
    trigonometric: { amplitude: values[0], frequency: values[1], phase: values[2] },
  };
}

async function runSim(): Promise<void> {
  const err = el("err-sim");
  err.textContent = "";
  const q = currentQuasi();
  if (!q) {
    err.textContent = "design first";
    return;
  }
  edit("T", Number(input("in-T").value));
  const stepsRaw = Number(input("in-steps").value);
  edit("steps", Number.isInteger(stepsRaw) ? stepsRaw : NaN);
  const ic = currentIc();
  const { T, steps } = state.inputs;
  const errors = validateSimulation({
    T,
    steps,
    icKind: state.inputs.ic.kind,
    icValues: state.inputs.ic.values,
  });
  if (showErrors(err, errors) || ic === null) return;
  const result = await simReq
    .run((signal) => api.simulate({ q, ic, T, steps }, signal))
    .catch((e) => {
      err.textContent = describeFailure(e);
      return SUPERSEDED;
    });
  if (result === SUPERSEDED) return;
  state = withResult(state, "trajectory", result as SessionState["trajectory"]);
  render();
}

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

function syncInputsToDom(): void {
  input("in-n").value = String(state.inputs.n);
  input("in-m").value = String(state.inputs.m);
  input("in-a").value = state.inputs.a.join(",");
  input("in-roots").value = state.inputs.roots.join(",");
  input("in-tau").value = state.inputs.tau === null ? "" : String(state.inputs.tau);
  input("in-s0").value = state.inputs.s0 === null ? "" : String(state.inputs.s0);
  input("in-s0min").value = String(state.inputs.s0Min);
  input("in-taumax").value = String(state.inputs.tauMax);
  input("rect-xmin").value = String(state.inputs.rect.x_min);
  input("rect-xmax").value = String(state.inputs.rect.x_max);
  input("rect-ymin").value = String(state.inputs.rect.y_min);
  input("rect-ymax").value = String(state.inputs.rect.y_max);
  input("in-eps").value = String(state.inputs.epsilon);
  input("in-K").value = String(state.inputs.K);
  input("ic-values").value = state.inputs.ic.values.join(",");
  input("in-T").value = String(state.inputs.T);
  input("in-steps").value = String(state.inputs.steps);
}

function wire(): void {
  el<HTMLSelectElement>("mode").addEventListener("change", (ev) => {
    state = setMode(state, (ev.target as HTMLSelectElement).value as Mode);
    pendingPick = null;
    render();
  });

  document.querySelectorAll<HTMLButtonElement>("#tabs button").forEach((btn) => {
    btn.addEventListener("click", () => {
      document.querySelectorAll("#tabs button").forEach((b) => b.classList.remove("active"));
      document.querySelectorAll(".panel").forEach((p) => p.classList.remove("active"));
      btn.classList.add("active");
      el(`panel-${btn.dataset.tab}`).classList.add("active");
    });
  });

  el("btn-spaced").addEventListener("click", () => {
    readProblemInputs();
    const roots = equallySpacedRoots(state.inputs.n, state.inputs.m);
    edit("roots", roots);
    input("in-roots").value = roots.join(",");
  });

  el("btn-design").addEventListener("click", () => void runDesign());
  el("btn-region").addEventListener("click", () => void runRegion());
  el("btn-roots").addEventListener("click", () => void runRoots());
  el("btn-sweep").addEventListener("click", () => void runSweep());
  el("btn-sim").addEventListener("click", () => void runSim());

  // picker: click the region plot, snap to the curve, confirm which field
  el<HTMLCanvasElement>("cv-region").addEventListener("click", (ev) => {
    const err = el("err-region");
    err.textContent = "";
    if (!state.contour || !regionView) return;
    const rect = (ev.target as HTMLCanvasElement).getBoundingClientRect();
    const [s0, tau] = pxToData(regionView, ev.clientX - rect.left, ev.clientY - rect.top);
    const pick = snapToContour(state.contour, s0, tau);
    const confirm = el("pick-confirm");
    if (!pick.ok) {
      pendingPick = null;
      confirm.style.display = "none";
      err.textContent = pick.reason;
      render();
      return;
    }
    pendingPick = { s0: pick.s0, tau: pick.tau };
    el("pick-label").textContent = `picked s0 = ${pick.s0}, τ = ${pick.tau}`;
    confirm.style.display = "flex";
    render();
  });
  el("btn-use-tau").addEventListener("click", () => {
    if (!pendingPick) return;
    edit("tau", pendingPick.tau);
    edit("s0", null);
    syncInputsToDom();
    el("pick-confirm").style.display = "none";
    render();
  });
  el("btn-use-s0").addEventListener("click", () => {
    if (!pendingPick) return;
    edit("s0", pendingPick.s0);
    edit("tau", null);
    syncInputsToDom();
    el("pick-confirm").style.display = "none";
    render();
  });

  // hover readout over the nominal spectrum
  el<HTMLCanvasElement>("cv-roots").addEventListener("mousemove", (ev) => {
    if (!state.rootset || !rootsView) return;
    const rect = (ev.target as HTMLCanvasElement).getBoundingClientRect();
    const hit = hitTestRoots(rootsView, state.rootset, ev.clientX - rect.left, ev.clientY - rect.top);
    const out = el("readout");
    if (hit === null) {
      out.textContent = "";
      return;
    }
    const [re, im, mult, res] = state.rootset.roots[hit];
    out.textContent = `s = ${re} ${im >= 0 ? "+" : "-"} ${Math.abs(im)}i · multiplicity ${mult} · residual ${res}`;
  });

  el<HTMLSelectElement>("ic-kind").addEventListener("change", () => {
    const hints: Record<string, string> = {
      constant: "one value: c",
      polynomial: "coefficients c0,c1,… of c0 + c1·t + …",
      exponential: "two values: amplitude, rate",
      trigonometric: "three values: amplitude, frequency, phase",
    };
    el("ic-hint").textContent = hints[el<HTMLSelectElement>("ic-kind").value] ?? "";
  });

  // exports: service documents verbatim, CSV assembled from the same values
  el("btn-region-png").addEventListener("click", () =>
    downloadCanvasPng(el<HTMLCanvasElement>("cv-region"), "admissibility.png"),
  );
  el("btn-roots-json").addEventListener("click", () => {
    if (state.rootset) downloadText("roots.json", JSON.stringify(state.rootset), "application/json");
  });
  el("btn-roots-csv").addEventListener("click", () => {
    if (!state.rootset) return;
    downloadText(
      "roots.csv",
      toCsv(["re", "im", "multiplicity", "residual"], state.rootset.roots),
      "text/csv",
    );
  });
  el("btn-roots-png").addEventListener("click", () =>
    downloadCanvasPng(el<HTMLCanvasElement>("cv-roots"), "spectrum.png"),
  );
  el("btn-sweep-json").addEventListener("click", () => {
    if (state.sweep) downloadText("sensitivity.json", JSON.stringify(state.sweep), "application/json");
  });
  el("btn-sweep-csv").addEventListener("click", () => {
    if (!state.sweep) return;
    const rows: (number | string)[][] = [];
    for (const key of Object.keys(state.sweep.per_k)) {
      for (const [re, im, mult] of state.sweep.per_k[key].roots) rows.push([key, re, im, mult]);
    }
    downloadText("sensitivity.csv", toCsv(["k", "re", "im", "multiplicity"], rows), "text/csv");
  });
  el("btn-sweep-png").addEventListener("click", () =>
    downloadCanvasPng(el<HTMLCanvasElement>("cv-sweep"), "sensitivity.png"),
  );
  el("btn-sim-json").addEventListener("click", () => {
    if (state.trajectory)
      downloadText("trajectory.json", JSON.stringify(state.trajectory), "application/json");
  });
  el("btn-sim-csv").addEventListener("click", () => {
    if (!state.trajectory) return;
    const rows = state.trajectory.t.map((t, i) => [t, state.trajectory!.y[i]]);
    downloadText("trajectory.csv", toCsv(["t", "y"], rows), "text/csv");
  });
  el("btn-sim-png").addEventListener("click", () =>
    downloadCanvasPng(el<HTMLCanvasElement>("cv-sim"), "trajectory.png"),
  );
}

async function boot(): Promise<void> {
  wire();
  syncInputsToDom();
  render();
  try {
    const health = await api.health();
    el("backend").textContent = `service ${health.version} · ${health.backend} backend`;
  } catch {
    el("backend").textContent = "service unreachable";
  }
}

void boot();
