// Session state and its invalidation rules. Result panels may only show
// artifacts computed from the *current* inputs, so every edit clears the
// artifacts that depend on the edited field.

import type { Contour, Design, RootSet, Sweep, Trajectory } from "./api";

export type Mode = "generic-mid" | "generic-crrid" | "control-mid";

export interface Inputs {
  n: number;
  m: number;
  /** ascending plant coefficients (control-mid) */
  a: number[];
  tau: number | null;
  s0: number | null;
  /** requested real roots (generic-crrid) */
  roots: number[];
  /** admissibility window */
  s0Min: number;
  tauMax: number;
  /** spectrum window */
  rect: { x_min: number; x_max: number; y_min: number; y_max: number };
  epsilon: number;
  K: number;
  ic: { kind: "constant" | "polynomial" | "exponential" | "trigonometric"; values: number[] };
  T: number;
  steps: number;
}

export interface SessionState {
  mode: Mode;
  inputs: Inputs;
  contour: Contour | null;
  designs: Design[] | null;
  rootset: RootSet | null;
  sweep: Sweep | null;
  trajectory: Trajectory | null;
}

export function initialState(): SessionState {
  return {
    mode: "control-mid",
    inputs: {
      n: 2,
      m: 0,
      a: [39.478, 0],
      tau: 0.12,
      s0: null,
      roots: [-1, -2],
      s0Min: -30,
      tauMax: 0.2,
      rect: { x_min: -5, x_max: 1, y_min: -3, y_max: 3 },
      epsilon: 1e-3,
      K: 3,
      ic: { kind: "constant", values: [1] },
      T: 5,
      steps: 1000,
    },
    contour: null,
    designs: null,
    rootset: null,
    sweep: null,
    trajectory: null,
  };
}

// What each artifact was computed from. An edit to any listed field (or a
// listed upstream artifact) invalidates the artifact.
const DEPENDS: Record<"contour" | "designs" | "rootset" | "sweep" | "trajectory", (keyof Inputs)[]> = {
  contour: ["n", "m", "a", "s0Min", "tauMax"],
  designs: ["n", "m", "a", "tau", "s0", "roots"],
  rootset: ["rect"],
  sweep: ["rect", "epsilon", "K"],
  trajectory: ["ic", "T", "steps"],
};

/** rootset/sweep/trajectory are views of the current design */
const DOWNSTREAM_OF_DESIGN = ["rootset", "sweep", "trajectory"] as const;

export function setMode(state: SessionState, mode: Mode): SessionState {
  if (mode === state.mode) return state;
  // results computed under another mode are never shown
  return {
    ...state,
    mode,
    contour: null,
    designs: null,
    rootset: null,
    sweep: null,
    trajectory: null,
  };
}

export function editInput<K extends keyof Inputs>(
  state: SessionState,
  field: K,
  value: Inputs[K],
): SessionState {
  const next: SessionState = {
    ...state,
    inputs: { ...state.inputs, [field]: value },
  };
  for (const key of Object.keys(DEPENDS) as (keyof typeof DEPENDS)[]) {
    if (DEPENDS[key].includes(field)) next[key] = null;
  }
  if (next.designs === null) {
    for (const key of DOWNSTREAM_OF_DESIGN) next[key] = null;
  }
  return next;
}

/** Record a freshly computed artifact (clearing what hangs off a new design). */
export function withResult<K extends "contour" | "designs" | "rootset" | "sweep" | "trajectory">(
  state: SessionState,
  key: K,
  value: SessionState[K],
): SessionState {
  const next = { ...state, [key]: value };
  if (key === "designs") {
    for (const k of DOWNSTREAM_OF_DESIGN) next[k] = null;
  }
  return next;
}

/** The design whose spectrum/trajectory panels are shown (dominant branch). */
export function activeDesign(state: SessionState): Design | null {
  return state.designs && state.designs.length > 0 ? state.designs[0] : null;
}
