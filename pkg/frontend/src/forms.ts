// Client-side form validation mirroring the service's preconditions, plus
// the parsing helpers the input fields share. Rejections here never reach
// the network.

export type FieldErrors = Record<string, string>;

export function parseNumberList(text: string): number[] | null {
  const parts = text
    .split(",")
    .map((p) => p.trim())
    .filter((p) => p.length > 0);
  if (parts.length === 0) return [];
  const out = [];
  for (const p of parts) {
    const v = Number(p);
    if (!Number.isFinite(v)) return null;
    out.push(v);
  }
  return out;
}

function checkOrders(n: number, m: number, errors: FieldErrors): void {
  if (!Number.isInteger(n) || n < 0) errors.n = "n must be a non-negative integer";
  if (!Number.isInteger(m) || m < 0) errors.m = "m must be a non-negative integer";
  if (!errors.n && !errors.m && n < m) errors.m = "m must not exceed n";
  if (!errors.n && !errors.m && n === 0 && m === 0) {
    errors.n = "n = m = 0 has nothing to design";
  }
}

function checkTau(tau: number | null, errors: FieldErrors, field = "tau"): void {
  if (tau === null || !Number.isFinite(tau) || tau <= 0) {
    errors[field] = "delay must be a positive number";
  }
}

export function validateGenericMid(v: {
  n: number;
  m: number;
  tau: number | null;
  s0: number | null;
}): FieldErrors {
  const errors: FieldErrors = {};
  checkOrders(v.n, v.m, errors);
  checkTau(v.tau, errors);
  if (v.s0 === null || !Number.isFinite(v.s0)) errors.s0 = "s0 must be a real number";
  return errors;
}

export function validateGenericCrrid(v: {
  n: number;
  m: number;
  tau: number | null;
  roots: number[];
}): FieldErrors {
  const errors: FieldErrors = {};
  checkOrders(v.n, v.m, errors);
  checkTau(v.tau, errors);
  const want = v.n + v.m + 1;
  if (!errors.n && !errors.m && v.roots.length !== want) {
    errors.roots = `need exactly n + m + 1 = ${want} roots`;
  }
  if (v.roots.some((r) => !Number.isFinite(r))) errors.roots = "roots must be finite";
  return errors;
}

export function validateControlMid(v: {
  n: number;
  m: number;
  a: number[];
  tau: number | null;
  s0: number | null;
}): FieldErrors {
  const errors: FieldErrors = {};
  checkOrders(v.n, v.m, errors);
  if (v.n >= 1 && v.a.length !== v.n) {
    errors.a = `need exactly n = ${v.n} plant coefficients`;
  }
  if (v.a.some((c) => !Number.isFinite(c))) errors.a = "coefficients must be finite";
  const hasTau = v.tau !== null;
  const hasS0 = v.s0 !== null;
  if (hasTau === hasS0) {
    errors.given = "give exactly one of: delay, root location";
  } else if (hasTau) {
    checkTau(v.tau, errors);
  } else if (!Number.isFinite(v.s0!)) {
    errors.s0 = "s0 must be a real number";
  }
  return errors;
}

export function validateWindow(v: { s0Min: number; tauMax: number }): FieldErrors {
  const errors: FieldErrors = {};
  if (!Number.isFinite(v.s0Min) || v.s0Min >= 0) errors.s0Min = "s0 limit must be negative";
  if (!Number.isFinite(v.tauMax) || v.tauMax <= 0) errors.tauMax = "tau limit must be positive";
  return errors;
}

export function validateRect(r: {
  x_min: number;
  x_max: number;
  y_min: number;
  y_max: number;
}): FieldErrors {
  const errors: FieldErrors = {};
  const vals = [r.x_min, r.x_max, r.y_min, r.y_max];
  if (vals.some((v) => !Number.isFinite(v))) {
    errors.rect = "rectangle bounds must be finite";
  } else if (r.x_min >= r.x_max || r.y_min >= r.y_max) {
    errors.rect = "rectangle must have positive width and height";
  }
  return errors;
}

export function validateSweep(v: { epsilon: number; K: number; tau: number }): FieldErrors {
  const errors: FieldErrors = {};
  if (!Number.isInteger(v.K) || v.K < 1) errors.K = "K must be an integer >= 1";
  if (!Number.isFinite(v.epsilon) || v.epsilon <= 0) {
    errors.epsilon = "epsilon must be positive";
  } else if (!errors.K && v.tau * (1 - v.K * v.epsilon) <= 0) {
    errors.epsilon = "K·epsilon too large: the smallest perturbed delay is not positive";
  }
  return errors;
}

export function validateSimulation(v: {
  T: number;
  steps: number;
  icKind: string;
  icValues: number[];
}): FieldErrors {
  const errors: FieldErrors = {};
  if (!Number.isFinite(v.T) || v.T <= 0) errors.T = "horizon T must be positive";
  if (!Number.isInteger(v.steps) || v.steps < 10) {
    errors.steps = "steps per delay must be an integer >= 10";
  }
  if (v.icValues.some((c) => !Number.isFinite(c))) {
    errors.ic = "initial condition values must be finite";
  } else {
    const want =
      v.icKind === "constant" ? 1 : v.icKind === "exponential" ? 2 : v.icKind === "trigonometric" ? 3 : null;
    if (want !== null && v.icValues.length !== want) {
      errors.ic = `${v.icKind} needs ${want} value(s)`;
    }
    if (v.icKind === "polynomial" && v.icValues.length === 0) {
      errors.ic = "polynomial needs at least one coefficient";
    }
  }
  return errors;
}

/** CRRID preset: n + m + 1 equally spaced real roots from `first` downward. */
export function equallySpacedRoots(n: number, m: number, first = -1, spacing = 1): number[] {
  const count = n + m + 1;
  const out = [];
  for (let i = 0; i < count; i++) out.push(first - i * spacing);
  return out;
}
