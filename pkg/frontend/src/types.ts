// JSON shapes produced by the labelkit service, plus strict decoders.
// The UI never recomputes costs or assignments; these payloads are the
// single source of truth.

export interface FeatureJson {
  id: string;
  x: number;
  y: number;
  weight: number;
  name?: string;
  category?: string;
}

export interface InstanceJson {
  screen: { width: number; height: number };
  label: { width: number; height: number };
  k: number;
  features: FeatureJson[];
}

export interface AssignmentJson {
  port: number; // 1-based
  feature: string;
}

export interface StateJson {
  index: number; // 1-based
  assignment: AssignmentJson[];
  costs: {
    c_w: number;
    c_c: number;
    c_d: number;
    c_l: number;
    cross_count: number;
  };
}

export type Method = "multipage" | "sliding" | "stacking";

export interface LabelingJson {
  method: Method;
  alpha: number;
  k: number;
  optimal: boolean;
  states: StateJson[];
  totals: Record<string, number>;
  dummy_ids: string[];
  stacks?: string[][];
}

export class DecodeError extends Error {}

function fail(message: string): never {
  throw new DecodeError(message);
}

function obj(value: unknown, where: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(`${where}: expected an object`);
  }
  return value as Record<string, unknown>;
}

function num(value: unknown, where: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    fail(`${where}: expected a finite number`);
  }
  return value;
}

function str(value: unknown, where: string): string {
  if (typeof value !== "string") fail(`${where}: expected a string`);
  return value;
}

function arr(value: unknown, where: string): unknown[] {
  if (!Array.isArray(value)) fail(`${where}: expected an array`);
  return value;
}

export function decodeInstance(value: unknown): InstanceJson {
  const d = obj(value, "instance");
  const screen = obj(d.screen, "instance.screen");
  const label = obj(d.label, "instance.label");
  const features = arr(d.features, "instance.features").map((f, i) => {
    const fd = obj(f, `features[${i}]`);
    const out: FeatureJson = {
      id: str(fd.id, `features[${i}].id`),
      x: num(fd.x, `features[${i}].x`),
      y: num(fd.y, `features[${i}].y`),
      weight: num(fd.weight, `features[${i}].weight`),
    };
    if (fd.name !== undefined) out.name = str(fd.name, `features[${i}].name`);
    if (fd.category !== undefined) {
      out.category = str(fd.category, `features[${i}].category`);
    }
    return out;
  });
  return {
    screen: {
      width: num(screen.width, "screen.width"),
      height: num(screen.height, "screen.height"),
    },
    label: {
      width: num(label.width, "label.width"),
      height: num(label.height, "label.height"),
    },
    k: num(d.k, "k"),
    features,
  };
}

export function decodeLabeling(value: unknown): LabelingJson {
  const d = obj(value, "labeling");
  const method = str(d.method, "method");
  if (method !== "multipage" && method !== "sliding" && method !== "stacking") {
    fail(`method: unknown labeling method '${method}'`);
  }
  const k = num(d.k, "k");
  const states = arr(d.states, "states").map((s, i) => {
    const sd = obj(s, `states[${i}]`);
    const assignment = arr(sd.assignment, `states[${i}].assignment`).map(
      (a, j) => {
        const ad = obj(a, `states[${i}].assignment[${j}]`);
        return {
          port: num(ad.port, "assignment.port"),
          feature: str(ad.feature, "assignment.feature"),
        };
      },
    );
    if (assignment.length !== k) {
      fail(`states[${i}]: expected ${k} ports, got ${assignment.length}`);
    }
    const ports = assignment.map((a) => a.port).sort((a, b) => a - b);
    ports.forEach((p, j) => {
      if (p !== j + 1) fail(`states[${i}]: ports must be exactly 1..${k}`);
    });
    const cd = obj(sd.costs, `states[${i}].costs`);
    return {
      index: num(sd.index, `states[${i}].index`),
      assignment,
      costs: {
        c_w: num(cd.c_w, "costs.c_w"),
        c_c: num(cd.c_c, "costs.c_c"),
        c_d: num(cd.c_d, "costs.c_d"),
        c_l: num(cd.c_l, "costs.c_l"),
        cross_count: num(cd.cross_count, "costs.cross_count"),
      },
    };
  });
  if (states.length === 0) fail("states: labeling has no states");
  const dummy_ids = arr(d.dummy_ids ?? [], "dummy_ids").map((x, i) =>
    str(x, `dummy_ids[${i}]`),
  );
  let stacks: string[][] | undefined;
  if (d.stacks !== undefined) {
    stacks = arr(d.stacks, "stacks").map((s, i) =>
      arr(s, `stacks[${i}]`).map((x, j) => str(x, `stacks[${i}][${j}]`)),
    );
    if (stacks.length !== k) fail(`stacks: expected ${k} stacks`);
  }
  if (method === "stacking" && stacks === undefined) {
    fail("stacks: stacking labeling is missing its stacks");
  }
  return {
    method,
    alpha: num(d.alpha, "alpha"),
    k,
    optimal: Boolean(d.optimal),
    states,
    totals: obj(d.totals ?? {}, "totals") as Record<string, number>,
    dummy_ids,
    stacks,
  };
}

/** The feature order a sliding labeling walks through, reconstructed from
 * its states (first window, then each new rightmost entry). */
export function slidingOrder(labeling: LabelingJson): string[] {
  const first = labeling.states[0]!;
  const order = first.assignment.map((a) => a.feature);
  for (let i = 1; i < labeling.states.length; i++) {
    const st = labeling.states[i]!;
    order.push(st.assignment[st.assignment.length - 1]!.feature);
  }
  return order;
}
