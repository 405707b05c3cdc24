// Pure layout math shared by the canvas renderer and the tests.

import { InstanceJson, LabelingJson, slidingOrder } from "./types.js";

export interface LeaderPath {
  featureId: string;
  /** Polyline: feature -> bend -> port, in screen coordinates. */
  points: [number, number][];
  anchorX: number;
}

export interface LabelSlot {
  /** Feature id, or null for an empty (dummy/offscreen) slot. */
  featureId: string | null;
  centerX: number;
  dimmed: boolean;
}

export function portX(instance: InstanceJson, j: number): number {
  return ((j + 0.5) * instance.screen.width) / instance.k;
}

export function leaderPath(
  fx: number,
  fy: number,
  anchorX: number,
  screenHeight: number,
  featureId: string,
): LeaderPath {
  return {
    featureId,
    points: [
      [fx, fy],
      [anchorX, fy],
      [anchorX, screenHeight],
    ],
    anchorX,
  };
}

export function starsLabel(weight: number): string {
  const stars = 1 + 4 * weight;
  return `${stars % 1 === 0 ? stars.toFixed(0) : stars.toFixed(1)}★`;
}

/** Leaders and label slots for one discrete multipage/stacking-view state. */
export function discreteFrame(
  instance: InstanceJson,
  labeling: LabelingJson,
  stateIndex: number,
): { leaders: LeaderPath[]; slots: LabelSlot[] } {
  const st = labeling.states[stateIndex]!;
  const dummies = new Set(labeling.dummy_ids);
  const byId = new Map(instance.features.map((f) => [f.id, f]));
  const leaders: LeaderPath[] = [];
  const slots: LabelSlot[] = [];
  for (const a of st.assignment) {
    const x = portX(instance, a.port - 1);
    if (dummies.has(a.feature)) {
      slots.push({ featureId: null, centerX: x, dimmed: false });
      continue;
    }
    const f = byId.get(a.feature);
    if (!f) {
      slots.push({ featureId: null, centerX: x, dimmed: false });
      continue;
    }
    slots.push({ featureId: f.id, centerX: x, dimmed: false });
    leaders.push(leaderPath(f.x, f.y, x, instance.screen.height, f.id));
  }
  return { leaders, slots };
}

/** Continuous sliding frame at a fractional position.  Labels shift left as
 * the position grows; leaders stay anchored to their moving labels. */
export function slidingFrame(
  instance: InstanceJson,
  labeling: LabelingJson,
  position: number,
): { leaders: LeaderPath[]; slots: LabelSlot[] } {
  const order = slidingOrder(labeling);
  const k = labeling.k;
  const last = labeling.states.length - 1;
  const p = Math.min(Math.max(position, 0), last);
  const base = Math.floor(p);
  const frac = p - base;
  const pitch = instance.screen.width / k;
  const byId = new Map(instance.features.map((f) => [f.id, f]));
  const leaders: LeaderPath[] = [];
  const slots: LabelSlot[] = [];
  // One extra slot on the right slides in as frac grows.
  for (let s = 0; s <= k; s++) {
    const orderIndex = base + s;
    if (orderIndex >= order.length) break;
    const id = order[orderIndex]!;
    const centerX = (s + 0.5) * pitch - frac * pitch;
    if (centerX < -pitch / 2 || centerX > instance.screen.width + pitch / 2) {
      continue;
    }
    const partial = s === k ? frac : s === 0 ? 1 - frac : 1;
    if (partial <= 0) continue;
    const f = byId.get(id);
    slots.push({ featureId: id, centerX, dimmed: partial < 1 });
    if (f) {
      leaders.push(leaderPath(f.x, f.y, centerX, instance.screen.height, f.id));
    }
  }
  return { leaders, slots };
}

/** Leaders for the stacking view: each stack's top entry, plus every entry
 * of the explored stack when one is active. */
export function stackingFrame(
  instance: InstanceJson,
  labeling: LabelingJson,
  stacks: string[][],
  explored: number | null,
): { leaders: LeaderPath[]; exploredLeaders: LeaderPath[]; tops: LabelSlot[] } {
  const dummies = new Set(labeling.dummy_ids);
  const byId = new Map(instance.features.map((f) => [f.id, f]));
  const leaders: LeaderPath[] = [];
  const exploredLeaders: LeaderPath[] = [];
  const tops: LabelSlot[] = [];
  stacks.forEach((stack, j) => {
    const x = portX(instance, j);
    const top = stack[0];
    const topReal = top !== undefined && !dummies.has(top) ? top : null;
    tops.push({ featureId: topReal, centerX: x, dimmed: false });
    if (topReal) {
      const f = byId.get(topReal);
      if (f) leaders.push(leaderPath(f.x, f.y, x, instance.screen.height, f.id));
    }
    if (explored === j) {
      for (const id of stack) {
        if (dummies.has(id)) continue;
        const f = byId.get(id);
        if (f) {
          exploredLeaders.push(
            leaderPath(f.x, f.y, x, instance.screen.height, f.id),
          );
        }
      }
    }
  });
  return { leaders, exploredLeaders, tops };
}

/** Deterministic outline color per feature id. */
export function colorForId(id: string): string {
  let h = 2166136261;
  for (let i = 0; i < id.length; i++) {
    h ^= id.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  const hue = ((h >>> 0) % 360 + 360) % 360;
  return `hsl(${hue}, 70%, 42%)`;
}
