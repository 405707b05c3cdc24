// Pure UI state machine.  Every interaction is a plain action; replaying a
// recorded action log over the same labeling reproduces the same view.

import { InstanceJson, LabelingJson } from "./types.js";

export interface UiState {
  /** Continuous position along the state sequence, in [0, l-1].  Integer
   * when at rest; fractional while a slide drag is in flight. */
  position: number;
  dragging: boolean;
  /** Current rotation of each stack (stacking method only). */
  stacks: string[][];
  /** 0-based stack whose full leader set is previewed, if any. */
  explored: number | null;
}

export type UiAction =
  | { type: "page"; dir: 1 | -1 }
  | { type: "slide-drag"; dx: number }
  | { type: "slide-release" }
  | { type: "stack-tap"; port: number };

export function initialState(labeling: LabelingJson): UiState {
  return {
    position: 0,
    dragging: false,
    stacks: (labeling.stacks ?? []).map((s) => s.slice()),
    explored: null,
  };
}

function clamp(x: number, lo: number, hi: number): number {
  return x < lo ? lo : x > hi ? hi : x;
}

export function currentStateIndex(state: UiState): number {
  return Math.round(state.position);
}

export function reduce(
  labeling: LabelingJson,
  instance: InstanceJson,
  state: UiState,
  action: UiAction,
): UiState {
  const last = labeling.states.length - 1;
  switch (action.type) {
    case "page": {
      if (labeling.method === "stacking") return state; // stacks page per tap
      const position = clamp(Math.round(state.position) + action.dir, 0, last);
      return { ...state, position, dragging: false };
    }
    case "slide-drag": {
      if (labeling.method !== "sliding") return state;
      // Dragging the row left by one label width advances one state.
      const position = clamp(
        state.position - action.dx / instance.label.width,
        0,
        last,
      );
      return { ...state, position, dragging: true };
    }
    case "slide-release": {
      if (labeling.method !== "sliding") return state;
      return {
        ...state,
        position: clamp(Math.round(state.position), 0, last),
        dragging: false,
      };
    }
    case "stack-tap": {
      if (labeling.method !== "stacking") return state;
      const j = action.port - 1;
      if (j < 0 || j >= state.stacks.length) return state;
      const stacks = state.stacks.map((s) => s.slice());
      const stack = stacks[j]!;
      if (stack.length > 1) {
        stack.push(stack.shift()!);
      }
      return { ...state, stacks, explored: j };
    }
  }
}

export function replay(
  labeling: LabelingJson,
  instance: InstanceJson,
  actions: UiAction[],
  start?: UiState,
): UiState {
  let state = start ?? initialState(labeling);
  for (const action of actions) {
    state = reduce(labeling, instance, state, action);
  }
  return state;
}
