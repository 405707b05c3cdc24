import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  colorForId,
  discreteFrame,
  portX,
  slidingFrame,
  stackingFrame,
  starsLabel,
} from "../src/geometry.js";
import { decodeInstance, decodeLabeling, slidingOrder } from "../src/types.js";
import { initialState, reduce } from "../src/reducer.js";

function fixture(name: string): unknown {
  return JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8"));
}

const instance = decodeInstance(fixture("instance.json"));
const multipage = decodeLabeling(fixture("multipage.json"));
const sliding = decodeLabeling(fixture("sliding.json"));
const stacking = decodeLabeling(fixture("stacking.json"));

describe("portX", () => {
  it("ports tile the bottom edge", () => {
    expect([0, 1, 2, 3].map((j) => portX(instance, j))).toEqual([
      37.5, 112.5, 187.5, 262.5,
    ]);
  });
});

describe("discreteFrame", () => {
  it("draws one leader per real port", () => {
    const frame = discreteFrame(instance, multipage, 0);
    expect(frame.leaders).toHaveLength(4);
    expect(frame.slots).toHaveLength(4);
    for (const path of frame.leaders) {
      const [start, bend, end] = path.points;
      expect(start![1]).toBe(bend![1]); // horizontal first
      expect(bend![0]).toBe(end![0]); // then vertical
      expect(end![1]).toBe(instance.screen.height);
    }
  });
});

describe("slidingFrame", () => {
  it("matches the discrete state at integer positions", () => {
    for (const pos of [0, 1, sliding.states.length - 1]) {
      const frame = slidingFrame(instance, sliding, pos);
      const state = sliding.states[pos]!;
      const ids = frame.slots.filter((s) => !s.dimmed).map((s) => s.featureId);
      expect(ids).toEqual(state.assignment.map((a) => a.feature));
      const xs = frame.slots.map((s) => s.centerX);
      expect(xs.slice(0, 4)).toEqual([37.5, 112.5, 187.5, 262.5]);
    }
  });

  it("shifts labels and leaders continuously between states", () => {
    const frac = 0.25;
    const frame = slidingFrame(instance, sliding, frac);
    const pitch = instance.screen.width / instance.k;
    expect(frame.slots[0]!.centerX).toBeCloseTo(0.5 * pitch - frac * pitch, 9);
    // The incoming fifth label peeks in from the right.
    expect(frame.slots.length).toBe(5);
    const order = slidingOrder(sliding);
    expect(frame.slots[4]!.featureId).toBe(order[4]);
    // Leaders anchor at their label centers while dragging.
    for (const leader of frame.leaders) {
      const slot = frame.slots.find((s) => s.featureId === leader.featureId)!;
      expect(leader.anchorX).toBeCloseTo(slot.centerX, 9);
    }
  });
});

describe("stackingFrame", () => {
  it("shows the topmost leader per stack, all leaders when explored", () => {
    const ui = initialState(stacking);
    const base = stackingFrame(instance, stacking, ui.stacks, null);
    expect(base.leaders).toHaveLength(4);
    expect(base.exploredLeaders).toHaveLength(0);
    const explored = stackingFrame(instance, stacking, ui.stacks, 2);
    expect(explored.exploredLeaders).toHaveLength(ui.stacks[2]!.length);
  });

  it("rotating a stack moves the next label's leader up", () => {
    let ui = initialState(stacking);
    const second = ui.stacks[0]![1]!;
    ui = reduce(stacking, instance, ui, { type: "stack-tap", port: 1 });
    const frame = stackingFrame(instance, stacking, ui.stacks, ui.explored);
    expect(frame.tops[0]!.featureId).toBe(second);
  });
});

describe("labels", () => {
  it("stars text follows the weight", () => {
    expect(starsLabel(1)).toBe("5★");
    expect(starsLabel(0)).toBe("1★");
    expect(starsLabel(0.625)).toBe("3.5★");
  });

  it("id colors are deterministic and spread", () => {
    expect(colorForId("p001")).toBe(colorForId("p001"));
    const colors = new Set(
      instance.features.map((f) => colorForId(f.id)),
    );
    expect(colors.size).toBeGreaterThan(6);
  });
});
