import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  DecodeError,
  decodeInstance,
  decodeLabeling,
  slidingOrder,
} from "../src/types.js";

function fixture(name: string): unknown {
  return JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8"));
}

describe("decodeInstance", () => {
  it("accepts the bundled sample", () => {
    const inst = decodeInstance(fixture("instance.json"));
    expect(inst.k).toBe(4);
    expect(inst.features).toHaveLength(12);
    expect(inst.screen.width).toBe(300);
  });

  it("names the offending field", () => {
    const bad = fixture("instance.json") as { features: { x: unknown }[] };
    bad.features[0]!.x = "oops";
    expect(() => decodeInstance(bad)).toThrowError(/features\[0\]\.x/);
  });
});

describe("decodeLabeling", () => {
  it("accepts all three bundled labelings", () => {
    for (const name of ["multipage.json", "sliding.json", "stacking.json"]) {
      const lab = decodeLabeling(fixture(name));
      expect(lab.k).toBe(4);
      expect(lab.states.length).toBeGreaterThan(0);
    }
  });

  it("rejects a state with mismatched ports", () => {
    const bad = fixture("multipage.json") as {
      states: { assignment: { port: number }[] }[];
    };
    bad.states[0]!.assignment[0]!.port = 7;
    expect(() => decodeLabeling(bad)).toThrowError(DecodeError);
    expect(() => decodeLabeling(bad)).toThrowError(/ports must be exactly/);
  });

  it("rejects stacking payloads without stacks", () => {
    const bad = fixture("stacking.json") as Record<string, unknown>;
    delete bad.stacks;
    expect(() => decodeLabeling(bad)).toThrowError(/stacks/);
  });

  it("rejects unknown methods", () => {
    const bad = fixture("multipage.json") as Record<string, unknown>;
    bad.method = "teleport";
    expect(() => decodeLabeling(bad)).toThrowError(/unknown labeling method/);
  });
});

describe("slidingOrder", () => {
  it("reconstructs the order the states walk through", () => {
    const lab = decodeLabeling(fixture("sliding.json"));
    const order = slidingOrder(lab);
    expect(order).toHaveLength(12);
    expect(new Set(order).size).toBe(12);
    // Each state must be the k-window of the order at its index.
    lab.states.forEach((st, i) => {
      const window = order.slice(i, i + lab.k);
      expect(st.assignment.map((a) => a.feature)).toEqual(window);
    });
  });
});
