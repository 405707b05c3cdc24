// Service client.  Fetches run through a latest-wins wrapper: a response is
// discarded when a newer request of the same kind has already started, so a
// slow solve can never clobber a fresher one.

import { decodeInstance, decodeLabeling, InstanceJson, LabelingJson, Method } from "./types.js";

export interface InstanceEntry {
  id: string;
  n?: number;
  k?: number;
  warning?: string;
}

export interface SolveParams {
  instanceId: string;
  method: Method;
  alpha: number;
  mode?: "exact" | "heuristic";
  hardC1?: boolean;
  seed?: number;
  iterations?: number;
}

export function latest<A extends unknown[], T>(
  fn: (...args: A) => Promise<T>,
): (...args: A) => Promise<T | null> {
  let current = 0;
  return async (...args: A) => {
    const mine = ++current;
    const result = await fn(...args);
    return mine === current ? result : null;
  };
}

async function getJson(base: string, path: string): Promise<unknown> {
  const resp = await fetch(base + path);
  const body: unknown = await resp.json();
  if (!resp.ok) {
    const msg =
      typeof body === "object" && body !== null && "error" in body
        ? String((body as { error: unknown }).error)
        : `HTTP ${resp.status}`;
    throw new Error(msg);
  }
  return body;
}

export function makeClient(base: string) {
  return {
    async health(): Promise<boolean> {
      try {
        const d = (await getJson(base, "/api/health")) as { status?: string };
        return d.status === "ok";
      } catch {
        return false;
      }
    },

    async listInstances(): Promise<InstanceEntry[]> {
      const d = (await getJson(base, "/api/instances")) as {
        instances?: InstanceEntry[];
      };
      return d.instances ?? [];
    },

    async getInstance(id: string): Promise<InstanceJson> {
      return decodeInstance(await getJson(base, `/api/instances/${id}`));
    },

    async solve(params: SolveParams): Promise<LabelingJson> {
      const resp = await fetch(base + "/api/solve", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({
          instance_id: params.instanceId,
          method: params.method,
          alpha: params.alpha,
          mode: params.mode,
          hard_c1: params.hardC1 ?? false,
          seed: params.seed ?? 0,
          iterations: params.iterations ?? 5000,
        }),
      });
      const body: unknown = await resp.json();
      if (!resp.ok) {
        const msg =
          typeof body === "object" && body !== null && "error" in body
            ? String((body as { error: unknown }).error)
            : `HTTP ${resp.status}`;
        throw new Error(msg);
      }
      return decodeLabeling(body);
    },
  };
}
