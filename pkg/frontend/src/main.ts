// Bootstraps the demo: wires the controls and pointer gestures to the pure
// reducer, fetches instances/labelings from the service, renders on change.

import { latest, makeClient } from "./api.js";
import { canvasSize, render } from "./render.js";
import { initialState, reduce, UiAction, UiState } from "./reducer.js";
import { InstanceJson, LabelingJson, Method } from "./types.js";

interface App {
  instance: InstanceJson | null;
  labeling: LabelingJson | null;
  ui: UiState | null;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const params = new URLSearchParams(location.search);
  const apiBase = params.get("api") ?? "http://127.0.0.1:8000";
  const client = makeClient(apiBase);
  const canvas = el<HTMLCanvasElement>("watch");
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas 2d context unavailable");

  const instanceSel = el<HTMLSelectElement>("instance");
  const methodSel = el<HTMLSelectElement>("method");
  const alphaInput = el<HTMLInputElement>("alpha");
  const alphaOut = el<HTMLElement>("alpha-value");
  const modeSel = el<HTMLSelectElement>("mode");
  const hardC1Input = el<HTMLInputElement>("hardc1");
  const seedInput = el<HTMLInputElement>("seed");
  const banner = el<HTMLElement>("banner");
  const status = el<HTMLElement>("status");

  const app: App = { instance: null, labeling: null, ui: null };

  function showError(message: string): void {
    banner.textContent = message;
    banner.style.display = "block";
  }

  function clearError(): void {
    banner.style.display = "none";
  }

  function draw(): void {
    if (!app.instance || !app.labeling || !app.ui) return;
    const { w, h } = canvasSize(app.instance);
    if (canvas.width !== w || canvas.height !== h) {
      canvas.width = w;
      canvas.height = h;
    }
    render(ctx!, app.instance, app.labeling, app.ui);
    const index = Math.round(app.ui.position) + 1;
    const total = app.labeling.states.length;
    const opt = app.labeling.optimal ? "" : " (not proven optimal)";
    status.textContent =
      app.labeling.method === "stacking"
        ? `stacking: tap a stack to rotate it${opt}`
        : `state ${index} / ${total}${opt}`;
  }

  function dispatch(action: UiAction): void {
    if (!app.instance || !app.labeling || !app.ui) return;
    app.ui = reduce(app.labeling, app.instance, app.ui, action);
    draw();
  }

  function syncUrl(): void {
    const next = new URLSearchParams(location.search);
    next.set("instance", instanceSel.value);
    next.set("method", methodSel.value);
    next.set("alpha", alphaInput.value);
    history.replaceState(null, "", `?${next.toString()}`);
  }

  const solveLatest = latest(client.solve);

  async function resolve(): Promise<void> {
    if (!instanceSel.value) return;
    const method = methodSel.value as Method;
    modeSel.disabled = method !== "sliding";
    hardC1Input.disabled = method !== "sliding";
    alphaOut.textContent = alphaInput.value;
    syncUrl();
    status.textContent = "solving…";
    try {
      const labeling = await solveLatest({
        instanceId: instanceSel.value,
        method,
        alpha: Number(alphaInput.value),
        mode: method === "sliding" ? (modeSel.value as "exact" | "heuristic") : undefined,
        hardC1: hardC1Input.checked,
        seed: Number(seedInput.value) || 0,
      });
      if (labeling === null) return; // a newer request superseded this one
      clearError();
      app.labeling = labeling;
      app.ui = initialState(labeling);
      draw();
    } catch (err) {
      showError(err instanceof Error ? err.message : String(err));
    }
  }

  async function loadInstance(): Promise<void> {
    if (!instanceSel.value) return;
    try {
      app.instance = await client.getInstance(instanceSel.value);
      clearError();
      await resolve();
    } catch (err) {
      showError(err instanceof Error ? err.message : String(err));
    }
  }

  // Pointer gestures: drag slides the label row; a tap pops a stack or,
  // outside stacking, clicking the row's halves pages.
  let dragPointer: number | null = null;
  let dragMoved = 0;
  canvas.addEventListener("pointerdown", (ev) => {
    dragPointer = ev.pointerId;
    dragMoved = 0;
    canvas.setPointerCapture(ev.pointerId);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (dragPointer !== ev.pointerId || !app.labeling) return;
    const scale = canvas.width / canvas.getBoundingClientRect().width;
    const dx = ev.movementX * scale;
    dragMoved += Math.abs(dx);
    if (app.labeling.method === "sliding" && dx !== 0) {
      dispatch({ type: "slide-drag", dx });
    }
  });
  canvas.addEventListener("pointerup", (ev) => {
    if (dragPointer !== ev.pointerId) return;
    dragPointer = null;
    if (!app.labeling || !app.instance) return;
    if (app.labeling.method === "sliding") {
      if (dragMoved > 2) {
        dispatch({ type: "slide-release" });
        return;
      }
    }
    const rect = canvas.getBoundingClientRect();
    const scale = canvas.width / rect.width;
    const x = (ev.clientX - rect.left) * scale;
    const y = (ev.clientY - rect.top) * scale;
    if (y <= app.instance.screen.height) return;
    if (app.labeling.method === "stacking") {
      const port = Math.floor((x / app.instance.screen.width) * app.instance.k) + 1;
      dispatch({ type: "stack-tap", port });
    } else {
      dispatch({ type: "page", dir: x < canvas.width / 2 ? -1 : 1 });
    }
  });

  el<HTMLButtonElement>("prev").addEventListener("click", () =>
    dispatch({ type: "page", dir: -1 }),
  );
  el<HTMLButtonElement>("next").addEventListener("click", () =>
    dispatch({ type: "page", dir: 1 }),
  );
  document.addEventListener("keydown", (ev) => {
    if (ev.key === "ArrowLeft") dispatch({ type: "page", dir: -1 });
    if (ev.key === "ArrowRight") dispatch({ type: "page", dir: 1 });
  });

  instanceSel.addEventListener("change", () => void loadInstance());
  methodSel.addEventListener("change", () => void resolve());
  alphaInput.addEventListener("change", () => void resolve());
  modeSel.addEventListener("change", () => void resolve());
  hardC1Input.addEventListener("change", () => void resolve());
  seedInput.addEventListener("change", () => void resolve());

  void (async () => {
    const healthy = await client.health();
    if (!healthy) {
      showError(
        `service unreachable at ${apiBase} - start it with: ` +
          "labelkit serve --instances-dir <dir> (append ?api=... to override)",
      );
      return;
    }
    const entries = await client.listInstances();
    const usable = entries.filter((e) => e.warning === undefined);
    for (const e of usable) {
      const opt = document.createElement("option");
      opt.value = e.id;
      opt.textContent = `${e.id} (n=${e.n}, k=${e.k})`;
      instanceSel.appendChild(opt);
    }
    if (usable.length === 0) {
      showError("no instances available; generate some with: labelkit gen --out <dir>");
      return;
    }
    const wanted = params.get("instance");
    if (wanted && usable.some((e) => e.id === wanted)) {
      instanceSel.value = wanted;
    }
    const method = params.get("method");
    if (method === "multipage" || method === "sliding" || method === "stacking") {
      methodSel.value = method;
    }
    const alpha = params.get("alpha");
    if (alpha !== null && !Number.isNaN(Number(alpha))) {
      alphaInput.value = alpha;
    }
    await loadInstance();
  })();
}

main();
