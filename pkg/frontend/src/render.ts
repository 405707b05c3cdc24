// Canvas renderer for the watch face: map panel on top, label row below.
// Pure function of (instance, labeling, ui state); no costs or assignments
// are computed here.

import {
  colorForId,
  discreteFrame,
  LabelSlot,
  LeaderPath,
  slidingFrame,
  stackingFrame,
  starsLabel,
} from "./geometry.js";
import { UiState } from "./reducer.js";
import { FeatureJson, InstanceJson, LabelingJson } from "./types.js";

const STACK_EDGE = 4; // visible card edges under a stack's top label

export function canvasSize(instance: InstanceJson): { w: number; h: number } {
  return {
    w: instance.screen.width,
    h: instance.screen.height + instance.label.height + 2 * STACK_EDGE + 2,
  };
}

export function render(
  ctx: CanvasRenderingContext2D,
  instance: InstanceJson,
  labeling: LabelingJson,
  ui: UiState,
): void {
  const { w, h } = canvasSize(instance);
  const screenH = instance.screen.height;
  ctx.clearRect(0, 0, w, h);

  drawMapBackground(ctx, instance);

  let leaders: LeaderPath[] = [];
  let overlay: LeaderPath[] = [];
  let slots: LabelSlot[] = [];
  let stackDepth = 1;
  if (labeling.method === "sliding") {
    const frame = slidingFrame(instance, labeling, ui.position);
    leaders = frame.leaders;
    slots = frame.slots;
  } else if (labeling.method === "stacking") {
    const frame = stackingFrame(instance, labeling, ui.stacks, ui.explored);
    leaders = frame.leaders;
    overlay = frame.exploredLeaders;
    slots = frame.tops;
    stackDepth = ui.stacks[0]?.length ?? 1;
  } else {
    const index = Math.round(ui.position);
    const frame = discreteFrame(instance, labeling, index);
    leaders = frame.leaders;
    slots = frame.slots;
  }

  const labeled = new Set(leaders.map((l) => l.featureId));
  drawFeatures(ctx, instance, labeled);

  ctx.save();
  ctx.lineWidth = 1.0;
  ctx.globalAlpha = 0.35;
  for (const path of overlay) {
    strokeLeader(ctx, path);
  }
  ctx.globalAlpha = 1.0;
  ctx.lineWidth = 1.4;
  for (const path of leaders) {
    strokeLeader(ctx, path);
  }
  ctx.restore();

  const byId = new Map(instance.features.map((f) => [f.id, f]));
  for (const slot of slots) {
    if (labeling.method === "stacking" && stackDepth > 1) {
      drawStackEdges(ctx, instance, slot.centerX, stackDepth);
    }
    drawLabel(ctx, instance, slot, byId.get(slot.featureId ?? "") ?? null);
  }
}

function drawMapBackground(ctx: CanvasRenderingContext2D, instance: InstanceJson) {
  const w = instance.screen.width;
  const sh = instance.screen.height;
  ctx.fillStyle = "#fbfbf8";
  ctx.fillRect(0, 0, w, sh);
  ctx.strokeStyle = "#e4e6e2";
  ctx.lineWidth = 1;
  const step = 30;
  ctx.beginPath();
  for (let x = step; x < w; x += step) {
    ctx.moveTo(x, 0);
    ctx.lineTo(x, sh);
  }
  for (let y = step; y < sh; y += step) {
    ctx.moveTo(0, y);
    ctx.lineTo(w, y);
  }
  ctx.stroke();
  ctx.strokeStyle = "#9aa0a6";
  ctx.strokeRect(0.5, 0.5, w - 1, sh - 1);
}

function drawFeatures(
  ctx: CanvasRenderingContext2D,
  instance: InstanceJson,
  labeled: Set<string>,
) {
  for (const f of instance.features) {
    const r = 2 + 3 * f.weight;
    ctx.beginPath();
    ctx.arc(f.x, f.y, r, 0, Math.PI * 2);
    const shade = Math.round(180 - 110 * f.weight);
    ctx.fillStyle = `rgb(${shade},${shade},${shade + 20})`;
    ctx.fill();
    if (labeled.has(f.id)) {
      ctx.strokeStyle = colorForId(f.id);
      ctx.lineWidth = 2;
      ctx.stroke();
    }
  }
}

function strokeLeader(ctx: CanvasRenderingContext2D, path: LeaderPath) {
  ctx.strokeStyle = colorForId(path.featureId);
  ctx.beginPath();
  const [first, ...rest] = path.points;
  if (!first) return;
  ctx.moveTo(first[0], first[1]);
  for (const [x, y] of rest) {
    ctx.lineTo(x, y);
  }
  ctx.stroke();
}

function drawStackEdges(
  ctx: CanvasRenderingContext2D,
  instance: InstanceJson,
  centerX: number,
  depth: number,
) {
  const lw = instance.label.width - 4;
  const top = instance.screen.height + 2;
  const edges = Math.min(depth - 1, 2);
  ctx.strokeStyle = "#b9bdb6";
  ctx.fillStyle = "#f1f1ee";
  for (let e = edges; e >= 1; e--) {
    const off = e * STACK_EDGE;
    ctx.fillRect(centerX - lw / 2 + off / 2, top + off, lw - off, instance.label.height);
    ctx.strokeRect(centerX - lw / 2 + off / 2, top + off, lw - off, instance.label.height);
  }
}

function drawLabel(
  ctx: CanvasRenderingContext2D,
  instance: InstanceJson,
  slot: LabelSlot,
  feature: FeatureJson | null,
) {
  const lw = instance.label.width - 4;
  const lh = instance.label.height;
  const top = instance.screen.height + 2;
  const left = slot.centerX - lw / 2;
  ctx.save();
  if (slot.dimmed) ctx.globalAlpha = 0.6;
  if (feature === null) {
    ctx.strokeStyle = "#cfd2cc";
    ctx.setLineDash([4, 3]);
    ctx.strokeRect(left, top, lw, lh);
    ctx.restore();
    return;
  }
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(left, top, lw, lh);
  ctx.strokeStyle = colorForId(feature.id);
  ctx.lineWidth = 2;
  ctx.strokeRect(left, top, lw, lh);
  ctx.fillStyle = "#1a1a1a";
  ctx.textAlign = "center";
  ctx.font = `bold ${Math.round(lh * 0.3)}px system-ui, sans-serif`;
  ctx.fillText(starsLabel(feature.weight), slot.centerX, top + lh * 0.38, lw - 6);
  ctx.font = `${Math.round(lh * 0.2)}px system-ui, sans-serif`;
  ctx.fillText(feature.name ?? feature.id, slot.centerX, top + lh * 0.64, lw - 6);
  if (feature.category) {
    ctx.fillStyle = "#6b6f66";
    ctx.font = `${Math.round(lh * 0.17)}px system-ui, sans-serif`;
    ctx.fillText(feature.category, slot.centerX, top + lh * 0.86, lw - 6);
  }
  ctx.restore();
}
