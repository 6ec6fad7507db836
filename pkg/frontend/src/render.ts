// Canvas renderer: walks a scene graph and draws it.  All geometry comes
// from the scene; nothing here inspects game rules.

import type { Scene, SceneNode } from "./scene.js";

const COLORS = { current: "#1a6", history: "#9ab", alice: "#c80", strip: "rgba(200,40,40,0.35)" };

export interface Viewport {
  scale: number;  // pixels per unit
  cx: number;     // canvas center
  cy: number;
}

export function fitViewport(scene: Scene, width: number, height: number): Viewport {
  let extent = 1.0;
  for (const node of scene.nodes) {
    if (node.kind === "disk") {
      extent = Math.max(extent, Math.abs(node.center[0]) + node.radius,
                        Math.abs(node.center[1]) + node.radius);
    } else if (node.kind === "interval") {
      extent = Math.max(extent, Math.abs(node.lo), Math.abs(node.hi));
    }
  }
  return { scale: 0.45 * Math.min(width, height) / extent, cx: width / 2, cy: height / 2 };
}

export function drawScene(ctx: CanvasRenderingContext2D, scene: Scene,
                          width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
  const vp = fitViewport(scene, width, height);
  if (scene.mode === "table") {
    drawTable(ctx, scene);
  } else {
    for (const node of scene.nodes) drawNode(ctx, node, vp, scene.mode);
  }
  ctx.fillStyle = "#222";
  ctx.font = "14px sans-serif";
  ctx.fillText(scene.badge, 10, 18);
  if (scene.quota) ctx.fillText(scene.quota, 10, 36);
  if (scene.panel) {
    const p = scene.panel;
    ctx.fillText(
      `stage ${p.stage}  window {${p.window.join(",")}}  emitted ${p.emitted}` +
      (p.surviving === null ? "" : `  surviving ${p.surviving}`),
      10, height - 10);
  }
}

function drawNode(ctx: CanvasRenderingContext2D, node: SceneNode, vp: Viewport,
                  mode: "line" | "plane"): void {
  const X = (x: number) => vp.cx + x * vp.scale;
  const Y = (y: number) => vp.cy - y * vp.scale;
  switch (node.kind) {
    case "interval": {
      ctx.strokeStyle = COLORS[node.role];
      ctx.lineWidth = node.role === "current" ? 6 : 2;
      ctx.beginPath();
      ctx.moveTo(X(node.lo), vp.cy);
      ctx.lineTo(X(node.hi), vp.cy);
      ctx.stroke();
      break;
    }
    case "gap": {
      ctx.fillStyle = COLORS.strip;
      ctx.fillRect(X(node.lo), vp.cy - 12, (node.hi - node.lo) * vp.scale, 24);
      break;
    }
    case "disk": {
      ctx.strokeStyle = COLORS[node.role];
      ctx.lineWidth = node.role === "current" ? 3 : 1;
      ctx.beginPath();
      ctx.arc(X(node.center[0]), Y(node.center[1]), node.radius * vp.scale, 0, 2 * Math.PI);
      ctx.stroke();
      break;
    }
    case "strip": {
      // band {x : |<n,x> - offset| <= hw}: drawn as a thick line through
      // the foot point along the perpendicular direction
      const [nx, ny] = node.normal;
      const fx = node.offset * nx, fy = node.offset * ny;
      const len = 4 * Math.max(vp.cx, vp.cy);
      ctx.strokeStyle = COLORS.strip;
      ctx.lineWidth = Math.max(2, 2 * node.halfwidth * vp.scale);
      ctx.beginPath();
      ctx.moveTo(X(fx - ny * len), Y(fy + nx * len));
      ctx.lineTo(X(fx + ny * len), Y(fy - nx * len));
      ctx.stroke();
      break;
    }
    case "marker": {
      const px = X(node.point[0]);
      const py = mode === "line" ? vp.cy : Y(node.point[1]);
      ctx.fillStyle = "#d22";
      ctx.beginPath();
      ctx.arc(px, py, 4, 0, 2 * Math.PI);
      ctx.fill();
      ctx.fillText(node.label, px + 6, py - 6);
      break;
    }
    case "row":
      break;
  }
}

function drawTable(ctx: CanvasRenderingContext2D, scene: Scene): void {
  ctx.fillStyle = "#222";
  ctx.font = "12px monospace";
  let y = 56;
  for (const node of scene.nodes) {
    if (node.kind === "row") {
      ctx.fillText(node.cells.join("  |  "), 10, y);
      y += 16;
    }
  }
}
