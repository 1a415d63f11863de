// Canvas map: grid extent, walls, rooms, landmarks, objects, robot, trail.

import type { ViewState } from "./state.js";

const COLORS = {
  background: "#10141a",
  wall: "#3d4656",
  room: "#2a3342",
  label: "#8b97a8",
  trail: "#3a6ea5",
  robot: "#5bc0eb",
  object: "#f2a541",
  carried: "#f25757",
  landmark: "#7bd389",
  flash: "#f25757",
};

export function drawMap(canvas: HTMLCanvasElement, state: ViewState): void {
  const ctx = canvas.getContext("2d");
  if (!ctx || !state.world) return;
  const { width_m, height_m } = state.world.grid;
  const scale = Math.min(canvas.width / width_m, canvas.height / height_m);
  const w2c = (x: number, y: number): [number, number] => [
    x * scale,
    canvas.height - y * scale,
  ];

  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  for (const room of state.world.rooms) {
    const [x, y, w, h] = room.rect;
    const [cx, cy] = w2c(x, y + h);
    ctx.fillStyle = COLORS.room;
    ctx.fillRect(cx, cy, w * scale, h * scale);
    ctx.fillStyle = COLORS.label;
    ctx.font = "12px sans-serif";
    ctx.fillText(room.name, cx + 6, cy + 16);
  }

  ctx.fillStyle = COLORS.wall;
  for (const [x, y, w, h] of state.world.obstacles) {
    const [cx, cy] = w2c(x, y + h);
    ctx.fillRect(cx, cy, w * scale, h * scale);
  }

  for (const lm of state.world.landmarks) {
    const [cx, cy] = w2c(lm.x, lm.y);
    ctx.strokeStyle = COLORS.landmark;
    ctx.beginPath();
    ctx.arc(cx, cy, 5, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.fillStyle = COLORS.landmark;
    ctx.fillText(lm.name, cx + 8, cy - 6);
  }

  if (state.trail.length > 1) {
    ctx.strokeStyle = COLORS.trail;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    const [sx, sy] = w2c(state.trail[0].x, state.trail[0].y);
    ctx.moveTo(sx, sy);
    for (const p of state.trail) {
      const [cx, cy] = w2c(p.x, p.y);
      ctx.lineTo(cx, cy);
    }
    ctx.stroke();
    ctx.lineWidth = 1;
  }

  for (const obj of state.objects) {
    const [cx, cy] = w2c(obj.x, obj.y);
    ctx.fillStyle = obj.carried ? COLORS.carried : COLORS.object;
    ctx.fillRect(cx - 4, cy - 4, 8, 8);
    ctx.fillStyle = COLORS.label;
    ctx.fillText(obj.cls, cx + 6, cy + 4);
  }

  for (const flash of state.flashes.slice(-6)) {
    const [cx, cy] = w2c(flash.x, flash.y);
    ctx.strokeStyle = COLORS.flash;
    ctx.beginPath();
    ctx.arc(cx, cy, 12, 0, 2 * Math.PI);
    ctx.stroke();
  }

  if (state.robot) {
    const [cx, cy] = w2c(state.robot.x, state.robot.y);
    const theta = state.robot.theta;
    ctx.fillStyle = COLORS.robot;
    ctx.beginPath();
    ctx.moveTo(
      cx + 10 * Math.cos(theta),
      cy - 10 * Math.sin(theta),
    );
    ctx.lineTo(
      cx + 7 * Math.cos(theta + 2.5),
      cy - 7 * Math.sin(theta + 2.5),
    );
    ctx.lineTo(
      cx + 7 * Math.cos(theta - 2.5),
      cy - 7 * Math.sin(theta - 2.5),
    );
    ctx.closePath();
    ctx.fill();
    if (state.robot.holding) {
      ctx.fillStyle = COLORS.carried;
      ctx.fillText(`holding: ${state.robot.holding}`, cx + 12, cy + 14);
    }
  }
}
