// Small hand-rolled canvas charts: three telemetry series plus a latency
// bar chart with decode intervals implied by the power trace.

import type { ViewState } from "./state.js";

interface Series {
  label: string;
  color: string;
  pick: (s: { power_w: number; ram_pct: number; swap_pct: number }) => number;
  max: number;
}

const SERIES: Series[] = [
  { label: "power (W)", color: "#f25757", pick: (s) => s.power_w, max: 12 },
  { label: "RAM (%)", color: "#5bc0eb", pick: (s) => s.ram_pct, max: 100 },
  { label: "swap (%)", color: "#7bd389", pick: (s) => s.swap_pct, max: 100 },
];

export function drawCharts(canvas: HTMLCanvasElement, state: ViewState): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  const panels = SERIES.length + 1;
  const panelH = canvas.height / panels;
  const samples = state.metrics;

  SERIES.forEach((series, i) => {
    const top = i * panelH;
    ctx.strokeStyle = "#2a3342";
    ctx.strokeRect(0.5, top + 0.5, canvas.width - 1, panelH - 1);
    ctx.fillStyle = "#8b97a8";
    ctx.font = "11px sans-serif";
    ctx.fillText(series.label, 6, top + 14);
    if (samples.length < 2) {
      ctx.fillText("no samples yet", canvas.width / 2 - 30, top + panelH / 2);
      return;
    }
    const t0 = samples[0].t;
    const t1 = samples[samples.length - 1].t;
    const span = Math.max(t1 - t0, 1e-9);
    ctx.strokeStyle = series.color;
    ctx.beginPath();
    samples.forEach((s, k) => {
      const x = ((s.t - t0) / span) * (canvas.width - 12) + 6;
      const y = top + panelH - 8 - (series.pick(s) / series.max) * (panelH - 24);
      if (k === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  });

  // latency bars from finished tasks
  const top = SERIES.length * panelH;
  ctx.strokeStyle = "#2a3342";
  ctx.strokeRect(0.5, top + 0.5, canvas.width - 1, panelH - 1);
  ctx.fillStyle = "#8b97a8";
  ctx.fillText("planning latency (s)", 6, top + 14);
  const done = state.tasks.filter((t) => t.latencySimS !== null);
  if (done.length === 0) {
    ctx.fillText("no tasks yet", canvas.width / 2 - 26, top + panelH / 2);
    return;
  }
  const maxLat = Math.max(...done.map((t) => t.latencySimS ?? 0), 0.05);
  const barW = Math.min(34, (canvas.width - 20) / done.length - 6);
  done.forEach((taskView, i) => {
    const h = ((taskView.latencySimS ?? 0) / maxLat) * (panelH - 30);
    const x = 10 + i * (barW + 6);
    const y = top + panelH - 8 - h;
    ctx.fillStyle = (taskView.plan ?? []).some((l) => l.startsWith("grab"))
      ? "#b57bd3"
      : "#5bc0eb";
    ctx.fillRect(x, y, barW, h);
    ctx.fillStyle = "#8b97a8";
    ctx.fillText((taskView.latencySimS ?? 0).toFixed(2), x, y - 3);
  });
}
