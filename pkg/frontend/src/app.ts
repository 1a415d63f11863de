// Operator console: live map, prompt queue, KB panel, telemetry charts.

import {
  fetchKb,
  fetchMetrics,
  fetchTasks,
  fetchWorld,
  openEventStream,
  requestReset,
  submitPrompt,
} from "./api.js";
import { drawCharts } from "./charts.js";
import { drawMap } from "./map.js";
import { applyEvent, bootstrap, busy, newViewState } from "./state.js";
import type { TaskView } from "./state.js";

const state = newViewState();
let dirty = true;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function statusBadge(status: string): string {
  const symbol: Record<string, string> = {
    pending: "○",
    running: "◔",
    success: "●",
    failed: "✕",
  };
  return symbol[status] ?? "?";
}

function renderTasks(): void {
  const host = el<HTMLDivElement>("tasks");
  host.innerHTML = "";
  const ordered: TaskView[] = state.tasks.slice().reverse();
  for (const taskView of ordered) {
    const card = document.createElement("div");
    card.className = `task task-${taskView.status}`;
    const score = taskView.score
      ? ` ${taskView.score.matched}/${taskView.score.total}`
      : "";
    const title = document.createElement("div");
    title.className = "task-title";
    title.textContent = `${taskView.taskId} [${taskView.status}${score}] ${taskView.prompt}`;
    card.appendChild(title);
    if (taskView.error) {
      const err = document.createElement("div");
      err.className = "task-error";
      err.textContent = taskView.error;
      card.appendChild(err);
    }
    for (const sub of taskView.subtasks) {
      const row = document.createElement("div");
      row.className = `subtask sub-${sub.status}`;
      const target = sub.target ? `(${sub.target})` : "()";
      const reason = sub.reason ? ` — ${sub.reason}` : "";
      row.textContent = `${statusBadge(sub.status)} ${sub.kind}${target}${reason}`;
      card.appendChild(row);
    }
    host.appendChild(card);
  }
}

function renderKb(): void {
  const host = el<HTMLTableSectionElement>("kb-rows");
  host.innerHTML = "";
  for (const row of state.kb) {
    const tr = document.createElement("tr");
    const badge = row.source === "initial" ? "map" : "seen";
    tr.innerHTML =
      `<td>${row.name}</td>` +
      `<td><span class="badge badge-${row.source}">${badge}</span></td>` +
      `<td>${row.x.toFixed(2)}, ${row.y.toFixed(2)}</td>`;
    host.appendChild(tr);
  }
}

function renderLog(): void {
  const host = el<HTMLPreElement>("event-log");
  host.textContent = state.log.slice(-40).join("\n");
  host.scrollTop = host.scrollHeight;
}

function renderAll(): void {
  drawMap(el<HTMLCanvasElement>("map"), state);
  drawCharts(el<HTMLCanvasElement>("charts"), state);
  renderTasks();
  renderKb();
  renderLog();
  el<HTMLSpanElement>("queue-state").textContent = busy(state)
    ? "task active — new prompts queue"
    : "idle";
}

function frame(): void {
  if (dirty) {
    dirty = false;
    renderAll();
  }
  requestAnimationFrame(frame);
}

async function init(): Promise<void> {
  const [world, kb, metrics, tasks] = await Promise.all([
    fetchWorld(),
    fetchKb(),
    fetchMetrics(),
    fetchTasks(),
  ]);
  bootstrap(state, world, kb, metrics);
  for (const record of tasks) {
    state.tasks.push({
      taskId: record.task_id,
      prompt: record.prompt,
      status: record.status === "done" ? "done" : "queued",
      plan: record.result?.plan ?? null,
      error: record.result?.error ?? null,
      subtasks: (record.result?.outcomes ?? []).map((o) => ({
        kind: o.kind,
        target: o.target,
        status: o.status === "success" ? "success" : "failed",
        reason: o.reason,
      })),
      score: record.result?.score ?? null,
      latencySimS: record.result?.latency_sim_s ?? null,
    });
  }
  dirty = true;

  openEventStream(state.lastSeq + 1, (event) => {
    applyEvent(state, event);
    if (event.type === "reset") {
      void init();
    }
    dirty = true;
  });

  const form = el<HTMLFormElement>("prompt-form");
  const input = el<HTMLInputElement>("prompt-input");
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const text = input.value.trim();
    if (!text) {
      input.classList.add("invalid");
      return;
    }
    input.classList.remove("invalid");
    void submitPrompt(text).then(() => {
      input.value = "";
    });
  });

  el<HTMLButtonElement>("reset-button").addEventListener("click", () => {
    void requestReset().then((ok) => {
      if (!ok) {
        el<HTMLSpanElement>("queue-state").textContent =
          "reset refused: task active";
      }
    });
  });

  frame();
}

window.addEventListener("load", () => {
  void init();
});
