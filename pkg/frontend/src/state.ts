// Client-side view state: a pure reducer over the event stream.
//
// The console renders only what arrived from the API: an initial snapshot
// plus ordered events. No simulation logic lives here, which is what makes
// replaying a recorded stream equivalent to having watched it live.

import type {
  KbRow,
  MetricsSample,
  PoseDict,
  StreamEvent,
  WorldSnapshot,
} from "./types.js";

export interface SubtaskView {
  kind: string;
  target: string | null;
  status: "pending" | "running" | "success" | "failed";
  reason: string | null;
}

export interface TaskView {
  taskId: string;
  prompt: string;
  status: "queued" | "planning" | "running" | "done" | "failed";
  plan: string[] | null;
  error: string | null;
  subtasks: SubtaskView[];
  score: { matched: number; total: number } | null;
  latencySimS: number | null;
}

export interface ObjectView {
  cls: string;
  x: number;
  y: number;
  carried: boolean;
}

export interface DetectionFlash {
  cls: string;
  x: number;
  y: number;
  seq: number;
}

export interface ViewState {
  world: WorldSnapshot | null;
  robot: (PoseDict & { holding: string | null }) | null;
  trail: { x: number; y: number }[];
  objects: ObjectView[];
  kb: KbRow[];
  tasks: TaskView[];
  metrics: MetricsSample[];
  flashes: DetectionFlash[];
  log: string[];
  lastSeq: number;
}

const TRAIL_CAP = 4000;
const LOG_CAP = 200;
const FLASH_CAP = 24;

export function newViewState(): ViewState {
  return {
    world: null,
    robot: null,
    trail: [],
    objects: [],
    kb: [],
    tasks: [],
    metrics: [],
    flashes: [],
    log: [],
    lastSeq: -1,
  };
}

export function bootstrap(
  state: ViewState,
  world: WorldSnapshot,
  kb: KbRow[],
  metrics: MetricsSample[],
): void {
  state.world = world;
  state.robot = { ...world.robot };
  state.objects = world.objects.map((o) => ({
    cls: o.class,
    x: o.x,
    y: o.y,
    carried: o.carried,
  }));
  state.kb = kb.map((row) => ({ ...row }));
  state.metrics = metrics.slice();
  state.trail = [{ x: world.robot.x, y: world.robot.y }];
}

export function busy(state: ViewState): boolean {
  return state.tasks.some(
    (t) => t.status === "queued" || t.status === "planning" || t.status === "running",
  );
}

function task(state: ViewState, taskId: string): TaskView | undefined {
  return state.tasks.find((t) => t.taskId === taskId);
}

function pushLog(state: ViewState, line: string): void {
  state.log.push(line);
  if (state.log.length > LOG_CAP) state.log.splice(0, state.log.length - LOG_CAP);
}

export function applyEvent(state: ViewState, event: StreamEvent): void {
  // Ordered application: stale or duplicate events are dropped.
  if (event.seq <= state.lastSeq) return;
  state.lastSeq = event.seq;
  const p = event.payload as Record<string, any>;

  switch (event.type) {
    case "task_queued": {
      state.tasks.push({
        taskId: p.task_id,
        prompt: p.prompt,
        status: "queued",
        plan: null,
        error: null,
        subtasks: [],
        score: null,
        latencySimS: null,
      });
      pushLog(state, `task ${p.task_id} queued: ${p.prompt}`);
      break;
    }
    case "plan_generated": {
      let view = task(state, p.task_id);
      if (!view) {
        view = {
          taskId: p.task_id,
          prompt: p.prompt,
          status: "queued",
          plan: null,
          error: null,
          subtasks: [],
          score: null,
          latencySimS: null,
        };
        state.tasks.push(view);
      }
      view.plan = p.plan;
      view.error = p.error;
      view.latencySimS = p.latency_sim_s;
      view.status = p.error ? "failed" : "running";
      if (p.plan) {
        view.subtasks = (p.plan as string[]).map((line) => {
          const kind = line.split("(")[0];
          const target = line.includes("()")
            ? null
            : line.slice(line.indexOf("(") + 1, -1);
          return { kind, target, status: "pending", reason: null };
        });
      }
      pushLog(state, `plan for ${p.task_id}: ${p.plan ? p.plan.join(" ; ") : p.error}`);
      break;
    }
    case "subtask_started": {
      const view = task(state, p.task_id);
      const sub = view?.subtasks[p.index];
      if (sub) sub.status = "running";
      break;
    }
    case "subtask_finished": {
      const view = task(state, p.task_id);
      const sub = view?.subtasks[p.index];
      if (sub) {
        sub.status = p.status === "success" ? "success" : "failed";
        sub.reason = p.reason ?? null;
      }
      if (p.robot && state.robot) {
        state.robot = { ...(p.robot as PoseDict), holding: p.holding ?? null };
      }
      // Keep object markers truthful through grab/drop.
      if (p.kind === "grab" && p.status === "success") {
        const obj = state.objects.find((o) => o.cls === p.target && !o.carried);
        if (obj) obj.carried = true;
      }
      if (p.kind === "drop" && p.status === "success") {
        for (const obj of state.objects) {
          if (obj.carried) {
            obj.carried = false;
            obj.x = (p.robot as PoseDict).x;
            obj.y = (p.robot as PoseDict).y;
          }
        }
      }
      break;
    }
    case "task_finished": {
      const view = task(state, p.task_id);
      if (view) {
        view.score = p.score;
        view.status = p.error ? "failed" : "done";
      }
      pushLog(
        state,
        `task ${p.task_id} finished ${p.score.matched}/${p.score.total}`,
      );
      break;
    }
    case "detection": {
      if (state.robot) {
        state.flashes.push({
          cls: p.class,
          x: (p.robot as PoseDict).x,
          y: (p.robot as PoseDict).y,
          seq: event.seq,
        });
        if (state.flashes.length > FLASH_CAP) state.flashes.shift();
      }
      pushLog(state, `detected ${p.class} at ${p.range_m.toFixed(2)} m`);
      break;
    }
    case "kb_update": {
      const row: KbRow = {
        name: p.name,
        x: p.x,
        y: p.y,
        theta: p.theta,
        source: p.source,
        detected_at: p.detected_at,
      };
      const existing = state.kb.findIndex((r) => r.name === row.name);
      if (existing >= 0) state.kb[existing] = row;
      else state.kb.push(row);
      break;
    }
    case "robot_pose": {
      state.robot = { x: p.x, y: p.y, theta: p.theta, holding: p.holding ?? null };
      state.trail.push({ x: p.x, y: p.y });
      if (state.trail.length > TRAIL_CAP)
        state.trail.splice(0, state.trail.length - TRAIL_CAP);
      for (const obj of state.objects) {
        if (obj.carried) {
          obj.x = p.x;
          obj.y = p.y;
        }
      }
      break;
    }
    case "metrics": {
      state.metrics.push(p as MetricsSample);
      break;
    }
    case "reset": {
      const fresh = newViewState();
      Object.assign(state, fresh, { lastSeq: event.seq });
      pushLog(state, `reset: ${p.scenario} seed ${p.seed}`);
      break;
    }
    default:
      break;
  }
}
