// Wire types for the simulation API and its event stream.

export interface PoseDict {
  x: number;
  y: number;
  theta: number;
}

export interface KbRow {
  name: string;
  x: number;
  y: number;
  theta: number;
  source: "initial" | "detected";
  detected_at: number | null;
}

export interface WorldSnapshot {
  name: string;
  grid: { width_m: number; height_m: number; resolution_m: number };
  obstacles: number[][];
  rooms: { name: string; rect: number[] }[];
  landmarks: ({ name: string } & PoseDict)[];
  robot: PoseDict & { holding: string | null };
  objects: { class: string; x: number; y: number; carried: boolean }[];
  clock: number;
  tick: number;
}

export interface MetricsSample {
  t: number;
  power_w: number;
  ram_pct: number;
  swap_pct: number;
}

export interface SubtaskOutcome {
  kind: string;
  target: string | null;
  status: string;
  reason: string | null;
  elapsed_sim_s: number;
}

export interface TaskResultDoc {
  task_id: string;
  prompt: string;
  plan: string[] | null;
  error: string | null;
  outcomes: SubtaskOutcome[];
  score: { matched: number; total: number };
  plan_kind: string;
  latency_sim_s: number;
  decode_start_s: number;
  decode_end_s: number;
}

export interface TaskRecord {
  task_id: string;
  prompt: string;
  status: "queued" | "running" | "done" | "error";
  result: TaskResultDoc | null;
}

export interface StreamEvent {
  seq: number;
  type: string;
  t: number;
  payload: Record<string, unknown>;
}
