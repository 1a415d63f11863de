// Thin wrappers over the documented simulation API.

import type {
  KbRow,
  MetricsSample,
  StreamEvent,
  TaskRecord,
  WorldSnapshot,
} from "./types.js";

export async function fetchWorld(): Promise<WorldSnapshot> {
  return (await fetch("/api/world")).json();
}

export async function fetchKb(): Promise<KbRow[]> {
  return (await fetch("/api/kb")).json();
}

export async function fetchMetrics(): Promise<MetricsSample[]> {
  return (await fetch("/api/metrics")).json();
}

export async function fetchTasks(): Promise<TaskRecord[]> {
  return (await fetch("/api/tasks")).json();
}

export async function submitPrompt(text: string): Promise<string> {
  const resp = await fetch("/api/prompt", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ text }),
  });
  if (!resp.ok) throw new Error(`prompt rejected: HTTP ${resp.status}`);
  const doc = await resp.json();
  return doc.task_id;
}

export async function requestReset(seed?: number): Promise<boolean> {
  const resp = await fetch("/api/reset", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(seed === undefined ? {} : { seed }),
  });
  return resp.ok;
}

export function openEventStream(
  since: number,
  onEvent: (event: StreamEvent) => void,
): EventSource {
  const source = new EventSource(`/api/events?since=${since}`);
  source.onmessage = (msg) => onEvent(JSON.parse(msg.data) as StreamEvent);
  return source;
}
