#!/usr/bin/env python3
"""Record a full office run through the live HTTP API for the console
tests: initial snapshots, the complete event stream, final snapshots.

Run from the repository root:
    python frontend/scripts/record_fixtures.py
"""

import json
import threading
import time
import urllib.request
from pathlib import Path

from edgebot.executor import RunConfig
from edgebot.kb import KBMode
from edgebot.server import serve

FIXTURES = Path(__file__).parent.parent / "test" / "fixtures"
PROMPTS = [
    "Go to the lounge",
    "Go to the lobby",
    "Go to the office",
    "Go to the meeting room",
    "I'm feeling lonely, bring the teddy bear to the office",
    "Guests are here and they are thirsty bring the bottle to the lobby",
]


def get(base, path):
    with urllib.request.urlopen(base + path, timeout=30) as resp:
        return json.loads(resp.read().decode())


def post(base, path, doc):
    req = urllib.request.Request(
        base + path,
        data=json.dumps(doc).encode(),
        headers={"Content-Type": "application/json"},
    )
    with urllib.request.urlopen(req, timeout=30) as resp:
        return json.loads(resp.read().decode())


def main():
    config = RunConfig(scenario="office", kb_mode=KBMode.GROWING, seed=3)
    service, httpd = serve(config, host="127.0.0.1", port=0)
    threading.Thread(target=httpd.serve_forever, daemon=True).start()
    base = f"http://127.0.0.1:{httpd.server_address[1]}"

    initial = {
        "world": get(base, "/api/world"),
        "kb": get(base, "/api/kb"),
        "metrics": get(base, "/api/metrics"),
        "tasks": get(base, "/api/tasks"),
    }

    task_ids = [post(base, "/api/prompt", {"text": p})["task_id"] for p in PROMPTS]
    while True:
        records = get(base, "/api/tasks")
        if len(records) == len(PROMPTS) and all(
            r["status"] in ("done", "error") for r in records
        ):
            break
        time.sleep(0.05)

    events = []
    req = urllib.request.Request(base + "/api/events?since=0")
    with urllib.request.urlopen(req, timeout=30) as stream:
        finished = 0
        for raw in stream:
            line = raw.decode().strip()
            if not line.startswith("data: "):
                continue
            event = json.loads(line[6:])
            events.append(event)
            if event["type"] == "task_finished":
                finished += 1
                if finished == len(PROMPTS):
                    break

    final = {
        "world": get(base, "/api/world"),
        "kb": get(base, "/api/kb"),
        "metrics": get(base, "/api/metrics"),
        "tasks": get(base, "/api/tasks"),
    }

    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "initial_state.json").write_text(json.dumps(initial, sort_keys=True))
    (FIXTURES / "events.json").write_text(json.dumps(events, sort_keys=True))
    (FIXTURES / "final_state.json").write_text(json.dumps(final, sort_keys=True))
    print(
        f"recorded {len(events)} events, {len(task_ids)} tasks "
        f"-> {FIXTURES}"
    )

    httpd.shutdown()
    service.close()


if __name__ == "__main__":
    main()
