"""Command-line entry points: headless runs, serving, dataset tooling,
grading, replication scripts, and metric plots."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dataset import generate_dataset, write_jsonl
from .executor import ExecutionMode, RunConfig, Runtime
from .kb import KBMode, kb_to_document
from .metrics import PlannerPlacement, ResourceProfile
from .planner import grade
from .plan import parse_plan
from .world import (
    DETECTOR_VOCABULARY,
    find_prompt_script,
    find_scenario,
    load_scenario_file,
    world_to_dict,
)

# Per-prompt subtask scores the bundled replication scripts must hit,
# keyed by scenario and KB mode (id: table2).
REPLICATION_EXPECTED = {
    "home": {
        "fixed": ["1/1", "1/1", "1/1", "0/4", "1/4"],
        "growing": ["1/1", "1/1", "1/1", "4/4", "4/4"],
    },
    "office": {
        "fixed": ["1/1", "1/1", "1/1", "1/1", "1/4", "1/4"],
        "growing": ["1/1", "1/1", "1/1", "1/1", "4/4", "4/4"],
    },
}

DEFAULT_HEADERS = [
    ["living room", "kitchen", "kids room"],
    ["lounge", "lobby", "office", "meeting room"],
    ["living room", "kitchen", "kids room", "banana", "laptop", "teddy bear"],
    ["lounge", "lobby", "office", "meeting room", "bottle", "teddy bear"],
    ["garage", "hallway", "storage room"],
]


def _build_config(args) -> RunConfig:
    profile = ResourceProfile()
    return RunConfig(
        scenario=args.scenario,
        planner=getattr(args, "planner", "template"),
        endpoint=getattr(args, "endpoint", None),
        kb_mode=KBMode(args.kb),
        exec_mode=ExecutionMode(getattr(args, "exec_mode", "lenient")),
        placement=PlannerPlacement(getattr(args, "config", "onboard")),
        seed=args.seed,
        profile=profile,
        spin_after_task=not getattr(args, "no_spin", False),
        speed=getattr(args, "speed", 0.0),
    )


def _write_outputs(out_dir: str, runtime: Runtime) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "results.jsonl", "w", encoding="utf-8") as fh:
        for result in runtime.results:
            fh.write(json.dumps(result.to_dict(), sort_keys=True) + "\n")
    with open(out / "metrics.jsonl", "w", encoding="utf-8") as fh:
        for sample in runtime.samples:
            fh.write(json.dumps(sample.to_dict(), sort_keys=True) + "\n")
    with open(out / "events.jsonl", "w", encoding="utf-8") as fh:
        for event in runtime.bus.history():
            fh.write(json.dumps(event, sort_keys=True) + "\n")
    snapshots = {
        "world": world_to_dict(runtime.world),
        "kb": kb_to_document(runtime.kb),
        "tasks": [r.to_dict() for r in runtime.results],
    }
    with open(out / "final_state.json", "w", encoding="utf-8") as fh:
        json.dump(snapshots, fh, sort_keys=True, indent=2)


def cmd_run(args) -> int:
    config = _build_config(args)
    world = load_scenario_file(find_scenario(args.scenario), seed=args.seed)
    runtime = Runtime(world, config)
    prompts = [
        line.strip()
        for line in open(find_prompt_script(args.prompts), encoding="utf-8")
        if line.strip()
    ]
    for prompt in prompts:
        result = runtime.run_task(prompt)
        print(f"{result.task_id}  {result.score}  {prompt}")
    if args.out:
        _write_outputs(args.out, runtime)
        print(f"wrote results, metrics, events to {args.out}")
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    config = _build_config(args)
    service, httpd = serve(config, host=args.host, port=args.port, ui_dir=args.ui)
    url = f"http://{args.host}:{httpd.server_address[1]}"
    print(f"serving {args.scenario} at {url} (ctrl-c to stop)")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.shutdown()
        service.close()
    return 0


def cmd_gen_dataset(args) -> int:
    classes = list(DETECTOR_VOCABULARY)
    if args.classes:
        classes = [
            line.strip()
            for line in open(args.classes, encoding="utf-8")
            if line.strip()
        ]
    dataset = generate_dataset(
        classes, DEFAULT_HEADERS, args.n, args.ratio, args.seed
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_jsonl(dataset["train"], str(out / "train.jsonl"))
    write_jsonl(dataset["test"], str(out / "test.jsonl"))
    print(
        f"wrote {len(dataset['train'])} train / {len(dataset['test'])} test "
        f"records to {out}"
    )
    return 0


def cmd_grade(args) -> int:
    expected = parse_plan(Path(args.expected).read_text(encoding="utf-8"))
    actual = Path(args.actual).read_text(encoding="utf-8")
    print(grade(expected, actual))
    return 0


def _replicate_one(scenario: str, kb_mode: str, seed: int) -> list[str]:
    world = load_scenario_file(find_scenario(scenario), seed=seed)
    config = RunConfig(scenario=scenario, kb_mode=KBMode(kb_mode), seed=seed)
    runtime = Runtime(world, config)
    scores = []
    for line in open(find_prompt_script(scenario), encoding="utf-8"):
        prompt = line.strip()
        if prompt:
            scores.append(str(runtime.run_task(prompt).score))
    return scores


def cmd_replicate(args) -> int:
    if args.target != "table2":
        print(f"unknown replication target {args.target!r}", file=sys.stderr)
        return 2
    scenarios = ["home", "office"] if args.scenario == "both" else [args.scenario]
    kb_modes = ["fixed", "growing"] if args.kb == "both" else [args.kb]
    all_pass = True
    for scenario in scenarios:
        for kb_mode in kb_modes:
            scores = _replicate_one(scenario, kb_mode, args.seed)
            expected = REPLICATION_EXPECTED[scenario][kb_mode]
            ok = scores == expected
            all_pass &= ok
            verdict = "PASS" if ok else "FAIL"
            print(
                f"{scenario:<7} {kb_mode:<8} scores: {' '.join(scores):<30} "
                f"expected: {' '.join(expected):<30} {verdict}"
            )
    print(f"replication table2: {'PASS' if all_pass else 'FAIL'}")
    return 0


def cmd_plot_metrics(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    samples = [json.loads(line) for line in open(args.metrics, encoding="utf-8")]
    results = []
    if args.results:
        results = [json.loads(line) for line in open(args.results, encoding="utf-8")]
    if not samples:
        print("no samples to plot", file=sys.stderr)
        return 1

    t = [s["t"] for s in samples]
    fig, axes = plt.subplots(4, 1, figsize=(10, 11), sharex=False)
    axes[0].step(t, [s["power_w"] for s in samples], where="post", color="tab:red")
    axes[0].set_ylabel("power (W)")
    for r in results:
        axes[0].axvspan(
            r["decode_start_s"], r["decode_end_s"], color="tab:orange", alpha=0.2
        )
    axes[1].step(t, [s["ram_pct"] for s in samples], where="post", color="tab:blue")
    axes[1].set_ylabel("RAM (%)")
    axes[1].set_ylim(0, 100)
    axes[2].step(t, [s["swap_pct"] for s in samples], where="post", color="tab:green")
    axes[2].set_ylabel("swap (%)")
    axes[2].set_ylim(0, 100)
    axes[2].set_xlabel("simulation time (s)")
    if results:
        idx = range(1, len(results) + 1)
        lat = [r["latency_sim_s"] for r in results]
        colors = [
            "tab:purple" if r["plan_kind"] == "manipulation" else "tab:cyan"
            for r in results
        ]
        axes[3].bar(idx, lat, color=colors)
        axes[3].set_ylabel("planning latency (s)")
        axes[3].set_xlabel("task #")
    else:
        axes[3].set_visible(False)
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgebot",
        description="Language-guided robot tasks in a deterministic 2D simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common_run_flags(p):
        p.add_argument("--scenario", default="home", help="scenario name or path")
        p.add_argument("--kb", choices=["fixed", "growing"], default="growing")
        p.add_argument(
            "--exec", dest="exec_mode", choices=["strict", "lenient"],
            default="lenient",
        )
        p.add_argument("--planner", choices=["template", "remote"], default="template")
        p.add_argument("--endpoint", help="remote planner URL")
        p.add_argument(
            "--config", choices=["onboard", "cloud"], default="onboard",
            help="planner placement for the resource model",
        )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--no-spin", action="store_true", help="skip the post-task scan")

    p_run = sub.add_parser("run", help="execute a prompt script headlessly")
    common_run_flags(p_run)
    p_run.add_argument("--prompts", required=True, help="prompt file, one per line")
    p_run.add_argument("--out", help="directory for results/metrics/events files")
    p_run.set_defaults(func=cmd_run)

    p_serve = sub.add_parser("serve", help="start the HTTP API and tick loop")
    common_run_flags(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument(
        "--speed", type=float, default=1.0,
        help="simulation seconds per wall second (0 = unthrottled)",
    )
    p_serve.add_argument("--ui", help="directory with the web console build")
    p_serve.set_defaults(func=cmd_serve)

    p_gen = sub.add_parser("gen-dataset", help="generate the instruction dataset")
    p_gen.add_argument("--n", type=int, default=20000)
    p_gen.add_argument("--ratio", type=float, default=0.75)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--classes", help="optional file of class names")
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen_dataset)

    p_grade = sub.add_parser("grade", help="score a raw plan against expected DSL")
    p_grade.add_argument("--expected", required=True)
    p_grade.add_argument("--actual", required=True)
    p_grade.set_defaults(func=cmd_grade)

    p_rep = sub.add_parser("replicate", help="run a bundled replication script")
    p_rep.add_argument("target", help="replication id (table2)")
    p_rep.add_argument("--scenario", choices=["home", "office", "both"], default="both")
    p_rep.add_argument("--kb", choices=["fixed", "growing", "both"], default="both")
    p_rep.add_argument("--seed", type=int, default=0)
    p_rep.set_defaults(func=cmd_replicate)

    p_plot = sub.add_parser("plot-metrics", help="render metric panels to an image")
    p_plot.add_argument("--metrics", required=True, help="metrics.jsonl path")
    p_plot.add_argument("--results", help="results.jsonl path (decode intervals)")
    p_plot.add_argument("--out", required=True, help="output image path")
    p_plot.set_defaults(func=cmd_plot_metrics)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
