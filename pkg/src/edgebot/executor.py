"""Task execution: plan, decode, run subtasks, grow the knowledge base.

The logical concurrency of the architecture (a detector process feeding
the KB while the executor acts) is realized as a deterministic two-phase
tick: every simulation tick first runs the detector phase
(kb_process_tick) and then advances the executor by one control step.
One task is in flight at a time; prompts queue.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .events import EventBus
from .kb import (
    KBMode,
    KnowledgeBase,
    Pose,
    kb_init,
    kb_insert,
    kb_lookup,
)
from .metrics import (
    MetricsSample,
    PlanKind,
    PlannerPlacement,
    ResourceProfile,
    decode_duration,
    initial_state,
    process_transition,
    sample_resources,
)
from .nav import NavParams, navigate_to, spin_scan
from .plan import ActionKind, Plan, SubTask
from .planner import (
    PlannerError,
    PlannerRequest,
    PlannerResponse,
    Score,
    build_prompt,
    remote_plan,
    template_plan,
)
from .world import (
    DetectorConfig,
    NotHolding,
    OutOfReach,
    World,
    arm_action,
    initial_kb_entries,
    sense,
    step_robot,
)


class ExecutionMode(str, Enum):
    STRICT = "strict"
    LENIENT = "lenient"


class FailReason(str, Enum):
    NOT_IN_KB = "not_in_kb"
    UNREACHABLE = "unreachable"
    OUT_OF_REACH = "out_of_reach"
    NOT_HOLDING = "not_holding"
    PLAN_ERROR = "plan_error"


@dataclass
class SubTaskOutcome:
    subtask: SubTask
    status: str  # "success" | "failed"
    reason: str | None = None
    elapsed_sim_s: float = 0.0

    def __post_init__(self):
        if (self.status == "failed") != (self.reason is not None):
            raise ValueError("reason must be present exactly when failed")

    def to_dict(self) -> dict:
        return {
            "kind": self.subtask.kind.value,
            "target": self.subtask.target,
            "status": self.status,
            "reason": self.reason,
            "elapsed_sim_s": self.elapsed_sim_s,
        }


@dataclass
class TaskResult:
    task_id: str
    prompt: str
    plan_lines: list[str] | None
    error: str | None
    outcomes: list[SubTaskOutcome]
    score: Score
    exec_mode: str
    plan_kind: str
    latency_sim_s: float
    latency_wall_s: float | None
    decode_start_s: float
    decode_end_s: float
    t_start_s: float
    t_end_s: float

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "prompt": self.prompt,
            "plan": self.plan_lines,
            "error": self.error,
            "outcomes": [o.to_dict() for o in self.outcomes],
            "score": self.score.to_dict(),
            "exec_mode": self.exec_mode,
            "plan_kind": self.plan_kind,
            "latency_sim_s": self.latency_sim_s,
            "latency_wall_s": self.latency_wall_s,
            "decode_start_s": self.decode_start_s,
            "decode_end_s": self.decode_end_s,
            "t_start_s": self.t_start_s,
            "t_end_s": self.t_end_s,
        }


def kb_process_tick(
    world: World,
    kb: KnowledgeBase,
    detector_cfg: DetectorConfig,
    on_detection: Callable | None = None,
    on_insert: Callable | None = None,
) -> list[str]:
    """One detector-phase pass: sense and feed the KB.

    The stored pose is the robot's pose at detection time. Returns the
    names whose KB entry was created or moved by this tick.
    """
    changed: list[str] = []
    for det in sense(world, detector_cfg):
        if on_detection is not None:
            on_detection(det)
        name = det.class_name
        prior = kb_lookup(kb, name)
        pose = world.robot.pose
        if kb_insert(kb, name, pose, world.clock):
            if prior is None or prior != pose:
                changed.append(name)
                if on_insert is not None:
                    on_insert(name)
    return changed


def exec_subtasks(
    plan: Plan,
    kb: KnowledgeBase,
    world: World,
    exec_mode: ExecutionMode = ExecutionMode.LENIENT,
    params: NavParams = NavParams(),
    grab_radius: float = 0.5,
    on_tick: Callable[[], None] | None = None,
    emit: Callable[[str, dict], None] | None = None,
) -> list[SubTaskOutcome]:
    """Run each subtask against the KB and world.

    Navigate/Grab targets must be in the KB at execution time; strict
    mode stops at the first failure, lenient mode (the default) runs the
    whole plan so every subtask earns its own credit.
    """

    def _emit(type_: str, payload: dict):
        if emit is not None:
            emit(type_, payload)

    outcomes: list[SubTaskOutcome] = []
    for index, subtask in enumerate(plan):
        _emit(
            "subtask_started",
            {"index": index, "kind": subtask.kind.value, "target": subtask.target},
        )
        t0 = world.clock
        status, reason = "success", None

        if subtask.kind is ActionKind.NAVIGATE:
            pose = kb_lookup(kb, subtask.target)
            if pose is None:
                status, reason = "failed", FailReason.NOT_IN_KB.value
            else:
                nav = navigate_to(world, pose, params, on_tick)
                if not nav.reached:
                    status, reason = "failed", FailReason.UNREACHABLE.value
        elif subtask.kind is ActionKind.GRAB:
            pose = kb_lookup(kb, subtask.target)
            if pose is None:
                status, reason = "failed", FailReason.NOT_IN_KB.value
            else:
                # Approach implicitly if the plan skipped the navigate.
                if world.robot.pose.distance_to(pose) > grab_radius:
                    navigate_to(world, pose, params, on_tick)
                try:
                    arm_action(world, "grab", subtask.target, pose, grab_radius)
                except OutOfReach:
                    status, reason = "failed", FailReason.OUT_OF_REACH.value
        else:  # DROP
            try:
                arm_action(world, "drop")
            except NotHolding:
                status, reason = "failed", FailReason.NOT_HOLDING.value

        outcome = SubTaskOutcome(subtask, status, reason, world.clock - t0)
        outcomes.append(outcome)
        _emit(
            "subtask_finished",
            {
                "index": index,
                **outcome.to_dict(),
                "robot": world.robot.pose.to_dict(),
                "holding": world.robot.holding,
            },
        )
        if exec_mode is ExecutionMode.STRICT and status == "failed":
            break
    return outcomes


@dataclass
class RunConfig:
    scenario: str = "home"
    planner: str = "template"  # "template" | "remote"
    endpoint: str | None = None
    kb_mode: KBMode = KBMode.GROWING
    exec_mode: ExecutionMode = ExecutionMode.LENIENT
    placement: PlannerPlacement = PlannerPlacement.ONBOARD
    seed: int = 0
    profile: ResourceProfile = field(default_factory=ResourceProfile)
    nav: NavParams = field(default_factory=NavParams)
    grab_radius: float = 0.5
    spin_after_task: bool = True
    spin_steps: int = 12
    sample_interval: float = 0.5
    speed: float = 0.0  # sim seconds per wall second; 0 = unthrottled
    remote_timeout: float = 30.0

    def __post_init__(self):
        if self.planner == "remote" and not self.endpoint:
            raise ValueError("remote planner requires an endpoint")


class Runtime:
    """Owns the world, KB, scheduler state, and event stream for one run."""

    def __init__(self, world: World, config: RunConfig, bus: EventBus | None = None):
        self.world = world
        self.config = config
        self.kb = kb_init(initial_kb_entries(world), config.kb_mode)
        self.bus = bus if bus is not None else EventBus()
        self.profile = config.profile
        self.state = process_transition(
            initial_state(config.placement), "detector_started"
        )
        self.samples: list[MetricsSample] = []
        self.results: list[TaskResult] = []
        self._task_counter = 0
        self._seen_classes: set[str] = set()
        self._last_pose_emitted: Pose | None = None
        # Called at every tick boundary so a service can refresh the
        # immutable snapshots its API handlers read.
        self.snapshot_hook: Callable[[], None] | None = None
        # Telemetry is sampled only inside tick hooks, stamped with the
        # clock at emission, so every sample reflects the state that was
        # live at its timestamp (samples at t == decode_start are always
        # decoding, samples at t == decode_end never are).
        self._next_sample_t = 0.0

    # -- tick phases ------------------------------------------------------

    def on_tick(self) -> None:
        """Detector phase plus bookkeeping; runs at the start of every
        simulation tick, before the executor moves anything."""
        self._emit_pose_if_moved()
        kb_process_tick(
            self.world,
            self.kb,
            self.world.detector,
            on_detection=self._on_detection,
            on_insert=self._on_insert,
        )
        self._maybe_sample()
        if self.snapshot_hook is not None:
            self.snapshot_hook()
        if self.config.speed > 0:
            _time.sleep(self.config.nav.dt / self.config.speed)

    def _on_detection(self, det) -> None:
        if det.class_name not in self._seen_classes:
            self._seen_classes.add(det.class_name)
            self.bus.emit(
                "detection",
                self.world.clock,
                {**det.to_dict(), "robot": self.world.robot.pose.to_dict()},
            )

    def _on_insert(self, name: str) -> None:
        entry = self.kb._entries[name]
        self.bus.emit("kb_update", self.world.clock, entry.to_dict())

    def _emit_pose_if_moved(self) -> None:
        pose = self.world.robot.pose
        if self._last_pose_emitted != pose:
            self._last_pose_emitted = pose
            self.bus.emit(
                "robot_pose",
                self.world.clock,
                {**pose.to_dict(), "holding": self.world.robot.holding},
            )

    def _sample_now(self) -> None:
        sample = sample_resources(self.state, self.profile, self.world.clock)
        self.samples.append(sample)
        self.bus.emit("metrics", self.world.clock, sample.to_dict())
        self._next_sample_t = self.world.clock + self.config.sample_interval

    def _maybe_sample(self) -> None:
        if self.world.clock >= self._next_sample_t:
            self._sample_now()

    # -- task execution ---------------------------------------------------

    def next_task_id(self) -> str:
        self._task_counter += 1
        return f"task-{self._task_counter:04d}"

    def run_task(
        self,
        prompt: str,
        task_id: str | None = None,
        expected_total: int | None = None,
    ) -> TaskResult:
        """Plan and execute one prompt to completion, then spin-scan."""
        if task_id is None:
            task_id = self.next_task_id()
        t_start = self.world.clock
        request = build_prompt(self.kb, prompt, self.config.planner)
        response, error = self._obtain_plan(request)
        plan = response.plan
        kind = (
            PlanKind.MANIPULATION
            if plan is not None and plan.is_manipulation()
            else PlanKind.NAVIGATION
        )

        # Model the planning latency as a decode interval in sim time.
        self.state = process_transition(self.state, "prompt_received")
        duration = decode_duration(self.profile, kind, self.config.placement)
        response.latency_sim_s = duration
        decode_start = self.world.clock
        self._advance(duration)
        self.state = process_transition(self.state, "decode_finished")
        decode_end = self.world.clock

        self.bus.emit(
            "plan_generated",
            self.world.clock,
            {
                "task_id": task_id,
                "prompt": prompt,
                "plan": plan.lines() if plan is not None else None,
                "error": error,
                "latency_sim_s": duration,
            },
        )

        if plan is None:
            outcomes: list[SubTaskOutcome] = []
            score = Score(0, expected_total or 0)
        else:
            outcomes = exec_subtasks(
                plan,
                self.kb,
                self.world,
                self.config.exec_mode,
                self.config.nav,
                self.config.grab_radius,
                self.on_tick,
                lambda type_, payload: self.bus.emit(
                    type_, self.world.clock, {"task_id": task_id, **payload}
                ),
            )
            score = Score(
                sum(1 for o in outcomes if o.status == "success"), len(plan)
            )

        if self.config.spin_after_task:
            for det in spin_scan(
                self.world,
                self.world.detector,
                self.config.spin_steps,
                self.config.nav,
                self.on_tick,
            ):
                prior = kb_lookup(self.kb, det.class_name)
                pose = self.world.robot.pose
                if kb_insert(self.kb, det.class_name, pose, self.world.clock):
                    if prior is None or prior != pose:
                        self._on_insert(det.class_name)

        self._emit_pose_if_moved()
        result = TaskResult(
            task_id=task_id,
            prompt=prompt,
            plan_lines=plan.lines() if plan is not None else None,
            error=error,
            outcomes=outcomes,
            score=score,
            exec_mode=self.config.exec_mode.value,
            plan_kind=kind.value,
            latency_sim_s=response.latency_sim_s,
            latency_wall_s=response.latency_wall_s,
            decode_start_s=decode_start,
            decode_end_s=decode_end,
            t_start_s=t_start,
            t_end_s=self.world.clock,
        )
        self.results.append(result)
        self.bus.emit(
            "task_finished",
            self.world.clock,
            {
                "task_id": task_id,
                "score": score.to_dict(),
                "outcomes": [o.to_dict() for o in outcomes],
                "error": error,
            },
        )
        return result

    def _obtain_plan(
        self, request: PlannerRequest
    ) -> tuple[PlannerResponse, str | None]:
        try:
            if self.config.planner == "remote":
                response = remote_plan(
                    self.config.endpoint, request, self.config.remote_timeout
                )
            else:
                response = template_plan(request)
        except PlannerError as exc:
            return (
                PlannerResponse(raw_text=""),
                f"{type(exc).__name__}: {exc}",
            )
        if response.parse_error is not None:
            return response, f"ParseError: {response.parse_error}"
        return response, None

    def _advance(self, duration: float) -> None:
        """Tick the world forward with the robot idle (decode wait)."""
        dt = self.config.nav.dt
        t0 = self.world.clock
        while True:
            remaining = duration - (self.world.clock - t0)
            if remaining <= 1e-12:
                break
            self.on_tick()
            step_robot(self.world, (0.0, 0.0), min(dt, remaining))
