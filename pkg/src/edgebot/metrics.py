"""Process scheduling state machine and piecewise-constant telemetry model.

Models the deployment profile of the edge stack: the detector runs
continuously, the local planner sits loaded-but-idle and only decodes
when a prompt arrives. Telemetry (power, RAM, swap) is derived from that
state, not measured from the host; the defaults are the profile's
contract values.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum


class DetectorState(str, Enum):
    OFF = "off"
    ACTIVE = "active"


class LlmState(str, Enum):
    UNLOADED = "unloaded"
    LOADED_IDLE = "loaded_idle"
    DECODING = "decoding"


class PlannerPlacement(str, Enum):
    ONBOARD = "onboard"
    CLOUD = "cloud"


class PlanKind(str, Enum):
    NAVIGATION = "navigation"
    MANIPULATION = "manipulation"


class IllegalTransition(Exception):
    pass


@dataclass(frozen=True)
class ProcessState:
    detector: DetectorState = DetectorState.OFF
    llm: LlmState = LlmState.UNLOADED
    config: PlannerPlacement = PlannerPlacement.ONBOARD


def initial_state(config: PlannerPlacement) -> ProcessState:
    """Post-boot state: detector not yet started; onboard keeps the
    planner resident (loaded, idle), cloud never loads one."""
    llm = (
        LlmState.LOADED_IDLE
        if config is PlannerPlacement.ONBOARD
        else LlmState.UNLOADED
    )
    return ProcessState(DetectorState.OFF, llm, config)


@dataclass(frozen=True)
class ResourceProfile:
    baseline_power_w: float = 6.0
    decode_power_w: float = 9.2
    ram_pct: float = 92.0
    swap_pct_cloud: float = 25.0
    swap_pct_onboard: float = 50.0
    latency_cloud_s: float = 0.020
    latency_onboard_nav_s: float = 8.0
    latency_onboard_manip_s: float = 10.0

    def __post_init__(self):
        values = (
            self.baseline_power_w, self.decode_power_w, self.ram_pct,
            self.swap_pct_cloud, self.swap_pct_onboard, self.latency_cloud_s,
            self.latency_onboard_nav_s, self.latency_onboard_manip_s,
        )
        if any(v < 0 for v in values):
            raise ValueError("profile values must be non-negative")
        if self.decode_power_w < self.baseline_power_w:
            raise ValueError("decode power below baseline")


@dataclass(frozen=True)
class MetricsSample:
    t: float
    power_w: float
    ram_pct: float
    swap_pct: float

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "power_w": self.power_w,
            "ram_pct": self.ram_pct,
            "swap_pct": self.swap_pct,
        }


def process_transition(state: ProcessState, event: str) -> ProcessState:
    """Apply a scheduler event; raise IllegalTransition when it is not
    legal in the current state.

    Cloud placement never decodes locally: prompt_received and
    decode_finished leave the llm untouched there.
    """
    if event == "detector_started":
        if state.detector is DetectorState.ACTIVE:
            raise IllegalTransition("detector already active")
        return replace(state, detector=DetectorState.ACTIVE)
    if event == "prompt_received":
        if state.config is PlannerPlacement.CLOUD:
            return state
        if state.llm is not LlmState.LOADED_IDLE:
            raise IllegalTransition(f"prompt_received while llm {state.llm.value}")
        return replace(state, llm=LlmState.DECODING)
    if event == "decode_finished":
        if state.config is PlannerPlacement.CLOUD:
            return state
        if state.llm is not LlmState.DECODING:
            raise IllegalTransition(f"decode_finished while llm {state.llm.value}")
        return replace(state, llm=LlmState.LOADED_IDLE)
    raise IllegalTransition(f"unknown event {event!r}")


def decode_duration(
    profile: ResourceProfile, plan_kind: PlanKind, config: PlannerPlacement
) -> float:
    """Simulated planning latency for one prompt."""
    if config is PlannerPlacement.CLOUD:
        return profile.latency_cloud_s
    if plan_kind is PlanKind.MANIPULATION:
        return profile.latency_onboard_manip_s
    return profile.latency_onboard_nav_s


def sample_resources(
    state: ProcessState, profile: ResourceProfile, t: float
) -> MetricsSample:
    """Instantaneous telemetry for the current process state."""
    if state.detector is not DetectorState.ACTIVE:
        raise ValueError("telemetry undefined before the detector starts")
    power = (
        profile.decode_power_w
        if state.llm is LlmState.DECODING
        else profile.baseline_power_w
    )
    swap = (
        profile.swap_pct_onboard
        if state.config is PlannerPlacement.ONBOARD
        else profile.swap_pct_cloud
    )
    return MetricsSample(t, power, profile.ram_pct, swap)
