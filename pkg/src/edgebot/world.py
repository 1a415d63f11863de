"""Deterministic 2D world: occupancy grid, rooms, objects, robot, sensor.

Stands in for the physical environment and the onboard detector. The
world is mutated in place by a single writer (the tick loop); snapshots
for other threads are plain dicts produced by world_to_dict.

The sensor is a geometric field-of-view model: an object is detected iff
its class is allowlisted, it is within range, inside the FOV cone, has
line of sight, and a seeded per-tick coin succeeds.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import gridops
from .kb import EntrySource, KBEntry, Pose, wrap_angle
from .plan import normalize_entity

# Default detector vocabulary: the 80 everyday object classes recognized
# by the compact detector family this simulator emulates.
DETECTOR_VOCABULARY: tuple[str, ...] = (
    "person", "bicycle", "car", "motorcycle", "airplane", "bus", "train",
    "truck", "boat", "traffic light", "fire hydrant", "stop sign",
    "parking meter", "bench", "bird", "cat", "dog", "horse", "sheep",
    "cow", "elephant", "bear", "zebra", "giraffe", "backpack", "umbrella",
    "handbag", "tie", "suitcase", "frisbee", "skis", "snowboard",
    "sports ball", "kite", "baseball bat", "baseball glove", "skateboard",
    "surfboard", "tennis racket", "bottle", "wine glass", "cup", "fork",
    "knife", "spoon", "bowl", "banana", "apple", "sandwich", "orange",
    "broccoli", "carrot", "hot dog", "pizza", "donut", "cake", "chair",
    "couch", "potted plant", "bed", "dining table", "toilet", "tv",
    "laptop", "mouse", "remote", "keyboard", "cell phone", "microwave",
    "oven", "toaster", "sink", "refrigerator", "book", "clock", "vase",
    "scissors", "teddy bear", "hair drier", "toothbrush",
)


class ScenarioError(Exception):
    pass


class SchemaError(ScenarioError):
    pass


class OverlapError(ScenarioError):
    """An entity was placed inside an occupied cell."""


class UnknownClass(ScenarioError):
    """An object class outside the detector vocabulary."""


class ArmError(Exception):
    pass


class OutOfReach(ArmError):
    pass


class NotHolding(ArmError):
    pass


@dataclass(frozen=True)
class DetectorConfig:
    fov_degrees: float = 60.0
    max_range: float = 2.5
    allowlist: frozenset[str] = frozenset(DETECTOR_VOCABULARY)
    detection_probability: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.fov_degrees <= 360.0):
            raise ValueError("fov_degrees must be in (0, 360]")
        if self.max_range <= 0.0:
            raise ValueError("max_range must be positive")
        if not (0.0 <= self.detection_probability <= 1.0):
            raise ValueError("detection_probability must be in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "fov_degrees": self.fov_degrees,
            "max_range_m": self.max_range,
            "allowlist": sorted(self.allowlist),
            "detection_probability": self.detection_probability,
        }


@dataclass(frozen=True)
class Detection:
    class_name: str
    range_m: float
    bearing: float
    confidence: float

    def to_dict(self) -> dict:
        return {
            "class": self.class_name,
            "range_m": self.range_m,
            "bearing": self.bearing,
            "confidence": self.confidence,
        }


@dataclass
class OccupancyGrid:
    resolution: float
    occ: np.ndarray  # (ny, nx) uint8, nonzero = occupied

    @property
    def nx(self) -> int:
        return self.occ.shape[1]

    @property
    def ny(self) -> int:
        return self.occ.shape[0]

    @property
    def width_m(self) -> float:
        return self.nx * self.resolution

    @property
    def height_m(self) -> float:
        return self.ny * self.resolution

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        return int(math.floor(x / self.resolution)), int(math.floor(y / self.resolution))

    def in_bounds(self, ix: int, iy: int) -> bool:
        return 0 <= ix < self.nx and 0 <= iy < self.ny

    def is_free_point(self, x: float, y: float) -> bool:
        ix, iy = self.cell_of(x, y)
        return self.in_bounds(ix, iy) and not self.occ[iy, ix]


@dataclass
class Room:
    name: str
    rect: tuple[float, float, float, float]  # x, y, w, h


@dataclass
class Landmark:
    name: str
    pose: Pose


@dataclass
class WorldObject:
    class_name: str
    x: float
    y: float
    carried: bool = False


@dataclass
class RobotState:
    pose: Pose
    holding: str | None = None


@dataclass
class World:
    name: str
    grid: OccupancyGrid
    rooms: list[Room]
    landmarks: list[Landmark]
    objects: list[WorldObject]
    robot: RobotState
    detector: DetectorConfig
    obstacles: list[tuple[float, float, float, float]] = field(default_factory=list)
    clock: float = 0.0
    tick_index: int = 0
    rng_seed: int = 0


def _require(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = doc[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError(f"{where}: {key!r} must be a number")
        return float(value)
    if not isinstance(value, kind):
        raise SchemaError(f"{where}: {key!r} must be {kind.__name__}")
    return value


def _rect(raw, where: str) -> tuple[float, float, float, float]:
    if not (isinstance(raw, (list, tuple)) and len(raw) == 4):
        raise SchemaError(f"{where}: rect must be [x, y, w, h]")
    x, y, w, h = (float(v) for v in raw)
    if w <= 0 or h <= 0:
        raise SchemaError(f"{where}: rect must have positive size")
    return x, y, w, h


def _mark_rect(occ: np.ndarray, res: float, rect: tuple[float, float, float, float]):
    x, y, w, h = rect
    ny, nx = occ.shape
    ix0 = max(0, int(math.floor(x / res + 1e-9)))
    iy0 = max(0, int(math.floor(y / res + 1e-9)))
    ix1 = min(nx, int(math.ceil((x + w) / res - 1e-9)))
    iy1 = min(ny, int(math.ceil((y + h) / res - 1e-9)))
    occ[iy0:iy1, ix0:ix1] = 1


def load_scenario(doc: dict, seed: int = 0) -> World:
    """Build a World from a scenario document (see the shipped *.scenario
    files for the format). Raises SchemaError, OverlapError, UnknownClass."""
    if not isinstance(doc, dict):
        raise SchemaError("scenario document must be an object")
    name = _require(doc, "name", str, "scenario")
    grid_doc = _require(doc, "grid", dict, "scenario")
    width = _require(grid_doc, "width_m", float, "grid")
    height = _require(grid_doc, "height_m", float, "grid")
    res = _require(grid_doc, "resolution_m", float, "grid")
    if res <= 0:
        raise SchemaError("grid: resolution_m must be positive")
    if width < res or height < res:
        raise SchemaError("grid: world smaller than one cell")
    nx = int(round(width / res))
    ny = int(round(height / res))
    occ = np.zeros((ny, nx), dtype=np.uint8)
    obstacles = [
        _rect(r, "grid.obstacles") for r in grid_doc.get("obstacles", [])
    ]
    for rect in obstacles:
        _mark_rect(occ, res, rect)
    grid = OccupancyGrid(res, occ)

    rooms = [
        Room(_require(r, "name", str, "rooms"), _rect(r.get("rect"), "rooms"))
        for r in doc.get("rooms", [])
    ]

    landmarks: list[Landmark] = []
    seen: set[str] = set()
    for item in doc.get("landmarks", []):
        lname = _require(item, "name", str, "landmarks")
        if normalize_entity(lname) != lname:
            raise SchemaError(f"landmarks: name {lname!r} is not canonical")
        if lname in seen:
            raise SchemaError(f"landmarks: duplicate name {lname!r}")
        seen.add(lname)
        pose = Pose(
            _require(item, "x", float, "landmarks"),
            _require(item, "y", float, "landmarks"),
            float(item.get("theta", 0.0)),
        )
        if not grid.is_free_point(pose.x, pose.y):
            raise OverlapError(f"landmark {lname!r} is inside an occupied cell")
        landmarks.append(Landmark(lname, pose))

    vocabulary = set(DETECTOR_VOCABULARY)
    objects: list[WorldObject] = []
    for item in doc.get("objects", []):
        cls = _require(item, "class", str, "objects")
        if cls not in vocabulary:
            raise UnknownClass(f"object class {cls!r} not in detector vocabulary")
        ox = _require(item, "x", float, "objects")
        oy = _require(item, "y", float, "objects")
        if not grid.is_free_point(ox, oy):
            raise OverlapError(f"object {cls!r} at ({ox}, {oy}) is inside an occupied cell")
        objects.append(WorldObject(cls, ox, oy))

    start_doc = _require(doc, "robot_start", dict, "scenario")
    start = Pose(
        _require(start_doc, "x", float, "robot_start"),
        _require(start_doc, "y", float, "robot_start"),
        float(start_doc.get("theta", 0.0)),
    )
    if not grid.is_free_point(start.x, start.y):
        raise OverlapError("robot_start is inside an occupied cell")

    det_doc = doc.get("detector", {})
    if not isinstance(det_doc, dict):
        raise SchemaError("detector must be an object")
    allowlist = det_doc.get("allowlist")
    detector = DetectorConfig(
        fov_degrees=float(det_doc.get("fov_degrees", 60.0)),
        max_range=float(det_doc.get("max_range_m", 2.5)),
        allowlist=frozenset(allowlist) if allowlist is not None else frozenset(DETECTOR_VOCABULARY),
        detection_probability=float(det_doc.get("detection_probability", 1.0)),
    )

    return World(
        name=name,
        grid=grid,
        rooms=rooms,
        landmarks=landmarks,
        objects=objects,
        robot=RobotState(start),
        detector=detector,
        obstacles=obstacles,
        rng_seed=seed,
    )


def load_scenario_file(path: str, seed: int = 0) -> World:
    with open(path, "r", encoding="utf-8") as fh:
        return load_scenario(json.load(fh), seed=seed)


def find_scenario(name_or_path: str) -> str:
    """Resolve a scenario argument: a filesystem path wins, otherwise the
    name of one of the shipped scenarios (home, office, minimal)."""
    import importlib.resources as resources
    import os

    if os.path.exists(name_or_path):
        return name_or_path
    candidate = resources.files("edgebot") / "scenarios" / f"{name_or_path}.scenario"
    if candidate.is_file():
        return str(candidate)
    raise FileNotFoundError(f"no scenario named {name_or_path!r}")


def find_prompt_script(name_or_path: str) -> str:
    """Same resolution rule for shipped *.prompts files."""
    import importlib.resources as resources
    import os

    if os.path.exists(name_or_path):
        return name_or_path
    candidate = resources.files("edgebot") / "scenarios" / f"{name_or_path}.prompts"
    if candidate.is_file():
        return str(candidate)
    raise FileNotFoundError(f"no prompt script named {name_or_path!r}")


def initial_kb_entries(world: World) -> list[KBEntry]:
    """Landmark poses as the pre-loaded knowledge base."""
    return [
        KBEntry(lm.name, lm.pose, EntrySource.INITIAL) for lm in world.landmarks
    ]


def step_robot(world: World, command: tuple[float, float], dt: float) -> None:
    """Advance one unicycle integration step.

    command is (linear m/s, angular rad/s). Translation into an occupied
    or out-of-bounds cell is blocked (position holds, heading still
    updates). The clock always advances by dt.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    v, w = command
    pose = world.robot.pose
    nx = pose.x + v * math.cos(pose.theta) * dt
    ny = pose.y + v * math.sin(pose.theta) * dt
    ntheta = wrap_angle(pose.theta + w * dt)
    if not world.grid.is_free_point(nx, ny):
        nx, ny = pose.x, pose.y
    world.robot.pose = Pose(nx, ny, ntheta)
    if world.robot.holding is not None:
        for obj in world.objects:
            if obj.carried:
                obj.x = nx
                obj.y = ny
    world.clock += dt
    world.tick_index += 1


def sense(world: World, cfg: DetectorConfig) -> list[Detection]:
    """Run the geometric detector against the current world state.

    Deterministic given (world state, world.rng_seed, world.tick_index).
    Results sorted by range, then class name.
    """
    pose = world.robot.pose
    half_fov = math.radians(cfg.fov_degrees) / 2.0
    out: list[Detection] = []
    for idx, obj in enumerate(world.objects):
        if obj.carried:
            continue
        if obj.class_name not in cfg.allowlist:
            continue
        dx = obj.x - pose.x
        dy = obj.y - pose.y
        rng_m = math.hypot(dx, dy)
        if rng_m <= 0.0 or rng_m > cfg.max_range:
            continue
        bearing = wrap_angle(math.atan2(dy, dx) - pose.theta)
        if abs(bearing) > half_fov:
            continue
        if not gridops.los_clear(
            world.grid.occ, world.grid.resolution, pose.x, pose.y, obj.x, obj.y
        ):
            continue
        if cfg.detection_probability < 1.0:
            coin = random.Random(
                f"{world.rng_seed}:{world.tick_index}:{idx}"
            ).random()
            if coin >= cfg.detection_probability:
                continue
        out.append(
            Detection(obj.class_name, rng_m, bearing, cfg.detection_probability)
        )
    out.sort(key=lambda d: (d.range_m, d.class_name))
    return out


def arm_action(
    world: World,
    action: str,
    target: str | None = None,
    at_pose: Pose | None = None,
    grab_radius: float = 0.5,
) -> dict:
    """Execute a grab or drop near the robot.

    For grab, at_pose is the KB pose the executor used to approach the
    target; when absent the nearest world object of that class is the
    reference. Raises OutOfReach / NotHolding on precondition failures.
    """
    robot = world.robot
    if action == "grab":
        if target is None:
            raise ValueError("grab requires a target")
        if robot.holding is not None:
            raise OutOfReach(f"already holding {robot.holding!r}")
        candidates = [
            o for o in world.objects if o.class_name == target and not o.carried
        ]
        if not candidates:
            raise OutOfReach(f"no {target!r} present in the environment")
        if at_pose is None:
            at_pose = min(
                (Pose(o.x, o.y) for o in candidates),
                key=lambda p: robot.pose.distance_to(p),
            )
        if robot.pose.distance_to(at_pose) > grab_radius:
            raise OutOfReach(
                f"{target!r} reference pose is {robot.pose.distance_to(at_pose):.2f} m away"
            )
        obj = min(
            candidates,
            key=lambda o: math.hypot(o.x - robot.pose.x, o.y - robot.pose.y),
        )
        obj.carried = True
        obj.x = robot.pose.x
        obj.y = robot.pose.y
        robot.holding = target
        return {"action": "grab", "target": target, "x": obj.x, "y": obj.y}
    if action == "drop":
        if robot.holding is None:
            raise NotHolding("nothing in the gripper")
        dropped = robot.holding
        for obj in world.objects:
            if obj.carried:
                obj.carried = False
                obj.x = robot.pose.x
                obj.y = robot.pose.y
        robot.holding = None
        return {
            "action": "drop",
            "target": dropped,
            "x": robot.pose.x,
            "y": robot.pose.y,
        }
    raise ValueError(f"unknown arm action {action!r}")


def world_to_dict(world: World) -> dict:
    """Immutable snapshot for the API and for determinism checks."""
    return {
        "name": world.name,
        "grid": {
            "width_m": world.grid.width_m,
            "height_m": world.grid.height_m,
            "resolution_m": world.grid.resolution,
        },
        "obstacles": [list(r) for r in world.obstacles],
        "rooms": [{"name": r.name, "rect": list(r.rect)} for r in world.rooms],
        "landmarks": [
            {"name": lm.name, **lm.pose.to_dict()} for lm in world.landmarks
        ],
        "robot": {
            **world.robot.pose.to_dict(),
            "holding": world.robot.holding,
        },
        "objects": [
            {
                "class": o.class_name,
                "x": o.x,
                "y": o.y,
                "carried": o.carried,
            }
            for o in world.objects
        ],
        "clock": world.clock,
        "tick": world.tick_index,
    }
