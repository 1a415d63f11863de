"""Grid path planning and motion services: plan, follow, spin-scan.

plan_path is A* (8-connected, octile heuristic) over the occupancy grid,
optionally inflated by the robot radius. navigate_to follows the planned
cells with a rotate-then-drive controller inside the caller's tick loop.
spin_scan sweeps a full rotation, sensing at each heading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import gridops
from .kb import Pose, wrap_angle
from .world import Detection, DetectorConfig, World, sense, step_robot


class PlanError(Exception):
    pass


class StartOccupied(PlanError):
    pass


class GoalOccupied(PlanError):
    pass


@dataclass(frozen=True)
class Path:
    cells: tuple[tuple[int, int], ...]
    cost_units: int  # integer cost, straight=10 / diagonal=14
    length_m: float


@dataclass(frozen=True)
class NavParams:
    arrival_tolerance: float = 0.15
    heading_tolerance: float = 0.05
    waypoint_tolerance: float = 0.10
    robot_radius: float = 0.18
    v_max: float = 0.6
    w_max: float = 2.0
    dt: float = 0.1
    step_budget: int = 10_000
    spin_steps: int = 12
    align_threshold: float = 0.25


@dataclass
class NavigationOutcome:
    reached: bool
    trajectory: list[Pose] = field(default_factory=list)
    elapsed_sim_s: float = 0.0


def _path_length_m(cells: list[tuple[int, int]], res: float) -> float:
    length = 0.0
    for (x0, y0), (x1, y1) in zip(cells, cells[1:]):
        length += res * (math.sqrt(2.0) if x0 != x1 and y0 != y1 else 1.0)
    return length


def plan_path(
    grid,
    start: Pose,
    goal: Pose,
    robot_radius: float = 0.0,
) -> Path | None:
    """Shortest path between the cells containing start and goal.

    Obstacles are inflated by robot_radius before searching (pass 0 to
    plan on the raw grid). Returns None when the goal is unreachable.
    Raises StartOccupied / GoalOccupied for endpoints inside obstacles on
    the raw grid.
    """
    res = grid.resolution
    six, siy = grid.cell_of(start.x, start.y)
    gix, giy = grid.cell_of(goal.x, goal.y)
    if not grid.in_bounds(six, siy) or grid.occ[siy, six]:
        raise StartOccupied(f"start cell ({six}, {siy})")
    if not grid.in_bounds(gix, giy) or grid.occ[giy, gix]:
        raise GoalOccupied(f"goal cell ({gix}, {giy})")
    occ = grid.occ
    if robot_radius > 0.0:
        occ = gridops.inflate(occ, robot_radius / res)
        if occ[siy, six] or occ[giy, gix]:
            return None
    result = gridops.astar(occ, (six, siy), (gix, giy))
    if result is None:
        return None
    cost, cells = result
    return Path(tuple(cells), cost, _path_length_m(cells, res))


def _waypoints(path: Path, res: float, goal: Pose) -> list[tuple[float, float]]:
    """Turning-point cell centers, with the exact goal position last."""
    cells = path.cells
    points: list[tuple[float, float]] = []
    for i in range(1, len(cells) - 1):
        dx0 = cells[i][0] - cells[i - 1][0]
        dy0 = cells[i][1] - cells[i - 1][1]
        dx1 = cells[i + 1][0] - cells[i][0]
        dy1 = cells[i + 1][1] - cells[i][1]
        if (dx0, dy0) != (dx1, dy1):
            points.append(((cells[i][0] + 0.5) * res, (cells[i][1] + 0.5) * res))
    points.append((goal.x, goal.y))
    return points


def navigate_to(
    world: World,
    goal: Pose,
    params: NavParams = NavParams(),
    on_tick: Callable[[], None] | None = None,
) -> NavigationOutcome:
    """Plan and drive to the goal pose, then align to its heading.

    on_tick runs at the start of every simulation tick (the detector
    phase of the tick loop). Failure is reported in the outcome, never
    raised: unreachable goals and exhausted step budgets both give
    reached=False.
    """
    outcome = NavigationOutcome(reached=False)
    t0 = world.clock
    pose = world.robot.pose
    if pose.distance_to(goal) <= params.arrival_tolerance:
        _align(world, goal.theta, params, outcome, on_tick)
        outcome.reached = True
        outcome.elapsed_sim_s = world.clock - t0
        return outcome
    try:
        path = plan_path(world.grid, pose, goal, params.robot_radius)
    except PlanError:
        path = None
    if path is None:
        outcome.elapsed_sim_s = world.clock - t0
        return outcome

    budget = params.step_budget
    for wx, wy in _waypoints(path, world.grid.resolution, goal):
        final = (wx, wy) == (goal.x, goal.y)
        tol = params.arrival_tolerance if final else params.waypoint_tolerance
        while True:
            pose = world.robot.pose
            dist = math.hypot(wx - pose.x, wy - pose.y)
            if dist <= tol:
                break
            if budget <= 0:
                outcome.elapsed_sim_s = world.clock - t0
                return outcome
            err = wrap_angle(math.atan2(wy - pose.y, wx - pose.x) - pose.theta)
            w = max(-params.w_max, min(params.w_max, err / params.dt))
            if abs(err) > params.align_threshold:
                cmd = (0.0, w)
            else:
                v = min(params.v_max, dist / params.dt)
                cmd = (v, w)
            _tick(world, cmd, params, outcome, on_tick)
            budget -= 1

    if not _align(world, goal.theta, params, outcome, on_tick, budget):
        outcome.elapsed_sim_s = world.clock - t0
        return outcome
    outcome.reached = True
    outcome.elapsed_sim_s = world.clock - t0
    return outcome


def _tick(world, cmd, params, outcome, on_tick):
    if on_tick is not None:
        on_tick()
    step_robot(world, cmd, params.dt)
    outcome.trajectory.append(world.robot.pose)


def _align(world, theta, params, outcome, on_tick, budget: int = 1000) -> bool:
    while budget > 0:
        err = wrap_angle(theta - world.robot.pose.theta)
        if abs(err) <= params.heading_tolerance:
            return True
        w = max(-params.w_max, min(params.w_max, err / params.dt))
        _tick(world, (0.0, w), params, outcome, on_tick)
        budget -= 1
    return abs(wrap_angle(theta - world.robot.pose.theta)) <= params.heading_tolerance


def spin_scan(
    world: World,
    cfg: DetectorConfig,
    steps: int = 12,
    params: NavParams = NavParams(),
    on_tick: Callable[[], None] | None = None,
) -> list[Detection]:
    """Rotate a full turn in equal increments, sensing at each heading.

    Detections are deduplicated by class (nearest range wins). The
    heading returns to within one increment of where it started.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    increment = 2.0 * math.pi / steps
    best: dict[str, Detection] = {}
    for _ in range(steps):
        if on_tick is not None:
            on_tick()
        step_robot(world, (0.0, increment / params.dt), params.dt)
        for det in sense(world, cfg):
            cur = best.get(det.class_name)
            if cur is None or det.range_m < cur.range_m:
                best[det.class_name] = det
    return sorted(best.values(), key=lambda d: (d.range_m, d.class_name))
