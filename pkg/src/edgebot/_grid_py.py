"""Pure-Python grid kernels: A* search, line-of-sight, obstacle inflation.

Twin of the compiled module _grid_cy; both must produce bit-identical
results (same neighbor order, same integer cost model, same tie rules),
so a run is reproducible regardless of which backend got imported.

Cost model: straight moves cost 10 units, diagonal moves 14, i.e. the
classic integer approximation of sqrt(2). Diagonal steps may not cut
corners (both adjacent cardinal cells must be free).
"""

from __future__ import annotations

import math
from heapq import heappop, heappush

import numpy as np

BACKEND = "python"

STRAIGHT_COST = 10
DIAG_COST = 14

# dx, dy, step cost. Order is part of the determinism contract.
_NEIGHBORS = (
    (1, 0, 10),
    (-1, 0, 10),
    (0, 1, 10),
    (0, -1, 10),
    (1, 1, 14),
    (1, -1, 14),
    (-1, 1, 14),
    (-1, -1, 14),
)

_UNSET = -1


def _as_bytes(occ: np.ndarray) -> bytes:
    return np.ascontiguousarray(occ, dtype=np.uint8).tobytes()


def astar(occ: np.ndarray, start: tuple[int, int], goal: tuple[int, int]):
    """Shortest 8-connected path on an occupancy grid.

    occ is a (ny, nx) uint8 array, nonzero = occupied. start/goal are
    (ix, iy) cells. Returns (cost_units, [(ix, iy), ...]) or None when no
    path exists (including occupied endpoints).
    """
    ny, nx = occ.shape
    grid = _as_bytes(occ)
    sx, sy = start
    gx, gy = goal
    if not (0 <= sx < nx and 0 <= sy < ny and 0 <= gx < nx and 0 <= gy < ny):
        return None
    sidx = sy * nx + sx
    gidx = gy * nx + gx
    if grid[sidx] or grid[gidx]:
        return None
    if sidx == gidx:
        return 0, [(sx, sy)]

    n = nx * ny
    g = [_UNSET] * n
    came = [-1] * n
    closed = bytearray(n)
    g[sidx] = 0
    counter = 0
    h0 = _octile(sx, sy, gx, gy)
    heap = [((h0 << 32) | counter, sidx)]
    counter += 1
    found = False
    while heap:
        _, idx = heappop(heap)
        if closed[idx]:
            continue
        closed[idx] = 1
        if idx == gidx:
            found = True
            break
        iy, ix = divmod(idx, nx)
        gcur = g[idx]
        for dx, dy, cost in _NEIGHBORS:
            jx = ix + dx
            jy = iy + dy
            if not (0 <= jx < nx and 0 <= jy < ny):
                continue
            jidx = jy * nx + jx
            if grid[jidx]:
                continue
            if cost == DIAG_COST and (grid[idx + dx] or grid[idx + dy * nx]):
                continue
            ng = gcur + cost
            if g[jidx] == _UNSET or ng < g[jidx]:
                g[jidx] = ng
                came[jidx] = idx
                f = ng + _octile(jx, jy, gx, gy)
                heappush(heap, ((f << 32) | counter, jidx))
                counter += 1
    if not found:
        return None

    cells = []
    idx = gidx
    while idx != -1:
        iy, ix = divmod(idx, nx)
        cells.append((ix, iy))
        idx = came[idx]
    cells.reverse()
    return g[gidx], cells


def _octile(x0: int, y0: int, x1: int, y1: int) -> int:
    dx = abs(x1 - x0)
    dy = abs(y1 - y0)
    return STRAIGHT_COST * (dx + dy) - 6 * (dx if dx < dy else dy)


def los_clear(
    occ: np.ndarray, res: float, x0: float, y0: float, x1: float, y1: float
) -> bool:
    """True iff the segment (x0,y0)->(x1,y1) crosses only free cells.

    World coordinates in meters, grid cell size res. Out-of-bounds counts
    as blocked. Exact corner crossings are tie-broken by stepping in y
    first; callers should not rely on degenerate-alignment behavior.
    """
    ny, nx = occ.shape
    grid = _as_bytes(occ)
    ix = math.floor(x0 / res)
    iy = math.floor(y0 / res)
    jx = math.floor(x1 / res)
    jy = math.floor(y1 / res)
    if not (0 <= ix < nx and 0 <= iy < ny and 0 <= jx < nx and 0 <= jy < ny):
        return False
    if grid[iy * nx + ix] or grid[jy * nx + jx]:
        return False

    dx = x1 - x0
    dy = y1 - y0
    step_x = 1 if dx > 0 else -1
    step_y = 1 if dy > 0 else -1
    if dx != 0.0:
        bx = (ix + 1) * res if step_x > 0 else ix * res
        t_max_x = (bx - x0) / dx
        t_dx = res / abs(dx)
    else:
        t_max_x = math.inf
        t_dx = math.inf
    if dy != 0.0:
        by = (iy + 1) * res if step_y > 0 else iy * res
        t_max_y = (by - y0) / dy
        t_dy = res / abs(dy)
    else:
        t_max_y = math.inf
        t_dy = math.inf

    budget = 2 * (abs(jx - ix) + abs(jy - iy)) + 8
    while ix != jx or iy != jy:
        # The next crossing past t=1 means the segment ends inside the
        # current cell (endpoint on or near a cell boundary).
        if t_max_x < t_max_y:
            if t_max_x > 1.0:
                break
            ix += step_x
            t_max_x += t_dx
        else:
            if t_max_y > 1.0:
                break
            iy += step_y
            t_max_y += t_dy
        if not (0 <= ix < nx and 0 <= iy < ny):
            return False
        if grid[iy * nx + ix]:
            return False
        budget -= 1
        if budget < 0:
            raise RuntimeError("ray traversal failed to terminate")
    return True


def inflate(occ: np.ndarray, radius_cells: float) -> np.ndarray:
    """Dilate occupied cells by a Euclidean disk of radius_cells."""
    occ = np.ascontiguousarray(occ, dtype=np.uint8)
    if radius_cells <= 0.0:
        return occ.copy()
    r = int(math.floor(radius_cells))
    r2 = radius_cells * radius_cells
    out = occ.copy()
    ny, nx = occ.shape
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            if dx == 0 and dy == 0:
                continue
            if dx * dx + dy * dy > r2:
                continue
            src_y = slice(max(0, -dy), min(ny, ny - dy))
            dst_y = slice(max(0, dy), min(ny, ny + dy))
            src_x = slice(max(0, -dx), min(nx, nx - dx))
            dst_x = slice(max(0, dx), min(nx, nx + dx))
            np.bitwise_or(out[dst_y, dst_x], occ[src_y, src_x], out=out[dst_y, dst_x])
    return out
