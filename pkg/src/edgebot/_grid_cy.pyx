# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels: A* search, line-of-sight, obstacle inflation.

Twin of the pure-Python module _grid_py; identical neighbor order, cost
model, and tie rules, so both backends produce bit-identical results.
"""

from libc.math cimport floor, INFINITY
from libc.stdlib cimport malloc, realloc, free

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

STRAIGHT_COST = 10
DIAG_COST = 14

cdef int[8] _NDX = [1, -1, 0, 0, 1, 1, -1, -1]
cdef int[8] _NDY = [0, 0, 1, -1, 1, -1, 1, -1]
cdef int[8] _NCOST = [10, 10, 10, 10, 14, 14, 14, 14]


cdef struct MinHeap:
    long long* keys
    int* vals
    Py_ssize_t size
    Py_ssize_t cap


cdef int _heap_init(MinHeap* h, Py_ssize_t cap) except -1:
    h.keys = <long long*>malloc(cap * sizeof(long long))
    h.vals = <int*>malloc(cap * sizeof(int))
    if h.keys == NULL or h.vals == NULL:
        raise MemoryError()
    h.size = 0
    h.cap = cap
    return 0


cdef void _heap_free(MinHeap* h) noexcept:
    free(h.keys)
    free(h.vals)


cdef int _heap_push(MinHeap* h, long long key, int val) except -1:
    cdef Py_ssize_t i, parent
    if h.size == h.cap:
        h.cap *= 2
        h.keys = <long long*>realloc(h.keys, h.cap * sizeof(long long))
        h.vals = <int*>realloc(h.vals, h.cap * sizeof(int))
        if h.keys == NULL or h.vals == NULL:
            raise MemoryError()
    i = h.size
    h.size += 1
    while i > 0:
        parent = (i - 1) >> 1
        if h.keys[parent] <= key:
            break
        h.keys[i] = h.keys[parent]
        h.vals[i] = h.vals[parent]
        i = parent
    h.keys[i] = key
    h.vals[i] = val
    return 0


cdef int _heap_pop(MinHeap* h) noexcept:
    # Caller checks size > 0. Returns the val of the minimum key.
    cdef int result = h.vals[0]
    cdef long long key
    cdef int val
    cdef Py_ssize_t i = 0, child
    h.size -= 1
    if h.size == 0:
        return result
    key = h.keys[h.size]
    val = h.vals[h.size]
    while True:
        child = 2 * i + 1
        if child >= h.size:
            break
        if child + 1 < h.size and h.keys[child + 1] < h.keys[child]:
            child += 1
        if h.keys[child] >= key:
            break
        h.keys[i] = h.keys[child]
        h.vals[i] = h.vals[child]
        i = child
    h.keys[i] = key
    h.vals[i] = val
    return result


cdef inline long long _octile(int x0, int y0, int x1, int y1) noexcept:
    cdef int dx = x1 - x0
    cdef int dy = y1 - y0
    if dx < 0:
        dx = -dx
    if dy < 0:
        dy = -dy
    return 10 * (dx + dy) - 6 * (dx if dx < dy else dy)


def astar(occ, start, goal):
    """Shortest 8-connected path; see _grid_py.astar for the contract."""
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] grid_arr = np.ascontiguousarray(
        occ, dtype=np.uint8
    )
    cdef const unsigned char* grid = <const unsigned char*>grid_arr.data
    cdef int ny = grid_arr.shape[0]
    cdef int nx = grid_arr.shape[1]
    cdef int sx = start[0], sy = start[1]
    cdef int gx = goal[0], gy = goal[1]
    if not (0 <= sx < nx and 0 <= sy < ny and 0 <= gx < nx and 0 <= gy < ny):
        return None
    cdef int sidx = sy * nx + sx
    cdef int gidx = gy * nx + gx
    if grid[sidx] or grid[gidx]:
        return None
    if sidx == gidx:
        return 0, [(sx, sy)]

    cdef Py_ssize_t n = <Py_ssize_t>nx * ny
    cdef long long* g = <long long*>malloc(n * sizeof(long long))
    cdef int* came = <int*>malloc(n * sizeof(int))
    cdef unsigned char* closed = <unsigned char*>malloc(n)
    cdef MinHeap heap
    if g == NULL or came == NULL or closed == NULL:
        free(g); free(came); free(closed)
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        g[i] = -1
        came[i] = -1
        closed[i] = 0
    _heap_init(&heap, 1024)

    cdef long long counter = 0, ng, f
    cdef int idx, ix, iy, jx, jy, jidx, k, dx, dy, cost
    cdef bint found = False
    g[sidx] = 0
    _heap_push(&heap, (_octile(sx, sy, gx, gy) << 32) | counter, sidx)
    counter += 1
    try:
        while heap.size > 0:
            idx = _heap_pop(&heap)
            if closed[idx]:
                continue
            closed[idx] = 1
            if idx == gidx:
                found = True
                break
            iy = idx // nx
            ix = idx - iy * nx
            for k in range(8):
                dx = _NDX[k]
                dy = _NDY[k]
                cost = _NCOST[k]
                jx = ix + dx
                jy = iy + dy
                if not (0 <= jx < nx and 0 <= jy < ny):
                    continue
                jidx = jy * nx + jx
                if grid[jidx]:
                    continue
                if cost == 14 and (grid[idx + dx] or grid[idx + dy * nx]):
                    continue
                ng = g[idx] + cost
                if g[jidx] == -1 or ng < g[jidx]:
                    g[jidx] = ng
                    came[jidx] = idx
                    f = ng + _octile(jx, jy, gx, gy)
                    _heap_push(&heap, (f << 32) | counter, jidx)
                    counter += 1
        if not found:
            return None
        cells = []
        idx = gidx
        while idx != -1:
            iy = idx // nx
            ix = idx - iy * nx
            cells.append((ix, iy))
            idx = came[idx]
        cells.reverse()
        return g[gidx], cells
    finally:
        _heap_free(&heap)
        free(g)
        free(came)
        free(closed)


def los_clear(occ, double res, double x0, double y0, double x1, double y1):
    """Segment visibility on the grid; see _grid_py.los_clear."""
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] grid_arr = np.ascontiguousarray(
        occ, dtype=np.uint8
    )
    cdef const unsigned char* grid = <const unsigned char*>grid_arr.data
    cdef int ny = grid_arr.shape[0]
    cdef int nx = grid_arr.shape[1]
    cdef int ix = <int>floor(x0 / res)
    cdef int iy = <int>floor(y0 / res)
    cdef int jx = <int>floor(x1 / res)
    cdef int jy = <int>floor(y1 / res)
    if not (0 <= ix < nx and 0 <= iy < ny and 0 <= jx < nx and 0 <= jy < ny):
        return False
    if grid[iy * nx + ix] or grid[jy * nx + jx]:
        return False

    cdef double dx = x1 - x0
    cdef double dy = y1 - y0
    cdef int step_x = 1 if dx > 0 else -1
    cdef int step_y = 1 if dy > 0 else -1
    cdef double t_max_x, t_dx, t_max_y, t_dy, bx, by
    if dx != 0.0:
        bx = (ix + 1) * res if step_x > 0 else ix * res
        t_max_x = (bx - x0) / dx
        t_dx = res / (dx if dx > 0 else -dx)
    else:
        t_max_x = INFINITY
        t_dx = INFINITY
    if dy != 0.0:
        by = (iy + 1) * res if step_y > 0 else iy * res
        t_max_y = (by - y0) / dy
        t_dy = res / (dy if dy > 0 else -dy)
    else:
        t_max_y = INFINITY
        t_dy = INFINITY

    cdef long budget = 2 * ((jx - ix if jx > ix else ix - jx)
                            + (jy - iy if jy > iy else iy - jy)) + 8
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


def inflate(occ, double radius_cells):
    """Euclidean disk dilation; see _grid_py.inflate."""
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] src = np.ascontiguousarray(
        occ, dtype=np.uint8
    )
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] out = src.copy()
    if radius_cells <= 0.0:
        return out
    cdef int ny = src.shape[0]
    cdef int nx = src.shape[1]
    cdef int r = <int>floor(radius_cells)
    cdef double r2 = radius_cells * radius_cells
    cdef int x, y, dx, dy, tx, ty
    for y in range(ny):
        for x in range(nx):
            if not src[y, x]:
                continue
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    if dx == 0 and dy == 0:
                        continue
                    if dx * dx + dy * dy > r2:
                        continue
                    ty = y + dy
                    tx = x + dx
                    if 0 <= tx < nx and 0 <= ty < ny:
                        out[ty, tx] = 1
    return out
