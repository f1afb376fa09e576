"""Minimum colour-change geodesics and paths.

``f_c(x, y)`` is the fewest colour changes on a geodesic from x to y that
ends in colour c, where a final switch to c at y is allowed (and counted).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, cube
from .colourings import Colouring

EXACT_PROFILE_MAX_N = 14


@dataclass(frozen=True)
class FcTable:
    """f_c(source, .) over the interval ``source ^ submask(scope)``.

    ``values[t]`` holds the r values for vertex ``source ^ deposit(t, scope)``.
    """

    colouring: Colouring
    source: int
    scope: int
    values: np.ndarray

    def index(self, y: int) -> int:
        m = y ^ self.source
        if m & ~self.scope:
            raise ValueError(f"vertex {y} is outside the table's interval")
        return cube.extract(m, self.scope)

    def vertex(self, t: int) -> int:
        return self.source ^ cube.deposit(t, self.scope)

    def at(self, y: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values[self.index(y)])

    def opt(self, y: int) -> int:
        return int(self.values[self.index(y)].min())


@dataclass(frozen=True)
class PathCost:
    x: int
    y: int
    cost: int
    witness: tuple[int, ...] | None = None


def _bit_array(mask: int) -> np.ndarray:
    return np.array([i for i in range(mask.bit_length()) if (mask >> i) & 1], dtype=np.int64)


def fc_table(c: Colouring, x: int, target: int | None = None, base=None) -> FcTable:
    """DP table of f_c from ``x``, over [x, target] or the whole cube.

    ``base`` overrides the row for ``x`` itself (default all zeros).
    """
    x = cube.check_vertex(x, c.n)
    scope = cube.full_mask(c.n) if target is None else x ^ cube.check_vertex(target, c.n)
    if base is None:
        base = np.zeros(c.r, dtype=np.int16)
    else:
        base = np.asarray(base, dtype=np.int16)
    values = _kernels.fc_interval(c.data, c.n, c.r, x, _bit_array(scope), base)
    return FcTable(c, x, scope, values)


def fc_towards(c: Colouring, y: int, colour: int) -> np.ndarray:
    """f_colour(u, y) for every vertex u, from a single DP rooted at y.

    Reversing a geodesic turns "ends in colour c at y" into "starts in colour
    c at y", which is a DP from y seeded with a one-change penalty on every
    other colour.
    """
    base = np.ones(c.r, dtype=np.int16)
    base[colour] = 0
    table = fc_table(c, y, None, base)
    out = np.empty(1 << c.n, dtype=np.int64)
    out[y ^ np.arange(1 << c.n)] = table.values.min(axis=1)
    return out


def count_changes(c: Colouring, edges) -> int:
    colours = [c.colour_of(e) for e in edges]
    return sum(a != b for a, b in zip(colours, colours[1:]))


def witness_geodesic(table: FcTable, y: int) -> tuple[int, ...]:
    """Edge ids of an optimal geodesic from the table's source to ``y``.

    Walks back through the table, taking the lowest dimension on ties.
    """
    c = table.colouring
    bits = _bit_array(table.scope)
    t = table.index(y)
    row = table.values[t]
    colour = int(np.argmin(row))
    need = int(row[colour])
    edges = []
    while t:
        v = table.vertex(t)
        raw = {}
        for j, i in enumerate(bits):
            if (t >> j) & 1:
                e = cube.edge_id(v, int(i), c.n)
                cc = c.colour_of(e)
                val = int(table.values[t ^ (1 << j), cc])
                if cc not in raw or val < raw[cc][0]:
                    raw[cc] = (val, j, e)
        if colour in raw and raw[colour][0] == need:
            _, j, e = raw[colour]
        else:
            # the value was reached by switching colour at v
            need -= 1
            colour = min(cc for cc, (val, _, _) in raw.items() if val == need)
            _, j, e = raw[colour]
        edges.append(e)
        t ^= 1 << j
    return tuple(reversed(edges))


def min_geodesic_cc(c: Colouring, x: int, y: int, witness: bool = False) -> PathCost:
    table = fc_table(c, x, y)
    cost = int(table.values[-1].min())
    return PathCost(x, y, cost, witness_geodesic(table, y) if witness else None)


def _bfs(c: Colouring, x: int, target: int):
    states = (1 << c.n) * c.r
    dist = np.empty(states, dtype=np.int32)
    parent = np.empty(states, dtype=np.int64)
    cost = _kernels.bfs01(c.data, c.n, c.r, x, target, dist, parent)
    return cost, dist, parent


def _shortcut(vertices: list[int]) -> list[int]:
    # dropping closed sub-walks never adds a colour change
    out: list[int] = []
    pos: dict[int, int] = {}
    for v in vertices:
        if v in pos:
            for w in out[pos[v] + 1:]:
                del pos[w]
            del out[pos[v] + 1:]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


def min_path_cc(c: Colouring, x: int, y: int, witness: bool = False) -> PathCost:
    """Fewest colour changes over all x-y paths (0-1 BFS on (vertex, colour))."""
    x = cube.check_vertex(x, c.n)
    y = cube.check_vertex(y, c.n)
    if x == y:
        return PathCost(x, y, 0, () if witness else None)
    cost, dist, parent = _bfs(c, x, y)
    if not witness:
        return PathCost(x, y, int(cost))
    r = c.r
    s = min((y * r + k for k in range(r)), key=lambda s: (dist[s], s))
    walk = []
    while s >= 0:
        walk.append(s // r)
        s = int(parent[s])
    walk = _shortcut(walk[::-1])
    edges = tuple(cube.edge_between(a, b, c.n) for a, b in zip(walk, walk[1:]))
    return PathCost(x, y, int(cost), edges)


def antipodal_profile(c: Colouring, mode: str = "geodesic", sources=None) -> np.ndarray:
    """cost(v, antipode(v)) for every v, or only for ``sources`` if given."""
    if mode not in ("geodesic", "path"):
        raise ValueError(f"unknown mode {mode!r}")
    path_mode = mode == "path"
    if sources is not None:
        src = np.asarray(sources, dtype=np.int64)
        return _kernels.antipodal_profile(c.data, c.n, c.r, src, path_mode)
    if c.n > EXACT_PROFILE_MAX_N:
        raise ValueError(f"exact profile is limited to n <= {EXACT_PROFILE_MAX_N}")
    # both costs are symmetric in v <-> antipode(v): solve half, mirror the rest
    half = 1 << (c.n - 1)
    low = _kernels.antipodal_profile(c.data, c.n, c.r, np.arange(half, dtype=np.int64), path_mode)
    return np.concatenate([low, low[::-1]])
