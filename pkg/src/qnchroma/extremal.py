"""Searches over colourings: small-n exhaustive scans, random scans, hill climbing."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from pathlib import Path

import numpy as np

from . import _kernels, cube
from .colourings import Colouring, save, serialise
from .rng import stream

EXHAUSTIVE_MAX_N = 3
SAMPLED_MAX_N = 10
CLIMB_MAX_N = 10
CLIMB_EXACT_MAX_N = 8
BATCH = 4096
REFUTING_COST = 2


@dataclass
class ScanResult:
    n: int
    universe: str
    count: int
    seed: int | None
    mode: str
    worst_min_cost: int
    argmax: Colouring
    histogram: dict[int, int]
    candidates: list[Colouring] = field(default_factory=list)
    included: list[int] = field(default_factory=list)

    def as_dict(self):
        return {
            "n": self.n,
            "universe": self.universe,
            "count": self.count,
            "seed": self.seed,
            "mode": self.mode,
            "worstMinCost": self.worst_min_cost,
            "argmax": serialise(self.argmax),
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "candidates": [serialise(c) for c in self.candidates],
            "included": self.included,
        }


def _check_mode(mode):
    if mode not in ("geodesic", "path"):
        raise ValueError(f"unknown mode {mode!r}")
    return mode == "path"


def colouring_from_index(n: int, code: int, fixed_edge: int = -1) -> Colouring:
    """Bit e of ``code`` colours edge e (skipping ``fixed_edge``, which is red)."""
    e_count = cube.num_edges(n)
    data = np.zeros(e_count, dtype=np.uint8)
    j = 0
    for e in range(e_count):
        if e == fixed_edge:
            continue
        data[e] = (code >> j) & 1
        j += 1
    return Colouring(n, 2, data)


def automorphisms(n: int) -> np.ndarray:
    """Edge permutations induced by the 2**n * n! automorphisms of Q_n.

    Row ``g`` maps edge e to ``perms[g, e]``.
    """
    lower, dim = cube.all_edges(n)
    rows = []
    for perm in permutations(range(n)):
        p = np.asarray(perm, dtype=np.int64)
        moved = np.zeros_like(lower)
        for i in range(n):
            moved |= ((lower >> i) & 1) << p[i]
        for a in range(1 << n):
            rows.append(cube.edge_ids(moved ^ a, p[dim], n))
    return np.stack(rows)


def canonical_indices(n: int) -> np.ndarray:
    """Indices of the 2-colourings that are minimal in their orbit under
    the automorphisms of Q_n combined with the red/blue swap."""
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"canonical enumeration is limited to n <= {EXHAUSTIVE_MAX_N}")
    e_count = cube.num_edges(n)
    codes = np.arange(1 << e_count, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(e_count)) & 1
    weights = np.int64(1) << np.arange(e_count, dtype=np.int64)
    perms = automorphisms(n)
    best = codes.copy()
    for p in perms:
        image = np.empty_like(bits)
        image[:, p] = bits
        for img in (image, 1 - image):
            best = np.minimum(best, img @ weights)
    return codes[best == codes]


def _histogram(costs) -> dict[int, int]:
    values, counts = np.unique(costs, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def conjecture_scan(
    n: int, mode: str = "path", symmetry: bool = False, canonical: bool = False
) -> ScanResult:
    """Worst, over every 2-colouring of Q_n, of the best antipodal cost.

    ``symmetry`` fixes edge 0 to red (the colour swap preserves costs);
    ``canonical`` keeps one colouring per automorphism-and-swap orbit.
    """
    path_mode = _check_mode(mode)
    cube.check_dim(n)
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive scans are limited to n <= {EXHAUSTIVE_MAX_N}")
    e_count = cube.num_edges(n)
    if canonical:
        codes = canonical_indices(n)
        cols = ((codes[:, None] >> np.arange(e_count)) & 1).astype(np.uint8)
        costs = _kernels.batch_min_costs(cols, n, 2, path_mode)
        best = int(np.argmax(costs))
        argmax = colouring_from_index(n, int(codes[best]))
        universe = "canonical"
    else:
        fixed = 0 if symmetry else -1
        total = 1 << (e_count - (1 if symmetry else 0))
        costs = _kernels.exhaustive_min_costs(n, 0, total, fixed, path_mode)
        best = int(np.argmax(costs))
        argmax = colouring_from_index(n, best, fixed)
        universe = "exhaustive-swap" if symmetry else "exhaustive"
    return ScanResult(
        n, universe, int(costs.size), None, mode, int(costs[best]), argmax, _histogram(costs)
    )


def sampled_scan(
    n: int,
    count: int,
    seed: int,
    mode: str = "path",
    include=(),
    results_dir: str | Path | None = None,
) -> ScanResult:
    """Random 2-colourings; anything with min cost >= 2 is a refuting candidate.

    Colourings in ``include`` are scored too and count towards the result.
    Candidates are written to ``results_dir`` when given.
    """
    path_mode = _check_mode(mode)
    cube.check_dim(n)
    if n > SAMPLED_MAX_N:
        raise ValueError(f"sampled scans are limited to n <= {SAMPLED_MAX_N}")
    e_count = cube.num_edges(n)
    worst = -1
    argmax = None
    hist: dict[int, int] = {}
    candidates = []
    for batch, start in enumerate(range(0, count, BATCH)):
        size = min(BATCH, count - start)
        cols = stream(seed, batch).integers(0, 2, size=(size, e_count), dtype=np.uint8)
        costs = _kernels.batch_min_costs(cols, n, 2, path_mode)
        for v, cnt in _histogram(costs).items():
            hist[v] = hist.get(v, 0) + cnt
        top = int(np.argmax(costs))
        if costs[top] > worst:
            worst = int(costs[top])
            argmax = Colouring(n, 2, cols[top])
        candidates += [Colouring(n, 2, cols[i]) for i in np.flatnonzero(costs >= REFUTING_COST)]
    included = []
    for c in include:
        if c.n != n or c.r != 2:
            raise ValueError("included colourings must be 2-colourings of the same cube")
        cost = int(_kernels.batch_min_costs(c.data[None, :].copy(), n, 2, path_mode)[0])
        included.append(cost)
        hist[cost] = hist.get(cost, 0) + 1
        if cost > worst:
            worst, argmax = cost, c
        if cost >= REFUTING_COST:
            candidates.append(c)
    if argmax is None:
        raise ValueError("nothing to scan")
    if results_dir is not None and candidates:
        out = Path(results_dir)
        out.mkdir(parents=True, exist_ok=True)
        for idx, c in enumerate(candidates):
            save(c, out / f"candidate_n{n}_{mode}_{idx:04d}.qncol",
                 comments=[f"sampled_scan seed={seed} mode={mode}"])
    return ScanResult(
        n, "sampled", count + len(included), seed, mode, worst, argmax, hist, candidates, included
    )


@dataclass
class ClimbResult:
    colouring: Colouring
    value: Fraction
    start_value: Fraction
    trace: list[Fraction]
    evaluations: int

    def as_dict(self):
        return {
            "n": self.colouring.n,
            "value": str(self.value),
            "value_float": float(self.value),
            "start_value": str(self.start_value),
            "evaluations": self.evaluations,
            "trace": [str(v) for v in self.trace],
            "colouring": serialise(self.colouring),
        }


def adversary_climb(
    n: int,
    objective: str = "path",
    budget: int = 1000,
    seed: int = 0,
    start: Colouring | None = None,
    sample_sources: int = 64,
    patience: int | None = None,
) -> ClimbResult:
    """Single-edge-flip hill climbing on the mean antipodal cost.

    Flips that do not lower the objective are accepted.  After ``patience``
    consecutive rejections the search restarts from the best colouring with
    a random kick.  ``trace`` records the best value after every step.
    Above n = 8 the mean is taken over a fixed random set of sources.
    """
    path_mode = _check_mode(objective)
    cube.check_dim(n)
    if n > CLIMB_MAX_N:
        raise ValueError(f"hill climbing is limited to n <= {CLIMB_MAX_N}")
    rng = stream(seed, 0)
    e_count = cube.num_edges(n)
    if start is None:
        data = stream(seed, 1).integers(0, 2, size=e_count, dtype=np.uint8)
    else:
        if start.n != n or start.r != 2:
            raise ValueError("start colouring must be a 2-colouring of Q_n")
        data = start.data.copy()
    if n > CLIMB_EXACT_MAX_N:
        sources = stream(seed, 2).integers(0, 1 << n, size=sample_sources, dtype=np.int64)
    else:
        sources = np.arange(1 << n, dtype=np.int64)
    if patience is None:
        patience = e_count

    def score(arr):
        costs = _kernels.antipodal_profile(arr, n, 2, sources, path_mode)
        return Fraction(int(costs.sum()), int(costs.size))

    current = score(data)
    start_value = current
    best, best_data = current, data.copy()
    trace = []
    stale = 0
    evaluations = 1
    for _ in range(budget):
        e = int(rng.integers(e_count))
        data[e] ^= 1
        val = score(data)
        evaluations += 1
        if val >= current:
            stale = 0 if val > current else stale + 1
            current = val
            if val > best:
                best, best_data = val, data.copy()
                stale = 0
        else:
            data[e] ^= 1
            stale += 1
        if stale >= patience:
            data = best_data.copy()
            for e in rng.integers(e_count, size=max(1, n)):
                data[int(e)] ^= 1
            current = score(data)
            evaluations += 1
            stale = 0
        trace.append(best)
    return ClimbResult(Colouring(n, 2, best_data), best, start_value, trace, evaluations)
