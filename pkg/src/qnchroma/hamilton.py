"""Hamilton paths with few colour changes and monochromatic pieces of spanning trees."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, cube
from .colourings import Colouring, gen_hamming
from .rng import stream

HAMILTON_MAX_N = 4
GRAY_MAX_N = 24
TREE_MAX_N = 20
WILSON_MAX_N = 16
ROOT = -1


def path_changes(c: Colouring, vertices) -> int:
    """Colour changes along a walk given by its vertices."""
    colours = [c.colour_between(a, b) for a, b in zip(vertices, vertices[1:])]
    return sum(a != b for a, b in zip(colours, colours[1:]))


def hamilton_min_cc(c: Colouring) -> tuple[int, list[int]]:
    """Fewest colour changes over all Hamilton paths, with a witness vertex order."""
    n, r = c.n, c.r
    if n > HAMILTON_MAX_N:
        raise ValueError(f"exact Hamilton search is limited to n <= {HAMILTON_MAX_N}")
    dp = _kernels.hamilton_dp(c.data, n, r)
    nv = 1 << n
    full = (1 << nv) - 1
    cost = int(dp[full].min())
    v, colour = (int(a) for a in np.argwhere(dp[full] == cost)[0])
    mask, need = full, cost
    order = [v]
    while mask.bit_count() > 2:
        prev = mask ^ (1 << v)
        for i in range(n):
            u = v ^ (1 << i)
            if not (prev >> u) & 1 or c.colour_at(u, i) != colour:
                continue
            hit = [k for k in range(r) if int(dp[prev, u, k]) + (k != colour) == need]
            if hit:
                k = colour if colour in hit else hit[0]
                need -= k != colour
                mask, v, colour = prev, u, k
                order.append(u)
                break
        else:  # pragma: no cover - dp is consistent by construction
            raise AssertionError("Hamilton witness reconstruction failed")
    order.append((mask ^ (1 << v)).bit_length() - 1)
    order.reverse()
    return cost, order


def gray_code_path(n: int) -> np.ndarray:
    i = np.arange(1 << n, dtype=np.int64)
    return i ^ (i >> 1)


def gray_code_cc(c: Colouring) -> int:
    """Colour changes along the reflected binary Gray code."""
    if c.n > GRAY_MAX_N:
        raise ValueError(f"Gray-code walk is limited to n <= {GRAY_MAX_N}")
    walk = gray_code_path(c.n)
    step = walk[1:] ^ walk[:-1]
    dims = np.log2(step).astype(np.int64)
    colours = c.data[cube.edge_ids(walk[:-1], dims, c.n)]
    return int(np.count_nonzero(colours[1:] != colours[:-1]))


@dataclass(frozen=True)
class SpanningTree:
    """Rooted spanning tree of Q_n; ``parent[root] == -1``."""

    n: int
    parent: np.ndarray

    def __post_init__(self):
        n = cube.check_dim(self.n)
        if n > TREE_MAX_N:
            raise ValueError(f"spanning trees are limited to n <= {TREE_MAX_N}")
        parent = np.array(self.parent, dtype=np.int64, copy=True)
        size = 1 << n
        if parent.shape != (size,):
            raise ValueError(f"parent array must have length {size}")
        roots = np.flatnonzero(parent == ROOT)
        if roots.size != 1:
            raise ValueError(f"expected exactly one root, found {roots.size}")
        others = np.flatnonzero(parent != ROOT)
        diff = parent[others] ^ others
        if np.any(parent[others] < 0) or np.any(parent[others] >= size):
            raise ValueError("parent out of range")
        if np.any(np.bitwise_count(diff.astype(np.uint64)) != 1):
            raise ValueError("every parent link must be a cube edge")
        anc = parent.copy()
        anc[roots[0]] = roots[0]
        # 2**(n+1) pointer-doubling steps exceed any path length
        for _ in range(n + 1):
            anc = anc[anc]
        if np.any(anc != roots[0]):
            raise ValueError("parent links contain a cycle")
        parent.setflags(write=False)
        object.__setattr__(self, "parent", parent)

    @property
    def root(self) -> int:
        return int(np.flatnonzero(self.parent == ROOT)[0])

    def edges(self) -> np.ndarray:
        """Edge ids of the tree, one per non-root vertex (ascending vertex)."""
        v = np.flatnonzero(self.parent != ROOT)
        dims = np.log2(v ^ self.parent[v]).astype(np.int64)
        return cube.edge_ids(v, dims, self.n)

    @classmethod
    def from_path(cls, n: int, vertices) -> "SpanningTree":
        parent = np.full(1 << n, -2, dtype=np.int64)
        parent[vertices[0]] = ROOT
        for a, b in zip(vertices, vertices[1:]):
            parent[b] = a
        return cls(n, parent)


class _DisjointSets:
    def __init__(self, size):
        self.up = list(range(size))

    def find(self, a):
        up = self.up
        while up[a] != a:
            up[a] = up[up[a]]
            a = up[a]
        return a

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.up[max(a, b)] = min(a, b)


def mono_pieces(c: Colouring, tree: SpanningTree) -> dict[int, set[tuple[int, int]]]:
    """For every vertex, the monochromatic pieces of the tree it belongs to.

    A piece is a maximal connected set of same-coloured tree edges, named
    by (colour, representative vertex).
    """
    if tree.n != c.n:
        raise ValueError("tree and colouring live on different cubes")
    sets = [_DisjointSets(1 << c.n) for _ in range(c.r)]
    links = []
    for v in np.flatnonzero(tree.parent != ROOT).tolist():
        p = int(tree.parent[v])
        colour = c.colour_between(v, p)
        sets[colour].union(v, p)
        links.append((v, p, colour))
    pieces: dict[int, set[tuple[int, int]]] = {}
    for v, p, colour in links:
        name = (colour, sets[colour].find(v))
        pieces.setdefault(v, set()).add(name)
        pieces.setdefault(p, set()).add(name)
    return pieces


def mono_components(c: Colouring, tree: SpanningTree) -> int:
    """Number of maximal monochromatic subtrees of ``tree``.

    Two vertices share a component when the tree path between them is
    single-coloured.  Vertices where colours meet sit in several components.
    """
    pieces = mono_pieces(c, tree)
    return len(set().union(*pieces.values())) if pieces else 1


def random_spanning_tree(n: int, seed: int) -> SpanningTree:
    """Uniform spanning tree of Q_n by Wilson's loop-erased random walks."""
    cube.check_dim(n)
    if n > WILSON_MAX_N:
        raise ValueError(f"random spanning trees are limited to n <= {WILSON_MAX_N}")
    rng = stream(seed)
    size = 1 << n
    in_tree = np.zeros(size, dtype=bool)
    nxt = np.full(size, ROOT, dtype=np.int64)
    root = int(rng.integers(size))
    in_tree[root] = True
    steps = iter(())
    for start in rng.permutation(size).tolist():
        u = start
        while not in_tree[u]:
            try:
                i = next(steps)
            except StopIteration:
                steps = iter(rng.integers(n, size=4096).tolist())
                i = next(steps)
            # overwriting nxt erases loops implicitly
            nxt[u] = u ^ (1 << i)
            u = int(nxt[u])
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            u = int(nxt[u])
    nxt[root] = ROOT
    return SpanningTree(n, nxt)


def hamming_component_bound(n: int, trials: int, seed: int) -> dict:
    """Check the Hamming-code colouring splits random spanning trees into
    at least 2**n / (n + 1) pieces with no two codewords sharing a piece."""
    if n not in (3, 7):
        raise ValueError(f"Hamming component check supports n in (3, 7), got {n}")
    c, code = gen_hamming(n)
    bound = (1 << n) // (n + 1)
    counts = []
    violations = []
    for t in range(trials):
        tree = random_spanning_tree(n, stream(seed, t).integers(1 << 62).item())
        pieces = mono_pieces(c, tree)
        count = len(set().union(*pieces.values()))
        counts.append(count)
        seen: dict[tuple[int, int], int] = {}
        shared = None
        for w in sorted(code):
            for name in pieces[w]:
                if name in seen:
                    shared = (seen[name], w)
                seen[name] = w
        if count < bound or shared is not None:
            violations.append({"trial": t, "components": count,
                               "shared": list(shared) if shared else None})
    return {
        "n": n,
        "trials": trials,
        "minComponents": min(counts) if counts else None,
        "bound": bound,
        "violations": violations,
    }
