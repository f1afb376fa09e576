"""Vertex arithmetic and canonical edge indexing for the hypercube Q_n.

Vertices are plain ints whose low ``n`` bits are the coordinates.  An edge
{v, v ^ (1 << i)} is stored under the id ``i * 2**(n-1) + squeeze(v, i)``
where ``v`` is the endpoint with bit ``i`` clear and ``squeeze`` deletes
bit ``i``.  Ids are contiguous in ``[0, n * 2**(n-1))``.
"""
from __future__ import annotations

from collections.abc import Iterator
from math import comb

import numpy as np

MAX_DIM = 30


def check_dim(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_DIM:
        raise ValueError(f"dimension must be an integer in [1, {MAX_DIM}], got {n!r}")
    return int(n)


def check_vertex(x: int, n: int) -> int:
    if not 0 <= x < (1 << n):
        raise ValueError(f"vertex {x!r} has bits outside the low {n}")
    return int(x)


def num_vertices(n: int) -> int:
    return 1 << n


def num_edges(n: int) -> int:
    return n << (n - 1)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def distance(x: int, y: int) -> int:
    """Hamming distance."""
    return (x ^ y).bit_count()


def antipode(x: int, n: int) -> int:
    return x ^ full_mask(n)


def squeeze(v: int, i: int) -> int:
    """Delete bit ``i`` of ``v``, shifting the higher bits down."""
    return (v & ((1 << i) - 1)) | ((v >> (i + 1)) << i)


def unsqueeze(s: int, i: int) -> int:
    """Inverse of :func:`squeeze`: insert a zero at bit ``i``."""
    return (s & ((1 << i) - 1)) | ((s >> i) << (i + 1))


def edge_id(u: int, i: int, n: int) -> int:
    """Canonical id of the edge leaving ``u`` in dimension ``i``.

    Either endpoint may be passed; the clear-bit endpoint is used.
    """
    if not 0 <= i < n:
        raise ValueError(f"dimension {i} out of range for n={n}")
    v = u & ~(1 << i)
    return (i << (n - 1)) + squeeze(v, i)


def edge_from_id(e: int, n: int) -> tuple[int, int]:
    """Return ``(v, i)`` with ``v`` the clear-bit endpoint of edge ``e``."""
    if not 0 <= e < num_edges(n):
        raise ValueError(f"edge id {e} out of range for n={n}")
    i = e >> (n - 1)
    return unsqueeze(e & ((1 << (n - 1)) - 1), i), i


def edge_endpoints(e: int, n: int) -> tuple[int, int]:
    v, i = edge_from_id(e, n)
    return v, v | (1 << i)


def edge_between(u: int, w: int, n: int) -> int:
    d = u ^ w
    if d == 0 or d & (d - 1):
        raise ValueError(f"{u} and {w} are not adjacent")
    return edge_id(u, d.bit_length() - 1, n)


def all_edges(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays ``(lower, dim)`` indexed by edge id."""
    half = 1 << (n - 1)
    ids = np.arange(num_edges(n), dtype=np.int64)
    dim = ids >> (n - 1)
    s = ids & (half - 1)
    low = s & ((np.int64(1) << dim) - 1)
    lower = low | ((s >> dim) << (dim + 1))
    return lower, dim


def edge_ids(v: np.ndarray, i: np.ndarray, n: int) -> np.ndarray:
    """Vectorised :func:`edge_id`."""
    v = np.asarray(v, dtype=np.int64)
    i = np.asarray(i, dtype=np.int64)
    v = v & ~(np.int64(1) << i)
    s = (v & ((np.int64(1) << i) - 1)) | ((v >> (i + 1)) << i)
    return (i << (n - 1)) + s


def popcounts(n: int) -> np.ndarray:
    """Popcount of every vertex of Q_n."""
    pc = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pc[1 << i: 2 << i] = pc[: 1 << i] + 1
    return pc


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def deposit(t: int, mask: int) -> int:
    """Scatter the low bits of ``t`` into the set positions of ``mask``."""
    out = 0
    for j, b in enumerate(_bits(mask)):
        if (t >> j) & 1:
            out |= 1 << b
    return out


def extract(v: int, mask: int) -> int:
    """Gather the bits of ``v`` at the set positions of ``mask``."""
    out = 0
    for j, b in enumerate(_bits(mask)):
        if (v >> b) & 1:
            out |= 1 << j
    return out


def _combinations(width: int, k: int) -> Iterator[int]:
    # Gosper's hack: k-bit masks of the given width in ascending order
    if k == 0:
        yield 0
        return
    m = (1 << k) - 1
    limit = 1 << width
    while m < limit:
        yield m
        c = m & -m
        nxt = m + c
        m = (((nxt ^ m) >> 2) // c) | nxt


def neighbourhood_iter(x: int, k: int, n: int) -> Iterator[int]:
    """Vertices at distance exactly ``k`` from ``x``, by ascending xor-mask."""
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range [0, {n}]")
    for m in _combinations(n, k):
        yield x ^ m


def interval_iter(x: int, y: int) -> Iterator[tuple[int, int]]:
    """Yield ``(layer, z)`` for every z on a geodesic between x and y.

    Layers (distance from x) ascend; inside a layer the xor-mask ascends.
    """
    d = x ^ y
    width = d.bit_count()
    for j in range(width + 1):
        for t in _combinations(width, j):
            yield j, x ^ deposit(t, d)


def layer_sizes(d: int) -> list[int]:
    return [comb(d, j) for j in range(d + 1)]
