"""Edge colourings of Q_n, the standard constructions, and the QNCOL file format.

Colour 0 is red and colour 1 is blue throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from os import PathLike
from pathlib import Path

import numpy as np

from . import cube
from .rng import stream

RED = 0
BLUE = 1
MAX_COLOURS = 16
FILE_MAGIC = "QNCOL"
FILE_VERSION = 1
LINE_WIDTH = 64


_HEX_DIGIT = np.frombuffer(b"0123456789abcdef", dtype=np.uint8)
_HEX_VALUE = np.full(256, 255, dtype=np.uint8)
_HEX_VALUE[_HEX_DIGIT] = np.arange(16, dtype=np.uint8)


class ColourFileError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Colouring:
    """Immutable map from edge id to colour index in ``[0, r)``."""

    n: int
    r: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        cube.check_dim(self.n)
        if not 2 <= self.r <= MAX_COLOURS:
            raise ValueError(f"number of colours must be in [2, {MAX_COLOURS}], got {self.r}")
        data = np.array(self.data, dtype=np.uint8, copy=True)
        if data.shape != (cube.num_edges(self.n),):
            raise ValueError(
                f"expected {cube.num_edges(self.n)} edge colours, got shape {data.shape}"
            )
        if data.size and int(data.max()) >= self.r:
            raise ValueError("colour out of range")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def __eq__(self, other):
        if not isinstance(other, Colouring):
            return NotImplemented
        return self.n == other.n and self.r == other.r and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.n, self.r, self.data.tobytes()))

    def colour_of(self, e: int) -> int:
        if not 0 <= e < self.data.size:
            raise ValueError(f"edge id {e} out of range")
        return int(self.data[e])

    def colour_at(self, v: int, i: int) -> int:
        """Colour of the edge leaving ``v`` in dimension ``i``."""
        return int(self.data[cube.edge_id(v, i, self.n)])

    def colour_between(self, u: int, w: int) -> int:
        return int(self.data[cube.edge_between(u, w, self.n)])

    def vertex_table(self) -> np.ndarray:
        """``(2**n, n)`` array: colour of the edge at each vertex in each dimension."""
        v = np.arange(1 << self.n, dtype=np.int64)[:, None]
        i = np.arange(self.n, dtype=np.int64)[None, :]
        return self.data[cube.edge_ids(v, i, self.n)]

    def swapped(self, perm=None) -> "Colouring":
        """Relabel colours; default swaps red and blue (r = 2)."""
        if perm is None:
            if self.r != 2:
                raise ValueError("default swap needs r = 2")
            perm = [1, 0]
        perm = np.asarray(perm, dtype=np.uint8)
        return Colouring(self.n, self.r, perm[self.data])


def constant(n: int, r: int = 2, colour: int = RED) -> Colouring:
    return Colouring(n, r, np.full(cube.num_edges(n), colour, dtype=np.uint8))


def gen_layered(n: int, x0: int = 0) -> Colouring:
    """Colour by the parity of the distance from ``x0`` to the edge's closer endpoint."""
    cube.check_dim(n)
    cube.check_vertex(x0, n)
    lower, dim = cube.all_edges(n)
    closer = (lower ^ x0) & ~(np.int64(1) << dim)
    parity = np.bitwise_count(closer.astype(np.uint64)) & 1
    return Colouring(n, 2, parity.astype(np.uint8))


def hamming_code(n: int) -> np.ndarray:
    """Codewords of the length-n Hamming code, n = 2**k - 1, ascending."""
    cube.check_dim(n)
    if n < 3 or (n + 1) & n:
        raise ValueError(f"Hamming code needs n = 2**k - 1 with k >= 2, got {n}")
    # column i of the parity-check matrix is the binary expansion of i + 1
    syndrome = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        syndrome[1 << i: 2 << i] = syndrome[: 1 << i] ^ (i + 1)
    return np.flatnonzero(syndrome == 0)


def gen_hamming(n: int) -> tuple[Colouring, frozenset[int]]:
    """Red iff the edge touches a codeword of the Hamming code."""
    code = hamming_code(n)
    member = np.zeros(1 << n, dtype=bool)
    member[code] = True
    lower, dim = cube.all_edges(n)
    upper = lower | (np.int64(1) << dim)
    red = member[lower] | member[upper]
    data = np.where(red, RED, BLUE).astype(np.uint8)
    return Colouring(n, 2, data), frozenset(int(v) for v in code)


def gen_direction(n: int, r: int) -> Colouring:
    """Dimension ``i`` gets colour ``i mod r``."""
    cube.check_dim(n)
    if r > n:
        raise ValueError(f"direction colouring needs r <= n, got r={r}, n={n}")
    _, dim = cube.all_edges(n)
    return Colouring(n, r, (dim % r).astype(np.uint8))


def gen_random(n: int, r: int, seed: int) -> Colouring:
    cube.check_dim(n)
    if r < 2:
        raise ValueError("need at least two colours")
    rng = stream(seed)
    return Colouring(n, r, rng.integers(0, r, size=cube.num_edges(n), dtype=np.uint8))


def antipodal_edge_ids(n: int) -> np.ndarray:
    """Id of the antipodal edge of every edge."""
    half = 1 << (n - 1)
    ids = np.arange(cube.num_edges(n), dtype=np.int64)
    # the clear-bit endpoint of the antipodal edge is the complement within the block
    return (ids >> (n - 1) << (n - 1)) + (half - 1 - (ids & (half - 1)))


def gen_antipodal_random(n: int, seed: int, r: int = 2) -> Colouring:
    """Random 2-colouring in which every edge and its antipode differ."""
    cube.check_dim(n)
    if r != 2:
        raise ValueError("antipodal colourings are defined for r = 2 only")
    if n < 2:
        raise ValueError("Q_1 has a self-antipodal edge")
    half = 1 << (n - 1)
    rng = stream(seed)
    data = np.empty(cube.num_edges(n), dtype=np.uint8)
    blocks = data.reshape(n, half)
    first = rng.integers(0, 2, size=(n, half // 2), dtype=np.uint8)
    blocks[:, : half // 2] = first
    blocks[:, half // 2:] = 1 - first[:, ::-1]
    return Colouring(n, 2, data)


def restrict_subcube(c: Colouring, mask: int, values: int = 0) -> Colouring:
    """Colouring of the sub-cube with coordinates in ``mask`` fixed to ``values``.

    Free coordinates keep their relative order and are renumbered from 0.
    """
    n = c.n
    if mask & ~cube.full_mask(n) or values & ~mask:
        raise ValueError("fixed values must lie inside the mask, and the mask inside Q_n")
    free = [i for i in range(n) if not (mask >> i) & 1]
    m = len(free)
    if m == 0:
        raise ValueError("restriction leaves no free coordinates")
    if m == n:
        return c
    w = np.arange(1 << m, dtype=np.int64)
    parent = np.full(w.shape, values, dtype=np.int64)
    for j, b in enumerate(free):
        parent |= ((w >> j) & 1) << b
    sub_lower, sub_dim = cube.all_edges(m)
    parent_dim = np.asarray(free, dtype=np.int64)[sub_dim]
    ids = cube.edge_ids(parent[sub_lower], parent_dim, n)
    return Colouring(m, c.r, c.data[ids])


def red_fraction_sigma(n: int) -> float:
    """Standard deviation of the red fraction of a uniform 2-colouring."""
    return 0.5 / np.sqrt(cube.num_edges(n))


def serialise(c: Colouring, comments=()) -> str:
    lines = [f"{FILE_MAGIC} {FILE_VERSION} {c.n} {c.r}"]
    lines += [f"# {line}" for line in comments]
    digits = _HEX_DIGIT[c.data].tobytes().decode("ascii")
    lines += [digits[i: i + LINE_WIDTH] for i in range(0, len(digits), LINE_WIDTH)]
    return "\n".join(lines) + "\n"


def parse(text: str) -> Colouring:
    lines = text.split("\n")
    header = lines[0].split()
    if len(header) != 4 or header[0] != FILE_MAGIC:
        raise ColourFileError(f"malformed header {lines[0]!r}")
    try:
        version, n, r = (int(tok) for tok in header[1:])
    except ValueError:
        raise ColourFileError(f"malformed header {lines[0]!r}") from None
    if version != FILE_VERSION:
        raise ColourFileError(f"unsupported version {version}")
    try:
        cube.check_dim(n)
    except ValueError as exc:
        raise ColourFileError(str(exc)) from None
    if not 2 <= r <= MAX_COLOURS:
        raise ColourFileError(f"bad colour count {r}")
    body = "".join(line.strip() for line in lines[1:] if not line.startswith("#"))
    if len(body) != cube.num_edges(n):
        raise ColourFileError(f"expected {cube.num_edges(n)} digits, found {len(body)}")
    try:
        values = _HEX_VALUE[np.frombuffer(body.encode("ascii"), dtype=np.uint8)]
    except UnicodeEncodeError:
        values = np.array([255])
    if values.size and int(values.max()) == 255:
        raise ColourFileError("non-hex digit in body")
    if values.size and int(values.max()) >= r:
        raise ColourFileError("colour out of range")
    return Colouring(n, r, values)


def save(c: Colouring, path: str | PathLike, comments=()) -> None:
    Path(path).write_bytes(serialise(c, comments).encode("utf-8"))


def load(path: str | PathLike) -> Colouring:
    return parse(Path(path).read_bytes().decode("utf-8"))

