"""Averaged colour-change quantities, exact expectations E_k, and the bound chain.

For a pair (x, y) at distance d:

* ``f`` averages f_c(x, y) over the edges leaving y away from x,
* ``g`` averages f_chi(yz)(x, z) over the edges yz back towards x,
* ``h`` averages f_chi(yz)(x, y) over the same edges,
* ``S`` is |J_red / (n - d) - I_red / d|.

At d = n there are no outgoing edges and ``f`` is read as min_c f_c(x, y).
All expectations are exact :class:`fractions.Fraction` values built from
integer sums; floats appear only in the bound evaluation and in sampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from . import _kernels, cube
from .colourings import RED, Colouring
from .geodesics import FcTable, fc_table, fc_towards
from .rng import stream

EXACT_MAX_N = 12
CONDITIONED_MAX_N = 20
QUANTITIES = ("f", "g", "h", "S", "opt")
_ROW = {"f": 0, "g": 1, "h": 2, "S": 3, "opt": 4}


@dataclass(frozen=True)
class IjCounts:
    """Per-colour counts of neighbours of y towards (i) and away from (j) x."""

    i: tuple[int, ...]
    j: tuple[int, ...]

    @property
    def i_red(self):
        return self.i[0]

    @property
    def i_blue(self):
        return self.i[1]

    @property
    def j_red(self):
        return self.j[0]

    @property
    def j_blue(self):
        return self.j[1]


def ij_counts(c: Colouring, x: int, y: int) -> IjCounts:
    n = c.n
    towards = x ^ y
    i = [0] * c.r
    j = [0] * c.r
    for dim in range(n):
        colour = c.colour_at(y, dim)
        if (towards >> dim) & 1:
            i[colour] += 1
        else:
            j[colour] += 1
    return IjCounts(tuple(i), tuple(j))


def s_value(c: Colouring, x: int, y: int, colour: int = RED) -> Fraction:
    """S^x(y); ``colour`` picks which of the (equal) two forms to evaluate."""
    if c.r != 2:
        raise ValueError("S is defined for 2-colourings")
    d = cube.distance(x, y)
    if not 1 <= d <= c.n - 1:
        raise ValueError(f"S needs 1 <= d(x, y) <= n - 1, got d={d}")
    counts = ij_counts(c, x, y)
    return abs(Fraction(counts.j[colour], c.n - d) - Fraction(counts.i[colour], d))


def fgh_averages(c: Colouring, x: int, y: int, table: FcTable | None = None):
    """(f, g, h) at the pair (x, y) as fractions."""
    n = c.n
    d = cube.distance(x, y)
    if d == 0:
        raise ValueError("g and h need d(x, y) >= 1")
    if table is None or table.source != x:
        table = fc_table(c, x, y)
    here = table.at(y)
    counts = ij_counts(c, x, y)
    if d < n:
        f = Fraction(sum(jc * fc for jc, fc in zip(counts.j, here)), n - d)
    else:
        f = Fraction(min(here))
    h = Fraction(sum(ic * fc for ic, fc in zip(counts.i, here)), d)
    g_num = 0
    for dim in range(n):
        if ((x ^ y) >> dim) & 1:
            z = y ^ (1 << dim)
            g_num += table.at(z)[c.colour_at(y, dim)]
    return f, Fraction(g_num, d), h


@dataclass
class LayerSums:
    """Integer numerators of the E_k averages over some universe of pairs.

    ``count[k]`` is the number of ordered pairs at distance k in the
    universe.  ``violations`` counts pointwise failures of h <= g,
    |f - h| <= S and |f_red - f_blue| <= 1; ``first`` holds a failing pair.
    """

    n: int
    count: list[int]
    sums: np.ndarray
    violations: dict[str, int]
    first: dict[str, tuple[int, int] | None]
    pairs: int

    def expect(self, quantity: str, k: int) -> Fraction:
        n = self.n
        if quantity not in _ROW:
            raise ValueError(f"unknown quantity {quantity!r}")
        if not 0 <= k <= n:
            raise ValueError(f"k={k} out of range [0, {n}]")
        if quantity == "f" and k == n:
            quantity = "opt"
        num = int(self.sums[_ROW[quantity], k])
        if quantity == "f":
            den = n - k
        elif quantity in ("g", "h"):
            if k == 0:
                raise ValueError(f"{quantity} is undefined at distance 0")
            den = k
        elif quantity == "S":
            if not 1 <= k <= n - 1:
                raise ValueError("S is undefined at distance 0 and n")
            den = k * (n - k)
        else:
            den = 1
        return Fraction(num, den * self.count[k])


_CLAIMS = ("step2", "step3", "observation")


def _from_kernel(n, sums, viol, first, sources) -> LayerSums:
    total = sums.sum(axis=0)
    m = len(sources)
    count = [m * comb(n, k) for k in range(n + 1)]
    violations = {}
    firsts = {}
    for idx, name in enumerate(_CLAIMS):
        violations[name] = int(viol[:, idx].sum())
        bad = np.flatnonzero(viol[:, idx])
        firsts[name] = (int(sources[bad[0]]), int(first[bad[0], idx])) if bad.size else None
    return LayerSums(n, count, total, violations, firsts, m << n)


def sums_from_sources(c: Colouring, sources) -> LayerSums:
    src = np.asarray(sources, dtype=np.int64)
    sums, viol, first = _kernels.all_source_sums(c.data, c.n, c.r, src)
    return _from_kernel(c.n, sums, viol, first, src)


def per_source_sums(c: Colouring, sources=None):
    """Raw (m, 5, n + 1) numerator array, one slab per source."""
    src = np.arange(1 << c.n, dtype=np.int64) if sources is None else np.asarray(sources, np.int64)
    sums, _, _ = _kernels.all_source_sums(c.data, c.n, c.r, src)
    return src, sums


def _sums_given_v(c: Colouring, v: int) -> LayerSums:
    n, r = c.n, c.r
    size = 1 << n
    u = np.arange(size, dtype=np.int64)
    m = u ^ v
    k = np.bitwise_count(m.astype(np.uint64)).astype(np.int64)
    col_v = [c.colour_at(v, i) for i in range(n)]
    towards = [fc_towards(c, v, colour) for colour in range(r)]
    fvals = np.stack(towards)  # fvals[c, u] = f_c(u, v)
    in_i = [((m >> i) & 1).astype(bool) for i in range(n)]
    fsum = np.zeros(size, dtype=np.int64)
    hsum = np.zeros(size, dtype=np.int64)
    gsum = np.zeros(size, dtype=np.int64)
    ired = np.zeros(size, dtype=np.int64)
    jred = np.zeros(size, dtype=np.int64)
    for i in range(n):
        colour = col_v[i]
        here = fvals[colour]
        hsum += np.where(in_i[i], here, 0)
        fsum += np.where(in_i[i], 0, here)
        if colour == RED:
            ired += in_i[i]
            jred += ~in_i[i]
        z = v ^ (1 << i)
        gsum += np.where(in_i[i], fc_towards(c, z, colour), 0)
    lo = fvals.min(axis=0)
    hi = fvals.max(axis=0)
    s_num = np.abs(jred * k - ired * (n - k))
    interior = (k > 0) & (k < n)
    sums = np.zeros((5, n + 1), dtype=np.int64)
    for row, vals in enumerate((fsum, gsum, hsum, np.where(interior, s_num, 0), lo)):
        np.add.at(sums[row], k, vals)
    checks = {
        "step2": (k >= 1) & (hsum > gsum),
        "step3": interior & (np.abs(k * fsum - (n - k) * hsum) > s_num) & (r == 2),
        "observation": hi - lo > 1,
    }
    violations = {name: int(bad.sum()) for name, bad in checks.items()}
    first = {}
    for name, bad in checks.items():
        idx = np.flatnonzero(bad)
        first[name] = (int(idx[0]), v) if idx.size else None
    return LayerSums(n, [comb(n, j) for j in range(n + 1)], sums, violations, first, size)


def exact_sums(c: Colouring, given_u: int | None = None, given_v: int | None = None) -> LayerSums:
    """Exact layer sums over all ordered pairs, optionally with one end fixed."""
    if given_u is not None and given_v is not None:
        raise ValueError("condition on u or on v, not both")
    n = c.n
    if given_u is None and given_v is None:
        if n > EXACT_MAX_N:
            raise ValueError(f"unconditioned exact mode is limited to n <= {EXACT_MAX_N}")
        return sums_from_sources(c, np.arange(1 << n))
    if n > CONDITIONED_MAX_N:
        raise ValueError(f"conditioned exact mode is limited to n <= {CONDITIONED_MAX_N}")
    if given_u is not None:
        return sums_from_sources(c, [cube.check_vertex(given_u, n)])
    return _sums_given_v(c, cube.check_vertex(given_v, n))


def pair_values(c: Colouring, u: int, v: int) -> dict[str, Fraction]:
    """All of f, g, h, S, opt that are defined at the pair (u, v)."""
    n = c.n
    d = cube.distance(u, v)
    table = fc_table(c, u, v)
    out = {"opt": Fraction(table.opt(v))}
    if d == 0:
        out["f"] = Fraction(0)
        return out
    out["f"], out["g"], out["h"] = fgh_averages(c, u, v, table)
    if d < n and c.r == 2:
        out["S"] = s_value(c, u, v)
    return out


@dataclass(frozen=True)
class SampleEstimate:
    mean: float
    stderr: float
    count: int


def sample_pairs(n: int, k: int, count: int, seed: int, given_u=None, given_v=None):
    """Uniform ordered pairs at distance k: u uniform, then a uniform k-subset to flip."""
    rng = stream(seed)
    us = rng.integers(0, 1 << n, size=count, dtype=np.int64)
    for s in range(count):
        flips = rng.choice(n, size=k, replace=False)
        mask = int(np.sum(np.int64(1) << flips.astype(np.int64))) if k else 0
        if given_v is not None:
            yield given_v ^ mask, given_v
        else:
            u = int(us[s]) if given_u is None else given_u
            yield u, u ^ mask


def expect_k(
    c: Colouring,
    quantity: str,
    k: int,
    given_u: int | None = None,
    given_v: int | None = None,
    samples: int | None = None,
    seed: int = 0,
):
    """E_k[quantity]: a Fraction in exact mode, a SampleEstimate when ``samples`` is set."""
    if quantity not in _ROW:
        raise ValueError(f"unknown quantity {quantity!r}")
    if not 0 <= k <= c.n:
        raise ValueError(f"k={k} out of range [0, {c.n}]")
    if samples is None:
        return exact_sums(c, given_u, given_v).expect(quantity, k)
    if given_u is not None and given_v is not None:
        raise ValueError("condition on u or on v, not both")
    key = "opt" if quantity == "f" and k == c.n else quantity
    values = []
    for u, v in sample_pairs(c.n, k, samples, seed, given_u, given_v):
        vals = pair_values(c, u, v)
        if key not in vals:
            raise ValueError(f"{quantity} is undefined at distance {k}")
        values.append(float(vals[key]))
    arr = np.asarray(values)
    stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else math.inf
    return SampleEstimate(float(arr.mean()), stderr, int(arr.size))


@dataclass
class Certificate:
    claim: str
    holds: bool
    checked: int
    counterexample: dict | None = None

    def as_dict(self):
        return {
            "claim": self.claim,
            "holds": self.holds,
            "checked": self.checked,
            "counterexample": self.counterexample,
        }


def _require_two_colours(c: Colouring):
    if c.r != 2:
        raise ValueError("the lemma quantities need a 2-colouring")


def verify_step1(c: Colouring, k: int | None = None, u: int | None = None) -> Certificate:
    """E_{k-1}[f] = E_k[g], exactly, for every conditioning vertex u."""
    n = c.n
    ks = range(1, n + 1) if k is None else [k]
    for kk in ks:
        if not 1 <= kk <= n:
            raise ValueError(f"k={kk} out of range [1, {n}]")
    if u is None and n > EXACT_MAX_N:
        raise ValueError(f"exhaustive step1 check is limited to n <= {EXACT_MAX_N}")
    sources = np.arange(1 << n) if u is None else np.array([cube.check_vertex(u, n)])
    src, sums = per_source_sums(c, sources)
    checked = 0
    for idx, uu in enumerate(src):
        for kk in ks:
            lhs = Fraction(int(sums[idx, 0, kk - 1]), (n - kk + 1) * comb(n, kk - 1))
            rhs = Fraction(int(sums[idx, 1, kk]), kk * comb(n, kk))
            checked += 1
            if lhs != rhs:
                return Certificate(
                    "step1", False, checked,
                    {"u": int(uu), "k": kk, "E_prev_f": str(lhs), "E_g": str(rhs)},
                )
    return Certificate("step1", True, checked)


def verify_step2(c: Colouring, samples: int | None = None, seed: int = 0) -> Certificate:
    """h(x, y) <= g(x, y) for all pairs with d >= 1.

    Exhaustive up to n = 12; above that ``samples`` random sources are
    checked against every target.
    """
    n = c.n
    if n <= EXACT_MAX_N and samples is None:
        sources = np.arange(1 << n)
    else:
        if samples is None:
            raise ValueError(f"n > {EXACT_MAX_N} needs a sample count")
        sources = stream(seed).integers(0, 1 << n, size=samples, dtype=np.int64)
    sums = sums_from_sources(c, sources)
    bad = sums.first["step2"]
    if bad:
        f, g, h = fgh_averages(c, *bad)
        return Certificate(
            "step2", False, sums.pairs,
            {"x": bad[0], "y": bad[1], "h": str(h), "g": str(g)},
        )
    return Certificate("step2", True, sums.pairs - len(sources))


def verify_step3(c: Colouring, k: int | None = None, v: int | None = None) -> Certificate:
    """E_k[f] <= E_k[h] + E_k[S] and the pointwise |f - h| <= S.

    With ``v`` the expectations are conditioned on the far endpoint.
    """
    _require_two_colours(c)
    n = c.n
    ks = range(1, n) if k is None else [k]
    for kk in ks:
        if not 1 <= kk <= n - 1:
            raise ValueError(f"k={kk} out of range [1, {n - 1}]")
    sums = exact_sums(c, given_v=v)
    checked = 0
    for kk in ks:
        ef, eh, es = (sums.expect(q, kk) for q in ("f", "h", "S"))
        checked += 1
        if ef > eh + es:
            return Certificate(
                "step3", False, checked,
                {"k": kk, "E_f": str(ef), "E_h": str(eh), "E_S": str(es)},
            )
    bad = sums.first["step3"]
    if bad:
        f, _, h = fgh_averages(c, *bad)
        return Certificate(
            "step3", False, checked,
            {"x": bad[0], "y": bad[1], "f": str(f), "h": str(h), "S": str(s_value(c, *bad))},
        )
    return Certificate("step3", True, checked + sums.pairs)


def hypergeom_moments(n: int, k: int, r: int, mode: str = "exact") -> tuple[Fraction, Fraction]:
    """Mean and variance of the number of red edges among k drawn from n, r of them red.

    ``mode="paper"`` uses the variance with denominator n(n-1)(n-2).
    """
    if n < 2 or not 0 <= k <= n or not 0 <= r <= n:
        raise ValueError(f"need n >= 2 and 0 <= k, r <= n, got n={n}, k={k}, r={r}")
    mean = Fraction(k * r, n)
    if mode == "exact":
        var = Fraction(k * r * (n - r) * (n - k), n * n * (n - 1))
    elif mode == "paper":
        if n < 3:
            raise ValueError("paper-mode variance needs n >= 3")
        var = Fraction(k * (n - r) * (n - k) * r, n * (n - 1) * (n - 2))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return mean, var


def hypergeom_enumerated(n: int, k: int, r: int) -> tuple[Fraction, Fraction]:
    """Mean and variance by listing every k-subset of n edges (first r red)."""
    total = 0
    total_sq = 0
    draws = 0
    for subset in combinations(range(n), k):
        x = sum(1 for e in subset if e < r)
        total += x
        total_sq += x * x
        draws += 1
    mean = Fraction(total, draws)
    return mean, Fraction(total_sq, draws) - mean * mean


def _s_terms(n: int, k, mode: str):
    k = np.asarray(k, dtype=np.float64)
    weight = 1.0 / (n - k) + 1.0 / k
    if mode == "exact":
        return weight * 0.5 * np.sqrt(k * (n - k) / (n - 1))
    if mode == "paper":
        return weight * 0.5 * np.sqrt(k * (n - k) * n / ((n - 1) * (n - 2)))
    if mode == "asymptotic":
        return weight * 0.5 * np.sqrt(k * (n - k) / n)
    raise ValueError(f"unknown mode {mode!r}")


def s_bound(n: int, k: int, mode: str = "exact") -> float:
    """Upper bound on E_k[S].

    ``exact`` uses the true hypergeometric variance, ``paper`` the printed
    one, ``asymptotic`` the lemma's summand without its 1 + o(1) factor.
    Only ``exact`` is a proven bound at finite n.
    """
    if n < 3 or not 1 <= k <= n - 1:
        raise ValueError(f"need n >= 3 and 1 <= k <= n - 1, got n={n}, k={k}")
    return float(_s_terms(n, k, mode))


def bound_table(n: int, mode: str = "exact") -> list[float]:
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    return [float(v) for v in _s_terms(n, np.arange(1, n), mode)]


def master_bound(n: int, mode: str = "exact") -> float:
    """B(n): the sum of s_bound(n, j) for j = 1 .. n - 1."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    return math.fsum(_s_terms(n, np.arange(1, n), mode))


def layer_abs_deviation(n: int) -> Fraction:
    """E|L - n/2| for L ~ Binomial(n, 1/2), summed over the distribution."""
    return Fraction(sum(comb(n, j) * abs(2 * j - n) for j in range(n + 1)), 2 * 2**n)


def layer_abs_deviation_closed(n: int) -> Fraction:
    if n % 2:
        raise ValueError("closed form is for even n")
    return Fraction(n * comb(n - 1, n // 2), 2**n)


@dataclass
class Check:
    name: str
    k: int
    holds: bool
    lhs: str
    rhs: str


@dataclass
class LemmaReport:
    n: int
    ef: list
    eg: list
    eh: list
    es: list
    bound: list
    cumulative: list
    checks: list[Check] = field(default_factory=list)
    bound_error: float = 0.0

    CSV_COLUMNS = (
        "k", "Ef_num", "Ef_den", "Eg_num", "Eg_den", "Eh_num", "Eh_den",
        "ES_num", "ES_den", "bound", "cumulative_bound",
    )

    @property
    def holds(self) -> bool:
        return all(ch.holds for ch in self.checks)

    def first_failure(self) -> Check | None:
        return next((ch for ch in self.checks if not ch.holds), None)

    def csv_header(self):
        return list(self.CSV_COLUMNS)

    def csv_rows(self):
        def frac(q):
            return ["", ""] if q is None else [q.numerator, q.denominator]

        def num(x):
            return "" if x is None else repr(x)

        for k in range(self.n + 1):
            yield [k, *frac(self.ef[k]), *frac(self.eg[k]), *frac(self.eh[k]), *frac(self.es[k]),
                   num(self.bound[k]), num(self.cumulative[k])]

    def as_dict(self):
        def frac(q):
            return None if q is None else str(q)

        return {
            "n": self.n,
            "holds": self.holds,
            "bound_error": self.bound_error,
            "rows": [
                {
                    "k": k,
                    "Ef": frac(self.ef[k]),
                    "Eg": frac(self.eg[k]),
                    "Eh": frac(self.eh[k]),
                    "ES": frac(self.es[k]),
                    "bound": self.bound[k],
                    "cumulative_bound": self.cumulative[k],
                }
                for k in range(self.n + 1)
            ],
            "checks": [vars(ch) for ch in self.checks],
        }


def verify_corollary_chain(c: Colouring, sums: LayerSums | None = None) -> LemmaReport:
    """Exact E_k table plus every inequality of the induction, row by row."""
    _require_two_colours(c)
    n = c.n
    if n < 3:
        raise ValueError("the chain needs n >= 3")
    if sums is None:
        sums = exact_sums(c)
    ef = [sums.expect("f", k) for k in range(n + 1)]
    eg = [None] + [sums.expect("g", k) for k in range(1, n + 1)]
    eh = [None] + [sums.expect("h", k) for k in range(1, n + 1)]
    es = [None] + [sums.expect("S", k) for k in range(1, n)] + [None]
    terms = bound_table(n)
    bound = [0.0, *terms, None]
    cumulative = [0.0]
    for t in terms:
        cumulative.append(cumulative[-1] + t)
    cumulative.append(cumulative[-1])
    # float evaluation error of the cumulative sums, relative
    err = 4 * n * np.finfo(float).eps * cumulative[-1]
    report = LemmaReport(n, ef, eg, eh, es, bound, cumulative, bound_error=float(err))

    def add(name, k, holds, lhs, rhs):
        report.checks.append(Check(name, k, bool(holds), str(lhs), str(rhs)))

    for k in range(1, n + 1):
        add("step1", k, ef[k - 1] == eg[k], ef[k - 1], eg[k])
    for k in range(1, n):
        add("step3", k, ef[k] <= eh[k] + es[k], ef[k], eh[k] + es[k])
        add("corollary", k, ef[k] <= ef[k - 1] + es[k], ef[k], ef[k - 1] + es[k])
        add("s_bound", k, float(es[k]) <= terms[k - 1], es[k], terms[k - 1])
        add("lemma", k, float(ef[k]) <= cumulative[k], ef[k], cumulative[k])
    for k in range(1, n + 1):
        add("step2", k, eh[k] <= eg[k], eh[k], eg[k])
    add("antipodal_h", n, ef[n] <= eh[n], ef[n], eh[n])
    add("antipodal", n, ef[n] <= ef[n - 1], ef[n], ef[n - 1])
    add("lemma", n, float(ef[n]) <= cumulative[n], ef[n], cumulative[n])
    add("pointwise_step2", 0, sums.violations["step2"] == 0, sums.violations["step2"], 0)
    add("pointwise_step3", 0, sums.violations["step3"] == 0, sums.violations["step3"], 0)
    add("observation", 0, sums.violations["observation"] == 0, sums.violations["observation"], 0)
    return report
