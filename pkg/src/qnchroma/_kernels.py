"""Compiled inner loops.

Every kernel takes the raw colour array of a :class:`Colouring` (uint8,
indexed by edge id) and works on plain integers.  Sums are accumulated in
int64 so callers can turn them into exact fractions.
"""
import os

import numba as nb
import numpy as np

if "NUMBA_THREADING_LAYER" not in os.environ:
    # the bundled TBB is too old and numba warns on every import
    nb.config.THREADING_LAYER = "omp"

INF = 1 << 12


@nb.njit(cache=True, inline="always")
def eid(v, i, n):
    v = v & ~(1 << i)
    return (i << (n - 1)) + ((v & ((1 << i) - 1)) | ((v >> (i + 1)) << i))


@nb.njit(cache=True)
def deposit_table(bits):
    k = bits.shape[0]
    dep = np.zeros(1 << k, dtype=np.int64)
    for j in range(k):
        lo = 1 << j
        b = np.int64(1) << bits[j]
        for t in range(lo):
            dep[lo + t] = dep[t] | b
    return dep


@nb.njit(cache=True)
def fc_interval(col, n, r, x, bits, base):
    """f_c(x, .) over the sub-cube spanned by ``bits`` around ``x``.

    Row ``t`` of the result belongs to vertex ``x ^ deposit(t)``.  ``base``
    seeds row 0; all zeros gives the ordinary table.
    """
    k = bits.shape[0]
    size = 1 << k
    dep = deposit_table(bits)
    table = np.empty((size, r), dtype=np.int16)
    for c in range(r):
        table[0, c] = base[c]
    raw = np.empty(r, dtype=np.int64)
    for t in range(1, size):
        y = x ^ dep[t]
        for c in range(r):
            raw[c] = INF
        for j in range(k):
            if (t >> j) & 1:
                c = col[eid(y, bits[j], n)]
                val = table[t ^ (1 << j), c]
                if val < raw[c]:
                    raw[c] = val
        lo = INF
        for c in range(r):
            if raw[c] < lo:
                lo = raw[c]
        for c in range(r):
            table[t, c] = raw[c] if raw[c] <= lo + 1 else lo + 1
    return table


@nb.njit(cache=True)
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@nb.njit(cache=True)
def source_sums(col, n, r, x, sums, viol, first):
    """Per-layer integer numerators of f, g, h, S and opt for one source.

    ``sums`` is (5, n + 1): rows F, G, H, S, O where
      F[k] = sum_y sum_c |J_c| f_c      (f = F / (n - k))
      G[k] = sum_y sum_{z in I} f_chi(yz)(x, z)
      H[k] = sum_y sum_c |I_c| f_c
      S[k] = sum_y |J_red k - I_red (n - k)|
      O[k] = sum_y min_c f_c
    ``viol`` counts pointwise failures of h <= g, |f - h| <= S, and
    |f_c - f_c'| <= 1; ``first`` keeps the first failing target for each.
    """
    bits = np.arange(n, dtype=np.int64)
    base = np.zeros(r, dtype=np.int16)
    table = fc_interval(col, n, r, x, bits, base)
    for t in range(1 << n):
        y = x ^ t
        k = popcount(t)
        fsum = 0
        gsum = 0
        hsum = 0
        jred = 0
        ired = 0
        for i in range(n):
            c = col[eid(y, i, n)]
            if (t >> i) & 1:
                hsum += table[t, c]
                gsum += table[t ^ (1 << i), c]
                if c == 0:
                    ired += 1
            else:
                fsum += table[t, c]
                if c == 0:
                    jred += 1
        lo = table[t, 0]
        hi = table[t, 0]
        for c in range(1, r):
            v = table[t, c]
            if v < lo:
                lo = v
            if v > hi:
                hi = v
        sums[0, k] += fsum
        sums[1, k] += gsum
        sums[2, k] += hsum
        sums[4, k] += lo
        if 0 < k < n:
            s_num = abs(jred * k - ired * (n - k))
            sums[3, k] += s_num
            if r == 2 and abs(k * fsum - (n - k) * hsum) > s_num:
                if viol[1] == 0:
                    first[1] = y
                viol[1] += 1
        if k >= 1 and hsum > gsum:
            if viol[0] == 0:
                first[0] = y
            viol[0] += 1
        if hi - lo > 1:
            if viol[2] == 0:
                first[2] = y
            viol[2] += 1


@nb.njit(cache=True, parallel=True)
def all_source_sums(col, n, r, sources):
    m = sources.shape[0]
    sums = np.zeros((m, 5, n + 1), dtype=np.int64)
    viol = np.zeros((m, 3), dtype=np.int64)
    first = np.full((m, 3), -1, dtype=np.int64)
    for s in nb.prange(m):
        source_sums(col, n, r, sources[s], sums[s], viol[s], first[s])
    return sums, viol, first


@nb.njit(cache=True)
def antipodal_geodesic_cost(col, n, r, x):
    bits = np.arange(n, dtype=np.int64)
    base = np.zeros(r, dtype=np.int16)
    table = fc_interval(col, n, r, x, bits, base)
    last = (1 << n) - 1
    lo = INF
    for c in range(r):
        if table[last, c] < lo:
            lo = table[last, c]
    return lo


@nb.njit(cache=True)
def bfs01(col, n, r, x, target, dist, parent):
    """0-1 BFS over (vertex, last colour) states from ``x``.

    Fills ``dist``/``parent`` (length 2**n * r) and returns the cost to
    ``target``, or -1 when ``target`` is negative (full search).
    """
    states = (1 << n) * r
    for s in range(states):
        dist[s] = INF
        parent[s] = -1
    cap = 2 * states + r + 1
    dq = np.empty(cap, dtype=np.int64)
    head = 0
    size = 0
    for c in range(r):
        s = x * r + c
        dist[s] = 0
        dq[(head + size) % cap] = s
        size += 1
    while size > 0:
        s = dq[head]
        head = (head + 1) % cap
        size -= 1
        v = s // r
        c = s - v * r
        d = dist[s]
        if v == target:
            return d
        for i in range(n):
            w = v ^ (1 << i)
            c2 = col[eid(v, i, n)]
            nd = d + (1 if c2 != c else 0)
            s2 = w * r + c2
            if nd < dist[s2]:
                dist[s2] = nd
                parent[s2] = s
                if c2 == c:
                    head = (head - 1) % cap
                    dq[head] = s2
                else:
                    dq[(head + size) % cap] = s2
                size += 1
    return -1


@nb.njit(cache=True)
def antipodal_path_cost(col, n, r, x, dist, parent):
    return bfs01(col, n, r, x, x ^ ((1 << n) - 1), dist, parent)


@nb.njit(cache=True, parallel=True)
def antipodal_profile(col, n, r, sources, path_mode):
    m = sources.shape[0]
    out = np.empty(m, dtype=np.int64)
    states = (1 << n) * r
    for s in nb.prange(m):
        if path_mode:
            dist = np.empty(states, dtype=np.int32)
            parent = np.empty(states, dtype=np.int64)
            out[s] = antipodal_path_cost(col, n, r, sources[s], dist, parent)
        else:
            out[s] = antipodal_geodesic_cost(col, n, r, sources[s])
    return out


@nb.njit(cache=True)
def min_antipodal(col, n, r, path_mode, dist, parent):
    """Minimum antipodal cost over v; both modes are symmetric under v <-> antipode."""
    best = INF
    for v in range(1 << (n - 1)):
        if path_mode:
            cost = antipodal_path_cost(col, n, r, v, dist, parent)
        else:
            cost = antipodal_geodesic_cost(col, n, r, v)
        if cost < best:
            best = cost
            if best == 0:
                break
    return best


@nb.njit(cache=True, parallel=True)
def exhaustive_min_costs(n, lo, hi, fixed_edge, path_mode):
    """Min antipodal cost of the 2-colourings with index in [lo, hi).

    Bit e of the index is the colour of edge e.  With ``fixed_edge >= 0``
    that edge is forced red and the index supplies the remaining edges.
    """
    e_count = n << (n - 1)
    states = (1 << n) * 2
    out = np.empty(hi - lo, dtype=np.int64)
    for idx in nb.prange(hi - lo):
        code = lo + idx
        col = np.empty(e_count, dtype=np.uint8)
        j = 0
        for e in range(e_count):
            if e == fixed_edge:
                col[e] = 0
            else:
                col[e] = (code >> j) & 1
                j += 1
        dist = np.empty(states, dtype=np.int32)
        parent = np.empty(states, dtype=np.int64)
        out[idx] = min_antipodal(col, n, 2, path_mode, dist, parent)
    return out


@nb.njit(cache=True, parallel=True)
def batch_min_costs(cols, n, r, path_mode):
    m = cols.shape[0]
    states = (1 << n) * r
    out = np.empty(m, dtype=np.int64)
    for s in nb.prange(m):
        dist = np.empty(states, dtype=np.int32)
        parent = np.empty(states, dtype=np.int64)
        out[s] = min_antipodal(cols[s], n, r, path_mode, dist, parent)
    return out


@nb.njit(cache=True)
def hamilton_dp(col, n, r):
    """dp[mask, v, c]: fewest changes on a path covering ``mask``, ending at v in colour c."""
    nv = 1 << n
    dp = np.full((1 << nv, nv, r), 127, dtype=np.int8)
    for v in range(nv):
        for i in range(n):
            w = v ^ (1 << i)
            dp[(1 << v) | (1 << w), w, col[eid(v, i, n)]] = 0
    for mask in range(1 << nv):
        for v in range(nv):
            if not (mask >> v) & 1:
                continue
            for c in range(r):
                cur = dp[mask, v, c]
                if cur == 127:
                    continue
                for i in range(n):
                    w = v ^ (1 << i)
                    if (mask >> w) & 1:
                        continue
                    c2 = col[eid(v, i, n)]
                    val = cur + (1 if c2 != c else 0)
                    nm = mask | (1 << w)
                    if val < dp[nm, w, c2]:
                        dp[nm, w, c2] = val
    return dp
