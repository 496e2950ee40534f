"""Compiled inner loops.

Everything here is ``nogil`` so the Python drivers can fan work out over a
thread pool.  Randomness is counter based: sample ``i`` of a run seeded with
``seed`` draws from a splitmix64 stream keyed on ``(seed, i)``, which makes
results independent of how sample indices are split across workers.

Anchor/plan layout passed as ``code`` (int64)::

    0 nv, 1 center src vertex, 2 center dst vertex, 3 n_arms, 4 n_anchor, 5 n_steps
    6 + 4k .. 9 + 4k   arm k: end (0 src, 1 dst), dir (0 in, 1 out), side (0 before, 1 after), far vertex
    14 .. 16           anchor slots in time order (slot 0 = center, 1 + k = arm k)
    17 + 4s .. 20 + 4s step s: pattern src, pattern dst, slot below, slot above (-1 = none)
"""

from __future__ import annotations

import numpy as np
from numba import njit

OVERFLOW = -1
CAP_EXCEEDED = -1

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_STREAM = np.uint64(0xD1B54A32D192ED03)
_SAFE_PRODUCT = float(2 ** 62)


@njit(inline="always")
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(inline="always")
def _next(state):
    state = state + _GOLDEN
    return state, _mix(state)


@njit(inline="always")
def _stream(seed, index):
    return _mix(np.uint64(seed) ^ (np.uint64(index) * _STREAM))


@njit(inline="always")
def _below(state, n):
    """Uniform integer in ``[0, n)`` by rejection; ``n >= 1``."""
    un = np.uint64(n)
    threshold = (np.uint64(0) - un) % un
    while True:
        state, z = _next(state)
        if z >= threshold:
            return state, np.int64(z % un)


@njit(inline="always")
def _lower(arr, lo, hi, x):
    # first index in [lo, hi) with arr[idx] >= x
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(inline="always")
def _upper(arr, lo, hi, x):
    # first index in [lo, hi) with arr[idx] > x
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(nogil=True, cache=True)
def list_count_flat(vals, offs, strict):
    """Tuples with one element per list, increasing along the list order."""
    nl = offs.shape[0] - 1
    if nl == 0:
        return np.int64(1)
    prev = np.ones(offs[1] - offs[0], dtype=np.int64)
    for r in range(1, nl):
        a0 = offs[r - 1]
        na = offs[r] - a0
        b0 = offs[r]
        nb = offs[r + 1] - b0
        cur = np.empty(nb, dtype=np.int64)
        j = 0
        acc = np.int64(0)
        for i in range(nb):
            x = vals[b0 + i]
            if strict:
                while j < na and vals[a0 + j] < x:
                    acc += prev[j]
                    j += 1
            else:
                while j < na and vals[a0 + j] <= x:
                    acc += prev[j]
                    j += 1
            cur[i] = acc
        prev = cur
    return prev.sum()


@njit(nogil=True, cache=True)
def check_path(c, e1, e2, src, dst, t, pair_keys, pair_ptr, pair_eid, n, code, delta, strict):
    """Number of motif matches whose anchor image is the path ``(c; e1, e2)``."""
    nv = code[0]
    n_arms = code[3]
    n_anchor = code[4]
    n_steps = code[5]
    ae = np.empty(3, dtype=np.int64)
    ae[0] = c
    ae[1] = e1
    ae[2] = e2
    phi = np.full(4, -1, dtype=np.int64)
    u = src[c]
    v = dst[c]
    phi[code[1]] = u
    phi[code[2]] = v
    for k in range(n_arms):
        e = ae[1 + k]
        shared = u if code[6 + 4 * k] == 0 else v
        if code[7 + 4 * k] == 0:
            if dst[e] != shared:
                return 0
            phi[code[9 + 4 * k]] = src[e]
        else:
            if src[e] != shared:
                return 0
            phi[code[9 + 4 * k]] = dst[e]
    for i in range(nv):
        for j in range(i):
            if phi[i] == phi[j]:
                return 0

    prev = ae[code[14]]
    for i in range(1, n_anchor):
        cur = ae[code[14 + i]]
        if strict:
            if t[cur] <= t[prev]:
                return 0
        elif cur <= prev:
            return 0
        prev = cur
    t0 = t[ae[code[14]]]
    if t[prev] - t0 > delta:
        return 0
    if n_steps == 0:
        return 1

    m = t.shape[0]
    hi_all = _upper(t, 0, m, t0 + delta)
    starts = np.empty(n_steps, dtype=np.int64)
    ends = np.empty(n_steps, dtype=np.int64)
    total = 0
    bound = 1.0
    npk = pair_keys.shape[0]
    for s in range(n_steps):
        base = 17 + 4 * s
        eb = ae[code[base + 2]]
        lo = _upper(t, 0, m, t[eb]) if strict else eb + 1
        hi = hi_all
        if code[base + 3] >= 0:
            ea = ae[code[base + 3]]
            h2 = _lower(t, 0, m, t[ea]) if strict else ea
            if h2 < hi:
                hi = h2
        if lo >= hi:
            return 0
        key = phi[code[base]] * n + phi[code[base + 1]]
        kk = _lower(pair_keys, 0, npk, key)
        if kk == npk or pair_keys[kk] != key:
            return 0
        p0 = pair_ptr[kk]
        p1 = pair_ptr[kk + 1]
        s0 = _lower(pair_eid, p0, p1, lo)
        s1 = _lower(pair_eid, s0, p1, hi)
        if s0 >= s1:
            return 0
        starts[s] = s0
        ends[s] = s1
        total += s1 - s0
        bound *= s1 - s0
    if bound >= _SAFE_PRODUCT:
        return OVERFLOW

    vals = np.empty(total, dtype=np.int64)
    offs = np.empty(n_steps + 1, dtype=np.int64)
    w = 0
    for s in range(n_steps):
        offs[s] = w
        for i in range(starts[s], ends[s]):
            vals[w] = t[pair_eid[i]] if strict else pair_eid[i]
            w += 1
    offs[n_steps] = w
    return list_count_flat(vals, offs, True)


@njit(nogil=True, cache=True)
def arm_weights(src, dst, t, out_ptr, out_eid, in_ptr, in_eid, arms, delta):
    """Per-center product of arm window degrees; one sweep, pointers move forward only."""
    m = t.shape[0]
    w = np.ones(m, dtype=np.int64)
    b0 = 0  # first id with t >= tc - delta
    b1 = 0  # first id with t > tc
    a0 = 0  # first id with t >= tc
    a1 = 0  # first id with t > tc + delta
    for c in range(m):
        tc = t[c]
        while b0 < m and t[b0] < tc - delta:
            b0 += 1
        while b1 < m and t[b1] <= tc:
            b1 += 1
        while a0 < m and t[a0] < tc:
            a0 += 1
        while a1 < m and t[a1] <= tc + delta:
            a1 += 1
        for k in range(arms.shape[0]):
            x = src[c] if arms[k, 0] == 0 else dst[c]
            lo = b0 if arms[k, 2] == 0 else a0
            hi = b1 if arms[k, 2] == 0 else a1
            if arms[k, 1] == 1:
                s0 = _lower(out_eid, out_ptr[x], out_ptr[x + 1], lo)
                s1 = _lower(out_eid, s0, out_ptr[x + 1], hi)
            else:
                s0 = _lower(in_eid, in_ptr[x], in_ptr[x + 1], lo)
                s1 = _lower(in_eid, s0, in_ptr[x + 1], hi)
            w[c] *= s1 - s0
    return w


@njit(inline="always")
def _draw(state, prefix, W, src, dst, t, out_ptr, out_eid, in_ptr, in_eid, arms, delta, row):
    state, r = _below(state, W)
    m = prefix.shape[0]
    c = _upper(prefix, 0, m, r)
    row[0] = c
    tc = t[c]
    for k in range(arms.shape[0]):
        x = src[c] if arms[k, 0] == 0 else dst[c]
        if arms[k, 2] == 0:
            lo = _lower(t, 0, m, tc - delta)
            hi = _upper(t, 0, m, tc)
        else:
            lo = _lower(t, 0, m, tc)
            hi = _upper(t, 0, m, tc + delta)
        if arms[k, 1] == 1:
            a0 = out_ptr[x]
            a1 = out_ptr[x + 1]
            s0 = _lower(out_eid, a0, a1, lo)
            s1 = _lower(out_eid, s0, a1, hi)
            state, j = _below(state, s1 - s0)
            row[1 + k] = out_eid[s0 + j]
        else:
            a0 = in_ptr[x]
            a1 = in_ptr[x + 1]
            s0 = _lower(in_eid, a0, a1, lo)
            s1 = _lower(in_eid, s0, a1, hi)
            state, j = _below(state, s1 - s0)
            row[1 + k] = in_eid[s0 + j]
    return state


@njit(nogil=True, cache=True)
def sample_batch(seed, start, count, prefix, W, src, dst, t, out_ptr, out_eid,
                 in_ptr, in_eid, arms, delta):
    """Rows ``(center, arm0, arm1)`` for sample indices ``start .. start+count-1``."""
    out = np.full((count, 3), -1, dtype=np.int64)
    for i in range(count):
        state = _stream(seed, start + i)
        _draw(state, prefix, W, src, dst, t, out_ptr, out_eid, in_ptr, in_eid,
              arms, delta, out[i])
    return out


@njit(nogil=True, cache=True)
def check_batch(paths, src, dst, t, pair_keys, pair_ptr, pair_eid, n, code, delta, strict):
    k = paths.shape[0]
    out = np.empty(k, dtype=np.int64)
    for i in range(k):
        out[i] = check_path(paths[i, 0], paths[i, 1], paths[i, 2], src, dst, t,
                            pair_keys, pair_ptr, pair_eid, n, code, delta, strict)
    return out


@njit(nogil=True, cache=True)
def sample_check_batch(seed, start, count, prefix, W, src, dst, t, out_ptr, out_eid,
                       in_ptr, in_eid, pair_keys, pair_ptr, pair_eid, n, arms, code,
                       delta, strict):
    out = np.empty(count, dtype=np.int64)
    row = np.full(3, -1, dtype=np.int64)
    for i in range(count):
        state = _stream(seed, start + i)
        _draw(state, prefix, W, src, dst, t, out_ptr, out_eid, in_ptr, in_eid,
              arms, delta, row)
        out[i] = check_path(row[0], row[1], row[2], src, dst, t, pair_keys, pair_ptr,
                            pair_eid, n, code, delta, strict)
    return out


@njit(inline="always")
def _is_free(phi, nv, x):
    for i in range(nv):
        if phi[i] == x:
            return False
    return True


@njit(nogil=True, cache=True)
def backtrack_count(src, dst, t, out_ptr, out_eid, in_ptr, in_eid, pair_keys, pair_ptr,
                    pair_eid, n, ps, pd, nv, delta, strict, root_lo, root_hi, cap):
    """Chronological backtracking over roots ``root_lo .. root_hi-1``.

    Returns ``(count, work)``; ``count == CAP_EXCEEDED`` once ``work > cap``.
    """
    L = ps.shape[0]
    m = t.shape[0]
    npk = pair_keys.shape[0]
    phi = np.full(nv, -1, dtype=np.int64)
    kind = np.zeros(L, dtype=np.int64)  # 0 pair, 1 out of src image, 2 into dst image, 3 any
    cur = np.zeros(L, dtype=np.int64)
    end = np.zeros(L, dtype=np.int64)
    set_a = np.zeros(L, dtype=np.bool_)
    set_b = np.zeros(L, dtype=np.bool_)
    chosen = np.zeros(L, dtype=np.int64)
    total = np.int64(0)
    work = np.int64(0)

    for r in range(root_lo, root_hi):
        u = src[r]
        v = dst[r]
        if u == v:
            continue
        work += 1
        if L == 1:
            total += 1
            continue
        for i in range(nv):
            phi[i] = -1
        phi[ps[0]] = u
        phi[pd[0]] = v
        chosen[0] = r
        hi_all = _upper(t, 0, m, t[r] + delta)
        level = 1
        fresh = True
        while level >= 1:
            a = ps[level]
            b = pd[level]
            if fresh:
                fresh = False
                set_a[level] = False
                set_b[level] = False
                prev = chosen[level - 1]
                lo = _upper(t, 0, m, t[prev]) if strict else prev + 1
                hi = hi_all
                fa = phi[a]
                fb = phi[b]
                if lo >= hi:
                    cur[level] = 0
                    end[level] = 0
                elif fa >= 0 and fb >= 0:
                    kind[level] = 0
                    key = fa * n + fb
                    kk = _lower(pair_keys, 0, npk, key)
                    if kk == npk or pair_keys[kk] != key:
                        cur[level] = 0
                        end[level] = 0
                    else:
                        s0 = _lower(pair_eid, pair_ptr[kk], pair_ptr[kk + 1], lo)
                        cur[level] = s0
                        end[level] = _lower(pair_eid, s0, pair_ptr[kk + 1], hi)
                elif fa >= 0:
                    kind[level] = 1
                    s0 = _lower(out_eid, out_ptr[fa], out_ptr[fa + 1], lo)
                    cur[level] = s0
                    end[level] = _lower(out_eid, s0, out_ptr[fa + 1], hi)
                elif fb >= 0:
                    kind[level] = 2
                    s0 = _lower(in_eid, in_ptr[fb], in_ptr[fb + 1], lo)
                    cur[level] = s0
                    end[level] = _lower(in_eid, s0, in_ptr[fb + 1], hi)
                else:
                    kind[level] = 3
                    cur[level] = lo
                    end[level] = hi
            # undo the mapping made by the previous candidate at this level
            if set_a[level]:
                phi[a] = -1
                set_a[level] = False
            if set_b[level]:
                phi[b] = -1
                set_b[level] = False

            if level == L - 1 and kind[level] == 0:
                total += end[level] - cur[level]
                work += end[level] - cur[level] + 1
                cur[level] = end[level]

            found = False
            while cur[level] < end[level]:
                idx = cur[level]
                cur[level] += 1
                work += 1
                k = kind[level]
                if k == 0:
                    e = pair_eid[idx]
                elif k == 1:
                    e = out_eid[idx]
                    w = dst[e]
                    if not _is_free(phi, nv, w):
                        continue
                    phi[b] = w
                    set_b[level] = True
                elif k == 2:
                    e = in_eid[idx]
                    w = src[e]
                    if not _is_free(phi, nv, w):
                        continue
                    phi[a] = w
                    set_a[level] = True
                else:
                    e = idx
                    wa = src[e]
                    wb = dst[e]
                    if wa == wb or not _is_free(phi, nv, wa) or not _is_free(phi, nv, wb):
                        continue
                    phi[a] = wa
                    phi[b] = wb
                    set_a[level] = True
                    set_b[level] = True
                chosen[level] = e
                found = True
                break

            if work > cap:
                return CAP_EXCEEDED, work
            if not found:
                level -= 1
            elif level == L - 1:
                total += 1
            else:
                level += 1
                fresh = True
    return total, work
