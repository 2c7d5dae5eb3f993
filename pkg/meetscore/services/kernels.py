"""
Compiled Levenshtein kernels.

All kernels work on integer-encoded tokens and float64 word times. The DP is
evaluated on a band: row ``r`` (0..n) covers columns ``lo[r]..hi[r]`` inclusive.
A full band (``lo = 0``, ``hi = m``) gives the plain Levenshtein distance.
"""

import numpy as np
from numba import njit

INF_COST = np.int64(1 << 60)

OP_CORRECT = 0
OP_SUBSTITUTE = 1
OP_INSERT = 2
OP_DELETE = 3


@njit(cache=True, nogil=True)
def _allowed(i, j, ref_begin, ref_end, hyp_begin, hyp_end, collar, tol):
    return hyp_begin[j] < ref_end[i] + collar - tol and ref_begin[i] < hyp_end[j] + collar - tol


@njit(cache=True, nogil=True)
def match_ranges(ref_begin, ref_end, hyp_begin, hyp_end, collar, tol):
    """First/last hypothesis index each reference word may match (0-based, first > last if none)."""
    n = ref_begin.shape[0]
    m = hyp_begin.shape[0]
    first = np.full(n, m, np.int64)
    last = np.full(n, -1, np.int64)
    if m == 0:
        return first, last

    # prefix maximum of the latest reachable time, suffix minimum of begin times
    reach = np.empty(m, np.float64)
    running = -np.inf
    for j in range(m):
        value = hyp_end[j] + collar - tol
        if value > running:
            running = value
        reach[j] = running
    earliest = np.empty(m, np.float64)
    running = np.inf
    for j in range(m - 1, -1, -1):
        if hyp_begin[j] < running:
            running = hyp_begin[j]
        earliest[j] = running

    for i in range(n):
        lo = np.searchsorted(reach, ref_begin[i], "right")
        hi = np.searchsorted(earliest, ref_end[i] + collar - tol, "left") - 1
        while lo <= hi and not _allowed(i, lo, ref_begin, ref_end, hyp_begin, hyp_end, collar, tol):
            lo += 1
        while hi >= lo and not _allowed(i, hi, ref_begin, ref_end, hyp_begin, hyp_end, collar, tol):
            hi -= 1
        if lo <= hi:
            first[i] = lo
            last[i] = hi
    return first, last


@njit(cache=True, nogil=True)
def dp_band(first, last, m):
    """Monotone, connected DP region holding every allowed match and its predecessor."""
    n = first.shape[0]
    raw_lo = np.full(n + 1, m + 1, np.int64)
    raw_hi = np.full(n + 1, -1, np.int64)
    raw_lo[0] = 0
    raw_hi[0] = 0
    raw_lo[n] = min(raw_lo[n], m)
    raw_hi[n] = max(raw_hi[n], m)
    for i in range(n):
        if first[i] > last[i]:
            continue
        raw_lo[i + 1] = min(raw_lo[i + 1], first[i] + 1)
        raw_hi[i + 1] = max(raw_hi[i + 1], last[i] + 1)
        raw_lo[i] = min(raw_lo[i], first[i])
        raw_hi[i] = max(raw_hi[i], last[i])

    lo = np.empty(n + 1, np.int64)
    hi = np.empty(n + 1, np.int64)
    running = m
    for r in range(n, -1, -1):
        if raw_lo[r] < running:
            running = raw_lo[r]
        lo[r] = running
    running = 0
    for r in range(n + 1):
        if raw_hi[r] > running:
            running = raw_hi[r]
        hi[r] = running
    for r in range(n):
        if hi[r] < lo[r + 1]:
            hi[r] = lo[r + 1]
    return lo, hi


@njit(cache=True, nogil=True)
def banded_distance(ref, hyp, lo, hi, ref_begin, ref_end, hyp_begin, hyp_end,
                    collar, tol, timed, c_cor, c_sub, c_ins, c_del):
    """Two-row banded DP. Returns (distance, substitutions, insertions, deletions).

    Counts follow the optimal path under the preference
    diagonal > deletion > insertion, the same order the backtrace uses.
    """
    n = ref.shape[0]
    m = hyp.shape[0]
    prev_d = np.full(m + 1, INF_COST, np.int64)
    cur_d = np.full(m + 1, INF_COST, np.int64)
    prev_s = np.zeros(m + 1, np.int64)
    prev_i = np.zeros(m + 1, np.int64)
    prev_x = np.zeros(m + 1, np.int64)
    cur_s = np.zeros(m + 1, np.int64)
    cur_i = np.zeros(m + 1, np.int64)
    cur_x = np.zeros(m + 1, np.int64)

    for j in range(lo[0], hi[0] + 1):
        prev_d[j] = j * c_ins
        prev_i[j] = j

    for r in range(1, n + 1):
        plo = lo[r - 1]
        phi = hi[r - 1]
        clo = lo[r]
        chi = hi[r]
        for j in range(clo, chi + 1):
            best = INF_COST
            bs = 0
            bi = 0
            bx = 0
            if j >= 1 and plo <= j - 1 <= phi:
                ok = True
                if timed:
                    ok = _allowed(r - 1, j - 1, ref_begin, ref_end, hyp_begin, hyp_end, collar, tol)
                if ok:
                    if ref[r - 1] == hyp[j - 1]:
                        value = prev_d[j - 1] + c_cor
                        extra = 0
                    else:
                        value = prev_d[j - 1] + c_sub
                        extra = 1
                    if value < best:
                        best = value
                        bs = prev_s[j - 1] + extra
                        bi = prev_i[j - 1]
                        bx = prev_x[j - 1]
            if plo <= j <= phi:
                value = prev_d[j] + c_del
                if value < best:
                    best = value
                    bs = prev_s[j]
                    bi = prev_i[j]
                    bx = prev_x[j] + 1
            if j - 1 >= clo:
                value = cur_d[j - 1] + c_ins
                if value < best:
                    best = value
                    bs = cur_s[j - 1]
                    bi = cur_i[j - 1] + 1
                    bx = cur_x[j - 1]
            cur_d[j] = best
            cur_s[j] = bs
            cur_i[j] = bi
            cur_x[j] = bx
        prev_d, cur_d = cur_d, prev_d
        prev_s, cur_s = cur_s, prev_s
        prev_i, cur_i = cur_i, prev_i
        prev_x, cur_x = cur_x, prev_x

    return prev_d[m], prev_s[m], prev_i[m], prev_x[m]


@njit(cache=True, nogil=True)
def banded_alignment(ref, hyp, lo, hi, ref_begin, ref_end, hyp_begin, hyp_end,
                     collar, tol, timed, c_cor, c_sub, c_ins, c_del):
    """Banded DP storing only the band, then backtrace.

    Returns (distance, kinds, ref_indices, hyp_indices); missing indices are -1.
    """
    n = ref.shape[0]
    m = hyp.shape[0]
    offsets = np.empty(n + 2, np.int64)
    offsets[0] = 0
    for r in range(n + 1):
        offsets[r + 1] = offsets[r] + hi[r] - lo[r] + 1
    band = np.full(offsets[n + 1], INF_COST, np.int64)

    for j in range(lo[0], hi[0] + 1):
        band[j - lo[0]] = j * c_ins

    for r in range(1, n + 1):
        plo = lo[r - 1]
        phi = hi[r - 1]
        clo = lo[r]
        chi = hi[r]
        pbase = offsets[r - 1] - plo
        cbase = offsets[r] - clo
        for j in range(clo, chi + 1):
            best = INF_COST
            if j >= 1 and plo <= j - 1 <= phi:
                ok = True
                if timed:
                    ok = _allowed(r - 1, j - 1, ref_begin, ref_end, hyp_begin, hyp_end, collar, tol)
                if ok:
                    cost = c_cor if ref[r - 1] == hyp[j - 1] else c_sub
                    value = band[pbase + j - 1] + cost
                    if value < best:
                        best = value
            if plo <= j <= phi:
                value = band[pbase + j] + c_del
                if value < best:
                    best = value
            if j - 1 >= clo:
                value = band[cbase + j - 1] + c_ins
                if value < best:
                    best = value
            band[cbase + j] = best

    distance = band[offsets[n] - lo[n] + m]
    kinds = np.empty(n + m, np.int8)
    ref_idx = np.empty(n + m, np.int64)
    hyp_idx = np.empty(n + m, np.int64)
    k = 0
    r = n
    j = m
    while r > 0 or j > 0:
        here = band[offsets[r] - lo[r] + j]
        if r > 0 and j > 0 and lo[r - 1] <= j - 1 <= hi[r - 1]:
            ok = True
            if timed:
                ok = _allowed(r - 1, j - 1, ref_begin, ref_end, hyp_begin, hyp_end, collar, tol)
            if ok:
                same = ref[r - 1] == hyp[j - 1]
                cost = c_cor if same else c_sub
                if band[offsets[r - 1] - lo[r - 1] + j - 1] + cost == here:
                    kinds[k] = OP_CORRECT if same else OP_SUBSTITUTE
                    ref_idx[k] = r - 1
                    hyp_idx[k] = j - 1
                    k += 1
                    r -= 1
                    j -= 1
                    continue
        if r > 0 and lo[r - 1] <= j <= hi[r - 1] and band[offsets[r - 1] - lo[r - 1] + j] + c_del == here:
            kinds[k] = OP_DELETE
            ref_idx[k] = r - 1
            hyp_idx[k] = -1
            k += 1
            r -= 1
            continue
        kinds[k] = OP_INSERT
        ref_idx[k] = -1
        hyp_idx[k] = j - 1
        k += 1
        j -= 1

    return distance, kinds[:k][::-1].copy(), ref_idx[:k][::-1].copy(), hyp_idx[:k][::-1].copy()
