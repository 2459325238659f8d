"""Compiled inner loop for LPT passes.

Finish times are rationals S + w/q with at most one parallel task per
processor, held as integer pairs (num, den) = (S*q + w, q) and compared
by cross-multiplication, so the pass is exact as long as
sum(W) * P * P fits in an int64; callers fall back to the arbitrary-
precision pass otherwise.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        return wrap


@njit(cache=True)
def argmax_tau(workloads, pi, ids):
    """Index of the task with the longest duration W/P_i; ties to lowest id."""
    best = 0
    for j in range(1, workloads.shape[0]):
        a = workloads[j] * pi[best]
        b = workloads[best] * pi[j]
        if a > b or (a == b and ids[j] < ids[best]):
            best = j
    return best


@njit(cache=True)
def lpt_core(workloads, pi, ids, order, procs):
    """One LPT pass; refines ``order`` in place and returns placements.

    ``order`` must be a permutation of 0..n-1, ideally already close to
    descending-duration order (insertion sort finishes the job exactly).
    Returns (assign, num, den, cmax_num, cmax_den): for parallel tasks
    ``assign`` holds the first processor of the contiguous group, for
    sequential tasks the chosen processor; (num[p], den[p]) is F_p.
    """
    n = workloads.shape[0]

    # exact descending (duration, -id) insertion sort; durations W_i/pi_i
    for k in range(1, n):
        i = order[k]
        j = k - 1
        while j >= 0:
            o = order[j]
            a = workloads[i] * pi[o]
            b = workloads[o] * pi[i]
            if b < a or (b == a and ids[o] > ids[i]):
                order[j + 1] = o
                j -= 1
            else:
                break
        order[j + 1] = i

    num = np.zeros(procs, np.int64)
    den = np.ones(procs, np.int64)
    assign = np.empty(n, np.int64)

    nxt = 0
    for k in range(n):
        i = order[k]
        if pi[i] > 1:
            assign[i] = nxt
            for p in range(nxt, nxt + pi[i]):
                den[p] = pi[i]
                num[p] = workloads[i]
            nxt += pi[i]

    # binary min-heap of processor indices keyed by (F_p, p)
    heap = np.empty(procs, np.int64)
    for p in range(procs):
        heap[p] = p

    for start in range(procs // 2 - 1, -1, -1):
        pos = start
        while True:
            child = 2 * pos + 1
            if child >= procs:
                break
            p_c = heap[child]
            if child + 1 < procs:
                p_r = heap[child + 1]
                ar = num[p_r] * den[p_c]
                br = num[p_c] * den[p_r]
                if ar < br or (ar == br and p_r < p_c):
                    child += 1
                    p_c = p_r
            p_here = heap[pos]
            a = num[p_c] * den[p_here]
            b = num[p_here] * den[p_c]
            if a < b or (a == b and p_c < p_here):
                heap[pos] = p_c
                heap[child] = p_here
                pos = child
            else:
                break

    for k in range(n):
        i = order[k]
        if pi[i] != 1:
            continue
        root = heap[0]
        assign[i] = root
        num[root] += workloads[i] * den[root]
        pos = 0
        while True:
            child = 2 * pos + 1
            if child >= procs:
                break
            p_c = heap[child]
            if child + 1 < procs:
                p_r = heap[child + 1]
                ar = num[p_r] * den[p_c]
                br = num[p_c] * den[p_r]
                if ar < br or (ar == br and p_r < p_c):
                    child += 1
                    p_c = p_r
            p_here = heap[pos]
            a = num[p_c] * den[p_here]
            b = num[p_here] * den[p_c]
            if a < b or (a == b and p_c < p_here):
                heap[pos] = p_c
                heap[child] = p_here
                pos = child
            else:
                break

    worst = 0
    for p in range(1, procs):
        if num[p] * den[worst] > num[worst] * den[p]:
            worst = p
    return assign, num, den, num[worst], den[worst]
