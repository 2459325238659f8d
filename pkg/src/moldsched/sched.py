"""Moldable-task schedulers: LPT, Part_Schedule, and its grid-friendly variant.

The schedulers operate in exact arithmetic: durations are workload /
processor-count rationals, and all comparisons (including the makespan
equality test the iterative scheduler's stopping rule needs) are done on
integers, never on rounded floats.  A compiled inner loop handles the
common case where the cross-multiplied values fit in 64 bits; an
arbitrary-precision pass covers the rest.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np

from ._core import HAVE_NUMBA, argmax_tau, lpt_core
from .model import (
    InfeasibleParallelSetError,
    InstanceTooLargeError,
    InvalidTaskError,
    Schedule,
    TaskSpec,
    UndefinedBoundError,
)

ORACLE_MAX_TASKS = 12
ORACLE_MAX_PROCS = 6

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class ScheduleResult:
    """A built schedule plus its makespan and final processor counts."""

    schedule: Schedule
    c_max: Fraction
    procs_per_task: Tuple[int, ...]
    iterations_taken: int


def lpt_bound(procs: int) -> Fraction:
    """Worst-case makespan ratio of LPT: 4/3 - 1/(3P)."""
    if procs < 1:
        raise UndefinedBoundError("LPT bound needs P >= 1")
    return Fraction(4, 3) - Fraction(1, 3 * procs)


def part_bound(procs: int) -> Fraction:
    """Worst-case makespan ratio of Part_Schedule: 2/(1 - 1/P), multiprocessor only."""
    if procs < 2:
        raise UndefinedBoundError("Part_Schedule bound diverges for P < 2")
    return Fraction(2 * procs, procs - 1)


def ideal_length(tasks: Sequence[TaskSpec], procs: int) -> Fraction:
    """Length of a perfectly balanced schedule, sum(W_i)/P."""
    if procs < 1:
        raise InvalidTaskError(f"procs must be >= 1, got {procs}")
    return Fraction(sum(t.workload for t in tasks), procs)


def is_approx_square(p: int) -> bool:
    """True if p = Q*Q or p = Q*(Q+1) for a natural Q."""
    q = isqrt(p)
    return p in (q * q, q * (q + 1))


def next_approx_square_increment(p: int) -> int:
    """Distance from p to the next larger approximate square.

    The approximate squares are {Q^2} U {Q(Q+1)} = 1, 2, 4, 6, 9, 12, 16,
    20, 25, 30, 36, ...; process counts in this set factor into near-equal
    grid dimensions.
    """
    if p < 1:
        raise InvalidTaskError(f"p must be >= 1, got {p}")
    q = isqrt(p)
    for member in (q * q, q * (q + 1), (q + 1) * (q + 1), (q + 1) * (q + 2)):
        if member > p:
            return member - p
    raise AssertionError("unreachable")


def nearest_approx_square(p: int) -> int:
    """Member of the approximate-square set closest to p (ties: smaller)."""
    if p < 1:
        raise InvalidTaskError(f"p must be >= 1, got {p}")
    if is_approx_square(p):
        return p
    above = p + next_approx_square_increment(p)
    below = p
    while below > 1 and not is_approx_square(below):
        below -= 1
    return below if p - below <= above - p else above


def _lpt_pass_exact(
    ids: Sequence[int],
    workloads: Sequence[int],
    pi: Sequence[int],
    procs: int,
    scaled_seeds: Optional[Sequence[int]],
    denom: int,
) -> Tuple[List[int], List[int], List[int]]:
    """Arbitrary-precision LPT pass over durations scaled by ``denom``.

    Returns (assign, fin, order): the first processor of each parallel
    task's contiguous group / the processor of each sequential task, the
    scaled finish times, and the placement order used.
    """
    n = len(ids)
    scaled = [workloads[i] * (denom // pi[i]) for i in range(n)]
    order = sorted(range(n), key=lambda i: (-scaled[i], ids[i]))

    fin = [0] * procs if scaled_seeds is None else list(scaled_seeds)
    assign = [0] * n

    nxt = 0
    for i in order:
        k = pi[i]
        if k > 1:
            assign[i] = nxt
            for p in range(nxt, nxt + k):
                fin[p] += scaled[i]
            nxt += k

    heap = [(fin[p], p) for p in range(procs)]
    heapq.heapify(heap)
    for i in order:
        if pi[i] == 1:
            f, p = heap[0]
            assign[i] = p
            heapq.heapreplace(heap, (f + scaled[i], p))
    for f, p in heap:
        fin[p] = f
    return assign, fin, order


def _rows_from_assign(
    ids: Sequence[int],
    pi: Sequence[int],
    procs: int,
    order: Sequence[int],
    assign: Sequence[int],
) -> List[List[int]]:
    """Rebuild per-processor rows: parallel tasks first, then sequential."""
    rows: List[List[int]] = [[] for _ in range(procs)]
    for i in order:
        if pi[i] > 1:
            for p in range(assign[i], assign[i] + pi[i]):
                rows[p].append(ids[i])
    for i in order:
        if pi[i] == 1:
            rows[assign[i]].append(ids[i])
    return rows


def _package(
    ids: Sequence[int],
    workloads: Sequence[int],
    pi: Sequence[int],
    procs: int,
    rows: Sequence[Sequence[int]],
    seeds: Optional[Sequence[Fraction]],
) -> Schedule:
    """Build an immutable Schedule (exact start/finish times) from row lists."""
    workload_of = dict(zip(ids, workloads))
    group_of = dict(zip(ids, pi))
    assignment: dict = {}
    for p, row in enumerate(rows):
        for tid in row:
            assignment.setdefault(tid, set()).add(p)

    start_times = []
    finish_times = []
    for p in range(procs):
        clock = Fraction(0) if seeds is None else Fraction(seeds[p])
        starts = []
        for tid in rows[p]:
            starts.append(clock)
            clock += Fraction(workload_of[tid], group_of[tid])
        start_times.append(tuple(starts))
        finish_times.append(clock)

    return Schedule(
        rows=tuple(tuple(row) for row in rows),
        start_times=tuple(start_times),
        proc_assignment={tid: frozenset(ps) for tid, ps in assignment.items()},
        finish_times=tuple(finish_times),
    )


def _check_inputs(tasks: Sequence[TaskSpec], procs: int) -> None:
    if procs < 1:
        raise InvalidTaskError(f"procs must be >= 1, got {procs}")
    ids = [t.object_id for t in tasks]
    if len(set(ids)) != len(ids):
        raise InvalidTaskError("task ids must be unique")
    for t in tasks:
        if t.procs < 1:
            raise InvalidTaskError(f"task {t.object_id}: procs must be >= 1")
        if t.workload < 0:
            raise InvalidTaskError(f"task {t.object_id}: workload must be >= 0")


def _fits_fast(workloads: Sequence[int], procs: int) -> bool:
    return HAVE_NUMBA and sum(workloads) * procs * procs < _INT64_SAFE


def lpt_schedule(
    tasks: Sequence[TaskSpec],
    procs: int,
    initial_finish: Optional[Sequence[Fraction]] = None,
) -> ScheduleResult:
    """Longest-processing-time list schedule for tasks with fixed P_i.

    Tasks with P_i > 1 are placed first, all starting at time zero on
    disjoint processor groups (requires sum of their P_i <= procs);
    sequential tasks are then appended to the earliest-finishing
    processor.  Ties: longer duration first, then ascending task id;
    earliest-F_p ties go to the lowest processor id.  ``initial_finish``
    seeds per-processor finish times and is only supported for
    all-sequential task lists.
    """
    _check_inputs(tasks, procs)
    parallel_total = sum(t.procs for t in tasks if t.procs > 1)
    if parallel_total > procs:
        raise InfeasibleParallelSetError(
            f"parallel tasks need {parallel_total} processors, only {procs} exist"
        )

    seeds = None
    if initial_finish is not None:
        if len(initial_finish) != procs:
            raise InvalidTaskError("initial_finish must have one entry per processor")
        seeds = [Fraction(s) for s in initial_finish]
        if any(s < 0 for s in seeds):
            raise InvalidTaskError("initial_finish entries must be >= 0")
        if all(s == 0 for s in seeds):
            seeds = None
        elif parallel_total > 0:
            raise InvalidTaskError(
                "initial_finish seeds are only supported for sequential task lists"
            )

    ids = [t.object_id for t in tasks]
    workloads = [t.workload for t in tasks]
    pi = [t.procs for t in tasks]
    n = len(tasks)

    if seeds is None and _fits_fast(workloads, procs):
        w_arr = np.array(workloads, dtype=np.int64)
        pi_arr = np.array(pi, dtype=np.int64)
        ids_arr = np.array(ids, dtype=np.int64)
        order = np.arange(n, dtype=np.int64)
        assign, _, _, cmax_num, cmax_den = lpt_core(w_arr, pi_arr, ids_arr, order, procs)
        c_max = Fraction(int(cmax_num), int(cmax_den))
        rows = _rows_from_assign(ids, pi, procs, [int(i) for i in order], assign)
    else:
        denom = 1
        for k in pi:
            if k > 1:
                denom = lcm(denom, k)
        scaled_seeds = None
        if seeds is not None:
            for s in seeds:
                denom = lcm(denom, s.denominator)
            scaled_seeds = [int(s * denom) for s in seeds]
        assign, fin, order = _lpt_pass_exact(ids, workloads, pi, procs, scaled_seeds, denom)
        c_max = Fraction(max(fin, default=0), denom)
        rows = _rows_from_assign(ids, pi, procs, order, assign)

    schedule = _package(ids, workloads, pi, procs, rows, seeds)
    return ScheduleResult(
        schedule=schedule,
        c_max=c_max,
        procs_per_task=tuple(pi),
        iterations_taken=0,
    )


def part_schedule(
    tasks: Sequence[TaskSpec],
    procs: int,
    cutoff: Optional[int] = 20,
) -> ScheduleResult:
    """Iterative moldable schedule: parallelize the longest task, rebuild by LPT.

    All P_i start at 1.  Each iteration picks the task with the longest
    current duration (ties: lowest id) and grows its P_i by d, where d is
    1 while P_i is below ``cutoff`` and otherwise the step to the next
    approximate square, so that large processor grids stay near-square.
    A processor budget a = P is charged d (plus 1 when a task first turns
    parallel) per step, and the search stops when the makespan is no
    longer the longest task, the budget is exhausted, or a rebuilt
    schedule comes out strictly worse.

    ``cutoff=None`` removes the approximate-square restriction (d = 1
    always), recovering the original algorithm.  The returned schedule is
    the shortest one encountered; rebuilds that merely tie the current
    length keep the search going but never replace the best schedule, so
    chains of equal-length tasks still end up parallelized.
    """
    if not tasks:
        raise InvalidTaskError("part_schedule needs a nonempty task list")
    _check_inputs(tasks, procs)
    if cutoff is not None and cutoff < 1:
        raise InvalidTaskError(f"cutoff must be >= 1 or None, got {cutoff}")

    ids = [t.object_id for t in tasks]
    workloads = [t.workload for t in tasks]
    n = len(tasks)
    pi = [1] * n

    fast = _fits_fast(workloads, procs)
    if fast:
        w_arr = np.array(workloads, dtype=np.int64)
        ids_arr = np.array(ids, dtype=np.int64)
        order = np.argsort(-np.asarray(workloads, dtype=np.float64), kind="stable")
        order = order.astype(np.int64)

    def run_pass(pi_arr):
        """Returns (c_max, assign); snapshot order/pi before the next pass."""
        if fast:
            assign, _, _, cmax_num, cmax_den = lpt_core(w_arr, pi_arr, ids_arr, order, procs)
            return Fraction(int(cmax_num), int(cmax_den)), assign
        denom = 1
        for k in pi:
            if k > 1:
                denom = lcm(denom, k)
        assign, fin, pass_order = _lpt_pass_exact(ids, workloads, pi, procs, None, denom)
        return Fraction(max(fin), denom), (assign, pass_order)

    def snapshot(assign):
        if fast:
            return list(assign), [int(i) for i in order], list(pi)
        return assign[0], assign[1], list(pi)

    pi_arr = np.array(pi, dtype=np.int64) if fast else None
    cur_cmax, cur_assign = run_pass(pi_arr)
    best_cmax, best_payload = cur_cmax, snapshot(cur_assign)

    budget = procs
    iterations = 0
    while budget > 0:
        iterations += 1
        # longest current duration, ties to the lowest task id
        if fast:
            i = int(argmax_tau(w_arr, pi_arr, ids_arr))
        else:
            i = 0
            for j in range(1, n):
                a = workloads[j] * pi[i]
                b = workloads[i] * pi[j]
                if a > b or (a == b and ids[j] < ids[i]):
                    i = j
        h = Fraction(workloads[i], pi[i])
        if cutoff is None or pi[i] < cutoff:
            d = 1
        else:
            d = next_approx_square_increment(pi[i])
        budget -= d + 1 if pi[i] == 1 else d
        if cur_cmax != h or budget < 0:
            break
        pi[i] += d
        if fast:
            pi_arr[i] += d
        new_cmax, new_assign = run_pass(pi_arr)
        if new_cmax > cur_cmax:
            pi[i] -= d
            break
        cur_cmax = new_cmax
        if new_cmax < best_cmax:
            best_cmax, best_payload = new_cmax, snapshot(new_assign)

    assign, pass_order, best_pi = best_payload
    rows = _rows_from_assign(ids, best_pi, procs, pass_order, assign)
    schedule = _package(ids, workloads, best_pi, procs, rows, None)
    return ScheduleResult(
        schedule=schedule,
        c_max=best_cmax,
        procs_per_task=tuple(best_pi),
        iterations_taken=iterations,
    )


def _min_pack(durations: Sequence[int], loads: Sequence[int], cap: Optional[int]) -> int:
    """Minimum makespan packing sequential durations onto preloaded processors.

    Branch and bound over placements, longest duration first, with
    identical-load symmetry pruning.  Returns min(cap, optimum) when a
    cap is given; exact arithmetic throughout.
    """
    procs = len(loads)
    durs = sorted(durations, reverse=True)
    total = sum(loads) + sum(durs)
    floor_bound = max(-(-total // procs), max(loads, default=0), max(durs, default=0))

    work = list(loads)
    heap = list(loads)
    heapq.heapify(heap)
    for d in durs:
        heapq.heapreplace(heap, heap[0] + d)
    best = max(heap)
    if cap is not None and cap < best:
        best = cap
    if best <= floor_bound:
        return best

    def rec(k: int, cur_max: int) -> None:
        nonlocal best
        if cur_max >= best:
            return
        if k == len(durs):
            best = cur_max
            return
        d = durs[k]
        tried: Set[int] = set()
        for p in range(procs):
            load = work[p]
            if load in tried:
                continue
            tried.add(load)
            new = load + d
            if new >= best:
                continue
            work[p] = new
            rec(k + 1, max(cur_max, new))
            work[p] = load
            if best <= floor_bound:
                return

    rec(0, max(loads, default=0))
    return best


def oracle_optimal(
    tasks: Sequence[TaskSpec],
    procs: int,
    moldable: bool = False,
    allowed_procs: Optional[Sequence[Set[int]]] = None,
) -> Fraction:
    """Exhaustive-search optimal makespan for small instances.

    With ``moldable=False`` every task runs on exactly one processor.
    With ``moldable=True`` each task's P_i ranges over ``allowed_procs``
    (default 1..P) under the same execution model as the schedulers: all
    parallel tasks start at time zero on disjoint groups with
    sum(P_i > 1) <= P, sequential tasks fill in afterwards.  Guarded to
    at most 12 tasks and 6 processors; exponential beyond that.
    """
    _check_inputs(tasks, procs)
    if len(tasks) > ORACLE_MAX_TASKS or procs > ORACLE_MAX_PROCS:
        raise InstanceTooLargeError(
            f"oracle limited to {ORACLE_MAX_TASKS} tasks and {ORACLE_MAX_PROCS} processors"
        )
    workloads = [t.workload for t in tasks]
    n = len(tasks)

    if not moldable:
        best = _min_pack(workloads, [0] * procs, None)
        return Fraction(best)

    if allowed_procs is None:
        choices: List[List[int]] = [list(range(1, procs + 1))] * n
    else:
        if len(allowed_procs) != n:
            raise InvalidTaskError("allowed_procs must give one set per task")
        choices = []
        for s in allowed_procs:
            opts = sorted(k for k in s if 1 <= k <= procs)
            if not opts:
                raise InvalidTaskError("each task needs at least one feasible P_i")
            choices.append(opts)

    scale = lcm(*range(1, procs + 1))
    best: Optional[int] = None
    pvec = [1] * n

    def enumerate_pvec(k: int, parallel_sum: int) -> None:
        nonlocal best
        if k == n:
            loads: List[int] = []
            seq: List[int] = []
            for i in range(n):
                if pvec[i] > 1:
                    loads.extend([workloads[i] * (scale // pvec[i])] * pvec[i])
                else:
                    seq.append(workloads[i] * scale)
            loads.extend([0] * (procs - len(loads)))
            got = _min_pack(seq, loads, best)
            if best is None or got < best:
                best = got
            return
        for k_i in choices[k]:
            extra = k_i if k_i > 1 else 0
            if parallel_sum + extra > procs:
                continue
            pvec[k] = k_i
            enumerate_pvec(k + 1, parallel_sum + extra)
        pvec[k] = 1

    enumerate_pvec(0, 0)
    assert best is not None
    return Fraction(best, scale)
