"""External-problem mesh partitioning and task-list/process alignment.

The partitioner balances owned edges across processes while keeping the
number of partitions per object minimal; small objects are never split.
Task lists (schedule rows) are then matched to processes by edge overlap
so that the per-iteration redistribution stage moves as little data as
possible, and the residual traffic is accounted for explicitly.

Object ids double as 0-based column indices of the partition matrix, so
schedule task ids address partition columns directly.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .model import (
    InvalidScenarioError,
    MachineModel,
    Object,
    PartitionMap,
    Schedule,
    ShapeError,
)


@dataclass(frozen=True)
class TaskListAssignment:
    """Bijection from process id to schedule row, with the achieved overlap."""

    process_to_row: Tuple[int, ...]
    overlap: Tuple[int, ...]

    def row_to_process(self) -> Tuple[int, ...]:
        inv = [0] * len(self.process_to_row)
        for p, r in enumerate(self.process_to_row):
            inv[r] = p
        return tuple(inv)


def partition_external(objects: Sequence[Object], procs: int) -> PartitionMap:
    """Greedy object-aware split of mesh edges over processes.

    Objects are taken in descending edge count.  An object no larger than
    the per-process target (total edges / P) goes whole to the currently
    least-loaded process; a larger one is cut into ceil(edges/target)
    near-equal contiguous chunks, placed on the least-loaded processes.
    Column sums reproduce the object edge counts exactly and no process
    ends up with more than twice the target.
    """
    if procs < 1:
        raise InvalidScenarioError(f"procs must be >= 1, got {procs}")
    if sorted(o.id for o in objects) != list(range(len(objects))):
        raise InvalidScenarioError("object ids must be the indices 0..N-1")
    total = sum(o.edges for o in objects)
    if total <= 0:
        raise InvalidScenarioError("partitioning needs a positive total edge count")

    target = Fraction(total, procs)
    owned = np.zeros((procs, len(objects)), dtype=np.int64)

    # (load, process id) min-heap; stale entries are refreshed on pop
    loads = [0] * procs
    heap: List[Tuple[int, int]] = [(0, p) for p in range(procs)]

    def pop_least() -> int:
        while True:
            load, p = heapq.heappop(heap)
            if load == loads[p]:
                return p
            heapq.heappush(heap, (loads[p], p))

    for obj in sorted(objects, key=lambda o: (-o.edges, o.id)):
        if obj.edges == 0:
            continue
        if obj.edges <= target:
            p = pop_least()
            owned[p, obj.id] += obj.edges
            loads[p] += obj.edges
            heapq.heappush(heap, (loads[p], p))
            continue
        k = -(-obj.edges * procs // total)  # ceil(edges / target)
        k = min(k, obj.edges, procs)
        base, rem = divmod(obj.edges, k)
        takers = [pop_least() for _ in range(k)]
        for idx, p in enumerate(takers):
            chunk = base + 1 if idx < rem else base
            owned[p, obj.id] += chunk
            loads[p] += chunk
            heapq.heappush(heap, (loads[p], p))

    return PartitionMap(owned=owned)


def assign_task_lists(schedule: Schedule, partition: PartitionMap) -> TaskListAssignment:
    """Match schedule rows to processes by shared mesh edges.

    Every process counts the edges its mesh partition shares with the
    objects of each task list, ranks the lists by that count, and then,
    visiting processes in ascending id, each takes the remaining list it
    overlaps most (ties to the lowest row index).  The result is a
    bijection; the greedy order is deterministic but not globally optimal.
    """
    procs = partition.n_procs
    if schedule.n_procs != procs:
        raise ShapeError(
            f"schedule has {schedule.n_procs} rows, partition has {procs} processes"
        )

    membership = np.zeros((procs, partition.n_objects), dtype=np.float64)
    for r, row in enumerate(schedule.rows):
        for tid in set(row):
            membership[r, tid] = 1.0
    overlap = np.rint(partition.owned.astype(np.float64) @ membership.T).astype(np.int64)

    process_to_row = [-1] * procs
    achieved = [0] * procs
    available = np.ones(procs, dtype=bool)
    for p in range(procs):
        scores = np.where(available, overlap[p], -1)
        r = int(np.argmax(scores))
        process_to_row[p] = r
        achieved[p] = int(overlap[p, r])
        available[r] = False

    return TaskListAssignment(process_to_row=tuple(process_to_row), overlap=tuple(achieved))


def destined_shares(
    schedule: Schedule, assignment: TaskListAssignment, partition: PartitionMap
) -> Dict[int, Dict[int, int]]:
    """Per object: process -> edge count it hosts for the internal problem.

    A task's internal rows are split evenly and contiguously over the
    processes executing it (the processes whose assigned task lists
    contain the task), in ascending process id.
    """
    row_owner = assignment.row_to_process()
    edges = partition.owned.sum(axis=0)

    shares: Dict[int, Dict[int, int]] = {}
    for tid, rows in schedule.proc_assignment.items():
        group = sorted(row_owner[r] for r in rows)
        base, rem = divmod(int(edges[tid]), len(group))
        shares[tid] = {p: base + 1 if idx < rem else base for idx, p in enumerate(group)}
    return shares


def redistribution_cost(
    assignment: TaskListAssignment,
    schedule: Schedule,
    partition: PartitionMap,
    machine: MachineModel,
) -> Tuple[int, int, float]:
    """Edges moved, messages sent and seconds spent aligning data layouts.

    For each object, processes needing more of it than their external
    partition holds receive the shortfall from processes holding a
    surplus, matched in ascending process id.  Returns
    (edges_moved, messages, alpha_msg*messages + beta_edge*edges_moved);
    messages never exceeds P*(P-1).
    """
    shares = destined_shares(schedule, assignment, partition)

    want = np.zeros_like(partition.owned)
    for tid, share_of in shares.items():
        for p, v in share_of.items():
            want[p, tid] = v
    diff = partition.owned - want
    edges_moved = int(np.where(diff < 0, -diff, 0).sum())

    pairs = set()
    for j in np.unique(np.nonzero(diff < 0)[1]):
        col = diff[:, j]
        deficits = [(int(p), int(-col[p])) for p in np.nonzero(col < 0)[0]]
        surpluses = [(int(p), int(col[p])) for p in np.nonzero(col > 0)[0]]
        si = 0
        for p, need in deficits:
            while need > 0:
                q, have = surpluses[si]
                take = min(need, have)
                pairs.add((q, p))
                need -= take
                have -= take
                if have == 0:
                    si += 1
                else:
                    surpluses[si] = (q, have)

    messages = len(pairs)
    seconds = machine.alpha_msg * messages + machine.beta_edge * edges_moved
    return edges_moved, messages, seconds
