#!/usr/bin/env python3
"""Walk through the schedulers on a small moldable instance.

Builds an LPT schedule for fixed tasks, compares it with the exhaustive
oracle, then lets the iterative scheduler choose processor counts."""

from fractions import Fraction

import moldsched as ms

durations = [5, 4, 3, 3, 2]
tasks = [ms.TaskSpec(i, w) for i, w in enumerate(durations)]

print("tasks:", durations, "on P=2")
result = ms.lpt_schedule(tasks, 2)
for p, row in enumerate(result.schedule.rows):
    print(f"  processor {p}: tasks {list(row)}  F_p = {result.schedule.finish_times[p]}")
print("  C_max =", result.c_max, " optimal =", ms.oracle_optimal(tasks, 2))

print()
print("worst case for LPT at P=2 is", ms.lpt_bound(2), "x optimal:")
tight = [ms.TaskSpec(i, w) for i, w in enumerate([3, 3, 2, 2, 2])]
got = ms.lpt_schedule(tight, 2).c_max
opt = ms.oracle_optimal(tight, 2)
print(f"  [3,3,2,2,2] -> C_max {got} vs optimal {opt}, ratio {Fraction(got, opt)}")

print()
print("moldable scheduling: one big task W=8, two small W=2 on P=4")
moldable = [ms.TaskSpec(i, w) for i, w in enumerate([8, 2, 2])]
result = ms.part_schedule(moldable, 4, cutoff=None)
print("  chosen P_i:", result.procs_per_task, " C_max:", result.c_max)
print("  moldable optimum:", ms.oracle_optimal(moldable, 4, moldable=True))

print()
print("approximate squares keep big process grids near-square:")
print("  members up to 42:", [p for p in range(1, 43) if ms.is_approx_square(p)])
result = ms.part_schedule([ms.TaskSpec(0, 100)], 30, cutoff=20)
print("  single task on P=30 with cutoff 20 ends on", result.procs_per_task[0],
      "processes, C_max =", result.c_max)
