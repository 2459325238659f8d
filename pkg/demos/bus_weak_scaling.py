#!/usr/bin/env python3
"""Weak scaling on the high-speed bus family.

Conductors and processes grow together (4 processes per pair), so the
per-iteration internal time should stay flat: every conductor always
lands on exactly two processes."""

import moldsched as ms

print(f"{'pairs':>6} {'P':>5} {'P_i':>5} {'internal [s]':>14} {'matvec [s]':>12} "
      f"{'no-redist matvec [s]':>20}")
for pairs in (5, 10, 20, 40):
    scenario = ms.gen_bus(pairs)
    procs = 4 * pairs
    prop = ms.run_strategy(scenario, ms.StrategyKind.PROPOSED, procs)
    nored = ms.run_strategy(scenario, ms.StrategyKind.NO_REDISTRIBUTION, procs)
    counts = set(prop.schedule_result.procs_per_task)
    print(f"{pairs:>6} {procs:>5} {counts!s:>5} {prop.report.internal_makespan:>14.6f} "
          f"{prop.report.t_matvec_avg:>12.6f} {nored.report.t_matvec_avg:>20.6f}")

print()
print("the internal column is constant: per-process work does not change "
      "as the structure grows.")
