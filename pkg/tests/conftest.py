import time

import pytest

import moldsched as ms

PARITY_PROCS = range(20, 1001, 20)
BUS_FAMILY = (5, 10, 20, 40)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # first call compiles the scheduling kernel; keep it out of timed tests
    ms.part_schedule([ms.TaskSpec(0, 6), ms.TaskSpec(1, 3)], 2, 20)


@pytest.fixture(scope="session")
def interposer():
    return ms.gen_interposer()


@pytest.fixture(scope="session")
def srr():
    return ms.gen_srr()


@pytest.fixture(scope="session")
def parity_records(interposer, srr):
    """Modified vs original schedules for both structures over the full sweep.

    Returns (records, build_seconds); each record is
    (scenario_name, tasks, P, modified_result, original_result).
    """
    t0 = time.perf_counter()
    records = []
    for scenario in (interposer, srr):
        tasks = scenario.tasks()
        for procs in PARITY_PROCS:
            modified = ms.part_schedule(tasks, procs, scenario.cutoff)
            original = ms.part_schedule(tasks, procs, None)
            records.append((scenario.name, tasks, procs, modified, original))
    return records, time.perf_counter() - t0


@pytest.fixture(scope="session")
def bus_runs():
    """Proposed-strategy runs for the weak-scaling bus family, with timing."""
    t0 = time.perf_counter()
    runs = []
    for pairs in BUS_FAMILY:
        scenario = ms.gen_bus(pairs)
        runs.append((pairs, scenario, ms.run_strategy(scenario, ms.StrategyKind.PROPOSED, 4 * pairs)))
    return runs, time.perf_counter() - t0
