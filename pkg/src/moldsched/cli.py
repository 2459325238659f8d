"""Command-line front end: scenario files, scheduling, simulation, sweeps.

Scenario files are JSON documents with the fixed top-level keys
``name``, ``objects`` (array of {id, edges}), ``machine`` (coefficient
map), ``cutoff``, ``iterations`` and ``grid`` (three integers); unknown
keys are rejected.  All output is deterministic: running a command twice
on the same inputs produces byte-identical bytes.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from .model import (
    InvalidScenarioError,
    InvalidTaskError,
    MachineModel,
    Object,
    Scenario,
    SchedulingError,
)
from .scenarios import gen_bus, gen_interposer, gen_random, gen_srr
from .sched import ideal_length, part_schedule
from .sim import StrategyKind, run_strategy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INVARIANT = 3

_MACHINE_KEYS = ("t_work", "t_near", "t_fft", "gamma_grid", "alpha_msg", "beta_edge")

SWEEP_COLUMNS = (
    "P",
    "strategy",
    "t_gen",
    "t_matvec_avg",
    "t_iter_avg",
    "internal_makespan",
    "idle_fraction",
    "comm_edges",
    "comm_messages",
    "c_max_norm",
    "t_ref",
)


def scenario_to_json(scenario: Scenario) -> str:
    """Canonical JSON text for a scenario (fixed key order, repr floats)."""
    doc = {
        "name": scenario.name,
        "objects": [{"id": o.id, "edges": o.edges} for o in scenario.objects],
        "machine": {k: getattr(scenario.machine, k) for k in _MACHINE_KEYS},
        "cutoff": scenario.cutoff,
        "iterations": scenario.iterations,
        "grid": list(scenario.grid),
    }
    return json.dumps(doc, indent=2) + "\n"


def scenario_from_json(text: str) -> Scenario:
    """Parse a scenario document, rejecting unknown keys."""
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise InvalidScenarioError("scenario file must hold a JSON object")
    allowed = {"name", "objects", "machine", "cutoff", "iterations", "grid"}
    unknown = set(doc) - allowed
    if unknown:
        raise InvalidScenarioError(f"unknown scenario keys: {sorted(unknown)}")
    if "name" not in doc or "objects" not in doc:
        raise InvalidScenarioError("scenario file needs 'name' and 'objects'")

    objects = []
    for entry in doc["objects"]:
        extra = set(entry) - {"id", "edges"}
        if extra:
            raise InvalidScenarioError(f"unknown object keys: {sorted(extra)}")
        objects.append(Object(int(entry["id"]), int(entry["edges"])))

    grid = tuple(int(g) for g in doc.get("grid", (0, 0, 0)))
    if len(grid) != 3:
        raise InvalidScenarioError("grid must hold three integers")

    coeffs = doc.get("machine", {})
    unknown = set(coeffs) - set(_MACHINE_KEYS)
    if unknown:
        raise InvalidScenarioError(f"unknown machine keys: {sorted(unknown)}")
    machine = MachineModel(
        **{k: float(v) for k, v in coeffs.items()},
        grid_points=grid[0] * grid[1] * grid[2],
    )

    return Scenario(
        name=str(doc["name"]),
        objects=tuple(objects),
        iterations=int(doc.get("iterations", 1)),
        machine=machine,
        cutoff=int(doc.get("cutoff", 20)),
        grid=grid,
    )


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return scenario_from_json(fh.read())


def save_scenario(scenario: Scenario, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scenario_to_json(scenario))


def _parse_range(text: str) -> List[int]:
    """Parse 'start:stop:step' (stop inclusive) or a single integer."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 3:
            start, stop, step = (int(x) for x in parts)
            if step < 1 or start < 1 or stop < start:
                raise ValueError
            return list(range(start, stop + 1, step))
    except ValueError:
        pass
    raise InvalidTaskError(f"bad processor range {text!r}, expected START:STOP:STEP")


def _parse_cutoff(text: str) -> Optional[int]:
    if text == "unlimited":
        return None
    try:
        value = int(text)
    except ValueError:
        raise InvalidTaskError(f"bad cutoff {text!r}, expected an integer or 'unlimited'")
    if value < 1:
        raise InvalidTaskError("cutoff must be >= 1 or 'unlimited'")
    return value


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors on exit code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="moldsched", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a scenario file")
    gen_sub = gen.add_subparsers(dest="kind", required=True, parser_class=_Parser)

    p_bus = gen_sub.add_parser("bus", help="high-speed bus scenario")
    p_bus.add_argument("--pairs", type=int, required=True)
    p_srr = gen_sub.add_parser("srr", help="split-ring-resonator array scenario")
    p_srr.add_argument("--class-counts", type=str, default=None,
                       help="three comma-separated counts summing to 1488")
    gen_sub.add_parser("interposer", help="fan-out interposer scenario")
    p_rand = gen_sub.add_parser("random", help="seeded random scenario")
    p_rand.add_argument("--objects", type=int, required=True)
    p_rand.add_argument("--edges", type=str, required=True, help="LO:HI edge range")
    p_rand.add_argument("--seed", type=int, default=0)
    for p in (p_bus, p_srr, gen_sub.choices["interposer"], p_rand):
        p.add_argument("-o", "--out", type=str, default=None,
                       help="output path (default: stdout)")

    sched = sub.add_parser("schedule", help="build and report a schedule")
    sched.add_argument("scenario")
    sched.add_argument("--procs", type=int, required=True)
    sched.add_argument("--strategy", choices=["proposed", "any-pi"], default="proposed")
    sched.add_argument("--cutoff", type=str, default="20",
                       help="approximate-square cutoff or 'unlimited'")
    sched.add_argument("--csv", type=str, default=None,
                       help="also write per-task rows to this CSV file")

    simp = sub.add_parser("simulate", help="simulate one solver configuration")
    simp.add_argument("scenario")
    simp.add_argument("--procs", type=int, required=True)
    simp.add_argument("--strategy", choices=[k.value for k in StrategyKind],
                      default="proposed")

    sweep = sub.add_parser("sweep", help="simulate over a processor range, emit CSV")
    sweep.add_argument("scenario")
    sweep.add_argument("--procs", type=str, required=True, help="START:STOP:STEP, inclusive")
    sweep.add_argument("--strategies", type=str, default="proposed,any-pi,no-redist")
    sweep.add_argument("-o", "--out", type=str, default=None,
                       help="output CSV path (default: stdout)")

    return parser


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_gen(args) -> int:
    try:
        if args.kind == "bus":
            scenario = gen_bus(args.pairs)
        elif args.kind == "srr":
            counts = None
            if args.class_counts is not None:
                counts = tuple(int(x) for x in args.class_counts.split(","))
            scenario = gen_srr(counts)
        elif args.kind == "interposer":
            scenario = gen_interposer()
        else:
            lo, _, hi = args.edges.partition(":")
            edge_range = (int(lo), int(hi if hi else lo))
            scenario = gen_random(args.objects, edge_range, args.seed)
    except (InvalidScenarioError, ValueError) as exc:
        print(f"moldsched gen: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(scenario_to_json(scenario), args.out)
    return EXIT_OK


def _cmd_schedule(args) -> int:
    cutoff = _parse_cutoff(args.cutoff)
    scenario = load_scenario(args.scenario)
    tasks = scenario.tasks()
    if args.strategy == "any-pi":
        cutoff = None
    result = part_schedule(tasks, args.procs, cutoff)
    ideal = ideal_length(tasks, args.procs)

    lines = [
        f"scenario {scenario.name}",
        f"procs {args.procs}",
        f"strategy {args.strategy}",
        f"cutoff {'unlimited' if cutoff is None else cutoff}",
        f"c_max {float(result.c_max)!r}",
        f"c_ideal {float(ideal)!r}",
        f"normalized_length {float(result.c_max / ideal) if ideal else 1.0!r}",
    ]
    for task, k in zip(tasks, result.procs_per_task):
        lines.append(f"task {task.object_id} procs {k}")
    for p, f in enumerate(result.schedule.finish_times):
        lines.append(f"proc {p} finish {float(f)!r}")
    sys.stdout.write("\n".join(lines) + "\n")

    if args.csv is not None:
        rows = ["task_id,workload,procs,duration"]
        for task, k in zip(tasks, result.procs_per_task):
            rows.append(f"{task.object_id},{task.workload},{k},{task.workload / k!r}")
        _emit("\n".join(rows) + "\n", args.csv)
    return EXIT_OK


def _report_lines(name: str, strategy: str, run) -> List[str]:
    r = run.report
    return [
        f"scenario {name}",
        f"strategy {strategy}",
        f"procs {r.p}",
        f"t_gen {r.t_gen!r}",
        f"t_matvec_avg {r.t_matvec_avg!r}",
        f"t_iter_avg {r.t_iter_avg!r}",
        f"internal_makespan {r.internal_makespan!r}",
        f"idle_fraction {r.idle_fraction!r}",
        f"comm_edges {r.comm[0]}",
        f"comm_messages {r.comm[1]}",
        f"comm_seconds {r.comm[2]!r}",
        f"c_max_norm {run.c_max_norm!r}",
    ]


def _cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    strategy = StrategyKind.from_key(args.strategy)
    run = run_strategy(scenario, strategy, args.procs)
    sys.stdout.write("\n".join(_report_lines(scenario.name, args.strategy, run)) + "\n")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    procs = _parse_range(args.procs)
    keys = [k.strip() for k in args.strategies.split(",") if k.strip()]
    if not keys:
        raise InvalidTaskError("at least one strategy is required")
    strategies = [StrategyKind.from_key(k) for k in keys]

    cells: Dict[Tuple[int, str], object] = {}
    for p in procs:
        for strategy in strategies:
            cells[(p, strategy.value)] = run_strategy(scenario, strategy, p)

    p_min = min(procs)
    t_at_pmin = {s.value: cells[(p_min, s.value)].report.t_matvec_avg for s in strategies}

    rows = [",".join(SWEEP_COLUMNS)]
    for (p, key) in sorted(cells):
        run = cells[(p, key)]
        r = run.report
        t_ref = t_at_pmin[key] * p_min / p
        rows.append(
            f"{p},{key},{r.t_gen!r},{r.t_matvec_avg!r},{r.t_iter_avg!r},"
            f"{r.internal_makespan!r},{r.idle_fraction!r},{r.comm[0]},{r.comm[1]},"
            f"{run.c_max_norm!r},{t_ref!r}"
        )
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    handlers = {
        "gen": _cmd_gen,
        "schedule": _cmd_schedule,
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except (InvalidTaskError, ValueError) as exc:
        print(f"moldsched: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"moldsched: {exc}", file=sys.stderr)
        return EXIT_IO
    except SchedulingError as exc:
        print(f"moldsched: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
