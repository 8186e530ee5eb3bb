"""Competition runner: solver execution under limits, validation, scoring.

Solvers are external commands speaking the standard interface
(``cmd -p TASK-SEM -f file -fo tgf|apx [-a query]``, one answer on standard
output). The runner kills a solver's whole process group at the time limit,
applies a best-effort memory limit, validates output against references
computed by the built-in engine, and scores per the competition rules: on
the exact track any wrong answer excludes the solver from that subtrack
only, on the approximate track a wrong answer merely scores zero. Equal
subtrack scores rank by cumulated runtime over correctly solved instances,
fastest first.
"""

from __future__ import annotations

import os
import shlex
import signal
import subprocess
import sys
import time

try:
    import resource
except ImportError:  # non-POSIX platform; memory limits become a no-op
    resource = None  # type: ignore[assignment]
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from . import engine
from .formats import (
    Answer,
    AnswerFormatError,
    ExtensionAnswer,
    parse_answer,
    parse_framework,
)
from .framework import ArgumentationFramework
from .tasks import (
    EXTERNAL_SEMANTICS,
    Problem,
    Semantics,
    TaskSpec,
    approximate_subtrack_problems,
    exact_subtrack_problems,
    validate_task,
)

DEFAULT_EXACT_LIMIT = 600.0
DEFAULT_APPROX_LIMIT = 60.0
DEFAULT_MEMORY_LIMIT = 128 * 2**30  # best effort, see TrackConfig

TRACKS = ("exact", "approximate")


class SpawnFailureError(RuntimeError):
    """The solver command could not be started."""


class ReferenceMissingError(RuntimeError):
    """No reference data available to judge an answer."""


class Outcome(Enum):
    CORRECT = "correct"
    WRONG = "wrong"
    TIMEOUT = "timeout"
    NONPARSABLE = "nonparsable"
    CRASH = "crash"


@dataclass(frozen=True)
class TrackConfig:
    track: str
    subtracks: tuple[Semantics, ...] = EXTERNAL_SEMANTICS
    time_limit: float | None = None  # None: the track's default limit
    memory_limit: int = DEFAULT_MEMORY_LIMIT

    def __post_init__(self) -> None:
        if self.track not in TRACKS:
            raise ValueError(f"track must be one of {TRACKS}")
        if self.time_limit is None:
            default = DEFAULT_EXACT_LIMIT if self.track == "exact" else DEFAULT_APPROX_LIMIT
            object.__setattr__(self, "time_limit", default)
        if self.time_limit <= 0 or self.memory_limit <= 0:
            raise ValueError("limits must be positive")
        for sem in self.subtracks:
            if sem not in EXTERNAL_SEMANTICS:
                raise ValueError(f"{sem} is not a subtrack semantics")

    def problems_for(self, semantics: Semantics) -> tuple[Problem, ...]:
        if self.track == "exact":
            return exact_subtrack_problems(semantics)
        return approximate_subtrack_problems(semantics)

    def task_labels(self, semantics: Semantics) -> tuple[str, ...]:
        return tuple(f"{p.value}-{semantics.value}" for p in self.problems_for(semantics))


@dataclass(frozen=True)
class RunRecord:
    solver: str
    instance: str
    task: str
    outcome: Outcome
    wall_time: float  # seconds; at most the limit for non-timeout outcomes


@dataclass(frozen=True)
class RawRun:
    stdout: str
    returncode: int | None
    wall_time: float
    timed_out: bool


@dataclass(frozen=True)
class InstanceFiles:
    """The on-disk face of one benchmark instance."""

    name: str
    tgf: Path | None = None
    apx: Path | None = None
    query: str | None = None

    def path_for(self, fmt: str) -> Path:
        path = {"tgf": self.tgf, "apx": self.apx}.get(fmt)
        if path is None:
            raise FileNotFoundError(f"instance {self.name} has no {fmt} file")
        return path


def discover_instances(directory: Path) -> list[InstanceFiles]:
    """Collect instances from a directory of ``<name>.tgf/.apx/.arg`` files."""
    directory = Path(directory)
    stems: dict[str, dict[str, Path]] = {}
    for path in sorted(directory.iterdir()):
        if path.suffix in (".tgf", ".apx", ".arg"):
            stems.setdefault(path.stem, {})[path.suffix] = path
    instances = []
    for stem in sorted(stems):
        entry = stems[stem]
        query = entry[".arg"].read_text().strip() if ".arg" in entry else None
        instances.append(
            InstanceFiles(stem, tgf=entry.get(".tgf"), apx=entry.get(".apx"), query=query)
        )
    return instances


def load_framework(instance: InstanceFiles) -> ArgumentationFramework:
    for fmt in ("apx", "tgf"):
        try:
            path = instance.path_for(fmt)
        except FileNotFoundError:
            continue
        return parse_framework(path.read_text(), fmt)
    raise FileNotFoundError(f"instance {instance.name} has no input file")


def _limit_memory(limit: int):
    def apply() -> None:
        os.setsid()
        if resource is not None:
            try:
                resource.setrlimit(resource.RLIMIT_AS, (limit, limit))
            except (ValueError, OSError):
                pass  # best effort only; the platform may refuse the limit

    return apply


def _kill_process_group(proc: subprocess.Popen) -> None:
    try:
        os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        pass
    proc.wait()


def execute_solver(
    command: Sequence[str],
    task: TaskSpec,
    instance: InstanceFiles,
    fmt: str,
    limit: float,
    memory_limit: int = DEFAULT_MEMORY_LIMIT,
    stderr_path: Path | None = None,
) -> RawRun:
    """Run one solver invocation under the limits; never parses the output.

    Standard error goes to ``stderr_path`` (or is discarded), never to the
    judge. The whole process group is killed at the time limit.
    """
    argv = list(command) + ["-p", task.label, "-f", str(instance.path_for(fmt)), "-fo", fmt]
    if task.problem in (Problem.DC, Problem.DS):
        if instance.query is None:
            raise ReferenceMissingError(f"instance {instance.name} has no query argument file")
        argv += ["-a", instance.query]
    stderr_file = open(stderr_path, "wb") if stderr_path else subprocess.DEVNULL
    start = time.monotonic()
    try:
        proc = subprocess.Popen(
            argv,
            stdout=subprocess.PIPE,
            stderr=stderr_file,
            preexec_fn=_limit_memory(memory_limit),
        )
    except OSError as exc:
        raise SpawnFailureError(f"cannot start {argv[0]!r}: {exc}") from exc
    finally:
        if stderr_path:
            stderr_file.close()
    try:
        stdout, _ = proc.communicate(timeout=limit)
    except subprocess.TimeoutExpired:
        _kill_process_group(proc)
        return RawRun("", None, limit, True)
    wall = min(time.monotonic() - start, limit)
    return RawRun(stdout.decode("utf-8", errors="replace"), proc.returncode, wall, False)


class Validator:
    """Judges answers against references computed by the built-in engine.

    Decisions and counts are compared literally; an extension answer is
    accepted iff the returned set satisfies its semantics' defining predicate
    on the instance, so any valid extension passes without enumerating all of
    them up front (preferred answers are checked by searching for a strictly
    larger complete set, semi-stable and stage answers by searching for a
    range dominator).
    """

    def __init__(self, frameworks: dict[str, ArgumentationFramework], budget: float | None = None):
        self._frameworks = dict(frameworks)
        self._budget = budget
        self._answers: dict[tuple[str, str], Answer] = {}

    def framework(self, instance: str) -> ArgumentationFramework:
        try:
            return self._frameworks[instance]
        except KeyError:
            raise ReferenceMissingError(f"no reference framework for instance {instance!r}") from None

    def _reference(self, instance: str, task: TaskSpec) -> Answer:
        key = (instance, task.label)
        if key not in self._answers:
            try:
                self._answers[key] = engine.solve(self.framework(instance), task, self._budget)
            except engine.SolverTimeoutError:
                raise ReferenceMissingError(
                    f"reference for {task.label} on {instance!r} timed out"
                ) from None
        return self._answers[key]

    def validate(self, instance: str, task: TaskSpec, answer: Answer) -> bool:
        task = validate_task(task)
        if task.problem in (Problem.DC, Problem.DS, Problem.CE):
            return answer == self._reference(instance, task)
        if not isinstance(answer, ExtensionAnswer):
            return False
        af = self.framework(instance)
        deadline = time.monotonic() + self._budget if self._budget else float("inf")
        try:
            if answer.names is None:
                # Only the stable semantics may have no extension at all.
                if task.semantics is not Semantics.ST:
                    return False
                return next(engine._stable_labellings(af, deadline), None) is None
            mask = 0
            for name in answer.names:
                if name not in af:
                    return False
                mask |= 1 << af.index_of(name)
            return self._satisfies(af, task.semantics, mask, deadline)
        except engine.SolverTimeoutError:
            raise ReferenceMissingError(
                f"validating {task.label} on {instance!r} timed out"
            ) from None

    def _satisfies(
        self, af: ArgumentationFramework, semantics: Semantics, mask: int, deadline: float
    ) -> bool:
        if semantics is Semantics.CO:
            return af.is_complete_set(mask)
        if semantics is Semantics.ST:
            return af.is_stable_set(mask)
        if semantics is Semantics.PR:
            if not af.is_complete_set(mask):
                return False  # maximal admissible sets are complete
            return all(
                lab.in_mask == mask
                for lab in engine.complete_labellings(af, deadline, require=mask)
            )
        if semantics is Semantics.SST:
            if not af.is_complete_set(mask):
                return False
            rng = af.range_of(mask)
            for lab in engine.complete_labellings(af, deadline):
                other = af.range_of(lab.in_mask)
                if other != rng and not rng & ~other:
                    return False  # a complete set with a strictly larger range
            return True
        if semantics is Semantics.STG:
            if not af.is_conflict_free(mask):
                return False
            rng = af.range_of(mask)
            for candidate in engine.conflict_free_sets(af, deadline, maximal_only=True):
                other = af.range_of(candidate)
                if other != rng and not rng & ~other:
                    return False
            return True
        if semantics is Semantics.ID:
            return mask == engine.ideal_extension(af, deadline)
        raise ValueError(f"unknown semantics {semantics!r}")


def classify(raw: RawRun, instance: str, task: TaskSpec, validator: Validator) -> Outcome:
    """Deterministic outcome order: timeout, crash, non-parsable, wrong, correct."""
    if raw.timed_out:
        return Outcome.TIMEOUT
    if raw.returncode != 0:
        return Outcome.CRASH
    try:
        answer = parse_answer(raw.stdout, task.problem)
    except AnswerFormatError:
        return Outcome.NONPARSABLE
    return Outcome.CORRECT if validator.validate(instance, task, answer) else Outcome.WRONG


def load_solver_manifest(path: Path) -> dict[str, list[str]]:
    """Read a ``name=command`` manifest, one solver per line.

    The special commands ``@builtin-exact`` and ``@builtin-approx`` expand to
    this package's own solver front end run through the current interpreter.
    """
    solvers: dict[str, list[str]] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, command = line.partition("=")
        name, command = name.strip(), command.strip()
        if not sep or not name or not command:
            raise ValueError(f"{path}:{lineno}: expected name=command")
        if name in solvers:
            raise ValueError(f"{path}:{lineno}: duplicate solver name {name!r}")
        solvers[name] = builtin_solver_command(command)
    if not solvers:
        raise ValueError(f"{path}: no solvers declared")
    return solvers


def builtin_solver_command(command: str) -> list[str]:
    if command == "@builtin-exact":
        return [sys.executable, "-m", "afkit.cli"]
    if command == "@builtin-approx":
        return [sys.executable, "-m", "afkit.cli", "--mode", "approx"]
    return shlex.split(command)


def run_competition(
    solvers: dict[str, Sequence[str]],
    instances: Sequence[InstanceFiles],
    config: TrackConfig,
    fmt: str = "apx",
    workers: int = 2,
    stderr_dir: Path | None = None,
    validator: Validator | None = None,
) -> list[RunRecord]:
    """Run every solver on every task of every configured subtrack."""
    if validator is None:
        validator = Validator({inst.name: load_framework(inst) for inst in instances})
    if stderr_dir is not None:
        Path(stderr_dir).mkdir(parents=True, exist_ok=True)

    jobs: list[tuple[str, Sequence[str], InstanceFiles, TaskSpec]] = []
    for semantics in config.subtracks:
        for problem in config.problems_for(semantics):
            for inst in instances:
                task = TaskSpec(problem, semantics, inst.query)
                for name, command in solvers.items():
                    jobs.append((name, command, inst, task))

    def run_one(job) -> RunRecord:
        name, command, inst, task = job
        stderr_path = None
        if stderr_dir is not None:
            stderr_path = Path(stderr_dir) / f"{name}__{inst.name}__{task.label}.stderr"
        raw = execute_solver(
            command, task, inst, fmt, config.time_limit, config.memory_limit, stderr_path
        )
        outcome = classify(raw, inst.name, task, validator)
        return RunRecord(name, inst.name, task.label, outcome, round(raw.wall_time, 6))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        records = list(pool.map(run_one, jobs))
    records.sort(key=lambda r: (r.solver, r.task, r.instance))
    return records


def write_runlog(path: Path, records: Iterable[RunRecord], config: TrackConfig) -> None:
    """One record per line, microsecond-precision wall time."""
    with Path(path).open("w") as handle:
        handle.write(f"# track={config.track}\n")
        handle.write(f"# subtracks={','.join(s.value for s in config.subtracks)}\n")
        handle.write(f"# time_limit={config.time_limit:.6f}\n")
        handle.write(f"# memory_limit={config.memory_limit}\n")
        for r in records:
            handle.write(f"{r.solver}\t{r.instance}\t{r.task}\t{r.outcome.value}\t{r.wall_time:.6f}\n")


def read_runlog(path: Path) -> tuple[list[RunRecord], dict[str, str]]:
    meta: dict[str, str] = {}
    records: list[RunRecord] = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line.lstrip("# ").partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise ValueError(f"{path}:{lineno}: expected 5 tab-separated fields")
        solver, instance, task, outcome, wall = parts
        records.append(RunRecord(solver, instance, task, Outcome(outcome), float(wall)))
    return records, meta


@dataclass
class SubtrackResult:
    semantics: Semantics
    # (rank, solver, score, cumulated runtime over correctly solved runs)
    ranking: list[tuple[int, str, int, float]] = field(default_factory=list)
    excluded: dict[str, str] = field(default_factory=dict)
    unranked: dict[str, str] = field(default_factory=dict)


@dataclass
class ScoreBoard:
    track: str
    per_instance: dict[tuple[str, str, str], int]  # (solver, task, instance) -> 0/1
    per_task: dict[tuple[str, str], int]  # (solver, task) -> score
    per_subtrack: dict[tuple[str, Semantics], int]  # (solver, semantics) -> score
    subtracks: dict[Semantics, SubtrackResult]

    def format_report(self) -> str:
        lines = [f"track: {self.track}"]
        for semantics, result in self.subtracks.items():
            lines.append("")
            lines.append(f"subtrack {semantics.value}")
            lines.append(f"{'rank':>4}  {'solver':<24}{'score':>8}  {'runtime':>16}")
            for rank, solver, points, runtime in result.ranking:
                lines.append(f"{rank:>4}  {solver:<24}{points:>8}  {runtime:>16.6f}")
            for solver, reason in sorted(result.excluded.items()):
                lines.append(f"  excluded: {solver} ({reason})")
            for solver, reason in sorted(result.unranked.items()):
                lines.append(f"  not ranked: {solver} ({reason})")
        return "\n".join(lines) + "\n"


def score(records: Sequence[RunRecord], config: TrackConfig) -> ScoreBoard:
    """Apply the track's scoring rules to a finished record set.

    Pure function of the records: replaying the same log yields the same
    board.
    """
    solvers = sorted({r.solver for r in records})
    by_task_instances: dict[str, set[str]] = {}
    for r in records:
        by_task_instances.setdefault(r.task, set()).add(r.instance)
    index: dict[tuple[str, str, str], RunRecord] = {}
    for r in records:
        index[(r.solver, r.task, r.instance)] = r

    per_instance: dict[tuple[str, str, str], int] = {}
    per_task: dict[tuple[str, str], int] = {}
    per_subtrack: dict[tuple[str, Semantics], int] = {}
    subtracks: dict[Semantics, SubtrackResult] = {}

    for semantics in config.subtracks:
        labels = [
            label for label in config.task_labels(semantics) if label in by_task_instances
        ]
        result = SubtrackResult(semantics)
        standings = []
        for solver in solvers:
            sub_records = []
            missing = 0
            for label in labels:
                for instance in sorted(by_task_instances[label]):
                    record = index.get((solver, label, instance))
                    if record is None:
                        missing += 1
                    else:
                        sub_records.append(record)
            if not sub_records:
                continue  # never entered this subtrack
            if missing:
                result.unranked[solver] = f"incomplete participation, {missing} runs missing"
                continue
            wrong = [r for r in sub_records if r.outcome is Outcome.WRONG]
            subtrack_score = 0
            runtime = 0.0
            for r in sub_records:
                points = 1 if r.outcome is Outcome.CORRECT else 0
                per_instance[(solver, r.task, r.instance)] = points
                per_task[(solver, r.task)] = per_task.get((solver, r.task), 0) + points
                subtrack_score += points
                if points:
                    runtime += r.wall_time
            per_subtrack[(solver, semantics)] = subtrack_score
            if config.track == "exact" and wrong:
                sample = wrong[0]
                result.excluded[solver] = f"wrong answer on {sample.task} {sample.instance}"
                continue
            standings.append((solver, subtrack_score, runtime))
        standings.sort(key=lambda row: (-row[1], row[2], row[0]))
        result.ranking = [
            (rank, solver, points, runtime)
            for rank, (solver, points, runtime) in enumerate(standings, start=1)
        ]
        subtracks[semantics] = result

    return ScoreBoard(config.track, per_instance, per_task, per_subtrack, subtracks)
