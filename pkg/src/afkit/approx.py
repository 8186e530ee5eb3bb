"""Polynomial-time approximate acceptance built on the grounded extension.

The grounded extension is cheap to compute and is contained in every
complete extension, which makes it a usable stand-in for the expensive
semantics: skeptical questions are answered by grounded membership, and
credulous questions additionally accept arguments the grounded extension
leaves untouched. The DS-CO answers are exact; everything else is a
heuristic whose error rate is measured, not hidden (see
:func:`accuracy_report`).
"""

from __future__ import annotations

from typing import Iterable

from .formats import Decision
from .framework import ArgumentationFramework, ArgumentSet
from .tasks import IllegalTaskError, Problem, TaskSpec, validate_task


def grounded_extension(af: ArgumentationFramework) -> ArgumentSet:
    """Least fixpoint of the defense operator, iterated from the empty set."""
    current = 0
    while True:
        defended = af.defended_by(current)
        if defended == current:
            return current
        current = defended


def approx_decide(af: ArgumentationFramework, task: TaskSpec) -> Decision:
    """Bounded-time decision for a DC or DS task.

    With G the grounded extension: DS answers YES iff the query is in G;
    DC answers YES iff the query is in G, or is neither attacked by G nor
    self-attacking.
    """
    task = validate_task(task, af)
    if task.problem not in (Problem.DC, Problem.DS):
        raise IllegalTaskError(f"approximate mode answers only DC and DS, not {task.label}")
    grounded = grounded_extension(af)
    query = af.index_of(task.query)  # type: ignore[arg-type]
    bit = 1 << query
    if task.problem is Problem.DS:
        return Decision(bool(grounded & bit))
    if grounded & bit:
        return Decision(True)
    attacked = af.attacked_by(grounded)
    self_attacking = bool(af.attacker_masks[query] & bit)
    return Decision(not attacked & bit and not self_attacking)


def accuracy_report(
    instances: Iterable[tuple[ArgumentationFramework, str]], cap: int = 20
) -> dict[str, float]:
    """Fraction of approximate answers agreeing with the exhaustive reference.

    Takes (framework, query) pairs small enough for the brute-force oracle
    and returns one fraction per approximate-track task label. The fractions
    are measured outputs of the heuristic, not tuned constants.
    """
    from .oracle import BruteForceOracle
    from .tasks import approximate_track_tasks

    totals: dict[str, int] = {}
    matches: dict[str, int] = {}
    for af, query in instances:
        oracle = BruteForceOracle(af, cap)
        for problem, semantics in approximate_track_tasks():
            task = TaskSpec(problem, semantics, query)
            label = task.label
            totals[label] = totals.get(label, 0) + 1
            if approx_decide(af, task) == oracle.answer(task):
                matches[label] = matches.get(label, 0) + 1
    return {label: matches.get(label, 0) / totals[label] for label in totals}
