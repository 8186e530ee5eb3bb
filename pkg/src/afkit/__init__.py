"""Abstract argumentation toolkit.

A self-contained stack for reasoning over attack graphs: the framework
model, exact and approximate solvers for the six standard semantics, an
exhaustive oracle for testing, competition-format readers and writers, a
community-structured benchmark generator, and a competition runner with the
standard scoring rules.
"""

from .approx import approx_decide, grounded_extension
from .engine import Labelling, SolverTimeoutError, complete_labellings, ideal_extension, solve
from .formats import (
    Answer,
    CountAnswer,
    Decision,
    ExtensionAnswer,
    parse_apx,
    parse_framework,
    parse_tgf,
    serialize_framework,
    write_answer,
)
from .framework import ArgumentationFramework, ArgumentSet, bits
from .oracle import BruteForceOracle, TooLargeError, oracle_answer, oracle_extensions
from .tasks import (
    IllegalTaskError,
    Problem,
    Semantics,
    TaskSpec,
    UnknownArgumentError,
    parse_task,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "ArgumentSet",
    "ArgumentationFramework",
    "BruteForceOracle",
    "CountAnswer",
    "Decision",
    "ExtensionAnswer",
    "IllegalTaskError",
    "Labelling",
    "Problem",
    "Semantics",
    "SolverTimeoutError",
    "TaskSpec",
    "TooLargeError",
    "UnknownArgumentError",
    "approx_decide",
    "bits",
    "complete_labellings",
    "grounded_extension",
    "ideal_extension",
    "oracle_answer",
    "oracle_extensions",
    "parse_apx",
    "parse_framework",
    "parse_task",
    "parse_tgf",
    "serialize_framework",
    "solve",
    "write_answer",
]
