import random
import sys

import pytest

from afkit.framework import ArgumentationFramework
from afkit.oracle import BruteForceOracle
from afkit.tasks import Problem

CORPUS_SEED = 20210515
CORPUS_SIZE = 1000

# The two equivalent listings of the three-argument example used throughout
# the suite: a1 and a2 attack each other, a2 attacks a3.
TGF_LISTING = "1\n2\n3\n#\n1 2\n2 3\n2 1\n"
APX_LISTING = "arg(a1).\narg(a2).\narg(a3).\natt(a1,a2).\natt(a2,a3).\natt(a2,a1).\n"

BUILTIN_SOLVER = [sys.executable, "-m", "afkit.cli"]


def make_worked_example():
    return ArgumentationFramework.from_named_attacks(
        ["a1", "a2", "a3"], [("a1", "a2"), ("a2", "a3"), ("a2", "a1")]
    )


def random_framework(rng, max_args=12):
    """Seeded random framework: 1..max_args arguments, arc density 0.05-0.5,
    with occasional self-attacks."""
    n = rng.randrange(1, max_args + 1)
    density = 0.05 + 0.45 * rng.random()
    arcs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < density]
    arcs += [(i, i) for i in range(n) if rng.random() < density / 4]
    return ArgumentationFramework([f"a{i + 1}" for i in range(n)], arcs)


def build_corpus(size=CORPUS_SIZE, seed=CORPUS_SEED):
    rng = random.Random(seed)
    corpus = []
    for _ in range(size):
        af = random_framework(rng)
        corpus.append((af, af.names[rng.randrange(af.n)]))
    return corpus


def engine_matches_oracle(af, task, oracle, answer):
    """Agreement check: literal for CE/DC/DS, any valid extension for SE."""
    if task.problem is Problem.SE:
        exts = oracle.extensions(task.semantics)
        if answer.names is None:
            return not exts
        return af.mask_of(answer.names) in exts
    return answer == oracle.answer(task)


@pytest.fixture
def worked_example():
    return make_worked_example()


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def corpus_oracles(corpus):
    return [BruteForceOracle(af) for af, _ in corpus]
