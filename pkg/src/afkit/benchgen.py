"""Community-structured benchmark generator and instance hardness ranking.

Instances are built in three steps: a meta-graph fixes the community
topology, every meta-node is expanded into an inner attack graph, and every
meta-edge contributes a fixed number of bridge attacks between its two
communities. One query argument per instance is drawn uniformly and reused
for all acceptance tasks on that instance.

Determinism contract: all randomness comes from one Mersenne Twister stream
(:class:`random.Random`) seeded per instance with sha256(master seed, index),
consumed in a fixed order (meta edges, community sizes, inner arcs, bridges,
query). Identical configurations therefore reproduce identical bytes on any
platform.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .framework import ArgumentationFramework
from .formats import serialize_framework

META_MODELS = ("er", "ba")


class ConfigError(ValueError):
    """Invalid generator configuration."""


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    meta_kind: str = "er"  # er: edge probability, ba: preferential attachment
    meta_n: int = 4
    meta_p: float = 0.5
    meta_m: int = 1
    inner_kind: str = "er"
    inner_size_min: int = 3
    inner_size_max: int = 3
    inner_p: float = 0.25
    inner_m: int = 1
    # How many bridge attacks to draw per meta-edge; no default is claimed
    # to be faithful to any corpus, it is simply a knob.
    bridges_per_meta_edge: int = 1
    formats: tuple[str, ...] = ("tgf", "apx")
    name_prefix: str = "instance"

    def validate(self) -> "GeneratorConfig":
        if self.meta_kind not in META_MODELS or self.inner_kind not in META_MODELS:
            raise ConfigError(f"graph model must be one of {META_MODELS}")
        if self.meta_n < 1:
            raise ConfigError("meta_n must be at least 1")
        if not 0.0 <= self.meta_p <= 1.0 or not 0.0 <= self.inner_p <= 1.0:
            raise ConfigError("edge probabilities must lie in [0, 1]")
        if self.meta_m < 1 or self.inner_m < 1:
            raise ConfigError("attachment counts must be at least 1")
        if self.inner_size_min < 1 or self.inner_size_min > self.inner_size_max:
            raise ConfigError("community size range must satisfy 1 <= min <= max")
        if self.bridges_per_meta_edge < 1:
            raise ConfigError("bridges_per_meta_edge must be at least 1")
        unknown = set(self.formats) - {"tgf", "apx"}
        if not self.formats or unknown:
            raise ConfigError(f"formats must be a non-empty subset of tgf/apx, got {self.formats}")
        return self


_CONFIG_FIELDS = {f.name: f.type for f in dataclasses.fields(GeneratorConfig)}


def parse_config(text: str) -> GeneratorConfig:
    """Read a generator configuration from line-oriented ``key=value`` text.

    Blank lines and lines starting with ``#`` are ignored; ``formats`` takes
    a comma-separated list. ``seed`` is required.
    """
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        if key not in _CONFIG_FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key in ("meta_p", "inner_p"):
                values[key] = float(value)
            elif key == "formats":
                values[key] = tuple(part.strip() for part in value.split(",") if part.strip())
            elif key in ("meta_kind", "inner_kind", "name_prefix"):
                values[key] = value
            else:
                values[key] = int(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from None
    if "seed" not in values:
        raise ConfigError("config must set a seed")
    return GeneratorConfig(**values).validate()  # type: ignore[arg-type]


@dataclass(frozen=True)
class BenchmarkInstance:
    name: str
    framework: ArgumentationFramework
    query: str
    communities: tuple[int, ...]  # community index per argument
    bridges: tuple[tuple[int, int], ...]  # inter-community attacks, by index
    config: GeneratorConfig
    index: int
    instance_seed: int

    def community_digest(self) -> str:
        payload = json.dumps(
            {name: c for name, c in zip(self.framework.names, self.communities)},
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    def provenance(self) -> dict:
        """One manifest record: enough to audit and regenerate the instance."""
        return {
            "name": self.name,
            "index": self.index,
            "master_seed": self.config.seed,
            "instance_seed": self.instance_seed,
            "config": dataclasses.asdict(self.config),
            "arguments": self.framework.n,
            "communities": len(set(self.communities)) if self.communities else 0,
            "community_sizes": _community_sizes(self.communities),
            "community_digest": self.community_digest(),
            "bridges": [
                [self.framework.names[a], self.framework.names[b]] for a, b in self.bridges
            ],
            "query": self.query,
        }


def _community_sizes(communities: Sequence[int]) -> list[int]:
    sizes: dict[int, int] = {}
    for c in communities:
        sizes[c] = sizes.get(c, 0) + 1
    return [sizes[c] for c in sorted(sizes)]


def _instance_seed(master_seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{master_seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _undirected_er(rng: random.Random, n: int, p: float) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]


def _undirected_ba(rng: random.Random, n: int, m: int) -> list[tuple[int, int]]:
    # Preferential attachment via the repeated-endpoints trick; the first m
    # nodes start without edges and are the targets of node m.
    m = min(m, max(n - 1, 1))
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []
    targets = list(range(m))
    for new in range(m, n):
        for t in targets:
            edges.append((t, new) if t < new else (new, t))
            repeated.extend((t, new))
        seen: set[int] = set()
        while len(seen) < m:
            seen.add(repeated[rng.randrange(len(repeated))])
        targets = sorted(seen)
    return edges


def _directed_er(rng: random.Random, n: int, p: float) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p]


def _directed_ba(rng: random.Random, n: int, m: int) -> list[tuple[int, int]]:
    # Arcs run new node -> attachment target, individually reversed with
    # probability one half.
    arcs = []
    for a, b in _undirected_ba(rng, n, m):
        new, old = max(a, b), min(a, b)
        arcs.append((new, old) if rng.random() < 0.5 else (old, new))
    return arcs


def _meta_edges(rng: random.Random, config: GeneratorConfig) -> list[tuple[int, int]]:
    if config.meta_kind == "er":
        return _undirected_er(rng, config.meta_n, config.meta_p)
    return _undirected_ba(rng, config.meta_n, config.meta_m)


def _inner_arcs(rng: random.Random, config: GeneratorConfig, size: int) -> list[tuple[int, int]]:
    if config.inner_kind == "er":
        return _directed_er(rng, size, config.inner_p)
    return _directed_ba(rng, size, config.inner_m)


def generate(config: GeneratorConfig, index: int = 0) -> BenchmarkInstance:
    """Generate one community-structured instance."""
    config.validate()
    seed = _instance_seed(config.seed, index)
    rng = random.Random(seed)

    meta = _meta_edges(rng, config)
    sizes = [rng.randint(config.inner_size_min, config.inner_size_max) for _ in range(config.meta_n)]
    offsets = [0] * config.meta_n
    total = 0
    for c, size in enumerate(sizes):
        offsets[c] = total
        total += size

    names: list[str] = []
    communities: list[int] = []
    attacks: list[tuple[int, int]] = []
    for c, size in enumerate(sizes):
        names.extend(f"c{c}_{k}" for k in range(size))
        communities.extend([c] * size)
        attacks.extend((offsets[c] + a, offsets[c] + b) for a, b in _inner_arcs(rng, config, size))

    bridges: list[tuple[int, int]] = []
    for c1, c2 in meta:
        capacity = 2 * sizes[c1] * sizes[c2]
        if config.bridges_per_meta_edge > capacity:
            raise ConfigError(
                f"cannot draw {config.bridges_per_meta_edge} distinct bridges between "
                f"communities of sizes {sizes[c1]} and {sizes[c2]}"
            )
        drawn: set[tuple[int, int]] = set()
        while len(drawn) < config.bridges_per_meta_edge:
            a = offsets[c1] + rng.randrange(sizes[c1])
            b = offsets[c2] + rng.randrange(sizes[c2])
            arc = (a, b) if rng.random() < 0.5 else (b, a)
            drawn.add(arc)
        bridges.extend(sorted(drawn))

    query = names[rng.randrange(total)]
    framework = ArgumentationFramework(names, attacks + bridges)
    return BenchmarkInstance(
        name=f"{config.name_prefix}_{index:04d}",
        framework=framework,
        query=query,
        communities=tuple(communities),
        bridges=tuple(bridges),
        config=config,
        index=index,
        instance_seed=seed,
    )


def write_instance(instance: BenchmarkInstance, out_dir: Path) -> list[Path]:
    """Write the instance files (one per format, plus the query sidecar)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in instance.config.formats:
        path = out_dir / f"{instance.name}.{fmt}"
        path.write_text(serialize_framework(instance.framework, fmt))
        written.append(path)
    query_path = out_dir / f"{instance.name}.arg"
    query_path.write_text(instance.query + "\n")
    written.append(query_path)
    return written


def generate_corpus(config: GeneratorConfig, count: int, out_dir: Path) -> list[BenchmarkInstance]:
    """Generate ``count`` instances plus a provenance manifest."""
    if count < 1:
        raise ConfigError("count must be at least 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    instances = []
    with (out_dir / "manifest.jsonl").open("w") as manifest:
        for index in range(count):
            instance = generate(config, index)
            write_instance(instance, out_dir)
            manifest.write(json.dumps(instance.provenance(), sort_keys=True) + "\n")
            instances.append(instance)
    return instances


@dataclass(frozen=True)
class HardnessRecord:
    instance: str
    timeout_count: int
    mean_runtime: float


def rank_by_hardness(records: Iterable[HardnessRecord]) -> list[HardnessRecord]:
    """Hardest first: most timeouts, then highest mean runtime."""
    return sorted(records, key=lambda r: (-r.timeout_count, -r.mean_runtime, r.instance))


def hardness_filter(
    instances: Sequence,
    portfolio: Sequence[Sequence[str]],
    limit: float,
    tasks: Sequence[str] = ("DS-PR",),
    top_k: int | None = None,
    fmt: str = "apx",
) -> list[HardnessRecord]:
    """Rank instances by how hard the portfolio finds them, hardest first.

    Every solver command runs every task on every instance under ``limit``;
    an instance scores one timeout per run that hits the limit, and its mean
    runtime is averaged over the runs that finished. The probe task list is
    a parameter because hardness is only meaningful relative to a workload.
    """
    from .harness import execute_solver
    from .tasks import parse_task

    if not portfolio:
        raise ConfigError("portfolio must contain at least one solver command")
    if not tasks:
        raise ConfigError("at least one probe task is required")
    records = []
    for inst in instances:
        timeouts = 0
        runtimes: list[float] = []
        for task_label in tasks:
            task = parse_task(task_label, inst.query)
            for command in portfolio:
                run = execute_solver(list(command), task, inst, fmt, limit)
                if run.timed_out:
                    timeouts += 1
                else:
                    runtimes.append(run.wall_time)
        mean = sum(runtimes) / len(runtimes) if runtimes else 0.0
        records.append(HardnessRecord(inst.name, timeouts, mean))
    ranked = rank_by_hardness(records)
    return ranked if top_k is None else ranked[:top_k]
