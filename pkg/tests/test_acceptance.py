"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``. The criteria are exact
(tolerance: equality) unless a runtime bound is stated.
"""

import time

from afkit import approx, engine
from afkit.benchgen import GeneratorConfig, generate
from afkit.formats import (
    CountAnswer,
    Decision,
    ExtensionAnswer,
    parse_apx,
    parse_tgf,
    serialize_framework,
    write_answer,
)
from afkit.framework import ArgumentationFramework
from afkit.harness import (
    Outcome,
    RunRecord,
    TrackConfig,
    discover_instances,
    read_runlog,
    score,
)
from afkit.oracle import BruteForceOracle
from afkit.tasks import Problem, Semantics, TaskSpec, exact_track_tasks

from .conftest import (
    APX_LISTING,
    TGF_LISTING,
    build_corpus,
    engine_matches_oracle,
    make_worked_example,
)


def report(capsys, number, title, ok, detail=""):
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        print(f"[acceptance {number}] {title}: {status}{suffix}")
    assert ok, f"criterion {number}: {title}"


def test_criterion_1_differential_correctness(capsys, corpus, corpus_oracles):
    start = time.monotonic()
    assert len(corpus) >= 1000
    mismatches = 0
    comparisons = 0
    for (af, query), oracle in zip(corpus, corpus_oracles):
        for problem, semantics in exact_track_tasks():
            task = TaskSpec(problem, semantics, query)
            answer = engine.solve(af, task)
            comparisons += 1
            if not engine_matches_oracle(af, task, oracle, answer):
                mismatches += 1
    elapsed = time.monotonic() - start
    report(
        capsys, 1, "engine matches oracle on 22 tasks x 1000 frameworks",
        mismatches == 0 and elapsed < 300.0,
        f"{comparisons} comparisons, {mismatches} mismatches, {elapsed:.1f}s",
    )


def test_criterion_2_worked_example(capsys):
    af = make_worked_example()
    oracle = BruteForceOracle(af)
    checks = []
    # oracle first: the expected values come from subset enumeration
    expected_counts = {Semantics.CO: 3, Semantics.PR: 2, Semantics.ST: 2,
                       Semantics.SST: 2, Semantics.STG: 2}
    for semantics, count in expected_counts.items():
        checks.append(len(oracle.extensions(semantics)) == count)
    checks.append(oracle.extensions(Semantics.ID) == [0])
    checks.append(oracle.answer(TaskSpec(Problem.DS, Semantics.PR, "a1")) == Decision(False))
    checks.append(oracle.answer(TaskSpec(Problem.DC, Semantics.CO, "a3")) == Decision(True))
    # then the engine must reproduce them
    for semantics, count in expected_counts.items():
        checks.append(engine.solve(af, TaskSpec(Problem.CE, semantics)) == CountAnswer(count))
    checks.append(engine.solve(af, TaskSpec(Problem.SE, Semantics.ID)) == ExtensionAnswer(()))
    checks.append(engine.solve(af, TaskSpec(Problem.DS, Semantics.PR, "a1")) == Decision(False))
    checks.append(engine.solve(af, TaskSpec(Problem.DC, Semantics.CO, "a3")) == Decision(True))
    report(capsys, 2, "worked three-argument example", all(checks),
           f"{sum(checks)}/{len(checks)} values")


def test_criterion_3_semantics_laws(capsys, corpus, corpus_oracles):
    failures = 0
    for (af, _), oracle in zip(corpus, corpus_oracles):
        co = set(oracle.extensions(Semantics.CO))
        pr = set(oracle.extensions(Semantics.PR))
        st = set(oracle.extensions(Semantics.ST))
        sst = set(oracle.extensions(Semantics.SST))
        stg = set(oracle.extensions(Semantics.STG))
        ideal = oracle.extensions(Semantics.ID)
        grounded = oracle.extensions(Semantics.GR)
        ok = st <= sst <= pr <= co and st <= stg
        if st:
            ok = ok and sst == st == stg
        ok = ok and len(ideal) == 1 and len(grounded) == 1
        ok = ok and all(grounded[0] & ~complete == 0 for complete in co)
        # skeptical-complete acceptance is exactly grounded membership
        for i, name in enumerate(af.names):
            want = oracle.answer(TaskSpec(Problem.DS, Semantics.CO, name))
            ok = ok and want == Decision(bool(grounded[0] >> i & 1))
        if not ok:
            failures += 1
    report(capsys, 3, "semantics laws on every tested framework", failures == 0,
           f"{len(corpus)} frameworks, {failures} violations")


def test_criterion_4_io_bit_exactness(capsys):
    ok = True
    tgf = parse_tgf(TGF_LISTING)
    apx = parse_apx(APX_LISTING)
    renamed = ArgumentationFramework([f"a{n}" for n in tgf.names], sorted(tgf.attacks))
    ok = ok and renamed == apx and tgf.n == apx.n == 3
    ok = ok and write_answer(Decision(True)) == "YES\n"
    ok = ok and write_answer(Decision(False)) == "NO\n"
    ok = ok and write_answer(ExtensionAnswer(("a1", "a2", "a3"))) == "[a1,a2,a3]\n"
    ok = ok and write_answer(CountAnswer(3)) == "3\n"
    ok = ok and write_answer(ExtensionAnswer(())) == "[]\n"
    round_trips = 0
    for af, _ in build_corpus(size=1000, seed=404):
        if parse_tgf(serialize_framework(af, "tgf")) == af and parse_apx(
            serialize_framework(af, "apx")
        ) == af:
            round_trips += 1
    ok = ok and round_trips == 1000
    report(capsys, 4, "competition I/O is bit-exact", ok, f"{round_trips}/1000 round trips")


def test_criterion_5_scoring_fidelity(capsys):
    ok = True
    # every scoring case, both tracks, hand-computed
    labels = ("DC-CO", "DS-CO")
    base = [
        RunRecord("s", "i1", "DC-CO", Outcome.CORRECT, 1.0),
        RunRecord("s", "i2", "DC-CO", Outcome.TIMEOUT, 60.0),
        RunRecord("s", "i3", "DC-CO", Outcome.NONPARSABLE, 1.0),
        RunRecord("s", "i4", "DC-CO", Outcome.WRONG, 1.0),
        RunRecord("s", "i1", "DS-CO", Outcome.CORRECT, 2.0),
        RunRecord("s", "i2", "DS-CO", Outcome.CORRECT, 2.0),
        RunRecord("s", "i3", "DS-CO", Outcome.CRASH, 1.0),
        RunRecord("s", "i4", "DS-CO", Outcome.CORRECT, 2.0),
    ]
    approx_board = score(base, TrackConfig("approximate", (Semantics.CO,)))
    result = approx_board.subtracks[Semantics.CO]
    ok = ok and result.ranking == [(1, "s", 4, 7.0)]  # 1+0+0+0 and 1+1+0+1
    ok = ok and not result.excluded

    exact_board = score(base, TrackConfig("exact", (Semantics.CO,)))
    ok = ok and "s" in exact_board.subtracks[Semantics.CO].excluded
    # the same solver with clean ST answers stays ranked there
    st_records = [
        RunRecord("s", f"i{k}", label, Outcome.CORRECT, 0.5)
        for k in range(1, 5)
        for label in ("CE-ST", "SE-ST", "DC-ST", "DS-ST")
    ]
    both = score(base + st_records, TrackConfig("exact", (Semantics.CO, Semantics.ST)))
    ok = ok and "s" in both.subtracks[Semantics.CO].excluded
    ok = ok and both.subtracks[Semantics.ST].ranking == [(1, "s", 16, 8.0)]

    # tie-break: equal scores rank by cumulated runtime, fastest first
    tie = []
    for name, total in (("fast", 9.848397), ("slow", 470.655630)):
        per = round(total / 108, 6)
        walls = [per] * 107 + [round(total - 107 * per, 6)]
        tie += [
            RunRecord(name, f"i{k:03d}", "DS-ID", Outcome.CORRECT, wall)
            for k, wall in enumerate(walls)
        ]
    tie_board = score(tie, TrackConfig("approximate", (Semantics.ID,)))
    ranking = tie_board.subtracks[Semantics.ID].ranking
    ok = ok and [(r[0], r[1], r[2]) for r in ranking] == [(1, "fast", 108), (2, "slow", 108)]
    ok = ok and abs(ranking[0][3] - 9.848397) < 1e-3 and abs(ranking[1][3] - 470.655630) < 1e-3
    report(capsys, 5, "scoring rules reproduce the hand-computed cases", ok)


def test_criterion_6_generator_audit(capsys):
    config = GeneratorConfig(
        seed=2021, meta_kind="er", meta_n=4, meta_p=1.0,
        inner_size_min=3, inner_size_max=3, inner_p=0.3, bridges_per_meta_edge=1,
    )
    instance = generate(config)
    twin = generate(config)
    inter = sum(
        1
        for a, b in instance.framework.attacks
        if instance.communities[a] != instance.communities[b]
    )
    ok = (
        instance.framework.n == 12
        and len(set(instance.communities)) == 4
        and inter == 6
        and instance.query in instance.framework
    )
    for fmt in ("tgf", "apx"):
        ok = ok and serialize_framework(instance.framework, fmt) == serialize_framework(
            twin.framework, fmt
        )
    ok = ok and instance.query == twin.query
    report(capsys, 6, "community generator audit", ok,
           f"{instance.framework.n} arguments, {inter} bridges")


def test_criterion_7_approximation_floor(capsys, corpus, corpus_oracles):
    agreements = 0
    worst = 0.0
    for (af, query), oracle in zip(corpus, corpus_oracles):
        task = TaskSpec(Problem.DS, Semantics.CO, query)
        start = time.monotonic()
        answer = approx.approx_decide(af, task)
        worst = max(worst, time.monotonic() - start)
        if answer == oracle.answer(task):
            agreements += 1
    ok = agreements == len(corpus) and worst < 60.0
    report(capsys, 7, "approximate DS-CO is exact and fast", ok,
           f"{agreements}/{len(corpus)} agree, worst call {worst * 1000:.2f}ms")


def test_criterion_8_end_to_end(capsys, tmp_path):
    from afkit.cli import toolbox_main

    config_path = tmp_path / "gen.cfg"
    config_path.write_text(
        "seed = 505\nmeta_kind = er\nmeta_n = 3\nmeta_p = 0.9\n"
        "inner_size_min = 3\ninner_size_max = 4\ninner_p = 0.3\n"
        "bridges_per_meta_edge = 1\n"
    )
    bench = tmp_path / "bench"
    assert toolbox_main(
        ["generate", "--config", str(config_path), "--count", "50", "--out", str(bench)]
    ) == 0
    instances = discover_instances(bench)
    assert len(instances) == 50
    manifest = tmp_path / "solvers"
    manifest.write_text("builtin=@builtin-exact\n")
    runlog = tmp_path / "runlog"
    code = toolbox_main(
        [
            "run",
            "--track", "exact",
            "--solvers", str(manifest),
            "--instances", str(bench),
            "--out", str(runlog),
            "--subtracks", "CO",
            "--timeout", "60",
            "--workers", "2",
        ]
    )
    records, _ = read_runlog(runlog)
    wrong = [r for r in records if r.outcome is Outcome.WRONG]
    not_correct = [r for r in records if r.outcome is not Outcome.CORRECT]
    report_path = tmp_path / "report"
    score_code = toolbox_main(
        ["score", "--runlog", str(runlog), "--out", str(report_path)]
    )
    text = report_path.read_text()
    ok = (
        code == 0
        and score_code == 0
        and len(records) == 200
        and not wrong
        and not not_correct
        and "builtin" in text
        and "subtrack CO" in text
        and f"{200:>8}" in text
    )
    report(capsys, 8, "end-to-end run and score over 50 generated instances", ok,
           f"{len(records)} runs, {len(wrong)} wrong")
