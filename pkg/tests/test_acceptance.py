"""Acceptance suite: one test per shipped guarantee, each printing a verdict line.

Every check runs at full strength against independently derivable expectations
(closed forms, brute-force reimplementations, exact integer arithmetic).  Two
classification checks are expected to fail on honest data: within the sampled
radius windows the measured central distortion and the pentagon lower
divergence both sit in a linear regime, so the required superlinear fits do
not materialize.  The checks are kept as stated rather than weakened; see the
README section on the acceptance suite.
"""

from __future__ import annotations

import math
import random
import time
from collections import deque
from fractions import Fraction

from reldiv import cli
from reldiv.asymptotics import SampledFunction, classify
from reldiv.atlas import annotate_subgroup_distance, enumerate_ball
from reldiv.divergence import (
    DivergenceParams,
    axis_divergence,
    lower_divergence_sample,
    upper_divergence_sample,
)
from reldiv.gromov import tower_witness
from reldiv.groups import FreeGroupOracle, HeisenbergOracle
from reldiv.invariants import (
    distortion_table,
    filtered_ends_profile,
    growth,
    growth_profile,
    upper_distortion,
)
from reldiv.racg import RacgOracle, pentagon_graph
from reldiv.rewrite import heisenberg_collection_rules, z2_abelian_rules
from reldiv.subgroups import cyclic_subgroup, heisenberg_center

HALF = Fraction(1, 2)
ONE = Fraction(1)


def verdict(number: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)


def linear_or_leaning_linear(rep) -> bool:
    return rep.growth_class == "linear" or (
        rep.growth_class == "indeterminate" and rep.leaning == "linear"
    )


def at_least_quadraticish(rep) -> bool:
    return rep.growth_class == "polynomial" and rep.degree_estimate is not None and (
        1.5 <= rep.degree_estimate <= 2.5
    )


def superlinear(rep) -> bool:
    if rep.growth_class == "exponential":
        return True
    if rep.growth_class == "polynomial" and (rep.degree_estimate or 0) >= 1.5:
        return True
    return rep.growth_class == "indeterminate" and rep.leaning == "exponential"


# ---------------------------------------------------------------------------
# 1. BFS subgroup-distance annotation agrees with the central closed form


def test_criterion_1_bfs_distance_matches_central_formula():
    start = time.monotonic()
    oracle = HeisenbergOracle()
    ball = enumerate_ball(oracle, 8)
    spec = heisenberg_center(oracle)
    aball = annotate_subgroup_distance(ball, spec, use_formula=False)
    assert aball.used_formula is False
    mismatches = 0
    checked = 0
    for gid, g in enumerate(aball.elements):
        if aball.word_length[gid] > aball.valid_core:
            continue
        checked += 1
        k, l, _ = g
        if int(aball.dist_to_H[gid]) != abs(k) + abs(l):
            mismatches += 1
    elapsed = time.monotonic() - start
    ok = mismatches == 0 and checked > 0 and elapsed < 120.0
    verdict(
        1,
        ok,
        f"{checked} core elements compared, {mismatches} mismatches, {elapsed:.1f}s",
    )
    assert mismatches == 0
    assert checked > 0
    assert elapsed < 120.0


# ---------------------------------------------------------------------------
# 2. central distortion bounds and (expected-fail) quadratic classification


def test_criterion_2_central_distortion_bounds_and_classification():
    oracle = HeisenbergOracle()
    spec = heisenberg_center(oracle)
    aball = annotate_subgroup_distance(enumerate_ball(oracle, 20), spec)
    radii = list(range(2, 11))
    table = distortion_table(aball, radii)
    failures: list[str] = []
    for row in table.rows:
        big_dist, _ = upper_distortion(aball, 2 * row.r)
        if not row.lower <= big_dist:
            failures.append(f"dist({row.r})={row.lower} > Dist({2 * row.r})={big_dist}")
        ball_count = growth(aball, 2 * row.r)
        if not row.lower <= ball_count:
            failures.append(f"dist({row.r})={row.lower} > growth({2 * row.r})={ball_count}")
    rep_upper = classify(
        SampledFunction.from_pairs("Dist", [(row.r, row.upper) for row in table.rows])
    )
    rep_lower = classify(
        SampledFunction.from_pairs("dist", [(row.r, row.lower) for row in table.rows])
    )
    for name, rep in (("Dist", rep_upper), ("dist", rep_lower)):
        if not at_least_quadraticish(rep):
            failures.append(
                f"{name} classified {rep.growth_class}"
                f" (degree estimate {rep.degree_estimate}),"
                " required polynomial with degree in [1.5, 2.5]"
            )
    verdict(2, not failures, "; ".join(failures) or "all bounds hold on r=2..10")
    assert not failures, "; ".join(failures)


# ---------------------------------------------------------------------------
# 3. relative upper divergence stays under an explicit linear ceiling


def test_criterion_3_central_upper_divergence_linear_ceiling(heis_aball16):
    failures: list[str] = []
    profiles: dict[int, list[tuple[int, int]]] = {}
    for n in (2, 3):
        pairs = []
        for r in (2, 3, 4):
            sample = upper_divergence_sample(heis_aball16, DivergenceParams(HALF, n, r))
            if sample.value is None:
                failures.append(f"delta(n={n}, r={r}) infinite")
                continue
            if sample.value > 50 * n * r:
                failures.append(
                    f"delta(n={n}, r={r})={sample.value} exceeds ceiling {50 * n * r}"
                )
            pairs.append((r, sample.value))
        profiles[n] = pairs
    for n, pairs in profiles.items():
        rep = classify(SampledFunction.from_pairs(f"delta_n{n}", pairs))
        if rep.growth_class == "exponential" or (
            rep.growth_class == "polynomial" and (rep.degree_estimate or 0) >= 2
        ):
            failures.append(f"delta profile n={n} classified {rep.growth_class}")
        if not linear_or_leaning_linear(rep):
            failures.append(
                f"delta profile n={n}: class {rep.growth_class}, leaning {rep.leaning}"
            )
    verdict(3, not failures, "; ".join(failures) or "delta <= 50nr and linear-leaning")
    assert not failures, "; ".join(failures)


# ---------------------------------------------------------------------------
# 4. planar divergence matches an independent brute-force grid implementation


def _grid_divergence(radius: int, rho: Fraction, n: int, r: int, kind: str):
    """Deliberately independent reimplementation on the integer grid.

    Plain dict/set BFS over lattice points, no shared code with the library.
    Distance to the horizontal axis subgroup is |j|; the ambient metric is L1.
    """
    level = math.ceil(rho * r)
    points = [
        (i, j)
        for i in range(-radius, radius + 1)
        for j in range(-radius, radius + 1)
        if abs(i) + abs(j) <= radius
    ]
    point_set = set(points)

    def neighbors(p):
        i, j = p
        for q in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            if q in point_set:
                yield q

    def components(threshold):
        labels = {}
        next_label = 0
        for p in points:
            if abs(p[1]) < threshold or p in labels:
                continue
            queue = deque([p])
            labels[p] = next_label
            while queue:
                cur = queue.popleft()
                for q in neighbors(cur):
                    if abs(q[1]) >= threshold and q not in labels:
                        labels[q] = next_label
                        queue.append(q)
            next_label += 1
        return labels

    def bfs_from(source, threshold):
        dist = {source: 0}
        queue = deque([source])
        while queue:
            cur = queue.popleft()
            for q in neighbors(cur):
                if abs(q[1]) >= threshold and q not in dist:
                    dist[q] = dist[cur] + 1
                    queue.append(q)
        return dist

    pairing = components(r)
    anchors = [(0, r), (0, -r)]
    boundary = [p for p in points if abs(p[1]) == r]
    pair_count = 0
    values = []
    for x in anchors:
        reach = bfs_from(x, level)
        for y in boundary:
            if pairing[y] != pairing[x]:
                continue
            taxicab = abs(x[0] - y[0]) + abs(x[1] - y[1])
            if kind == "upper" and taxicab > n * r:
                continue
            if kind == "lower" and taxicab < n * r:
                continue
            pair_count += 1
            if y in reach:
                values.append(reach[y])
    if kind == "upper":
        return (max(values) if values else 0), pair_count
    return (min(values) if values else None), pair_count


def test_criterion_4_grid_divergence_matches_brute_force(z2_aball15):
    failures: list[str] = []
    for rho in (HALF, ONE):
        for r in (2, 3, 4, 5):
            params = DivergenceParams(rho, 2, r)
            for kind, fn in (
                ("upper", upper_divergence_sample),
                ("lower", lower_divergence_sample),
            ):
                sample = fn(z2_aball15, params)
                expect_value, expect_pairs = _grid_divergence(15, rho, 2, r, kind)
                if sample.value != expect_value or sample.pair_count != expect_pairs:
                    failures.append(
                        f"{kind} rho={rho} r={r}: library ({sample.value}, "
                        f"{sample.pair_count} pairs) vs grid ({expect_value}, "
                        f"{expect_pairs} pairs)"
                    )
                if sample.value != 2 * r:
                    failures.append(f"{kind} rho={rho} r={r}: value {sample.value} != {2 * r}")
    ends = filtered_ends_profile(
        z2_aball15.oracle, z2_aball15.spec, [1, 2, 3], [6, 8, 10]
    )
    for row in ends.rows:
        if row.estimate != 2 or not row.stabilized:
            failures.append(
                f"ends at r={row.r}: estimate {row.estimate}, stabilized {row.stabilized}"
            )
    verdict(4, not failures, "; ".join(failures) or "16 samples match the grid; ends = 2")
    assert not failures, "; ".join(failures)


# ---------------------------------------------------------------------------
# 5. free-group axis: infinite lower divergence, exact ball counts


def test_criterion_5_free_group_infinite_divergence(f2_aball8):
    failures: list[str] = []
    for r in (2, 3, 4):
        sample = lower_divergence_sample(f2_aball8, DivergenceParams(HALF, 2, r))
        if sample.value is not None:
            failures.append(f"sigma(r={r})={sample.value}, expected infinite")
    oracle = FreeGroupOracle(2)
    ball6 = enumerate_ball(oracle, 6)
    for r in (1, 2):
        sample = axis_divergence(ball6, ["a"], r)
        if sample.value is not None:
            failures.append(f"axis divergence r={r} = {sample.value}, expected infinite")
    for r in range(0, 9):
        expect = 2 * 3**r - 1
        got = f2_aball8.ball.ball_count(r)
        if got != expect:
            failures.append(f"ball count r={r}: {got} != {expect}")
    verdict(5, not failures, "; ".join(failures) or "sigma and axis infinite; counts exact")
    assert not failures, "; ".join(failures)


# ---------------------------------------------------------------------------
# 6. pentagon group: exponential growth, lower divergence >= nr,
#    (expected-fail) superlinear classification


def test_criterion_6_pentagon_growth_and_lower_divergence():
    start = time.monotonic()
    oracle = RacgOracle(pentagon_graph())
    spec = cyclic_subgroup(oracle, ["s1", "s3"])
    ball = enumerate_ball(oracle, 14, budget_elements=10_000_000)
    assert len(ball) <= 10_000_000
    aball = annotate_subgroup_distance(ball, spec)
    failures: list[str] = []
    counts = growth_profile(aball, list(range(2, 9)))
    rep_growth = classify(SampledFunction.from_pairs("ball", counts))
    if rep_growth.growth_class != "exponential":
        failures.append(f"growth classified {rep_growth.growth_class}, expected exponential")
    sigma_pairs = []
    for r in (2, 3, 4):
        sample = lower_divergence_sample(aball, DivergenceParams(HALF, 2, r))
        if sample.value is None:
            sigma_pairs.append((r, None))
            continue
        if sample.value < 2 * r:
            failures.append(f"sigma(r={r})={sample.value} below nr={2 * r}")
        sigma_pairs.append((r, sample.value))
    rep_sigma = classify(SampledFunction.from_pairs("sigma", sigma_pairs))
    if not superlinear(rep_sigma):
        failures.append(
            f"sigma profile classified {rep_sigma.growth_class}"
            f" (leaning {rep_sigma.leaning}), required superlinear or exponential"
        )
    elapsed = time.monotonic() - start
    if elapsed >= 600.0:
        failures.append(f"runtime {elapsed:.0f}s exceeds 600s")
    verdict(
        6,
        not failures,
        "; ".join(failures) or f"growth exponential, sigma >= nr, {elapsed:.0f}s",
    )
    assert not failures, "; ".join(failures)


# ---------------------------------------------------------------------------
# 7. tower words certify doubly exponential subgroup elements exactly


def test_criterion_7_tower_witness_exact_big_integers():
    failures: list[str] = []
    for n in range(0, 5):
        w = tower_witness(n)
        if not w.verified:
            failures.append(f"n={n} witness failed verification")
        if w.word_length != 4 * n + 2:
            failures.append(f"n={n} word length {w.word_length} != {4 * n + 2}")
        if w.target_exponent != 2 ** (2**n):
            failures.append(f"n={n} target exponent mismatch")
    verdict(7, not failures, "; ".join(failures) or "n=0..4 verified, lengths 4n+2, targets 2^(2^n)")
    assert not failures, "; ".join(failures)


# ---------------------------------------------------------------------------
# 8. shipped rewriting systems: confluent, and normal forms match the oracle


def test_criterion_8_rewriting_confluence_and_oracle_agreement():
    failures: list[str] = []
    for name, system in (
        ("z2-abelian", z2_abelian_rules()),
        ("heisenberg-collection", heisenberg_collection_rules()),
    ):
        rep = system.critical_pairs()
        if rep.confluent is not True or rep.unresolved:
            failures.append(
                f"{name}: confluent={rep.confluent}, {len(rep.unresolved)} unresolved"
            )
    rng = random.Random(20260823)
    oracle = HeisenbergOracle()
    system = heisenberg_collection_rules()
    alphabet = ["a", "A", "b", "B", "c", "C"]
    mismatches = 0
    for _ in range(1000):
        word = [rng.choice(alphabet) for _ in range(rng.randint(0, 12))]
        normal = system.normalize(word)
        k, l, p = oracle.word_to_element(word)
        expect = (
            tuple(("a" if k > 0 else "A") for _ in range(abs(k)))
            + tuple(("b" if l > 0 else "B") for _ in range(abs(l)))
            + tuple(("c" if p > 0 else "C") for _ in range(abs(p)))
        )
        if tuple(normal) != expect:
            mismatches += 1
    if mismatches:
        failures.append(f"{mismatches}/1000 normal forms disagree with the oracle")
    verdict(8, not failures, "; ".join(failures) or "systems confluent; 1000/1000 forms agree")
    assert not failures, "; ".join(failures)


# ---------------------------------------------------------------------------
# 9. command-line runs are byte-deterministic across thread settings


def test_criterion_9_cli_outputs_thread_deterministic(tmp_path):
    failures: list[str] = []
    for recipe, allowed in (("z2-axis", {0}), ("heisenberg-distortion", {0, 2})):
        dirs = []
        for threads in ("1", "8"):
            out = tmp_path / f"{recipe}-t{threads}"
            code = cli.main(
                ["run", recipe, "--out", str(out), "--threads", threads]
            )
            if code not in allowed:
                failures.append(f"{recipe} --threads {threads} exited {code}")
            dirs.append(out)
        names = sorted(p.name for p in dirs[0].glob("*.csv"))
        if not names:
            failures.append(f"{recipe}: no delimited output written")
        if names != sorted(p.name for p in dirs[1].glob("*.csv")):
            failures.append(f"{recipe}: csv sets differ between runs")
        for name in names:
            if (dirs[0] / name).read_bytes() != (dirs[1] / name).read_bytes():
                failures.append(f"{recipe}/{name} differs between thread settings")
    verdict(9, not failures, "; ".join(failures) or "all delimited outputs byte-identical")
    assert not failures, "; ".join(failures)
