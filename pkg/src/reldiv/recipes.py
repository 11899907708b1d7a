"""End-to-end reproduction recipes with built-in acceptance checks.

Each recipe builds its atlases, computes the advertised profiles, writes
CSV/JSON artifacts plus rendered figures into an output directory, and
records named PASS/FAIL checks in ``summary.txt``.  A recipe whose checks
all pass is the basis for exit code 0 at the command line; any failed
check exits 2.  All recipes are deterministic and single-threaded.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from . import invariants, report
from .asymptotics import SampledFunction, classify
from .atlas import annotate_subgroup_distance, enumerate_ball
from .divergence import axis_divergence, divergence_profile
from .errors import ConfigError
from .gromov import tower_witness
from .groups import FreeGroupOracle, HeisenbergOracle, ZdOracle
from .racg import RacgOracle, pentagon_graph
from .report import ReportBundle
from .subgroups import cyclic_subgroup, heisenberg_center, zd_axis, zd_sublattice

HALF = Fraction(1, 2)

# One-sentence statement of what each recipe demonstrates; echoed in the
# summary header and the JSON report so the artifacts are self-describing.
CLAIMS = {
    "z2-axis": (
        "In the rank-2 free abelian group relative to a coordinate axis, both "
        "relative divergence profiles are linear (value 2r at scale n=2) and "
        "the filtered-end estimate stabilizes at 2."
    ),
    "heisenberg-distortion": (
        "Both distortion functions of the center of the discrete Heisenberg "
        "group are expected to grow quadratically, and ball growth dominates "
        "the lower distortion at every sample."
    ),
    "heisenberg-divergence": (
        "Upper relative divergence of the Heisenberg center stays below 50nr "
        "and fits a linear profile."
    ),
    "f2-axis": (
        "In the rank-2 free group relative to a generator axis, lower relative "
        "divergence and axis divergence are infinite, and ball counts match "
        "the closed form 2*3^r - 1."
    ),
    "pentagon-lower-div": (
        "For the right-angled pentagon Coxeter group relative to an infinite "
        "dihedral subgroup, lower relative divergence should exceed every "
        "linear bound; ball growth is exponential."
    ),
    "gromov-witness": (
        "In the group with relations b a b^-1 = a^2 and c b c^-1 = b^2, a "
        "word of length 4n+2 equals the cyclic subgroup generator a raised "
        "to 2^(2^n), witnessing at-least-doubly-exponential distortion."
    ),
    "ends-survey": (
        "Filtered-end estimates across example pairs: 2 for a line in the "
        "plane, 1 for the Heisenberg center, 0 for a finite-index sublattice, "
        "and unstabilized growth for an axis in the free group."
    ),
}


def _divergence_samples_fn(samples, label) -> SampledFunction:
    return SampledFunction.from_pairs(
        label, [(s.r, s.value) for s in samples], {"kind": samples[0].kind if samples else "?"}
    )


def _classification_ok_linear(rep) -> bool:
    return rep.growth_class == "linear" or (
        rep.growth_class == "indeterminate" and rep.leaning == "linear"
    )


def _classification_superlinear(rep) -> bool:
    if rep.growth_class == "exponential":
        return True
    if rep.growth_class == "polynomial" and (rep.degree_estimate or 0) >= 1.5:
        return True
    return rep.growth_class == "indeterminate" and rep.leaning == "exponential"


# ---------------------------------------------------------------------------


def recipe_z2_axis(outdir: Path, pair_budget: int = 500_000, **_) -> ReportBundle:
    bundle = ReportBundle(outdir)
    oracle = ZdOracle(2)
    spec = zd_axis(oracle, 0)
    radii = list(range(2, 8))
    n = 2
    ball = enumerate_ball(oracle, max(radii) * (n + 1))
    aball = annotate_subgroup_distance(ball, spec)
    upper = divergence_profile(
        oracle, spec, "upper", radii, rho=HALF, n=n, aball=aball, pair_budget=pair_budget
    )
    lower = divergence_profile(
        oracle, spec, "lower", radii, rho=HALF, n=n, aball=aball, pair_budget=pair_budget
    )
    bundle.add_csv("divergence_upper.csv", *report.divergence_rows(upper, oracle))
    bundle.add_csv("divergence_lower.csv", *report.divergence_rows(lower, oracle))
    for s in upper:
        bundle.check(f"delta(r={s.r}) == {n}r", s.value == n * s.r, f"value {s.value_text}")
    for s in lower:
        bundle.check(f"sigma(r={s.r}) == {n}r", s.value == n * s.r, f"value {s.value_text}")
    rep_u = classify(_divergence_samples_fn(upper, "delta"))
    rep_l = classify(_divergence_samples_fn(lower, "sigma"))
    bundle.check("delta profile linear", _classification_ok_linear(rep_u), rep_u.growth_class)
    bundle.check("sigma profile linear", _classification_ok_linear(rep_l), rep_l.growth_class)
    ends = invariants.filtered_ends_profile(oracle, spec, [1, 2, 3], [6, 8, 10])
    bundle.add_csv("ends.csv", *report.ends_rows(ends))
    for row in ends.rows:
        bundle.check(
            f"ends estimate 2 at r={row.r}",
            row.estimate == 2 and row.stabilized,
            f"estimate {row.estimate}, stabilized {row.stabilized}",
        )
    bundle.add_json(
        "report.json",
        report.stamp(claim=CLAIMS["z2-axis"], payload=
            {
                "upper": [s.to_jsonable(oracle) for s in upper],
                "lower": [s.to_jsonable(oracle) for s in lower],
                "ends": ends.to_jsonable(),
                "classification": {"delta": rep_u.to_jsonable(), "sigma": rep_l.to_jsonable()},
            },
            group=oracle.describe(),
            digest=spec.digest,
        ),
    )
    bundle.add_figure(
        "divergence.png",
        [
            ("delta (upper)", [(s.r, s.value) for s in upper]),
            ("sigma (lower)", [(s.r, s.value) for s in lower]),
        ],
        "Z^2 relative divergence against the coordinate axis",
        ylabel="complement distance",
    )
    bundle.write_summary("z2-axis", claim=CLAIMS["z2-axis"])
    return bundle


def recipe_heisenberg_distortion(outdir: Path, **_) -> ReportBundle:
    bundle = ReportBundle(outdir)
    oracle = HeisenbergOracle()
    spec = heisenberg_center(oracle)
    ball = enumerate_ball(oracle, 20)
    aball = annotate_subgroup_distance(ball, spec)
    radii = list(range(2, 11))
    table = invariants.distortion_table(aball, radii)
    bundle.add_csv("distortion.csv", *report.distortion_rows(table, oracle))
    gp = invariants.growth_profile(aball, list(range(1, 21)))
    bundle.add_csv("growth.csv", *report.growth_rows(gp))
    ups = {row.r: row.upper for row in table.rows}
    his = invariants.distortion_table(aball, [2 * r for r in radii if 2 * r <= 20])
    big = {row.r: row.upper for row in his.rows}
    for row in table.rows:
        if 2 * row.r in big:
            bundle.check(
                f"dist({row.r}) <= Dist({2 * row.r})",
                row.lower <= big[2 * row.r],
                f"{row.lower} vs {big[2 * row.r]}",
            )
    dom = invariants.growth_dominates_lower_distortion_check(aball, radii)
    bundle.check("dist(r) <= Growth(2r) at all samples", dom.holds)
    rep_up = classify(SampledFunction.from_pairs("Dist", [(r, ups[r]) for r in radii]))
    rep_lo = classify(
        SampledFunction.from_pairs("dist", [(row.r, row.lower) for row in table.rows])
    )
    for name, rep in (("Dist", rep_up), ("dist", rep_lo)):
        est = rep.degree_estimate
        ok = est is not None and 1.5 <= est <= 2.5
        bundle.check(
            f"{name} classified quadratic (degree in [1.5, 2.5])",
            ok,
            f"class {rep.growth_class}, degree estimate {est}",
        )
    bundle.add_json(
        "report.json",
        report.stamp(claim=CLAIMS["heisenberg-distortion"], payload=
            {
                "distortion": table.to_jsonable(oracle),
                "growth": [{"r": r, "ball": c} for r, c in gp],
                "domination": dom.to_jsonable(),
                "classification": {"Dist": rep_up.to_jsonable(), "dist": rep_lo.to_jsonable()},
            },
            group=oracle.describe(),
            digest=spec.digest,
        ),
    )
    bundle.add_figure(
        "distortion.png",
        [
            ("Dist", [(row.r, row.upper) for row in table.rows]),
            ("dist", [(row.r, row.lower) for row in table.rows]),
        ],
        "Central subgroup distortion in the Heisenberg group",
        ylabel="intrinsic length",
    )
    bundle.write_summary("heisenberg-distortion", claim=CLAIMS["heisenberg-distortion"])
    return bundle


def recipe_heisenberg_divergence(outdir: Path, pair_budget: int = 500_000, **_) -> ReportBundle:
    bundle = ReportBundle(outdir)
    oracle = HeisenbergOracle()
    spec = heisenberg_center(oracle)
    radii = [2, 3, 4]
    ball = enumerate_ball(oracle, max(radii) * 4)  # covers r + n*r for n up to 3
    aball = annotate_subgroup_distance(ball, spec)
    payload = {}
    series = []
    for n in (2, 3):
        samples = divergence_profile(
            oracle, spec, "upper", radii, rho=HALF, n=n, aball=aball, pair_budget=pair_budget
        )
        bundle.add_csv(f"delta_n{n}.csv", *report.divergence_rows(samples, oracle))
        for s in samples:
            bound = 50 * n * s.r
            bundle.check(
                f"delta(n={n}, r={s.r}) <= 50nr = {bound}",
                s.value is not None and s.value <= bound,
                f"value {s.value_text}",
            )
        rep = classify(_divergence_samples_fn(samples, f"delta_n{n}"))
        bundle.check(
            f"delta n={n} profile linear or leaning linear",
            _classification_ok_linear(rep),
            f"class {rep.growth_class}, leaning {rep.leaning}",
        )
        payload[f"n{n}"] = {
            "samples": [s.to_jsonable(oracle) for s in samples],
            "classification": rep.to_jsonable(),
        }
        series.append((f"delta n={n}", [(s.r, s.value) for s in samples]))
    bundle.add_json(
        "report.json",
        report.stamp(claim=CLAIMS["heisenberg-divergence"], payload=payload, group=oracle.describe(), digest=spec.digest),
    )
    bundle.add_figure(
        "divergence.png",
        series,
        "Heisenberg upper relative divergence against the center",
        ylabel="complement distance",
    )
    bundle.write_summary("heisenberg-divergence", claim=CLAIMS["heisenberg-divergence"])
    return bundle


def recipe_f2_axis(outdir: Path, pair_budget: int = 500_000, **_) -> ReportBundle:
    bundle = ReportBundle(outdir)
    oracle = FreeGroupOracle(2)
    spec = cyclic_subgroup(oracle, ["a"])
    ball = enumerate_ball(oracle, 8)
    aball = annotate_subgroup_distance(ball, spec)
    radii = [2, 3, 4]
    lower = divergence_profile(
        oracle, spec, "lower", radii, rho=HALF, n=2, aball=aball, pair_budget=pair_budget
    )
    bundle.add_csv("sigma.csv", *report.divergence_rows(lower, oracle))
    for s in lower:
        bundle.check(f"sigma(r={s.r}) infinite", s.value is None, f"value {s.value_text}")
    axis = [axis_divergence(ball, ["a"], r) for r in (1, 2)]
    bundle.add_csv("axis.csv", *report.divergence_rows(axis, oracle))
    for s in axis:
        bundle.check(f"axis divergence r={s.r} infinite", s.value is None, f"value {s.value_text}")
    gp = invariants.growth_profile(aball, list(range(0, 9)))
    bundle.add_csv("growth.csv", *report.growth_rows(gp))
    closed = {0: 1, **{r: 2 * 3**r - 1 for r in range(1, 9)}}
    bundle.check(
        "ball counts match 2*3^r - 1",
        all(c == closed[r] for r, c in gp),
        "; ".join(f"{r}:{c}" for r, c in gp),
    )
    bundle.add_json(
        "report.json",
        report.stamp(claim=CLAIMS["f2-axis"], payload=
            {
                "sigma": [s.to_jsonable(oracle) for s in lower],
                "axis": [s.to_jsonable(oracle) for s in axis],
                "growth": [{"r": r, "ball": c} for r, c in gp],
            },
            group=oracle.describe(),
            digest=spec.digest,
        ),
    )
    bundle.add_figure(
        "growth.png",
        [("ball size", [(r, c) for r, c in gp if r >= 1])],
        "Free group ball growth",
        ylabel="elements",
        logy=True,
    )
    bundle.write_summary("f2-axis", claim=CLAIMS["f2-axis"])
    return bundle


def recipe_pentagon_lower_div(
    outdir: Path,
    pair_budget: int = 500_000,
    budget_elements: int = 10_000_000,
    **_,
) -> ReportBundle:
    bundle = ReportBundle(outdir)
    oracle = RacgOracle(pentagon_graph())
    spec = cyclic_subgroup(oracle, ["s1", "s3"])
    ball = enumerate_ball(oracle, 14, budget_elements=budget_elements)
    aball = annotate_subgroup_distance(ball, spec)
    radii = [2, 3, 4]
    n = 2
    lower = divergence_profile(
        oracle, spec, "lower", radii, rho=HALF, n=n, aball=aball, pair_budget=pair_budget
    )
    bundle.add_csv("sigma.csv", *report.divergence_rows(lower, oracle))
    for s in lower:
        bundle.check(
            f"sigma(r={s.r}) >= {n}r",
            s.value is not None and s.value >= n * s.r,
            f"value {s.value_text}",
        )
    rep_sigma = classify(_divergence_samples_fn(lower, "sigma"))
    bundle.check(
        "sigma profile superlinear or exponential",
        _classification_superlinear(rep_sigma),
        f"class {rep_sigma.growth_class}, leaning {rep_sigma.leaning}",
    )
    gp = invariants.growth_profile(aball, list(range(2, 9)))
    bundle.add_csv("growth.csv", *report.growth_rows(gp))
    rep_growth = classify(SampledFunction.from_pairs("growth", gp))
    bundle.check(
        "growth classified exponential",
        rep_growth.growth_class == "exponential",
        f"class {rep_growth.growth_class}",
    )
    bundle.add_json(
        "report.json",
        report.stamp(claim=CLAIMS["pentagon-lower-div"], payload=
            {
                "sigma": [s.to_jsonable(oracle) for s in lower],
                "growth": [{"r": r, "ball": c} for r, c in gp],
                "classification": {
                    "sigma": rep_sigma.to_jsonable(),
                    "growth": rep_growth.to_jsonable(),
                },
            },
            group=oracle.describe(),
            digest=spec.digest,
        ),
    )
    bundle.add_figure(
        "growth.png",
        [("ball size", gp)],
        "Pentagon Coxeter group ball growth",
        ylabel="elements",
        logy=True,
    )
    bundle.write_summary("pentagon-lower-div", claim=CLAIMS["pentagon-lower-div"])
    return bundle


def recipe_gromov_witness(outdir: Path, n: int = 4, **_) -> ReportBundle:
    bundle = ReportBundle(outdir)
    rows = []
    for k in range(0, n + 1):
        w = tower_witness(k)
        rows.append(
            [k, w.word_length, len(str(w.target_exponent)), str(w.verified).lower(), " ".join(w.letters)]
        )
        bundle.check(f"witness n={k} verified", w.verified)
        bundle.check(
            f"witness n={k} length == 4n+2",
            w.word_length == 4 * k + 2,
            f"length {w.word_length}",
        )
        bundle.check(
            f"witness n={k} target == 2^(2^n)",
            w.target_exponent == 2 ** (2**k),
            f"{len(str(w.target_exponent))} digits",
        )
    bundle.add_csv(
        "witness.csv", ["n", "word_length", "exponent_digits", "verified", "word"], rows
    )
    bundle.add_json(
        "report.json",
        report.stamp(claim=CLAIMS["gromov-witness"], payload={"witnesses": [tower_witness(k).summary() for k in range(0, n + 1)]}),
    )
    bundle.add_figure(
        "witness.png",
        [("digits of target exponent", [(4 * k + 2, len(str(2 ** (2**k)))) for k in range(0, n + 1)])],
        "Doubly exponential subgroup element reached per word length",
        xlabel="witness word length",
        ylabel="decimal digits",
        logy=True,
    )
    bundle.write_summary("gromov-witness", claim=CLAIMS["gromov-witness"])
    return bundle


def recipe_ends_survey(outdir: Path, **_) -> ReportBundle:
    bundle = ReportBundle(outdir)
    header = ["pair", "r", "estimate", "radius_used", "stabilized"]
    rows = []
    payload = {}

    z2 = ZdOracle(2)
    prof = invariants.filtered_ends_profile(z2, zd_axis(z2, 0), [1, 2, 3], [6, 8, 10])
    payload["z2-axis"] = prof.to_jsonable()
    for row in prof.rows:
        rows.append(["z2-axis", row.r, row.estimate, row.radius_used, str(row.stabilized).lower()])
        bundle.check(
            f"z2-axis ends estimate 2 at r={row.r}",
            row.estimate == 2 and row.stabilized,
            f"estimate {row.estimate}",
        )

    heis = HeisenbergOracle()
    prof = invariants.filtered_ends_profile(heis, heisenberg_center(heis), [1, 2], [8, 10])
    payload["heisenberg-center"] = prof.to_jsonable()
    for row in prof.rows:
        rows.append(
            ["heisenberg-center", row.r, row.estimate, row.radius_used, str(row.stabilized).lower()]
        )
        bundle.check(
            f"heisenberg-center ends estimate 1 at r={row.r}",
            row.estimate == 1 and row.stabilized,
            f"estimate {row.estimate}",
        )

    prof = invariants.filtered_ends_profile(z2, zd_sublattice(z2, 2), [1, 2, 3], [6, 8])
    payload["z2-sublattice-2"] = prof.to_jsonable()
    for row in prof.rows:
        rows.append(
            ["z2-sublattice-2", row.r, row.estimate, row.radius_used, str(row.stabilized).lower()]
        )
    deep = next(row for row in prof.rows if row.r == 3)
    bundle.check(
        "z2-sublattice-2 ends estimate 0 at r=3 (finite index)",
        deep.estimate == 0,
        f"estimate {deep.estimate}",
    )

    f2 = FreeGroupOracle(2)
    prof = invariants.filtered_ends_profile(
        f2, cyclic_subgroup(f2, ["a"]), [1, 2], [6, 8], use_formula=False
    )
    payload["f2-axis"] = prof.to_jsonable()
    for row in prof.rows:
        rows.append(["f2-axis", row.r, row.estimate, row.radius_used, str(row.stabilized).lower()])
    bundle.check(
        "f2-axis end estimates grow with the atlas (no stabilization claim)",
        all(not row.stabilized for row in prof.rows),
        "; ".join(f"r={row.r}: {row.history}" for row in prof.rows),
    )

    bundle.add_csv("survey.csv", header, rows)
    bundle.add_json("report.json", report.stamp(claim=CLAIMS["ends-survey"], payload={"pairs": payload}))
    series = []
    for pair in ("z2-axis", "heisenberg-center", "z2-sublattice-2"):
        series.append(
            (pair, [(row["r"], row["estimate"]) for row in payload[pair]["rows"]])
        )
    bundle.add_figure(
        "survey.png",
        series,
        "Filtered-end estimates at the largest atlas",
        ylabel="deep component estimate",
    )
    bundle.write_summary("ends-survey", claim=CLAIMS["ends-survey"])
    return bundle


RECIPES = {
    "z2-axis": recipe_z2_axis,
    "heisenberg-distortion": recipe_heisenberg_distortion,
    "heisenberg-divergence": recipe_heisenberg_divergence,
    "f2-axis": recipe_f2_axis,
    "pentagon-lower-div": recipe_pentagon_lower_div,
    "gromov-witness": recipe_gromov_witness,
    "ends-survey": recipe_ends_survey,
}


def run_recipe(name: str, outdir: Path, **options) -> ReportBundle:
    if name not in RECIPES:
        raise ConfigError(f"unknown recipe {name!r}; available: {', '.join(sorted(RECIPES))}")
    return RECIPES[name](Path(outdir), **options)
