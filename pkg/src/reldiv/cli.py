"""Command-line entry point.

Exit codes: 0 all checks pass, 2 a check failed, 3 budget or feasibility
limit hit, 4 configuration error.  ``--threads`` is accepted everywhere for
interface stability but computations are single-threaded by design, so
outputs never depend on it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__, invariants, report
from .asymptotics import SampledFunction, classify
from .atlas import annotate_subgroup_distance, enumerate_ball, load_ball, save_ball
from .configio import load_group, load_pair
from .divergence import divergence_profile, required_radius
from .errors import (
    AtlasFormatError,
    BudgetExceededError,
    ConfigError,
    NeedsLargerRadiusError,
    RewriteError,
)
from .recipes import RECIPES, run_recipe
from .rewrite import SHIPPED_SYSTEMS, parse_rules_text, read_rules, shipped_rules_text
from .subgroups import trivial_subgroup

EXIT_OK = 0
EXIT_CHECK = 2
EXIT_BUDGET = 3
EXIT_CONFIG = 4

CACHE_ENV = "RELDIV_ATLAS_CACHE"


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the config-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def parse_radii(text: str) -> list[int]:
    """Accept ``a..b`` (inclusive), a comma list, or a single integer."""
    text = text.strip()
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ConfigError(f"radii range {text!r} is empty")
            return list(range(lo, hi + 1))
        if "," in text:
            return [int(p) for p in text.split(",") if p.strip()]
        return [int(text)]
    except ValueError:
        raise ConfigError(f"cannot parse radii {text!r}; expected a..b, a,b,c, or a") from None


def parse_rho(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse rho {text!r}; expected P/Q") from None


def _cache_dir(args) -> Optional[Path]:
    if getattr(args, "atlas_cache", None):
        return Path(args.atlas_cache)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _obtain_atlas(args, oracle, spec, needed_radius: int, use_formula: bool = True):
    """Load, or build (optionally through the cache directory), an annotated atlas.

    An explicitly supplied ``--atlas`` file must already be large enough;
    the required radius is part of the error message otherwise.
    """
    if getattr(args, "atlas", None):
        aball = load_ball(args.atlas, oracle, spec)
        if aball.radius < needed_radius:
            raise NeedsLargerRadiusError(
                f"{args.atlas}: atlas radius {aball.radius} is too small; "
                f"this computation needs radius >= {needed_radius}"
            )
        return aball
    cache = _cache_dir(args)
    budget = getattr(args, "budget_elems", None) or 10_000_000
    if cache is not None:
        mode = "f" if use_formula else "b"
        key = cache / f"{spec.digest[:16]}-R{needed_radius}-{mode}.atlas"
        if key.exists():
            return load_ball(key, oracle, spec)
        ball = enumerate_ball(oracle, needed_radius, budget_elements=budget)
        aball = annotate_subgroup_distance(ball, spec, use_formula=use_formula)
        cache.mkdir(parents=True, exist_ok=True)
        save_ball(aball, key)
        return aball
    ball = enumerate_ball(oracle, needed_radius, budget_elements=budget)
    return annotate_subgroup_distance(ball, spec, use_formula=use_formula)


def _emit(args, stem: str, header, rows, payload: dict, figure=None) -> None:
    """Print CSV to stdout, or write CSV + JSON (+ figure) under ``--out``."""
    if not getattr(args, "out", None):
        import csv as _csv
        import io

        buf = io.StringIO()
        w = _csv.writer(buf, lineterminator="\n")
        w.writerow(list(header))
        for row in rows:
            w.writerow(["" if v is None else v for v in row])
        sys.stdout.write(buf.getvalue())
        return
    out = Path(args.out)
    if out.suffix == ".csv":
        report.write_csv(out, header, rows)
        return
    if out.suffix == ".json":
        report.write_json(out, payload)
        return
    report.write_csv(out / f"{stem}.csv", header, rows)
    report.write_json(out / f"{stem}.json", payload)
    if figure is not None:
        series, title, kwargs = figure
        report.render_series_figure(series, out / f"{stem}.png", title, **kwargs)


# ---------------------------------------------------------------------------
# subcommands


def cmd_atlas_build(args) -> int:
    if args.subgroup:
        oracle, spec = load_pair(args.group, args.subgroup)
    else:
        oracle = load_group(args.group)
        spec = trivial_subgroup(oracle)
    ball = enumerate_ball(oracle, args.radius, budget_elements=args.budget_elems)
    aball = annotate_subgroup_distance(ball, spec, use_formula=not args.no_formula)
    save_ball(aball, args.out)
    print(
        json.dumps(
            {
                "path": str(args.out),
                "radius": aball.radius,
                "valid_core": aball.valid_core,
                "elements": len(ball.elements),
                "group": oracle.describe(),
                "tool_version": __version__,
            },
            indent=2,
            sort_keys=True,
        )
    )
    return EXIT_OK


def cmd_rewrite_check(args) -> int:
    name_or_path = args.rules
    if name_or_path in SHIPPED_SYSTEMS and not Path(name_or_path).exists():
        rs = parse_rules_text(shipped_rules_text(name_or_path))
    else:
        rs = read_rules(name_or_path)
    rep = rs.critical_pairs(pair_budget=args.budget_pairs)
    print(
        json.dumps(
            {
                "confluent": rep.confluent,
                "pairs_checked": rep.pairs_checked,
                "unresolved": rep.unresolved,
                "budget_exhausted": rep.budget_exhausted,
                "rules": len(rs.rules),
                "tool_version": __version__,
            },
            indent=2,
            sort_keys=True,
        )
    )
    if rep.confluent is True:
        return EXIT_OK
    if rep.confluent is False:
        return EXIT_CHECK
    return EXIT_BUDGET


def cmd_invariants(args) -> int:
    radii = parse_radii(args.radii)
    if not radii or min(radii) < 0:
        raise ConfigError("radii must be nonnegative")
    oracle, spec = load_pair(args.group, args.subgroup)
    use_formula = not args.no_formula
    rmax = max(radii)

    if args.what == "distortion":
        aball = _obtain_atlas(args, oracle, spec, rmax, use_formula)
        table = invariants.distortion_table(aball, radii)
        header, rows = report.distortion_rows(table, oracle)
        payload = report.stamp(
            table.to_jsonable(oracle), group=oracle.describe(), digest=spec.digest
        )
        figure = (
            [
                ("Dist", [(row.r, row.upper) for row in table.rows]),
                ("dist", [(row.r, row.lower) for row in table.rows]),
            ],
            "Subgroup distortion",
            {"ylabel": "intrinsic length"},
        )
        _emit(args, "distortion", header, rows, payload, figure)
        return EXIT_OK

    if args.what == "growth":
        aball = _obtain_atlas(args, oracle, spec, rmax, use_formula)
        gp = invariants.growth_profile(aball, radii)
        header, rows = report.growth_rows(gp)
        payload = report.stamp(
            {"growth": [{"r": r, "ball": c} for r, c in gp]},
            group=oracle.describe(),
            digest=spec.digest,
        )
        figure = (
            [("ball size", gp)],
            "Ball growth",
            {"ylabel": "elements", "logy": True},
        )
        _emit(args, "growth", header, rows, payload, figure)
        return EXIT_OK

    if args.what == "ends":
        if args.atlas:
            aball = load_ball(args.atlas, oracle, spec)
            radius_list = [aball.radius]
        else:
            base = 2 * rmax + 2
            radius_list = [base, base + 2]
        profile = invariants.filtered_ends_profile(
            oracle, spec, radii, radius_list, use_formula=use_formula
        )
        header, rows = report.ends_rows(profile)
        payload = report.stamp(
            profile.to_jsonable(), group=oracle.describe(), digest=spec.digest
        )
        figure = (
            [("deep components", [(row.r, row.estimate) for row in profile.rows])],
            "Filtered-end estimate",
            {"ylabel": "count"},
        )
        _emit(args, "ends", header, rows, payload, figure)
        return EXIT_OK

    # ray: the prefix length is the largest requested radius
    length = rmax
    needed = length if (use_formula and spec.exact_distance is not None) else 2 * length
    aball = _obtain_atlas(args, oracle, spec, needed, use_formula)
    ids = invariants.perpendicular_ray_prefix(aball, length)
    header, rows = report.ray_rows(aball, ids)
    payload = report.stamp(
        {
            "ray": [
                {
                    "step": i,
                    "element": oracle.format_element(aball.elements[g]),
                    "dist_to_H": int(aball.dist_to_H[g]),
                }
                for i, g in enumerate(ids)
            ]
        },
        group=oracle.describe(),
        digest=spec.digest,
    )
    figure = (
        [("dist to H", [(i, int(aball.dist_to_H[g])) for i, g in enumerate(ids)])],
        "Perpendicular ray distance profile",
        {"xlabel": "step", "ylabel": "dist"},
    )
    _emit(args, "ray", header, rows, payload, figure)
    return EXIT_OK


def cmd_divergence(args) -> int:
    radii = parse_radii(args.radii)
    if not radii or min(radii) < 1:
        raise ConfigError("divergence radii must be >= 1")
    oracle, spec = load_pair(args.group, args.subgroup)
    use_formula = not args.no_formula
    rho = parse_rho(args.rho) if args.rho else None
    kind = args.kind
    has_formula = use_formula and spec.exact_distance is not None
    needed = required_radius(kind, radii, args.n, has_formula)
    aball = _obtain_atlas(args, oracle, spec, needed, use_formula)
    samples = divergence_profile(
        oracle,
        spec,
        kind,
        radii,
        rho=rho,
        n=args.n,
        aball=aball,
        use_formula=use_formula,
        pair_budget=args.budget_pairs,
    )
    header, rows = report.divergence_rows(samples, oracle)
    payload = report.stamp(
        {"kind": kind, "samples": [s.to_jsonable(oracle) for s in samples]},
        group=oracle.describe(),
        digest=spec.digest,
    )
    figure = (
        [(kind, [(s.r, s.value) for s in samples])],
        f"Relative divergence ({kind})",
        {"ylabel": "complement distance"},
    )
    _emit(args, f"divergence_{kind}", header, rows, payload, figure)
    return EXIT_OK


def cmd_classify(args) -> int:
    import csv as _csv

    pairs = []
    with open(args.csv, newline="") as fh:
        reader = _csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ConfigError(f"{args.csv}: empty file")
        try:
            xi, yi = header.index(args.x), header.index(args.y)
        except ValueError:
            raise ConfigError(
                f"{args.csv}: need columns {args.x!r} and {args.y!r}, have {header}"
            ) from None
        for row in reader:
            if not row:
                continue
            y = row[yi].strip().lower()
            pairs.append((int(row[xi]), None if y in ("inf", "infinity", "") else float(row[yi])))
    rep = classify(SampledFunction.from_pairs(args.label, pairs))
    print(json.dumps(report.stamp(rep.to_jsonable()), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_plot_data(args) -> int:
    note = report.emit_plot_data(args.csv, args.out, x_column=args.x, y_column=args.y)
    print(json.dumps(note.to_jsonable(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_run(args) -> int:
    outdir = Path(args.out) if args.out else Path("reports") / args.name
    options = {
        "pair_budget": args.budget_pairs,
        "budget_elements": args.budget_elems,
    }
    if args.name == "gromov-witness":
        options["n"] = args.n
    bundle = run_recipe(args.name, outdir, **options)
    sys.stdout.write((outdir / "summary.txt").read_text())
    return EXIT_OK if bundle.ok else EXIT_CHECK


# ---------------------------------------------------------------------------
# parser assembly


def _add_common(p: argparse.ArgumentParser, *, pair: bool, atlas: bool = True) -> None:
    p.add_argument("--group", required=True, help="group config file")
    if pair:
        p.add_argument("--subgroup", required=True, help="subgroup config file")
    if atlas:
        p.add_argument("--atlas", help="pre-built atlas file (must be large enough)")
        p.add_argument("--atlas-cache", help=f"atlas cache directory (or ${CACHE_ENV})")
    p.add_argument("--no-formula", action="store_true", help="annotate by BFS even if a distance formula exists")
    p.add_argument("--budget-elems", type=int, default=10_000_000, help="element budget for ball enumeration")
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; computations are single-threaded")


def build_parser() -> _Parser:
    parser = _Parser(prog="reldiv", description=__doc__)
    parser.add_argument("--version", action="version", version=f"reldiv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_atlas = sub.add_parser("atlas", help="atlas cache operations")
    atlas_sub = p_atlas.add_subparsers(dest="atlas_command", required=True)
    p_build = atlas_sub.add_parser("build", help="enumerate a ball and write an atlas file")
    p_build.add_argument("--group", required=True)
    p_build.add_argument("--subgroup", help="subgroup config (defaults to the trivial subgroup)")
    p_build.add_argument("--radius", type=int, required=True)
    p_build.add_argument("--out", required=True)
    p_build.add_argument("--no-formula", action="store_true")
    p_build.add_argument("--budget-elems", type=int, default=10_000_000)
    p_build.add_argument("--threads", type=int, default=1)
    p_build.set_defaults(func=cmd_atlas_build)

    p_rw = sub.add_parser("rewrite", help="rewriting-system operations")
    rw_sub = p_rw.add_subparsers(dest="rewrite_command", required=True)
    p_check = rw_sub.add_parser("check", help="critical-pair confluence check, report as JSON")
    p_check.add_argument("rules", help=f"rules file, or one of: {', '.join(sorted(SHIPPED_SYSTEMS))}")
    p_check.add_argument("--budget-pairs", type=int, default=100_000)
    p_check.add_argument("--threads", type=int, default=1)
    p_check.set_defaults(func=cmd_rewrite_check)

    p_inv = sub.add_parser("invariants", help="distortion, growth, ends, ray")
    p_inv.add_argument("what", choices=["distortion", "growth", "ends", "ray"])
    _add_common(p_inv, pair=True)
    p_inv.add_argument("--radii", required=True, help="a..b inclusive, or a comma list")
    p_inv.add_argument("--out", help="output directory, or a single .csv/.json file")
    p_inv.set_defaults(func=cmd_invariants)

    p_div = sub.add_parser("divergence", help="relative divergence profiles")
    p_div.add_argument("kind", choices=["upper", "lower", "axis"])
    _add_common(p_div, pair=True)
    p_div.add_argument("--radii", required=True)
    p_div.add_argument("--rho", help="fraction P/Q in (0, 1]")
    p_div.add_argument("--n", type=int, default=2)
    p_div.add_argument("--budget-pairs", type=int, default=500_000)
    p_div.add_argument("--out", help="output directory, or a single .csv/.json file")
    p_div.set_defaults(func=cmd_divergence)

    p_cls = sub.add_parser("classify", help="growth classification of a sampled profile")
    p_cls.add_argument("--csv", required=True)
    p_cls.add_argument("--x", default="r")
    p_cls.add_argument("--y", default="value")
    p_cls.add_argument("--label", default="profile")
    p_cls.add_argument("--threads", type=int, default=1)
    p_cls.set_defaults(func=cmd_classify)

    p_pd = sub.add_parser("plot-data", help="re-emit two CSV columns as plot data")
    p_pd.add_argument("--csv", required=True)
    p_pd.add_argument("--out", required=True)
    p_pd.add_argument("--x", default="r")
    p_pd.add_argument("--y", default="value")
    p_pd.set_defaults(func=cmd_plot_data)

    p_run = sub.add_parser("run", help="reproduction recipes with built-in checks")
    p_run.add_argument("name", choices=sorted(RECIPES))
    p_run.add_argument("--out", help="output directory (default: reports/<name>)")
    p_run.add_argument("--n", type=int, default=4, help="tower height for gromov-witness")
    p_run.add_argument("--budget-pairs", type=int, default=500_000)
    p_run.add_argument("--budget-elems", type=int, default=10_000_000)
    p_run.add_argument("--threads", type=int, default=1)
    p_run.set_defaults(func=cmd_run)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, AtlasFormatError, RewriteError) as exc:
        print(f"reldiv: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BudgetExceededError, NeedsLargerRadiusError) as exc:
        print(f"reldiv: budget/feasibility: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FileNotFoundError as exc:
        print(f"reldiv: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
