"""Sample-level growth classification and the domination preorder.

Functions arrive as finite sample lists (radius, value-or-infinity).  Two
things are computed:

* ``classify``: fit log(value) against log(r) (polynomial model) and
  against r (exponential model), pick the model with the smaller residual,
  and map the slope to a growth class.  Verdicts are empirical, desk-scale
  statements about the samples, never proofs about the functions.
* ``dominates``: search a small grid of constants (A, B, C) for a witness
  to ``f(x) <= g(A*x) + B*x for all x > C`` over the samples.  A witness is
  only accepted when every f-sample beyond the cutoff is checkable (A*x
  within g's sampled range) and at least three samples remain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ConfigError

Value = Optional[float]  # None encodes infinity

DEFAULT_MARGIN = 0.05
DEFAULT_GRID_A = (1, 2, 3, 4, 6, 8)
DEFAULT_GRID_B = (0, 1, 2, 4, 8)
MIN_TAIL_SAMPLES = 3
MIN_FIT_SAMPLES = 4


@dataclass(frozen=True)
class SampledFunction:
    label: str
    samples: tuple[tuple[int, Value], ...]
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        radii = [r for r, _ in self.samples]
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ConfigError("sample radii must be strictly increasing")
        for _, v in self.samples:
            if v is not None and v < 0:
                raise ConfigError("sample values must be nonnegative")

    @classmethod
    def from_pairs(cls, label: str, pairs, provenance: Optional[dict] = None):
        return cls(label, tuple((int(r), None if v is None else float(v)) for r, v in pairs),
                   provenance or {})

    def finite(self) -> list[tuple[int, float]]:
        return [(r, v) for r, v in self.samples if v is not None]

    def infinite_count(self) -> int:
        return sum(1 for _, v in self.samples if v is None)

    def value_at(self, r: int) -> Value:
        for rr, v in self.samples:
            if rr == r:
                return v
        raise KeyError(f"no sample at radius {r}")


@dataclass
class Fit:
    slope: float
    intercept: float
    residual: float  # root mean square of log-residuals
    stderr: float    # standard error of the slope

    def to_jsonable(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "stderr": self.stderr,
        }


def _linfit(xs: Sequence[float], ys: Sequence[float]) -> Fit:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return Fit(0.0, my, 0.0, math.inf)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    ssr = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    rms = math.sqrt(ssr / n)
    stderr = math.sqrt(ssr / (n - 2) / sxx) if n > 2 else math.inf
    return Fit(slope, intercept, rms, stderr)


@dataclass
class GrowthClassReport:
    label: str
    growth_class: str  # bounded | linear | polynomial | exponential | infinite | indeterminate
    degree: Optional[int] = None
    degree_estimate: Optional[float] = None
    degree_interval: Optional[tuple[float, float]] = None
    loglog: Optional[Fit] = None
    semilog: Optional[Fit] = None
    leaning: Optional[str] = None
    finite_samples: int = 0
    infinite_samples: int = 0
    margin: float = DEFAULT_MARGIN
    note: str = ""

    def to_jsonable(self) -> dict:
        return {
            "label": self.label,
            "class": self.growth_class,
            "degree": self.degree,
            "degree_estimate": self.degree_estimate,
            "degree_interval": list(self.degree_interval) if self.degree_interval else None,
            "loglog_fit": self.loglog.to_jsonable() if self.loglog else None,
            "semilog_fit": self.semilog.to_jsonable() if self.semilog else None,
            "leaning": self.leaning,
            "finite_samples": self.finite_samples,
            "infinite_samples": self.infinite_samples,
            "margin": self.margin,
            "note": self.note,
            "semantics": "empirical, desk-scale",
        }


def _slope_class(slope: float) -> str:
    if slope < 0.5:
        return "bounded"
    if slope < 1.5:
        return "linear"
    return "polynomial"


def classify(f: SampledFunction, margin: float = DEFAULT_MARGIN) -> GrowthClassReport:
    """Growth class of a sampled profile; see the module docstring.

    Fewer than four finite samples refuse a verdict (class indeterminate)
    but still report the better-fitting model as ``leaning`` when at least
    three samples allow a fit.  Comparable residuals (within ``margin``)
    also yield indeterminate, with the leaning set by the smaller residual
    and ties preferring the polynomial model.
    """
    finite = f.finite()
    report = GrowthClassReport(
        label=f.label,
        growth_class="indeterminate",
        finite_samples=len(finite),
        infinite_samples=f.infinite_count(),
        margin=margin,
    )
    if finite and report.infinite_samples:
        report.note = f"{report.infinite_samples} infinite sample(s) excluded from fits"
    if not finite:
        if report.infinite_samples:
            report.growth_class = "infinite"
            report.note = "all samples infinite"
        else:
            report.note = "no samples"
        return report
    usable = [(r, v) for r, v in finite if r >= 1 and v >= 1]
    if len(usable) < 3:
        report.note = (report.note + "; " if report.note else "") + (
            "not enough positive samples to fit"
        )
        return report
    values = [v for _, v in usable]
    if max(values) <= 1.5 * min(values):
        # essentially flat; both models would fit with near-zero slope
        report.degree_estimate = 0.0
        report.degree = 0
        if len(finite) >= MIN_FIT_SAMPLES:
            report.growth_class = "bounded"
        else:
            report.leaning = "bounded"
            report.note = (report.note + "; " if report.note else "") + (
                f"only {len(finite)} finite samples; verdict withheld"
            )
        return report
    xs_log = [math.log(r) for r, _ in usable]
    xs_lin = [float(r) for r, _ in usable]
    ys = [math.log(v) for _, v in usable]
    loglog = _linfit(xs_log, ys)
    semilog = _linfit(xs_lin, ys)
    report.loglog = loglog
    report.semilog = semilog
    poly_wins = loglog.residual <= semilog.residual
    verdict = _slope_class(loglog.slope) if poly_wins else "exponential"
    report.degree_estimate = loglog.slope
    report.degree = round(loglog.slope)
    if math.isfinite(loglog.stderr):
        report.degree_interval = (
            loglog.slope - 2 * loglog.stderr,
            loglog.slope + 2 * loglog.stderr,
        )
    if len(finite) < MIN_FIT_SAMPLES:
        report.leaning = verdict
        report.note = (report.note + "; " if report.note else "") + (
            f"only {len(finite)} finite samples; verdict withheld"
        )
        return report
    if abs(loglog.residual - semilog.residual) <= margin:
        report.leaning = verdict
        report.note = (report.note + "; " if report.note else "") + (
            "model residuals within margin; verdict withheld"
        )
        return report
    report.growth_class = verdict
    return report


# ---------------------------------------------------------------------------
# domination


@dataclass
class DominationReport:
    f_label: str
    g_label: str
    holds: Optional[bool]  # None: insufficient overlap on the whole grid
    witness: Optional[tuple[int, int, int]] = None  # (A, B, C)
    checked: int = 0
    note: str = ""

    def to_jsonable(self) -> dict:
        return {
            "f": self.f_label,
            "g": self.g_label,
            "holds": self.holds,
            "witness": None if self.witness is None else
            {"A": self.witness[0], "B": self.witness[1], "C": self.witness[2]},
            "checked": self.checked,
            "note": self.note,
        }


def _value_at_or_after(g: SampledFunction, t: float) -> tuple[bool, Value]:
    """(known, value) of g at the smallest sampled radius >= t."""
    for r, v in g.samples:
        if r >= t:
            return True, v
    return False, None


def dominates(
    f: SampledFunction,
    g: SampledFunction,
    grid_a: Sequence[int] = DEFAULT_GRID_A,
    grid_b: Sequence[int] = DEFAULT_GRID_B,
) -> DominationReport:
    """Sample-level check of ``f(x) <= g(A*x) + B*x for all x > C``.

    g is evaluated at the next sampled radius at or beyond A*x; a cutoff C
    is accepted only when every f-sample beyond it is checkable that way
    and at least three remain.  ``holds=None`` means no grid combination
    had enough checkable tail samples.
    """
    report = DominationReport(f.label, g.label, None)
    cutoffs = [0] + [r for r, _ in f.samples]
    any_sufficient = False
    for a in grid_a:
        for b in grid_b:
            for c in cutoffs:
                tail = [(r, v) for r, v in f.samples if r > c]
                if len(tail) < MIN_TAIL_SAMPLES:
                    continue
                checkable = True
                satisfied = True
                for r, v in tail:
                    known, gv = _value_at_or_after(g, a * r)
                    if not known:
                        checkable = False
                        break
                    report.checked += 1
                    if gv is None:
                        continue  # g infinite there; inequality free
                    if v is None or v > gv + b * r:
                        satisfied = False
                if not checkable:
                    continue
                any_sufficient = True
                if satisfied:
                    report.holds = True
                    report.witness = (a, b, c)
                    return report
    report.holds = False if any_sufficient else None
    if report.holds is None:
        report.note = "insufficient sample overlap for every grid combination"
    return report


def family_domination_matrix(
    f_family: dict[tuple, SampledFunction],
    g_family: dict[tuple, SampledFunction],
    grid_a: Sequence[int] = DEFAULT_GRID_A,
    grid_b: Sequence[int] = DEFAULT_GRID_B,
) -> list[dict]:
    """Domination verdicts at matched parameter keys of two sample families.

    The full two-parameter reindexing quantifier of the underlying preorder
    is not searchable at desk scale; this reports the matrix of pointwise
    verdicts at shared (rho, n) keys instead.
    """
    out = []
    for key in sorted(set(f_family) & set(g_family), key=str):
        rep = dominates(f_family[key], g_family[key], grid_a, grid_b)
        entry = {"key": list(map(str, key)), "report": rep.to_jsonable()}
        out.append(entry)
    return out
