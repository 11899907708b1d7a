"""Relative divergence samples over annotated ball atlases.

For a pair (G, H) and a separation level s, the complement metric d_s is
the path metric induced on {x : d_S(x, H) >= s}.  The two divergence
samples at parameters (rho, n, r) measure how expensive travel far from H
is, at level ceil(rho * r), between points of the boundary
{x : d_S(x, H) = r}:

* upper (delta): the supremum of d_level(x, y) over boundary pairs with
  d_S(x, y) <= n*r that are connected at level r,
* lower (sigma): the infimum over boundary pairs with d_S(x, y) >= n*r
  that are connected at level r, infinity when no such pair exists.

Pair enumeration uses coset reduction: left translation by a subgroup
element preserves word distance, distance to H, and every level set, so the
first point may be fixed on the sphere-r anchor set {|x| = r, d(x,H) = r}
without loss of generality.

Desk-scale semantics, stated on every sample: values computed on an atlas
restrict paths and candidate pairs to the enumerated region, so an upper
sample is a lower bound for the true supremum and a lower sample an upper
bound for the true infimum.  The ``interior_certified`` flag marks numbers
that are provably exact distances for their witness pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import bfsutil
from .atlas import (
    AnnotatedBall,
    BallIndex,
    anchor_boundary_ids,
    annotate_subgroup_distance,
    boundary_set,
    enumerate_ball,
)
from .errors import ConfigError, NeedsLargerRadiusError
from .groups import Element, GroupOracle
from .subgroups import SubgroupSpec

DEFAULT_PAIR_BUDGET = 500_000

FLAG_CERTIFIED = "interior_certified"
FLAG_FRONTIER = "frontier_limited"


def ceil_fraction_times(rho: Fraction, r: int) -> int:
    return -((-rho.numerator * r) // rho.denominator)


@dataclass(frozen=True)
class DivergenceParams:
    rho: Fraction
    n: int
    r: int

    def __post_init__(self):
        if not 0 < self.rho <= 1:
            raise ConfigError("rho must lie in (0, 1]")
        if self.n < 2:
            raise ConfigError("n must be at least 2")
        if self.r < 1:
            raise ConfigError("r must be positive")

    @property
    def level(self) -> int:
        return ceil_fraction_times(self.rho, self.r)


@dataclass
class DivergenceSample:
    kind: str  # upper | lower | axis
    r: int
    value: Optional[int]  # None means infinity
    pair_count: int
    flag: str
    rho: Optional[Fraction] = None
    n: Optional[int] = None
    level: Optional[int] = None
    pruned: bool = False
    witness_x: Optional[Element] = None
    witness_y: Optional[Element] = None
    witness_path: Optional[list[Element]] = None
    note: str = ""

    @property
    def value_text(self) -> str:
        return "inf" if self.value is None else str(self.value)

    def witness_text(self, oracle: GroupOracle) -> str:
        if self.witness_x is None or self.witness_y is None:
            return ""
        return (
            f"x={oracle.format_element(self.witness_x)} "
            f"y={oracle.format_element(self.witness_y)}"
        )

    def to_jsonable(self, oracle: GroupOracle) -> dict:
        return {
            "kind": self.kind,
            "r": self.r,
            "rho": None if self.rho is None else str(self.rho),
            "n": self.n,
            "level": self.level,
            "value": "inf" if self.value is None else self.value,
            "pair_count": self.pair_count,
            "flag": self.flag,
            "pruned": self.pruned,
            "witness_x": None
            if self.witness_x is None
            else oracle.element_jsonable(self.witness_x),
            "witness_y": None
            if self.witness_y is None
            else oracle.element_jsonable(self.witness_y),
            "witness_path": None
            if self.witness_path is None
            else [oracle.element_jsonable(g) for g in self.witness_path],
            "note": self.note,
        }


# ---------------------------------------------------------------------------
# complement metric


def complement_distance(
    aball: AnnotatedBall, s: int, x: Element, y: Element
) -> tuple[Optional[int], str]:
    """d_s(x, y) within the atlas, with a certification flag.

    Finite values are certified exact when value <= R - max(|x|, |y|): any
    path escaping the atlas would need at least (R+1-|x|) + (R+1-|y|) steps,
    which is strictly longer.  An infinite value is certified when either
    endpoint's component stays off the atlas frontier, hence is a complete
    component of the true complement graph.
    """
    if not 1 <= s <= aball.valid_core:
        raise NeedsLargerRadiusError(
            f"complement level {s} needs valid core >= {s}, have {aball.valid_core}"
        )
    xid, yid = aball.id_of(x), aball.id_of(y)
    if xid is None or yid is None:
        raise ConfigError("complement distance endpoints must lie in the atlas")
    if aball.dist_to_H[xid] < s or aball.dist_to_H[yid] < s:
        raise ConfigError(f"complement distance endpoints must have d(., H) >= {s}")
    labeling = aball.components_at(s)
    if not labeling.same_component(xid, yid):
        cx = labeling.component_of(xid)
        cy = labeling.component_of(yid)
        certified = not (
            labeling.touches_frontier[cx] and labeling.touches_frontier[cy]
        )
        return None, FLAG_CERTIFIED if certified else FLAG_FRONTIER
    mask = aball.dist_to_H >= s
    target = np.zeros(len(aball.ball), dtype=bool)
    target[yid] = True
    dist = bfsutil.targeted_bfs(aball.neighbors, mask, xid, target, stop_first=True)
    value = int(dist[yid])
    wl = aball.word_length
    certified = value <= aball.radius - max(int(wl[xid]), int(wl[yid]))
    return value, FLAG_CERTIFIED if certified else FLAG_FRONTIER


def _ambient_distance(
    aball: AnnotatedBall, inv_x: Element, y: Element
) -> Optional[int]:
    """d_S(x, y) via the difference element; None means > atlas radius."""
    diff = aball.oracle.multiply(inv_x, y)
    d = aball.oracle.exact_word_length(diff)
    if d is not None:
        return d
    did = aball.id_of(diff)
    return None if did is None else int(aball.word_length[did])


def _witness_path(
    aball: AnnotatedBall, mask: np.ndarray, xid: int, yid: int
) -> list[Element]:
    dist, parent = bfsutil.bfs_parents(aball.neighbors, mask, xid)
    if dist[yid] < 0:
        raise ConfigError("witness path reconstruction failed")
    return [aball.elements[i] for i in bfsutil.extract_path(parent, yid)]


# ---------------------------------------------------------------------------
# upper and lower samples


def upper_divergence_sample(
    aball: AnnotatedBall,
    params: DivergenceParams,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> DivergenceSample:
    """Max complement distance at level ceil(rho*r) over nearby boundary pairs.

    Requires valid core >= r + n*r so that every admissible second point
    (within d_S <= n*r of an anchor) lies inside the certified core; the
    in-core pair enumeration is then complete and the sample is the exact
    supremum over the atlas region.
    """
    r, n, level = params.r, params.n, params.level
    need = r + n * r
    if aball.valid_core < need:
        raise NeedsLargerRadiusError(
            f"upper divergence at r={r}, n={n} needs valid core >= {need}, "
            f"have {aball.valid_core}"
        )
    oracle = aball.oracle
    anchors = anchor_boundary_ids(aball, r)
    boundary = boundary_set(aball, r)
    sample = DivergenceSample(
        kind="upper", r=r, value=0, pair_count=0, flag=FLAG_CERTIFIED,
        rho=params.rho, n=n, level=level,
    )
    if anchors.size == 0:
        sample.note = "empty boundary; sup over empty pair set is 0"
        return sample
    labeling = aball.components_at(r)
    labels = labeling.labels
    mask_level = aball.dist_to_H >= level
    wl = aball.word_length
    best = -1
    best_pair: Optional[tuple[int, int]] = None
    all_certified = True
    budget_left = pair_budget
    for xid in anchors.tolist():
        if budget_left <= 0:
            sample.pruned = True
            break
        inv_x = oracle.inverse(aball.elements[xid])
        ys = []
        for yid in boundary.tolist():
            if labels[yid] != labels[xid]:
                continue
            d_s = _ambient_distance(aball, inv_x, aball.elements[yid])
            if d_s is None or d_s > n * r:
                continue
            ys.append(yid)
            if len(ys) >= budget_left:
                sample.pruned = True
                break
        budget_left -= len(ys)
        if not ys:
            continue
        target = np.zeros(len(aball.ball), dtype=bool)
        target[ys] = True
        dist = bfsutil.targeted_bfs(aball.neighbors, mask_level, xid, target)
        for yid in ys:
            value = int(dist[yid])
            if value < 0:
                raise ConfigError(
                    "pair connected at level r must be connected at the "
                    "cheaper level; atlas annotation is inconsistent"
                )
            sample.pair_count += 1
            if value > aball.radius - max(int(wl[xid]), int(wl[yid])):
                all_certified = False
            if value > best:
                best = value
                best_pair = (xid, yid)
    if best_pair is None:
        sample.note = "no connected pair within d_S <= n*r; sup over empty set is 0"
        return sample
    sample.value = best
    sample.flag = FLAG_CERTIFIED if all_certified else FLAG_FRONTIER
    xid, yid = best_pair
    sample.witness_x = aball.elements[xid]
    sample.witness_y = aball.elements[yid]
    sample.witness_path = _witness_path(aball, mask_level, xid, yid)
    if sample.pruned:
        sample.note = "pair budget hit; value is a lower bound for the atlas supremum"
    return sample


def lower_divergence_sample(
    aball: AnnotatedBall,
    params: DivergenceParams,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> DivergenceSample:
    """Min complement distance at level ceil(rho*r) over far boundary pairs.

    The second point runs over the boundary inside the certified core, so
    the result is an upper bound for the true infimum (restricting pairs
    and truncating paths both bias upward); infinity when no connected
    qualifying pair exists in the core.
    """
    r, n, level = params.r, params.n, params.level
    if aball.valid_core < r:
        raise NeedsLargerRadiusError(
            f"lower divergence at r={r} needs valid core >= {r}, have {aball.valid_core}"
        )
    oracle = aball.oracle
    anchors = anchor_boundary_ids(aball, r)
    boundary = boundary_set(aball, r)
    sample = DivergenceSample(
        kind="lower", r=r, value=None, pair_count=0, flag=FLAG_FRONTIER,
        rho=params.rho, n=n, level=level,
    )
    if aball.valid_core < r + n * r:
        sample.note = (
            f"second point capped by valid core {aball.valid_core} < r+n*r={r + n * r}; "
            "upper-bound semantics"
        )
    labeling = aball.components_at(r)
    labels = labeling.labels
    mask_level = aball.dist_to_H >= level
    wl = aball.word_length
    best: Optional[int] = None
    best_pair: Optional[tuple[int, int]] = None
    budget_left = pair_budget
    for xid in anchors.tolist():
        if budget_left <= 0:
            sample.pruned = True
            break
        inv_x = oracle.inverse(aball.elements[xid])
        ys = []
        for yid in boundary.tolist():
            if labels[yid] != labels[xid]:
                continue
            d_s = _ambient_distance(aball, inv_x, aball.elements[yid])
            if d_s is not None and d_s < n * r:
                continue
            # d_s None means d_S > atlas radius >= n*r: qualifies
            ys.append(yid)
            if len(ys) >= budget_left:
                sample.pruned = True
                break
        budget_left -= len(ys)
        sample.pair_count += len(ys)
        if not ys:
            continue
        target = np.zeros(len(aball.ball), dtype=bool)
        target[ys] = True
        cap = None if best is None else best - 1
        dist = bfsutil.targeted_bfs(
            aball.neighbors, mask_level, xid, target, stop_first=True, depth_cap=cap
        )
        settled = [yid for yid in ys if dist[yid] >= 0]
        if not settled:
            continue
        value = min(int(dist[yid]) for yid in settled)
        yid = min(yid for yid in settled if dist[yid] == value)
        if best is None or value < best:
            best = value
            best_pair = (xid, yid)
    if best_pair is None:
        sample.note = (sample.note + "; " if sample.note else "") + (
            "no qualifying connected pair in the core; infimum of the empty set"
        )
        return sample
    sample.value = best
    xid, yid = best_pair
    certified = best <= aball.radius - max(int(wl[xid]), int(wl[yid]))
    sample.flag = FLAG_CERTIFIED if certified else FLAG_FRONTIER
    sample.witness_x = aball.elements[xid]
    sample.witness_y = aball.elements[yid]
    sample.witness_path = _witness_path(aball, mask_level, xid, yid)
    return sample


# ---------------------------------------------------------------------------
# axis divergence


def axis_divergence(
    ball: BallIndex | AnnotatedBall,
    word: list[str],
    r: int,
    max_power: int = 1_000_000,
) -> DivergenceSample:
    """Detour cost around B(e, r) between opposite points of a generator axis.

    Endpoints are h^m and h^-m for the smallest m with |h^m|_S >= r; paths
    run in {|x|_S >= r}.  Upper-bound semantics as for lower divergence.
    """
    bi = ball.ball if isinstance(ball, AnnotatedBall) else ball
    oracle = bi.oracle
    if len(word) != 1:
        raise ConfigError("axis divergence is defined for a single generator")
    if r < 1:
        raise ConfigError("axis divergence radius must be positive")
    if bi.radius < 3 * r:
        raise NeedsLargerRadiusError(
            f"axis divergence at r={r} wants atlas radius >= {3 * r}, have {bi.radius}"
        )
    h = oracle.word_to_element(word)
    g = h
    m = 1
    while True:
        if g == oracle.identity:
            raise ConfigError("axis generator has finite order; no axis")
        gid = bi.id_of(g)
        length = bi.word_length[gid] if gid is not None else None
        if length is None:
            raise NeedsLargerRadiusError(
                f"axis power {m} leaves the atlas before clearing radius {r}"
            )
        if length >= r:
            break
        g = oracle.multiply(g, h)
        m += 1
        if m > max_power:
            raise ConfigError("axis power search exceeded its cap")
    p, q = g, oracle.inverse(g)
    pid, qid = bi.id_of(p), bi.id_of(q)
    if pid is None or qid is None:
        raise NeedsLargerRadiusError("axis endpoints must lie in the atlas")
    mask = bi.word_length >= r
    target = np.zeros(len(bi), dtype=bool)
    target[qid] = True
    dist = bfsutil.targeted_bfs(bi.neighbors, mask, pid, target, stop_first=True)
    sample = DivergenceSample(kind="axis", r=r, value=None, pair_count=1, flag=FLAG_FRONTIER)
    sample.witness_x, sample.witness_y = p, q
    value = int(dist[qid])
    if value < 0:
        sample.note = f"axis endpoints h^{m}, h^-{m} disconnected in the atlas complement"
        return sample
    sample.value = value
    wl_end = max(int(bi.word_length[pid]), int(bi.word_length[qid]))
    sample.flag = FLAG_CERTIFIED if value <= bi.radius - wl_end else FLAG_FRONTIER
    full_dist, parent = bfsutil.bfs_parents(bi.neighbors, mask, pid)
    if full_dist[qid] >= 0:
        sample.witness_path = [bi.elements[i] for i in bfsutil.extract_path(parent, qid)]
    return sample


# ---------------------------------------------------------------------------
# profiles


def required_radius(
    kind: str, r_list: list[int], n: Optional[int], has_formula: bool
) -> int:
    """Atlas radius that satisfies every sample's core precondition."""
    if not r_list:
        return 0
    r_max = max(r_list)
    if kind == "axis":
        return 3 * r_max
    if kind in ("upper", "lower"):
        if n is None:
            raise ConfigError("upper/lower divergence needs n")
        core = r_max + n * r_max
        return core if has_formula else 2 * core
    raise ConfigError(f"unknown divergence kind {kind!r}")


def divergence_profile(
    oracle: GroupOracle,
    spec: SubgroupSpec,
    kind: str,
    r_list: list[int],
    rho: Optional[Fraction] = None,
    n: Optional[int] = None,
    radius: Optional[int] = None,
    aball: Optional[AnnotatedBall] = None,
    use_formula: bool = True,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    budget_elements: int = 10_000_000,
) -> list[DivergenceSample]:
    """One sample per radius in ``r_list``, sharing a single atlas."""
    if not r_list:
        return []
    if kind == "axis":
        if not spec.generating_words:
            raise ConfigError("axis divergence needs a cyclic subgroup word")
        word = spec.generating_words[0]
        if aball is None:
            R = radius if radius is not None else required_radius(kind, r_list, n, True)
            ball = enumerate_ball(oracle, R, budget_elements=budget_elements)
        else:
            ball = aball.ball
        return [axis_divergence(ball, word, r) for r in sorted(r_list)]
    if rho is None or n is None:
        raise ConfigError("upper/lower divergence needs rho and n")
    if aball is None:
        has_formula = use_formula and spec.exact_distance is not None
        R = radius if radius is not None else required_radius(kind, r_list, n, has_formula)
        ball = enumerate_ball(oracle, R, budget_elements=budget_elements)
        aball = annotate_subgroup_distance(ball, spec, use_formula=use_formula)
    out = []
    for r in sorted(r_list):
        params = DivergenceParams(rho, n, r)
        if kind == "upper":
            out.append(upper_divergence_sample(aball, params, pair_budget))
        else:
            out.append(lower_divergence_sample(aball, params, pair_budget))
    return out
