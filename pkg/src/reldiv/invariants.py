"""Distortion, growth, filtered-end estimates, perpendicular rays.

All routines run against annotated ball atlases, and every reported number
is exact on the atlas's certified region:

* word lengths are exact for every ball element,
* an element outside a radius-R atlas certainly has word length > R,
* subgroup distances are exact up to the atlas's ``valid_core``.

Upper distortion ``Dist(r)`` is the largest intrinsic length of a subgroup
element within ambient distance r of the identity; lower distortion
``dist(r)`` is the smallest intrinsic length needed to reach ambient
distance r.  Intrinsic length is measured in the subgroup's own generators
via its layer enumeration, never by assuming the subgroup generators are a
subset of the ambient ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .atlas import AnnotatedBall, annotate_subgroup_distance, enumerate_ball
from .errors import ConfigError, NeedsLargerRadiusError
from .groups import Element, GroupOracle
from .subgroups import SubgroupSpec

#: consecutive intrinsic-length layers with no qualifying element before the
#: upper-distortion scan concludes the supply is exhausted (|h|_S need not be
#: perfectly monotone in |h|_T, e.g. central powers in the Heisenberg group)
_LAYER_MISS_SLACK = 8

_LAYER_HARD_CAP = 10_000_000


# ---------------------------------------------------------------------------
# distortion


@dataclass
class DistortionRow:
    r: int
    upper: int
    lower: int
    upper_witness: Optional[Element]
    lower_witness: Optional[Element]
    note: str = ""

    def to_jsonable(self, oracle: GroupOracle) -> dict:
        return {
            "r": self.r,
            "upper": self.upper,
            "lower": self.lower,
            "upper_witness": None
            if self.upper_witness is None
            else oracle.element_jsonable(self.upper_witness),
            "lower_witness": None
            if self.lower_witness is None
            else oracle.element_jsonable(self.lower_witness),
            "note": self.note,
        }


@dataclass
class DistortionTable:
    group: dict
    subgroup: dict
    rows: list[DistortionRow] = field(default_factory=list)

    def to_jsonable(self, oracle: GroupOracle) -> dict:
        return {
            "group": self.group,
            "subgroup": self.subgroup,
            "rows": [row.to_jsonable(oracle) for row in self.rows],
        }


def upper_distortion(aball: AnnotatedBall, r: int) -> tuple[int, Element]:
    """Max intrinsic length over subgroup elements of ambient length <= r.

    Exact: the radius-R ball contains every element of ambient length <= r
    once r <= R, and layer enumeration is exhaustive per intrinsic length.
    """
    if r < 0:
        raise ConfigError("distortion radius must be nonnegative")
    if r > aball.radius:
        raise NeedsLargerRadiusError(
            f"upper distortion at {r} needs atlas radius >= {r}, have {aball.radius}"
        )
    spec = aball.spec
    spec.prepare(aball.radius)
    wl = aball.word_length
    best_t = 0
    best_witness: Element = aball.oracle.identity
    misses = 0
    scanned = 0
    for t, layer in spec.elements_by_intrinsic_length():
        hit = None
        for h in layer:
            hid = aball.id_of(h)
            if hid is not None and wl[hid] <= r:
                hit = h if hit is None or h <= hit else hit
        scanned += 1
        if scanned > _LAYER_HARD_CAP:
            raise ConfigError("intrinsic layer scan exceeded the hard cap")
        if hit is None:
            if t > 0:
                misses += 1
                if misses >= _LAYER_MISS_SLACK:
                    break
        else:
            misses = 0
            if t >= best_t:
                best_t, best_witness = t, hit
    return best_t, best_witness


def lower_distortion(aball: AnnotatedBall, r: int) -> tuple[int, Optional[Element], str]:
    """Min intrinsic length needed to reach ambient length >= r.

    An element absent from the radius-R atlas certainly has ambient length
    > R >= r, so it qualifies; the first intrinsic layer containing any
    qualifying element therefore gives the exact minimum.  A finite subgroup
    exhausted without a hit yields 0, the empty-minimum convention.
    """
    if r < 0:
        raise ConfigError("distortion radius must be nonnegative")
    if r > aball.radius:
        raise NeedsLargerRadiusError(
            f"lower distortion at {r} needs atlas radius >= {r}, have {aball.radius}"
        )
    spec = aball.spec
    spec.prepare(aball.radius)
    wl = aball.word_length
    scanned = 0
    for t, layer in spec.elements_by_intrinsic_length():
        hit = None
        for h in layer:
            hid = aball.id_of(h)
            if hid is None or wl[hid] >= r:
                hit = h if hit is None or h <= hit else hit
        scanned += 1
        if scanned > _LAYER_HARD_CAP:
            raise ConfigError("intrinsic layer scan exceeded the hard cap")
        if hit is not None:
            return t, hit, ""
    return 0, None, "finite subgroup exhausted; empty minimum is 0"


def distortion_table(aball: AnnotatedBall, radii: list[int]) -> DistortionTable:
    table = DistortionTable(aball.oracle.describe(), aball.spec.describe())
    for r in radii:
        up, uw = upper_distortion(aball, r)
        lo, lw, note = lower_distortion(aball, r)
        if up == 0 and r >= 1:
            note = (note + "; " if note else "") + "only the identity within radius"
        table.rows.append(DistortionRow(r, up, lo, uw, lw, note))
    return table


# ---------------------------------------------------------------------------
# growth


def growth(aball_or_ball, r: int) -> int:
    """Exact ball cardinality |B(e, r)|."""
    ball = aball_or_ball.ball if isinstance(aball_or_ball, AnnotatedBall) else aball_or_ball
    return ball.ball_count(r)


def growth_profile(aball_or_ball, radii: list[int]) -> list[tuple[int, int]]:
    return [(r, growth(aball_or_ball, r)) for r in radii]


@dataclass
class GrowthDominationReport:
    rows: list[dict]
    holds: bool

    def to_jsonable(self) -> dict:
        return {"rows": self.rows, "holds": self.holds}


def growth_dominates_lower_distortion_check(
    aball: AnnotatedBall, radii: list[int]
) -> GrowthDominationReport:
    """Check dist(r) <= Growth(2r) pointwise on the sampled radii."""
    need = 2 * max(radii, default=0)
    if need > aball.radius:
        raise NeedsLargerRadiusError(
            f"domination check at radii up to {max(radii)} needs atlas radius "
            f">= {need}, have {aball.radius}"
        )
    rows = []
    holds = True
    for r in radii:
        lo, _, _ = lower_distortion(aball, r)
        g = growth(aball, 2 * r)
        ok = lo <= g
        holds = holds and ok
        rows.append({"r": r, "lower_distortion": lo, "growth_2r": g, "ok": ok})
    return GrowthDominationReport(rows, holds)


# ---------------------------------------------------------------------------
# filtered ends


@dataclass
class EndsRow:
    r: int
    estimate: int
    radius_used: int
    stabilized: bool
    history: list[tuple[int, int]]  # (atlas radius, component count)

    def to_jsonable(self) -> dict:
        return {
            "r": self.r,
            "estimate": self.estimate,
            "radius_used": self.radius_used,
            "stabilized": self.stabilized,
            "history": [{"radius": R, "count": c} for R, c in self.history],
        }


@dataclass
class EndsProfile:
    group: dict
    subgroup: dict
    rows: list[EndsRow] = field(default_factory=list)

    def to_jsonable(self) -> dict:
        return {
            "group": self.group,
            "subgroup": self.subgroup,
            "rows": [row.to_jsonable() for row in self.rows],
        }


def deep_component_count(aball: AnnotatedBall, r: int) -> int:
    """Frontier-touching components of {x : d(x, H) >= r} in the atlas.

    The desk-scale stand-in for deep components: a component confined to the
    ball interior is certainly shallow, one touching the frontier might
    continue outward.  Estimates are reported with their atlas radius and
    never claimed to equal the limiting end count.
    """
    if not 1 <= r <= aball.valid_core:
        raise NeedsLargerRadiusError(
            f"end estimate at {r} needs valid core >= {r}, have {aball.valid_core}"
        )
    return aball.components_at(r).frontier_component_count


def filtered_ends_profile(
    oracle: GroupOracle,
    spec: SubgroupSpec,
    r_list: list[int],
    radius_list: list[int],
    use_formula: bool = True,
    budget_elements: int = 10_000_000,
) -> EndsProfile:
    """End estimates for each separation level r across growing atlases.

    For each r the estimate is the count at the largest atlas radius; it is
    flagged stabilized when the two largest usable atlases agree.
    """
    if not radius_list:
        raise ConfigError("need at least one atlas radius")
    radii = sorted(set(radius_list))
    counts: dict[int, list[tuple[int, int]]] = {r: [] for r in r_list}
    cores: dict[int, int] = {}
    for R in radii:
        ball = enumerate_ball(oracle, R, budget_elements=budget_elements)
        aball = annotate_subgroup_distance(ball, spec, use_formula=use_formula)
        cores[R] = aball.valid_core
        for r in r_list:
            if 1 <= r <= aball.valid_core:
                counts[r].append((R, deep_component_count(aball, r)))
    profile = EndsProfile(oracle.describe(), spec.describe())
    for r in r_list:
        history = counts[r]
        if not history:
            raise NeedsLargerRadiusError(
                f"end estimate at separation {r} needs valid core >= {r}; "
                f"largest atlas gives {cores[radii[-1]]}"
            )
        stabilized = len(history) >= 2 and history[-1][1] == history[-2][1]
        profile.rows.append(
            EndsRow(r, history[-1][1], history[-1][0], stabilized, history)
        )
    return profile


# ---------------------------------------------------------------------------
# perpendicular rays and quasigeodesics


def perpendicular_ray_prefix(aball: AnnotatedBall, length: int) -> list[int]:
    """Ids of a path e = x_0, ..., x_L with d(x_i, H) = i for every i.

    Such a prefix is automatically geodesic: i steps bound the word length
    by i, and distance to H bounds it from below.  Built by a forward sweep
    of reachable sets and a deterministic smallest-id backtrack.
    """
    if length < 0:
        raise ConfigError("ray length must be nonnegative")
    if length > aball.valid_core:
        raise NeedsLargerRadiusError(
            f"ray of length {length} needs valid core >= {length}, have {aball.valid_core}"
        )
    n = len(aball.ball)
    nb = aball.neighbors
    dist = aball.dist_to_H
    reach: list[np.ndarray] = []
    cur = np.zeros(n, dtype=bool)
    cur[0] = True
    reach.append(cur)
    for i in range(1, length + 1):
        prev_ids = np.flatnonzero(reach[i - 1])
        nbrs = nb[prev_ids].ravel()
        nbrs = nbrs[nbrs >= 0]
        nxt = np.zeros(n, dtype=bool)
        nxt[nbrs] = True
        nxt &= dist == i
        if not nxt.any():
            raise NeedsLargerRadiusError(
                f"no perpendicular prefix of length {i} in this atlas; persistent "
                "failure at growing radii suggests the subgroup has finite index"
            )
        reach.append(nxt)
    path = [int(np.flatnonzero(reach[length])[0])]
    for i in range(length - 1, -1, -1):
        row = nb[path[-1]]
        cand = row[row >= 0]
        cand = cand[reach[i][cand]]
        path.append(int(cand.min()))
    path.reverse()
    return path


def quasigeodesic_check(
    aball: AnnotatedBall,
    path: list[Element],
    stretch: float,
    additive: float,
) -> Optional[bool]:
    """Is every contiguous subpath within the (stretch, additive) bound?

    A path q is a quasigeodesic when every subpath's edge count is at most
    ``stretch * d(endpoints) + additive``.  Endpoint distances come from the
    difference element: exact inside the atlas, and certainly > R outside
    it.  Returns False on a certified violation, True when every subpath is
    certified fine, None when some subpath cannot be decided at this radius.
    """
    oracle = aball.oracle
    ids = []
    for g in path:
        gid = aball.id_of(g)
        if gid is None:
            raise ConfigError("path vertex outside the atlas")
        ids.append(gid)
    for a, b in zip(ids, ids[1:]):
        if a == b or b not in aball.neighbors[a]:
            raise ConfigError("consecutive path vertices must be adjacent")
    unknown = False
    n = len(path)
    for i in range(n):
        inv = oracle.inverse(path[i])
        for j in range(i + 1, n):
            steps = j - i
            if steps <= additive:
                continue
            diff = oracle.multiply(inv, path[j])
            d = oracle.exact_word_length(diff)
            if d is None:
                did = aball.id_of(diff)
                d = None if did is None else int(aball.word_length[did])
            if d is not None:
                if steps > stretch * d + additive:
                    return False
            else:
                # distance exceeds the atlas radius; the bound may still be
                # provable from that lower bound
                if steps > stretch * (aball.radius + 1) + additive:
                    unknown = True
    return None if unknown else True
