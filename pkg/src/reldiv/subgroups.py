"""Subgroup handles: membership, intrinsic word length, distance formulas.

A ``SubgroupSpec`` ties a subgroup H of an ambient oracle group G to the three
queries the rest of the toolkit needs:

* ``member(x)``: is the (canonically encoded) element in H,
* ``intrinsic_length(h)``: word length of h over H's own generating set T,
* optionally ``exact_distance(x)``: closed-form d_S(x, H) in the ambient
  word metric, when the pair admits one.

Membership for cyclic subgroups is realized by materializing powers of the
generating word out to a prepared ambient radius, so it is exact on any ball
that has been prepared.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator, Optional

from .errors import BudgetExceededError, ConfigError
from .groups import Element, GroupOracle, HeisenbergOracle, ZdOracle, describe_digest

#: extra powers generated past the prepared radius, guarding against small
#: non-monotonicity in |w^k|_S
_CYCLIC_SLACK = 4
_DEFAULT_POWER_CAP = 1_000_000


class SubgroupSpec:
    def __init__(
        self,
        oracle: GroupOracle,
        name: str,
        generating_words: list[list[str]],
        member: Callable[[Element], bool],
        intrinsic_length: Callable[[Element], int],
        layers: Callable[[], Iterator[tuple[int, list[Element]]]],
        exact_distance: Optional[Callable[[Element], int]] = None,
        prepare: Optional[Callable[[int], None]] = None,
        description: Optional[dict] = None,
    ):
        self.oracle = oracle
        self.name = name
        self.generating_words = generating_words
        self.member = member
        self.intrinsic_length = intrinsic_length
        self.elements_by_intrinsic_length = layers
        self.exact_distance = exact_distance
        self._prepare = prepare
        self._description = description or {"kind": name}

    def prepare(self, radius: int) -> None:
        """Make ``member`` exact for every element of S-length <= radius."""
        if self._prepare is not None:
            self._prepare(radius)

    def describe(self) -> dict:
        return self._description

    @property
    def digest(self) -> str:
        return describe_digest({"group": self.oracle.describe(), "subgroup": self._description})


def subgroup_distance_oracle(spec: SubgroupSpec, x: Element) -> int:
    """Exact ambient distance d_S(x, H) for formula-carrying subgroups."""
    if spec.exact_distance is None:
        raise ConfigError(f"subgroup {spec.name!r} has no closed-form distance")
    return spec.exact_distance(x)


class _CyclicPowers:
    """Powers of a generating word, grown on demand.

    Detects torsion (the power that returns to the identity) and, for
    infinite order, grows until |w^k|_S exceeds the prepared radius with a
    little slack.  Needs an exact word-length formula on the ambient oracle;
    distorted cases must use a distance formula subgroup instead.
    """

    def __init__(
        self,
        oracle: GroupOracle,
        word: list[str],
        power_cap: int = _DEFAULT_POWER_CAP,
        prepare_scale: int = 1,
    ):
        self.oracle = oracle
        self.word_element = oracle.word_to_element(word)
        if self.word_element == oracle.identity:
            raise ConfigError("cyclic generator word is the identity")
        self.power_cap = power_cap
        # membership may be queried against a shorter extended-ambient metric;
        # scale the growth radius to stay exact there
        self.prepare_scale = prepare_scale
        self.powers: dict[Element, int] = {oracle.identity: 0}
        self._pos: list[Element] = [oracle.identity]
        self._neg: list[Element] = [oracle.identity]
        self.order: Optional[int] = None  # finite order when detected
        self.prepared_radius = -1

    def _grow_one(self, positive: bool) -> Optional[Element]:
        if self.order is not None:
            return None
        chain = self._pos if positive else self._neg
        step = self.word_element if positive else self.oracle.inverse(self.word_element)
        nxt = self.oracle.multiply(chain[-1], step)
        k = len(chain) if positive else -len(chain)
        if nxt in self.powers:
            # returned to an earlier power: finite cyclic group
            prev = self.powers[nxt]
            self.order = abs(k - prev)
            return None
        self.powers[nxt] = k
        chain.append(nxt)
        return nxt

    def prepare(self, radius: int) -> None:
        if radius <= self.prepared_radius or self.order is not None:
            return
        length = self.oracle.exact_word_length
        if length(self.word_element) is None:
            raise ConfigError(
                "cyclic membership needs an exact word-length formula on the "
                "ambient group; use a distance-formula subgroup instead"
            )
        target = radius * self.prepare_scale
        for positive in (True, False):
            beyond = 0
            while beyond < _CYCLIC_SLACK:
                g = self._grow_one(positive)
                if g is None:
                    return
                if len(self.powers) > self.power_cap:
                    raise BudgetExceededError(
                        f"cyclic subgroup power cap {self.power_cap} exceeded "
                        f"while preparing radius {radius}"
                    )
                if length(g) > target:
                    beyond += 1
                else:
                    beyond = 0
        self.prepared_radius = radius

    def layers(self) -> Iterator[tuple[int, list[Element]]]:
        yield 0, [self.oracle.identity]
        t = 1
        while True:
            if self.order is not None:
                if t > self.order // 2:
                    return
                layer = [g for g, k in self.powers.items() if min(abs(k), self.order - abs(k)) == t]
                yield t, layer
                t += 1
                continue
            while len(self._pos) <= t and self.order is None:
                self._grow_one(True)
            while len(self._neg) <= t and self.order is None:
                self._grow_one(False)
            if self.order is not None:
                continue
            yield t, [self._pos[t], self._neg[t]]
            t += 1

    def intrinsic_length(self, g: Element) -> int:
        k = self.powers[g]
        if self.order is not None:
            return min(abs(k), self.order - abs(k))
        return abs(k)


def cyclic_subgroup(
    oracle: GroupOracle,
    word: list[str],
    name: Optional[str] = None,
    exact_distance: Optional[Callable[[Element], int]] = None,
    power_cap: int = _DEFAULT_POWER_CAP,
    prepare_scale: int = 1,
) -> SubgroupSpec:
    powers = _CyclicPowers(oracle, word, power_cap, prepare_scale)
    return SubgroupSpec(
        oracle,
        name or "cyclic<" + " ".join(word) + ">",
        [list(word)],
        member=lambda g: g in powers.powers,
        intrinsic_length=powers.intrinsic_length,
        layers=powers.layers,
        exact_distance=exact_distance,
        prepare=powers.prepare,
        description={"kind": "cyclic", "word": list(word)},
    )


def heisenberg_center(oracle: HeisenbergOracle) -> SubgroupSpec:
    """The center <c> of the Heisenberg group, with d_S(a^k b^l c^p, H) = |k|+|l|."""

    def layers():
        yield 0, [(0, 0, 0)]
        t = 1
        while True:
            yield t, [(0, 0, t), (0, 0, -t)]
            t += 1

    return SubgroupSpec(
        oracle,
        "center<c>",
        [["c"]] if oracle.include_c else [["b", "a", "B", "A"]],
        member=lambda g: g[0] == 0 and g[1] == 0,
        intrinsic_length=lambda g: abs(g[2]),
        layers=layers,
        exact_distance=lambda g: abs(g[0]) + abs(g[1]),
        description={"kind": "center"},
    )


def _l1_shell(d: int, t: int) -> list[tuple[int, ...]]:
    """All integer vectors of L1 norm exactly t, deterministic order."""
    if t == 0:
        return [(0,) * d]
    out = []
    for split in itertools.product(range(t + 1), repeat=d):
        if sum(split) != t:
            continue
        signs = itertools.product(*[((1, -1) if c > 0 else (1,)) for c in split])
        for sg in signs:
            out.append(tuple(c * s for c, s in zip(split, sg)))
    return sorted(out)


def zd_axis(oracle: ZdOracle, axis: int) -> SubgroupSpec:
    """Coordinate axis subgroup of Z^d (axis is 0-based)."""
    if not 0 <= axis < oracle.d:
        raise ConfigError(f"axis {axis} out of range for Z^{oracle.d}")
    letter = oracle.alphabet.symbols[2 * axis]

    def unit(t: int) -> tuple[int, ...]:
        v = [0] * oracle.d
        v[axis] = t
        return tuple(v)

    def layers():
        yield 0, [oracle.identity]
        t = 1
        while True:
            yield t, [unit(t), unit(-t)]
            t += 1

    return SubgroupSpec(
        oracle,
        f"axis<{letter}>",
        [[letter]],
        member=lambda g: all(c == 0 for i, c in enumerate(g) if i != axis),
        intrinsic_length=lambda g: abs(g[axis]),
        layers=layers,
        exact_distance=lambda g: sum(abs(c) for i, c in enumerate(g) if i != axis),
        description={"kind": "axis", "axis": axis},
    )


def zd_sublattice(oracle: ZdOracle, modulus: int) -> SubgroupSpec:
    """Finite-index sublattice (mZ)^d inside Z^d."""
    if modulus < 2:
        raise ConfigError("sublattice modulus must be >= 2")
    m = modulus
    words = []
    for i in range(oracle.d):
        words.append([oracle.alphabet.symbols[2 * i]] * m)

    def layers():
        t = 0
        while True:
            yield t, [tuple(m * c for c in v) for v in _l1_shell(oracle.d, t)]
            t += 1

    return SubgroupSpec(
        oracle,
        f"sublattice<{m}>",
        words,
        member=lambda g: all(c % m == 0 for c in g),
        intrinsic_length=lambda g: sum(abs(c) // m for c in g),
        layers=layers,
        exact_distance=lambda g: sum(min(c % m, m - c % m) for c in g),
        description={"kind": "sublattice", "modulus": m},
    )


def trivial_subgroup(oracle: GroupOracle) -> SubgroupSpec:
    def layers():
        yield 0, [oracle.identity]

    return SubgroupSpec(
        oracle,
        "trivial",
        [],
        member=lambda g: g == oracle.identity,
        intrinsic_length=lambda g: 0,
        layers=layers,
        exact_distance=oracle.exact_word_length if oracle.exact_word_length(oracle.identity) is not None else None,
        description={"kind": "trivial"},
    )
