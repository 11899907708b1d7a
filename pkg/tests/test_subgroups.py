"""Subgroup handles: membership, intrinsic length, layers, distance formulas."""

import itertools

import pytest

from reldiv.errors import ConfigError
from reldiv.groups import FreeGroupOracle, HeisenbergOracle, ZdOracle
from reldiv.racg import RacgOracle, pentagon_graph
from reldiv.subgroups import (
    cyclic_subgroup,
    heisenberg_center,
    trivial_subgroup,
    zd_axis,
    zd_sublattice,
)


def _take_layers(spec, count):
    return list(itertools.islice(spec.elements_by_intrinsic_length(), count))


class TestZdAxis:
    def setup_method(self):
        self.z = ZdOracle(2)
        self.spec = zd_axis(self.z, 0)

    def test_membership(self):
        assert self.spec.member((5, 0))
        assert self.spec.member((0, 0))
        assert not self.spec.member((5, 1))

    def test_intrinsic_length(self):
        assert self.spec.intrinsic_length((7, 0)) == 7
        assert self.spec.intrinsic_length((-3, 0)) == 3

    def test_exact_distance_is_perpendicular_offset(self):
        assert self.spec.exact_distance((4, -6)) == 6
        assert self.spec.exact_distance((100, 0)) == 0

    def test_layers(self):
        layers = _take_layers(self.spec, 3)
        assert layers[0] == (0, [(0, 0)])
        assert layers[1][0] == 1 and sorted(layers[1][1]) == [(-1, 0), (1, 0)]

    def test_bad_axis_index(self):
        with pytest.raises(ConfigError):
            zd_axis(self.z, 5)


class TestZdSublattice:
    def setup_method(self):
        self.z = ZdOracle(2)
        self.spec = zd_sublattice(self.z, 2)

    def test_membership(self):
        assert self.spec.member((2, -4))
        assert not self.spec.member((1, 2))
        assert not self.spec.member((2, 1))

    def test_intrinsic_length_counts_double_steps(self):
        assert self.spec.intrinsic_length((4, -2)) == 3

    def test_distance_formula_agrees_with_small_search(self):
        # brute force: distance from x to the nearest even lattice point
        for x in [(0, 0), (1, 0), (1, 1), (3, 2), (-2, 3)]:
            best = min(
                abs(x[0] - 2 * a) + abs(x[1] - 2 * b)
                for a in range(-4, 5)
                for b in range(-4, 5)
            )
            assert self.spec.exact_distance(x) == best

    def test_modulus_validation(self):
        with pytest.raises(ConfigError):
            zd_sublattice(self.z, 1)


class TestHeisenbergCenter:
    def setup_method(self):
        self.h = HeisenbergOracle()
        self.spec = heisenberg_center(self.h)

    def test_membership(self):
        assert self.spec.member((0, 0, 9))
        assert not self.spec.member((1, 0, 9))
        assert not self.spec.member((0, 2, 0))

    def test_intrinsic_length(self):
        assert self.spec.intrinsic_length((0, 0, -12)) == 12

    def test_distance_formula(self):
        assert self.spec.exact_distance((3, -2, 100)) == 5
        assert self.spec.exact_distance((0, 0, 100)) == 0

    def test_layers_are_central_powers(self):
        layers = _take_layers(self.spec, 3)
        assert layers[0] == (0, [(0, 0, 0)])
        assert sorted(layers[2][1]) == [(0, 0, -2), (0, 0, 2)]


class TestCyclic:
    def test_free_group_axis(self):
        f = FreeGroupOracle(2)
        spec = cyclic_subgroup(f, ["a"])
        spec.prepare(6)
        aaa = f.word_to_element(["a", "a", "a"])
        assert spec.member(aaa)
        assert spec.intrinsic_length(aaa) == 3
        assert not spec.member(f.word_to_element(["a", "b"]))

    def test_torsion_generator_is_detected(self):
        pent = RacgOracle(pentagon_graph())
        spec = cyclic_subgroup(pent, ["s1"])
        spec.prepare(8)
        s1 = pent.word_to_element(["s1"])
        assert spec.member(s1)
        assert spec.member(pent.identity)
        assert spec.intrinsic_length(s1) == 1
        # the subgroup has order 2: layers terminate
        layers = list(spec.elements_by_intrinsic_length())
        assert sum(len(els) for _, els in layers) == 2

    def test_infinite_dihedral_translation(self):
        pent = RacgOracle(pentagon_graph())
        spec = cyclic_subgroup(pent, ["s1", "s3"])
        spec.prepare(10)
        g = pent.word_to_element(["s1", "s3"] * 3)
        assert spec.member(g)
        assert spec.intrinsic_length(g) == 3
        assert not spec.member(pent.word_to_element(["s1"]))

    def test_empty_word_rejected(self):
        with pytest.raises(ConfigError):
            cyclic_subgroup(ZdOracle(2), [])


class TestTrivial:
    def test_only_identity(self):
        z = ZdOracle(2)
        spec = trivial_subgroup(z)
        assert spec.member((0, 0))
        assert not spec.member((1, 0))
        assert spec.exact_distance((3, -4)) == 7  # distance to e is the word length

    def test_single_layer(self):
        z = ZdOracle(2)
        layers = list(trivial_subgroup(z).elements_by_intrinsic_length())
        assert layers == [(0, [(0, 0)])]
