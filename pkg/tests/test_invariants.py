"""Distortion tables, growth, filtered ends, rays, quasigeodesic checks."""

import pytest

from reldiv import invariants
from reldiv.atlas import annotate_subgroup_distance, enumerate_ball
from reldiv.errors import ConfigError, NeedsLargerRadiusError
from reldiv.groups import FreeGroupOracle, ZdOracle
from reldiv.racg import RacgOracle, pentagon_graph
from reldiv.subgroups import cyclic_subgroup, zd_axis, zd_sublattice


class TestDistortion:
    def test_undistorted_axis(self, z2_aball15):
        table = invariants.distortion_table(z2_aball15, list(range(1, 11)))
        for row in table.rows:
            assert row.upper == row.r
            assert row.lower == row.r
            assert row.upper_witness in ((row.r, 0), (-row.r, 0))

    def test_heisenberg_center_identity_slope_at_small_radii(self, heis_aball16):
        # |c^p| = p holds well past r=10, so both functions look linear here;
        # the quadratic regime only starts beyond the sampled window
        table = invariants.distortion_table(heis_aball16, list(range(2, 11)))
        for row in table.rows:
            assert row.upper == row.r
            assert row.lower == row.r

    def test_lower_at_most_upper_of_double(self, heis_aball16):
        radii = list(range(2, 9))
        table = {row.r: row for row in invariants.distortion_table(heis_aball16, radii).rows}
        for r in radii:
            if 2 * r in table:
                assert table[r].lower <= table[2 * r].upper

    def test_monotone_upper(self, heis_aball16):
        values = [invariants.upper_distortion(heis_aball16, r)[0] for r in range(1, 12)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_finite_subgroup_exhausts_to_zero(self):
        pent = RacgOracle(pentagon_graph())
        spec = cyclic_subgroup(pent, ["s1"])
        ball = enumerate_ball(pent, 6)
        aball = annotate_subgroup_distance(ball, spec, use_formula=False)
        value, witness, note = invariants.lower_distortion(aball, 4)
        assert value == 0 and witness is None
        assert "exhaust" in note

    def test_radius_guard(self, z2_aball15):
        with pytest.raises(NeedsLargerRadiusError):
            invariants.upper_distortion(z2_aball15, 16)


class TestGrowth:
    def test_profile_matches_counts(self, z2_aball15):
        gp = invariants.growth_profile(z2_aball15, [1, 3, 5])
        assert gp == [(1, 5), (3, 25), (5, 61)]

    def test_growth_dominates_lower_distortion(self, heis_aball16):
        rep = invariants.growth_dominates_lower_distortion_check(heis_aball16, [2, 3, 4, 5])
        assert rep.holds
        assert all(row["ok"] for row in rep.rows)

    def test_domination_radius_guard(self, z2_aball15):
        with pytest.raises(NeedsLargerRadiusError):
            invariants.growth_dominates_lower_distortion_check(z2_aball15, [10])


class TestFilteredEnds:
    def test_axis_has_two_deep_sides(self, z2_oracle, z2_axis_spec):
        profile = invariants.filtered_ends_profile(
            z2_oracle, z2_axis_spec, [1, 2, 3], [6, 8, 10]
        )
        for row in profile.rows:
            assert row.estimate == 2
            assert row.stabilized
            assert row.radius_used == 10

    def test_heisenberg_center_one_end(self, heis_oracle, heis_center_spec):
        profile = invariants.filtered_ends_profile(
            heis_oracle, heis_center_spec, [1, 2], [8, 10]
        )
        for row in profile.rows:
            assert row.estimate == 1
            assert row.stabilized

    def test_finite_index_sublattice_has_no_deep_part(self, z2_oracle):
        spec = zd_sublattice(z2_oracle, 2)
        profile = invariants.filtered_ends_profile(z2_oracle, spec, [3], [6, 8])
        assert profile.rows[0].estimate == 0

    def test_free_group_counts_keep_growing(self, f2_oracle, f2_axis_spec):
        profile = invariants.filtered_ends_profile(
            f2_oracle, f2_axis_spec, [1], [6, 8], use_formula=False
        )
        row = profile.rows[0]
        assert not row.stabilized
        assert row.history[-1] > row.history[0]

    def test_deep_component_count_needs_core(self, z2_aball15):
        with pytest.raises(NeedsLargerRadiusError):
            invariants.deep_component_count(z2_aball15, 16)

    def test_unusable_radii_rejected(self, z2_oracle, z2_axis_spec):
        with pytest.raises(NeedsLargerRadiusError):
            invariants.filtered_ends_profile(z2_oracle, z2_axis_spec, [5], [2, 4])


class TestPerpendicularRay:
    def test_z2_ray_runs_perpendicular(self, z2_aball15):
        ids = invariants.perpendicular_ray_prefix(z2_aball15, 6)
        els = [z2_aball15.elements[i] for i in ids]
        assert els[0] == (0, 0)
        for step, el in enumerate(els):
            assert abs(el[1]) == step  # dist to the axis grows by one each step
            assert int(z2_aball15.word_length[ids[step]]) == step

    def test_ray_is_deterministic_smallest_id(self, z2_aball15):
        a = invariants.perpendicular_ray_prefix(z2_aball15, 5)
        b = invariants.perpendicular_ray_prefix(z2_aball15, 5)
        assert a == b

    def test_length_guard_mentions_alternative(self, z2_oracle):
        spec = zd_sublattice(z2_oracle, 2)
        ball = enumerate_ball(z2_oracle, 6)
        aball = annotate_subgroup_distance(ball, spec)
        with pytest.raises(NeedsLargerRadiusError):
            invariants.perpendicular_ray_prefix(aball, 10)


class TestQuasigeodesicCheck:
    def _path(self, aball, letters):
        els = [aball.oracle.identity]
        for s in letters:
            els.append(aball.oracle.right_multiply(els[-1], s))
        return els

    def test_staircase_is_geodesic(self, z2_aball15):
        path = self._path(z2_aball15, ["a", "b", "a", "b"])
        assert invariants.quasigeodesic_check(z2_aball15, path, 1, 0) is True

    def test_backtracking_loop_fails(self, z2_aball15):
        path = self._path(z2_aball15, ["a", "A", "a", "A"])
        assert invariants.quasigeodesic_check(z2_aball15, path, 3, 0) is False

    def test_additive_slack_forgives_short_loops(self, z2_aball15):
        path = self._path(z2_aball15, ["a", "A", "a", "A"])
        assert invariants.quasigeodesic_check(z2_aball15, path, 1, 4) is True

    def test_non_adjacent_path_rejected(self, z2_aball15):
        with pytest.raises(ConfigError):
            invariants.quasigeodesic_check(z2_aball15, [(0, 0), (3, 3)], 2, 0)
