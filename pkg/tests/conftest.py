"""Shared session-scoped atlases so expensive enumerations run once."""

from __future__ import annotations

import pytest

from reldiv.atlas import annotate_subgroup_distance, enumerate_ball
from reldiv.groups import FreeGroupOracle, HeisenbergOracle, ZdOracle
from reldiv.subgroups import cyclic_subgroup, heisenberg_center, zd_axis


@pytest.fixture(scope="session")
def z2_oracle():
    return ZdOracle(2)


@pytest.fixture(scope="session")
def z2_axis_spec(z2_oracle):
    return zd_axis(z2_oracle, 0)


@pytest.fixture(scope="session")
def z2_aball15(z2_oracle, z2_axis_spec):
    return annotate_subgroup_distance(enumerate_ball(z2_oracle, 15), z2_axis_spec)


@pytest.fixture(scope="session")
def heis_oracle():
    return HeisenbergOracle()


@pytest.fixture(scope="session")
def heis_center_spec(heis_oracle):
    return heisenberg_center(heis_oracle)


@pytest.fixture(scope="session")
def heis_aball16(heis_oracle, heis_center_spec):
    return annotate_subgroup_distance(enumerate_ball(heis_oracle, 16), heis_center_spec)


@pytest.fixture(scope="session")
def f2_oracle():
    return FreeGroupOracle(2)


@pytest.fixture(scope="session")
def f2_axis_spec(f2_oracle):
    return cyclic_subgroup(f2_oracle, ["a"])


@pytest.fixture(scope="session")
def f2_aball8(f2_oracle, f2_axis_spec):
    return annotate_subgroup_distance(enumerate_ball(f2_oracle, 8), f2_axis_spec)
