"""reldiv: relative divergence, distortion, and growth over Cayley graphs.

Desk-scale computational group theory: enumerate exact balls of finitely
generated groups (free abelian, Heisenberg, free, right-angled Coxeter),
annotate them with distances to a subgroup, and measure subgroup
distortion, filtered-end estimates, relative divergence, and growth, with
explicit certification of what is exact at each atlas radius.
"""

__version__ = "0.1.0"

from .alphabet import GeneratorAlphabet, format_word, parse_word
from .asymptotics import SampledFunction, classify, dominates
from .atlas import (
    AnnotatedBall,
    BallIndex,
    annotate_subgroup_distance,
    complement_components,
    enumerate_ball,
    load_ball,
    save_ball,
)
from .configio import build_group, build_subgroup, load_group, load_pair
from .divergence import (
    DivergenceParams,
    DivergenceSample,
    axis_divergence,
    complement_distance,
    divergence_profile,
    lower_divergence_sample,
    upper_divergence_sample,
)
from .errors import (
    AtlasChecksumError,
    AtlasFormatError,
    AtlasVersionError,
    BudgetExceededError,
    CheckFailureError,
    ConfigError,
    NeedsLargerRadiusError,
    ReldivError,
    RewriteError,
)
from .gromov import TowerWitness, tower_witness
from .groups import (
    ExtendedGeneratorOracle,
    FreeGroupOracle,
    GroupOracle,
    HeisenbergOracle,
    ZdOracle,
)
from .invariants import (
    DistortionTable,
    EndsProfile,
    distortion_table,
    filtered_ends_profile,
    growth,
    growth_profile,
    lower_distortion,
    perpendicular_ray_prefix,
    quasigeodesic_check,
    upper_distortion,
)
from .racg import CommutationGraph, RacgOracle, pentagon_graph
from .rewrite import RewritingSystem, parse_rules_text, read_rules
from .subgroups import (
    SubgroupSpec,
    cyclic_subgroup,
    heisenberg_center,
    trivial_subgroup,
    zd_axis,
    zd_sublattice,
)
