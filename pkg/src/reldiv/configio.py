"""Plain-text configuration for groups and subgroups.

Config files are flat ``key: value`` lines; ``#`` starts a comment and blank
lines are skipped.  Lists are whitespace separated.  The schema:

Group configs::

    family: zd | free | heisenberg | racg
    d: 2                 # zd only
    rank: 2              # free only
    generators: a b c    # heisenberg: "a b c" (default) or "a b"
    generators: s1 s2 s3 s4 s5    # racg vertex labels
    edges: s1-s2 s2-s3 s3-s4 s4-s5 s5-s1   # racg commuting pairs

Subgroup configs::

    kind: cyclic | axis | center | sublattice | trivial
    word: s1 s3          # cyclic: generating word over the group alphabet
    formula: auto | none # cyclic: use a closed-form distance when known
    extend-ambient: false  # cyclic: also add the word as an ambient generator
    axis: 0              # axis: 0-based coordinate
    modulus: 2           # sublattice
"""

from __future__ import annotations

from pathlib import Path

from .errors import ConfigError
from .groups import (
    ExtendedGeneratorOracle,
    FreeGroupOracle,
    GroupOracle,
    HeisenbergOracle,
    ZdOracle,
)
from .racg import CommutationGraph, RacgOracle
from .subgroups import (
    SubgroupSpec,
    cyclic_subgroup,
    heisenberg_center,
    trivial_subgroup,
    zd_axis,
    zd_sublattice,
)


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ConfigError(f"line {lineno}: expected 'key: value', got {raw!r}")
        key, value = line.split(":", 1)
        key = key.strip().lower()
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def read_config(path: str | Path) -> dict[str, str]:
    return parse_config_text(Path(path).read_text())


def _require(cfg: dict[str, str], key: str, context: str) -> str:
    if key not in cfg:
        raise ConfigError(f"{context} config is missing {key!r}")
    return cfg[key]


def _as_int(cfg: dict[str, str], key: str, context: str) -> int:
    try:
        return int(_require(cfg, key, context))
    except ValueError:
        raise ConfigError(f"{context} config: {key!r} must be an integer") from None


def build_group(cfg: dict[str, str]) -> GroupOracle:
    family = _require(cfg, "family", "group").lower()
    if family == "zd":
        return ZdOracle(_as_int(cfg, "d", "zd group"))
    if family == "free":
        return FreeGroupOracle(_as_int(cfg, "rank", "free group"))
    if family == "heisenberg":
        gens = cfg.get("generators", "a b c").split()
        if gens == ["a", "b", "c"]:
            return HeisenbergOracle(include_c=True)
        if gens == ["a", "b"]:
            return HeisenbergOracle(include_c=False)
        raise ConfigError("heisenberg generators must be 'a b c' or 'a b'")
    if family == "racg":
        labels = _require(cfg, "generators", "racg group").split()
        edges = []
        for token in cfg.get("edges", "").split():
            if "-" not in token:
                raise ConfigError(f"racg edge {token!r} must look like u-v")
            u, v = token.split("-", 1)
            edges.append((u, v))
        return RacgOracle(CommutationGraph(labels, edges))
    raise ConfigError(f"unknown group family {family!r}")


def _truthy(value: str) -> bool:
    return value.lower() in ("1", "true", "yes", "on")


def build_subgroup(cfg: dict[str, str], oracle: GroupOracle) -> tuple[GroupOracle, SubgroupSpec]:
    """Build a subgroup handle; may return an extended ambient oracle.

    With ``extend-ambient: true`` on a cyclic subgroup, the generating word
    is also installed as an extra ambient generator (label ``h``), changing
    the ambient word metric.
    """
    kind = _require(cfg, "kind", "subgroup").lower()
    if kind == "trivial":
        return oracle, trivial_subgroup(oracle)
    if kind == "center":
        if not isinstance(oracle, HeisenbergOracle):
            raise ConfigError("kind 'center' requires the heisenberg family")
        return oracle, heisenberg_center(oracle)
    if kind == "axis":
        if not isinstance(oracle, ZdOracle):
            raise ConfigError("kind 'axis' requires the zd family")
        return oracle, zd_axis(oracle, _as_int(cfg, "axis", "axis subgroup"))
    if kind == "sublattice":
        if not isinstance(oracle, ZdOracle):
            raise ConfigError("kind 'sublattice' requires the zd family")
        return oracle, zd_sublattice(oracle, _as_int(cfg, "modulus", "sublattice subgroup"))
    if kind == "cyclic":
        word = _require(cfg, "word", "cyclic subgroup").split()
        formula = cfg.get("formula", "auto").lower()
        if formula not in ("auto", "none"):
            raise ConfigError("formula must be 'auto' or 'none'")
        extend = _truthy(cfg.get("extend-ambient", "false"))
        if formula == "auto":
            if isinstance(oracle, HeisenbergOracle) and word in (["c"], ["C"]):
                if extend:
                    raise ConfigError("extend-ambient is pointless for a generator word")
                return oracle, heisenberg_center(oracle)
            if isinstance(oracle, ZdOracle) and len(word) == 1:
                sym = word[0]
                i = oracle.alphabet.index(sym)
                if not extend:
                    return oracle, zd_axis(oracle, i // 2)
        if extend:
            extended = ExtendedGeneratorOracle(oracle, {"h": word})
            spec = cyclic_subgroup(
                oracle, word, prepare_scale=max(1, len(word))
            )
            spec.oracle = extended
            return extended, spec
        return oracle, cyclic_subgroup(oracle, word)
    raise ConfigError(f"unknown subgroup kind {kind!r}")


def load_group(path: str | Path) -> GroupOracle:
    return build_group(read_config(path))


def load_pair(group_path: str | Path, subgroup_path: str | Path) -> tuple[GroupOracle, SubgroupSpec]:
    oracle = load_group(group_path)
    return build_subgroup(read_config(subgroup_path), oracle)
