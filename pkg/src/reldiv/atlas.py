"""Ball atlases: exhaustive radius-R balls with subgroup-distance annotation.

An atlas is the desk-scale window into an infinite Cayley graph.  The ball
is enumerated by layered BFS with deterministic ids (discovery order, which
is shortlex order of each element's first geodesic), adjacency is stored as a
dense id table, and word lengths are exact for every enumerated element.

Subgroup distances are exact on a restricted core: everywhere when the
subgroup carries a closed-form distance, and on word length <= R // 2 when
they come from in-ball BFS (a geodesic from such an element to its nearest
subgroup point cannot leave the ball).
"""

from __future__ import annotations

import hashlib
import json
from array import array
from pathlib import Path
from typing import Optional

import numpy as np

from . import bfsutil
from .errors import (
    AtlasChecksumError,
    AtlasFormatError,
    AtlasVersionError,
    BudgetExceededError,
    ConfigError,
    NeedsLargerRadiusError,
)
from .groups import Element, GroupOracle
from .subgroups import SubgroupSpec

MAGIC = b"RDIVATLS"
FORMAT_VERSION = 1
DEFAULT_ELEMENT_BUDGET = 10_000_000


class BallIndex:
    """Exhaustive ball of a fixed radius with dense adjacency."""

    def __init__(
        self,
        oracle: GroupOracle,
        radius: int,
        elements: list[Element],
        index: dict[Element, int],
        word_length: np.ndarray,
        neighbors: np.ndarray,
    ):
        self.oracle = oracle
        self.radius = radius
        self.elements = elements
        self.index = index
        self.word_length = word_length
        self.neighbors = neighbors

    def __len__(self) -> int:
        return len(self.elements)

    def id_of(self, g: Element) -> Optional[int]:
        return self.index.get(g)

    def ball_count(self, r: int) -> int:
        if r > self.radius:
            raise NeedsLargerRadiusError(f"ball count at {r} needs radius >= {r}, have {self.radius}")
        return int(np.count_nonzero(self.word_length <= r))

    def sphere_count(self, r: int) -> int:
        if r > self.radius:
            raise NeedsLargerRadiusError(f"sphere count at {r} needs radius >= {r}")
        return int(np.count_nonzero(self.word_length == r))


def enumerate_ball(
    oracle: GroupOracle,
    radius: int,
    budget_elements: int = DEFAULT_ELEMENT_BUDGET,
) -> BallIndex:
    """Layered BFS out to ``radius``; raises rather than returning a partial ball."""
    if radius < 0:
        raise ConfigError("radius must be nonnegative")
    deg = len(oracle.alphabet)
    rm = oracle.right_multiply_index
    elements: list[Element] = [oracle.identity]
    index: dict[Element, int] = {oracle.identity: 0}
    word_length = array("i", [0])
    neighbors = array("i")
    layer_start = 0
    for layer in range(radius + 1):
        layer_end = len(elements)
        expanding = layer < radius
        for gid in range(layer_start, layer_end):
            g = elements[gid]
            for j in range(deg):
                h = rm(g, j)
                hid = index.get(h)
                if hid is None:
                    if expanding:
                        hid = len(elements)
                        index[h] = hid
                        elements.append(h)
                        word_length.append(layer + 1)
                        if hid >= budget_elements:
                            raise BudgetExceededError(
                                f"ball at radius {radius} exceeds element budget {budget_elements}"
                            )
                    else:
                        hid = -1
                neighbors.append(hid)
        layer_start = layer_end
    nb = np.frombuffer(neighbors, dtype=np.int32).reshape(len(elements), deg).copy()
    wl = np.frombuffer(word_length, dtype=np.int32).copy()
    return BallIndex(oracle, radius, elements, index, wl, nb)


class AnnotatedBall:
    """A ball plus distance-to-subgroup values and their certified core."""

    def __init__(
        self,
        ball: BallIndex,
        spec: SubgroupSpec,
        dist_to_H: np.ndarray,
        valid_core: int,
        used_formula: bool,
    ):
        self.ball = ball
        self.spec = spec
        self.dist_to_H = dist_to_H
        self.valid_core = valid_core
        self.used_formula = used_formula
        self._component_cache: dict[int, "ComplementLabeling"] = {}

    @property
    def oracle(self) -> GroupOracle:
        return self.ball.oracle

    @property
    def radius(self) -> int:
        return self.ball.radius

    @property
    def elements(self) -> list[Element]:
        return self.ball.elements

    @property
    def word_length(self) -> np.ndarray:
        return self.ball.word_length

    @property
    def neighbors(self) -> np.ndarray:
        return self.ball.neighbors

    def id_of(self, g: Element) -> Optional[int]:
        return self.ball.id_of(g)

    def components_at(self, level: int) -> "ComplementLabeling":
        got = self._component_cache.get(level)
        if got is None:
            got = complement_components(self, level)
            self._component_cache[level] = got
        return got


def annotate_subgroup_distance(
    ball: BallIndex,
    spec: SubgroupSpec,
    use_formula: bool = True,
) -> AnnotatedBall:
    """Attach d_S(x, H) values to a ball.

    With a closed-form distance the whole ball is certified (valid core = R);
    otherwise distances are in-ball BFS from the members and only word
    lengths up to R // 2 are certified.
    """
    spec.prepare(ball.radius)
    if use_formula and spec.exact_distance is not None:
        f = spec.exact_distance
        dist = np.fromiter((f(g) for g in ball.elements), dtype=np.int32, count=len(ball))
        return AnnotatedBall(ball, spec, dist, ball.radius, True)
    member = spec.member
    members = [i for i, g in enumerate(ball.elements) if member(g)]
    if len(members) <= 1:
        for word in spec.generating_words:
            g = ball.oracle.word_to_element(word)
            if not member(g):
                raise ConfigError(
                    f"subgroup {spec.name!r}: generating word {' '.join(word)!r} fails "
                    "its own membership predicate"
                )
    if not members:
        raise ConfigError(f"subgroup {spec.name!r} has no member inside the ball")
    mask = np.ones(len(ball), dtype=bool)
    dist = bfsutil.masked_bfs(ball.neighbors, mask, np.asarray(members, dtype=np.int64))
    return AnnotatedBall(ball, spec, dist, ball.radius // 2, False)


class ComplementLabeling:
    """Connected components of {x in ball : d(x, H) >= level}."""

    def __init__(self, aball: AnnotatedBall, level: int, labels: np.ndarray):
        self.aball = aball
        self.level = level
        self.labels = labels
        n_comp = int(labels.max()) + 1 if labels.size and labels.max() >= 0 else 0
        self.component_count = n_comp
        frontier = labels[(aball.word_length == aball.radius) & (labels >= 0)]
        touching = np.unique(frontier)
        self.touches_frontier = np.zeros(n_comp, dtype=bool)
        self.touches_frontier[touching] = True
        self.frontier_component_count = int(touching.size)

    def component_of(self, gid: int) -> int:
        return int(self.labels[gid])

    def same_component(self, gid: int, hid: int) -> bool:
        return self.labels[gid] >= 0 and self.labels[gid] == self.labels[hid]


def complement_components(aball: AnnotatedBall, level: int) -> ComplementLabeling:
    if level < 1:
        raise ConfigError("complement level must be >= 1")
    mask = aball.dist_to_H >= level
    labels = bfsutil.component_labels(aball.neighbors, mask)
    return ComplementLabeling(aball, level, labels)


def boundary_set(aball: AnnotatedBall, r: int) -> np.ndarray:
    """Ids of elements with d(x, H) exactly r inside the certified core."""
    if not 1 <= r <= aball.valid_core:
        raise NeedsLargerRadiusError(
            f"boundary at {r} needs valid core >= {r}, have {aball.valid_core}"
        )
    return np.flatnonzero((aball.dist_to_H == r) & (aball.word_length <= aball.valid_core))


def anchor_boundary_ids(aball: AnnotatedBall, r: int) -> np.ndarray:
    """Ids on the sphere S(e, r) that also lie on the boundary set at r.

    Left translation by subgroup members preserves distance to H, so every
    boundary element is an H-translate of one of these anchors; divergence
    pair searches fix x here without loss of generality.
    """
    if not 1 <= r <= aball.valid_core:
        raise NeedsLargerRadiusError(
            f"anchors at {r} need valid core >= {r}, have {aball.valid_core}"
        )
    return np.flatnonzero((aball.dist_to_H == r) & (aball.word_length == r))


# ---------------------------------------------------------------------------
# serialization


def _encode_elements(oracle: GroupOracle, elements: list[Element]) -> tuple[dict, list[bytes]]:
    if oracle.codec == "intvec":
        arr = np.asarray(elements, dtype=np.int64)
        return {"codec": "intvec", "dim": int(arr.shape[1])}, [arr.tobytes()]
    blob = b"".join(elements)
    offsets = np.zeros(len(elements) + 1, dtype=np.int64)
    np.cumsum([len(e) for e in elements], out=offsets[1:])
    return {"codec": "word"}, [offsets.tobytes(), blob]


def _decode_elements(meta: dict, blocks: list[bytes], count: int) -> list[Element]:
    if meta["codec"] == "intvec":
        arr = np.frombuffer(blocks[0], dtype=np.int64).reshape(count, meta["dim"])
        return [tuple(int(v) for v in row) for row in arr]
    offsets = np.frombuffer(blocks[0], dtype=np.int64)
    blob = blocks[1]
    return [blob[offsets[i]:offsets[i + 1]] for i in range(count)]


def save_ball(aball: AnnotatedBall, path: str | Path) -> None:
    """Write an annotated atlas; the file embeds a checksum over all content."""
    ball = aball.ball
    codec_meta, element_blocks = _encode_elements(ball.oracle, ball.elements)
    blocks = element_blocks + [
        ball.word_length.astype(np.int32).tobytes(),
        ball.neighbors.astype(np.int32).tobytes(),
        aball.dist_to_H.astype(np.int32).tobytes(),
    ]
    header = {
        "kind": "cayley-ball-atlas",
        "group": ball.oracle.describe(),
        "group_digest": ball.oracle.digest,
        "subgroup": aball.spec.describe(),
        "subgroup_digest": aball.spec.digest,
        "radius": ball.radius,
        "valid_core": aball.valid_core,
        "used_formula": aball.used_formula,
        "count": len(ball),
        "degree": int(ball.neighbors.shape[1]),
        "element_meta": codec_meta,
        "block_sizes": [len(b) for b in blocks],
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    out = bytearray()
    out += MAGIC
    out += FORMAT_VERSION.to_bytes(4, "little")
    out += len(header_bytes).to_bytes(8, "little")
    out += header_bytes
    for b in blocks:
        out += b
    out += hashlib.sha256(out).digest()
    Path(path).write_bytes(bytes(out))


def load_ball(path: str | Path, oracle: GroupOracle, spec: SubgroupSpec) -> AnnotatedBall:
    """Read an atlas written by :func:`save_ball`, validating format and checksum.

    The caller supplies the oracle and subgroup spec (usually rebuilt from the
    same configs); their digests must match the file.
    """
    raw = Path(path).read_bytes()
    if len(raw) < len(MAGIC) + 12 + 32 or raw[: len(MAGIC)] != MAGIC:
        raise AtlasFormatError(f"{path}: not an atlas file")
    body, checksum = raw[:-32], raw[-32:]
    if hashlib.sha256(body).digest() != checksum:
        raise AtlasChecksumError(f"{path}: checksum mismatch")
    version = int.from_bytes(raw[8:12], "little")
    if version != FORMAT_VERSION:
        raise AtlasVersionError(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    header_len = int.from_bytes(raw[12:20], "little")
    header_start = 20
    header = json.loads(raw[header_start:header_start + header_len])
    if header.get("group_digest") != oracle.digest:
        raise ConfigError(f"{path}: atlas was built for group {header.get('group')}")
    if header.get("subgroup_digest") != spec.digest:
        raise ConfigError(f"{path}: atlas was built for subgroup {header.get('subgroup')}")
    pos = header_start + header_len
    blocks = []
    for size in header["block_sizes"]:
        blocks.append(body[pos:pos + size])
        pos += size
    count = header["count"]
    deg = header["degree"]
    elements = _decode_elements(header["element_meta"], blocks, count)
    word_length = np.frombuffer(blocks[-3], dtype=np.int32).copy()
    neighbors = np.frombuffer(blocks[-2], dtype=np.int32).reshape(count, deg).copy()
    dist = np.frombuffer(blocks[-1], dtype=np.int32).copy()
    index = {g: i for i, g in enumerate(elements)}
    ball = BallIndex(oracle, header["radius"], elements, index, word_length, neighbors)
    return AnnotatedBall(ball, spec, dist, header["valid_core"], header["used_formula"])
