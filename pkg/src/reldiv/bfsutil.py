"""Array-level BFS helpers shared by the atlas and divergence code.

The ball adjacency is a dense (n, degree) int32 array of neighbor ids with -1
for edges leaving the enumerated ball.  All searches below are level
synchronous and fully deterministic.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def masked_bfs(neighbors: np.ndarray, mask: np.ndarray, sources: np.ndarray) -> np.ndarray:
    """Multi-source BFS distances inside ``mask``; unreached cells get -1.

    ``sources`` must already satisfy the mask.  Distances are edge counts in
    the subgraph induced on masked vertices.
    """
    n = neighbors.shape[0]
    dist = np.full(n, -1, dtype=np.int32)
    frontier = np.asarray(sources, dtype=np.int64)
    if frontier.size:
        dist[frontier] = 0
    level = 0
    while frontier.size:
        cand = neighbors[frontier].ravel()
        cand = cand[cand >= 0]
        cand = np.unique(cand)
        cand = cand[(dist[cand] < 0) & mask[cand]]
        level += 1
        dist[cand] = level
        frontier = cand
    return dist


def targeted_bfs(
    neighbors: np.ndarray,
    mask: np.ndarray,
    source: int,
    target_mask: np.ndarray,
    stop_first: bool = False,
    depth_cap: int | None = None,
) -> np.ndarray:
    """Single-source BFS inside ``mask`` that stops once targets are settled.

    With ``stop_first`` the sweep ends at the first level containing any
    target; otherwise it ends when every reachable target has a distance.
    ``depth_cap`` abandons the sweep beyond that level (useful when only
    values below a known bound matter).  Returns the distance array with -1
    for unsettled vertices.
    """
    n = neighbors.shape[0]
    dist = np.full(n, -1, dtype=np.int32)
    dist[source] = 0
    remaining = int(np.count_nonzero(target_mask & mask)) - int(target_mask[source])
    if stop_first and target_mask[source]:
        return dist
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size and remaining > 0:
        if depth_cap is not None and level >= depth_cap:
            break
        cand = neighbors[frontier].ravel()
        cand = cand[cand >= 0]
        cand = np.unique(cand)
        cand = cand[(dist[cand] < 0) & mask[cand]]
        level += 1
        dist[cand] = level
        hits = int(np.count_nonzero(target_mask[cand]))
        remaining -= hits
        if stop_first and hits:
            break
        frontier = cand
    return dist


def bfs_parents(neighbors: np.ndarray, mask: np.ndarray, source: int) -> tuple[np.ndarray, np.ndarray]:
    """Single-source BFS returning (dist, parent) for path reconstruction.

    Parents are chosen deterministically: smallest parent id wins.
    """
    n = neighbors.shape[0]
    dist = np.full(n, -1, dtype=np.int32)
    parent = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        nbr = neighbors[frontier]
        src = np.repeat(frontier, nbr.shape[1])
        flat = nbr.ravel()
        keep = flat >= 0
        src, flat = src[keep], flat[keep]
        keep = (dist[flat] < 0) & mask[flat]
        src, flat = src[keep], flat[keep]
        if flat.size == 0:
            break
        # smallest parent id per target: sort by (target, parent), take firsts
        order = np.lexsort((src, flat))
        flat, src = flat[order], src[order]
        first = np.ones(flat.size, dtype=bool)
        first[1:] = flat[1:] != flat[:-1]
        flat, src = flat[first], src[first]
        level += 1
        dist[flat] = level
        parent[flat] = src
        frontier = flat
    return dist, parent


def extract_path(parent: np.ndarray, target: int) -> list[int]:
    path = [target]
    while parent[path[-1]] >= 0:
        path.append(int(parent[path[-1]]))
    path.reverse()
    return path


def component_labels(neighbors: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Connected component label per vertex (-1 off mask), deterministic.

    Labels are renumbered by first appearance in id order.
    """
    n = neighbors.shape[0]
    ids = np.flatnonzero(mask)
    out = np.full(n, -1, dtype=np.int64)
    if ids.size == 0:
        return out
    local = np.full(n, -1, dtype=np.int64)
    local[ids] = np.arange(ids.size)
    nbr = neighbors[ids]
    rows = np.repeat(np.arange(ids.size), nbr.shape[1])
    cols = nbr.ravel()
    keep = cols >= 0
    rows, cols = rows[keep], cols[keep]
    keep = mask[cols]
    rows, cols = rows[keep], local[cols[keep]]
    graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(ids.size, ids.size))
    _, labels = connected_components(graph, directed=False)
    # renumber so that label k is the k-th distinct component in id order
    _, first_index, renumbered = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first_index))
    out[ids] = order[renumbered]
    return out
