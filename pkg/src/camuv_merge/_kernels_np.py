"""Pure-numpy kernel backend.

Same contract as the numba backend: existence checks for unobserved
causal/backdoor paths and per-dataset inconsistency counts, all over uint8
adjacency matrices.  Reachability is computed by vectorized frontier
expansion instead of explicit queues.
"""
from __future__ import annotations

import numpy as np

NAME = "numpy"


def _reach_mask(adj_bool: np.ndarray, start: np.ndarray, blocked: np.ndarray) -> np.ndarray:
    """Boolean mask of nodes reachable from ``start`` without entering
    ``blocked`` (reflexive; start nodes must not be blocked)."""
    allowed = adj_bool & ~blocked[None, :]
    reach = start.copy()
    frontier = start.copy()
    while frontier.any():
        nxt = allowed[frontier].any(axis=0) & ~reach
        reach |= nxt
        frontier = nxt
    return reach


def reaches(adj: np.ndarray, src: int, dst: int) -> bool:
    """True iff a directed path (length >= 0) runs from src to dst."""
    d = adj.shape[0]
    start = np.zeros(d, dtype=bool)
    start[src] = True
    reach = _reach_mask(adj.astype(bool), start, np.zeros(d, dtype=bool))
    return bool(reach[dst])


def _ucp(adj_bool: np.ndarray, obs: np.ndarray, i: int, j: int) -> bool:
    targets = adj_bool[:, j] & ~obs
    if not targets.any():
        return False
    d = adj_bool.shape[0]
    start = np.zeros(d, dtype=bool)
    start[i] = True
    blocked = np.zeros(d, dtype=bool)
    blocked[j] = True
    reach = _reach_mask(adj_bool, start, blocked)
    return bool((reach & targets).any())


def _ubp(adj_bool: np.ndarray, obs: np.ndarray, i: int, j: int) -> bool:
    seeds_i = adj_bool[:, i] & ~obs
    if not seeds_i.any():
        return False
    seeds_j = adj_bool[:, j] & ~obs
    if not seeds_j.any():
        return False
    d = adj_bool.shape[0]
    blocked = np.zeros(d, dtype=bool)
    blocked[i] = True
    blocked[j] = True
    rev = adj_bool.T
    s_i = _reach_mask(rev, seeds_i, blocked)
    s_j = _reach_mask(rev, seeds_j, blocked)
    return bool((s_i & s_j).any())


def up_exists(adj: np.ndarray, obs: np.ndarray, i: int, j: int) -> bool:
    """True iff a UCP (either direction) or UBP connects observed i and j."""
    adj_bool = adj.astype(bool)
    obs_bool = obs.astype(bool)
    return (
        _ucp(adj_bool, obs_bool, i, j)
        or _ucp(adj_bool, obs_bool, j, i)
        or _ubp(adj_bool, obs_bool, i, j)
    )


def cost_terms(adj: np.ndarray, obs: np.ndarray, cls: np.ndarray) -> np.ndarray:
    """Per-dataset inconsistency counts for one candidate graph.

    adj: (d, d) uint8 adjacency.  obs: (m, d) uint8 observed masks.
    cls: (m, d, d) uint8 upper-triangular pair classes, 1 = identified,
    2 = unidentified, 0 = not co-observed.  Returns (m, 2) int64 where
    column 0 counts identified pairs that do have a UCP/UBP and column 1
    counts unidentified pairs that lack one.
    """
    m = obs.shape[0]
    adj_bool = adj.astype(bool)
    out = np.zeros((m, 2), dtype=np.int64)
    for k in range(m):
        obs_k = obs[k].astype(bool)
        rows, cols = np.nonzero(cls[k])
        for i, j in zip(rows.tolist(), cols.tolist()):
            up = (
                _ucp(adj_bool, obs_k, i, j)
                or _ucp(adj_bool, obs_k, j, i)
                or _ubp(adj_bool, obs_k, i, j)
            )
            if cls[k, i, j] == 1:
                if up:
                    out[k, 0] += 1
            elif not up:
                out[k, 1] += 1
    return out
