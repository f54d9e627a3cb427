"""Numba kernel backend: jitted breadth-first searches over uint8 adjacency
matrices.  Hot path of the enumeration engine; mirrors _kernels_np exactly.
"""
from __future__ import annotations

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def _reaches_jit(adj, src, dst):
    d = adj.shape[0]
    if src == dst:
        return True
    seen = np.zeros(d, np.uint8)
    queue = np.empty(d, np.int64)
    head, tail = 0, 1
    queue[0] = src
    seen[src] = 1
    while head < tail:
        u = queue[head]
        head += 1
        for w in range(d):
            if adj[u, w] != 0 and seen[w] == 0:
                if w == dst:
                    return True
                seen[w] = 1
                queue[tail] = w
                tail += 1
    return False


@njit(cache=True)
def _ucp_jit(adj, obs, i, j, seen, queue):
    d = adj.shape[0]
    found_target = False
    for v in range(d):
        if adj[v, j] != 0 and obs[v] == 0:
            found_target = True
            break
    if not found_target:
        return False
    for v in range(d):
        seen[v] = 0
    seen[i] = 1
    seen[j] = 1  # paths must avoid j
    queue[0] = i
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        if obs[u] == 0 and adj[u, j] != 0:
            return True
        for w in range(d):
            if adj[u, w] != 0 and seen[w] == 0:
                seen[w] = 1
                queue[tail] = w
                tail += 1
    return False


@njit(cache=True)
def _ubp_jit(adj, obs, i, j, seen_i, seen_j, queue):
    d = adj.shape[0]
    # nodes reaching an unobserved direct parent of i, avoiding i and j
    for v in range(d):
        seen_i[v] = 0
    head, tail = 0, 0
    for v in range(d):
        if adj[v, i] != 0 and obs[v] == 0:
            seen_i[v] = 1
            queue[tail] = v
            tail += 1
    if tail == 0:
        return False
    seen_i[i] = 1
    seen_i[j] = 1
    while head < tail:
        w = queue[head]
        head += 1
        for u in range(d):
            if adj[u, w] != 0 and seen_i[u] == 0:
                seen_i[u] = 1
                queue[tail] = u
                tail += 1
    # symmetric sweep for j
    for v in range(d):
        seen_j[v] = 0
    head, tail = 0, 0
    for v in range(d):
        if adj[v, j] != 0 and obs[v] == 0:
            seen_j[v] = 1
            queue[tail] = v
            tail += 1
    if tail == 0:
        return False
    seen_j[i] = 1
    seen_j[j] = 1
    while head < tail:
        w = queue[head]
        head += 1
        for u in range(d):
            if adj[u, w] != 0 and seen_j[u] == 0:
                seen_j[u] = 1
                queue[tail] = u
                tail += 1
    for v in range(d):
        if v != i and v != j and seen_i[v] != 0 and seen_j[v] != 0:
            return True
    return False


@njit(cache=True)
def _up_jit(adj, obs, i, j, seen_a, seen_b, queue):
    if _ucp_jit(adj, obs, i, j, seen_a, queue):
        return True
    if _ucp_jit(adj, obs, j, i, seen_a, queue):
        return True
    return _ubp_jit(adj, obs, i, j, seen_a, seen_b, queue)


@njit(cache=True)
def _cost_terms_jit(adj, obs, cls):
    m = obs.shape[0]
    d = adj.shape[0]
    out = np.zeros((m, 2), np.int64)
    seen_a = np.empty(d, np.uint8)
    seen_b = np.empty(d, np.uint8)
    queue = np.empty(d, np.int64)
    for k in range(m):
        for i in range(d):
            for j in range(i + 1, d):
                c = cls[k, i, j]
                if c == 0:
                    continue
                up = _up_jit(adj, obs[k], i, j, seen_a, seen_b, queue)
                if c == 1:
                    if up:
                        out[k, 0] += 1
                elif not up:
                    out[k, 1] += 1
    return out


def reaches(adj: np.ndarray, src: int, dst: int) -> bool:
    return bool(_reaches_jit(adj, src, dst))


def up_exists(adj: np.ndarray, obs: np.ndarray, i: int, j: int) -> bool:
    d = adj.shape[0]
    seen_a = np.empty(d, np.uint8)
    seen_b = np.empty(d, np.uint8)
    queue = np.empty(d, np.int64)
    return bool(_up_jit(adj, obs, i, j, seen_a, seen_b, queue))


def cost_terms(adj: np.ndarray, obs: np.ndarray, cls: np.ndarray) -> np.ndarray:
    return _cost_terms_jit(adj, obs, cls)
