"""Pure-Python kernels.

Reference implementations of the hot loops. The compiled module
``geoviz._kernels._native`` mirrors these exactly; equivalence between the
two backends is asserted by the test suite.
"""

from __future__ import annotations

from collections import deque

FNV_OFFSET = 0x811C9DC5
FNV_PRIME = 0x01000193
_MASK32 = 0xFFFFFFFF


def khop_reach(indptr, indices, start, k, allowed):
    """Nodes reachable from ``start`` in at most ``k`` undirected hops.

    ``indptr``/``indices`` is a CSR adjacency over node indexes 0..n-1;
    ``allowed`` is a 0/1 byte mask of traversable nodes (``start`` must be
    allowed). Returns a sorted list of reached node indexes.
    """
    n = len(indptr) - 1
    if not (0 <= start < n) or not allowed[start]:
        raise ValueError("start node out of range or not allowed")
    visited = bytearray(n)
    visited[start] = 1
    frontier = deque([start])
    depth = 0
    while frontier and depth < k:
        depth += 1
        for _ in range(len(frontier)):
            u = frontier.popleft()
            for j in range(indptr[u], indptr[u + 1]):
                v = int(indices[j])
                if not visited[v] and allowed[v]:
                    visited[v] = 1
                    frontier.append(v)
    return [i for i in range(n) if visited[i]]


def overlap_hits(starts, ends, q_start, q_end):
    """Indexes i with half-open overlap: starts[i] < q_end and q_start < ends[i]."""
    return [
        i
        for i in range(len(starts))
        if starts[i] < q_end and q_start < ends[i]
    ]


def bbox_hits(lats, lons, min_lat, max_lat, min_lon, max_lon, wrap):
    """Indexes of points inside the box.

    Latitude bounds are inclusive. With ``wrap`` the longitude interval
    crosses the antimeridian: lon >= min_lon or lon <= max_lon; otherwise
    min_lon <= lon <= max_lon.
    """
    hits = []
    for i in range(len(lats)):
        lat = lats[i]
        if lat < min_lat or lat > max_lat:
            continue
        lon = lons[i]
        if wrap:
            if lon >= min_lon or lon <= max_lon:
                hits.append(i)
        else:
            if min_lon <= lon <= max_lon:
                hits.append(i)
    return hits


def trigram_counts(data, dim):
    """Bucket counts of FNV-1a-hashed byte trigrams of ``data``.

    Returns a list of ``dim`` floats; inputs shorter than 3 bytes yield all
    zeros. Bucket = fnv1a32(trigram) mod dim.
    """
    counts = [0.0] * dim
    for i in range(len(data) - 2):
        h = FNV_OFFSET
        h = ((h ^ data[i]) * FNV_PRIME) & _MASK32
        h = ((h ^ data[i + 1]) * FNV_PRIME) & _MASK32
        h = ((h ^ data[i + 2]) * FNV_PRIME) & _MASK32
        counts[h % dim] += 1.0
    return counts
