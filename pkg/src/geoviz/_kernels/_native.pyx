# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; behavior is defined by geoviz._kernels._py."""

from libc.stdlib cimport free, malloc

DEF FNV_OFFSET = 0x811C9DC5
DEF FNV_PRIME = 0x01000193


def khop_reach(long long[::1] indptr, long long[::1] indices,
               Py_ssize_t start, long k, const unsigned char[::1] allowed):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if start < 0 or start >= n or not allowed[start]:
        raise ValueError("start node out of range or not allowed")
    cdef unsigned char* visited = <unsigned char*> malloc(n)
    cdef Py_ssize_t* queue = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    if visited == NULL or queue == NULL:
        free(visited)
        free(queue)
        raise MemoryError()
    cdef Py_ssize_t i, u, v
    cdef long long j
    cdef Py_ssize_t head = 0, tail = 0, level_end
    cdef long depth = 0
    for i in range(n):
        visited[i] = 0
    visited[start] = 1
    queue[tail] = start
    tail += 1
    while head < tail and depth < k:
        depth += 1
        level_end = tail
        while head < level_end:
            u = queue[head]
            head += 1
            for j in range(indptr[u], indptr[u + 1]):
                v = <Py_ssize_t> indices[j]
                if not visited[v] and allowed[v]:
                    visited[v] = 1
                    queue[tail] = v
                    tail += 1
    out = []
    for i in range(n):
        if visited[i]:
            out.append(i)
    free(visited)
    free(queue)
    return out


def overlap_hits(long long[::1] starts, long long[::1] ends,
                 long long q_start, long long q_end):
    cdef Py_ssize_t i, n = starts.shape[0]
    out = []
    for i in range(n):
        if starts[i] < q_end and q_start < ends[i]:
            out.append(i)
    return out


def bbox_hits(double[::1] lats, double[::1] lons,
              double min_lat, double max_lat,
              double min_lon, double max_lon, bint wrap):
    cdef Py_ssize_t i, n = lats.shape[0]
    cdef double lat, lon
    out = []
    for i in range(n):
        lat = lats[i]
        if lat < min_lat or lat > max_lat:
            continue
        lon = lons[i]
        if wrap:
            if lon >= min_lon or lon <= max_lon:
                out.append(i)
        else:
            if min_lon <= lon <= max_lon:
                out.append(i)
    return out


def trigram_counts(const unsigned char[::1] data, int dim):
    cdef Py_ssize_t i, n = data.shape[0]
    cdef unsigned int h
    cdef list counts = [0.0] * dim
    if n < 3:
        return counts
    # accumulate in a C buffer, copy out once
    cdef double* buf = <double*> malloc(dim * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    for i in range(dim):
        buf[i] = 0.0
    for i in range(n - 2):
        h = FNV_OFFSET
        h = (h ^ data[i]) * FNV_PRIME
        h = (h ^ data[i + 1]) * FNV_PRIME
        h = (h ^ data[i + 2]) * FNV_PRIME
        buf[h % <unsigned int> dim] += 1.0
    for i in range(dim):
        counts[i] = buf[i]
    free(buf)
    return counts
