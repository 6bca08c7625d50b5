# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled relaxation kernel.  Same contract as _fallback.dijkstra_update."""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc, realloc

cnp.import_array()

BACKEND = "compiled"

cdef struct HeapEntry:
    double d
    long long s
    long long v

cdef inline bint _less(HeapEntry a, HeapEntry b) nogil:
    if a.d != b.d:
        return a.d < b.d
    return a.s < b.s


cdef class _Heap:
    cdef HeapEntry* buf
    cdef Py_ssize_t size
    cdef Py_ssize_t cap

    def __cinit__(self, Py_ssize_t cap0):
        if cap0 < 16:
            cap0 = 16
        self.buf = <HeapEntry*> malloc(cap0 * sizeof(HeapEntry))
        if self.buf == NULL:
            raise MemoryError()
        self.size = 0
        self.cap = cap0

    def __dealloc__(self):
        if self.buf != NULL:
            free(self.buf)

    cdef int push(self, double d, long long s, long long v) except -1:
        cdef Py_ssize_t i, parent
        cdef HeapEntry e
        if self.size == self.cap:
            self.cap *= 2
            self.buf = <HeapEntry*> realloc(self.buf, self.cap * sizeof(HeapEntry))
            if self.buf == NULL:
                raise MemoryError()
        e.d = d
        e.s = s
        e.v = v
        i = self.size
        self.size += 1
        while i > 0:
            parent = (i - 1) >> 1
            if _less(e, self.buf[parent]):
                self.buf[i] = self.buf[parent]
                i = parent
            else:
                break
        self.buf[i] = e

    cdef HeapEntry pop(self) nogil:
        cdef HeapEntry top = self.buf[0]
        cdef HeapEntry last
        cdef Py_ssize_t i = 0, child
        self.size -= 1
        last = self.buf[self.size]
        while True:
            child = 2 * i + 1
            if child >= self.size:
                break
            if child + 1 < self.size and _less(self.buf[child + 1], self.buf[child]):
                child += 1
            if _less(self.buf[child], last):
                self.buf[i] = self.buf[child]
                i = child
            else:
                break
        self.buf[i] = last
        return top


def dijkstra_update(Py_ssize_t n,
                    long long[::1] first,
                    long long[::1] eto,
                    long long[::1] enxt,
                    double[::1] ew,
                    Py_ssize_t arc_count,
                    double[::1] dist,
                    long long[::1] src,
                    long long[::1] seeds):
    cdef _Heap heap = _Heap(seeds.shape[0] * 2 + 16)
    cdef Py_ssize_t i
    cdef long long v, u, a, s
    cdef double d, nd
    cdef HeapEntry top
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] touched_flag = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] tf = touched_flag
    cdef long long* touched = <long long*> malloc((n if n > 0 else 1) * sizeof(long long))
    cdef Py_ssize_t n_touched = 0
    cdef cnp.ndarray out

    if touched == NULL:
        raise MemoryError()
    try:
        for i in range(seeds.shape[0]):
            v = seeds[i]
            heap.push(dist[v], src[v], v)
        while heap.size > 0:
            top = heap.pop()
            d = top.d
            s = top.s
            v = top.v
            if d > dist[v] or (d == dist[v] and s > src[v]):
                continue
            a = first[v]
            while a != -1:
                u = eto[a]
                nd = d + ew[a]
                if nd < dist[u] or (nd == dist[u] and s < src[u]):
                    if nd < dist[u] and tf[u] == 0:
                        tf[u] = 1
                        touched[n_touched] = u
                        n_touched += 1
                    dist[u] = nd
                    src[u] = s
                    heap.push(nd, s, u)
                a = enxt[a]
        out = np.empty(n_touched, dtype=np.int64)
        for i in range(n_touched):
            (<long long*> cnp.PyArray_DATA(out))[i] = touched[i]
        return out
    finally:
        free(touched)
