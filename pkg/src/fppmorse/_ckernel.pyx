# distutils: language = c++
# cython: language_level=3
"""Cython bridge to the C++ Dijkstra kernel in _kernel.hpp."""

from libc.stdint cimport int64_t, uint64_t
from libcpp cimport bool as cbool
from libcpp.vector cimport vector


cdef extern from "_kernel.hpp" namespace "fpp":
    cdef cppclass V:
        int64_t a, b, c

    cdef cppclass Field:
        uint64_t seed
        int kind
        double a, b
        double weight(const V&, const V&) except +

    cdef cppclass Gen:
        int kind
        int64_t param
        vector[int64_t] lefts, widths, rights
        int64_t extent
        void neighbors(const V&, vector[V]&) except +

    cdef cppclass Result:
        double distance
        vector[V] path
        int64_t settled
        cbool exact
        cbool found

    Result dijkstra(const Gen&, const Field&, const V&, const vector[V]&, int64_t,
                    const vector[V]*) except + nogil


cdef inline V _v(tuple t):
    cdef V v
    v.a = t[0]
    v.b = t[1]
    v.c = t[2]
    return v


cdef inline tuple _t(const V& v):
    return (v.a, v.b, v.c)


cdef class Kernel:
    """A generator plus weight field frozen into C++ structures."""

    cdef Gen gen
    cdef Field field

    def __cinit__(self, int kind, int64_t param, lefts, widths, int64_t extent,
                  uint64_t seed, int dist_kind, double a, double b):
        self.gen.kind = kind
        self.gen.param = param
        self.gen.extent = extent
        for L, w in zip(lefts, widths):
            self.gen.lefts.push_back(L)
            self.gen.widths.push_back(w)
            self.gen.rights.push_back(L + w)
        self.field.seed = seed
        self.field.kind = dist_kind
        self.field.a = a
        self.field.b = b

    def weight(self, tuple u, tuple v):
        return self.field.weight(_v(u), _v(v))

    def neighbors(self, tuple v):
        cdef vector[V] out
        self.gen.neighbors(_v(v), out)
        return [_t(w) for w in out]

    def dijkstra(self, tuple source, targets, int64_t cap, allowed=None):
        """Same contract as _pysearch.dijkstra (without the weight argument)."""
        cdef vector[V] tv
        cdef vector[V] av
        cdef vector[V]* ap = NULL
        cdef V src = _v(source)
        cdef Result res
        for t in targets:
            tv.push_back(_v(t))
        if allowed is not None:
            for t in allowed:
                av.push_back(_v(t))
            ap = &av
        with nogil:
            res = dijkstra(self.gen, self.field, src, tv, cap, ap)
        path = [_t(res.path[i]) for i in range(res.path.size())]
        target = path[-1] if res.found else None
        return res.distance, path, res.settled, res.exact, target
