# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled mirror of _kernels_py.

Same raw dict layout and call signatures; coefficients stay Python ints
(arbitrary precision), the speedup comes from compiled dict iteration and
loop bookkeeping in the hot accumulation paths.
"""

BACKEND = "c"


cpdef padd(dict dst, dict src, long shift=0, long esign=1, bint neg=False):
    cdef long e
    cdef object c, nc, e2
    for e, c in src.items():
        e2 = e * esign + shift
        nc = dst.get(e2, 0) + (-c if neg else c)
        if nc:
            dst[e2] = nc
        else:
            del dst[e2]


cpdef pmuladd(dict dst, dict a, dict b, long shift=0, long esign=1,
              bint neg=False):
    cdef long ea, eb, base, e
    cdef object ca, cb, nc
    for ea, ca in a.items():
        if neg:
            ca = -ca
        base = ea + shift
        for eb, cb in b.items():
            e = eb * esign + base
            nc = dst.get(e, 0) + ca * cb
            if nc:
                dst[e] = nc
            else:
                del dst[e]


cpdef dict pmul(dict a, dict b):
    cdef dict out = {}
    pmuladd(out, a, b)
    return out


cpdef skein_fma(dict dst, dict src, long m00, long m01, long m10, long m11,
                long eta_shift=0, long e0=0, long esign=1, bint neg=False,
                object scale=None):
    cdef long k, i, j, ii, jj
    cdef tuple key, nk
    cdef dict poly, tgt
    cdef object got
    for key, poly in src.items():
        k = key[0]
        i = key[1]
        j = key[2]
        ii = m00 * i + m01 * j
        jj = m10 * i + m11 * j
        if ii < 0 or (ii == 0 and jj < 0):
            ii = -ii
            jj = -jj
        nk = (k + eta_shift, ii, jj)
        got = dst.get(nk)
        if got is None:
            tgt = {}
            dst[nk] = tgt
        else:
            tgt = <dict> got
        if scale is None:
            padd(tgt, poly, e0, esign, neg)
        else:
            pmuladd(tgt, <dict> scale, poly, e0, esign, neg)
        if not tgt:
            del dst[nk]
