"""Pure-Python arithmetic kernels.

Raw data layout shared with the compiled backend:

* a Laurent polynomial in A is a dict {exponent: coefficient} with no zero
  coefficients stored,
* a skein element is a dict {(eta_pow, p, q): poly} with no empty polys
  stored, where (p, q) is a canonical slope pair (p > 0, or p = 0 and
  q >= 0) and (0, 0) is the scalar (empty-link) key.

All *_into functions mutate ``dst`` in place and keep it canonical.
``esign = -1`` applies the bar conjugation A <-> A^-1 to the source on the
fly; ``neg`` negates it; ``shift`` multiplies by A^shift.
"""

BACKEND = "python"


def padd(dst, src, shift=0, esign=1, neg=False):
    """dst += (+-) A^shift * src(A^esign)."""
    for e, c in src.items():
        e2 = e * esign + shift
        nc = dst.get(e2, 0) + (-c if neg else c)
        if nc:
            dst[e2] = nc
        else:
            del dst[e2]


def pmuladd(dst, a, b, shift=0, esign=1, neg=False):
    """dst += (+-) A^shift * a * b(A^esign)."""
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


def pmul(a, b):
    out = {}
    pmuladd(out, a, b)
    return out


def skein_fma(dst, src, m00, m01, m10, m11, eta_shift=0, e0=0, esign=1,
              neg=False, scale=None):
    """Fused remap-and-accumulate over a raw skein dict.

    Every key (k, i, j) of ``src`` is sent to (k + eta_shift, i', j') with
    (i', j') the canonical form of (m00*i + m01*j, m10*i + m11*j), and its
    poly is accumulated into dst scaled by A^e0 (times ``scale`` if given),
    conjugated when esign = -1, negated when ``neg``.
    """
    for key, poly in src.items():
        k, i, j = key
        ii = m00 * i + m01 * j
        jj = m10 * i + m11 * j
        if ii < 0 or (ii == 0 and jj < 0):
            ii = -ii
            jj = -jj
        nk = (k + eta_shift, ii, jj)
        tgt = dst.get(nk)
        if tgt is None:
            tgt = {}
            dst[nk] = tgt
        if scale is None:
            padd(tgt, poly, e0, esign, neg)
        else:
            pmuladd(tgt, scale, poly, e0, esign, neg)
        if not tgt:
            del dst[nk]
