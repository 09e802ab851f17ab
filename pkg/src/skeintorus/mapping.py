"""Mapping-class action on slopes and skein elements.

A mapping class is the integer matrix [[a, c], [b, d]] with det = 1 (the
columns are (a, b) and (c, d)); it acts on a slope pair by matrix-vector
multiplication and on a skein element key-by-key, fixing eta and all
coefficients.  The twist/opposition/reverse symmetries are the key-level
transforms

    tw : (i, j) -> (i, j+i)      opp: (i, j) -> (i, i-j), coefficients
    rev: (i, j) -> (j, i)             bar-conjugated

with keys re-canonicalized afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels
from .skein import PQ, SkeinElement, canonicalize


@dataclass(frozen=True)
class MappingClass:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("mapping class matrix must have determinant 1")

    @classmethod
    def identity(cls) -> "MappingClass":
        return cls(1, 0, 0, 1)

    @classmethod
    def twist(cls, power: int = 1) -> "MappingClass":
        """The Dehn twist matrix [[1, 0], [power, 1]]: (p, q) -> (p, q + power*p)."""
        return cls(1, power, 0, 1)

    def inverse(self) -> "MappingClass":
        # det = 1, so the inverse is the adjugate.
        return MappingClass(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MappingClass") -> "MappingClass":
        """Matrix product self * other (apply ``other`` first)."""
        return MappingClass(
            self.a * other.a + self.c * other.b,
            self.b * other.a + self.d * other.b,
            self.a * other.c + self.c * other.d,
            self.b * other.c + self.d * other.d,
        )


def act_on_pq(phi: MappingClass, v: PQ | tuple) -> PQ:
    p, q = v
    return canonicalize(phi.a * p + phi.c * q, phi.b * p + phi.d * q)


def act_on_skein(phi: MappingClass, x: SkeinElement) -> SkeinElement:
    out = {}
    kernels.skein_fma(out, x.raw(), phi.a, phi.c, phi.b, phi.d)
    return SkeinElement(out)


def tw(x: SkeinElement) -> SkeinElement:
    return tw_pow(x, 1)


def tw_inv(x: SkeinElement) -> SkeinElement:
    return tw_pow(x, -1)


def tw_pow(x: SkeinElement, k: int) -> SkeinElement:
    out = {}
    kernels.skein_fma(out, x.raw(), 1, 0, k, 1)
    return SkeinElement(out)


def opp(x: SkeinElement) -> SkeinElement:
    out = {}
    kernels.skein_fma(out, x.raw(), 1, 0, 1, -1, esign=-1)
    return SkeinElement(out)


def rev(x: SkeinElement) -> SkeinElement:
    out = {}
    kernels.skein_fma(out, x.raw(), 0, 1, 1, 0)
    return SkeinElement(out)


def _second_column_killer(r: int, s: int) -> MappingClass:
    """A mapping class sending (r, s) to (0, gcd(r, s))."""
    g = math.gcd(r, s)
    rh, sh = r // g, s // g
    # Bezout: b0*rh + d0*sh = 1; then [[sh, -rh], [b0, d0]] has det 1.
    b0, d0 = _bezout(rh, sh)
    return MappingClass(sh, b0, -rh, d0)


def _bezout(x: int, y: int):
    """Integers (u, v) with u*x + v*y = 1 for coprime x, y."""
    old_r, r = x, y
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_u, u = u, old_u - k * u
        old_v, v = v, old_v - k * v
    if old_r == -1:
        old_u, old_v = -old_u, -old_v
    return old_u, old_v


def reduce_pair(p: int, q: int, r: int, s: int):
    """Reduce a discrepancy index pair to the normal form (p1, q1, 0, s1).

    Returns (psi, (p1, q1, 0, s1)) where psi is a mapping class with
    psi*(r,s) = (0, s1), s1 = gcd(r,s) > 0, and psi*(p,q) = (p1, q1) up to
    the (p,q) ~ (-p,-q) identification, with 0 <= q1 < p1.  The normalized
    determinant satisfies p1*s1 = |ps - rq|.  Requires |ps - rq| >= 2; the
    pair (r, s) = (0, 0) is rejected.
    """
    if (r, s) == (0, 0):
        raise ValueError("cannot reduce against the empty second factor")
    det = p * s - r * q
    if abs(det) < 2:
        raise ValueError("reduction requires |ps - rq| >= 2")
    phi = _second_column_killer(r, s)
    x1 = phi.a * p + phi.c * q
    y1 = phi.b * p + phi.d * q
    if x1 < 0:
        x1, y1 = -x1, -y1  # (p,q) ~ (-p,-q), value-preserving
    k = -(y1 // x1)
    psi = MappingClass.twist(k).compose(phi)
    q1 = y1 + k * x1
    s1 = math.gcd(r, s)
    return psi, (x1, q1, 0, s1)
