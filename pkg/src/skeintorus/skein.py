"""Canonical skein-element representations on the one-holed torus.

Two spanning families are supported:

* the Chebyshev basis: keys eta^k * T(p,q), where T(p,q) threads the
  primitive slope (p,q)/gcd by the first-kind Chebyshev polynomial T_gcd
  and eta = d + A^2 + A^-2 is the central boundary combination,
* the naive multicurve basis: keys d^k * (p,q) with d the peripheral loop.

Slope pairs are canonicalized under (p,q) ~ (-p,-q) to p > 0, or p = 0 and
q >= 0.  The key with curve (0,0) is the scalar (empty link) part; the
identity T(0,0) = 2*empty is applied whenever a T-indexed term is built,
so no element ever stores an ambiguous "T(0,0)" key.

Raw layout (shared with kernels): dict {(k, p, q): poly-dict}.
"""

from __future__ import annotations

import math
from typing import Iterator, NamedTuple

from . import kernels
from .laurent import LaurentPoly


class PQ(NamedTuple):
    p: int
    q: int


class BasisKey(NamedTuple):
    eta_pow: int
    curve: PQ


class MulticurveKey(NamedTuple):
    boundary_pow: int
    curve: PQ


def canonicalize(p: int, q: int) -> PQ:
    """Canonical representative of the unordered slope pair {(p,q), (-p,-q)}."""
    if p < 0 or (p == 0 and q < 0):
        return PQ(-p, -q)
    return PQ(p, q)


def intersection_number(m1: MulticurveKey, m2: MulticurveKey) -> int:
    """Geometric intersection number |ps - rq|; boundary loops contribute 0."""
    p, q = m1.curve
    r, s = m2.curve
    return abs(p * s - r * q)


# -- Chebyshev coefficient lists (power basis, ascending) -------------------


def _cheb(n: int, t0: list) -> list:
    if n < 0:
        raise ValueError("Chebyshev index must be non-negative")
    if n == 0:
        return t0
    prev, cur = t0, [0, 1]
    for _ in range(n - 1):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def chebyshev_T(n: int) -> list:
    """First kind with T_0 = 2: T_k = x*T_{k-1} - T_{k-2}."""
    return _cheb(n, [2])


def chebyshev_T_prime(n: int) -> list:
    """The T' variation: T'_0 = 1, otherwise equal to T_n."""
    return [1] if n == 0 else chebyshev_T(n)


def chebyshev_S(n: int) -> list:
    """Second kind: S_0 = 1, S_1 = x, same recurrence."""
    return _cheb(n, [1])


def _powers_in_t_prime(n: int) -> list:
    """Coefficients a_i with x^n = sum a_i T'_i; triangular, unit diagonal."""
    # x*T'_0 = T'_1; x*T'_1 = T'_2 + 2 T'_0; x*T'_k = T'_{k+1} + T'_{k-1}.
    cur = [1]
    for _ in range(n):
        nxt = [0] * (len(cur) + 1)
        for i, c in enumerate(cur):
            if not c:
                continue
            if i == 0:
                nxt[1] += c
            elif i == 1:
                nxt[2] += c
                nxt[0] += 2 * c
            else:
                nxt[i + 1] += c
                nxt[i - 1] += c
        cur = nxt
    return cur


def _gcd_primitive(p: int, q: int):
    d = math.gcd(p, q)
    return (d, p // d, q // d) if d else (0, 0, 0)


# -- element containers ------------------------------------------------------


class _Element:
    """Shared container logic for Chebyshev- and multicurve-indexed elements."""

    __slots__ = ("_data",)
    _key_cls = None

    def __init__(self, data: dict | None = None):
        self._data = data if data is not None else {}

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def scalar(cls, coeff):
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.const(coeff)
        return cls({(0, 0, 0): dict(c.raw())} if c else {})

    def raw(self) -> dict:
        return self._data

    def copy(self):
        return type(self)({k: dict(v) for k, v in self._data.items()})

    def is_zero(self) -> bool:
        return not self._data

    def __bool__(self):
        return bool(self._data)

    def __len__(self):
        return len(self._data)

    def __eq__(self, other):
        if isinstance(other, type(self)):
            return self._data == other._data
        return NotImplemented

    __hash__ = None

    def keys(self):
        return [self._key_cls(k, PQ(p, q)) for (k, p, q) in sorted(self._data)]

    def items(self) -> Iterator:
        for (k, p, q) in sorted(self._data):
            yield (self._key_cls(k, PQ(p, q)),
                   LaurentPoly(self._data[(k, p, q)]))

    def coefficient(self, key) -> LaurentPoly:
        k, (p, q) = key
        return LaurentPoly(self._data.get((k, p, q), {}))

    def __add__(self, other):
        out = {k: dict(v) for k, v in self._data.items()}
        kernels.skein_fma(out, other._data, 1, 0, 0, 1)
        return type(self)(out)

    def __sub__(self, other):
        out = {k: dict(v) for k, v in self._data.items()}
        kernels.skein_fma(out, other._data, 1, 0, 0, 1, neg=True)
        return type(self)(out)

    def __neg__(self):
        return type(self)(
            {k: {e: -c for e, c in v.items()} for k, v in self._data.items()})

    def scale(self, coeff):
        """Module scaling by an integer or Laurent polynomial."""
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.const(coeff)
        if c.is_zero():
            return type(self)({})
        out = {}
        kernels.skein_fma(out, self._data, 1, 0, 0, 1, scale=c.raw())
        return type(self)(out)

    def __repr__(self):
        return f"{type(self).__name__}({self._data!r})"


class SkeinElement(_Element):
    _key_cls = BasisKey

    @classmethod
    def basis(cls, eta_pow: int, p: int, q: int, coeff=1) -> "SkeinElement":
        """eta^eta_pow * T(p,q) scaled by coeff, with T(0,0) = 2*empty folded in."""
        if eta_pow < 0:
            raise ValueError("eta power must be non-negative")
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.const(coeff)
        if c.is_zero():
            return cls({})
        cp, cq = canonicalize(p, q)
        if (cp, cq) == (0, 0):
            c = c + c
        return cls({(eta_pow, cp, cq): dict(c.raw())})

    @classmethod
    def eta(cls, power: int = 1, coeff=1) -> "SkeinElement":
        """eta^power times the empty link (the scalar key)."""
        if power < 0:
            raise ValueError("eta power must be non-negative")
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.const(coeff)
        if c.is_zero():
            return cls({})
        return cls({(power, 0, 0): dict(c.raw())})

    def eta_multiply(self, power: int = 1) -> "SkeinElement":
        """Multiplication by the central element eta^power."""
        if power < 0:
            raise ValueError("eta power must be non-negative")
        return SkeinElement(
            {(k + power, p, q): dict(v) for (k, p, q), v in self._data.items()})

    def eta_zero_part(self) -> "SkeinElement":
        """The image under eta -> 0 (keys with eta_pow = 0 only)."""
        return SkeinElement(
            {k: dict(v) for k, v in self._data.items() if k[0] == 0})

    # -- rendering ----------------------------------------------------------

    @staticmethod
    def _term_order(key):
        k, p, q = key
        return (-p, -q, k)

    def __str__(self):
        if not self._data:
            return "0"
        parts = []
        for key in sorted(self._data, key=self._term_order):
            k, p, q = key
            factors = []
            if k == 1:
                factors.append("eta")
            elif k > 1:
                factors.append(f"eta^{k}")
            if (p, q) != (0, 0):
                factors.append(f"T({p},{q})")
            c = LaurentPoly(self._data[key])
            cs = str(c)
            if not factors:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(factors))
            elif cs == "-1":
                parts.append("-" + "*".join(factors))
            else:
                if len(c) > 1:
                    cs = f"({cs})"
                parts.append(cs + "*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def to_latex(self) -> str:
        if not self._data:
            return "0"
        parts = []
        for key in sorted(self._data, key=self._term_order):
            k, p, q = key
            factors = []
            if k == 1:
                factors.append(r"\eta")
            elif k > 1:
                factors.append(rf"\eta^{{{k}}}")
            if (p, q) != (0, 0):
                factors.append(rf"\binom{{{p}}}{{{q}}}_T")
            c = LaurentPoly(self._data[key])
            cs = c.to_latex()
            if len(c) > 1:
                cs = f"({cs})"
            body = " ".join(factors)
            if not body:
                parts.append(cs)
            elif cs == "1":
                parts.append(body)
            else:
                parts.append(cs + r" \, " + body)
        return " + ".join(parts)

    def to_json(self) -> list:
        return [
            {"eta": k, "p": p, "q": q,
             "coeff": LaurentPoly(self._data[(k, p, q)]).to_json()}
            for (k, p, q) in sorted(self._data)
        ]

    @classmethod
    def from_json(cls, data) -> "SkeinElement":
        out = {}
        for rec in data:
            poly = LaurentPoly.from_json(rec["coeff"])
            if poly.is_zero():
                continue
            key = (int(rec["eta"]),) + tuple(canonicalize(int(rec["p"]),
                                                          int(rec["q"])))
            tgt = out.setdefault(key, {})
            kernels.padd(tgt, poly.raw())
            if not tgt:
                del out[key]
        return cls(out)


class MulticurveElement(_Element):
    _key_cls = MulticurveKey

    @classmethod
    def curve(cls, boundary_pow: int, p: int, q: int, coeff=1) -> "MulticurveElement":
        if boundary_pow < 0:
            raise ValueError("boundary power must be non-negative")
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.const(coeff)
        if c.is_zero():
            return cls({})
        cp, cq = canonicalize(p, q)
        return cls({(boundary_pow, cp, cq): dict(c.raw())})

    def __str__(self):
        if not self._data:
            return "0"
        parts = []
        for key in sorted(self._data, key=SkeinElement._term_order):
            k, p, q = key
            factors = []
            if k == 1:
                factors.append("d")
            elif k > 1:
                factors.append(f"d^{k}")
            if (p, q) != (0, 0):
                factors.append(f"({p},{q})")
            c = LaurentPoly(self._data[key])
            cs = str(c)
            if not factors:
                parts.append(f"({cs})" if len(c) > 1 else cs)
            elif cs == "1":
                parts.append("*".join(factors))
            elif cs == "-1":
                parts.append("-" + "*".join(factors))
            else:
                if len(c) > 1:
                    cs = f"({cs})"
                parts.append(cs + "*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        return [
            {"boundary": k, "p": p, "q": q,
             "coeff": LaurentPoly(self._data[(k, p, q)]).to_json()}
            for (k, p, q) in sorted(self._data)
        ]

    @classmethod
    def from_json(cls, data) -> "MulticurveElement":
        out = {}
        for rec in data:
            poly = LaurentPoly.from_json(rec["coeff"])
            if poly.is_zero():
                continue
            key = (int(rec["boundary"]),) + tuple(canonicalize(int(rec["p"]),
                                                               int(rec["q"])))
            tgt = out.setdefault(key, {})
            kernels.padd(tgt, poly.raw())
            if not tgt:
                del out[key]
        return cls(out)


# -- basis conversions -------------------------------------------------------


def _eta_const() -> LaurentPoly:
    return LaurentPoly({2: 1, -2: 1})  # A^2 + A^-2


def _binomials(n: int) -> list:
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row


def to_multicurve(x: SkeinElement) -> MulticurveElement:
    """Expand eta powers binomially in d and T-threadings in cables.

    eta^k = sum_j C(k,j) (A^2+A^-2)^(k-j) d^j, and T(p,q) = T_gcd applied
    to the primitive curve, the i-th power being the i-fold cable.
    """
    out = {}
    const = _eta_const()
    for (k, p, q), poly in x.raw().items():
        d, pp, qq = _gcd_primitive(p, q)
        if d == 0:
            cable = [(0, 0, 1)]
        else:
            cable = [(i * pp, i * qq, c)
                     for i, c in enumerate(chebyshev_T(d)) if c]
        binom = _binomials(k)
        for j in range(k + 1):
            w = (const ** (k - j)) * binom[j]
            for cp, cq, t in cable:
                wt = w * t
                key = (j,) + tuple(canonicalize(cp, cq))
                tgt = out.setdefault(key, {})
                kernels.pmuladd(tgt, poly, wt.raw())
                if not tgt:
                    del out[key]
    return MulticurveElement(out)


def from_multicurve(x: MulticurveElement) -> SkeinElement:
    """Inverse change of basis: powers in T', boundary powers in eta.

    d^k = sum_j C(k,j) (-1)^(k-j) (A^2+A^-2)^(k-j) eta^j, and the d-fold
    cable expands through x^d = sum a_i T'_i (triangular, unit diagonal);
    T'_0 is the empty link so no T(0,0) bookkeeping is needed.
    """
    out = {}
    const = _eta_const()
    for (k, p, q), poly in x.raw().items():
        d, pp, qq = _gcd_primitive(p, q)
        if d == 0:
            curve_terms = [(0, 0, 1)]
        else:
            curve_terms = [(i * pp, i * qq, a)
                           for i, a in enumerate(_powers_in_t_prime(d)) if a]
        binom = _binomials(k)
        for j in range(k + 1):
            w = (const ** (k - j)) * binom[j]
            if (k - j) % 2:
                w = -w
            for cp, cq, t in curve_terms:
                wt = w * t
                key = (j,) + tuple(canonicalize(cp, cq))
                tgt = out.setdefault(key, {})
                kernels.pmuladd(tgt, poly, wt.raw())
                if not tgt:
                    del out[key]
    return SkeinElement(out)


def to_s_basis(x: SkeinElement) -> dict:
    """Rewrite in the second-kind (S) threading; rendering aid only.

    Uses T_d = S_d - S_(d-2) for d >= 2 and T_d = S_d for d <= 1.  Returns
    {BasisKey: LaurentPoly} with the curve part understood as S-threaded.
    """
    out = {}
    for (k, p, q), poly in x.raw().items():
        d, pp, qq = _gcd_primitive(p, q)
        targets = [((k, p, q), False)]
        if d >= 2:
            low = canonicalize((d - 2) * pp, (d - 2) * qq)
            targets.append(((k, low.p, low.q), True))
        for key, negate in targets:
            tgt = out.setdefault(key, {})
            kernels.padd(tgt, poly, neg=negate)
            if not tgt:
                del out[key]
    return {BasisKey(k, PQ(p, q)): LaurentPoly(v)
            for (k, p, q), v in out.items()}


def render_s_basis(x: SkeinElement) -> str:
    terms = to_s_basis(x)
    if not terms:
        return "0"
    parts = []
    for key in sorted(terms, key=lambda b: (-b.curve.p, -b.curve.q, b.eta_pow)):
        k, (p, q) = key
        factors = []
        if k == 1:
            factors.append("eta")
        elif k > 1:
            factors.append(f"eta^{k}")
        if (p, q) != (0, 0):
            factors.append(f"S({p},{q})")
        c = terms[key]
        cs = str(c)
        if not factors:
            parts.append(cs)
        elif cs == "1":
            parts.append("*".join(factors))
        elif cs == "-1":
            parts.append("-" + "*".join(factors))
        else:
            if len(c) > 1:
                cs = f"({cs})"
            parts.append(cs + "*" + "*".join(factors))
    return " + ".join(parts).replace("+ -", "- ")
