"""Exact sparse Laurent polynomials over Z in the variable A.

Coefficients are Python ints (arbitrary precision), exponents are machine
ints; values are kept in canonical form (no zero coefficients) so that
structural equality is semantic equality.  Instances are treated as
immutable: every operation returns a fresh value.
"""

from __future__ import annotations

from . import kernels


class LaurentPoly:
    __slots__ = ("_d",)

    def __init__(self, terms=None):
        d = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for e, c in items:
                nc = d.get(e, 0) + c
                if nc:
                    d[e] = nc
                elif e in d:
                    del d[e]
        self._d = d

    @classmethod
    def _raw(cls, d: dict) -> "LaurentPoly":
        # Internal: adopt an already-canonical dict without copying.
        out = object.__new__(cls)
        out._d = d
        return out

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls._raw({0: 1})

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw({exponent: coeff} if coeff else {})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls._raw({0: c} if c else {})

    # -- structure ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        """Copy of the exponent -> coefficient map."""
        return dict(self._d)

    def raw(self) -> dict:
        """The underlying dict; callers must not mutate it."""
        return self._d

    def is_zero(self) -> bool:
        return not self._d

    def degree(self):
        return max(self._d) if self._d else None

    def valuation(self):
        return min(self._d) if self._d else None

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def __eq__(self, other):
        if isinstance(other, int):
            return self._d == ({0: other} if other else {})
        if isinstance(other, LaurentPoly):
            return self._d == other._d
        return NotImplemented

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, LaurentPoly):
            return x._d
        if isinstance(x, int):
            return {0: x} if x else {}
        raise TypeError(f"cannot combine LaurentPoly with {type(x).__name__}")

    def __add__(self, other):
        d = dict(self._d)
        kernels.padd(d, self._coerce(other))
        return LaurentPoly._raw(d)

    __radd__ = __add__

    def __sub__(self, other):
        d = dict(self._d)
        kernels.padd(d, self._coerce(other), neg=True)
        return LaurentPoly._raw(d)

    def __rsub__(self, other):
        d = self._coerce(other).copy()
        kernels.padd(d, self._d, neg=True)
        return LaurentPoly._raw(d)

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._d.items()})

    def __mul__(self, other):
        return LaurentPoly._raw(kernels.pmul(self._d, self._coerce(other)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined for LaurentPoly")
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiplication by the monomial A^k."""
        return LaurentPoly._raw({e + k: c for e, c in self._d.items()})

    def conjugate(self) -> "LaurentPoly":
        """The bar involution exchanging A and A^-1."""
        return LaurentPoly._raw({-e: c for e, c in self._d.items()})

    # -- rendering ---------------------------------------------------------

    def __str__(self):
        if not self._d:
            return "0"
        parts = []
        for e in sorted(self._d, reverse=True):
            c = self._d[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "A" if e == 1 else f"A^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self._d!r})"

    def to_latex(self) -> str:
        if not self._d:
            return "0"
        parts = []
        for e in sorted(self._d, reverse=True):
            c = self._d[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "A" if e == 1 else f"A^{{{e}}}"
                body = var if mag == 1 else f"{mag}{var}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list:
        """[[exponent, coefficient-as-decimal-string], ...] sorted by exponent."""
        return [[e, str(self._d[e])] for e in sorted(self._d)]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls((int(e), int(c)) for e, c in data)


A = LaurentPoly.monomial(1)
A_INV = LaurentPoly.monomial(-1)
ONE = LaurentPoly.one()
ZERO = LaurentPoly.zero()


def quantum_int(k: int) -> LaurentPoly:
    """[k] = (A^2k - A^-2k)/(A^2 - A^-2) = A^(2k-2) + A^(2k-6) + ... + A^-(2k-2)."""
    if k < 0:
        raise ValueError("quantum integers are defined for k >= 0")
    return LaurentPoly._raw({2 * (k - 1) - 4 * i: 1 for i in range(k)})


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact division; raises ValueError when den does not divide num."""
    if den.is_zero():
        raise ValueError("division by zero polynomial")
    if num.is_zero():
        return LaurentPoly.zero()
    nd = dict(num.raw())
    dd = den.raw()
    dtop = max(dd)
    dlead = dd[dtop]
    # Valuations add over an integral domain, so an exact quotient never
    # has exponents below this bound; crossing it means the division fails.
    vbound = num.valuation() - den.valuation()
    out = {}
    while nd:
        ntop = max(nd)
        c, r = divmod(nd[ntop], dlead)
        e = ntop - dtop
        if r or e < vbound:
            raise ValueError("not an exact division")
        out[e] = c
        kernels.pmuladd(nd, {e: c}, dd, neg=True)
    return LaurentPoly(out)
