"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as coordinate vectors over Q in the power basis
1, zeta, ..., zeta^(phi(N)-1) of Q[x]/(Phi_N).  Because the basis is fixed
and reduction is canonical, two elements of the same field are equal iff
their coordinate tuples are equal.
"""
from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "CyclotomicNumber",
    "cyclotomic_polynomial",
    "make_root_of_unity",
    "field_invert",
    "promote",
    "approx_complex",
    "parse_rational",
    "as_cyclotomic",
]

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


# --------------------------------------------------------------------------
# dense polynomials over Q, lowest degree first
# --------------------------------------------------------------------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = [Fraction(x) for x in a]
    lead = Fraction(b[-1])
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for i, y in enumerate(b):
            r[shift + i] -= f * y
        r = _trim(r)
    return _trim(q), r


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    Computed as (x^n - 1) divided by every Phi_d with d | n, d < n.
    """
    if n < 1:
        raise ValueError(f"cyclotomic order must be positive, got {n}")
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, [Fraction(c) for c in cyclotomic_polynomial(d)])
            assert not rem
    return tuple(int(c) for c in num)


@lru_cache(maxsize=None)
def _degree(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Rows are x^i mod Phi_n for 0 <= i < 2*deg - 1 (integer coordinates)."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(max(2 * deg - 1, 1)):
        rows.append(tuple(cur))
        # multiply by x and reduce with the monic Phi_n
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    return tuple(rows)


def _reduce(n: int, coeffs) -> tuple[Fraction, ...]:
    """Reduce an arbitrary-length coefficient list modulo Phi_n."""
    deg = _degree(n)
    out = [Fraction(0)] * deg
    table = _power_table(n)
    high = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i < deg:
            out[i] += c
        elif i < len(table):
            for t, row_c in enumerate(table[i]):
                if row_c:
                    out[t] += c * row_c
        else:
            high.append((i, c))
    if high:
        # rare path: exponents beyond the precomputed table
        top = max(i for i, _ in high)
        poly = [Fraction(0)] * (top + 1)
        for i, c in high:
            poly[i] += c
        _, rem = _poly_divmod(poly, [Fraction(c) for c in cyclotomic_polynomial(n)])
        for i, c in enumerate(rem):
            out[i] += c
    return tuple(out)


def parse_rational(text) -> Fraction:
    """Parse a decimal-free ``"p/q"`` or ``"p"`` string."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ValueError(f"not a rational literal: {text!r}")
    num, _, den = text.strip().partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


class CyclotomicNumber:
    """An element of Q(zeta_order), immutable."""

    __slots__ = ("order", "coords")

    def __init__(self, order: int, coords=()):
        if order < 1:
            raise ValueError(f"cyclotomic order must be positive, got {order}")
        deg = _degree(order)
        coords = [Fraction(c) for c in coords]
        if len(coords) > deg:
            raise ValueError(
                f"{len(coords)} coordinates given but Q(zeta_{order}) has degree {deg}"
            )
        coords += [Fraction(0)] * (deg - len(coords))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coords", tuple(coords))

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    @classmethod
    def _raw(cls, order, coords):
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coords", coords)
        return obj

    @classmethod
    def from_rational(cls, q, order: int = 1) -> "CyclotomicNumber":
        return cls(order, [Fraction(q)])

    @classmethod
    def from_exponents(cls, order: int, terms) -> "CyclotomicNumber":
        """Build sum(c * zeta^e) from an iterable of (e, c) pairs."""
        acc = {}
        for e, c in terms:
            e %= order
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        poly = [Fraction(0)] * order
        for e, c in acc.items():
            poly[e] += c
        return cls._raw(order, _reduce(order, poly))

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __bool__(self):
        return not self.is_zero()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.order == self.order:
                return self, other
            m = math.lcm(self.order, other.order)
            return promote(self, m), promote(other, m)
        if isinstance(other, (int, Rational)):
            return self, CyclotomicNumber(self.order, [Fraction(other)])
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CyclotomicNumber._raw(a.order, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self.order, tuple(-x for x in self.coords))

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CyclotomicNumber._raw(a.order, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if len(a.coords) == 1:
            return CyclotomicNumber._raw(a.order, (a.coords[0] * b.coords[0],))
        return CyclotomicNumber._raw(a.order, _reduce(a.order, _poly_mul(a.coords, b.coords)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * field_invert(b)

    def __rtruediv__(self, other):
        return field_invert(self) * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base, e = field_invert(self), -e
        result = CyclotomicNumber(self.order, [1])
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coords == b.coords

    def __hash__(self):
        # equal elements may live in different fields; only rationals get a
        # representation-independent hash
        if self.is_rational():
            return hash(self.coords[0])
        return hash("CyclotomicNumber")

    def __repr__(self):
        return f"CyclotomicNumber({self.order}, {[str(c) for c in self.coords]})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                z = f"z{self.order}" + (f"^{i}" if i > 1 else "")
                terms.append(z if c == 1 else f"{c}*{z}")
        return " + ".join(terms) if terms else "0"

    def __complex__(self):
        return approx_complex(self)

    def to_json(self, include_order: bool = True) -> dict:
        doc = {"coords": [str(c) for c in self.coords]}
        if include_order:
            doc["order"] = self.order
        return doc

    @classmethod
    def from_json(cls, doc, default_order: int | None = None) -> "CyclotomicNumber":
        if not isinstance(doc, dict) or "coords" not in doc:
            raise ValueError("cyclotomic number must be an object with 'coords'")
        order = doc.get("order", default_order)
        if order is None:
            order = 1
        if not isinstance(order, int) or isinstance(order, bool) or order < 1:
            raise ValueError(f"invalid cyclotomic order {order!r}")
        coords = doc["coords"]
        if not isinstance(coords, list):
            raise ValueError("'coords' must be a list")
        return cls(order, [parse_rational(c) for c in coords])


def as_cyclotomic(x, order: int = 1) -> CyclotomicNumber:
    if isinstance(x, CyclotomicNumber):
        return x
    return CyclotomicNumber(order, [Fraction(x)])


def make_root_of_unity(n: int, e: int) -> CyclotomicNumber:
    """zeta_n ** e as an element of Q(zeta_n)."""
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    return CyclotomicNumber.from_exponents(n, [(e, 1)])


def _ext_gcd(a, b):
    """Return (g, s) with s*a = g (mod b), g the monic gcd of a and b."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = [Fraction(1)], []
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    return r0, s0


def field_invert(x: CyclotomicNumber) -> CyclotomicNumber:
    """Multiplicative inverse via the extended Euclidean algorithm in Q[x]."""
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero in a cyclotomic field")
    if x.is_rational():
        return CyclotomicNumber._raw(x.order, (1 / x.coords[0],) + x.coords[1:])
    phi = [Fraction(c) for c in cyclotomic_polynomial(x.order)]
    g, s = _ext_gcd(list(x.coords), phi)
    # Phi_n is irreducible, so the gcd is a nonzero constant
    assert len(g) == 1, "Phi_n must be irreducible"
    inv = [c / g[0] for c in s]
    return CyclotomicNumber._raw(x.order, _reduce(x.order, inv))


def promote(x, m: int) -> CyclotomicNumber:
    """Embed x into Q(zeta_m) via zeta_N -> zeta_m^(m/N)."""
    x = as_cyclotomic(x)
    if m % x.order:
        raise ValueError(f"cannot promote Q(zeta_{x.order}) into Q(zeta_{m}): {x.order} does not divide {m}")
    if m == x.order:
        return x
    step = m // x.order
    poly = [Fraction(0)] * (step * (len(x.coords) - 1) + 1)
    for i, c in enumerate(x.coords):
        poly[i * step] = c
    return CyclotomicNumber._raw(m, _reduce(m, poly))


def approx_complex(x) -> complex:
    """Double-precision value with zeta_N = exp(2 pi i / N)."""
    x = as_cyclotomic(x)
    acc = 0j
    for i, c in enumerate(x.coords):
        if c:
            acc += float(c) * cmath.exp(2j * math.pi * i / x.order)
    return acc
