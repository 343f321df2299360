"""Contracting polynomial germs (lambda*zeta^s*z + P(zeta) + c*zeta^(k*n), zeta^k).

A germ is stored by its integers (k, s), the twist lambda, the coefficients
of P keyed by exponent, and an optional extra term (n, c) standing for
c * zeta^(k*n).  All coefficients share one cyclotomic order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Mapping

from .cyclotomic import CyclotomicNumber, as_cyclotomic, promote

__all__ = [
    "ContractingGerm",
    "GermType",
    "NotPurifiable",
    "NotRepresentable",
    "PURE",
    "CG",
    "MODIFIED",
    "validate_germ",
    "germ_type",
    "type_from_exponents",
    "epsilon",
    "surface_index",
    "has_vector_field",
    "purify",
    "canonical_form",
    "compose",
    "compose_all",
    "decompose",
    "make_index_one",
    "minimal_lift_q",
    "IndexOneLift",
    "make_germ",
]

PURE = "PURE"
CG = "CG"
MODIFIED = "MODIFIED"


class NotPurifiable(Exception):
    """The germ is in (CG) form with a vector field and a nonzero extra term."""


class NotRepresentable(ValueError):
    """A composition leaves the modified normal form window."""


def _common_order(values, base: int = 1) -> int:
    order = base
    for v in values:
        if isinstance(v, CyclotomicNumber):
            order = math.lcm(order, v.order)
    return order


@dataclass(frozen=True, eq=False)
class ContractingGerm:
    k: int
    s: int
    lam: CyclotomicNumber
    coeffs: Mapping[int, CyclotomicNumber]
    extra: tuple[int, CyclotomicNumber] | None = None
    order: int = 1

    def __post_init__(self):
        values = [self.lam, *self.coeffs.values()]
        if self.extra is not None:
            values.append(self.extra[1])
        order = _common_order(values, self.order)
        norm = lambda v: promote(as_cyclotomic(v), order)
        coeffs = {}
        for m in sorted(self.coeffs):
            c = norm(self.coeffs[m])
            if not c.is_zero():
                coeffs[int(m)] = c
        extra = None
        if self.extra is not None:
            n, c = self.extra
            c = norm(c)
            if not c.is_zero():
                extra = (int(n), c)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "lam", norm(self.lam))
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "extra", extra)

    @property
    def j(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def coeff(self, m: int) -> CyclotomicNumber:
        c = self.coeffs.get(m)
        return c if c is not None else CyclotomicNumber(self.order)

    @property
    def form(self) -> str:
        if self.extra is None:
            return PURE
        n, _ = self.extra
        if n * (self.k - 1) == self.s and self.lam == 1:
            return CG
        return MODIFIED

    def replace(self, **changes) -> "ContractingGerm":
        fields = dict(k=self.k, s=self.s, lam=self.lam, coeffs=self.coeffs,
                      extra=self.extra, order=self.order)
        fields.update(changes)
        return ContractingGerm(**fields)

    def __eq__(self, other):
        if not isinstance(other, ContractingGerm):
            return NotImplemented
        if (self.k, self.s) != (other.k, other.s):
            return False
        if set(self.coeffs) != set(other.coeffs) or self.lam != other.lam:
            return False
        if any(self.coeffs[m] != other.coeffs[m] for m in self.coeffs):
            return False
        if (self.extra is None) != (other.extra is None):
            return False
        if self.extra is not None:
            return self.extra[0] == other.extra[0] and self.extra[1] == other.extra[1]
        return True

    def __hash__(self):
        return hash((self.k, self.s, tuple(self.coeffs), self.extra and self.extra[0]))

    def __str__(self):
        parts = [f"({self.lam})*zeta^{self.s}*z"]
        parts += [f"({c})*zeta^{m}" for m, c in self.coeffs.items()]
        if self.extra is not None:
            n, c = self.extra
            parts.append(f"({c})*zeta^{self.k * n}")
        return f"({' + '.join(parts)}, zeta^{self.k})"


def make_germ(k, s, coeffs, lam=1, extra=None, order=1) -> ContractingGerm:
    """Convenience constructor accepting ints/Fractions for coefficients."""
    return ContractingGerm(
        k=k,
        s=s,
        lam=as_cyclotomic(lam),
        coeffs={m: as_cyclotomic(c) for m, c in dict(coeffs).items()},
        extra=None if extra is None else (extra[0], as_cyclotomic(extra[1])),
        order=order,
    )


# --------------------------------------------------------------------------
# validation and invariants
# --------------------------------------------------------------------------

def validate_germ(g: ContractingGerm) -> list[str]:
    """Return the list of violated normal-form clauses (empty when valid)."""
    errors = []
    k, s = g.k, g.s
    if k < 2:
        errors.append(f"k >= 2 violated: k={k}")
    if g.lam.is_zero():
        errors.append("lambda != 0 violated")
    if not g.coeffs:
        errors.append("P must have a nonzero coefficient (c_j=1)")
        return errors
    j = g.j
    if not 0 < j < k:
        errors.append(f"0 < j < k violated: j={j}, k={k}")
    if j > s:
        errors.append(f"j <= s violated: j={j}, s={s}")
    if g.coeffs[j] != 1:
        errors.append(f"c_j=1 violated: c_{j}={g.coeffs[j]}")
    above = [m for m in g.coeffs if m > s]
    if above:
        errors.append(f"exponents must lie in [j, s]: {above} > s={s}")
    gcd = reduce(math.gcd, g.coeffs, k)
    if gcd != 1:
        errors.append(f"gcd{{k,m}}={gcd} != 1")
    if g.extra is not None:
        n, c = g.extra
        if not (s < k * n and n * (k - 1) <= s):
            errors.append(f"extra term window s/k < n <= s/(k-1) violated: n={n}, s={s}, k={k}")
        if c.is_zero():
            errors.append("extra coefficient c != 0 violated")
    return errors


@dataclass(frozen=True)
class GermType:
    exponents: tuple[int, ...]
    gcds: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.exponents)

    @property
    def j(self) -> int:
        return self.exponents[0]


def type_from_exponents(k: int, exponents) -> GermType:
    """Attach the gcd chain to exponents, checking they form a valid type for k."""
    exponents = tuple(int(m) for m in exponents)
    if not exponents:
        raise ValueError("a type needs at least one exponent")
    gcds = []
    prev_m, prev_i = 0, k
    for m in exponents:
        if m <= prev_m:
            raise ValueError(f"type exponents must increase: {exponents}")
        i = math.gcd(prev_i, m)
        if i >= prev_i:
            raise ValueError(f"exponent {m} does not lower gcd {prev_i} in type {exponents}")
        gcds.append(i)
        prev_m, prev_i = m, i
    if gcds[-1] != 1:
        raise ValueError(f"type {exponents} does not reach gcd 1 for k={k}")
    if exponents[0] >= k:
        raise ValueError(f"first type exponent must be < k={k}")
    return GermType(exponents, tuple(gcds))


def germ_type(g: ContractingGerm) -> GermType:
    """The increasing gcd recursion on the support of P (extra term ignored)."""
    exps, gcds = [], []
    cur = g.k
    for m in g.support:
        if m % cur:
            cur = math.gcd(cur, m)
            exps.append(m)
            gcds.append(cur)
            if cur == 1:
                break
    if not gcds or gcds[-1] != 1:
        raise ValueError(f"germ support {g.support} does not reach gcd 1 with k={g.k}")
    return GermType(tuple(exps), tuple(gcds))


def epsilon(k: int, gtype: GermType, s: int) -> int:
    """Number of coefficients of P that can vanish without changing the type."""
    m, i = gtype.exponents, gtype.gcds
    if s < m[-1]:
        raise ValueError(f"s={s} is smaller than the last type exponent {m[-1]}")
    total = s - m[-1]
    for a in range(len(m) - 1):
        total += (m[a + 1] - m[a]) // i[a]
    return total


def surface_index(g: ContractingGerm) -> int:
    return (g.k - 1) // math.gcd(g.k - 1, g.s)


def has_vector_field(g: ContractingGerm) -> bool:
    return g.s % (g.k - 1) == 0 and g.lam == 1


# --------------------------------------------------------------------------
# purification
# --------------------------------------------------------------------------

def purify(g: ContractingGerm) -> ContractingGerm:
    """Conjugate a modified-form germ to pure normal form of the same type.

    Raises NotPurifiable for (CG) germs with lambda = 1 and c != 0, which
    carry a holomorphic vector field and admit no pure representative.
    """
    if g.extra is None:
        return g
    k, s = g.k, g.s
    n, c = g.extra
    if n * (k - 1) == s:
        if g.lam == 1:
            raise NotPurifiable("irreducibly non-pure (CG form with vector field)")
        # conjugation by z -> z - c/(lambda-1) * zeta^n removes the term
        return g.replace(extra=None)
    inv_lam = 1 / g.lam
    # each step conjugates by z -> z - c/lambda * zeta^(kn-s)
    while True:
        n, c = k * n - s, inv_lam * c
        if k * n <= s:
            coeffs = dict(g.coeffs)
            coeffs[k * n] = g.coeff(k * n) + c
            return g.replace(coeffs=coeffs, extra=None)


def canonical_form(g: ContractingGerm) -> ContractingGerm:
    """Pure form when one exists, otherwise the germ itself ((CG) with vector field)."""
    try:
        return purify(g)
    except NotPurifiable:
        return g


# --------------------------------------------------------------------------
# composition and canonical decomposition
# --------------------------------------------------------------------------

def compose(g1: ContractingGerm, g2: ContractingGerm) -> ContractingGerm:
    """The germ g1 o g2."""
    if g1.extra is not None and g2.extra is not None:
        raise ValueError("at most one factor may carry an extra term")
    k1, k2 = g1.k, g2.k
    k, s = k1 * k2, g1.s * k2 + g2.s
    shift = g1.s * k2
    coeffs = {m * k2: c for m, c in g1.coeffs.items()}
    for m, c in g2.coeffs.items():
        coeffs[shift + m] = coeffs.get(shift + m, 0) + g1.lam * c
    extra = None
    if g1.extra is not None:
        extra = g1.extra
    elif g2.extra is not None:
        n2, c2 = g2.extra
        if (g1.s + n2) % k1:
            raise NotRepresentable(
                f"extra exponent {k2 * (g1.s + n2)} is not a multiple of k={k}"
            )
        extra = ((g1.s + n2) // k1, g1.lam * c2)
    if extra is not None:
        n, c = extra
        if k * n <= s:
            coeffs[k * n] = coeffs.get(k * n, 0) + c
            extra = None
        elif n * (k - 1) > s:
            raise NotRepresentable(
                f"not representable in modified normal form: n={n} > s/(k-1) with s={s}, k={k}"
            )
    order = math.lcm(g1.order, g2.order)
    return ContractingGerm(k=k, s=s, lam=g1.lam * g2.lam, coeffs=coeffs, extra=extra, order=order)


def compose_all(factors) -> ContractingGerm:
    factors = list(factors)
    if not factors:
        raise ValueError("nothing to compose")
    # right fold mirrors the recursion of decompose
    return reduce(lambda acc, f: compose(f, acc), reversed(factors[:-1]), factors[-1])


def _split(g: ContractingGerm) -> tuple[ContractingGerm, ContractingGerm] | None:
    k, j = g.k, g.j
    d = math.gcd(j, k)
    if d == 1:
        return None
    first_off = min(m for m in g.coeffs if m % d)
    k1, j1 = k // d, j // d
    s1 = (first_off - 1) // d
    k2 = d
    j2 = first_off - s1 * k2
    s2 = g.s - s1 * k2
    lam1 = g.coeffs[first_off]
    inv1 = 1 / lam1
    p1 = {m // d: c for m, c in g.coeffs.items() if m <= s1 * k2}
    p2 = {m - s1 * k2: inv1 * c for m, c in g.coeffs.items() if m > s1 * k2}
    extra1 = extra2 = None
    if g.extra is not None:
        n, c = g.extra
        if n * (k1 - 1) <= s1:
            extra1 = (n, c)
        else:
            extra2 = (k1 * n - s1, inv1 * c)
    phi1 = ContractingGerm(k=k1, s=s1, lam=lam1, coeffs=p1, extra=extra1, order=g.order)
    phi2 = ContractingGerm(k=k2, s=s2, lam=g.lam * inv1, coeffs=p2, extra=extra2, order=g.order)
    return phi1, phi2


def decompose(g: ContractingGerm) -> list[ContractingGerm]:
    """Canonical factorisation g = g_1 o ... o g_t into germs of simple type."""
    factors = []
    while True:
        parts = _split(g)
        if parts is None:
            factors.append(g)
            return factors
        factors.append(parts[0])
        g = parts[1]


# --------------------------------------------------------------------------
# higher index
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexOneLift:
    germ: ContractingGerm
    r: int
    q: int

    @property
    def automorphism(self) -> tuple[int, int]:
        """(r, q) for (z, zeta) -> (eps^-r z, eps zeta), eps of order q."""
        return (self.r, self.q)

    @property
    def covering(self) -> tuple[int, int]:
        """(r, q) for the covering (z, zeta) -> (zeta^r z, zeta^q)."""
        return (self.r, self.q)


def make_index_one(g: ContractingGerm, q: int) -> IndexOneLift:
    """Index-one germ covering g, with exponents m -> q*m - r*k."""
    if g.extra is not None:
        raise ValueError("make_index_one needs a pure germ")
    k = g.k
    if q < 1 or (k - 1) % q:
        raise ValueError(f"q={q} must be a positive divisor of k-1={k - 1}")
    if (q * g.s) % (k - 1):
        raise ValueError(f"k-1={k - 1} must divide q*s={q * g.s}")
    r = (q * g.j) // k
    coeffs = {q * m - r * k: c for m, c in g.coeffs.items()}
    lifted = g.replace(s=q * g.s - r * (k - 1), coeffs=coeffs)
    return IndexOneLift(lifted, r, q)


def minimal_lift_q(g: ContractingGerm) -> int:
    """Least q accepted by make_index_one; equals surface_index(g)."""
    return next(q for q in range(1, g.k) if (g.k - 1) % q == 0 and (q * g.s) % (g.k - 1) == 0)
