"""Normal forms (FG2)/(FG4) for the generators of pi_1(S \\ D).

The form g(z, w) = (lambda z + a0 + Q(exp(-w)), k w) is recorded by k,
lambda, a0 and the coefficients b_m of Q.  For FG2 the level l is derived
from the leading exponent; FG4 declares it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Mapping

from .cyclotomic import CyclotomicNumber, as_cyclotomic, promote
from .germ import ContractingGerm, MODIFIED

__all__ = [
    "FG2",
    "FG4",
    "FGNormalForm",
    "FGType",
    "make_fg",
    "validate_fg",
    "fg_type",
    "fg_to_germ",
    "germ_to_fg",
    "tau_d",
    "canonical_tau",
    "property_Iq",
    "max_Iq",
    "n_prime",
    "n_prime_of_support",
    "lemma8_check",
]

FG2 = "FG2"
FG4 = "FG4"


@dataclass(frozen=True, eq=False)
class FGNormalForm:
    k: int
    lam: CyclotomicNumber
    a0: CyclotomicNumber
    b: Mapping[int, CyclotomicNumber]
    variant: str = FG2
    l: int | None = None
    order: int = 1

    def __post_init__(self):
        order = self.order
        for v in (self.lam, self.a0, *self.b.values()):
            if isinstance(v, CyclotomicNumber):
                order = math.lcm(order, v.order)
        norm = lambda v: promote(as_cyclotomic(v), order)
        b = {}
        for m in sorted(self.b):
            c = norm(self.b[m])
            if not c.is_zero():
                b[int(m)] = c
        level = self.l
        if self.variant == FG2 and b:
            level = max(b) // self.k + 1
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "lam", norm(self.lam))
        object.__setattr__(self, "a0", norm(self.a0))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "l", level)

    @property
    def sigma(self) -> int:
        return max(self.b)

    @property
    def support(self) -> list[int]:
        return sorted(self.b)

    def coeff(self, m: int) -> CyclotomicNumber:
        c = self.b.get(m)
        return c if c is not None else CyclotomicNumber(self.order)

    def replace(self, **changes) -> "FGNormalForm":
        fields = dict(k=self.k, lam=self.lam, a0=self.a0, b=self.b,
                      variant=self.variant, l=self.l, order=self.order)
        fields.update(changes)
        return FGNormalForm(**fields)

    def __eq__(self, other):
        if not isinstance(other, FGNormalForm):
            return NotImplemented
        return (
            self.k == other.k
            and self.variant == other.variant
            and self.l == other.l
            and self.lam == other.lam
            and self.a0 == other.a0
            and set(self.b) == set(other.b)
            and all(self.b[m] == other.b[m] for m in self.b)
        )

    def __hash__(self):
        return hash((self.k, self.variant, tuple(self.b)))

    def __str__(self):
        q = " + ".join(f"({c})*zeta^{m}" for m, c in self.b.items())
        return f"{self.variant}[k={self.k}, lambda={self.lam}, a0={self.a0}, Q={q}]"


def make_fg(k, b, lam=1, a0=0, variant=FG2, l=None, order=1) -> FGNormalForm:
    return FGNormalForm(
        k=k,
        lam=as_cyclotomic(lam),
        a0=as_cyclotomic(a0),
        b={m: as_cyclotomic(c) for m, c in dict(b).items()},
        variant=variant,
        l=l,
        order=order,
    )


def validate_fg(f: FGNormalForm) -> list[str]:
    errors = []
    k = f.k
    if k < 2:
        errors.append(f"k >= 2 violated: k={k}")
    if f.lam.is_zero():
        errors.append("lambda != 0 violated")
    if not ((f.lam - 1) * f.a0).is_zero():
        errors.append("(lambda-1)*a0 = 0 violated")
    if not f.b:
        errors.append("Q must have a nonzero coefficient")
        return errors
    sigma = f.sigma
    if reduce(math.gcd, f.b, k) != 1:
        errors.append(f"gcd{{k,m | b_m != 0}}={reduce(math.gcd, f.b, k)} != 1")
    if f.variant == FG2:
        if f.b[sigma] != 1:
            errors.append(f"b_sigma=1 violated: b_{sigma}={f.b[sigma]}")
        if sigma % k == 0:
            errors.append(f"k does not divide sigma violated: sigma={sigma}")
        if min(f.b) < f.l:
            errors.append(f"support must start at l={f.l}: min exponent {min(f.b)}")
    elif f.variant == FG4:
        l = f.l
        if l is None or l < 1:
            errors.append(f"FG4 needs a declared level l >= 1, got {l}")
            return errors
        outside = [m for m in f.b if not l <= m <= l * k - 1]
        if outside:
            errors.append(f"support must lie in [l, lk-1]=[{l}, {l * k - 1}]: {outside}")
        if not any(l * k - k + 1 <= m <= l * k - 1 for m in f.b):
            errors.append(f"some b_m with m in [lk-k+1, lk-1]=[{l * k - k + 1}, {l * k - 1}] must be nonzero")
    else:
        errors.append(f"unknown variant {f.variant!r}")
    return errors


@dataclass(frozen=True)
class FGType:
    exponents: tuple[int, ...]
    gcds: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.exponents)


def _type_of_support(k: int, support) -> FGType:
    exps, gcds = [], []
    cur = k
    for m in sorted(support, reverse=True):
        if m % cur:
            cur = math.gcd(cur, m)
            exps.append(m)
            gcds.append(cur)
            if cur == 1:
                break
    if not gcds or gcds[-1] != 1:
        raise ValueError(f"support {sorted(support)} does not reach gcd 1 with k={k}")
    return FGType(tuple(exps), tuple(gcds))


def fg_type(f: FGNormalForm) -> FGType:
    """Decreasing gcd recursion on the support of Q, starting from sigma."""
    return _type_of_support(f.k, f.b)


def fg_to_germ(f: FGNormalForm) -> ContractingGerm:
    """Germ with s = l(k-1), c_m = b_{lk-m} and extra (l, a0)."""
    if f.variant != FG2:
        raise ValueError("fg_to_germ expects an FG2 form")
    k, l = f.k, f.l
    coeffs = {l * k - m: c for m, c in f.b.items()}
    extra = None if f.a0.is_zero() else (l, f.a0)
    return ContractingGerm(k=k, s=l * (k - 1), lam=f.lam, coeffs=coeffs, extra=extra, order=f.order)


def germ_to_fg(g: ContractingGerm) -> FGNormalForm:
    """Inverse of fg_to_germ on index-one germs in (CG) form."""
    k = g.k
    if g.s % (k - 1):
        raise ValueError(
            f"higher index: (k-1)={k - 1} does not divide s={g.s}; use make_index_one first"
        )
    if g.form == MODIFIED:
        raise ValueError("germ is not in (CG) form; purify it first")
    l = g.s // (k - 1)
    b = {l * k - m: c for m, c in g.coeffs.items()}
    a0 = g.extra[1] if g.extra is not None else CyclotomicNumber(g.order)
    return FGNormalForm(k=k, lam=g.lam, a0=a0, b=b, variant=FG2, order=g.order)


def tau_d(f: FGNormalForm, d: int) -> FGNormalForm:
    """Renormalise after replacing the loop generator g_gamma by g_gamma^d."""
    k = f.k
    if f.variant != FG2:
        raise ValueError("tau_d expects an FG2 form")
    if d <= 1 or d > k or k % d:
        raise ValueError(f"d={d} must be a divisor of k={k} with 1 < d <= k")
    sigma = f.sigma
    if (d * sigma) % k:
        return f
    t = fg_type(f)
    n, jg = t.exponents, t.gcds
    # p is 1-based; p = t+1 means every coefficient moves to the translated block
    p = max(i for i in range(2, len(n) + 2) if (jg[i - 2] * d) % k == 0)
    j_prev = jg[p - 2]
    if (d * j_prev) % k:
        raise AssertionError("inconsistent gcd chain")
    d_prime = d * j_prev // k
    if p <= len(n):
        n_p = n[p - 1]
        lead = f.b[n_p]
    else:
        n_p = 0
        lead = f.lam * f.b[sigma]
    inv = 1 / lead
    raw = {}
    for m, c in f.b.items():
        if m <= n_p:
            raw[d * m] = inv * c
        else:
            raw[m * d // k] = inv * f.lam * c
    if any(e % d_prime for e in raw):
        raise ValueError(
            f"tau_{d}: exponents {sorted(raw)} are not all divisible by d'={d_prime}"
        )
    b = {e // d_prime: c for e, c in raw.items()}
    return FGNormalForm(k=k, lam=f.lam, a0=inv * f.a0, b=b, variant=FG2, order=f.order)


def canonical_tau(f: FGNormalForm) -> FGNormalForm:
    """tau_d with d = k/j_1, the generator of the type rotation."""
    j1 = fg_type(f).gcds[0]
    return tau_d(f, f.k // j1)


def max_Iq(f: FGNormalForm) -> int:
    if not f.a0.is_zero():
        return 1
    support = f.support
    g = f.k - 1
    for m in support[1:]:
        g = math.gcd(g, m - support[0])
    return g


def property_Iq(f: FGNormalForm, q: int) -> bool:
    # (I_1) imposes nothing: the Z/1 quotient is trivial
    if q == 1:
        return True
    return f.a0.is_zero() and max_Iq(f) % q == 0


def n_prime_of_support(k: int, support, d: int) -> int:
    """max{n in support : (k/d) does not divide n}."""
    if k % d or not 1 <= d < k:
        raise ValueError(f"d={d} must be a divisor of k={k} with 1 <= d < k")
    step = k // d
    cands = [n for n in support if n % step]
    if not cands:
        raise ValueError(f"n'_{d} undefined: every support exponent is divisible by k/d={step}")
    return max(cands)


def n_prime(f: FGNormalForm, d: int) -> int:
    return n_prime_of_support(f.k, f.b, d)


def lemma8_check(f: FGNormalForm) -> bool:
    k = f.k
    primes = {n_prime(f, d) for d in range(1, k) if k % d == 0}
    return primes == set(fg_type(f).exponents)
