"""Parameter spaces of (CG) germs and the natural Z/(k-1) action on them."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce

from .blowup import (
    canonical_rotation,
    chain_to_pair,
    det_check,
    dloussky_sequence,
    dual_graph,
    integer_det,
    intersection_matrix,
    simple_dls,
)
from .cyclotomic import CyclotomicNumber, make_root_of_unity
from .germ import (
    ContractingGerm,
    GermType,
    canonical_form,
    compose_all,
    epsilon,
    germ_type,
    make_germ,
    type_from_exponents,
)

__all__ = [
    "GENERIC",
    "NO_VF",
    "VF",
    "ParameterSpaceDescriptor",
    "ActionFlags",
    "parameter_space",
    "group_act",
    "stabilizer_order",
    "brute_force_stabilizer",
    "free_gcd",
    "action_flags",
    "conjugacy_test",
    "orbit",
    "space_positions",
    "witness_germ",
    "random_germ_in_space",
    "simple_factors",
    "enumerate_types",
    "catalog_record",
]

GENERIC = "GENERIC"
NO_VF = "NO_VF"
VF = "VF"


@dataclass(frozen=True)
class ParameterSpaceDescriptor:
    k: int
    s: int
    type: GermType
    case: str
    dimension: int
    delta: int
    family_dimension: int


def _as_type(k, gtype) -> GermType:
    if isinstance(gtype, GermType):
        return gtype
    return type_from_exponents(k, gtype)


def parameter_space(k: int, s: int, gtype) -> list[ParameterSpaceDescriptor]:
    gtype = _as_type(k, gtype)
    if s < gtype.exponents[-1]:
        raise ValueError(f"s={s} below last type exponent {gtype.exponents[-1]}")
    dim = gtype.length + epsilon(k, gtype, s)
    if s % (k - 1):
        cases, delta = [GENERIC], 0
    else:
        cases, delta = [NO_VF, VF], 1
    return [
        ParameterSpaceDescriptor(k, s, gtype, case, dim, delta, dim + delta + 2)
        for case in cases
    ]


def group_act(g: ContractingGerm, e: int) -> ContractingGerm:
    """Image of g under eps^e, eps a primitive (k-1)-th root of unity."""
    n = g.k - 1
    e %= n
    if e == 0:
        return g
    order = math.lcm(g.order, n)
    step = order // n
    root = lambda power: make_root_of_unity(order, step * e * power)
    j = g.j
    lam = root(g.s) * g.lam
    coeffs = {m: root(m - j) * c for m, c in g.coeffs.items()}
    extra = None
    if g.extra is not None:
        nn, c = g.extra
        extra = (nn, root(g.k * nn - j) * c)
    return ContractingGerm(k=g.k, s=g.s, lam=lam, coeffs=coeffs, extra=extra, order=order)


def stabilizer_order(g: ContractingGerm) -> int:
    """Largest d such that the order-d subgroup of Z/(k-1) fixes g."""
    j = g.j
    vals = [g.k - 1, g.s] + [m - j for m in g.coeffs]
    if g.extra is not None:
        vals.append(g.k * g.extra[0] - j)
    return reduce(math.gcd, vals)


def brute_force_stabilizer(g: ContractingGerm) -> int:
    return sum(1 for e in range(g.k - 1) if group_act(g, e) == g)


def free_gcd(k: int, s: int, gtype) -> int:
    gtype = _as_type(k, gtype)
    j = gtype.j
    return reduce(math.gcd, [k - 1, s] + [m - j for m in gtype.exponents[1:]])


@dataclass(frozen=True)
class ActionFlags:
    effective: bool
    free: bool
    fine: bool
    trivial: bool


def action_flags(k: int, s: int, gtype, case: str) -> ActionFlags:
    gtype = _as_type(k, gtype)
    j = gtype.j
    if case not in (GENERIC, NO_VF, VF):
        raise ValueError(f"unknown case {case!r}")
    # j < max(s, k-1) fails only for j = k-1 = s, since j <= s and j < k
    boundary = j == k - 1 == s
    trivial = k == 2 or (boundary and case == NO_VF)
    effective = k == 2 or not trivial
    free = free_gcd(k, s, gtype) == 1
    return ActionFlags(effective=effective, free=free, fine=trivial or free, trivial=trivial)


def conjugacy_test(g1: ContractingGerm, g2: ContractingGerm) -> int | None:
    """Smallest e with group_act(g1, e) = g2 after canonicalisation, else None."""
    a, b = canonical_form(g1), canonical_form(g2)
    if (a.k, a.s) != (b.k, b.s):
        return None
    for e in range(a.k - 1):
        if group_act(a, e) == b:
            return e
    return None


def orbit(g: ContractingGerm) -> list[ContractingGerm]:
    seen = []
    for e in range(g.k - 1):
        h = group_act(g, e)
        if not any(h == x for x in seen):
            seen.append(h)
    return seen


# --------------------------------------------------------------------------
# sampling germs inside a parameter space
# --------------------------------------------------------------------------

def space_positions(k: int, s: int, gtype) -> tuple[list[int], list[int]]:
    """(type exponents beyond j, free exponents) for germs of the given type."""
    gtype = _as_type(k, gtype)
    m, i = gtype.exponents, gtype.gcds
    free = []
    for a in range(len(m) - 1):
        free += [x for x in range(m[a] + 1, m[a + 1]) if x % i[a] == 0]
    free += list(range(m[-1] + 1, s + 1))
    return list(m[1:]), free


def witness_germ(k: int, s: int, gtype, lam=1) -> ContractingGerm:
    """All type coefficients equal to 1, free coefficients zero."""
    gtype = _as_type(k, gtype)
    return make_germ(k, s, {m: 1 for m in gtype.exponents}, lam=lam)


def _random_element(rng: random.Random, order: int, nonzero: bool) -> CyclotomicNumber:
    while True:
        deg = len(CyclotomicNumber(order).coords)
        coords = [rng.randint(-3, 3) for _ in range(deg)]
        if rng.random() < 0.3:
            coords = [rng.randint(-2, 2)] + [0] * (deg - 1)
        x = CyclotomicNumber(order, coords)
        if not nonzero or not x.is_zero():
            return x


def random_germ_in_space(rng: random.Random, k: int, s: int, gtype, case: str,
                         order: int = 1, p_zero: float = 0.3) -> ContractingGerm:
    gtype = _as_type(k, gtype)
    required, free = space_positions(k, s, gtype)
    coeffs = {gtype.j: 1}
    for m in required:
        coeffs[m] = _random_element(rng, order, nonzero=True)
    for m in free:
        if rng.random() >= p_zero:
            coeffs[m] = _random_element(rng, order, nonzero=False)
    extra = None
    if case == VF:
        lam = 1
        c = _random_element(rng, order, nonzero=False)
        if not c.is_zero():
            extra = (s // (k - 1), c)
    else:
        while True:
            lam = _random_element(rng, order, nonzero=True)
            if case == GENERIC or lam != 1:
                break
    return make_germ(k, s, coeffs, lam=lam, extra=extra, order=order)


# --------------------------------------------------------------------------
# enumeration of logarithmic types
# --------------------------------------------------------------------------

def _alpha_tuples(budget: int):
    """Division-chain quotients (a_1..a_q >= 1, a_{q+1} >= 2) with sum <= budget."""
    def rec(prefix, remaining):
        for last in range(2, remaining + 1):
            yield prefix + (last,)
        for a in range(1, remaining - 1):
            yield from rec(prefix + (a,), remaining - a)
    yield from rec((), budget)


def simple_factors(b2_max: int) -> list[tuple[int, int, int]]:
    """Every simple (k, j, s) whose Dloussky segment has length <= b2_max.

    The segment length is sum(alphas) + s - j, so s ranges up to
    j + b2_max - sum(alphas); alphas run over all chains of bounded sum.
    """
    out = []
    for alphas in _alpha_tuples(b2_max):
        k, j = chain_to_pair(alphas)
        for s in range(j, j + b2_max - sum(alphas) + 1):
            out.append((k, j, s))
    return sorted(set(out))


def _flags_json(k, s, gtype, cases):
    flags = {c: action_flags(k, s, gtype, c) for c in cases}
    return (
        {c: f.effective for c, f in flags.items()},
        {c: f.free for c, f in flags.items()},
        {c: f.fine for c, f in flags.items()},
    )


def enumerate_types(b2_max: int) -> list[dict]:
    """Catalog of logarithmic types with b2 <= b2_max, one per segment-rotation class."""
    if b2_max < 2:
        raise ValueError("b2_max must be at least 2")
    factors = [(f, simple_dls(*f).entries) for f in simple_factors(b2_max)]
    seen = {}

    def rec(chosen, length):
        if chosen:
            dls = tuple(x for _, seq in chosen for x in seq)
            canon = canonical_rotation(dls)
            if dls == canon and canon not in seen:
                seen[canon] = [f for f, _ in chosen]
        for f, seq in factors:
            if length + len(seq) <= b2_max:
                chosen.append((f, seq))
                rec(chosen, length + len(seq))
                chosen.pop()

    rec([], 0)
    catalog = []
    for dls, fs in seen.items():
        g = compose_all([make_germ(k, s, {j: 1}) for k, j, s in fs])
        catalog.append(catalog_record(g))
    catalog.sort(key=lambda r: (r["b2"], r["dls"]))
    return catalog


def catalog_record(g: ContractingGerm) -> dict:
    k, s = g.k, g.s
    gtype = germ_type(g)
    dls = dloussky_sequence(g)
    graph = dual_graph(dls)
    spaces = parameter_space(k, s, gtype)
    cases = [d.case for d in spaces]
    effective, free, fine = _flags_json(k, s, gtype, cases)
    dims = {d.case: d.dimension for d in spaces}
    dims["family"] = spaces[0].family_dimension
    return {
        "k": k,
        "s": s,
        "type": list(gtype.exponents),
        "dls": list(dls.entries),
        "segments": [list(x) for x in dls.segments],
        "b2": dls.b2,
        "det": integer_det(intersection_matrix(graph)),
        "det_check": det_check(graph, k),
        "dims": dims,
        "effective": effective,
        "free": free,
        "fine": fine,
        "index": (k - 1) // math.gcd(k - 1, s),
        "has_vf_locus": s % (k - 1) == 0,
    }
