import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from germlab.blowup import det_check, dloussky_sequence, dual_graph, parse_dls, simple_dls
from germlab.cyclotomic import CyclotomicNumber, make_root_of_unity
from germlab.germ import (
    compose_all,
    germ_type,
    has_vector_field,
    make_germ,
    surface_index,
    validate_germ,
)
from germlab.moduli import (
    GENERIC,
    NO_VF,
    VF,
    action_flags,
    brute_force_stabilizer,
    catalog_record,
    conjugacy_test,
    enumerate_types,
    free_gcd,
    group_act,
    orbit,
    parameter_space,
    random_germ_in_space,
    simple_factors,
    stabilizer_order,
    witness_germ,
)

from _support import compose_maps, germ_map, maps_equal, rand_germ

seeds = st.integers(min_value=0, max_value=2**32 - 1)


# ---- parameter spaces --------------------------------------------------------

def test_parameter_space_generic():
    (d,) = parameter_space(5, 3, [3])
    assert (d.case, d.dimension, d.delta, d.family_dimension) == (GENERIC, 1, 0, 3)


def test_parameter_space_vector_field_locus():
    spaces = parameter_space(3, 2, [1])
    assert [d.case for d in spaces] == [NO_VF, VF]
    assert [d.dimension for d in spaces] == [2, 2]
    assert all(d.family_dimension == 5 for d in spaces)


@pytest.mark.parametrize("k, s, t, dim", [(4, 3, [3], 1), (6, 5, [3, 4], 3)])
def test_parameter_space_dimensions(k, s, t, dim):
    # (k-1) | s here, so the space splits; dimensions still follow t + eps
    spaces = parameter_space(k, s, t)
    assert [d.case for d in spaces] == [NO_VF, VF]
    assert all(d.dimension == dim for d in spaces)


def test_parameter_space_rejects_small_s():
    with pytest.raises(ValueError):
        parameter_space(6, 3, [3, 4])


# ---- the Z/(k-1) action -------------------------------------------------------

def test_group_act_examples():
    g = make_germ(5, 4, {3: 1}, lam=2)
    assert group_act(g, 0) == g
    assert all(group_act(g, e) == g for e in range(4))
    h = make_germ(5, 4, {3: 1, 4: 7}, lam=2)
    assert group_act(h, 2) == make_germ(5, 4, {3: 1, 4: -7}, lam=2)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_group_act_is_conjugation_by_rotation(seed):
    # psi(z, zeta) = (eps^j z, eps zeta) conjugates g to group_act(g, -1)
    rng = random.Random(seed)
    g = rand_germ(rng, k_max=8, s_max=9, order_max=3, extra_prob=0.5)
    eps = make_root_of_unity(g.k - 1, 1)
    one = CyclotomicNumber(1, [1])
    alpha = eps ** g.j
    psi = ({(1, 0): alpha}, {(0, 1): eps})
    psi_inv = ({(1, 0): one / alpha}, {(0, 1): one / eps})
    conj = compose_maps(psi, compose_maps(germ_map(g), psi_inv))
    assert maps_equal(conj, germ_map(group_act(g, -1)))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_group_action_law_and_invariants(seed):
    rng = random.Random(seed)
    g = rand_germ(rng, k_max=9, s_max=10, order_max=4)
    n = g.k - 1
    e1, e2 = rng.randrange(n), rng.randrange(n)
    assert group_act(group_act(g, e1), e2) == group_act(g, e1 + e2)
    assert group_act(g, n) == g
    h = group_act(g, e1)
    assert validate_germ(h) == []
    assert germ_type(h) == germ_type(g)
    assert dloussky_sequence(h).entries == dloussky_sequence(g).entries
    assert surface_index(h) == surface_index(g)
    assert has_vector_field(h) == has_vector_field(g)


def test_stabilizer_examples():
    assert stabilizer_order(make_germ(5, 4, {3: 1})) == 4
    assert brute_force_stabilizer(make_germ(5, 4, {3: 1})) == 4
    assert stabilizer_order(make_germ(5, 4, {3: 1, 4: 3})) == 1


def test_stabilizer_formula_matches_brute_force():
    rng = random.Random(17)
    for _ in range(500):
        g = rand_germ(rng, k_max=13, s_max=15, order_max=4, extra_prob=0.5)
        assert stabilizer_order(g) == brute_force_stabilizer(g)


def test_orbit_examples():
    assert len(orbit(make_germ(5, 4, {3: 1}))) == 1
    assert len(orbit(make_germ(5, 4, {3: 1, 4: 3}))) == 4


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_orbit_stabilizer(seed):
    g = rand_germ(random.Random(seed), k_max=10, s_max=10, order_max=3)
    size = len(orbit(g))
    assert size * stabilizer_order(g) == g.k - 1


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_conjugacy_iff_orbit(seed):
    rng = random.Random(seed)
    g = rand_germ(rng, k_max=8, s_max=9, order_max=3, pure=True)
    e = rng.randrange(g.k - 1)
    h = group_act(g, e)
    found = conjugacy_test(g, h)
    assert found is not None and group_act(g, found) == h
    other = rand_germ(rng, k_max=8, s_max=9, order_max=3, pure=True)
    in_orbit = any(other == x for x in orbit(g))
    assert (conjugacy_test(g, other) is not None) == in_orbit


def test_conjugacy_different_invariants():
    assert conjugacy_test(make_germ(4, 3, {3: 1}), make_germ(4, 4, {3: 1})) is None


# ---- the non-separation pair ---------------------------------------------------

def _pair(k, lam, c1, c2):
    return (
        make_germ(k, k - 1, {1: 1}, lam=lam, extra=(1, c1)),
        make_germ(k, k - 1, {1: 1}, lam=lam, extra=(1, c2)),
    )


@pytest.mark.parametrize("k", [3, 4, 5])
def test_non_separation(k):
    lams = [CyclotomicNumber(1, [x]) for x in (2, -1, 3)] + [make_root_of_unity(k - 1, 1)]
    for lam in lams:
        if lam == 1:
            continue
        g1, g2 = _pair(k, lam, 1, 2)
        assert conjugacy_test(g1, g2) is not None
    g1, g2 = _pair(k, 1, 1, 2)
    assert conjugacy_test(g1, g2) is None
    # same pair with equal c stays conjugate at lambda = 1
    g1, g2 = _pair(k, 1, 3, 3)
    assert conjugacy_test(g1, g2) == 0


# ---- flags -------------------------------------------------------------------------

def test_flags_examples():
    f = action_flags(5, 4, [3], NO_VF)
    assert (f.effective, f.free, f.fine) == (True, False, False)
    no_vf = action_flags(3, 2, [2], NO_VF)
    vf = action_flags(3, 2, [2], VF)
    assert no_vf.trivial and no_vf.fine and not no_vf.effective
    assert vf.effective and not vf.trivial
    boundary = action_flags(4, 3, [3], NO_VF)
    assert boundary.trivial and boundary.fine and not boundary.free
    assert action_flags(4, 3, [3], VF).effective


def test_trivial_action_really_is_trivial():
    # j = k-1 = s with lambda != 1 and c = 0: every germ is a fixed point
    rng = random.Random(8)
    for k in (3, 4, 5, 6):
        for _ in range(20):
            g = random_germ_in_space(rng, k, k - 1, [k - 1], NO_VF, order=2)
            assert brute_force_stabilizer(g) == k - 1
        g = make_germ(k, k - 1, {k - 1: 1}, lam=1, extra=(1, 1))
        assert brute_force_stabilizer(g) == 1


def test_free_gcd_witness():
    assert free_gcd(6, 5, [3, 4]) == 1
    assert stabilizer_order(witness_germ(5, 4, [3])) == free_gcd(5, 4, [3]) == 4


def _all_spaces(b2_max):
    """Every (k, s, type) reachable by composing simple factors, up to b2_max."""
    factors = [(f, simple_dls(*f).b2) for f in simple_factors(b2_max)]
    out = {}

    def rec(chosen, length):
        if chosen:
            g = compose_all([make_germ(k, s, {j: 1}) for k, j, s in chosen])
            out[(g.k, g.s, germ_type(g).exponents)] = g
        for f, n in factors:
            if length + n <= b2_max:
                rec(chosen + [f], length + n)

    rec([], 0)
    return out


def test_free_criterion_agrees_with_brute_force():
    rng = random.Random(99)
    spaces = _all_spaces(6)
    assert len(spaces) > 50
    for (k, s, t), _ in spaces.items():
        for d in parameter_space(k, s, t):
            formula_free = action_flags(k, s, t, d.case).free
            w = witness_germ(k, s, t, lam=1 if d.case == VF else 2)
            assert brute_force_stabilizer(w) == free_gcd(k, s, t)
            samples = [w] + [random_germ_in_space(rng, k, s, t, d.case, order=2) for _ in range(20)]
            for g in samples:
                assert (g.k, g.s, germ_type(g).exponents) == (k, s, t)
            observed_free = all(brute_force_stabilizer(g) == 1 for g in samples)
            assert formula_free == observed_free


# ---- enumeration -------------------------------------------------------------------

def test_enumerate_b2_2():
    cat = enumerate_types(2)
    assert [r["dls"] for r in cat] == [[3, 2]]
    assert (cat[0]["k"], cat[0]["s"], cat[0]["type"]) == (2, 1, [1])


def test_enumerate_b2_3():
    dls = [r["dls"] for r in enumerate_types(3)]
    assert [4, 2, 2] in dls and [3, 2, 2] in dls
    assert [3, 4, 2, 2] not in dls
    assert sorted(dls) == [[3, 2], [3, 2, 2], [3, 3, 2], [4, 2, 2]]


def test_simple_factors_complete_for_small_b2():
    # brute force over a box that certainly contains every simple factor with b2 <= 5
    found = set()
    for k in range(2, 40):
        for j in range(1, k):
            if math.gcd(k, j) != 1:
                continue
            for s in range(j, j + 6):
                if simple_dls(k, j, s).b2 <= 5:
                    found.add((k, j, s))
    assert found == set(simple_factors(5))


def test_catalog_is_deterministic_and_consistent():
    a, b = enumerate_types(6), enumerate_types(6)
    assert a == b
    for r in a:
        assert r["det_check"]
        assert abs(r["det"]) == (r["k"] - 1) ** 2
        assert [(p.k, p.j, p.s) for p in parse_dls(r["dls"])]
        assert r["b2"] == len(r["dls"])
        assert r["has_vf_locus"] == (r["s"] % (r["k"] - 1) == 0)
        assert set(r["effective"]) == ({NO_VF, VF} if r["has_vf_locus"] else {GENERIC})


def test_catalog_record_fields():
    rec = catalog_record(make_germ(4, 3, {3: 1}))
    assert rec["dls"] == [3, 4, 2, 2]
    assert rec["det"] == 9
    assert rec["dims"] == {NO_VF: 1, VF: 1, "family": 4}
    assert rec["index"] == 1


def test_log_type_constant_in_space():
    rng = random.Random(5)
    spaces = list(_all_spaces(6).items())[:10]
    for (k, s, t), w in spaces:
        expected = dloussky_sequence(w).entries
        for d in parameter_space(k, s, t):
            for _ in range(30):
                g = random_germ_in_space(rng, k, s, t, d.case, order=3)
                assert dloussky_sequence(g).entries == expected
                assert det_check(dual_graph(dloussky_sequence(g)), k)
