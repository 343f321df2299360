import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from germlab.blowup import dloussky_sequence
from germlab.cyclotomic import CyclotomicNumber
from germlab.fgroup import (
    FG4,
    canonical_tau,
    fg_to_germ,
    fg_type,
    germ_to_fg,
    lemma8_check,
    make_fg,
    max_Iq,
    n_prime,
    property_Iq,
    tau_d,
    validate_fg,
)
from germlab.germ import CG, PURE, germ_type, make_germ, validate_germ

from _support import rand_fg2, rand_fg4, tau_conjugacy_residual, tau_series_oracle

seeds = st.integers(min_value=0, max_value=2**32 - 1)
LAM = CyclotomicNumber(1, [5])


def test_validate_examples():
    assert validate_fg(make_fg(6, {3: 1, 4: 1})) == []
    assert any("b_sigma=1" in e for e in validate_fg(make_fg(6, {3: 1, 4: 2})))
    assert any("k does not divide sigma" in e for e in validate_fg(make_fg(3, {2: 1, 3: 1})))
    assert any("(lambda-1)*a0" in e for e in validate_fg(make_fg(2, {1: 1}, lam=2, a0=1)))
    assert any("support must start" in e for e in validate_fg(make_fg(3, {1: 1, 4: 1})))
    assert any("gcd" in e for e in validate_fg(make_fg(4, {2: 1, 6: 1}, variant=FG4, l=2)))


def test_fg4_window():
    assert validate_fg(make_fg(3, {1: 1, 2: 1}, variant=FG4, l=1)) == []
    assert validate_fg(make_fg(3, {1: 1}, variant=FG4, l=2))


@pytest.mark.parametrize(
    "k, b, exps, gcds",
    [(6, {3: 1, 4: 1}, (4, 3), (2, 1)), (2, {1: 1}, (1,), (1,)), (4, {3: 1}, (3,), (1,))],
)
def test_fg_type_examples(k, b, exps, gcds):
    t = fg_type(make_fg(k, b))
    assert (t.exponents, t.gcds) == (exps, gcds)


def test_fg_to_germ_examples():
    assert fg_to_germ(make_fg(2, {1: 1}, lam=LAM)) == make_germ(2, 1, {1: 1}, lam=LAM)
    g = fg_to_germ(make_fg(2, {1: 1}, a0=7))
    assert g == make_germ(2, 1, {1: 1}, extra=(1, 7))
    assert g.form == CG


def test_germ_to_fg_examples():
    f = germ_to_fg(make_germ(5, 4, {3: 1}, lam=LAM))
    assert f == make_fg(5, {2: 1}, lam=LAM)
    assert (f.l, f.sigma) == (1, 2)
    with pytest.raises(ValueError, match="higher index"):
        germ_to_fg(make_germ(3, 3, {1: 1}))


def test_germ_to_fg_rejects_modified():
    with pytest.raises(ValueError):
        germ_to_fg(make_germ(3, 4, {1: 1}, lam=2, extra=(2, 1)))


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_fg_germ_round_trip_and_type_correspondence(seed):
    f = rand_fg2(random.Random(seed))
    g = fg_to_germ(f)
    assert validate_germ(g) == []
    assert g.form in (PURE, CG)
    assert germ_to_fg(g) == f
    lk = f.l * f.k
    assert germ_type(g).exponents == tuple(lk - n for n in fg_type(f).exponents)


# ---- tau_d ------------------------------------------------------------------

def test_tau_example():
    f = make_fg(6, {3: 1, 4: 1}, lam=LAM)
    g = tau_d(f, 3)
    assert g == make_fg(6, {2: LAM, 9: 1}, lam=LAM)
    assert fg_type(g).exponents == (9, 2)
    assert fg_type(tau_d(g, 2)).exponents == (4, 3)


def test_tau_unchanged_branch():
    f = make_fg(4, {3: 1})
    assert tau_d(f, 2) is f


@pytest.mark.parametrize("d", [1, 4, 7])
def test_tau_preconditions(d):
    with pytest.raises(ValueError):
        tau_d(make_fg(6, {3: 1, 4: 1}), d)


def _check_against_oracles(f, d):
    g = tau_d(f, d)
    assert validate_fg(g) == []
    a0, series = tau_series_oracle(f, d)
    assert g.a0 == a0
    assert set(series) == set(g.b)
    assert all(series[e] == g.b[int(e)] for e in series)
    assert tau_conjugacy_residual(f, d, g) < 1e-8
    return g


def test_conjugacy_oracle_detects_wrong_answer():
    f = make_fg(6, {3: 1, 4: 1}, lam=LAM)
    good = tau_d(f, 3)
    bad = good.replace(b={2: LAM + 1, 9: 1})
    assert tau_conjugacy_residual(f, 3, good) < 1e-10
    assert tau_conjugacy_residual(f, 3, bad) > 1e-3


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_tau_canonical_matches_conjugation_chain(seed):
    f = rand_fg2(random.Random(seed), k_max=8, sigma_max=14)
    j1 = fg_type(f).gcds[0]
    _check_against_oracles(f, f.k // j1)


def test_tau_all_admissible_divisors():
    # every divisor with k | d*sigma, canonical or not
    rng = random.Random(5)
    checked = 0
    while checked < 150:
        f = rand_fg2(rng, k_max=12, sigma_max=16)
        for d in range(2, f.k + 1):
            if f.k % d or (d * f.sigma) % f.k or d == f.k:
                continue
            _check_against_oracles(f, d)
            checked += 1


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_tau_type_rotation(seed):
    f = rand_fg2(random.Random(seed), max_length=4)
    t = fg_type(f)
    j1 = t.gcds[0]
    n = t.exponents
    expected = tuple(f.k * m // j1 for m in n[1:]) + (n[0] // j1,)
    assert fg_type(canonical_tau(f)).exponents == expected


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_tau_cycle_closure(seed):
    f = rand_fg2(random.Random(seed), max_length=4)
    start = fg_type(f).exponents
    b2 = len(dloussky_sequence(fg_to_germ(f)).entries)
    cur = f
    for _ in range(len(start)):
        cur = canonical_tau(cur)
        assert len(dloussky_sequence(fg_to_germ(cur)).entries) == b2
    assert fg_type(cur).exponents == start


# ---- (I_q) -------------------------------------------------------------------

def test_Iq_examples():
    f = make_fg(3, {2: 1})
    assert property_Iq(f, 2) and max_Iq(f) == 2
    g = make_fg(3, {2: 1}, a0=1)
    assert max_Iq(g) == 1
    assert not property_Iq(g, 2)
    assert property_Iq(g, 1)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_tau_preserves_Iq(seed):
    rng = random.Random(seed)
    f = rand_fg2(rng, k_max=13, sigma_max=30)
    for d in range(2, f.k + 1):
        if f.k % d:
            continue
        g = tau_d(f, d)
        for q in range(1, f.k):
            if (f.k - 1) % q == 0 and math.gcd(d, q) == 1:
                assert property_Iq(g, q) == property_Iq(f, q)


# ---- n'_d and the type set ---------------------------------------------------

def test_n_prime_examples():
    f = make_fg(6, {3: 1, 4: 1})
    assert [n_prime(f, d) for d in (1, 2, 3)] == [4, 4, 3]
    assert lemma8_check(f)
    assert n_prime(make_fg(2, {1: 1}), 1) == 1


def test_n_prime_undefined():
    f = make_fg(6, {3: 1, 4: 1})
    with pytest.raises(ValueError):
        n_prime(f, 6)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_type_set_equals_n_primes_random(seed):
    rng = random.Random(seed)
    f = rand_fg2(rng) if seed % 2 else rand_fg4(rng)
    assert validate_fg(f) == []
    assert lemma8_check(f)
