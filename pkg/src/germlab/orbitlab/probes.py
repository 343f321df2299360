"""Displacements of g_{r,m} and escape arcs, evaluated in the log domain.

For an (FG4) pair g(z, w) = (lam*z + a0 + Q(exp(-w)), k*w), g_gamma = (z, w + 2 pi i)
the element g_{r,m} translates z by

    sum_{j<m} lam^(-j-1) sum_n b_n exp(-n k^j w) (1 - exp(2 pi i r n / k^(m-j)))

and w by 2 pi i r / k^m.  Magnitudes grow like exp(n k^j), so every quantity
is carried as a (log10 magnitude, phase) pair.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..fgroup import FG2, FGNormalForm, n_prime_of_support
from ..cyclotomic import approx_complex
from . import _kernels

__all__ = [
    "DIVERGES",
    "BOUNDED",
    "INCONCLUSIVE",
    "FG4Numeric",
    "ProbeStep",
    "ProbeReport",
    "EscapeStep",
    "g_rm_displacement",
    "direct_displacement",
    "divergence_probe",
    "dominant_prediction",
    "escape_arc_solver",
    "equation6_coefficients",
    "w_shift",
]

DIVERGES = "DIVERGES"
BOUNDED = "BOUNDED"
INCONCLUSIVE = "INCONCLUSIVE"

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FG4Numeric:
    k: int
    l: int
    lam: complex
    a0: complex
    b: Mapping[int, complex]

    def __post_init__(self):
        b = {int(m): complex(c) for m, c in sorted(dict(self.b).items()) if c != 0}
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "a0", complex(self.a0))
        errors = self.violations()
        if errors:
            raise ValueError("; ".join(errors))

    def violations(self) -> list[str]:
        k, l = self.k, self.l
        out = []
        if k < 2 or l < 1:
            out.append(f"need k >= 2 and l >= 1, got k={k}, l={l}")
            return out
        if self.lam == 0:
            out.append("lambda != 0 violated")
        bad = [m for m in self.b if not l <= m <= l * k - 1]
        if bad:
            out.append(f"exponents {bad} outside [l, lk-1]=[{l}, {l * k - 1}]")
        if not any(l * k - k + 1 <= m <= l * k - 1 for m in self.b):
            out.append(f"some b_m with m in [{l * k - k + 1}, {l * k - 1}] must be nonzero")
        if abs((self.lam - 1) * self.a0) > 1e-12:
            out.append("(lambda-1)*a0 = 0 violated")
        return out

    @classmethod
    def from_fg(cls, f: FGNormalForm) -> "FG4Numeric":
        level = f.l if f.variant != FG2 else max(f.b) // f.k + 1
        return cls(
            k=f.k,
            l=level,
            lam=approx_complex(f.lam),
            a0=approx_complex(f.a0),
            b={m: approx_complex(c) for m, c in f.b.items()},
        )

    def with_coeff(self, n: int, value: complex) -> "FG4Numeric":
        b = dict(self.b)
        b[n] = value
        return FG4Numeric(self.k, self.l, self.lam, self.a0, b)


def _terms(k, lam, coeffs, r, m, w, skip=()):
    """Term arrays for the g_{r,m} double sum, restricted to the given coefficients."""
    log_inv_lam = -math.log10(abs(lam))
    arg_inv_lam = -cmath.phase(lam)
    base_log, base_arg, scale, frac = [], [], [], []
    for j in range(m):
        denom = k ** (m - j)
        kj = k ** j
        for n, (lb, ab) in coeffs.items():
            if n in skip:
                continue
            base_log.append((j + 1) * log_inv_lam + lb)
            base_arg.append((j + 1) * arg_inv_lam + ab)
            scale.append(float(n * kj))
            # exact reduction: r*n/k^(m-j) can be far beyond double precision
            frac.append(((r * n) % denom) / denom)
    return _kernels.log_terms(base_log, base_arg, scale, frac, w.real, w.imag)


def _log_coeffs(b: Mapping[int, complex]) -> dict[int, tuple[float, float]]:
    return {n: (math.log10(abs(c)), cmath.phase(c)) for n, c in b.items() if c != 0}


def _check_w(w: complex):
    if not complex(w).real < 0:
        raise ValueError(f"need Re w < 0, got w={w}")


def g_rm_displacement(p: FG4Numeric, r: int, m: int, w: complex) -> tuple[float, float]:
    """(log10 |displacement|, phase) of the z-translation of g_{r,m} at w.

    A vanishing displacement is reported as (-inf, 0.0).
    """
    w = complex(w)
    _check_w(w)
    if m < 0:
        raise ValueError(f"need m >= 0, got {m}")
    logs, args = _terms(p.k, p.lam, _log_coeffs(p.b), r, m, w)
    return _kernels.log_sum(logs, args)


def w_shift(k: int, r: int, m: int) -> complex:
    return TWO_PI * 1j * r / k ** m


def direct_displacement(p: FG4Numeric, r: int, m: int, w: complex) -> complex:
    """Plain double-precision evaluation of the same sum (overflows early)."""
    w = complex(w)
    total = 0j
    for j in range(m):
        for n, c in p.b.items():
            total += (
                p.lam ** (-j - 1)
                * c
                * cmath.exp(-n * p.k ** j * w)
                * (1 - cmath.exp(TWO_PI * 1j * r * n / p.k ** (m - j)))
            )
    return total


# --------------------------------------------------------------------------
# divergence along a constant-type point
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeStep:
    m: int
    r: int
    log10: float
    phase: float
    dominant_exponent: int
    prediction: float | None


@dataclass(frozen=True)
class ProbeReport:
    k: int
    d: int
    w: complex
    n_prime: int | None
    steps: tuple[ProbeStep, ...]
    verdict: str
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        fin = lambda x: x if x is not None and math.isfinite(x) else None
        return {
            "k": self.k,
            "d": self.d,
            "w": [self.w.real, self.w.imag],
            "n_prime": self.n_prime,
            "steps": [
                {
                    "m": s.m,
                    "r": s.r,
                    "log10": fin(s.log10),
                    "dominant_exponent": s.dominant_exponent,
                    "prediction": fin(s.prediction),
                }
                for s in self.steps
            ],
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def dominant_prediction(p: FG4Numeric, d: int, n_prime: int, m: int, w: complex) -> float:
    """log10 of the top term lam^-m b_n' exp(-n' k^(m-1) w)(1 - exp(2 pi i d n'/k))."""
    b = p.b.get(n_prime, 0)
    if b == 0:
        return -math.inf
    frac = ((d * n_prime) % p.k) / p.k
    if frac == 0:
        return -math.inf
    return (
        -m * math.log10(abs(p.lam))
        + n_prime * p.k ** (m - 1) * (-w.real) / _kernels.LN10
        + math.log10(abs(b))
        + math.log10(2 * math.sin(math.pi * frac))
    )


def _verdict(values, threshold, min_steps, tail):
    finite = [v for v in values if math.isfinite(v)]
    if len(finite) < len(values) or len(values) < tail:
        return INCONCLUSIVE
    last = values[-tail:]
    increasing = all(a < b for a, b in zip(last, last[1:]))
    if increasing and last[-1] >= threshold:
        return DIVERGES
    if len(values) >= min_steps and max(values) < threshold and not increasing:
        return BOUNDED
    return INCONCLUSIVE


def divergence_probe(
    p: FG4Numeric,
    d: int,
    w: complex = -1.0,
    m_max: int = 10,
    threshold: float = 6.0,
    min_steps: int = 6,
    tail: int = 3,
) -> ProbeReport:
    """Track log10 |g_{d,m} displacement| for m = 1..m_max.

    DIVERGES needs the last `tail` values strictly increasing with the final
    one at least `threshold`; BOUNDED needs `min_steps` finite values all
    below it with a non-increasing tail.  Everything else is INCONCLUSIVE.
    """
    w = complex(w)
    _check_w(w)
    k = p.k
    if k % d or not 1 <= d < k:
        raise ValueError(f"d={d} must be a divisor of k={k} with 1 <= d < k")
    notes = []
    try:
        npr = n_prime_of_support(k, p.b, d)
    except ValueError as exc:
        npr = None
        notes.append(str(exc))
    steps = []
    for m in range(1, m_max + 1):
        lg, ph = g_rm_displacement(p, d, m, w)
        pred = dominant_prediction(p, d, npr, m, w) if npr is not None else None
        steps.append(ProbeStep(m, d, lg, ph, npr if npr is not None else 0, pred))
    values = [s.log10 for s in steps]
    if npr is None:
        verdict = INCONCLUSIVE
        notes.append("dominant coefficient b_n' vanishes")
    else:
        verdict = _verdict(values, threshold, min_steps, tail)
    return ProbeReport(k, d, w, npr, tuple(steps), verdict, tuple(notes))


# --------------------------------------------------------------------------
# escape arcs: solving for b_{n'_d} so that g_{d,nu} has zero displacement
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EscapeStep:
    nu: int
    log10_b: float
    phase_b: float
    residual: float
    ok: bool
    message: str = ""

    @property
    def b(self) -> complex:
        if not math.isfinite(self.log10_b):
            return 0j
        return cmath.rect(10.0 ** self.log10_b, self.phase_b) if self.log10_b < 300 else complex("inf")

    def to_json(self) -> dict:
        fin = lambda x: x if math.isfinite(x) else None
        return {
            "nu": self.nu,
            "log10_b": fin(self.log10_b),
            "phase_b": self.phase_b,
            "residual": fin(self.residual),
            "ok": self.ok,
            "message": self.message,
        }


def _split_sums(p: FG4Numeric, n_prime: int, d: int, nu: int, w: complex, keep=None):
    """Numerator terms (n != n') and denominator terms (n = n', b = 1)."""
    coeffs = _log_coeffs(p.b)
    coeffs.pop(n_prime, None)
    if keep is not None:
        coeffs = {n: v for n, v in coeffs.items() if keep(n)}
    num = _terms(p.k, p.lam, coeffs, d, nu, w)
    den = _terms(p.k, p.lam, {n_prime: (0.0, 0.0)}, d, nu, w)
    return num, den


def _solve(p, n_prime, d, nu, w, keep=None):
    (nl, na), (dl, da) = _split_sums(p, n_prime, d, nu, w, keep)
    num = _kernels.log_sum(nl, na)
    den = _kernels.log_sum(dl, da)
    if not math.isfinite(den[0]):
        return EscapeStep(nu, math.nan, 0.0, math.inf, False, "denominator vanishes")
    if not math.isfinite(num[0]):
        return EscapeStep(nu, -math.inf, 0.0, 0.0, True, "numerator vanishes")
    log_b = num[0] - den[0]
    arg_b = math.remainder(num[1] - den[1] + math.pi, TWO_PI)
    # residual of the full sum with b substituted, relative to its largest term
    logs = np.concatenate([nl, dl + log_b])
    args = np.concatenate([na, da + arg_b])
    res_log, _ = _kernels.log_sum(logs, args)
    top = float(np.max(logs))
    residual = 10.0 ** (res_log - top) if math.isfinite(res_log) else 0.0
    return EscapeStep(nu, log_b, arg_b, residual, True)


def escape_arc_solver(
    p: FG4Numeric,
    d: int,
    nu_max: int = 12,
    n_prime: int | None = None,
    truncate: bool = False,
    w: complex = -1.0,
) -> list[EscapeStep]:
    """Solve sigma(nu) = 0 for b_{n'} at each nu = 1..nu_max, others fixed.

    With truncate=True only exponents n < n' enter the numerator, which is
    the shortened form of the equation; the default keeps every n != n'.
    """
    k = p.k
    w = complex(w)
    _check_w(w)
    if k % d or not 1 <= d < k:
        raise ValueError(f"d={d} must be a divisor of k={k} with 1 <= d < k")
    if n_prime is None:
        n_prime = n_prime_of_support(k, p.b, d)
    keep = (lambda n: n < n_prime) if truncate else None
    return [_solve(p, n_prime, d, nu, w, keep) for nu in range(1, nu_max + 1)]


def equation6_coefficients(p: FG4Numeric, d: int, nu: int, n_prime: int | None = None,
                           w: complex = -1.0) -> dict[int, tuple[float, float]]:
    """log10 |C_n(nu)| and phase for every n != n' in the support.

    C_n(nu) is the n-part of the numerator divided by the b_{n'} coefficient,
    so the equation reads b_{n'} + sum_n C_n(nu) b_n = 0.
    """
    w = complex(w)
    if n_prime is None:
        n_prime = n_prime_of_support(p.k, p.b, d)
    den = _kernels.log_sum(*_terms(p.k, p.lam, {n_prime: (0.0, 0.0)}, d, nu, w))
    out = {}
    for n in p.b:
        if n == n_prime:
            continue
        lg, ph = _kernels.log_sum(*_terms(p.k, p.lam, {n: (0.0, 0.0)}, d, nu, w))
        out[n] = (lg - den[0], math.remainder(ph - den[1], TWO_PI)) if math.isfinite(lg) else (-math.inf, 0.0)
    return out
