"""Log-domain summation kernels.

Each term is described by a base log10-magnitude, a base phase, an exponent
scale E (so the term carries a factor exp(-E*w)) and the exact fractional
part f of r*n/k^(m-j), which contributes the factor 1 - exp(2*pi*i*f).

The numba build is used unless GERMLAB_DISABLE_NUMBA is set to a true value
or numba cannot be imported; the numpy build is the reference.
"""
from __future__ import annotations

import math
import os

import numpy as np

LN10 = math.log(10.0)
NEG_INF = -math.inf

__all__ = ["BACKEND", "log_terms", "log_sum", "log_terms_numpy", "log_sum_numpy"]


def log_terms_numpy(base_log, base_arg, scale, frac, re_w, im_w):
    """Per-term (log10 |t|, arg t); vanishing factors give -inf."""
    base_log = np.asarray(base_log, dtype=np.float64)
    base_arg = np.asarray(base_arg, dtype=np.float64)
    scale = np.asarray(scale, dtype=np.float64)
    frac = np.asarray(frac, dtype=np.float64)
    with np.errstate(divide="ignore"):
        # |1 - e^{2 pi i f}| = 2 sin(pi f), arg = pi f - pi/2
        factor = np.log10(2.0 * np.sin(np.pi * frac))
    factor = np.where(frac == 0.0, NEG_INF, factor)
    logs = base_log + scale * (-re_w) / LN10 + factor
    args = base_arg - scale * im_w + np.pi * frac - np.pi / 2
    return logs, args


def log_sum_numpy(logs, args):
    """(log10 |sum|, arg sum) of terms given as (log10 magnitude, phase)."""
    logs = np.asarray(logs, dtype=np.float64)
    args = np.asarray(args, dtype=np.float64)
    if logs.size == 0:
        return NEG_INF, 0.0
    top = logs.max()
    if top == NEG_INF:
        return NEG_INF, 0.0
    weights = np.power(10.0, logs - top)
    re = float(np.sum(weights * np.cos(args)))
    im = float(np.sum(weights * np.sin(args)))
    mag = math.hypot(re, im)
    if mag == 0.0:
        return NEG_INF, 0.0
    return top + math.log10(mag), math.atan2(im, re)


def _build_numba():
    import numba

    @numba.njit(cache=False)
    def log_terms_nb(base_log, base_arg, scale, frac, re_w, im_w):
        n = base_log.shape[0]
        logs = np.empty(n)
        args = np.empty(n)
        for i in range(n):
            f = frac[i]
            if f == 0.0:
                logs[i] = -np.inf
            else:
                logs[i] = base_log[i] + scale[i] * (-re_w) / LN10 + math.log10(2.0 * math.sin(math.pi * f))
            args[i] = base_arg[i] - scale[i] * im_w + math.pi * f - math.pi / 2
        return logs, args

    @numba.njit(cache=False)
    def log_sum_nb(logs, args):
        n = logs.shape[0]
        if n == 0:
            return -np.inf, 0.0
        top = -np.inf
        for i in range(n):
            if logs[i] > top:
                top = logs[i]
        if top == -np.inf:
            return -np.inf, 0.0
        re = 0.0
        im = 0.0
        for i in range(n):
            wgt = 10.0 ** (logs[i] - top)
            re += wgt * math.cos(args[i])
            im += wgt * math.sin(args[i])
        mag = math.hypot(re, im)
        if mag == 0.0:
            return -np.inf, 0.0
        return top + math.log10(mag), math.atan2(im, re)

    def log_terms(base_log, base_arg, scale, frac, re_w, im_w):
        return log_terms_nb(
            np.asarray(base_log, dtype=np.float64),
            np.asarray(base_arg, dtype=np.float64),
            np.asarray(scale, dtype=np.float64),
            np.asarray(frac, dtype=np.float64),
            float(re_w),
            float(im_w),
        )

    def log_sum(logs, args):
        lg, ph = log_sum_nb(np.asarray(logs, dtype=np.float64), np.asarray(args, dtype=np.float64))
        return float(lg), float(ph)

    return log_terms, log_sum


def _numba_disabled() -> bool:
    return os.environ.get("GERMLAB_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


if _numba_disabled():
    BACKEND = "numpy"
    log_terms, log_sum = log_terms_numpy, log_sum_numpy
else:
    try:
        log_terms, log_sum = _build_numba()
        BACKEND = "numba"
    except ImportError:
        BACKEND = "numpy"
        log_terms, log_sum = log_terms_numpy, log_sum_numpy
