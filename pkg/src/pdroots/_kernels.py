"""Hot evaluation kernels.

Every kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
fallback with identical semantics. The numba path is used when numba imports
and the ``PDROOTS_DISABLE_NUMBA`` environment variable is unset (or ``0``).
Both variants stay importable so benchmarks and tests can compare them.
"""

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("PDROOTS_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

_BLOCK = 2048


# ---------------------------------------------------------------------------
# numpy fallbacks
# ---------------------------------------------------------------------------

def translate_sum_numpy(x, shifts, coefs, half_width, alpha):
    """sum_s coefs[s] * max(1 - |x - shifts[s]| / h, 0) ** alpha.

    ``shifts`` must be sorted ascending. Only terms whose open support
    contains a given x are gathered.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    m = shifts.shape[0]
    if m == 0 or x.size == 0:
        return out
    lo = np.searchsorted(shifts, x - half_width, side="right")
    hi = np.searchsorted(shifts, x + half_width, side="left")
    width = int((hi - lo).max(initial=0))
    for w in range(width):
        idx = lo + w
        live = idx < hi
        safe = np.minimum(idx, m - 1)
        d = 1.0 - np.abs(x - shifts[safe]) / half_width
        live &= d > 0.0
        d = np.where(live, d, 0.0)
        vals = d if alpha == 1.0 else d ** alpha
        out += np.where(live, coefs[safe] * vals, 0.0)
    return out


def geometric_tail_numpy(x, base, spacing, lead, ratio, half_width, alpha):
    """sum_{r>=1} lead * ratio**(r-1) * atom(x - base - r*spacing)."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    if x.size == 0:
        return out
    r_lo = np.maximum(1.0, np.ceil((x - base - half_width) / spacing))
    r_hi = np.floor((x - base + half_width) / spacing)
    width = int(np.max(r_hi - r_lo, initial=-1.0)) + 1
    for w in range(max(width, 0)):
        r = r_lo + w
        live = r <= r_hi
        d = 1.0 - np.abs(x - base - r * spacing) / half_width
        live &= d > 0.0
        d = np.where(live, d, 0.0)
        vals = d if alpha == 1.0 else d ** alpha
        weight = lead * np.power(ratio, np.where(live, r - 1.0, 0.0))
        out += np.where(live, weight * vals, 0.0)
    return out


def cosine_sum_numpy(t, coefs, freqs, shifts):
    """sum_m coefs[m] * cos(freqs[m] * t + shifts[m])."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    if coefs.shape[0] == 0 or t.size == 0:
        return out
    flat = t.reshape(-1)
    res = out.reshape(-1)
    for start in range(0, flat.shape[0], _BLOCK):
        block = flat[start:start + _BLOCK]
        res[start:start + _BLOCK] = np.cos(np.outer(block, freqs) + shifts) @ coefs
    return out


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:

    @numba.njit(cache=True)
    def _first_above(a, v):
        # first index i with a[i] > v
        lo, hi = 0, a.shape[0]
        while lo < hi:
            mid = (lo + hi) // 2
            if a[mid] <= v:
                lo = mid + 1
            else:
                hi = mid
        return lo

    @numba.njit(cache=True)
    def _first_at_least(a, v):
        lo, hi = 0, a.shape[0]
        while lo < hi:
            mid = (lo + hi) // 2
            if a[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo

    @numba.njit(cache=True)
    def _translate_sum_nb(x, shifts, coefs, half_width, alpha):
        out = np.zeros(x.shape[0])
        for i in range(x.shape[0]):
            xi = x[i]
            lo = _first_above(shifts, xi - half_width)
            hi = _first_at_least(shifts, xi + half_width)
            acc = 0.0
            for s in range(lo, hi):
                d = 1.0 - abs(xi - shifts[s]) / half_width
                if d > 0.0:
                    if alpha == 1.0:
                        acc += coefs[s] * d
                    else:
                        acc += coefs[s] * d ** alpha
            out[i] = acc
        return out

    @numba.njit(cache=True)
    def _geometric_tail_nb(x, base, spacing, lead, ratio, half_width, alpha):
        out = np.zeros(x.shape[0])
        for i in range(x.shape[0]):
            xi = x[i]
            r_lo = max(1.0, math.ceil((xi - base - half_width) / spacing))
            r_hi = math.floor((xi - base + half_width) / spacing)
            acc = 0.0
            r = r_lo
            while r <= r_hi:
                d = 1.0 - abs(xi - base - r * spacing) / half_width
                if d > 0.0:
                    w = lead * ratio ** (r - 1.0)
                    if alpha == 1.0:
                        acc += w * d
                    else:
                        acc += w * d ** alpha
                r += 1.0
            out[i] = acc
        return out

    @numba.njit(cache=True)
    def _cosine_sum_nb(t, coefs, freqs, shifts):
        out = np.zeros(t.shape[0])
        for i in range(t.shape[0]):
            acc = 0.0
            ti = t[i]
            for m in range(coefs.shape[0]):
                acc += coefs[m] * math.cos(freqs[m] * ti + shifts[m])
            out[i] = acc
        return out

    def translate_sum_numba(x, shifts, coefs, half_width, alpha):
        x = np.asarray(x, dtype=np.float64)
        flat = np.ascontiguousarray(x.reshape(-1))
        res = _translate_sum_nb(flat, np.ascontiguousarray(shifts, dtype=np.float64),
                                np.ascontiguousarray(coefs, dtype=np.float64),
                                float(half_width), float(alpha))
        return res.reshape(x.shape)

    def geometric_tail_numba(x, base, spacing, lead, ratio, half_width, alpha):
        x = np.asarray(x, dtype=np.float64)
        flat = np.ascontiguousarray(x.reshape(-1))
        res = _geometric_tail_nb(flat, float(base), float(spacing), float(lead), float(ratio),
                                 float(half_width), float(alpha))
        return res.reshape(x.shape)

    def cosine_sum_numba(t, coefs, freqs, shifts):
        t = np.asarray(t, dtype=np.float64)
        flat = np.ascontiguousarray(t.reshape(-1))
        res = _cosine_sum_nb(flat, np.ascontiguousarray(coefs, dtype=np.float64),
                             np.ascontiguousarray(freqs, dtype=np.float64),
                             np.ascontiguousarray(shifts, dtype=np.float64))
        return res.reshape(t.shape)

else:  # pragma: no cover
    translate_sum_numba = None
    geometric_tail_numba = None
    cosine_sum_numba = None


if USE_NUMBA:
    translate_sum = translate_sum_numba
    geometric_tail = geometric_tail_numba
    cosine_sum = cosine_sum_numba
else:
    translate_sum = translate_sum_numpy
    geometric_tail = geometric_tail_numpy
    cosine_sum = cosine_sum_numpy
