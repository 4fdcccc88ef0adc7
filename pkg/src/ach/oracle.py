"""Exact minimum cost of a mapping by exhaustive enumeration of 2^F strings.

Enumeration follows the binary reflected Gray code, so consecutive strings
differ in exactly one entry and the local fields can be updated in O(M)
instead of recomputed in O(M*F).  That keeps F = 25 (about 3.4e7 strings at
M = 50) in the seconds range.

Entry encoding and tie-breaking are fixed: entry k maps to bit (F-1-k) of an
F-bit integer, with -1 encoded as bit value 1 and +1 as 0.  "Lexicographically
smallest minimizer" means the minimizer with the smallest such integer, i.e.
tuple order with +1 < -1 and entry 0 most significant; the all +1 string is
the smallest overall.

The 2^F range is scanned in 2^min(F,6) equal Gray-aligned chunks whose
partial results are reduced in chunk order (min cost, then summed minimizer
counts, then smallest encoded minimizer).  The reduction is associative and
order-fixed, so a threaded scan would return bit-identical results; the
current implementation runs the chunks sequentially.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .perceptron import Mapping


@dataclass(frozen=True)
class OracleResult:
    min_cost: int
    minimizer_count: int
    one_minimizer: np.ndarray  # (F,) int8, lexicographically smallest


@njit(cache=True, nogil=True)
def _scan_chunk(pat_t, targets, f, start, count):
    """Scan Gray codes for indices [start, start+count); return the chunk's
    (min cost, number of strings attaining it, smallest encoded minimizer)."""
    m = pat_t.shape[1]
    code = start ^ (start >> 1)
    w = np.ones(f, np.int8)
    for k in range(f):
        if (code >> (f - 1 - k)) & 1:
            w[k] = -1
    h = np.zeros(m, np.int32)
    c = 0
    for l in range(m):
        s = 0
        for k in range(f):
            s += w[k] * pat_t[k, l]
        h[l] = s
        if targets[l] * s <= 0:
            c += 1
    best_cost = c
    best_key = code
    n_min = 1
    for i in range(start, start + count - 1):
        x = i + 1
        j = 0
        while x & 1 == 0:
            x >>= 1
            j += 1
        k = f - 1 - j  # Gray bit j toggles entry f-1-j
        old = w[k]
        w[k] = -old
        code ^= np.int64(1) << j
        c = 0
        for l in range(m):
            hl = h[l] - 2 * old * pat_t[k, l]
            h[l] = hl
            if targets[l] * hl <= 0:
                c += 1
        if c < best_cost:
            best_cost = c
            n_min = 1
            best_key = code
        elif c == best_cost:
            n_min += 1
            if code < best_key:
                best_key = code
    return best_cost, n_min, best_key


def _decode(key: int, f: int) -> np.ndarray:
    w = np.ones(f, dtype=np.int8)
    for k in range(f):
        if (key >> (f - 1 - k)) & 1:
            w[k] = -1
    return w


def exhaustive_min_cost(mapping: Mapping, f_limit: int = 25) -> OracleResult:
    """Exact minimum cost over all 2^F weight strings.

    f_limit guards against accidental huge scans; pass a larger f_limit
    explicitly to enumerate beyond F = 25 (time roughly doubles per +1).
    """
    f = mapping.f
    if f > f_limit:
        raise ValueError(
            f"F={f} exceeds f_limit={f_limit}; pass f_limit={f} explicitly "
            f"to run the ~2^{f} enumeration anyway")
    pat_t = np.ascontiguousarray(mapping.patterns.T).astype(np.int8)
    targets = mapping.targets.astype(np.int8)
    total = 1 << f
    nchunks = 1 << min(f, 6)
    size = total // nchunks
    best_cost = None
    n_min = 0
    best_key = 0
    for ci in range(nchunks):
        c, k, key = _scan_chunk(pat_t, targets, f, ci * size, size)
        if best_cost is None or c < best_cost:
            best_cost, n_min, best_key = int(c), int(k), int(key)
        elif c == best_cost:
            n_min += int(k)
            if key < best_key:
                best_key = int(key)
    return OracleResult(best_cost, n_min, _decode(best_key, f))
