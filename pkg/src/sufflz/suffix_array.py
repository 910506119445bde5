"""Suffix array construction (SA-IS) plus a comparison-sort oracle and validator.

Suffix positions are 0-based.  The classic ``mississippi`` example is
usually printed 1-based as ``11 8 5 2 1 10 9 7 4 6 3``; here it is
``[10, 7, 4, 1, 0, 9, 8, 6, 3, 5, 2]``.
"""

from functools import cmp_to_key

import numpy as np
from numba import njit

from .errors import InvalidInputError

NAIVE_MAX_LEN = 1 << 20

# Above this length the naive oracle stops materialising every suffix as a key.
_NAIVE_KEY_SLICE_LIMIT = 1 << 14


@njit(cache=True)
def _classify(t):
    # True = S-type.  t[-1] is the unique smallest sentinel.
    n = t.shape[0]
    stype = np.zeros(n, dtype=np.bool_)
    stype[n - 1] = True
    for i in range(n - 2, -1, -1):
        if t[i] < t[i + 1] or (t[i] == t[i + 1] and stype[i + 1]):
            stype[i] = True
    return stype


@njit(cache=True)
def _bucket_bounds(t, k, tails):
    counts = np.zeros(k, dtype=np.int32)
    for i in range(t.shape[0]):
        counts[t[i]] += 1
    bounds = np.empty(k, dtype=np.int32)
    total = 0
    for c in range(k):
        total += counts[c]
        bounds[c] = total if tails else total - counts[c]
    return bounds


@njit(cache=True)
def _induce(t, sa, stype, k):
    n = t.shape[0]
    heads = _bucket_bounds(t, k, False)
    for i in range(n):
        j = sa[i] - 1
        if sa[i] > 0 and not stype[j]:
            sa[heads[t[j]]] = j
            heads[t[j]] += 1
    tails = _bucket_bounds(t, k, True)
    for i in range(n - 1, -1, -1):
        j = sa[i] - 1
        if sa[i] > 0 and stype[j]:
            tails[t[j]] -= 1
            sa[tails[t[j]]] = j


@njit(cache=True)
def _is_lms(stype, i):
    return i > 0 and stype[i] and not stype[i - 1]


@njit(cache=True)
def _lms_equal(t, stype, a, b):
    n = t.shape[0]
    d = 0
    while True:
        if a + d >= n or b + d >= n:
            return False
        if t[a + d] != t[b + d] or stype[a + d] != stype[b + d]:
            return False
        if d > 0 and (_is_lms(stype, a + d) or _is_lms(stype, b + d)):
            return _is_lms(stype, a + d) and _is_lms(stype, b + d)
        d += 1


@njit(cache=True)
def _reduce(t, k, stype, sa):
    """Sort LMS substrings by induction and name them.

    Returns (lms positions in text order, reduced string, number of names).
    """
    n = t.shape[0]
    sa[:] = -1
    tails = _bucket_bounds(t, k, True)
    for i in range(1, n):
        if _is_lms(stype, i):
            tails[t[i]] -= 1
            sa[tails[t[i]]] = i
    _induce(t, sa, stype, k)

    n_lms = 0
    for i in range(n):
        if _is_lms(stype, sa[i]):
            sa[n_lms] = sa[i]
            n_lms += 1
    names = np.full(n, -1, dtype=np.int32)
    name = 0
    prev = -1
    for i in range(n_lms):
        pos = sa[i]
        if prev >= 0 and not _lms_equal(t, stype, prev, pos):
            name += 1
        names[pos] = name
        prev = pos

    lms_pos = np.empty(n_lms, dtype=np.int32)
    reduced = np.empty(n_lms, dtype=np.int32)
    w = 0
    for i in range(n):
        if names[i] >= 0:
            lms_pos[w] = i
            reduced[w] = names[i]
            w += 1
    return lms_pos, reduced, name + 1


@njit(cache=True)
def _expand(t, k, stype, lms_pos, reduced_sa, sa):
    # Seed bucket tails with the sorted LMS suffixes and induce everything else.
    sa[:] = -1
    tails = _bucket_bounds(t, k, True)
    for i in range(lms_pos.shape[0] - 1, -1, -1):
        pos = lms_pos[reduced_sa[i]]
        tails[t[pos]] -= 1
        sa[tails[t[pos]]] = pos
    _induce(t, sa, stype, k)


@njit(cache=True)
def _sais(t, k):
    """Suffix array of ``t`` whose last symbol is a unique minimum (0).

    The recursion on reduced strings is unrolled into an explicit stack of
    levels (numba cannot cache self-recursive functions).
    """
    n = t.shape[0]
    if n == 1:
        return np.zeros(1, dtype=np.int32)
    texts = [t]
    alphabets = [k]
    stypes = [_classify(t)]
    lms = [np.empty(0, dtype=np.int32)]
    while True:
        cur = texts[-1]
        sa = np.empty(cur.shape[0], dtype=np.int32)
        lms_pos, reduced, n_names = _reduce(cur, alphabets[-1], stypes[-1], sa)
        lms[-1] = lms_pos
        if n_names < reduced.shape[0]:
            texts.append(reduced)
            alphabets.append(n_names)
            stypes.append(_classify(reduced))
            lms.append(np.empty(0, dtype=np.int32))
            continue
        reduced_sa = np.empty(reduced.shape[0], dtype=np.int32)
        for i in range(reduced.shape[0]):
            reduced_sa[reduced[i]] = i
        break
    for level in range(len(texts) - 1, -1, -1):
        cur = texts[level]
        sa = np.empty(cur.shape[0], dtype=np.int32)
        _expand(cur, alphabets[level], stypes[level], lms[level], reduced_sa, sa)
        reduced_sa = sa
    return reduced_sa


@njit(cache=True)
def sais_bytes(data, out):
    """Write the suffix array of uint8 array ``data`` into ``out[:len(data)]``."""
    n = data.shape[0]
    if n == 0:
        return
    t = np.empty(n + 1, dtype=np.int32)
    for i in range(n):
        t[i] = np.int32(data[i]) + 1
    t[n] = 0
    sa = _sais(t, 257)
    # sa[0] is the sentinel position.
    for i in range(n):
        out[i] = sa[i + 1]


def _as_array(text):
    if isinstance(text, np.ndarray):
        if text.dtype != np.uint8 or text.ndim != 1:
            raise InvalidInputError("text arrays must be 1-D uint8")
        return text
    if isinstance(text, str):
        text = text.encode("latin-1")
    return np.frombuffer(bytes(text), dtype=np.uint8)


def build_suffix_array(text):
    """Suffix array of ``text`` (bytes, str or uint8 array) as an int32 array.

    Linear time induced sorting; the virtual terminator never appears in the
    result.

    >>> build_suffix_array(b"mississippi").tolist()
    [10, 7, 4, 1, 0, 9, 8, 6, 3, 5, 2]
    """
    data = _as_array(text)
    out = np.empty(data.shape[0], dtype=np.int32)
    sais_bytes(data, out)
    return out


def build_suffix_array_naive(text, max_len=NAIVE_MAX_LEN):
    """Comparison-sort every suffix.  Test oracle only, refuses large inputs."""
    data = bytes(_as_array(text))
    n = len(data)
    if n > max_len:
        raise InvalidInputError(f"naive suffix sort refuses {n} bytes (bound {max_len})")
    if n <= _NAIVE_KEY_SLICE_LIMIT:
        order = sorted(range(n), key=lambda i: data[i:])
    else:
        view = memoryview(data)

        def cmp(a, b):
            x, y = bytes(view[a:]), bytes(view[b:])
            return -1 if x < y else 1

        order = sorted(range(n), key=cmp_to_key(cmp))
    return np.array(order, dtype=np.int32)


def verify_suffix_array(text, sa):
    """True iff ``sa`` is a permutation of the positions of ``text`` in strictly
    increasing suffix order.  Checks by direct suffix comparison."""
    data = bytes(_as_array(text))
    sa = np.asarray(sa)
    n = len(data)
    if sa.shape[0] != n:
        raise InvalidInputError(f"suffix array has {sa.shape[0]} entries, text has {n}")
    if n == 0:
        return True
    if sa.min() < 0 or sa.max() >= n:
        return False
    if np.unique(sa).shape[0] != n:
        return False
    order = sa.tolist()
    for a, b in zip(order, order[1:]):
        if not data[a:] < data[b:]:
            return False
    return True
