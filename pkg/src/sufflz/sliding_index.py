"""Sliding-window dictionary indexed by a double-buffered suffix array.

The dictionary is searched through its suffix array ``P`` and a 256-entry
LeftIndex ``LI`` where ``LI[c]`` is the first SA index whose suffix starts
with byte ``c`` (or -1).  While the window is filling, ``P`` is rebuilt from
scratch after every block.  Once the window is full, each slid-in block
triggers an incremental update into the *other* SA buffer:

* surviving suffixes keep their previous relative order, shifted left by the
  block length;
* the block's own suffixes are sorted with SA-IS and merged in at insertion
  indexes found by binary search against the survivors;
* the buffers swap roles.

Survivors are never re-sorted, so after an update ``P`` can be slightly out
of order where two old suffixes used to compare equal up to the old window
end.  Matches are always confirmed by direct byte comparison, so this only
affects match optimality, never correctness.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from numba import njit

from .errors import ConfigError, InvalidInputError, StateError
from .suffix_array import sais_bytes

POLICIES = ("fast", "best")

# Intervals at or below this size are scanned linearly instead of narrowed.
LINEAR_SCAN_MAX = 8


@dataclass(frozen=True)
class WindowConfig:
    """Dictionary and look-ahead-buffer lengths, both powers of two."""

    dict_len: int
    lab_len: int

    def __post_init__(self):
        for name in ("dict_len", "lab_len"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1 or v & (v - 1):
                raise ConfigError(f"{name} must be a positive power of two, got {v!r}")
        if self.lab_len > self.dict_len:
            raise ConfigError(
                f"lab_len ({self.lab_len}) must not exceed dict_len ({self.dict_len})"
            )
        if self.pos_bits > 32:
            raise ConfigError(f"dict_len {self.dict_len} needs more than 32 position bits")

    @property
    def pos_bits(self):
        return int(self.dict_len).bit_length() - 1

    @property
    def len_bits(self):
        return int(self.lab_len).bit_length() - 1

    @classmethod
    def from_bits(cls, pos_bits, len_bits):
        if not (0 <= len_bits <= pos_bits <= 32):
            raise ConfigError(f"invalid bit widths np={pos_bits}, nl={len_bits}")
        return cls(1 << pos_bits, 1 << len_bits)


class MatchResult(NamedTuple):
    pos: int
    len: int


def check_policy(policy):
    if policy not in POLICIES:
        raise InvalidInputError(f"policy must be one of {POLICIES}, got {policy!r}")
    return policy == "best"


# ---------------------------------------------------------------------------
# jitted kernels, shared with the codec loops


@njit(cache=True)
def refresh_li_kernel(dic, fill, sa, li):
    li[:] = -1
    for i in range(fill):
        c = dic[sa[i]]
        if li[c] < 0:
            li[c] = i


@njit(cache=True)
def symbol_range_kernel(li, fill, c):
    left = li[c]
    if left < 0:
        return -1, -1
    for c2 in range(c + 1, 256):
        if li[c2] >= 0:
            return left, li[c2] - 1
    return left, fill - 1


@njit(cache=True)
def match_len_kernel(dic, fill, p, lab, i):
    limit = min(lab.shape[0] - i, fill - p)
    k = 0
    while k < limit and dic[p + k] == lab[i + k]:
        k += 1
    return k


@njit(cache=True)
def _key(dic, fill, sa, j, k):
    q = sa[j] + k
    if q >= fill:
        return -1
    return np.int32(dic[q])


@njit(cache=True)
def _lower_bound(dic, fill, sa, lo, hi, k, s):
    # First j in [lo, hi) whose k-th symbol is >= s (a suffix that ended sorts as -1).
    while lo < hi:
        mid = (lo + hi) >> 1
        if _key(dic, fill, sa, mid, k) < s:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def longest_match_kernel(dic, fill, sa, li, lab, i, best):
    """Return (pos, len); pos is -1 when no dictionary suffix starts with lab[i]."""
    left, right = symbol_range_kernel(li, fill, lab[i])
    if left < 0:
        return -1, 0
    if not best:
        p = sa[left]
        return p, match_len_kernel(dic, fill, p, lab, i)

    limit = lab.shape[0] - i
    lo = left
    hi = right
    k = 1
    while k < limit and hi - lo + 1 > LINEAR_SCAN_MAX:
        s = np.int32(lab[i + k])
        nlo = _lower_bound(dic, fill, sa, lo, hi + 1, k, s)
        nhi = _lower_bound(dic, fill, sa, nlo, hi + 1, k, s + 1) - 1
        if nlo > nhi or _key(dic, fill, sa, nlo, k) != s:
            break
        lo = nlo
        hi = nhi
        k += 1
    if k < limit and hi - lo + 1 <= LINEAR_SCAN_MAX:
        best_len = 0
        best_j = lo
        for j in range(lo, hi + 1):
            ln = match_len_kernel(dic, fill, sa[j], lab, i)
            if ln > best_len:
                best_len = ln
                best_j = j
        return sa[best_j], best_len
    p = sa[lo]
    return p, match_len_kernel(dic, fill, p, lab, i)


@njit(cache=True)
def _cmp_suffixes(dic, m, x, y, start):
    # Sign of (suffix x - suffix y) over dic[:m], comparing from offset ``start``.
    # A suffix that is a prefix of the other sorts first.
    lx = m - x
    ly = m - y
    lim = min(lx, ly)
    h = start
    while h < lim and dic[x + h] == dic[y + h]:
        h += 1
    if h == lim:
        return (-1 if lx < ly else 1), h
    return (-1 if dic[x + h] < dic[y + h] else 1), h


@njit(cache=True)
def _rank_plain(dic, m, surv, x, lo, hi):
    while lo < hi:
        mid = (lo + hi) >> 1
        s, _ = _cmp_suffixes(dic, m, x, surv[mid], 1)
        if s > 0:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def _rank(dic, m, surv, x, lo, hi):
    """Number of survivors in surv[:hi] smaller than suffix ``x``, searched in
    [lo, hi) where all entries share x's first symbol.  Gallops from ``lo``
    (ranks of consecutive sorted inserts are non-decreasing), then bisects
    with the usual lcp-of-bounds skip."""
    lo0 = lo
    hi0 = hi
    llcp = 1
    rlcp = 1
    step = 1
    while lo < hi:
        probe = lo + step - 1
        if probe >= hi:
            break
        s, h = _cmp_suffixes(dic, m, x, surv[probe], min(llcp, rlcp))
        if s > 0:
            lo = probe + 1
            llcp = h
            step <<= 1
        else:
            hi = probe
            rlcp = h
            break
    while lo < hi:
        mid = (lo + hi) >> 1
        s, h = _cmp_suffixes(dic, m, x, surv[mid], min(llcp, rlcp))
        if s > 0:
            lo = mid + 1
            llcp = h
        else:
            hi = mid
            rlcp = h
    # The lcp skip assumes survivors are exactly sorted, which the stale tail
    # can violate; confirm the neighbours and fall back if needed.
    if lo > lo0:
        s, _ = _cmp_suffixes(dic, m, x, surv[lo - 1], 1)
        if s < 0:
            return _rank_plain(dic, m, surv, x, lo0, hi0)
    if lo < hi0:
        s, _ = _cmp_suffixes(dic, m, x, surv[lo], 1)
        if s > 0:
            return _rank_plain(dic, m, surv, x, lo0, hi0)
    return lo


@njit(cache=True)
def update_kernel(dic, m, b, src, dst, lab_sa, ins, groups):
    """Merge survivors of ``src`` and the sorted suffixes of dic[m-b:m] into ``dst``."""
    base = m - b
    sais_bytes(dic[base:m], lab_sa)

    n_surv = 0
    for j in range(m):
        v = src[j]
        if v >= b:
            dst[n_surv] = v - b
            n_surv += 1

    # Survivors stay grouped by first symbol; groups[c]..groups[c+1] bounds group c.
    groups[:] = 0
    for j in range(n_surv):
        groups[dic[dst[j]] + 1] += 1
    for c in range(256):
        groups[c + 1] += groups[c]

    prev_r = 0
    for j in range(b):
        x = base + lab_sa[j]
        c = dic[x]
        lo = max(groups[c], prev_r)
        r = _rank(dic, m, dst, x, lo, groups[c + 1])
        ins[j] = r + j
        prev_r = r

    # Backward in-place merge: the write cursor never passes the read cursor.
    k = n_surv - 1
    jj = b - 1
    for d in range(m - 1, -1, -1):
        if jj >= 0 and ins[jj] == d:
            dst[d] = base + lab_sa[jj]
            jj -= 1
        else:
            dst[d] = dst[k]
            k -= 1


@njit(cache=True)
def rebuild_kernel(dic, fill, sa):
    sais_bytes(dic[:fill], sa)


# ---------------------------------------------------------------------------


def _as_block(block):
    if isinstance(block, np.ndarray):
        return np.ascontiguousarray(block, dtype=np.uint8)
    if isinstance(block, str):
        block = block.encode("latin-1")
    return np.frombuffer(bytes(block), dtype=np.uint8)


class SlidingIndex:
    """Dictionary window plus its searchable suffix-array index.

    All buffers are allocated once, at construction.  Typical encoder use::

        idx = SlidingIndex(WindowConfig(4096, 1024))
        idx.slide_in(block)
        idx.rebuild()          # while filling; update(block) once full
        idx.longest_match(lab, 0, "best")
    """

    def __init__(self, config):
        self.config = config
        m, n = config.dict_len, config.lab_len
        self._dict = np.zeros(m, dtype=np.uint8)
        self.fill = 0
        self.sa_a = np.zeros(m, dtype=np.int32)
        self.sa_b = np.zeros(m, dtype=np.int32)
        self.active = 0
        self.left_index = np.full(256, -1, dtype=np.int32)
        self.lab_sa_scratch = np.zeros(n, dtype=np.int32)
        self.insert_scratch = np.zeros(n, dtype=np.int32)
        self._groups = np.zeros(257, dtype=np.int32)
        self._synced = True
        self._last_slide = None  # (block length, dictionary was full before)

    @property
    def dictionary(self):
        return self._dict[:self.fill].tobytes()

    @property
    def active_sa(self):
        buf = self.sa_a if self.active == 0 else self.sa_b
        return buf[:self.fill]

    @property
    def last_insert_indexes(self):
        """Destination indexes used by the most recent update()."""
        if self._last_slide is None:
            return self.insert_scratch[:0]
        return self.insert_scratch[:self._last_slide[0]]

    def _buffers(self):
        return (self.sa_a, self.sa_b) if self.active == 0 else (self.sa_b, self.sa_a)

    def slide_in(self, block):
        """Append ``block`` to the window, dropping the oldest bytes once full."""
        data = _as_block(block)
        b = data.shape[0]
        m = self.config.dict_len
        if not 1 <= b <= self.config.lab_len:
            raise InvalidInputError(f"block length {b} outside 1..{self.config.lab_len}")
        was_full = self.fill == m
        if self.fill + b <= m:
            self._dict[self.fill:self.fill + b] = data
            self.fill += b
        else:
            drop = self.fill + b - m
            self._dict[:self.fill - drop] = self._dict[drop:self.fill]
            self._dict[m - b:] = data
            self.fill = m
        self._last_slide = (b, was_full and self._synced)
        self._synced = False

    def rebuild(self):
        if self.fill < 1:
            raise StateError("cannot build a suffix array over an empty dictionary")
        rebuild_kernel(self._dict, self.fill, self._buffers()[0])
        self._synced = True
        self.refresh_left_index()

    def update(self, slid_block):
        """Incrementally re-index after ``slid_block`` slid into a full window."""
        data = _as_block(slid_block)
        if self._last_slide is None or self._synced:
            raise StateError("update() must follow exactly one slide_in()")
        b, was_full = self._last_slide
        if not was_full:
            raise StateError("update() is only valid once the dictionary is full; use rebuild()")
        m = self.config.dict_len
        if data.shape[0] != b or not np.array_equal(self._dict[m - b:], data):
            raise InvalidInputError("slid_block does not match the block just slid in")
        src, dst = self._buffers()
        update_kernel(self._dict, m, b, src, dst, self.lab_sa_scratch,
                      self.insert_scratch, self._groups)
        self.active ^= 1
        self._synced = True
        self.refresh_left_index()

    def refresh_left_index(self):
        refresh_li_kernel(self._dict, self.fill, self._buffers()[0], self.left_index)

    def _require_synced(self):
        if not self._synced:
            raise StateError("index is stale: call rebuild() or update() after slide_in()")

    def symbol_range(self, sym) -> Optional[tuple]:
        """Inclusive SA index range of suffixes starting with ``sym``, or None."""
        self._require_synced()
        left, right = symbol_range_kernel(self.left_index, self.fill, int(sym))
        if left < 0:
            return None
        return int(left), int(right)

    def longest_match(self, lab, i, policy="best") -> Optional[MatchResult]:
        best = check_policy(policy)
        self._require_synced()
        data = _as_block(lab)
        if not 0 <= i < data.shape[0]:
            raise InvalidInputError(f"offset {i} outside LAB of length {data.shape[0]}")
        pos, ln = longest_match_kernel(self._dict, self.fill, self._buffers()[0],
                                       self.left_index, data, i, best)
        if pos < 0 or ln == 0:
            return None
        return MatchResult(int(pos), int(ln))


def new_index(config):
    return SlidingIndex(config)
