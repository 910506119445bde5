"""Quick oracle checks runnable without pytest (``sufflz selftest``)."""

import numpy as np

from .bench import TABLE_CONFIGS, memory_bt, memory_gzip, memory_lzma, memory_sa, memory_st
from .codec import decode_stream, encode_stream
from .sliding_index import SlidingIndex, WindowConfig
from .suffix_array import build_suffix_array, build_suffix_array_naive, verify_suffix_array


def brute_longest(dictionary, lab, i):
    best = 0
    for p in range(len(dictionary)):
        k = 0
        while i + k < len(lab) and p + k < len(dictionary) and dictionary[p + k] == lab[i + k]:
            k += 1
        best = max(best, k)
    return best


def _check_suffix_arrays(rng):
    if build_suffix_array(b"mississippi").tolist() != [10, 7, 4, 1, 0, 9, 8, 6, 3, 5, 2]:
        return False
    for _ in range(200):
        k = int(rng.choice([2, 4, 256]))
        t = rng.integers(0, k, int(rng.integers(0, 512))).astype(np.uint8)
        sa = build_suffix_array(t)
        if not np.array_equal(sa, build_suffix_array_naive(t)) or not verify_suffix_array(t, sa):
            return False
    return True


def _check_matches(rng):
    for _ in range(30):
        d = rng.integers(0, 3, int(rng.integers(1, 300))).astype(np.uint8).tobytes()
        lab = rng.integers(0, 3, int(rng.integers(1, 32))).astype(np.uint8).tobytes()
        idx = SlidingIndex(WindowConfig(512, 32))
        idx.slide_in(d[:32])
        for s in range(32, len(d), 32):
            idx.slide_in(d[s:s + 32])
        idx.rebuild()
        for i in range(len(lab)):
            got = idx.longest_match(lab, i, "best")
            if (got.len if got else 0) != brute_longest(d, lab, i):
                return False
    return True


def _check_roundtrip(rng):
    for m, n in TABLE_CONFIGS:
        for policy in ("fast", "best"):
            x = rng.integers(0, 8, int(rng.integers(0, 3 * m))).astype(np.uint8).tobytes()
            if decode_stream(encode_stream(x, WindowConfig(m, n), policy).data).data != x:
                return False
    return True


def _check_memory():
    return (memory_sa(65536, 4096) == 611328 and memory_bt(65536) == 851980
            and memory_st(65536, 65536) == 1900560 and memory_lzma(65536, "BT2") == 4816896
            and memory_gzip() == 313408)


def run(seed=0, echo=print):
    rng = np.random.default_rng(seed)
    checks = [
        ("suffix arrays match the naive oracle", lambda: _check_suffix_arrays(rng)),
        ("best match equals brute force after rebuild", lambda: _check_matches(rng)),
        ("roundtrip on every table geometry", lambda: _check_roundtrip(rng)),
        ("memory models", _check_memory),
    ]
    ok = True
    for name, fn in checks:
        passed = bool(fn())
        ok &= passed
        echo(f"{'PASS' if passed else 'FAIL'}  {name}")
    return ok
