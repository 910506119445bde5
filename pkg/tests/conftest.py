import numpy as np
import pytest

from sufflz import SlidingIndex, WindowConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_bytes(rng, size, alphabet=256):
    return rng.integers(0, alphabet, size).astype(np.uint8).tobytes()


def brute_match_lengths(dictionary, lab, i):
    """Match length of lab[i:] at every dictionary position, by direct scan."""
    d = np.frombuffer(dictionary, dtype=np.uint8)
    lens = np.zeros(len(d), dtype=np.int64)
    alive = np.ones(len(d), dtype=bool)
    for k in range(len(lab) - i):
        idx = np.arange(len(d)) + k
        ok = alive & (idx < len(d))
        ok[ok] = d[idx[ok]] == lab[i + k]
        if not ok.any():
            break
        lens[ok] += 1
        alive = ok
    return lens


def brute_longest(dictionary, lab, i):
    lens = brute_match_lengths(dictionary, lab, i)
    return int(lens.max()) if len(lens) else 0


def indexed(dictionary, m=None, n=None):
    """An index whose window holds ``dictionary`` with an exact suffix array."""
    m = m or max(1, 1 << (len(dictionary) - 1).bit_length())
    n = n or m
    idx = SlidingIndex(WindowConfig(m, n))
    for s in range(0, len(dictionary), n):
        idx.slide_in(dictionary[s:s + n])
    idx.rebuild()
    return idx


def check_update_structure(old_sa, new_sa, block, m):
    """Assert the structural contract of one incremental update.

    ``old_sa``/``new_sa`` are the active buffers before and after sliding in
    ``block`` (length b) into a full window of length m.
    """
    from sufflz import build_suffix_array_naive

    b = len(block)
    old_sa = np.asarray(old_sa)
    new_sa = np.asarray(new_sa)
    assert sorted(new_sa.tolist()) == list(range(m))
    survivors = new_sa[new_sa < m - b]
    assert np.array_equal(survivors, old_sa[old_sa >= b] - b)
    inserted = new_sa[new_sa >= m - b]
    assert np.array_equal(inserted, build_suffix_array_naive(block) + (m - b))


def check_insert_neighbours(dictionary, new_sa, b):
    """Each inserted suffix sorts strictly between its nearest survivor neighbours."""
    m = len(dictionary)
    new_sa = np.asarray(new_sa).tolist()
    surv_idx = [k for k, p in enumerate(new_sa) if p < m - b]
    for k, p in enumerate(new_sa):
        if p < m - b:
            continue
        before = [j for j in surv_idx if j < k]
        after = [j for j in surv_idx if j > k]
        if before:
            assert dictionary[new_sa[before[-1]]:] < dictionary[p:]
        if after:
            assert dictionary[p:] < dictionary[new_sa[after[0]]:]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
