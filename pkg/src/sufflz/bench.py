"""Memory cost models for LZ encoders and a corpus benchmark harness.

All memory figures are bytes, assuming 4-byte integers.
"""

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .codec import decode_stream, encode_stream
from .errors import InvalidInputError
from .sliding_index import WindowConfig

log = logging.getLogger(__name__)

INT_BYTES = 4
LI_ENTRIES = 256
GZIP_BYTES = 313408
LZMA_BASE_BYTES = 4194304
# Per-dictionary-byte cost of each LZMA match finder, in half bytes.
LZMA_HALF_COEFFICIENTS = {"BT2": 19, "BT3": 23, "BT4": 23, "HC4": 15}

# (dictionary, LAB) geometries of the reference comparison tables.
TABLE_CONFIGS = [
    (2048, 1024),
    (4096, 1024),
    (4096, 2048),
    (8192, 2048),
    (16384, 256),
    (32768, 256),
    (32768, 1024),
    (32768, 2048),
]


def memory_sa(m, n):
    """Window, LAB, two suffix arrays, LeftIndex and the LAB suffix array."""
    WindowConfig(m, n)
    return m + n + 2 * INT_BYTES * m + INT_BYTES * LI_ENTRIES + INT_BYTES * n


def memory_bt(m):
    # m + 1 nodes of three integers, plus the window itself.
    return 13 * m + 12


def memory_st(m, hashsz):
    return 25 * m + 4 * hashsz + 16


def memory_lzma(m, match_finder="BT4"):
    try:
        half = LZMA_HALF_COEFFICIENTS[match_finder.upper()]
    except (KeyError, AttributeError):
        raise InvalidInputError(
            f"unknown match finder {match_finder!r}; expected one of {sorted(LZMA_HALF_COEFFICIENTS)}"
        ) from None
    # Round half up to whole bytes.
    return LZMA_BASE_BYTES + (half * m + 1) // 2


def memory_gzip():
    return GZIP_BYTES


def memory_report(m, n, hashsz=None, match_finder="BT4"):
    """All five models for one geometry.  ``hashsz`` defaults to ``m``."""
    return {
        "SA": memory_sa(m, n),
        "BT": memory_bt(m),
        "ST": memory_st(m, m if hashsz is None else hashsz),
        "LZMA": memory_lzma(m, match_finder),
        "GZIP": memory_gzip(),
    }


@dataclass
class BenchResult:
    file: str
    dict_len: int
    lab_len: int
    policy: str
    original_bytes: int
    compressed_bytes: int
    seconds: float
    memory: int

    @property
    def bpb(self):
        return 8.0 * self.compressed_bytes / self.original_bytes

    def record(self):
        d = asdict(self)
        d["bpb"] = self.bpb
        return d


@dataclass
class ConfigSummary:
    dict_len: int
    lab_len: int
    policy: str
    files: int
    total_seconds: float
    mean_bpb: float
    memory_sa: int
    memory_bt: int
    memory_lzma: int


@dataclass
class BenchReport:
    results: list
    summaries: list
    skipped: list = field(default_factory=list)
    contended: bool = False

    def table(self):
        timing = "Time*" if self.contended else "Time"
        header = f"{'#':>2} {'Dictionary':>10} {'LAB':>6} {'Memory':>8} {timing:>8} {'bpb':>6}" \
                 f" {'BT mem':>8} {'LZMA mem':>9}"
        lines = [header, "-" * len(header)]
        for k, s in enumerate(self.summaries, 1):
            lines.append(f"{k:>2} {s.dict_len:>10} {s.lab_len:>6} {s.memory_sa:>8} "
                         f"{s.total_seconds:>8.2f} {s.mean_bpb:>6.2f} {s.memory_bt:>8} {s.memory_lzma:>9}")
        lines.append(f"GZIP memory: {memory_gzip()} bytes")
        if self.contended:
            lines.append("* files encoded in parallel; timings are contended")
        for name, reason in self.skipped:
            lines.append(f"skipped {name}: {reason}")
        return "\n".join(lines)

    def records(self):
        return [r.record() for r in self.results]

    def write(self, path):
        """Write the table to ``path`` and one JSON record per file x config to ``path.jsonl``."""
        path = Path(path)
        path.write_text(self.table() + "\n")
        with open(str(path) + ".jsonl", "w") as fh:
            for rec in self.records():
                fh.write(json.dumps(rec) + "\n")
            for name, reason in self.skipped:
                fh.write(json.dumps({"file": name, "skipped": reason}) + "\n")


def load_corpus(corpus):
    """Read every regular file under ``corpus`` (sorted by name).

    Returns (list of (name, bytes), list of (name, reason) for skipped files).
    """
    files, skipped = [], []
    root = Path(corpus)
    if not root.is_dir():
        raise InvalidInputError(f"corpus {corpus} is not a directory")
    for p in sorted(root.iterdir()):
        if not p.is_file():
            continue
        try:
            data = p.read_bytes()
        except OSError as exc:
            log.warning("skipping %s: %s", p.name, exc)
            skipped.append((p.name, str(exc)))
            continue
        if not data:
            log.warning("skipping %s: empty file", p.name)
            skipped.append((p.name, "empty file"))
            continue
        files.append((p.name, data))
    return files, skipped


def bench_file(name, data, config, policy="best", min_match=1):
    """Encode one file, verify the roundtrip, and time the encode call only."""
    t0 = time.process_time()
    stats = encode_stream(data, config, policy, min_match)
    seconds = time.process_time() - t0
    if decode_stream(stats.data).data != data:
        raise RuntimeError(f"{name}: roundtrip verification failed")
    return BenchResult(name, config.dict_len, config.lab_len, policy, len(data),
                       stats.output_bytes, seconds, memory_sa(config.dict_len, config.lab_len))


def _bench_job(args):
    name, data, m, n, policy, min_match = args
    try:
        return bench_file(name, data, WindowConfig(m, n), policy, min_match)
    except RuntimeError as exc:
        return str(exc)


def run_benchmark(corpus, configs=TABLE_CONFIGS, policy="best", min_match=1, parallel=False):
    """Benchmark every file of ``corpus`` (a directory, or a list of (name, bytes))
    under each (dict_len, lab_len) pair."""
    if isinstance(corpus, (str, os.PathLike)):
        files, skipped = load_corpus(corpus)
    else:
        files, skipped = list(corpus), []
    configs = [WindowConfig(m, n) for m, n in configs]
    jobs = [(name, data, c.dict_len, c.lab_len, policy, min_match)
            for c in configs for name, data in files]
    # Load/compile the kernels up front so the first timed file does not pay for it.
    encode_stream(bytes(64), WindowConfig(16, 4), policy, min_match)
    if parallel:
        with ProcessPoolExecutor() as pool:
            outcomes = list(pool.map(_bench_job, jobs))
    else:
        outcomes = [_bench_job(j) for j in jobs]

    results = []
    for job, outcome in zip(jobs, outcomes):
        if isinstance(outcome, str):
            log.warning(outcome)
            skipped.append((job[0], outcome))
        else:
            results.append(outcome)

    summaries = []
    for c in configs:
        rows = [r for r in results if (r.dict_len, r.lab_len) == (c.dict_len, c.lab_len)]
        mean = sum(r.bpb for r in rows) / len(rows) if rows else float("nan")
        summaries.append(ConfigSummary(
            c.dict_len, c.lab_len, policy, len(rows), sum(r.seconds for r in rows), mean,
            memory_sa(c.dict_len, c.lab_len), memory_bt(c.dict_len), memory_lzma(c.dict_len, "BT4"),
        ))
    return BenchReport(results, summaries, skipped, contended=parallel)
