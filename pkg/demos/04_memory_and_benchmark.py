"""
Memory footprints and a small benchmark
=======================================

The suffix-array encoder needs a fixed, content-independent amount of
memory.  Compare it with binary-tree, suffix-tree, GZip and LZMA encoders,
then benchmark a directory of files (pass one on the command line, or the
package's own test fixtures are used).
"""

import shutil
import sys
import tempfile
from pathlib import Path

from sufflz.bench import TABLE_CONFIGS, memory_report, run_benchmark

print(f"{'dict':>6} {'LAB':>5} {'SA':>8} {'BT':>8} {'ST':>8} {'LZMA':>8} {'GZIP':>8}")
for m, n in TABLE_CONFIGS:
    r = memory_report(m, n)
    print(f"{m:>6} {n:>5} {r['SA']:>8} {r['BT']:>8} {r['ST']:>8} {r['LZMA']:>8} {r['GZIP']:>8}")

if len(sys.argv) > 1:
    corpus = Path(sys.argv[1])
else:
    corpus = Path(tempfile.mkdtemp())
    fixtures = Path(__file__).parent.parent / "tests" / "fixtures"
    for name in ("tiny.txt", "binary.bin", "repetitive.txt"):
        shutil.copy(fixtures / name, corpus)
report = run_benchmark(corpus, TABLE_CONFIGS[:4], "best")
print()
print(report.table())
