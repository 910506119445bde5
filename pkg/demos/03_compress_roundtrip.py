"""
Compressing and decompressing
=============================

``encode_stream`` writes a 6-byte header, the first LAB raw, then LZSS
tokens.  ``decode_stream`` needs no index at all.
"""

import random

from sufflz import WindowConfig, decode_stream, encode_stream

random.seed(0)
words = b"the suffix array window match token buffer dictionary encoder".split()
data = b" ".join(random.choice(words) for _ in range(40000))

for dict_len, lab_len in [(2048, 1024), (8192, 2048), (32768, 256), (32768, 2048)]:
    for policy in ("fast", "best"):
        stats = encode_stream(data, WindowConfig(dict_len, lab_len), policy)
        assert decode_stream(stats.data).data == data
        print(f"({dict_len:5d},{lab_len:4d}) {policy}: {stats.bpb:.3f} bpb, "
              f"{stats.matches} matches, {stats.literals} literals, {stats.elapsed:.3f}s")

# Skipping matches shorter than the break-even length against a 9-bit literal.
cfg = WindowConfig(32768, 2048)
breakeven = -(-(1 + cfg.pos_bits + cfg.len_bits) // 9)
stats = encode_stream(data, cfg, "best", min_match=breakeven)
print(f"min_match={breakeven}: {stats.bpb:.3f} bpb")
