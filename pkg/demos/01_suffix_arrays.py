"""
Suffix arrays and the LeftIndex
===============================

A suffix array lists the start positions of all suffixes of a string in
lexicographic order.  Every substring search becomes a range search over
that array, and the LeftIndex tells us where each first symbol's range
starts.
"""

from sufflz import SlidingIndex, WindowConfig, build_suffix_array

text = b"mississippi"
sa = build_suffix_array(text)
for rank, pos in enumerate(sa.tolist()):
    print(f"{rank:2d}  {pos:2d}  {text[pos:].decode()}")

# Load the same string into a 16-byte window and ask where the suffixes
# starting with 's' live.
index = SlidingIndex(WindowConfig(16, 16))
index.slide_in(text)
index.rebuild()
print("LeftIndex:", {chr(c): int(v) for c, v in enumerate(index.left_index) if v >= 0})
print("'s' range:", index.symbol_range(ord("s")))
print("'b' range:", index.symbol_range(ord("b")))

# Longest match of a look-ahead buffer prefix: "issi" occurs twice.
print(index.longest_match(b"issia", 0, "best"))
print(index.longest_match(b"bsia", 1, "best"))
