"""
Sliding the window without re-sorting
=====================================

Once the dictionary is full, sliding in a block does not rebuild the suffix
array.  Surviving suffixes keep their order (shifted left), the new block's
suffixes are sorted on their own and merged in, and the two SA buffers swap.
"""

from sufflz import SlidingIndex, WindowConfig, build_suffix_array

index = SlidingIndex(WindowConfig(16, 4))
for word in (b"this", b" is ", b"the ", b"file"):
    index.slide_in(word)
    index.rebuild()
print("before:", index.dictionary, index.active_sa.tolist(), "buffer", "AB"[index.active])

index.slide_in(b" the")
index.update(b" the")
print("after: ", index.dictionary, index.active_sa.tolist(), "buffer", "AB"[index.active])
print("new suffixes inserted at", index.last_insert_indexes.tolist())

# Survivors are not re-sorted, so the result can differ slightly from a
# fresh suffix array where old suffixes used to run into the window end.
print("fresh: ", build_suffix_array(index.dictionary).tolist())
