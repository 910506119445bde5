"""LZSS compression with a sliding-window suffix array match finder."""

from .bench import (
    memory_bt,
    memory_gzip,
    memory_lzma,
    memory_sa,
    memory_st,
    run_benchmark,
)
from .bitstream import BitReader, BitWriter
from .codec import (
    EncodeStats,
    Literal,
    Lz77Token,
    Match,
    StreamHeader,
    compress,
    decode_stream,
    decompress,
    encode_stream,
    read_header,
    tokenize_lz77,
    write_header,
)
from .errors import (
    ConfigError,
    CorruptStreamError,
    InvalidInputError,
    LZSAError,
    MalformedHeaderError,
    StateError,
    TruncatedStreamError,
)
from .sliding_index import MatchResult, SlidingIndex, WindowConfig, new_index
from .suffix_array import build_suffix_array, build_suffix_array_naive, verify_suffix_array

__version__ = "0.1.0"
