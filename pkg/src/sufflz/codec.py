"""LZSS stream encoder/decoder and in-memory LZ77 tokenization.

Wire format::

    [np:8][nl:8][file_size:32 little-endian]
    first min(2**nl, file_size) input bytes, raw
    token bitstream, MSB first, zero padded to a byte at the end

with tokens ``0 + sym:8`` (literal) or ``1 + pos:np + (len-1):nl`` (match).
The input is processed in LAB-sized blocks.  Each block is encoded against a
fixed dictionary snapshot; only after the whole block is encoded does it
slide into the dictionary.  The decoder mirrors that, so the dictionary for
a block is always the last ``min(m, decoded)`` bytes preceding the block.
"""

import io
import time
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .bitstream import BitReader, BitWriter, flush_bits, get_bits, new_bit_state, put_bits
from .errors import CorruptStreamError, InvalidInputError, MalformedHeaderError, TruncatedStreamError
from .sliding_index import (
    SlidingIndex,
    WindowConfig,
    check_policy,
    longest_match_kernel,
    rebuild_kernel,
    refresh_li_kernel,
    update_kernel,
)

HEADER_BYTES = 6
MAX_FILE_SIZE = (1 << 32) - 1


class StreamHeader(NamedTuple):
    pos_bits: int
    len_bits: int
    file_size: int

    @property
    def config(self):
        return WindowConfig.from_bits(self.pos_bits, self.len_bits)


class Literal(NamedTuple):
    sym: int


class Match(NamedTuple):
    pos: int
    len: int


class Lz77Token(NamedTuple):
    pos: int
    len: int
    sym: int


@dataclass
class EncodeStats:
    input_bytes: int
    output_bytes: int
    literals: int
    matches: int
    raw_bytes: int
    elapsed: float
    config: WindowConfig
    policy: str

    @property
    def payload_bits(self):
        """Exact bit count before the final zero padding."""
        c = self.config
        return (8 * HEADER_BYTES + 8 * self.raw_bytes + 9 * self.literals
                + (1 + c.pos_bits + c.len_bits) * self.matches)

    @property
    def bpb(self):
        return 8.0 * self.output_bytes / self.input_bytes if self.input_bytes else 0.0


@dataclass
class DecodeStats:
    input_bytes: int
    output_bytes: int
    tokens: int
    elapsed: float


# ---------------------------------------------------------------------------
# header


def write_header(w, header):
    pos_bits, len_bits, size = header
    if not 0 < len_bits <= pos_bits <= 32:
        raise MalformedHeaderError(f"invalid widths np={pos_bits}, nl={len_bits}")
    if not 0 <= size <= MAX_FILE_SIZE:
        raise MalformedHeaderError(f"file size {size} does not fit in 32 bits")
    w.write_bits(pos_bits, 8)
    w.write_bits(len_bits, 8)
    for b in size.to_bytes(4, "little"):
        w.write_bits(b, 8)


def read_header(r):
    try:
        pos_bits = r.read_bits(8)
        len_bits = r.read_bits(8)
        size = int.from_bytes(bytes(r.read_bits(8) for _ in range(4)), "little")
    except TruncatedStreamError as exc:
        raise MalformedHeaderError(f"truncated header: {exc}") from None
    if pos_bits > 32:
        raise MalformedHeaderError(f"np={pos_bits} exceeds 32")
    if not 0 < len_bits <= pos_bits:
        raise MalformedHeaderError(f"nl={len_bits} must satisfy 0 < nl <= np={pos_bits}")
    return StreamHeader(pos_bits, len_bits, size)


# ---------------------------------------------------------------------------
# kernels


@njit(cache=True)
def _encode_kernel(data, m, n, pos_bits, len_bits, best, min_match, out):
    """Encode everything after the raw first block; returns (out bytes, literals, matches)."""
    size = data.shape[0]
    dic = np.zeros(m, dtype=np.uint8)
    sa_a = np.zeros(m, dtype=np.int32)
    sa_b = np.zeros(m, dtype=np.int32)
    li = np.full(256, -1, dtype=np.int32)
    lab_sa = np.zeros(n, dtype=np.int32)
    ins = np.zeros(n, dtype=np.int32)
    groups = np.zeros(257, dtype=np.int32)
    state = np.zeros(3, dtype=np.int64)
    active = 0
    fill = 0
    literals = 0
    matches = 0

    prev = 0
    emitted = min(n, size)
    while emitted < size:
        # Slide in the block just coded.
        b = emitted - prev
        was_full = fill == m
        if fill + b <= m:
            dic[fill:fill + b] = data[prev:emitted]
            fill += b
        else:
            drop = fill + b - m
            dic[:fill - drop] = dic[drop:fill].copy()
            dic[m - b:] = data[prev:emitted]
            fill = m
        if was_full:
            if active == 0:
                update_kernel(dic, m, b, sa_a, sa_b, lab_sa, ins, groups)
            else:
                update_kernel(dic, m, b, sa_b, sa_a, lab_sa, ins, groups)
            active ^= 1
        else:
            rebuild_kernel(dic, fill, sa_a if active == 0 else sa_b)
        sa = sa_a if active == 0 else sa_b
        refresh_li_kernel(dic, fill, sa, li)

        end = min(emitted + n, size)
        lab = data[emitted:end]
        i = 0
        while i < lab.shape[0]:
            pos, ln = longest_match_kernel(dic, fill, sa, li, lab, i, best)
            if pos >= 0 and ln >= min_match:
                put_bits(out, state, 1, 1)
                put_bits(out, state, pos, pos_bits)
                put_bits(out, state, ln - 1, len_bits)
                matches += 1
                i += ln
            else:
                put_bits(out, state, lab[i], 9)
                literals += 1
                i += 1
        prev = emitted
        emitted = end
    return flush_bits(out, state), literals, matches


@njit(cache=True)
def _decode_kernel(tokens, out, start, m, n, pos_bits, len_bits):
    """Decode tokens into out[start:]; returns (token count, error code, failing ordinal).

    Error codes: 0 ok, 1 truncated, 2 position outside dictionary,
    3 match runs past dictionary end, 4 match runs past block end.
    """
    size = out.shape[0]
    cursor = 0
    ordinal = 0
    emitted = start
    while emitted < size:
        block_end = min(emitted + n, size)
        dstart = max(0, emitted - m)
        fill = emitted - dstart
        o = emitted
        while o < block_end:
            flag, cursor = get_bits(tokens, cursor, 1)
            if flag < 0:
                return ordinal, 1, ordinal
            if flag == 0:
                sym, cursor = get_bits(tokens, cursor, 8)
                if sym < 0:
                    return ordinal, 1, ordinal
                out[o] = sym
                o += 1
            else:
                pos, cursor = get_bits(tokens, cursor, pos_bits)
                if pos < 0:
                    return ordinal, 1, ordinal
                ln, cursor = get_bits(tokens, cursor, len_bits)
                if ln < 0:
                    return ordinal, 1, ordinal
                ln += 1
                if pos >= fill:
                    return ordinal, 2, ordinal
                if pos + ln > fill:
                    return ordinal, 3, ordinal
                if o + ln > block_end:
                    return ordinal, 4, ordinal
                src = dstart + pos
                # Source lies wholly before the current block: no overlap.
                out[o:o + ln] = out[src:src + ln]
                o += ln
            ordinal += 1
        emitted = block_end
    return ordinal, 0, -1


_DECODE_ERRORS = {
    1: "truncated token stream",
    2: "match position outside the dictionary",
    3: "match extends past the dictionary end",
    4: "match extends past the block end",
}


# ---------------------------------------------------------------------------
# public API


def _read_all(source):
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = source
    if isinstance(data, str):
        raise InvalidInputError("expected bytes, got str")
    return np.frombuffer(bytes(data), dtype=np.uint8)


def _token_buffer_size(size, config):
    bits_per_symbol = max(9, 1 + config.pos_bits + config.len_bits)
    return (size * bits_per_symbol + 7) // 8 + 8


def encode_stream(source, config, policy="best", min_match=1, out=None):
    """Compress ``source`` (bytes-like or readable binary file) to ``out``.

    ``out`` is any object with ``write``; when omitted the compressed bytes
    are available as ``stats.data``.  Returns an :class:`EncodeStats`.
    """
    best = check_policy(policy)
    if min_match < 1:
        raise InvalidInputError(f"min_match must be >= 1, got {min_match}")
    data = _read_all(source)
    size = data.shape[0]
    if size > MAX_FILE_SIZE:
        raise InvalidInputError(f"input of {size} bytes exceeds the 32-bit size field")
    m, n = config.dict_len, config.lab_len

    t0 = time.perf_counter()
    buf = np.empty(_token_buffer_size(max(0, size - n), config), dtype=np.uint8)
    nbytes, literals, matches = _encode_kernel(
        data, m, n, config.pos_bits, config.len_bits, best, min_match, buf)
    elapsed = time.perf_counter() - t0

    w = BitWriter()
    write_header(w, StreamHeader(config.pos_bits, config.len_bits, size))
    raw = min(n, size)
    w.write_bytes(data[:raw].tobytes())
    blob = w.getvalue() + buf[:nbytes].tobytes()
    sink = out if out is not None else io.BytesIO()
    sink.write(blob)
    stats = EncodeStats(size, len(blob), int(literals), int(matches), raw, elapsed, config, policy)
    if out is None:
        stats.data = blob
    return stats


def decode_stream(source, out=None):
    """Decompress a stream produced by :func:`encode_stream`.

    Raises :class:`MalformedHeaderError` or :class:`CorruptStreamError`
    (the latter carries the failing token ordinal).
    """
    blob = bytes(_read_all(source))
    t0 = time.perf_counter()
    r = BitReader(blob[:HEADER_BYTES])
    header = read_header(r)
    config = header.config
    size = header.file_size
    raw = min(config.lab_len, size)
    if len(blob) < HEADER_BYTES + raw:
        raise TruncatedStreamError(
            f"raw block needs {raw} bytes, stream holds {len(blob) - HEADER_BYTES}")
    result = np.empty(size, dtype=np.uint8)
    result[:raw] = np.frombuffer(blob, dtype=np.uint8, count=raw, offset=HEADER_BYTES)
    tokens = np.frombuffer(blob, dtype=np.uint8, offset=HEADER_BYTES + raw)
    count, err, ordinal = _decode_kernel(tokens, result, raw, config.dict_len, config.lab_len,
                                         header.pos_bits, header.len_bits)
    if err:
        cls = TruncatedStreamError if err == 1 else CorruptStreamError
        raise cls(f"corrupt stream at token {ordinal}: {_DECODE_ERRORS[err]}", int(ordinal))
    elapsed = time.perf_counter() - t0
    data = result.tobytes()
    if out is not None:
        out.write(data)
    stats = DecodeStats(len(blob), size, int(count), elapsed)
    stats.data = data
    return stats


def compress(data, dict_len=32768, lab_len=1024, policy="best", min_match=1):
    return encode_stream(data, WindowConfig(dict_len, lab_len), policy, min_match).data


def decompress(blob):
    return decode_stream(blob).data


# ---------------------------------------------------------------------------
# token-level helpers


def _blocks(data, n):
    for start in range(0, len(data), n):
        yield data[start:start + n]


def encode_block(index, lab, policy="best", min_match=1):
    """LZSS tokens for one LAB against the index's current dictionary."""
    lab = bytes(lab)
    tokens = []
    i = 0
    while i < len(lab):
        match = index.longest_match(lab, i, policy) if index.fill else None
        if match is not None and match.len >= min_match:
            tokens.append(Match(match.pos, match.len))
            i += match.len
        else:
            tokens.append(Literal(lab[i]))
            i += 1
    return tokens


def apply_lzss_tokens(dictionary, tokens):
    """Replay LZSS tokens against a fixed dictionary and return the produced bytes."""
    out = bytearray()
    for k, tok in enumerate(tokens):
        if isinstance(tok, Match):
            if tok.pos < 0 or tok.pos + tok.len > len(dictionary):
                raise CorruptStreamError(f"token {k} reads outside the dictionary", k)
            out += dictionary[tok.pos:tok.pos + tok.len]
        else:
            out.append(tok.sym)
    return bytes(out)


def tokenize_block_lz77(index, lab, policy="best"):
    """LZ77 triplets for one LAB.  Each token covers len + 1 symbols."""
    lab = bytes(lab)
    tokens = []
    i = 0
    while i < len(lab):
        match = index.longest_match(lab, i, policy) if index.fill else None
        # Leave room for the breaking symbol.
        if match is not None and min(match.len, len(lab) - i - 1) > 0:
            ln = min(match.len, len(lab) - i - 1)
            tokens.append(Lz77Token(match.pos, ln, lab[i + ln]))
            i += ln + 1
        else:
            tokens.append(Lz77Token(0, 0, lab[i]))
            i += 1
    return tokens


def tokenize_lz77(source, config, policy="best"):
    """LZ77 decomposition of the whole input using the suffix-array matcher.

    Blocks are handled like the LZSS encoder, except the first block is also
    tokenized (against an empty dictionary, i.e. as ``(0, 0, sym)``).
    """
    check_policy(policy)
    data = _read_all(source).tobytes()
    index = SlidingIndex(config)
    tokens = []
    prev = None
    for lab in _blocks(data, config.lab_len):
        if prev is not None:
            was_full = index.fill == config.dict_len
            index.slide_in(prev)
            if was_full:
                index.update(prev)
            else:
                index.rebuild()
        tokens.extend(tokenize_block_lz77(index, lab, policy))
        prev = lab
    return tokens


def reconstruct_lz77(tokens, config):
    """Invert :func:`tokenize_lz77` (copy ``len`` symbols, append ``sym``, slide)."""
    out = bytearray()
    n, m = config.lab_len, config.dict_len
    block_start = 0
    for pos, ln, sym in tokens:
        if len(out) - block_start >= n:
            block_start = len(out)
        dstart = max(0, block_start - m)
        if ln:
            if pos + ln > block_start - dstart:
                raise CorruptStreamError("LZ77 token reads outside the dictionary")
            out += out[dstart + pos:dstart + pos + ln]
        out.append(sym)
    return bytes(out)
