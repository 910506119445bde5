import io
import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sufflz import (
    BitReader,
    BitWriter,
    CorruptStreamError,
    InvalidInputError,
    Literal,
    Lz77Token,
    MalformedHeaderError,
    Match,
    SlidingIndex,
    StreamHeader,
    TruncatedStreamError,
    WindowConfig,
    compress,
    decode_stream,
    decompress,
    encode_stream,
    read_header,
    tokenize_lz77,
    write_header,
)
from sufflz.codec import apply_lzss_tokens, encode_block, reconstruct_lz77, tokenize_block_lz77

from conftest import indexed, random_bytes

FIXTURES = Path(__file__).parent / "fixtures"


def reference_decode(blob):
    """Straight-line LZSS decoder over BitReader, independent of the jitted kernel."""
    r = BitReader(blob)
    np_bits, nl_bits, size = read_header(r)
    n, m = 1 << nl_bits, 1 << np_bits
    out = bytearray(r.read_bytes(min(n, size)))
    dictionary = bytearray()
    block = bytes(out)
    while len(out) < size:
        dictionary = (dictionary + block)[-m:]
        want = min(n, size - len(out))
        block = bytearray()
        while len(block) < want:
            if r.read_bits(1):
                pos = r.read_bits(np_bits)
                ln = r.read_bits(nl_bits) + 1
                assert pos + ln <= len(dictionary)
                block += dictionary[pos:pos + ln]
            else:
                block.append(r.read_bits(8))
        out += block
    return bytes(out)


def reference_encode(data, config, policy="best", min_match=1):
    """Encoder assembled from the public SlidingIndex API and BitWriter."""
    n, m = config.lab_len, config.dict_len
    w = BitWriter()
    write_header(w, StreamHeader(config.pos_bits, config.len_bits, len(data)))
    w.write_bytes(data[:n])
    idx = SlidingIndex(config)
    blocks = [data[s:s + n] for s in range(0, len(data), n)]
    for prev, lab in zip(blocks, blocks[1:]):
        was_full = idx.fill == m
        idx.slide_in(prev)
        idx.update(prev) if was_full else idx.rebuild()
        for tok in encode_block(idx, lab, policy, min_match):
            if isinstance(tok, Match):
                w.write_bits(1, 1)
                w.write_bits(tok.pos, config.pos_bits)
                w.write_bits(tok.len - 1, config.len_bits)
            else:
                w.write_bits(tok.sym, 9)
    w.flush()
    return w.getvalue()


# header -------------------------------------------------------------------


def header_bytes(h):
    w = BitWriter()
    write_header(w, h)
    w.flush()
    return w.getvalue()


def test_header_layout():
    # 768771 = 0x0BBB03 -> little-endian 03 BB 0B 00
    assert header_bytes(StreamHeader(11, 10, 768771)) == bytes.fromhex("0B0A03BB0B00")
    assert header_bytes(StreamHeader(4, 2, 0)) == bytes.fromhex("040200000000")


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 32).flatmap(lambda p: st.tuples(st.just(p), st.integers(1, p))),
       st.integers(0, 2**32 - 1))
def test_header_roundtrip(bits, size):
    h = StreamHeader(bits[0], bits[1], size)
    assert read_header(BitReader(header_bytes(h))) == h


@pytest.mark.parametrize("raw", [b"", b"\x0b\x0a\x00", bytes([4, 5, 0, 0, 0, 0]),
                                 bytes([33, 2, 0, 0, 0, 0]), bytes([4, 0, 0, 0, 0, 0])])
def test_malformed_header(raw):
    with pytest.raises(MalformedHeaderError):
        read_header(BitReader(raw))
    with pytest.raises(MalformedHeaderError):
        decode_stream(raw)


def test_write_header_rejects_invalid():
    with pytest.raises(MalformedHeaderError):
        write_header(BitWriter(), StreamHeader(4, 5, 0))


# encoding -------------------------------------------------------------------


def test_short_input_is_raw_copy():
    data = b"abc"
    s = encode_stream(data, WindowConfig(16, 4))
    assert s.data == bytes([4, 2, 3, 0, 0, 0]) + data
    assert s.literals == s.matches == 0


def test_empty_input():
    s = encode_stream(b"", WindowConfig(16, 4))
    assert s.data == bytes([4, 2, 0, 0, 0, 0])
    assert decompress(s.data) == b""


def test_figure1_lzss_tokens():
    idx = indexed(b"mississippi", 16, 16)
    toks = encode_block(idx, b"issia")
    assert len(toks) == 2
    assert toks[0].len == 4 and toks[0].pos in (1, 4)
    assert toks[1] == Literal(ord("a"))
    assert apply_lzss_tokens(b"mississippi", toks) == b"issia"


def test_figure1_replay():
    for pos in (1, 4):
        assert apply_lzss_tokens(b"mississippi", [Match(pos, 4), Literal(ord("a"))]) == b"issia"
    toks = [Literal(ord("b")), Match(6, 2), Literal(ord("a"))]
    assert apply_lzss_tokens(b"mississippi", toks) == b"bsia"


def test_figure1_lz77_tokens():
    idx = indexed(b"mississippi", 16, 16)
    (tok,) = tokenize_block_lz77(idx, b"issia")
    assert tok.len == 4 and tok.pos in (1, 4) and tok.sym == ord("a")
    toks = tokenize_block_lz77(idx, b"bsia")
    assert toks[0] == Lz77Token(0, 0, ord("b"))
    assert toks[1].len == 2 and toks[1].pos in (3, 6) and toks[1].sym == ord("a")


def test_lz77_distinct_symbols_are_all_literals():
    data = bytes(range(200))
    toks = tokenize_lz77(data, WindowConfig(64, 16))
    assert toks == [Lz77Token(0, 0, b) for b in data]


def test_lz77_reconstruction(rng):
    for m, n in [(64, 16), (256, 256), (1024, 64)]:
        for policy in ("fast", "best"):
            data = random_bytes(rng, int(rng.integers(0, 5000)), 4)
            cfg = WindowConfig(m, n)
            toks = tokenize_lz77(data, cfg, policy)
            assert reconstruct_lz77(toks, cfg) == data
            assert all(t.pos == 0 for t in toks if t.len == 0)


def test_min_match_suppresses_short_matches(rng):
    data = random_bytes(rng, 20000, 16)
    cfg = WindowConfig(4096, 256)
    s1 = encode_stream(data, cfg, "best", 1)
    s3 = encode_stream(data, cfg, "best", 3)
    assert s3.matches < s1.matches
    assert decompress(s3.data) == data
    with pytest.raises(InvalidInputError):
        encode_stream(data, cfg, "best", 0)


def test_size_accounting(rng):
    for m, n in [(64, 16), (2048, 1024), (32768, 256)]:
        data = random_bytes(rng, 50000, 8)
        s = encode_stream(data, WindowConfig(m, n), "best")
        assert s.output_bytes == (s.payload_bits + 7) // 8 == len(s.data)


def test_coverage_per_block(rng):
    data = random_bytes(rng, 3000, 4)
    idx = indexed(data[:256], 256, 64)
    lab = data[256:320]
    toks = encode_block(idx, lab)
    assert sum(t.len if isinstance(t, Match) else 1 for t in toks) == len(lab)


def test_kernel_matches_reference_encoder(rng):
    for m, n in [(64, 16), (256, 64), (1024, 1024), (2048, 256)]:
        for policy in ("fast", "best"):
            for min_match in (1, 2):
                data = random_bytes(rng, int(rng.integers(0, 6000)), int(rng.choice([2, 4, 256])))
                cfg = WindowConfig(m, n)
                assert encode_stream(data, cfg, policy, min_match).data == \
                    reference_encode(data, cfg, policy, min_match)


def test_deterministic(rng):
    data = random_bytes(rng, 100000, 6)
    assert compress(data, 4096, 512) == compress(data, 4096, 512)


def test_file_like_io(tmp_path, rng):
    data = random_bytes(rng, 10000, 4)
    src = tmp_path / "in.bin"
    src.write_bytes(data)
    sink = io.BytesIO()
    with open(src, "rb") as fh:
        encode_stream(fh, WindowConfig(1024, 128), "best", out=sink)
    out = io.BytesIO()
    stats = decode_stream(io.BytesIO(sink.getvalue()), out)
    assert out.getvalue() == data and stats.output_bytes == len(data)


# decoding -------------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(st.binary(max_size=3000), st.sampled_from([(16, 4), (64, 16), (256, 256), (1024, 32)]),
       st.sampled_from(["fast", "best"]), st.integers(1, 4))
def test_roundtrip_property(data, geometry, policy, min_match):
    blob = encode_stream(data, WindowConfig(*geometry), policy, min_match).data
    assert decompress(blob) == data
    assert reference_decode(blob) == data


def test_truncated_stream_names_token(rng):
    data = random_bytes(rng, 20000, 4)
    blob = compress(data, 1024, 128)
    with pytest.raises(TruncatedStreamError) as exc:
        decompress(blob[:len(blob) // 2])
    assert exc.value.ordinal is not None
    assert f"token {exc.value.ordinal}" in str(exc.value)


def test_truncated_raw_block():
    blob = compress(b"x" * 100, 64, 16)
    with pytest.raises(TruncatedStreamError):
        decompress(blob[:10])


def test_bad_position_is_corruption():
    w = BitWriter()
    write_header(w, StreamHeader(4, 2, 8))
    w.write_bytes(b"abcd")
    w.write_bits(1, 1)
    w.write_bits(9, 4)  # position beyond the 4-byte dictionary
    w.write_bits(0, 2)
    w.flush()
    with pytest.raises(CorruptStreamError) as exc:
        decompress(w.getvalue())
    assert exc.value.ordinal == 0


# golden ---------------------------------------------------------------------


@pytest.mark.parametrize("entry", json.loads((FIXTURES / "golden.json").read_text()),
                         ids=lambda e: e["golden"])
def test_golden_streams(entry):
    data = (FIXTURES / entry["input"]).read_bytes()
    golden = (FIXTURES / entry["golden"]).read_bytes()
    cfg = WindowConfig(entry["dict_len"], entry["lab_len"])
    assert encode_stream(data, cfg, entry["policy"]).data == golden
    assert decompress(golden) == data
    assert reference_decode(golden) == data
