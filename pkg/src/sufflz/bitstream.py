"""MSB-first bit packing.

Fields are appended most significant bit first; the final partial byte is
padded with zero bits on flush.  ``BitWriter``/``BitReader`` are the Python
surface, the ``put_bits``/``get_bits`` kernels implement the same layout for
the jitted codec loops.
"""

import numpy as np
from numba import njit

from .errors import InvalidInputError, TruncatedStreamError

MAX_WIDTH = 32


def _check_width(width):
    if not 1 <= width <= MAX_WIDTH:
        raise InvalidInputError(f"field width must be in 1..{MAX_WIDTH}, got {width}")


class BitWriter:
    """Accumulates bit fields into a byte sink (anything with ``write``), or
    into an internal buffer when no sink is given."""

    def __init__(self, sink=None):
        self._sink = sink
        self._buf = bytearray()
        self.pending = 0
        self.bit_count = 0
        self.bits_written = 0

    def write_bits(self, value, width):
        _check_width(width)
        if not 0 <= value < (1 << width):
            raise InvalidInputError(f"value {value} does not fit in {width} bits")
        self.pending = (self.pending << width) | value
        self.bit_count += width
        self.bits_written += width
        while self.bit_count >= 8:
            self.bit_count -= 8
            self._buf.append((self.pending >> self.bit_count) & 0xFF)
        self.pending &= (1 << self.bit_count) - 1
        if self._sink is not None and len(self._buf) >= 1 << 16:
            self._drain()

    def write_bytes(self, data):
        if self.bit_count == 0:
            self._buf += data
            self.bits_written += 8 * len(data)
        else:
            for b in data:
                self.write_bits(b, 8)

    def flush(self):
        """Zero-pad the last partial byte and push everything to the sink."""
        if self.bit_count:
            self._buf.append((self.pending << (8 - self.bit_count)) & 0xFF)
            self.bits_written += 8 - self.bit_count
            self.pending = 0
            self.bit_count = 0
        self._drain()

    def getvalue(self):
        if self._sink is not None:
            raise InvalidInputError("getvalue() is only available without a sink")
        return bytes(self._buf)

    def _drain(self):
        if self._sink is not None and self._buf:
            self._sink.write(bytes(self._buf))
            self._buf.clear()


class BitReader:
    def __init__(self, source):
        self._data = bytes(source)
        self.cursor = 0

    @property
    def bits_remaining(self):
        return 8 * len(self._data) - self.cursor

    def read_bits(self, width):
        _check_width(width)
        if width > self.bits_remaining:
            raise TruncatedStreamError(
                f"need {width} bits at bit offset {self.cursor}, only {self.bits_remaining} left"
            )
        value = 0
        need = width
        while need:
            byte = self._data[self.cursor >> 3]
            used = self.cursor & 7
            take = min(8 - used, need)
            chunk = (byte >> (8 - used - take)) & ((1 << take) - 1)
            value = (value << take) | chunk
            self.cursor += take
            need -= take
        return value

    def read_bytes(self, count):
        if self.cursor & 7 == 0:
            start = self.cursor >> 3
            if start + count > len(self._data):
                raise TruncatedStreamError(
                    f"need {count} bytes at byte offset {start}, only {len(self._data) - start} left"
                )
            self.cursor += 8 * count
            return self._data[start:start + count]
        return bytes(self.read_bits(8) for _ in range(count))


# Jitted state vector layout: [byte position, accumulator, bits in accumulator].
@njit(cache=True)
def put_bits(out, state, value, width):
    acc = (state[1] << width) | value
    nacc = state[2] + width
    pos = state[0]
    while nacc >= 8:
        nacc -= 8
        out[pos] = (acc >> nacc) & 0xFF
        pos += 1
    state[0] = pos
    state[1] = acc & ((1 << nacc) - 1)
    state[2] = nacc


@njit(cache=True)
def flush_bits(out, state):
    if state[2] > 0:
        out[state[0]] = (state[1] << (8 - state[2])) & 0xFF
        state[0] += 1
        state[1] = 0
        state[2] = 0
    return state[0]


@njit(cache=True)
def get_bits(data, cursor, width):
    """Return (value, new cursor); value is -1 when fewer than ``width`` bits remain."""
    if cursor + width > 8 * data.shape[0]:
        return -1, cursor
    value = np.int64(0)
    need = width
    while need > 0:
        byte = np.int64(data[cursor >> 3])
        used = cursor & 7
        take = min(8 - used, need)
        value = (value << take) | ((byte >> (8 - used - take)) & ((1 << take) - 1))
        cursor += take
        need -= take
    return value, cursor


def new_bit_state():
    return np.zeros(3, dtype=np.int64)
