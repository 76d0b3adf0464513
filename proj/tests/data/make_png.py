"""Writes the small PNG fixtures used by test_raster_io.cpp."""
import struct
import zlib
from pathlib import Path


def chunk(kind, data):
    body = kind + data
    return struct.pack(">I", len(data)) + body + struct.pack(">I", zlib.crc32(body) & 0xFFFFFFFF)


def write_png(path, width, height, depth, colour_type, rows):
    raw = b"".join(b"\x00" + row for row in rows)
    ihdr = struct.pack(">IIBBBBB", width, height, depth, colour_type, 0, 0, 0)
    data = b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr) + chunk(b"IDAT", zlib.compress(raw)) + chunk(b"IEND", b"")
    Path(path).write_bytes(data)


here = Path(__file__).parent
# 4x3 bilevel 8-bit gray: a diagonal plus one corner pixel.
write_png(here / "bilevel.png", 4, 3, 8, 0,
          [bytes([255, 0, 0, 0]), bytes([0, 255, 0, 0]), bytes([0, 0, 255, 255])])
# 3x1 16-bit gray ramp.
write_png(here / "gray16.png", 3, 1, 16, 0, [struct.pack(">HHH", 0, 32768, 65535)])
# 2x1 RGB: pure red, pure white.
write_png(here / "rgb.png", 2, 1, 8, 2, [bytes([255, 0, 0, 255, 255, 255])])
