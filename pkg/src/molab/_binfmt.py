"""Little-endian binary packing helpers shared by the file containers.

All multi-byte fields in the package's containers are little-endian.
Floats are raw IEEE-754 doubles, so round-trips are bit-exact.
"""

from __future__ import annotations

import struct
from typing import BinaryIO

import numpy as np

U32_UNBOUNDED = 0xFFFFFFFF


def pack_u8(value: int) -> bytes:
    return struct.pack("<B", value)


def pack_u32(value: int) -> bytes:
    return struct.pack("<I", value)


def pack_u64(value: int) -> bytes:
    return struct.pack("<Q", value)


def pack_f64(value: float) -> bytes:
    return struct.pack("<d", value)


def pack_f64_array(arr: np.ndarray) -> bytes:
    return np.ascontiguousarray(arr, dtype="<f8").tobytes()


def read_exact(f: BinaryIO, n: int, what: str) -> bytes:
    data = f.read(n)
    if len(data) != n:
        raise ValueError(f"truncated file: expected {n} bytes for {what}, got {len(data)}")
    return data


def read_u8(f: BinaryIO, what: str) -> int:
    return struct.unpack("<B", read_exact(f, 1, what))[0]


def read_u32(f: BinaryIO, what: str) -> int:
    return struct.unpack("<I", read_exact(f, 4, what))[0]


def read_u64(f: BinaryIO, what: str) -> int:
    return struct.unpack("<Q", read_exact(f, 8, what))[0]


def read_f64(f: BinaryIO, what: str) -> float:
    return struct.unpack("<d", read_exact(f, 8, what))[0]


def read_f64_array(f: BinaryIO, count: int, what: str) -> np.ndarray:
    data = read_exact(f, 8 * count, what)
    return np.frombuffer(data, dtype="<f8").astype(np.float64)
