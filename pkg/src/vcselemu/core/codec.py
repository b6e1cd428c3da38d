"""Binary container codec used for datasets and checkpoints.

Layout (all integers little-endian)::

    magic        4 bytes   e.g. b"VEMU" (dataset) or b"VEMW" (weights)
    version      u16       (major << 8) | minor
    n_sections   u32
    section*     kind u8 | name_len u16 | name utf-8 | payload_len u64 | payload
    crc32        u32       zlib.crc32 over every preceding byte

Two section kinds exist. ``ARRAY`` payloads are ``ndim u8 | dims u32* |
float64 LE data``. ``RECORD`` payloads are a msgpack-encoded mapping
(metadata such as normalization stats or the regime voltage).

Serialization helpers (pack/unpack) use msgpack.
"""

from __future__ import annotations

import os
import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import msgpack
import numpy as np
from numpy.typing import NDArray

from .errors import ChecksumError, FormatError, TruncatedFileError, VersionError

__all__ = [
    "Container",
    "pack",
    "unpack",
    "encode_container",
    "decode_container",
    "write_container",
    "read_container",
    "file_crc32",
]

_KIND_ARRAY = 0
_KIND_RECORD = 1

_HEADER = struct.Struct("<4sHI")
_SECTION_HEAD = struct.Struct("<BH")
_U64 = struct.Struct("<Q")
_U32 = struct.Struct("<I")


def pack(obj: Any) -> bytes:
    """Serialize an object to bytes using msgpack."""
    data = msgpack.packb(obj, use_bin_type=True)
    assert isinstance(data, (bytes, bytearray))
    return bytes(data)


def unpack(b: bytes) -> Any:
    """Deserialize bytes into an object using msgpack."""
    return msgpack.unpackb(b, raw=False, strict_map_key=False)


@dataclass(slots=True)
class Container:
    """Decoded container contents, in file order."""

    magic: bytes
    version: tuple[int, int]
    arrays: dict[str, NDArray[np.float64]] = field(default_factory=dict)
    records: dict[str, Any] = field(default_factory=dict)


def _encode_array(arr: NDArray[Any]) -> bytes:
    a = np.ascontiguousarray(arr, dtype="<f8")
    head = struct.pack("<B", a.ndim) + b"".join(_U32.pack(d) for d in a.shape)
    return head + a.tobytes()


def _decode_array(payload: bytes, name: str) -> NDArray[np.float64]:
    if len(payload) < 1:
        raise TruncatedFileError(f"array section {name!r} has no header")
    ndim = payload[0]
    off = 1 + 4 * ndim
    if len(payload) < off:
        raise TruncatedFileError(f"array section {name!r} shape is cut short")
    shape = tuple(_U32.unpack_from(payload, 1 + 4 * i)[0] for i in range(ndim))
    n = int(np.prod(shape, dtype=np.int64)) if shape else 1
    if len(payload) - off != 8 * n:
        raise TruncatedFileError(
            f"array section {name!r} holds {len(payload) - off} bytes, "
            f"expected {8 * n} for shape {shape}"
        )
    out = np.frombuffer(payload, dtype="<f8", count=n, offset=off)
    return out.reshape(shape).astype(np.float64)


def encode_container(
    magic: bytes,
    version: tuple[int, int],
    arrays: dict[str, NDArray[Any]],
    records: dict[str, Any],
) -> bytes:
    """Encode arrays and metadata records into the container byte layout."""
    if len(magic) != 4:
        raise ValueError("magic must be exactly 4 bytes")
    major, minor = version
    sections: list[bytes] = []
    for kind, name, payload in [
        *((_KIND_ARRAY, k, _encode_array(v)) for k, v in arrays.items()),
        *((_KIND_RECORD, k, pack(v)) for k, v in records.items()),
    ]:
        raw_name = name.encode("utf-8")
        sections.append(
            _SECTION_HEAD.pack(kind, len(raw_name))
            + raw_name
            + _U64.pack(len(payload))
            + payload
        )
    body = _HEADER.pack(magic, (major << 8) | minor, len(sections)) + b"".join(
        sections
    )
    return body + _U32.pack(zlib.crc32(body) & 0xFFFFFFFF)


def _sections(
    data: bytes, end: int, n_sections: int, source: str
) -> tuple[list[tuple[int, str, bytes]], int]:
    """Walk the section framing in ``data[:end]`` without decoding payloads."""
    out: list[tuple[int, str, bytes]] = []
    pos = _HEADER.size
    for _ in range(n_sections):
        if pos + _SECTION_HEAD.size > end:
            raise TruncatedFileError(f"{source}: section header cut short")
        kind, name_len = _SECTION_HEAD.unpack_from(data, pos)
        pos += _SECTION_HEAD.size
        if pos + name_len + _U64.size > end:
            raise TruncatedFileError(f"{source}: section name cut short")
        name = data[pos : pos + name_len].decode("utf-8", errors="replace")
        pos += name_len
        (size,) = _U64.unpack_from(data, pos)
        pos += _U64.size
        if pos + size > end:
            raise TruncatedFileError(f"{source}: section {name!r} cut short")
        out.append((kind, name, data[pos : pos + size]))
        pos += size
    return out, pos


def decode_container(
    data: bytes, magic: bytes, supported_major: int, source: str = "<bytes>"
) -> Container:
    """Decode container bytes, checking magic, version, framing and CRC-32.

    The CRC-32 is verified before any payload is decoded. When it fails, a
    length prefix running past the end of the file is reported as truncation
    and anything else as a checksum error.

    Raises:
        FormatError: magic bytes do not match ``magic``, or a section is
            malformed in a file whose checksum is intact.
        VersionError: the file's major version is newer than ``supported_major``.
        TruncatedFileError: the file ends before its declared content.
        ChecksumError: the trailing CRC-32 does not match the content.
    """
    if len(data) < _HEADER.size:
        if len(data) >= 4 and data[:4] != magic:
            raise FormatError(f"{source}: bad magic {data[:4]!r}, expected {magic!r}")
        raise TruncatedFileError(f"{source}: file shorter than the header")
    got_magic, version, n_sections = _HEADER.unpack_from(data, 0)
    if got_magic != magic:
        raise FormatError(f"{source}: bad magic {got_magic!r}, expected {magic!r}")
    major, minor = version >> 8, version & 0xFF
    if major > supported_major:
        raise VersionError(
            f"{source}: format version {major}.{minor} is newer than "
            f"supported major {supported_major}"
        )
    end = len(data) - _U32.size
    if end < _HEADER.size:
        raise TruncatedFileError(f"{source}: missing CRC-32 trailer")
    (stored,) = _U32.unpack_from(data, end)
    actual = zlib.crc32(data[:end]) & 0xFFFFFFFF
    if stored != actual:
        # raises TruncatedFileError when the framing overruns the file
        _sections(data, end, n_sections, source)
        raise ChecksumError(
            f"{source}: CRC-32 mismatch (stored {stored:08x}, computed {actual:08x})"
        )
    sections, pos = _sections(data, end, n_sections, source)
    if pos != end:
        raise FormatError(f"{source}: {end - pos} stray bytes before the CRC-32")
    out = Container(magic=got_magic, version=(major, minor))
    for kind, name, payload in sections:
        if kind == _KIND_ARRAY:
            out.arrays[name] = _decode_array(payload, name)
        elif kind == _KIND_RECORD:
            try:
                out.records[name] = unpack(payload)
            except (msgpack.exceptions.UnpackException, ValueError) as exc:
                raise FormatError(
                    f"{source}: record {name!r} is not valid msgpack ({exc})"
                ) from exc
        else:
            raise FormatError(f"{source}: unknown section kind {kind}")
    return out


def write_container(
    path: str | os.PathLike[str],
    magic: bytes,
    version: tuple[int, int],
    arrays: dict[str, NDArray[Any]],
    records: dict[str, Any],
) -> int:
    """Atomically write a container to *path*; return its CRC-32."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    blob = encode_container(magic, version, arrays, records)
    tmp = p.with_suffix(p.suffix + ".tmp")
    tmp.write_bytes(blob)
    os.replace(tmp, p)
    return int(_U32.unpack_from(blob, len(blob) - 4)[0])


def read_container(
    path: str | os.PathLike[str], magic: bytes, supported_major: int
) -> Container:
    p = Path(path)
    return decode_container(p.read_bytes(), magic, supported_major, source=str(p))


def file_crc32(path: str | os.PathLike[str]) -> int:
    """CRC-32 of a file's content, as recorded in manifests.

    A file that already ends in a matching CRC-32 trailer (every container
    written here) is hashed without it, so the value equals the stored
    checksum and differs between files.
    """
    data = Path(path).read_bytes()
    if len(data) >= _U32.size:
        end = len(data) - _U32.size
        body_crc = zlib.crc32(data[:end]) & 0xFFFFFFFF
        if body_crc == _U32.unpack_from(data, end)[0]:
            return body_crc
    return zlib.crc32(data) & 0xFFFFFFFF
