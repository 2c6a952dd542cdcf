"""XOR packet coding: schemes from Latin rectangles, encode/decode, wire format.

A coded packet carries its coding vector as a sorted list of source-packet
indexes (the support of its encoding row), so sinks rebuild the decoding
matrix from headers alone. Wire format, little-endian:

    u16 packet_index | u16 header_count h | h * u16 source indexes
    | u32 payload_len | payload bytes

The block manifest is text: a first line "n k mode original_len" followed by
the Latin rectangle in its own text format.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    PacketIntegrityError,
    ParseError,
    PartialDecodeError,
    SingularMatrixError,
    WireFormatError,
)
from .gf2 import BitMatrix, invert
from .latin import LatinRectangle, block_incidence

MODE_DIRECT = "direct"
MODE_BALANCED_DECODE = "balanced_decode"
MODES = (MODE_DIRECT, MODE_BALANCED_DECODE)


@dataclass(frozen=True)
class CodingScheme:
    """Paired encode/decode matrices; encode_matrix . decode_matrix = I.

    In ``direct`` mode the balanced incidence matrix encodes (each coded
    packet XORs exactly k sources) and its inverse decodes. In
    ``balanced_decode`` mode the roles swap so that every source packet is
    recovered from exactly k coded packets instead.
    """

    n: int
    k: int
    encode_matrix: BitMatrix
    decode_matrix: BitMatrix
    mode: str


@dataclass(frozen=True)
class SourceBlock:
    """n equal-length source packets plus the pre-padding payload size."""

    packets: tuple[bytes, ...]
    packet_len: int
    original_len: int

    def __post_init__(self):
        if not self.packets:
            raise ValueError("block must contain at least one packet")
        if any(len(p) != self.packet_len for p in self.packets):
            raise ValueError("all packets must have identical length")
        if self.original_len < 0:
            raise ValueError("original length cannot be negative")

    @property
    def n(self) -> int:
        return len(self.packets)

    @classmethod
    def from_packets(cls, packets: Sequence[bytes], original_len: int | None = None) -> SourceBlock:
        packets = tuple(bytes(p) for p in packets)
        if not packets:
            raise ValueError("block must contain at least one packet")
        plen = len(packets[0])
        if original_len is None:
            original_len = plen * len(packets)
        return cls(packets, plen, original_len)


@dataclass(frozen=True)
class CodedPacket:
    """One on-wire unit: index, header of source indexes, XOR payload."""

    index: int
    header: tuple[int, ...]
    payload: bytes

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("packet index must be >= 1")
        if not self.header:
            raise ValueError("header must not be empty")
        if any(b < 1 for b in self.header) or any(
            a >= b for a, b in zip(self.header, self.header[1:])
        ):
            raise ValueError("header indexes must be >= 1 and strictly increasing")


def split_payload(data: bytes, n: int) -> SourceBlock:
    """Zero-pad data to a multiple of n and cut it into n equal packets."""
    if n < 1:
        raise ValueError("packet count must be >= 1")
    if not data:
        raise ValueError("cannot split empty data")
    packet_len = -(-len(data) // n)
    padded = data.ljust(packet_len * n, b"\x00")
    packets = tuple(padded[i * packet_len:(i + 1) * packet_len] for i in range(n))
    return SourceBlock(packets, packet_len, len(data))


def join_payload(block: SourceBlock) -> bytes:
    """Concatenate the packets and drop the padding."""
    return b"".join(block.packets)[: block.original_len]


def make_scheme(rect: LatinRectangle, mode: str = MODE_DIRECT) -> CodingScheme:
    """Build a coding scheme from a rectangle's block-incidence matrix."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}, expected one of {MODES}")
    b = block_incidence(rect)
    try:
        b_inv = invert(b)
    except SingularMatrixError:
        if rect.k % 2 == 0:
            raise SingularMatrixError(
                f"incidence matrix of a {rect.k}x{rect.n} rectangle with even "
                "row count is always singular over GF(2)"
            ) from None
        raise
    if mode == MODE_DIRECT:
        enc, dec = b, b_inv
    else:
        enc, dec = b_inv, b
    return CodingScheme(n=rect.n, k=rect.k, encode_matrix=enc, decode_matrix=dec, mode=mode)


def _xor_bytes(parts: Iterable[bytes], length: int) -> bytes:
    acc = 0
    for p in parts:
        acc ^= int.from_bytes(p, "little")
    return acc.to_bytes(length, "little")


def encode(scheme: CodingScheme, block: SourceBlock) -> list[CodedPacket]:
    """XOR the sources per encoding row; header = the row's support, 1-based."""
    if block.n != scheme.n:
        raise ValueError(f"block has {block.n} packets, scheme expects {scheme.n}")
    out = []
    for i in range(scheme.n):
        support = scheme.encode_matrix.row_support(i)
        header = tuple(j + 1 for j in support)
        payload = _xor_bytes((block.packets[j] for j in support), block.packet_len)
        out.append(CodedPacket(index=i + 1, header=header, payload=payload))
    return out


def _header_bits(packet: CodedPacket, n: int) -> int:
    if packet.header[-1] > n:
        raise ValueError(f"packet {packet.index} references source {packet.header[-1]} > n={n}")
    bits = 0
    for j in packet.header:
        bits |= 1 << (j - 1)
    return bits


def _reduce(vec: int, basis: dict[int, tuple[int, int]], pay: int = 0) -> tuple[int, int]:
    """Reduce (vec, pay) against a lowest-set-bit pivot basis."""
    while vec:
        piv = (vec & -vec).bit_length() - 1
        row = basis.get(piv)
        if row is None:
            break
        vec ^= row[0]
        pay ^= row[1]
    return vec, pay


def _build_basis(packets: Sequence[CodedPacket], n: int, payloads: bool) -> dict[int, tuple[int, int]]:
    basis: dict[int, tuple[int, int]] = {}
    for p in packets:
        vec = _header_bits(p, n)
        pay = int.from_bytes(p.payload, "little") if payloads else 0
        vec, pay = _reduce(vec, basis, pay)
        if vec:
            basis[(vec & -vec).bit_length() - 1] = (vec, pay)
        elif payloads and pay:
            raise PacketIntegrityError(
                f"packet {p.index} is linearly dependent on earlier packets "
                "but its payload disagrees"
            )
    return basis


def decodable_indexes(packets: Sequence[CodedPacket], n: int) -> frozenset[int]:
    """source indexes l whose unit vector lies in the span of the received headers."""
    basis = _build_basis(packets, n, payloads=False)
    out = set()
    for l in range(n):
        vec, _ = _reduce(1 << l, basis)
        if vec == 0:
            out.add(l + 1)
    return frozenset(out)


def decode(
    packets: Sequence[CodedPacket], n: int, original_len: int | None = None
) -> SourceBlock:
    """Recover the source block from headers and payloads alone.

    Gaussian elimination over the received coding vectors, so overheard or
    redundant packet sets work the same as the exact n-packet case.
    """
    if n < 1:
        raise ValueError("packet count must be >= 1")
    if not packets:
        raise PartialDecodeError(frozenset(), n)
    plen = len(packets[0].payload)
    if any(len(p.payload) != plen for p in packets):
        raise ValueError("received packets have unequal payload lengths")
    basis = _build_basis(packets, n, payloads=True)
    if len(basis) < n:
        recoverable = set()
        for l in range(n):
            vec, _ = _reduce(1 << l, basis)
            if vec == 0:
                recoverable.add(l + 1)
        raise PartialDecodeError(frozenset(recoverable), n)
    # Full rank: back-substitute to unit rows, highest pivot first.
    for piv in sorted(basis, reverse=True):
        vec, pay = basis[piv]
        rest = vec ^ (1 << piv)
        while rest:
            q = (rest & -rest).bit_length() - 1
            pay ^= basis[q][1]
            rest &= rest - 1
        basis[piv] = (1 << piv, pay)
    sources = tuple(basis[l][1].to_bytes(plen, "little") for l in range(n))
    if original_len is None:
        original_len = plen * n
    return SourceBlock(sources, plen, original_len)


_HEAD = struct.Struct("<HH")
_PLEN = struct.Struct("<I")


def serialize_packet(packet: CodedPacket) -> bytes:
    if packet.index > 0xFFFF or packet.header[-1] > 0xFFFF:
        raise ValueError("index does not fit the u16 wire format")
    if len(packet.payload) > 0xFFFFFFFF:
        raise ValueError("payload too large for the u32 wire format")
    parts = [
        _HEAD.pack(packet.index, len(packet.header)),
        struct.pack(f"<{len(packet.header)}H", *packet.header),
        _PLEN.pack(len(packet.payload)),
        packet.payload,
    ]
    return b"".join(parts)


def deserialize_packet(buf: bytes) -> CodedPacket:
    if len(buf) < _HEAD.size:
        raise WireFormatError("truncated packet prefix", offset=len(buf))
    index, count = _HEAD.unpack_from(buf, 0)
    offset = _HEAD.size
    if count == 0:
        raise WireFormatError("empty header", offset=2)
    end = offset + 2 * count
    if len(buf) < end:
        raise WireFormatError("truncated header indexes", offset=len(buf))
    header = struct.unpack_from(f"<{count}H", buf, offset)
    if any(h < 1 for h in header) or any(a >= b for a, b in zip(header, header[1:])):
        raise WireFormatError("header indexes not strictly increasing from >= 1", offset=offset)
    offset = end
    if len(buf) < offset + _PLEN.size:
        raise WireFormatError("truncated payload length", offset=len(buf))
    (plen,) = _PLEN.unpack_from(buf, offset)
    offset += _PLEN.size
    if len(buf) < offset + plen:
        raise WireFormatError("truncated payload", offset=len(buf))
    if len(buf) > offset + plen:
        raise WireFormatError("trailing bytes after payload", offset=offset + plen)
    return CodedPacket(index=index, header=tuple(header), payload=buf[offset:offset + plen])


def format_manifest(scheme: CodingScheme, rect: LatinRectangle, original_len: int) -> str:
    return f"{scheme.n} {scheme.k} {scheme.mode} {original_len}\n" + rect.to_text()


def parse_manifest(text: str) -> tuple[int, int, str, int, LatinRectangle]:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty manifest")
    toks = lines[0].split()
    if len(toks) != 4:
        raise ParseError(f"bad manifest header {lines[0]!r}, expected 'n k mode original_len'")
    try:
        n, k, original_len = int(toks[0]), int(toks[1]), int(toks[3])
    except ValueError as exc:
        raise ParseError(f"non-integer field in manifest header {lines[0]!r}") from exc
    mode = toks[2]
    if mode not in MODES:
        raise ParseError(f"unknown manifest mode {mode!r}")
    rect = LatinRectangle.from_text("\n".join(lines[1:]))
    if rect.n != n or rect.k != k:
        raise ParseError(
            f"manifest dimensions {k}x{n} disagree with embedded rectangle {rect.k}x{rect.n}"
        )
    return n, k, mode, original_len, rect
