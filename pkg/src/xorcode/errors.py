"""Exception hierarchy shared by the library and the CLI.

Two families: ``ParseError`` for malformed input (text formats, wire bytes)
and ``CodingError`` for domain failures (singular designs, rank deficits,
unsolvable topologies). The CLI maps them to exit codes 2 and 1.
"""

from __future__ import annotations


class ParseError(Exception):
    """Malformed input text or bytes."""


class WireFormatError(ParseError):
    """Bad packet bytes; ``offset`` points at the first offending byte."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class CodingError(Exception):
    """Base class for domain-level failures."""


class SingularMatrixError(CodingError):
    """Matrix has determinant 0 over GF(2) and cannot be inverted."""


class DesignSearchError(CodingError):
    """Random design search exhausted its retry budget."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class PartialDecodeError(CodingError):
    """Received packets do not span the full space; carries what is recoverable."""

    def __init__(self, recoverable: frozenset[int], n: int):
        ordered = ",".join(str(i) for i in sorted(recoverable)) or "none"
        super().__init__(f"rank too low to decode all {n} packets; recoverable: {ordered}")
        self.recoverable = recoverable


class PacketIntegrityError(CodingError):
    """Two received packets with dependent headers carry inconsistent payloads."""


class TopologyError(CodingError):
    """Network shape outside the supported class (cycles, unequal sink flows)."""


class ScheduleError(CodingError):
    """No consistent forwarding schedule exists, or a schedule fails validation."""
