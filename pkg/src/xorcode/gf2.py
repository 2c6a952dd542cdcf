"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python ints with little-endian bit
order: bit j holds element j, so adding two rows is a single integer XOR and
serialization via ``int.to_bytes(..., "little")`` is byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, SingularMatrixError


def _parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class BitVector:
    """Fixed-length GF(2) vector; bit j of ``bits`` is element j."""

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("vector length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("set bits beyond declared length")

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> BitVector:
        acc = 0
        count = 0
        for v in values:
            if v not in (0, 1):
                raise ValueError(f"non-binary entry {v!r}")
            acc |= v << count
            count += 1
        return cls(count, acc)

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> BitVector:
        if not 0 <= index < length:
            raise ValueError("unit index out of range")
        return cls(length, 1 << index)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        acc = 0
        for j in support:
            if not 0 <= j < length:
                raise ValueError("support index out of range")
            acc |= 1 << j
        return cls(length, acc)

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError("bit index out of range")
        return (self.bits >> j) & 1

    def __xor__(self, other: BitVector) -> BitVector:
        if self.length != other.length:
            raise ValueError("length mismatch")
        return BitVector(self.length, self.bits ^ other.bits)

    def support(self) -> tuple[int, ...]:
        """Positions of the set bits, ascending, 0-based."""
        return tuple(j for j in range(self.length) if (self.bits >> j) & 1)

    def weight(self) -> int:
        return self.bits.bit_count()

    def to01(self) -> str:
        return "".join("1" if (self.bits >> j) & 1 else "0" for j in range(self.length))


@dataclass(frozen=True)
class BitMatrix:
    """Dense GF(2) matrix; ``row_bits[i]`` packs row i, bit j = column j."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix must have at least one row and one column")
        if len(self.row_bits) != self.rows:
            raise ValueError("row count does not match row data")
        for bits in self.row_bits:
            if bits < 0 or bits >> self.cols:
                raise ValueError("row has set bits beyond declared width")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> BitMatrix:
        vecs = [BitVector.from_bits(r) for r in rows]
        if not vecs:
            raise ValueError("matrix must have at least one row")
        cols = vecs[0].length
        if any(v.length != cols for v in vecs):
            raise ValueError("rows have unequal lengths")
        return cls(len(vecs), cols, tuple(v.bits for v in vecs))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> BitMatrix:
        return cls.from_rows([[int(ch) for ch in row] for row in rows])

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.row_bits[i])

    def row_support(self, i: int) -> tuple[int, ...]:
        return self.row(i).support()

    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines.extend(self.row(i).to01() for i in range(self.rows))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> BitMatrix:
        lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
        if not lines:
            raise ParseError("empty matrix text")
        head = lines[0].split()
        if len(head) != 2 or not all(t.isdigit() for t in head):
            raise ParseError(f"bad matrix header {lines[0]!r}, expected 'rows cols'")
        rows, cols = int(head[0]), int(head[1])
        if len(lines) != rows + 1:
            raise ParseError(f"expected {rows} matrix rows, found {len(lines) - 1}")
        bits = []
        for i, line in enumerate(lines[1:]):
            if len(line) != cols or set(line) - {"0", "1"}:
                raise ParseError(f"bad matrix row {i + 1}: {line!r}")
            bits.append(sum(1 << j for j, ch in enumerate(line) if ch == "1"))
        return cls(rows, cols, tuple(bits))


def mat_vec_mul(m: BitMatrix, x: BitVector) -> BitVector:
    """y = M.x over GF(2); y[i] is the parity of row i AND x."""
    if m.cols != x.length:
        raise ValueError(f"dimension mismatch: {m.rows}x{m.cols} matrix, length-{x.length} vector")
    acc = 0
    for i, row in enumerate(m.row_bits):
        acc |= _parity(row & x.bits) << i
    return BitVector(m.rows, acc)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Matrix product over GF(2); row i of A.B is the XOR of B's rows picked by row i of A."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = []
    for row in a.row_bits:
        acc = 0
        rest = row
        while rest:
            j = (rest & -rest).bit_length() - 1
            acc ^= b.row_bits[j]
            rest &= rest - 1
        out.append(acc)
    return BitMatrix(a.rows, b.cols, tuple(out))


def transpose(m: BitMatrix) -> BitMatrix:
    out = []
    for j in range(m.cols):
        acc = 0
        for i, row in enumerate(m.row_bits):
            acc |= ((row >> j) & 1) << i
        out.append(acc)
    return BitMatrix(m.cols, m.rows, tuple(out))


def _eliminate(rows: list[int], cols: int) -> tuple[list[int], list[int]]:
    """In-place forward+backward elimination; returns (rows, pivot columns).

    Pivot rule: first remaining row with a 1 in the scan column.
    """
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, len(rows)):
            if (rows[i] >> c) & 1:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and (rows[i] >> c) & 1:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: BitMatrix) -> int:
    """GF(2) row rank."""
    _, pivots = _eliminate(list(m.row_bits), m.cols)
    return len(pivots)


def determinant(m: BitMatrix) -> int:
    """1 iff the square matrix is nonsingular over GF(2), else 0."""
    if not m.is_square():
        raise ValueError("determinant requires a square matrix")
    return 1 if rank(m) == m.rows else 0


def invert(m: BitMatrix) -> BitMatrix:
    """Inverse over GF(2) by Gauss-Jordan on [M | I]; raises if singular."""
    if not m.is_square():
        raise ValueError("inverse requires a square matrix")
    n = m.rows
    aug = [bits | (1 << (n + i)) for i, bits in enumerate(m.row_bits)]
    reduced, pivots = _eliminate(aug, n)
    if len(pivots) != n:
        raise SingularMatrixError(f"{n}x{n} matrix is singular over GF(2)")
    # After full reduction of a nonsingular matrix, row i is e_i | inverse row i.
    mask = (1 << n) - 1
    return BitMatrix(n, n, tuple((row >> n) & mask for row in reduced))


def in_rowspan(rows: BitMatrix, target: BitVector) -> bool:
    """True iff target is a GF(2) linear combination of the matrix rows."""
    if rows.cols != target.length:
        raise ValueError("dimension mismatch between rows and target")
    work = list(rows.row_bits)
    base = len(_eliminate(work, rows.cols)[1])
    work.append(target.bits)
    return len(_eliminate(work, rows.cols)[1]) == base
