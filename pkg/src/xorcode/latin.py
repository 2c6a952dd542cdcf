"""Latin squares and rectangles: validation, random sampling, incidence matrices.

Symbols are 1..n. The block-incidence matrix of a k x n rectangle is the
n x n 0-1 matrix whose row j marks the symbols appearing in column j; its
transpose (symbols on rows) is exposed as the symbol-incidence matrix.
Both are balanced with k ones per row and column, and a nonsingular one
requires odd k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DesignSearchError, ParseError
from .gf2 import BitMatrix, determinant, transpose


@dataclass(frozen=True)
class LatinRectangle:
    """k x n array of symbols in 1..n; construction checks shape only, see validate()."""

    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.cells or not self.cells[0]:
            raise ValueError("rectangle must have at least one row and one column")
        n = len(self.cells[0])
        if any(len(row) != n for row in self.cells):
            raise ValueError("rows have unequal lengths")
        if len(self.cells) > n:
            raise ValueError("rectangle cannot have more rows than columns")

    @property
    def k(self) -> int:
        return len(self.cells)

    @property
    def n(self) -> int:
        return len(self.cells[0])

    def is_square(self) -> bool:
        return self.k == self.n

    def column_symbols(self, j: int) -> frozenset[int]:
        """Symbol set of column j (0-based)."""
        return frozenset(row[j] for row in self.cells)

    def to_text(self) -> str:
        lines = [f"{self.k} {self.n}"]
        lines.extend(" ".join(str(v) for v in row) for row in self.cells)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> LatinRectangle:
        lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
        if not lines:
            raise ParseError("empty rectangle text")
        head = lines[0].split()
        if len(head) != 2 or not all(t.isdigit() for t in head):
            raise ParseError(f"bad rectangle header {lines[0]!r}, expected 'k n'")
        k, n = int(head[0]), int(head[1])
        if len(lines) != k + 1:
            raise ParseError(f"expected {k} rectangle rows, found {len(lines) - 1}")
        rows = []
        for i, line in enumerate(lines[1:]):
            toks = line.split()
            if len(toks) != n:
                raise ParseError(f"row {i + 1} has {len(toks)} entries, expected {n}")
            try:
                rows.append(tuple(int(t) for t in toks))
            except ValueError as exc:
                raise ParseError(f"non-integer entry in row {i + 1}: {line!r}") from exc
        return cls(tuple(rows))


def validate(rect: LatinRectangle) -> bool:
    """True iff every row is a permutation of 1..n and no column repeats a symbol."""
    n = rect.n
    full = set(range(1, n + 1))
    for row in rect.cells:
        if set(row) != full:
            return False
    for j in range(n):
        col = [row[j] for row in rect.cells]
        if len(set(col)) != len(col):
            return False
    return True


def split_upper(square: LatinRectangle, k: int) -> LatinRectangle:
    """First k rows of a rectangle, itself a valid Latin rectangle."""
    if not 1 <= k <= square.k:
        raise ValueError(f"k must be in 1..{square.k}, got {k}")
    return LatinRectangle(square.cells[:k])


def block_incidence(rect: LatinRectangle) -> BitMatrix:
    """n x n matrix whose row j marks the symbols of column j of the rectangle."""
    if not validate(rect):
        raise ValueError("not a valid Latin rectangle")
    n = rect.n
    bits = []
    for j in range(n):
        acc = 0
        for row in rect.cells:
            acc |= 1 << (row[j] - 1)
        bits.append(acc)
    return BitMatrix(n, n, tuple(bits))


def symbol_incidence(rect: LatinRectangle) -> BitMatrix:
    """Transpose of block_incidence: row i marks the columns containing symbol i."""
    return transpose(block_incidence(rect))


@dataclass(frozen=True)
class DesignMatrices:
    """Both incidence conventions for one rectangle."""

    block_incidence: BitMatrix
    symbol_incidence: BitMatrix


def design_matrices(rect: LatinRectangle) -> DesignMatrices:
    b = block_incidence(rect)
    return DesignMatrices(block_incidence=b, symbol_incidence=transpose(b))


def is_balanced(m: BitMatrix, k: int) -> bool:
    """True iff every row and every column has exactly k ones."""
    if not m.is_square():
        raise ValueError("balance check requires a square matrix")
    if any(row.bit_count() != k for row in m.row_bits):
        return False
    for j in range(m.cols):
        if sum((row >> j) & 1 for row in m.row_bits) != k:
            return False
    return True


def jm_generate(n: int, seed: int = 0, moves: int | None = None) -> LatinRectangle:
    """Sample a random Latin square of order n by an incidence-cube walk.

    The square is viewed as a 0-1 cube f(r, c, s) with unit line sums; each
    step flips the corners of a random 2x2x2 subcube, which either keeps the
    cube proper or leaves a single -1 defect. From a proper state the pivot
    is a random empty cell/symbol triple; from an improper state it is the
    defect, with the three paired lines resolved by coin flips. A move is
    accepted only when the step lands in a proper square; the square seen
    after ``moves`` accepted moves (default n^3) is emitted. Stopping at the
    first proper state after a raw step count would instead over-sample
    squares that terminate long improper excursions.
    Output is deterministic for fixed (n, seed, moves).
    """
    if n < 1:
        raise ValueError("order must be at least 1")
    if n == 1:
        return LatinRectangle(((1,),))
    if moves is None:
        moves = n ** 3
    rnd = random.Random(seed).random
    # sym_at[r*n+c]: symbol in the cell; col_at[r*n+s]: column of s in row r;
    # row_at[c*n+s]: row of s in column c. Start from the cyclic square.
    sym_at = [0] * (n * n)
    col_at = [0] * (n * n)
    row_at = [0] * (n * n)
    for r in range(n):
        rn = r * n
        for c in range(n):
            s = (r + c) % n
            sym_at[rn + c] = s
            col_at[rn + s] = c
    for c in range(n):
        cn = c * n
        for s in range(n):
            row_at[cn + s] = (s - c) % n
    proper = True
    nr = nc = ns = 0          # defect triple when improper
    x_sym = x_col = x_row = 0  # second entries of the defect's three lines
    accepted = 0
    while accepted < moves:
        if proper:
            while True:
                r = int(rnd() * n)
                c = int(rnd() * n)
                s = int(rnd() * n)
                if sym_at[r * n + c] != s:
                    break
            rn = r * n
            cn = c * n
            s2 = sym_at[rn + c]
            c2 = col_at[rn + s]
            r2 = row_at[cn + s]
            fill_sym, fill_col, fill_row = s, c, r
        else:
            r, c, s = nr, nc, ns
            rn = r * n
            cn = c * n
            if int(rnd() * 2):
                s2, fill_sym = sym_at[rn + c], x_sym
            else:
                s2, fill_sym = x_sym, sym_at[rn + c]
            if int(rnd() * 2):
                c2, fill_col = col_at[rn + s], x_col
            else:
                c2, fill_col = x_col, col_at[rn + s]
            if int(rnd() * 2):
                r2, fill_row = row_at[cn + s], x_row
            else:
                r2, fill_row = x_row, row_at[cn + s]
        r2n = r2 * n
        c2n = c2 * n
        sym_at[rn + c] = fill_sym
        sym_at[rn + c2] = s2
        sym_at[r2n + c] = s2
        col_at[rn + s] = fill_col
        col_at[rn + s2] = c2
        col_at[r2n + s] = c2
        row_at[cn + s] = fill_row
        row_at[cn + s2] = r2
        row_at[c2n + s] = r2
        if sym_at[r2n + c2] == s2:
            sym_at[r2n + c2] = s
            col_at[r2n + s2] = c
            row_at[c2n + s2] = r
            proper = True
            accepted += 1
        else:
            # The far corner turns negative: cell (r2,c2), row line (r2,.,s2)
            # and column line (.,c2,s2) each gain a second entry.
            nr, nc, ns = r2, c2, s2
            x_sym, x_col, x_row = s, c, r
            proper = False
    cells = tuple(
        tuple(sym_at[r * n + c] + 1 for c in range(n)) for r in range(n)
    )
    return LatinRectangle(cells)


def auto_rows(n: int) -> int:
    """Default odd row count for a nonsingular design: n-1 for even n, n-2 for odd."""
    if n < 1:
        raise ValueError("order must be at least 1")
    if n == 1:
        return 1
    return n - 1 if n % 2 == 0 else n - 2


def find_nonsingular_rectangle(
    n: int,
    k: int | None = None,
    seed: int = 0,
    max_retries: int = 64,
    moves: int | None = None,
) -> tuple[LatinRectangle, BitMatrix]:
    """Search for a k x n Latin rectangle with nonsingular block incidence.

    Repeats sample-square / take-upper-rows / test-determinant until a hit.
    Even k is rejected outright: with an even number of ones in every row,
    the XOR of all columns is zero, so the matrix is singular over GF(2).
    """
    if n < 1:
        raise ValueError("order must be at least 1")
    if k is None:
        k = auto_rows(n)
    if not 1 <= k <= n:
        raise ValueError(f"row count must be in 1..{n}, got {k}")
    if k % 2 == 0:
        raise ValueError(
            f"row count {k} is even; the incidence matrix of an even-row "
            "rectangle is always singular over GF(2)"
        )
    rng = random.Random(seed)
    for _ in range(max_retries):
        square = jm_generate(n, seed=rng.getrandbits(63), moves=moves)
        rect = split_upper(square, k)
        m = block_incidence(rect)
        if determinant(m):
            return rect, m
    raise DesignSearchError(
        f"no nonsingular {k}x{n} rectangle found in {max_retries} attempts",
        attempts=max_retries,
    )
