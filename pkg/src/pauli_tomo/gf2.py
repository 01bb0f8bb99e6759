"""GF(2) linear algebra and GF(2^n) field arithmetic.

Matrices over GF(2) are stored as one integer bitmask per row (bit j =
column j).  Field elements of GF(2^n) are n-bit masks of polynomial
coefficients in the basis {1, t, ..., t^(n-1)}; multiplication is carry-less
with reduction modulo a fixed irreducible polynomial per degree.  These feed
the symmetric structure matrices B_k whose nonzero GF(2) combinations are all
invertible -- the property the stabilizer cover construction rests on.
"""

from __future__ import annotations

from dataclasses import dataclass

# Fixed irreducible polynomials (bitmask, bit k = coefficient of t^k) so that
# covers are reproducible bit-for-bit across runs and versions.
IRREDUCIBLE_POLYS = {
    1: 0b11,          # t + 1
    2: 0b111,         # t^2 + t + 1
    3: 0b1011,        # t^3 + t + 1
    4: 0b10011,       # t^4 + t + 1
    5: 0b100101,      # t^5 + t^2 + 1
    6: 0b1000011,     # t^6 + t + 1
    7: 0b10000011,    # t^7 + t + 1
    8: 0b100011101,   # t^8 + t^4 + t^3 + t^2 + 1
}

MAX_FIELD_DEGREE = 12


@dataclass(frozen=True)
class GF2Matrix:
    """Bit matrix over GF(2); ``bits[r]`` is the row-r bitmask."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != self.rows:
            raise ValueError("row count does not match bits length")
        if any(row >> self.cols for row in self.bits):
            raise ValueError("row bitmask exceeds column count")

    def get(self, r: int, c: int) -> int:
        return (self.bits[r] >> c) & 1

    def to_lists(self) -> list[list[int]]:
        return [[self.get(r, c) for c in range(self.cols)] for r in range(self.rows)]

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.get(r, c) == self.get(c, r)
            for r in range(self.rows)
            for c in range(r + 1, self.cols)
        )

    def __xor__(self, other: "GF2Matrix") -> "GF2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return GF2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.bits, other.bits)))


def gf2_matrix(rows: list[list[int]] | list[int], cols: int | None = None) -> GF2Matrix:
    """Build a GF2Matrix from nested 0/1 lists or from row bitmasks."""
    if rows and isinstance(rows[0], int):
        if cols is None:
            raise ValueError("cols is required when passing row bitmasks")
        return GF2Matrix(len(rows), cols, tuple(int(r) for r in rows))
    bits = tuple(sum((bit & 1) << c for c, bit in enumerate(row)) for row in rows)
    width = cols if cols is not None else (len(rows[0]) if rows else 0)
    return GF2Matrix(len(rows), width, bits)


def _poly_degree(p: int) -> int:
    return p.bit_length() - 1


def _clmul(a: int, b: int) -> int:
    """Carry-less (GF(2)[t]) polynomial product."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def _clmod(a: int, m: int) -> int:
    """Remainder of carry-less division of a by m."""
    dm = _poly_degree(m)
    while a.bit_length() - 1 >= dm and a:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Exhaustive trial division by all factors of degree <= deg/2."""
    deg = _poly_degree(poly)
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for f in range(1 << k, 1 << (k + 1)):
            if _clmod(poly, f) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^n) described by its degree and irreducible modulus."""

    n: int
    poly: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_FIELD_DEGREE:
            raise ValueError(f"extension degree must be in [1, {MAX_FIELD_DEGREE}]")
        if _poly_degree(self.poly) != self.n:
            raise ValueError(f"modulus degree {_poly_degree(self.poly)} != n = {self.n}")
        if not is_irreducible(self.poly):
            raise ValueError(f"polynomial {self.poly:#b} is reducible")


def field_spec(n: int, poly: int | None = None) -> FieldSpec:
    """FieldSpec for degree n, defaulting to the built-in modulus table."""
    if poly is None:
        if n not in IRREDUCIBLE_POLYS:
            raise ValueError(f"no built-in modulus for n={n}; pass poly explicitly")
        poly = IRREDUCIBLE_POLYS[n]
    return FieldSpec(n, poly)


def gf2n_mul(a: int, b: int, spec: FieldSpec) -> int:
    """Product in GF(2^n): carry-less multiply, reduce modulo spec.poly."""
    if a >> spec.n or b >> spec.n:
        raise ValueError("operand outside the field")
    return _clmod(_clmul(a, b), spec.poly)


def structure_matrices(spec: FieldSpec) -> list[GF2Matrix]:
    """Multiplication-table matrices B_1..B_n of the polynomial basis.

    B_k[i][j] is the t^k coefficient of t^i * t^j mod spec.poly.  Each B_k is
    symmetric, and every nonzero GF(2) combination of them is invertible.
    """
    n = spec.n
    products = [[gf2n_mul(1 << i, 1 << j, spec) for j in range(n)] for i in range(n)]
    mats = []
    for k in range(n):
        bits = tuple(
            sum(((products[i][j] >> k) & 1) << j for j in range(n)) for i in range(n)
        )
        mats.append(GF2Matrix(n, n, bits))
    return mats


def row_reduce(rows: list[int], cols: int) -> tuple[list[int], list[int]]:
    """Row-reduce over GF(2); returns (reduced rows, pivot column list)."""
    work = list(rows)
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, len(work)) if (work[r] >> col) & 1), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        for r in range(len(work)):
            if r != row and (work[r] >> col) & 1:
                work[r] ^= work[row]
        pivots.append(col)
        row += 1
        if row == len(work):
            break
    return work, pivots


def gf2_rank(m: GF2Matrix) -> int:
    _, pivots = row_reduce(list(m.bits), m.cols)
    return len(pivots)


def gf2_det(m: GF2Matrix) -> int:
    """Determinant over GF(2): 1 iff the matrix has full rank."""
    if m.rows != m.cols:
        raise ValueError("determinant requires a square matrix")
    return 1 if gf2_rank(m) == m.rows else 0


def gf2_solve(rows: list[int], cols: int, rhs: list[int]) -> list[int]:
    """Solve M w = target over GF(2) for each target in rhs.

    ``rows`` are bitmask rows of an r x cols matrix of full row rank r;
    ``rhs`` is a list of r-bit targets.  Returns one canonical solution per
    target (free variables zero, deterministic pivoting), found by reducing
    to RREF with marker bits that record which original rows were combined.
    """
    r = len(rows)
    work = [rows[i] | (1 << (cols + i)) for i in range(r)]
    reduced, pivots = row_reduce(work, cols)
    if len(pivots) != r:
        raise ValueError("system rows are linearly dependent")
    solutions = []
    for target in rhs:
        sol = 0
        for i, col in enumerate(pivots):
            markers = reduced[i] >> cols
            # With free variables zero, the pivot variable of reduced row i
            # equals the matching combination of target bits.
            if (markers & target).bit_count() & 1:
                sol |= 1 << col
        for i, row in enumerate(rows):
            if ((row & sol).bit_count() & 1) != ((target >> i) & 1):
                raise AssertionError("gf2_solve produced an invalid solution")
        solutions.append(sol)
    return solutions
