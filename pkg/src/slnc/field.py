"""Exact arithmetic over small Galois fields and dense matrices over them.

Prime fields GF(p) use modular residues.  Binary extension fields GF(2^m)
pack polynomial coefficient vectors into integers (constant term in the
least significant bit) and reduce by a fixed irreducible modulus, so every
serialized symbol is reproducible across runs and implementations.

All values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    FieldMismatch,
    Singular,
)

# Fixed moduli for GF(2^m), coefficient lists with the constant term first.
_BINARY_MODULI: dict[int, tuple[int, ...]] = {
    2: (1, 1, 1),                    # x^2 + x + 1
    3: (1, 1, 0, 1),                 # x^3 + x + 1
    4: (1, 1, 0, 0, 1),              # x^4 + x + 1
    5: (1, 0, 1, 0, 0, 1),           # x^5 + x^2 + 1
    6: (1, 1, 0, 0, 0, 0, 1),        # x^6 + x + 1
    7: (1, 1, 0, 0, 0, 0, 0, 1),     # x^7 + x + 1
    8: (1, 1, 0, 1, 1, 0, 0, 0, 1),  # x^8 + x^4 + x^3 + x + 1
}

_MAX_PRIME = 1 << 16
_MAX_DEGREE = 8


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, m) with q = p^m, p prime, or raise ValueError."""
    if q < 2:
        raise ValueError(f"field size must be at least 2, got {q}")
    p = 2
    while p * p <= q and q % p != 0:
        p += 1
    if q % p != 0:
        p = q  # q itself is prime
    m = 0
    rest = q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, m


def _poly_mod2(a: int, b: int) -> int:
    """Remainder of carry-less division of a by b (bitmask polynomials over GF(2))."""
    deg_b = b.bit_length() - 1
    while a and a.bit_length() - 1 >= deg_b:
        a ^= b << (a.bit_length() - 1 - deg_b)
    return a


def _is_irreducible_gf2(mask: int, m: int) -> bool:
    # Any reducible degree-m polynomial has a factor of degree <= m // 2;
    # the candidate space is tiny for m <= 8, so scan it exhaustively.
    for d in range(1, m // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if _poly_mod2(mask, cand) == 0:
                return False
    return True


class FieldSpec:
    """GF(q) with elements represented as canonical integers in [0, q).

    Supported: prime q below 2^16, and GF(2^m) for m <= 8 with the fixed
    built-in moduli (a custom irreducible modulus may be supplied; it is
    checked exhaustively at construction).
    """

    __slots__ = ("q", "p", "m", "modulus", "_mod_mask")

    def __init__(self, q: int, modulus: Sequence[int] | None = None):
        p, m = _factor_prime_power(q)
        self.q = q
        self.p = p
        self.m = m
        if m == 1:
            if q >= _MAX_PRIME:
                raise ValueError(f"prime fields above 2^16 are unsupported (q={q})")
            if modulus is not None:
                raise ValueError("prime fields take no modulus")
            self.modulus = ()
            self._mod_mask = 0
            return
        if p != 2:
            raise ValueError(f"extension fields with characteristic {p} are unsupported")
        if m > _MAX_DEGREE:
            raise ValueError(f"extension degree {m} exceeds the supported maximum {_MAX_DEGREE}")
        coeffs = tuple(modulus) if modulus is not None else _BINARY_MODULI[m]
        if len(coeffs) != m + 1 or coeffs[-1] != 1 or any(c not in (0, 1) for c in coeffs):
            raise ValueError(f"modulus must be a monic degree-{m} polynomial over GF(2)")
        mask = 0
        for i, c in enumerate(coeffs):
            mask |= c << i
        if not _is_irreducible_gf2(mask, m):
            raise ValueError("modulus polynomial is reducible over GF(2)")
        self.modulus = coeffs
        self._mod_mask = mask

    # Arithmetic below assumes canonical operands; `check` is the validating
    # entry point used by the public surface.

    def check(self, a: object) -> int:
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.q:
            raise FieldMismatch(f"{a!r} is not a canonical element of {self}")
        return a

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return a ^ b

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return a

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        res = 0
        top = 1 << self.m
        x = a
        while b:
            if b & 1:
                res ^= x
            b >>= 1
            x <<= 1
            if x & top:
                x ^= self._mod_mask
        return res

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"zero has no inverse in {self}")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        res = 1
        base = a
        while e:
            if e & 1:
                res = self.mul(res, base)
            base = self.mul(base, base)
            e >>= 1
        return res

    def elements(self) -> range:
        return range(self.q)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.q})"


def ff_op(field: FieldSpec, a: int, b: int, kind: str) -> int:
    """Apply one validated field operation: kind is add, sub, mul, or div."""
    a = field.check(a)
    b = field.check(b)
    if kind == "add":
        return field.add(a, b)
    if kind == "sub":
        return field.sub(a, b)
    if kind == "mul":
        return field.mul(a, b)
    if kind == "div":
        if b == 0:
            raise DivisionByZero(f"division by zero in {field}")
        return field.div(a, b)
    raise ValueError(f"unknown operation kind {kind!r}")


# -- vectors (plain tuples of canonical ints) ---------------------------------

def vec_add(field: FieldSpec, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths differ: {len(u)} vs {len(v)}")
    return tuple(field.add(a, b) for a, b in zip(u, v))


def vec_sub(field: FieldSpec, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths differ: {len(u)} vs {len(v)}")
    return tuple(field.sub(a, b) for a, b in zip(u, v))


def vec_scale(field: FieldSpec, c: int, u: Sequence[int]) -> tuple[int, ...]:
    return tuple(field.mul(c, a) for a in u)


def dot(field: FieldSpec, u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths differ: {len(u)} vs {len(v)}")
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = field.add(acc, field.mul(a, b))
    return acc


# -- row echelon core ---------------------------------------------------------

def _echelon(field: FieldSpec, rows: list[list[int]], reduced: bool = False) -> list[int]:
    """Row-reduce in place and return the pivot column indices.

    Pivots take the first nonzero entry scanning top-to-bottom within each
    column, columns left-to-right, which fixes a canonical elimination order.
    """
    if not rows:
        return []
    cols = len(rows[0])
    pivots: list[int] = []
    pivot_row = 0
    for col in range(cols):
        sel = None
        for r in range(pivot_row, len(rows)):
            if rows[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        inv = field.inv(rows[pivot_row][col])
        if inv != 1:
            rows[pivot_row] = [field.mul(inv, x) for x in rows[pivot_row]]
        targets = range(len(rows)) if reduced else range(pivot_row + 1, len(rows))
        for r in targets:
            if r == pivot_row or rows[r][col] == 0:
                continue
            factor = rows[r][col]
            rows[r] = [
                field.sub(x, field.mul(factor, y))
                for x, y in zip(rows[r], rows[pivot_row])
            ]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return pivots


def rank_of_rows(field: FieldSpec, rows: Iterable[Sequence[int]]) -> int:
    work = [list(r) for r in rows]
    return len(_echelon(field, work))


class Matrix:
    """Immutable dense row-major matrix over a fixed GF(q)."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, rows: int, cols: int, entries: Sequence[int]):
        if rows < 0 or cols < 0:
            raise DimensionMismatch("matrix dimensions must be nonnegative")
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = tuple(field.check(e) for e in entries)

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]], cols: int | None = None) -> "Matrix":
        if rows:
            cols = len(rows[0])
        elif cols is None:
            raise DimensionMismatch("empty matrix needs an explicit column count")
        flat = [x for row in rows for x in row]
        return cls(field, len(rows), cols, flat)

    @classmethod
    def from_cols(cls, field: FieldSpec, cols: Sequence[Sequence[int]], rows: int | None = None) -> "Matrix":
        if cols:
            rows = len(cols[0])
        elif rows is None:
            raise DimensionMismatch("empty matrix needs an explicit row count")
        flat = [cols[j][i] for i in range(rows) for j in range(len(cols))]
        return cls(field, rows, len(cols), flat)

    # -- access ----------------------------------------------------------

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    # -- operations ------------------------------------------------------

    def _require_same_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"mixed fields {self.field} and {other.field}")

    def transpose(self) -> "Matrix":
        return Matrix.from_rows(self.field, [list(self.col(j)) for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._require_same_field(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        out: list[int] = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                out.append(dot(f, r, other.col(j)))
        return Matrix(f, self.rows, other.cols, out)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._require_same_field(other)
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        rows = [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)]
        return Matrix.from_rows(self.field, rows, cols=self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._require_same_field(other)
        if self.cols != other.cols:
            raise DimensionMismatch("vstack needs equal column counts")
        rows = [list(self.row(i)) for i in range(self.rows)]
        rows += [list(other.row(i)) for i in range(other.rows)]
        return Matrix.from_rows(self.field, rows, cols=self.cols)

    def rank(self) -> int:
        return rank_of_rows(self.field, (self.row(i) for i in range(self.rows)))

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("only square matrices have inverses")
        n = self.rows
        f = self.field
        work = [
            list(self.row(i)) + [1 if i == j else 0 for j in range(n)]
            for i in range(n)
        ]
        pivots = _echelon(f, work, reduced=True)
        if len(pivots) < n or any(p >= n for p in pivots):
            raise Singular(f"matrix of rank {len(pivots)} < {n} has no inverse")
        return Matrix.from_rows(f, [row[n:] for row in work], cols=n)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.rows}x{self.cols})"

    def serialize(self) -> str:
        """Row-major, space-separated, one row per line."""
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


def mat_rank(m: Matrix) -> int:
    """Rank over GF(q) by exact Gaussian elimination."""
    return m.rank()


def mat_inverse(m: Matrix) -> Matrix:
    """Inverse of a square matrix; raises Singular when rank < dimension."""
    return m.inverse()


def spans_intersect_trivially(b1: Matrix, b2: Matrix) -> bool:
    """True iff the column spans of b1 and b2 meet only at zero.

    Uses rank additivity: rank([b1 | b2]) == rank(b1) + rank(b2).
    """
    b1._require_same_field(b2)
    if b1.rows != b2.rows:
        raise DimensionMismatch("span test needs equal ambient dimensions")
    return b1.hstack(b2).rank() == b1.rank() + b2.rank()


def solve_unique(a: Matrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """Solve a @ x = b for the unique column x, or return None if inconsistent.

    Requires full column rank; raises Singular when the system is
    underdetermined instead of picking an arbitrary solution.
    """
    if len(b) != a.rows:
        raise DimensionMismatch(f"right-hand side length {len(b)} != {a.rows}")
    f = a.field
    work = [list(a.row(i)) + [f.check(b[i])] for i in range(a.rows)]
    if not work:
        if a.cols == 0:
            return ()
        raise Singular("no equations for a nonzero number of unknowns")
    pivots = _echelon(f, work, reduced=True)
    if any(p == a.cols for p in pivots):
        return None  # a pivot in the augmented column: 0 = nonzero
    if len(pivots) < a.cols:
        raise Singular(f"system of rank {len(pivots)} < {a.cols} is underdetermined")
    x = [0] * a.cols
    for r, col in enumerate(pivots):
        x[col] = work[r][a.cols]
    return tuple(x)


def null_space(a: Matrix) -> list[tuple[int, ...]]:
    """Basis of {x : a @ x = 0}, deterministic (one vector per free column)."""
    f = a.field
    work = [list(a.row(i)) for i in range(a.rows)]
    pivots = _echelon(f, work, reduced=True) if work else []
    pivot_set = set(pivots)
    basis: list[tuple[int, ...]] = []
    for free in range(a.cols):
        if free in pivot_set:
            continue
        vec = [0] * a.cols
        vec[free] = 1
        for r, col in enumerate(pivots):
            vec[col] = f.neg(work[r][free])
        basis.append(tuple(vec))
    return basis


def left_null_space(a: Matrix) -> list[tuple[int, ...]]:
    """Basis of {x : x @ a = 0}."""
    return null_space(a.transpose())


def vector_from_index(field: FieldSpec, index: int, n: int) -> tuple[int, ...]:
    """Decode a base-q integer into a length-n vector, first coordinate least significant."""
    digits = []
    for _ in range(n):
        index, rem = divmod(index, field.q)
        digits.append(rem)
    if index:
        raise ValueError("index out of range for the requested vector length")
    return tuple(digits)


def all_vectors(field: FieldSpec, n: int) -> Iterable[tuple[int, ...]]:
    """Every vector of GF(q)^n in the base-q integer order, zero first."""
    for combo in itertools.product(field.elements(), repeat=n):
        yield tuple(reversed(combo))
