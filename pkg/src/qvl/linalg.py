"""Exact scalar fields (F_p and Q) and dense matrix algebra.

Scalars are plain Python values: ints in ``[0, p)`` for a prime field,
``fractions.Fraction`` for the rationals.  A field object mediates all
arithmetic, so matrices never touch floating point.  Row reduction always
picks the first nonzero entry in column order, which makes ranks, kernels
and inverses reproducible bit for bit.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence, Union

Scalar = Union[int, Fraction]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """Arithmetic in F_p for a prime p < 2**31, values reduced to [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise ValueError(f"field order must be prime, got {p!r}")
        if p >= 2**31:
            raise ValueError(f"field order too large: {p}")
        self.p = p

    zero = 0
    one = 1

    @property
    def characteristic(self) -> int:
        return self.p

    def coerce(self, x) -> int:
        """Map an int, Fraction, or 'a/b' string into the field."""
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(
                    f"denominator {x.denominator} vanishes in F_{self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 is not invertible in F_{self.p}")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F{self.p}"


class RationalField:
    """Exact rational arithmetic via fractions.Fraction."""

    zero = Fraction(0)
    one = Fraction(1)

    @property
    def characteristic(self) -> int:
        return 0

    def coerce(self, x) -> Fraction:
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 is not invertible in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / Fraction(b)

    def elements(self):
        raise TypeError("Q is infinite; cannot enumerate its elements")

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")

    def __repr__(self):
        return "Q"


QQ = RationalField()

Field = Union[PrimeField, RationalField]


def GF(p: int) -> PrimeField:
    return PrimeField(p)


class Matrix:
    """Immutable dense matrix over an exact field.

    Zero-by-n and n-by-zero matrices are legal and behave as empty maps;
    products with them produce zero matrices of the right shape.
    """

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, nrows: int, ncols: int,
                 rows: Sequence[Sequence[Scalar]] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            z = field.zero
            self.rows = tuple(tuple(z for _ in range(ncols)) for _ in range(nrows))
        else:
            if len(rows) != nrows or any(len(r) != ncols for r in rows):
                raise ValueError(
                    f"expected {nrows}x{ncols} data, got "
                    f"{len(rows)}x{[len(r) for r in rows]}")
            self.rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[Scalar]],
                  ncols: int | None = None) -> "Matrix":
        nrows = len(rows)
        if nrows == 0:
            if ncols is None:
                raise ValueError("empty matrix needs an explicit column count")
            return cls(field, 0, ncols)
        return cls(field, nrows, len(rows[0]), rows)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one, zero = field.one, field.zero
        return cls(field, n, n,
                   [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, field: Field, entries: Sequence[Scalar]) -> "Matrix":
        return cls(field, len(entries), 1, [[x] for x in entries])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx: tuple[int, int]) -> Scalar:
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.field == self.field
                and other.shape == self.shape and other.rows == self.rows)

    def __hash__(self):
        return hash((self.field, self.nrows, self.ncols, self.rows))

    def __repr__(self):
        if self.nrows == 0 or self.ncols == 0:
            return f"Matrix({self.field}, {self.nrows}x{self.ncols})"
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"Matrix({self.field}, [{body}])"

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for row in self.rows for x in row)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        add = self.field.add
        return Matrix(self.field, self.nrows, self.ncols,
                      [[add(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        sub = self.field.sub
        return Matrix(self.field, self.nrows, self.ncols,
                      [[sub(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.nrows, self.ncols,
                      [[neg(a) for a in row] for row in self.rows])

    def scale(self, c: Scalar) -> "Matrix":
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix(self.field, self.nrows, self.ncols,
                      [[mul(c, a) for a in row] for row in self.rows])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise ValueError("matrix product over mismatched fields")
        if self.ncols != other.nrows:
            raise ValueError(
                f"shape mismatch: {self.shape} @ {other.shape}")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    acc = add(acc, mul(a, b))
                out_row.append(acc)
            out.append(out_row)
        return Matrix(f, self.nrows, other.ncols, out)

    def __pow__(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("matrix power needs a square matrix")
        if k < 0:
            raise ValueError("negative matrix powers are not supported")
        result = Matrix.identity(self.field, self.nrows)
        for _ in range(k):
            result = result @ self
        return result

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows,
                      list(zip(*self.rows)) if self.nrows else
                      [[] for _ in range(self.ncols)])

    def apply(self, vec: Sequence[Scalar]) -> tuple:
        """Matrix times column vector, returned as a tuple."""
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match column count")
        f = self.field
        add, mul = f.add, f.mul
        out = []
        for row in self.rows:
            acc = f.zero
            for a, v in zip(row, vec):
                acc = add(acc, mul(a, v))
            out.append(acc)
        return tuple(out)

    def _check_same_shape(self, other: "Matrix"):
        if self.field != other.field or self.shape != other.shape:
            raise ValueError(
                f"shape/field mismatch: {self.shape} vs {other.shape}")

    # --- row reduction -------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and its pivot columns.

        Pivots are the first nonzero entry of each column in row order, so
        the result is deterministic for identical input.
        """
        f = self.field
        rows = [list(r) for r in self.rows]
        zero = f.zero
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            pivot_row = None
            for i in range(r, self.nrows):
                if rows[i][c] != zero:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            inv = f.inv(rows[r][c])
            rows[r] = [f.mul(inv, x) for x in rows[r]]
            for i in range(self.nrows):
                if i != r and rows[i][c] != zero:
                    factor = rows[i][c]
                    rows[i] = [f.sub(x, f.mul(factor, y))
                               for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return Matrix(f, self.nrows, self.ncols, rows), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list[tuple]:
        """Deterministic basis of the right kernel {v : Mv = 0}.

        Each free column yields one basis vector whose free coordinate is 1
        and whose remaining free coordinates are 0.
        """
        f = self.field
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [f.zero] * self.ncols
            v[fc] = f.one
            for i, pc in enumerate(pivots):
                v[pc] = f.neg(red.rows[i][fc])
            basis.append(tuple(v))
        return basis

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("only square matrices can be inverted")
        n = self.nrows
        aug = hstack(self, Matrix.identity(self.field, n))
        red, pivots = aug.rref()
        if tuple(pivots[:n]) != tuple(range(n)) or len(pivots) < n:
            raise ZeroDivisionError("matrix is singular")
        return Matrix(self.field, n, n, [row[n:] for row in red.rows])

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows


def hstack(*mats: Matrix) -> Matrix:
    if not mats:
        raise ValueError("hstack needs at least one matrix")
    field, nrows = mats[0].field, mats[0].nrows
    if any(m.nrows != nrows or m.field != field for m in mats):
        raise ValueError("hstack: row counts or fields differ")
    ncols = sum(m.ncols for m in mats)
    rows = [sum((tuple(m.rows[i]) for m in mats), ()) for i in range(nrows)]
    return Matrix(field, nrows, ncols, rows)


def vstack(*mats: Matrix) -> Matrix:
    if not mats:
        raise ValueError("vstack needs at least one matrix")
    field, ncols = mats[0].field, mats[0].ncols
    if any(m.ncols != ncols or m.field != field for m in mats):
        raise ValueError("vstack: column counts or fields differ")
    rows = [row for m in mats for row in m.rows]
    return Matrix(field, len(rows), ncols, rows)


def block2x2(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Matrix:
    """[[a, b], [c, d]] with shape checks; blocks may have zero dimensions."""
    return vstack(hstack(a, b), hstack(c, d))


# --- seeded sample generators (used by demos and the test suite) -------


def random_matrix(field: Field, nrows: int, ncols: int,
                  rng: random.Random) -> Matrix:
    if isinstance(field, PrimeField):
        pick = lambda: rng.randrange(field.p)
    else:
        pick = lambda: Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return Matrix(field, nrows, ncols,
                  [[pick() for _ in range(ncols)] for _ in range(nrows)])


def random_invertible(field: Field, n: int, rng: random.Random) -> Matrix:
    """Seeded invertible matrix: product of random unit triangulars."""
    if n == 0:
        return Matrix(field, 0, 0)
    lower = [[field.one if i == j else
              (random_matrix(field, 1, 1, rng)[0, 0] if i > j else field.zero)
              for j in range(n)] for i in range(n)]
    upper = [[field.one if i == j else
              (random_matrix(field, 1, 1, rng)[0, 0] if i < j else field.zero)
              for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    p = Matrix(field, n, n,
               [[field.one if j == perm[i] else field.zero for j in range(n)]
                for i in range(n)])
    return Matrix(field, n, n, lower) @ Matrix(field, n, n, upper) @ p


def random_nilpotent(field: Field, n: int, order: int,
                     rng: random.Random) -> Matrix:
    """Seeded n-by-n matrix with M**order == 0, via conjugated Jordan blocks."""
    if order < 1:
        raise ValueError("nilpotency order must be positive")
    if n == 0:
        return Matrix(field, 0, 0)
    sizes = []
    remaining = n
    while remaining > 0:
        s = rng.randint(1, min(order, remaining))
        sizes.append(s)
        remaining -= s
    m = Matrix.zeros(field, n, n)
    rows = [list(r) for r in m.rows]
    offset = 0
    for s in sizes:
        for i in range(s - 1):
            rows[offset + i][offset + i + 1] = field.one
        offset += s
    jordan = Matrix(field, n, n, rows)
    g = random_invertible(field, n, rng)
    return g @ jordan @ g.inverse()
