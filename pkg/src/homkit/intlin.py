"""Exact linear algebra kernel: normal forms, solvers, lattice operations.

Matrices are immutable values over one of three ring tags: arbitrary
precision integers (ZZ), rationals (QQ), or a prime field (GF(p)).  All
higher modules reduce to the operations here; nothing in the package
touches floating point.

Over ZZ the column echelon and Smith routines delegate to the selected
reduction backend (compiled extension or its pure-Python twin); field
rings use a plain Gauss-Jordan echelon since division is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._backend import hnf_with_transform, matmul, snf_with_transforms


class ShapeError(ValueError):
    """Incompatible matrix dimensions or mixed ring tags."""


@dataclass(frozen=True)
class Ring:
    kind: str
    p: int | None = None

    def __repr__(self):
        if self.kind == "GF":
            return f"GF({self.p})"
        return self.kind

    @property
    def is_field(self):
        return self.kind != "ZZ"

    def normalize(self, x):
        if self.kind == "ZZ":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ShapeError(f"non-integer entry {x} in ZZ matrix")
                return int(x)
            return int(x)
        if self.kind == "QQ":
            return Fraction(x)
        return int(x) % self.p

    def zero(self):
        return Fraction(0) if self.kind == "QQ" else 0

    def one(self):
        return Fraction(1) if self.kind == "QQ" else 1

    def neg(self, x):
        if self.kind == "GF":
            return (-x) % self.p
        return -x

    def add(self, x, y):
        if self.kind == "GF":
            return (x + y) % self.p
        return x + y

    def mul(self, x, y):
        if self.kind == "GF":
            return (x * y) % self.p
        return x * y

    def inv(self, x):
        if self.kind == "QQ":
            return 1 / x
        if self.kind == "GF":
            return pow(x, self.p - 2, self.p)
        raise ShapeError("no division in ZZ")


ZZ = Ring("ZZ")
QQ = Ring("QQ")


def GF(p):
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"GF modulus must be prime, got {p}")
    return Ring("GF", p)


class Matrix:
    """Immutable rectangular matrix over a ring tag."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, rows, entries, cols=None, ring=ZZ):
        if isinstance(rows, (list, tuple)) and entries is None:
            raise ShapeError("use Matrix.from_rows")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    @staticmethod
    def from_rows(rows, ring=ZZ, cols=None):
        """Build from a list of row lists; cols is required when rows == []."""
        m = len(rows)
        if m:
            n = len(rows[0])
            if cols is not None and cols != n:
                raise ShapeError("cols disagrees with row length")
            if any(len(r) != n for r in rows):
                raise ShapeError("ragged rows")
        else:
            if cols is None:
                raise ShapeError("empty matrix needs explicit cols")
            n = cols
        ents = tuple(tuple(ring.normalize(x) for x in r) for r in rows)
        return Matrix(m, ents, n, ring)

    @staticmethod
    def identity(n, ring=ZZ):
        one, zero = ring.one(), ring.zero()
        ents = tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)
        )
        return Matrix(n, ents, n, ring)

    @staticmethod
    def zeros(m, n, ring=ZZ):
        zero = ring.zero()
        return Matrix(m, tuple((zero,) * n for _ in range(m)), n, ring)

    @staticmethod
    def column(values, ring=ZZ):
        return Matrix.from_rows([[v] for v in values], ring=ring, cols=1)

    @staticmethod
    def from_cols(cols, rows, ring=ZZ):
        """Build an (rows x len(cols)) matrix from column vectors."""
        return Matrix.from_rows(
            [[c[i] for c in cols] for i in range(rows)], ring=ring, cols=len(cols)
        )

    def to_lists(self):
        return [list(r) for r in self.entries]

    def col(self, j):
        return tuple(r[j] for r in self.entries)

    def column_matrix(self, j):
        return Matrix(self.rows, tuple((r[j],) for r in self.entries), 1, self.ring)

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    def transpose(self):
        ents = tuple(
            tuple(self.entries[i][j] for i in range(self.rows))
            for j in range(self.cols)
        )
        return Matrix(self.cols, ents, self.rows, self.ring)

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise ShapeError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_ring(other)
        if self.cols != other.rows:
            raise ShapeError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        if self.rows == 0 or other.cols == 0:
            return Matrix.zeros(self.rows, other.cols, self.ring)
        if self.cols == 0:
            return Matrix.zeros(self.rows, other.cols, self.ring)
        if self.ring == ZZ:
            prod = matmul(self.to_lists(), other.to_lists())
            return Matrix(self.rows, tuple(tuple(r) for r in prod), other.cols, self.ring)
        ring = self.ring
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = ring.zero()
                for t in range(self.cols):
                    acc = ring.add(acc, ring.mul(self.entries[i][t], other.entries[t][j]))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(self.rows, tuple(out), other.cols, ring)

    def __add__(self, other):
        self._check_ring(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in addition")
        ring = self.ring
        ents = tuple(
            tuple(ring.add(a, b) for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)
        )
        return Matrix(self.rows, ents, self.cols, ring)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        ring = self.ring
        ents = tuple(tuple(ring.neg(x) for x in r) for r in self.entries)
        return Matrix(self.rows, ents, self.cols, ring)

    def scale(self, c):
        ring = self.ring
        c = ring.normalize(c)
        ents = tuple(tuple(ring.mul(c, x) for x in r) for r in self.entries)
        return Matrix(self.rows, ents, self.cols, ring)

    def hstack(self, other):
        self._check_ring(other)
        if self.rows != other.rows:
            raise ShapeError("hstack needs equal row counts")
        ents = tuple(ra + rb for ra, rb in zip(self.entries, other.entries))
        return Matrix(self.rows, ents, self.cols + other.cols, self.ring)

    def vstack(self, other):
        self._check_ring(other)
        if self.cols != other.cols:
            raise ShapeError("vstack needs equal column counts")
        return Matrix(
            self.rows + other.rows, self.entries + other.entries, self.cols, self.ring
        )

    def take_rows(self, lo, hi):
        return Matrix(hi - lo, self.entries[lo:hi], self.cols, self.ring)

    def take_cols(self, lo, hi):
        ents = tuple(r[lo:hi] for r in self.entries)
        return Matrix(self.rows, ents, hi - lo, self.ring)

    def kron(self, other):
        """Kronecker product; vec(A X B) = kron(B.T, A) vec(X) column-major."""
        self._check_ring(other)
        ring = self.ring
        out = []
        for i1 in range(self.rows):
            for i2 in range(other.rows):
                row = []
                for j1 in range(self.cols):
                    a = self.entries[i1][j1]
                    for j2 in range(other.cols):
                        row.append(ring.mul(a, other.entries[i2][j2]))
                out.append(tuple(row))
        return Matrix(
            self.rows * other.rows, tuple(out), self.cols * other.cols, ring
        )

    def is_zero(self):
        zero = self.ring.zero()
        return all(x == zero for r in self.entries for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.ring}, {self.to_lists()})"


def vec(m: Matrix) -> Matrix:
    """Column-major vectorization."""
    vals = [m.entries[i][j] for j in range(m.cols) for i in range(m.rows)]
    return Matrix.column(vals, ring=m.ring)


def unvec(col: Matrix, rows, cols) -> Matrix:
    if col.rows != rows * cols or col.cols != 1:
        raise ShapeError("unvec size mismatch")
    ents = [[col.entries[j * rows + i][0] for j in range(cols)] for i in range(rows)]
    return Matrix.from_rows(ents, ring=col.ring, cols=cols)


@dataclass(frozen=True)
class SmithDecomposition:
    """U * M * V = D with D diagonal in a divisibility chain, U,V unimodular."""

    U: Matrix
    D: Matrix
    V: Matrix

    def diagonal(self):
        n = min(self.D.rows, self.D.cols)
        return tuple(self.D.entries[i][i] for i in range(n))


def _field_echelon(m: Matrix):
    """Column echelon with transform over QQ or GF(p); pivots scaled to 1."""
    ring = m.ring
    h = m.to_lists()
    rows, cols = m.rows, m.cols
    u = Matrix.identity(cols, ring).to_lists()
    zero = ring.zero()
    r = 0
    for i in range(rows):
        if r == cols:
            break
        piv = -1
        for j in range(r, cols):
            if h[i][j] != zero:
                piv = j
                break
        if piv < 0:
            continue
        if piv != r:
            for row in h:
                row[piv], row[r] = row[r], row[piv]
            for row in u:
                row[piv], row[r] = row[r], row[piv]
        inv = ring.inv(h[i][r])
        for t in range(rows):
            h[t][r] = ring.mul(h[t][r], inv)
        for t in range(cols):
            u[t][r] = ring.mul(u[t][r], inv)
        for j in range(cols):
            if j == r:
                continue
            c = h[i][j]
            if c != zero:
                for t in range(rows):
                    h[t][j] = ring.add(h[t][j], ring.neg(ring.mul(c, h[t][r])))
                for t in range(cols):
                    u[t][j] = ring.add(u[t][j], ring.neg(ring.mul(c, u[t][r])))
        r += 1
    return (
        Matrix.from_rows(h, ring=ring, cols=cols),
        Matrix.from_rows(u, ring=ring, cols=cols),
    )


def echelon(m: Matrix):
    """Column echelon form with transform: returns (H, U) with M*U = H.

    Over ZZ this is the column-style Hermite normal form.  Zero columns
    of H mark kernel directions; the corresponding columns of U form a
    basis of the kernel lattice (or nullspace).
    """
    if m.rows == 0 or m.cols == 0:
        return m, Matrix.identity(m.cols, m.ring)
    if m.ring == ZZ:
        h, u = hnf_with_transform(m.to_lists())
        return (
            Matrix.from_rows(h, ring=ZZ, cols=m.cols),
            Matrix.from_rows(u, ring=ZZ, cols=m.cols),
        )
    return _field_echelon(m)


def hnf(m: Matrix):
    """Alias for :func:`echelon` over ZZ (column-style Hermite form)."""
    if m.ring != ZZ:
        raise ShapeError("hnf requires the integer ring tag")
    return echelon(m)


def snf(m: Matrix) -> SmithDecomposition:
    """Smith normal form over ZZ; total on integer matrices."""
    if m.ring != ZZ:
        raise ShapeError("snf requires the integer ring tag")
    if m.rows == 0 or m.cols == 0:
        return SmithDecomposition(
            Matrix.identity(m.rows), m, Matrix.identity(m.cols)
        )
    u, d, v = snf_with_transforms(m.to_lists())
    return SmithDecomposition(
        Matrix.from_rows(u, ring=ZZ, cols=m.rows),
        Matrix.from_rows(d, ring=ZZ, cols=m.cols),
        Matrix.from_rows(v, ring=ZZ, cols=m.cols),
    )


def _pivot_positions(h: Matrix):
    """Pivot (row, col) pairs of a column echelon matrix."""
    zero = h.ring.zero()
    pivots = []
    for j in range(h.cols):
        row = -1
        for i in range(h.rows):
            if h.entries[i][j] != zero:
                row = i
                break
        if row < 0:
            break
        pivots.append((row, j))
    return pivots


def kernel_basis(m: Matrix) -> Matrix:
    """Basis of {x : M x = 0} as columns; saturated over ZZ."""
    if m.cols == 0:
        return Matrix.zeros(0, 0, m.ring)
    if m.rows == 0:
        return Matrix.identity(m.cols, m.ring)
    h, u = echelon(m)
    r = len(_pivot_positions(h))
    return u.take_cols(r, m.cols)


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_pivot_positions(echelon(m)[0]))


def solve_in_image(a: Matrix, b) -> Matrix | None:
    """Solve A x = b exactly; returns a witness column or None.

    Over ZZ the solution is searched in the column lattice of A; over a
    field in the column span.  b may be a Matrix column or a sequence.
    """
    if not isinstance(b, Matrix):
        b = Matrix.column(list(b), ring=a.ring)
    if b.cols != 1 or b.rows != a.rows:
        raise ShapeError(f"rhs must be a {a.rows}-row column")
    x = solve_matrix(a, b)
    return None if x is None else x


def solve_matrix(a: Matrix, b: Matrix) -> Matrix | None:
    """Solve A X = B columnwise; None when some column is unsolvable."""
    a._check_ring(b)
    if a.rows != b.rows:
        raise ShapeError("row count mismatch in solve")
    ring = a.ring
    if a.cols == 0:
        return Matrix.zeros(0, b.cols, ring) if b.is_zero() else None
    if a.rows == 0:
        return Matrix.zeros(a.cols, b.cols, ring)
    h, u = echelon(a)
    pivots = _pivot_positions(h)
    zero = ring.zero()
    ys = []
    for cidx in range(b.cols):
        target = [b.entries[i][cidx] for i in range(b.rows)]
        y = [zero] * a.cols
        for prow, pcol in pivots:
            acc = target[prow]
            for j in range(pcol):
                if y[j] != zero and h.entries[prow][j] != zero:
                    acc = ring.add(acc, ring.neg(ring.mul(h.entries[prow][j], y[j])))
            p = h.entries[prow][pcol]
            if ring == ZZ:
                q, rem = divmod(acc, p)
                if rem:
                    return None
                y[pcol] = q
            else:
                y[pcol] = ring.mul(acc, ring.inv(p))
        # verify on all rows; non-pivot rows carry the solvability test
        for i in range(a.rows):
            acc = zero
            for j in range(a.cols):
                if y[j] != zero:
                    acc = ring.add(acc, ring.mul(h.entries[i][j], y[j]))
            if acc != target[i]:
                return None
        ys.append(y)
    ymat = Matrix.from_rows(
        [[ys[c][j] for c in range(b.cols)] for j in range(a.cols)],
        ring=ring,
        cols=b.cols,
    )
    return u * ymat


def lattice_basis(m: Matrix) -> Matrix:
    """Canonical basis of the column lattice (or span): nonzero HNF columns."""
    h, _ = echelon(m)
    r = len(_pivot_positions(h))
    return h.take_cols(0, r)


def lattice_contains(l: Matrix, v) -> bool:
    return solve_in_image(l, v) is not None


def lattice_leq(l1: Matrix, l2: Matrix) -> bool:
    """colspan(l1) contained in colspan(l2)."""
    return solve_matrix(l2, l1) is not None


def lattice_eq(l1: Matrix, l2: Matrix) -> bool:
    return lattice_basis(l1) == lattice_basis(l2)


def lattice_sum(first: Matrix, *rest: Matrix) -> Matrix:
    acc = first
    for m in rest:
        acc = acc.hstack(m)
    return lattice_basis(acc)


def lattice_intersect(l1: Matrix, l2: Matrix) -> Matrix:
    """Basis of colspan(l1) intersect colspan(l2)."""
    if l1.cols == 0 or l2.cols == 0:
        return Matrix.zeros(l1.rows, 0, l1.ring)
    k = kernel_basis(l1.hstack(-l2))
    return lattice_basis(l1 * k.take_rows(0, l1.cols))


def saturate(l: Matrix) -> Matrix:
    """Smallest pure sublattice containing colspan(l): {x : n x in colspan}.

    Computed as a double integer kernel: kernels of integer matrices are
    saturated, and the kernel of the transposed kernel recovers the
    rational span intersected with the ambient lattice.
    """
    if l.ring != ZZ:
        raise ShapeError("saturate requires the integer ring tag")
    if l.cols == 0 or l.is_zero():
        return Matrix.zeros(l.rows, 0, ZZ)
    perp = kernel_basis(l.transpose())
    if perp.cols == 0:
        return Matrix.identity(l.rows)
    return lattice_basis(kernel_basis(perp.transpose()))


def invariant_factors(m: Matrix):
    """Positive Smith diagonal entries (1s included), in divisibility order."""
    return tuple(d for d in snf(m).diagonal() if d != 0)


def det(m: Matrix):
    """Exact determinant (square matrices); Fraction elimination."""
    if m.rows != m.cols:
        raise ShapeError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return m.ring.one() if m.ring != ZZ else 1
    ring = m.ring
    if ring.kind == "GF":
        a = m.to_lists()
        sign = 1
        acc = 1
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c]), -1)
            if piv < 0:
                return 0
            if piv != c:
                a[piv], a[c] = a[c], a[piv]
                sign = -sign
            acc = (acc * a[c][c]) % ring.p
            inv = ring.inv(a[c][c])
            for i in range(c + 1, n):
                f = (a[i][c] * inv) % ring.p
                if f:
                    for j in range(c, n):
                        a[i][j] = (a[i][j] - f * a[c][j]) % ring.p
        return (sign * acc) % ring.p
    a = [[Fraction(x) for x in row] for row in m.entries]
    sign = 1
    acc = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), -1)
        if piv < 0:
            return 0 if ring == ZZ else Fraction(0)
        if piv != c:
            a[piv], a[c] = a[c], a[piv]
            sign = -sign
        acc *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    val = sign * acc
    return int(val) if ring == ZZ else val
