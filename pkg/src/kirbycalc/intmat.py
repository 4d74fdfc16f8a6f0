"""Exact linear algebra over the integers.

Everything downstream (homology of handlebodies, bilinear form algebra,
cobordism bookkeeping) reduces to four primitives implemented here:
Smith normal form with recorded unimodular transforms, saturated integer
kernels, cokernels presented as finitely generated abelian groups, and
exact determinants via fraction-free elimination.

All entries are plain Python integers; they may grow without bound
during elimination and nothing here ever truncates.  Matrices are
immutable values, so every function is safe under concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError


@dataclass(frozen=True)
class IntMatrix:
    """An immutable integer matrix stored as a tuple of row tuples."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DimensionError("ragged rows")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def from_rows(cls, rows, cols=None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if not rows and cols is not None:
            # 0 x cols matrix: keep the column count recoverable
            m = cls(())
            object.__setattr__(m, "_empty_cols", int(cols))
            return m
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        m = cls(tuple(tuple(0 for _ in range(c)) for _ in range(r)))
        if r == 0:
            object.__setattr__(m, "_empty_cols", int(c))
        return m

    def _ccols(self) -> int:
        # column count that survives r == 0
        if self.entries:
            return len(self.entries[0])
        return getattr(self, "_empty_cols", 0)

    def shape(self):
        return (self.rows, self._ccols())

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        r, c = self.shape()
        return IntMatrix.from_rows(
            [[self.entries[i][j] for i in range(r)] for j in range(c)], cols=r
        )

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        r1, c1 = self.shape()
        r2, c2 = other.shape()
        if c1 != r2:
            raise DimensionError(f"cannot multiply {r1}x{c1} by {r2}x{c2}")
        out = []
        for i in range(r1):
            row = self.entries[i]
            out.append(
                [sum(row[k] * other.entries[k][j] for k in range(c1)) for j in range(c2)]
            )
        return IntMatrix.from_rows(out, cols=c2)

    def apply(self, vec):
        """Matrix-vector product, returned as a tuple."""
        r, c = self.shape()
        if len(vec) != c:
            raise DimensionError(f"vector of length {len(vec)} against {r}x{c}")
        return tuple(sum(self.entries[i][k] * vec[k] for k in range(c)) for i in range(r))

    def is_square(self) -> bool:
        r, c = self.shape()
        return r == c

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        n = self.rows
        return all(
            self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i)
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def equals(self, other: "IntMatrix") -> bool:
        return self.shape() == other.shape() and self.entries == other.entries

    def submatrix(self, row_idx, col_idx) -> "IntMatrix":
        row_idx = list(row_idx)
        col_idx = list(col_idx)
        return IntMatrix.from_rows(
            [[self.entries[i][j] for j in col_idx] for i in row_idx], cols=len(col_idx)
        )


def block_diag(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    ra, ca = a.shape()
    rb, cb = b.shape()
    rows = []
    for i in range(ra):
        rows.append(list(a.entries[i]) + [0] * cb)
    for i in range(rb):
        rows.append([0] * ca + list(b.entries[i]))
    return IntMatrix.from_rows(rows, cols=ca + cb)


def block2x2(a: IntMatrix, b: IntMatrix, c: IntMatrix, d: IntMatrix) -> IntMatrix:
    """Assemble [[a, b], [c, d]]; shapes must be consistent."""
    ra, ca = a.shape()
    rb, cb = b.shape()
    rc, cc = c.shape()
    rd, cd = d.shape()
    if ra != rb or rc != rd or ca != cc or cb != cd:
        raise DimensionError("inconsistent block shapes")
    rows = []
    for i in range(ra):
        rows.append(list(a.entries[i]) + list(b.entries[i]))
    for i in range(rc):
        rows.append(list(c.entries[i]) + list(d.entries[i]))
    return IntMatrix.from_rows(rows, cols=ca + cb)


@dataclass(frozen=True)
class SmithDecomposition:
    """U * M * V = D with U, V unimodular and D the Smith diagonal of M."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    def diagonal(self):
        r, c = self.d.shape()
        return tuple(self.d.entries[i][i] for i in range(min(r, c)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal() if x != 0)


@dataclass(frozen=True)
class FgAbelianGroup:
    """Canonical form of a finitely generated abelian group.

    torsion_divisors is the invariant-factor chain: each divisor is at
    least 2 and divides the next one.
    """

    free_rank: int
    torsion_divisors: tuple

    def __post_init__(self):
        object.__setattr__(self, "torsion_divisors", tuple(int(d) for d in self.torsion_divisors))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        ds = self.torsion_divisors
        for d in ds:
            if d < 2:
                raise ValueError(f"torsion divisor {d} < 2")
        for a, b in zip(ds, ds[1:]):
            if b % a != 0:
                raise ValueError(f"divisor chain broken: {a} does not divide {b}")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion_divisors

    @property
    def torsion_order(self) -> int:
        n = 1
        for d in self.torsion_divisors:
            n *= d
        return n

    @classmethod
    def trivial(cls) -> "FgAbelianGroup":
        return cls(0, ())

    @classmethod
    def from_orders(cls, orders) -> "FgAbelianGroup":
        """Canonicalize a list of generator orders (0 meaning infinite)."""
        free = sum(1 for t in orders if t == 0)
        tors = [t for t in orders if t != 0]
        if any(t < 2 for t in tors):
            raise ValueError("generator orders must be 0 or >= 2")
        if not tors:
            return cls(free, ())
        diag = IntMatrix.from_rows(
            [[tors[i] if i == j else 0 for j in range(len(tors))] for i in range(len(tors))]
        )
        inner = cokernel(diag)
        return cls(free + inner.free_rank, inner.torsion_divisors)

    def direct_sum(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        return FgAbelianGroup.from_orders(
            [0] * (self.free_rank + other.free_rank)
            + list(self.torsion_divisors)
            + list(other.torsion_divisors)
        )

    def __str__(self):
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion_divisors)
        return " + ".join(parts)


def _swap_rows(a, u, i, j):
    a[i], a[j] = a[j], a[i]
    u[i], u[j] = u[j], u[i]


def _swap_cols(a, v, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in v:
        row[i], row[j] = row[j], row[i]


def _row_sub(a, u, i, j, q):
    # row_i -= q * row_j
    ai, aj = a[i], a[j]
    for k in range(len(ai)):
        ai[k] -= q * aj[k]
    ui, uj = u[i], u[j]
    for k in range(len(ui)):
        ui[k] -= q * uj[k]


def _col_sub(a, v, i, j, q):
    # col_i -= q * col_j
    for row in a:
        row[i] -= q * row[j]
    for row in v:
        row[i] -= q * row[j]


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    """Diagonalize m by unimodular row and column operations.

    Returns U, D, V with U*m*V = D, |det U| = |det V| = 1, the diagonal
    of D non-negative and each entry dividing the next.  The classical
    pivot-improvement algorithm: entry growth is unbounded but exact.
    """
    rows, cols = m.shape()
    a = [list(r) for r in m.entries]
    u = [list(r) for r in IntMatrix.identity(rows).entries]
    v = [list(r) for r in IntMatrix.identity(cols).entries]

    t = 0
    while t < min(rows, cols):
        # locate the smallest nonzero entry of the trailing submatrix
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        _swap_rows(a, u, t, piv[0])
        _swap_cols(a, v, t, piv[1])

        while True:
            restart = False
            # clear the pivot column; a nonzero remainder becomes the new,
            # strictly smaller pivot
            for i in range(t + 1, rows):
                if a[i][t] == 0:
                    continue
                q, r = divmod(a[i][t], a[t][t])
                _row_sub(a, u, i, t, q)
                if r != 0:
                    _swap_rows(a, u, t, i)
                    restart = True
                    break
            if restart:
                continue
            # clear the pivot row
            for j in range(t + 1, cols):
                if a[t][j] == 0:
                    continue
                q, r = divmod(a[t][j], a[t][t])
                _col_sub(a, v, j, t, q)
                if r != 0:
                    _swap_cols(a, v, t, j)
                    restart = True
                    break
            if restart:
                continue
            # force the divisibility chain: fold any offending row into the
            # pivot row and keep reducing
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _row_sub(a, u, t, offender, -1)
        t += 1

    # normalize diagonal signs into U
    for i in range(min(rows, cols)):
        if a[i][i] < 0:
            for k in range(cols):
                a[i][k] = -a[i][k]
            for k in range(rows):
                u[i][k] = -u[i][k]

    return SmithDecomposition(
        u=IntMatrix.from_rows(u, cols=rows),
        d=IntMatrix.from_rows(a, cols=cols),
        v=IntMatrix.from_rows(v, cols=cols),
    )


def cokernel(m: IntMatrix) -> FgAbelianGroup:
    """The quotient of the row space Z^rows by the column images of m."""
    snf = smith_normal_form(m)
    diag = snf.diagonal()
    rank = sum(1 for d in diag if d != 0)
    torsion = tuple(d for d in diag if d > 1)
    return FgAbelianGroup(free_rank=m.shape()[0] - rank, torsion_divisors=torsion)


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """A saturated basis of the integer kernel lattice {v : m v = 0}.

    The basis consists of the trailing columns of the Smith V transform,
    so it extends to a basis of the full lattice (primitivity comes for
    free from unimodularity of V).  Returned as a cols x (cols - rank)
    matrix whose columns are the basis vectors.
    """
    rows, cols = m.shape()
    snf = smith_normal_form(m)
    rank = snf.rank
    return snf.v.submatrix(range(cols), range(rank, cols))


def determinant(m: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    r, c = m.shape()
    if r != c:
        raise DimensionError(f"determinant of non-square {r}x{c} matrix")
    n = r
    if n == 0:
        return 1
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m: IntMatrix) -> bool:
    return m.is_square() and abs(determinant(m)) == 1


def signature(q: IntMatrix):
    """Signature data of a symmetric integer matrix.

    Returns (positives, negatives, zeros) of a rational congruent
    diagonalization; the signature is positives - negatives.  Exact via
    Fraction arithmetic.
    """
    if not q.is_symmetric():
        raise DimensionError("signature needs a symmetric matrix")
    n = q.rows
    a = [[Fraction(x) for x in row] for row in q.entries]
    pos = neg = zero = 0
    k = 0
    while k < n:
        if a[k][k] == 0:
            # try to bring a nonzero diagonal entry up
            swapped = False
            for j in range(k + 1, n):
                if a[j][j] != 0:
                    a[k], a[j] = a[j], a[k]
                    for row in a:
                        row[k], row[j] = row[j], row[k]
                    swapped = True
                    break
            if not swapped:
                # all remaining diagonal zero: use an off-diagonal entry
                found = None
                for j in range(k + 1, n):
                    if a[k][j] != 0:
                        found = j
                        break
                if found is None:
                    zero += 1
                    k += 1
                    continue
                for idx in range(n):
                    a[k][idx] += a[found][idx]
                for row in a:
                    row[k] += row[found]
        pivot = a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] / pivot
                for j in range(n):
                    a[i][j] -= f * a[k][j]
        # matching column clearing keeps the transform a congruence
        for j in range(k + 1, n):
            if a[k][j] != 0:
                f = a[k][j] / pivot
                for i in range(n):
                    a[i][j] -= f * a[i][k]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        k += 1
    return (pos, neg, zero)


def solve_integer(a: IntMatrix, b):
    """One integer solution x of a x = b, or None when none exists."""
    rows, cols = a.shape()
    if len(b) != rows:
        raise DimensionError("right-hand side length mismatch")
    snf = smith_normal_form(a)
    ub = snf.u.apply(tuple(b))
    diag = snf.diagonal()
    y = [0] * cols
    for i in range(rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            q, r = divmod(ub[i], d)
            if r != 0:
                return None
            if i < cols:
                y[i] = q
    return snf.v.apply(tuple(y))
