"""Exact integer linear algebra on arbitrary-precision matrices.

Provides Hermite and Smith normal forms, integer linear solving, column
lattice arithmetic, and finitely generated abelian groups in canonical
form (free rank plus a divisor chain).  Everything is exact: entries are
Python ints, so no overflow is possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable integer matrix with explicit row and column counts.

    Zero-dimensional shapes (0 x n, n x 0) are legal and behave like the
    corresponding linear maps between trivial groups.
    """

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
            if cols is not None and cols != width:
                raise ValueError("cols does not match row width")
            cols = width
        elif cols is None:
            raise ValueError("cols is required for a matrix with no rows")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_e", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> "IntMatrix":
        values = list(values)
        r = len(values) if rows is None else rows
        c = len(values) if cols is None else cols
        if len(values) > min(r, c):
            raise ValueError("too many diagonal values")
        return cls([[values[i] if i == j and i < len(values) else 0
                     for j in range(c)] for i in range(r)], cols=c)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        for col in columns:
            if len(col) != rows:
                raise ValueError("column length does not match row count")
        return cls([[col[i] for col in columns] for i in range(rows)],
                   cols=len(columns))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self._e[i][j]

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix) and self.cols == other.cols
                and self._e == other._e)

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._e]!r}, cols={self.cols})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ "
                             f"{other.rows}x{other.cols}")
        oc = other.cols
        return IntMatrix(
            [[sum(self._e[i][k] * other._e[k][j] for k in range(self.cols))
              for j in range(oc)] for i in range(self.rows)],
            cols=oc)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-x for x in row] for row in self._e], cols=self.cols)

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(row[j] * vector[j] for j in range(self.cols))
                     for row in self._e)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self._e[i][j] for i in range(self.rows)]
                          for j in range(self.cols)], cols=self.rows)

    def row(self, i: int) -> tuple[int, ...]:
        return self._e[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self._e[i][j] for i in range(self.rows))

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def to_rows(self) -> list[list[int]]:
        return [list(r) for r in self._e]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._e for x in row)


def hstack(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.rows != b.rows:
        raise ValueError("row counts differ")
    return IntMatrix([list(a.row(i)) + list(b.row(i)) for i in range(a.rows)],
                     cols=a.cols + b.cols)


def vstack(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.cols != b.cols:
        raise ValueError("column counts differ")
    return IntMatrix(a.to_rows() + b.to_rows(), cols=a.cols)


def block_diag(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    top = [list(r) + [0] * b.cols for r in a.to_rows()]
    bottom = [[0] * a.cols + list(r) for r in b.to_rows()]
    return IntMatrix(top + bottom, cols=a.cols + b.cols)


def _addmul_row(m: list[list[int]], dst: int, src: int, factor: int) -> None:
    if factor:
        row_s = m[src]
        row_d = m[dst]
        for j in range(len(row_d)):
            row_d[j] += factor * row_s[j]


def _addmul_col(m: list[list[int]], dst: int, src: int, factor: int) -> None:
    if factor:
        for row in m:
            row[dst] += factor * row[src]


def hnf(a: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns (H, U) with U unimodular and U @ a == H, where H is in row
    echelon form with positive pivots and every entry above a pivot
    reduced into [0, pivot).
    """
    m, n = a.rows, a.cols
    h = a.to_rows()
    u = IntMatrix.identity(m).to_rows()
    r = 0
    for c in range(n):
        if r == m:
            break
        if all(h[i][c] == 0 for i in range(r, m)):
            continue
        while True:
            i0 = min((i for i in range(r, m) if h[i][c] != 0),
                     key=lambda i: abs(h[i][c]))
            if i0 != r:
                h[r], h[i0] = h[i0], h[r]
                u[r], u[i0] = u[i0], u[r]
            clean = True
            for i in range(r + 1, m):
                if h[i][c]:
                    q = h[i][c] // h[r][c]
                    _addmul_row(h, i, r, -q)
                    _addmul_row(u, i, r, -q)
                    if h[i][c]:
                        clean = False
            if clean:
                break
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            _addmul_row(h, i, r, -q)
            _addmul_row(u, i, r, -q)
        r += 1
    return IntMatrix(h, cols=n), IntMatrix(u, cols=m)


def snf(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form.

    Returns (S, U, V) with U, V unimodular and U @ a @ V == S diagonal,
    non-negative, each diagonal entry dividing the next.  Pivots are
    chosen with minimal absolute value to limit coefficient growth.
    """
    m, n = a.rows, a.cols
    s = a.to_rows()
    u = IntMatrix.identity(m).to_rows()
    v = IntMatrix.identity(n).to_rows()
    t = 0
    while t < min(m, n):
        best = None
        pos = None
        for i in range(t, m):
            for j in range(t, n):
                x = s[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pos = (i, j)
        if pos is None:
            break
        i0, j0 = pos
        if i0 != t:
            s[t], s[i0] = s[i0], s[t]
            u[t], u[i0] = u[i0], u[t]
        if j0 != t:
            _swap_cols(s, t, j0)
            _swap_cols(v, t, j0)
        while True:
            # clear column t below the pivot by gcd row reduction
            while True:
                for i in range(t + 1, m):
                    if s[i][t]:
                        q = s[i][t] // s[t][t]
                        _addmul_row(s, i, t, -q)
                        _addmul_row(u, i, t, -q)
                nz = [i for i in range(t + 1, m) if s[i][t]]
                if not nz:
                    break
                i0 = min([t] + nz, key=lambda i: abs(s[i][t]))
                if i0 != t:
                    s[t], s[i0] = s[i0], s[t]
                    u[t], u[i0] = u[i0], u[t]
            # clear row t to the right of the pivot by gcd column reduction
            for j in range(t + 1, n):
                if s[t][j]:
                    q = s[t][j] // s[t][t]
                    _addmul_col(s, j, t, -q)
                    _addmul_col(v, j, t, -q)
            nz = [j for j in range(t + 1, n) if s[t][j]]
            if nz:
                j0 = min(nz, key=lambda j: abs(s[t][j]))
                _swap_cols(s, t, j0)
                _swap_cols(v, t, j0)
                continue
            # pivot must divide the whole trailing submatrix
            bad = None
            for i in range(t + 1, m):
                if any(s[i][j] % s[t][t] for j in range(t + 1, n)):
                    bad = i
                    break
            if bad is None:
                break
            _addmul_row(s, t, bad, 1)
            _addmul_row(u, t, bad, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return IntMatrix(s, cols=n), IntMatrix(u, cols=m), IntMatrix(v, cols=n)


def _swap_cols(m: list[list[int]], a: int, b: int) -> None:
    for row in m:
        row[a], row[b] = row[b], row[a]


def smith_diagonal(a: IntMatrix) -> list[int]:
    s, _, _ = snf(a)
    return [s[i, i] for i in range(min(a.rows, a.cols))]


def det(a: IntMatrix) -> int:
    """Exact determinant via fraction-free Bareiss elimination."""
    if a.rows != a.cols:
        raise ValueError("determinant requires a square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k]), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_rank(a: IntMatrix) -> int:
    """Rank over the rationals, by integer cross-multiplication elimination.

    Deliberately independent of snf so it can serve as an oracle for it.
    """
    m = a.to_rows()
    rank = 0
    for c in range(a.cols):
        piv = next((i for i in range(rank, a.rows) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, a.rows):
            if m[i][c]:
                f_r, f_i = m[rank][c], m[i][c]
                m[i] = [f_r * m[i][j] - f_i * m[rank][j] for j in range(a.cols)]
        rank += 1
        if rank == a.rows:
            break
    return rank


def _echelon_solve(ht: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """Solve B y = b where B = ht.transpose() is in column echelon form."""
    residual = list(b)
    y = [0] * ht.rows
    for k in range(ht.rows):
        pivot_row = next((j for j in range(ht.cols) if ht[k, j] != 0), None)
        if pivot_row is None:
            break
        pivot = ht[k, pivot_row]
        if residual[pivot_row] % pivot:
            return None
        q = residual[pivot_row] // pivot
        if q:
            y[k] = q
            for i in range(len(residual)):
                residual[i] -= q * ht[k, i]
    if any(residual):
        return None
    return y


def solve_linear(a: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """Deterministic integer solution of a @ x == b, or None.

    The solution is the unique one supported on the pivot columns of the
    column Hermite form of a (HNF back-substitution).
    """
    if len(b) != a.rows:
        raise ValueError("right hand side length does not match row count")
    ht, w = hnf(a.transpose())
    y = _echelon_solve(ht, b)
    if y is None:
        return None
    return tuple(sum(w[k, i] * y[k] for k in range(a.cols))
                 for i in range(a.cols))


def subgroup_contains(gens_a: IntMatrix, gens_b: IntMatrix) -> bool:
    """True iff the column lattice of gens_b lies inside that of gens_a."""
    if gens_a.rows != gens_b.rows:
        raise ValueError("ambient ranks differ")
    ht, _ = hnf(gens_a.transpose())
    return all(_echelon_solve(ht, gens_b.column(j)) is not None
               for j in range(gens_b.cols))


def lattice_hnf(a: IntMatrix) -> IntMatrix:
    """Canonical basis of the column lattice of a.

    Rows of the result are an echelon basis; two matrices span the same
    column lattice iff their lattice_hnf values are equal.
    """
    h, _ = hnf(a.transpose())
    basis = [list(h.row(i)) for i in range(h.rows) if any(h.row(i))]
    return IntMatrix(basis, cols=a.rows)


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Matrix whose columns are a lattice basis of the integer kernel of a."""
    s, _, v = snf(a)
    k = min(a.rows, a.cols)
    free = [j for j in range(a.cols) if j >= k or s[j, j] == 0]
    return IntMatrix.from_columns([v.column(j) for j in free], rows=a.cols)


def unimodular_inverse(a: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix."""
    h, u = hnf(a)
    if h != IntMatrix.identity(a.rows) or a.rows != a.cols:
        raise ValueError("matrix is not unimodular")
    return u


@dataclass(frozen=True)
class FgAbGroup:
    """Finitely generated abelian group in canonical form.

    rank counts the free summands; torsion is the divisor chain
    d1 | d2 | ... with every di >= 2.  Two values are isomorphic as
    groups iff they are equal as dataclasses.
    """

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError("torsion divisors must be at least 2")
            if i and self.torsion[i] % self.torsion[i - 1]:
                raise ValueError("torsion must form a divisor chain")

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls(0, ())

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls(rank, ())

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        if n < 1:
            raise ValueError("cyclic order must be positive")
        return cls(0, ()) if n == 1 else cls(0, (n,))

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def direct_sum(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup(self.rank + other.rank,
                         invariant_factors(self.torsion + other.torsion))

    def tensor(self, other: "FgAbGroup") -> "FgAbGroup":
        """Tensor product over the integers, in closed form."""
        parts = list(self.torsion) * other.rank
        parts += list(other.torsion) * self.rank
        parts += [gcd(d, e) for d in self.torsion for e in other.torsion]
        return FgAbGroup(self.rank * other.rank,
                         invariant_factors(p for p in parts if p > 1))

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def invariant_factors(values: Iterable[int]) -> tuple[int, ...]:
    """Canonical divisor chain of a direct sum of cyclic groups.

    values are finite cyclic orders (>= 1); factors equal to 1 vanish.
    """
    values = [int(v) for v in values]
    if any(v < 1 for v in values):
        raise ValueError("cyclic orders must be positive")
    values = [v for v in values if v > 1]
    if not values:
        return ()
    group = cokernel_group(IntMatrix.diagonal(values))
    return group.torsion


def cokernel_group(a: IntMatrix) -> FgAbGroup:
    """Z^rows modulo the column span of a, in canonical form."""
    diag = smith_diagonal(a)
    nonzero = [d for d in diag if d != 0]
    return FgAbGroup(a.rows - len(nonzero),
                     tuple(d for d in nonzero if d >= 2))


@dataclass(frozen=True)
class AbPresentation:
    """Abelian group presented by generators and relator columns."""

    gens: int
    rels: IntMatrix

    def __post_init__(self):
        if self.rels.rows != self.gens:
            raise ValueError("relator rows must match generator count")

    @classmethod
    def free(cls, gens: int) -> "AbPresentation":
        return cls(gens, IntMatrix.zeros(gens, 0))

    def group(self) -> FgAbGroup:
        return cokernel_group(self.rels)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism between presented abelian groups.

    matrix sends source generator coordinates to target generator
    coordinates; well-definedness means every source relator lands in
    the target relator lattice.
    """

    source: AbPresentation
    target: AbPresentation
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.target.gens or self.matrix.cols != self.source.gens:
            raise ValueError("matrix shape does not match presentations")

    def is_well_defined(self) -> bool:
        for j in range(self.source.rels.cols):
            image = self.matrix.apply(self.source.rels.column(j))
            if solve_linear(self.target.rels, image) is None:
                return False
        return True
