"""Chain complexes of free abelian groups, with exact homology.

Homology is computed by two Smith normal forms per degree: one to find a
lattice basis of the cycles, one to diagonalize the boundaries inside
that basis.  Every result keeps its change-of-basis data, so cycles can
be expressed in canonical coordinates and induced maps never re-solve
from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .intlin import (
    AbPresentation,
    FgAbGroup,
    GroupHom,
    IntMatrix,
    hstack,
    rational_rank,
    snf,
    solve_linear,
    unimodular_inverse,
)


class ChainComplex:
    """Finite chain complex with labeled bases.

    basis[q] lists the degree-q cell labels; boundaries[q-1] is the
    matrix of the boundary map from degree q to degree q-1 (rows indexed
    by the lower basis).  Labels must be unique within each degree.
    """

    __slots__ = ("top_dim", "basis", "boundaries", "_index")

    def __init__(self, basis: Sequence[Sequence[str]],
                 boundaries: Sequence[IntMatrix]):
        basis = tuple(tuple(labels) for labels in basis)
        boundaries = tuple(boundaries)
        if not basis:
            raise ValueError("a complex needs at least degree 0")
        if len(boundaries) != len(basis) - 1:
            raise ValueError("need exactly one boundary matrix per degree pair")
        for q, mat in enumerate(boundaries, start=1):
            if mat.rows != len(basis[q - 1]) or mat.cols != len(basis[q]):
                raise ValueError(f"boundary shape mismatch at degree {q}")
        index: list[dict[str, int]] = []
        for q, labels in enumerate(basis):
            pos = {label: i for i, label in enumerate(labels)}
            if len(pos) != len(labels):
                raise ValueError(f"duplicate label in degree {q}")
            index.append(pos)
        object.__setattr__(self, "top_dim", len(basis) - 1)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "boundaries", boundaries)
        object.__setattr__(self, "_index", tuple(index))

    def __setattr__(self, name, value):
        raise AttributeError("ChainComplex is immutable")

    def dim(self, q: int) -> int:
        if 0 <= q <= self.top_dim:
            return len(self.basis[q])
        return 0

    def d(self, q: int) -> IntMatrix:
        """Boundary matrix from degree q to q-1, zero outside the range."""
        if 1 <= q <= self.top_dim:
            return self.boundaries[q - 1]
        return IntMatrix.zeros(self.dim(q - 1), self.dim(q))

    def position(self, q: int, label: str) -> int:
        return self._index[q][label]

    def labels(self) -> set[str]:
        return {label for labels in self.basis for label in labels}

    def vector(self, q: int, coefficients: dict[str, int]) -> tuple[int, ...]:
        """Coordinate vector of a formal sum of degree-q cells."""
        vec = [0] * self.dim(q)
        for label, coefficient in coefficients.items():
            vec[self.position(q, label)] += coefficient
        return tuple(vec)


def validate(c: ChainComplex) -> list[str]:
    """Check that consecutive boundaries compose to zero.

    Returns a list of violation descriptions, empty when the complex is
    valid.  Each entry names the degree and the offending basis pair.
    """
    problems = []
    for q in range(2, c.top_dim + 1):
        composite = c.d(q - 1) @ c.d(q)
        if not composite.is_zero():
            for j in range(composite.cols):
                for i in range(composite.rows):
                    if composite[i, j]:
                        problems.append(
                            f"degree {q}: boundary of boundary of "
                            f"{c.basis[q][j]} hits {c.basis[q - 2][i]} "
                            f"with coefficient {composite[i, j]}")
    return problems


@dataclass(frozen=True)
class DegreeHomology:
    """Homology of one degree, with generator cycles and coordinates.

    generators lists cycle vectors for the canonical summands, free
    summands first, then torsion summands in divisor order.  kernel
    holds a lattice basis of all cycles (the presentation generators);
    presentation presents the homology group on that basis.
    """

    group: FgAbGroup
    generators: tuple[tuple[int, ...], ...]
    presentation: AbPresentation | None
    kernel: IntMatrix | None
    _w: IntMatrix | None
    _zero_pos: tuple[int, ...]
    _ux: IntMatrix | None
    _diag: tuple[int, ...]
    _free_pos: tuple[int, ...]
    _tors_pos: tuple[int, ...]

    def kernel_coords(self, cycle: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of a cycle in the kernel lattice basis."""
        if self._w is None:
            raise ValueError("no integral cycle data (rational coefficients)")
        full = self._w.apply(cycle)
        zero_set = set(self._zero_pos)
        for i, value in enumerate(full):
            if value and i not in zero_set:
                raise ValueError("vector is not a cycle")
        return tuple(full[p] for p in self._zero_pos)

    def express(self, cycle: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of a cycle class.

        Free coordinates come first and are exact integers; torsion
        coordinates follow, reduced modulo their divisors.
        """
        y = self._ux.apply(self.kernel_coords(cycle))
        coords = [y[i] for i in self._free_pos]
        coords.extend(y[i] % self._diag[i] for i in self._tors_pos)
        return tuple(coords)


@dataclass(frozen=True)
class HomologyResult:
    """Per-degree homology of a chain complex."""

    coeff: str
    degrees: tuple[DegreeHomology, ...]

    @property
    def top_dim(self) -> int:
        return len(self.degrees) - 1

    def degree(self, q: int) -> DegreeHomology:
        return self.degrees[q]

    def group(self, q: int) -> FgAbGroup:
        if 0 <= q <= self.top_dim:
            return self.degrees[q].group
        return FgAbGroup.trivial()

    def groups(self) -> tuple[FgAbGroup, ...]:
        return tuple(d.group for d in self.degrees)


def homology(c: ChainComplex, coeff: str = "Z") -> HomologyResult:
    """Homology of a valid complex, over Z (default) or Q."""
    problems = validate(c)
    if problems:
        raise ValueError("invalid complex: " + "; ".join(problems))
    if coeff not in ("Z", "Q"):
        raise ValueError("coefficients must be 'Z' or 'Q'")
    if coeff == "Q":
        degrees = []
        for q in range(c.top_dim + 1):
            rank = c.dim(q) - rational_rank(c.d(q)) - rational_rank(c.d(q + 1))
            degrees.append(DegreeHomology(
                group=FgAbGroup.free(rank), generators=(), presentation=None,
                kernel=None, _w=None, _zero_pos=(), _ux=None, _diag=(),
                _free_pos=(), _tors_pos=()))
        return HomologyResult("Q", tuple(degrees))
    degrees = [_integral_degree(c, q) for q in range(c.top_dim + 1)]
    return HomologyResult("Z", tuple(degrees))


def _integral_degree(c: ChainComplex, q: int) -> DegreeHomology:
    dq = c.d(q)
    s, _, v = snf(dq)
    k = min(dq.rows, dq.cols)
    zero_pos = tuple(j for j in range(dq.cols) if j >= k or s[j, j] == 0)
    kernel = IntMatrix.from_columns([v.column(j) for j in zero_pos], rows=dq.cols)
    w = unimodular_inverse(v)
    zero_set = set(zero_pos)

    dq1 = c.d(q + 1)
    rel_cols = []
    for j in range(dq1.cols):
        full = w.apply(dq1.column(j))
        for i, value in enumerate(full):
            if value and i not in zero_set:
                raise ValueError("boundary image escapes the cycle lattice")
        rel_cols.append([full[p] for p in zero_pos])
    rels = IntMatrix.from_columns(rel_cols, rows=len(zero_pos))

    sx, ux, _ = snf(rels)
    kx = min(rels.rows, rels.cols)
    diag = tuple(sx[i, i] if i < kx else 0 for i in range(rels.rows))
    free_pos = tuple(i for i in range(rels.rows) if diag[i] == 0)
    tors_pos = tuple(i for i in range(rels.rows) if diag[i] >= 2)
    group = FgAbGroup(len(free_pos), tuple(diag[i] for i in tors_pos))

    gen_basis = kernel @ unimodular_inverse(ux)
    generators = tuple(gen_basis.column(i) for i in free_pos + tors_pos)
    return DegreeHomology(
        group=group, generators=generators,
        presentation=AbPresentation(len(zero_pos), rels),
        kernel=kernel, _w=w, _zero_pos=zero_pos, _ux=ux, _diag=diag,
        _free_pos=free_pos, _tors_pos=tors_pos)


def tensor(c: ChainComplex, d: ChainComplex) -> ChainComplex:
    """Tensor product complex, with the usual alternating sign.

    The boundary of a product cell is (boundary x) * y plus
    (-1)^(deg x) * x * (boundary y); labels are joined with '_x_'.
    """
    top = c.top_dim + d.top_dim
    layout: list[list[tuple[int, int, int, int]]] = []
    labels: list[list[str]] = []
    position: list[dict[tuple[int, int, int, int], int]] = []
    for k in range(top + 1):
        cells = []
        names = []
        for qc in range(min(k, c.top_dim) + 1):
            qd = k - qc
            if qd > d.top_dim:
                continue
            for i, la in enumerate(c.basis[qc]):
                for j, lb in enumerate(d.basis[qd]):
                    cells.append((qc, i, qd, j))
                    names.append(f"{la}_x_{lb}")
        layout.append(cells)
        labels.append(names)
        position.append({cell: n for n, cell in enumerate(cells)})

    boundaries = []
    for k in range(1, top + 1):
        rows = len(layout[k - 1])
        mat = [[0] * len(layout[k]) for _ in range(rows)]
        for col, (qc, i, qd, j) in enumerate(layout[k]):
            dc = c.d(qc)
            for r in range(dc.rows):
                value = dc[r, i]
                if value:
                    mat[position[k - 1][(qc - 1, r, qd, j)]][col] += value
            dd = d.d(qd)
            sign = -1 if qc % 2 else 1
            for r in range(dd.rows):
                value = dd[r, j]
                if value:
                    mat[position[k - 1][(qc, i, qd - 1, r)]][col] += sign * value
        boundaries.append(IntMatrix(mat, cols=len(layout[k])))
    return ChainComplex(labels, boundaries)


def _check_boundary_closed(c: ChainComplex, cells: set[str], role: str) -> None:
    for q in range(1, c.top_dim + 1):
        dq = c.d(q)
        for j, label in enumerate(c.basis[q]):
            if label not in cells:
                continue
            for i in range(dq.rows):
                if dq[i, j] and c.basis[q - 1][i] not in cells:
                    raise ValueError(
                        f"{role} is not boundary closed: cell {label} has "
                        f"face {c.basis[q - 1][i]} outside it")


def relative(c: ChainComplex, sub: Iterable[str]) -> ChainComplex:
    """Quotient complex killing a boundary-closed set of cells."""
    sub = set(sub)
    unknown = sub - c.labels()
    if unknown:
        raise ValueError(f"unknown cells: {sorted(unknown)}")
    _check_boundary_closed(c, sub, "relative subcomplex")
    return _restrict(c, lambda label: label not in sub)


def subcomplex(c: ChainComplex, cells: Iterable[str]) -> ChainComplex:
    """Subcomplex spanned by a boundary-closed set of cells."""
    cells = set(cells)
    unknown = cells - c.labels()
    if unknown:
        raise ValueError(f"unknown cells: {sorted(unknown)}")
    _check_boundary_closed(c, cells, "subcomplex")
    return _restrict(c, lambda label: label in cells)


def _restrict(c: ChainComplex, keep) -> ChainComplex:
    basis = [[label for label in labels if keep(label)] for labels in c.basis]
    boundaries = []
    for q in range(1, c.top_dim + 1):
        dq = c.d(q)
        rows = [i for i, label in enumerate(c.basis[q - 1]) if keep(label)]
        cols = [j for j, label in enumerate(c.basis[q]) if keep(label)]
        boundaries.append(IntMatrix([[dq[i, j] for j in cols] for i in rows],
                                    cols=len(cols)))
    return ChainComplex(basis, boundaries)


@dataclass(frozen=True)
class ChainMap:
    """Degreewise linear map between chain complexes."""

    source: ChainComplex
    target: ChainComplex
    matrices: tuple[IntMatrix, ...]

    def __post_init__(self):
        if len(self.matrices) != self.source.top_dim + 1:
            raise ValueError("need one matrix per source degree")
        for q, mat in enumerate(self.matrices):
            if mat.rows != self.target.dim(q) or mat.cols != self.source.dim(q):
                raise ValueError(f"matrix shape mismatch at degree {q}")

    def matrix(self, q: int) -> IntMatrix:
        if 0 <= q <= self.source.top_dim:
            return self.matrices[q]
        return IntMatrix.zeros(self.target.dim(q), 0)

    def commutes(self) -> bool:
        for q in range(1, self.source.top_dim + 1):
            if self.target.d(q) @ self.matrices[q] != self.matrices[q - 1] @ self.source.d(q):
                return False
        return True


def inclusion_map(c: ChainComplex, cells: Iterable[str]) -> ChainMap:
    """Inclusion of the subcomplex spanned by cells into c."""
    sub = subcomplex(c, cells)
    matrices = []
    for q in range(sub.top_dim + 1):
        mat = [[0] * sub.dim(q) for _ in range(c.dim(q))]
        for j, label in enumerate(sub.basis[q]):
            mat[c.position(q, label)][j] = 1
        matrices.append(IntMatrix(mat, cols=sub.dim(q)))
    return ChainMap(sub, c, tuple(matrices))


def induced_map(f: ChainMap, hc: HomologyResult, hd: HomologyResult) -> tuple[GroupHom, ...]:
    """Induced homomorphisms on homology, one per source degree.

    hc and hd must be the integral homology of f.source and f.target.
    """
    if not f.commutes():
        raise ValueError("chain map does not commute with boundaries")
    homs = []
    for q in range(f.source.top_dim + 1):
        src = hc.degree(q)
        dst = hd.degree(q)
        columns = []
        for i in range(src.kernel.cols):
            image = f.matrix(q).apply(src.kernel.column(i))
            try:
                columns.append(dst.kernel_coords(image))
            except ValueError:
                raise ValueError(
                    f"image of a degree-{q} cycle is not a cycle; "
                    "the chain map is broken")
        homs.append(GroupHom(
            source=src.presentation, target=dst.presentation,
            matrix=IntMatrix.from_columns(columns, rows=dst.presentation.gens)))
    return tuple(homs)


def connecting_hom(a: ChainComplex, b: ChainComplex, m: ChainComplex,
                   h_inter: HomologyResult | None = None,
                   h_m: HomologyResult | None = None) -> tuple[GroupHom, ...]:
    """Connecting homomorphisms of a two-piece cover, degree q to q-1.

    a and b must be subcomplexes of m (matched by label) that jointly
    contain every cell.  The short exact sequence sends a chain c of the
    intersection to (c, -c) and a pair (x, y) to x + y; the connecting
    map lifts a cycle of m to such a pair, takes the boundary of the
    first component, and reads it in the intersection.
    """
    a_cells = a.labels()
    b_cells = b.labels()
    missing = m.labels() - (a_cells | b_cells)
    if missing:
        raise ValueError(f"cells not covered by the two pieces: {sorted(missing)}")
    inter = subcomplex(m, a_cells & b_cells)
    if h_inter is None:
        h_inter = homology(inter)
    if h_m is None:
        h_m = homology(m)

    incl_a = inclusion_map(m, a_cells)
    incl_b = inclusion_map(m, b_cells)
    homs = []
    for q in range(m.top_dim + 1):
        src = h_m.degree(q)
        if q == 0:
            target = AbPresentation.free(0)
            homs.append(GroupHom(src.presentation, target,
                                 IntMatrix.zeros(0, src.presentation.gens)))
            continue
        dst = h_inter.degree(q - 1)
        stacked = hstack(incl_a.matrix(q), incl_b.matrix(q))
        columns = []
        for i in range(src.kernel.cols):
            z = src.kernel.column(i)
            sol = solve_linear(stacked, z)
            if sol is None:
                raise ValueError(f"degree-{q} cycle has no chain-level "
                                 "splitting; cover is not exact")
            xa = sol[:a.dim(q)]
            bd = a.d(q).apply(xa)
            coeffs = {}
            for pos, value in enumerate(bd):
                if value:
                    label = a.basis[q - 1][pos]
                    if label not in inter.labels():
                        raise ValueError(
                            "boundary of the lifted chain leaves the "
                            f"intersection at cell {label}")
                    coeffs[label] = value
            columns.append(dst.kernel_coords(inter.vector(q - 1, coeffs)))
        homs.append(GroupHom(
            source=src.presentation, target=dst.presentation,
            matrix=IntMatrix.from_columns(columns, rows=dst.presentation.gens)))
    return tuple(homs)


def point_complex(label: str = "pt") -> ChainComplex:
    return ChainComplex([[label]], [])


def circle_complex(vertex: str = "v", edge: str = "t") -> ChainComplex:
    return ChainComplex([[vertex], [edge]], [IntMatrix.zeros(1, 1)])
