"""Finite weighted cellular models of low-dimensional orbifolds.

Three models are built per orbifold description: the weighted model
whose chain complex computes the transversal homology, its weights-to-1
degeneration computing the homology of the underlying space, and an
adapted cell structure (every open cell inside a single stratum) whose
scaled dual computes the weighted cohomology.  A small line-oriented
text format (.owc) round-trips user-supplied complexes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

from . import chains
from .chains import ChainComplex
from .intlin import IntMatrix


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@dataclass(frozen=True)
class Disc2:
    """Disk with one interior cone point of the given order."""

    order: int

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("cone order must be at least 2")


@dataclass(frozen=True)
class Ball3:
    """Ball whose singular set is a cone on three points.

    The three orders must form a spherical triple; that is checked by
    the builders, not here, so descriptors parse uniformly.
    """

    orders: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(m) for m in self.orders))
        if len(self.orders) != 3 or any(m < 2 for m in self.orders):
            raise ValueError("need three orders, each at least 2")


@dataclass(frozen=True)
class Ball3Cyclic:
    """Ball whose singular set is an unknotted axis of the given order."""

    order: int

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("axis order must be at least 2")


@dataclass(frozen=True)
class Surface:
    """Orientable surface with genus, boundary circles, and cone points."""

    genus: int
    boundary: int
    cone_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cone_orders",
                           tuple(int(m) for m in self.cone_orders))
        if self.genus < 0 or self.boundary < 0:
            raise ValueError("genus and boundary count must be non-negative")
        if any(m < 2 for m in self.cone_orders):
            raise ValueError("cone orders must be at least 2")


@dataclass(frozen=True)
class ProductTorus:
    """Product of a base orbifold with a torus of the given dimension."""

    base: "OrbifoldDesc"
    torus_factors: int

    def __post_init__(self):
        if self.torus_factors < 1:
            raise ValueError("torus factor count must be at least 1")


@dataclass(frozen=True)
class Custom:
    """Complex read from an .owc file."""

    path: str


OrbifoldDesc = Union[Disc2, Ball3, Ball3Cyclic, Surface, ProductTorus, Custom]


def describe(d: OrbifoldDesc) -> str:
    """Stable text form of a descriptor, matching the CLI grammar."""
    if isinstance(d, Disc2):
        return f"disc2({d.order})"
    if isinstance(d, Ball3):
        return "ball3({},{},{})".format(*d.orders)
    if isinstance(d, Ball3Cyclic):
        return f"ball3cyclic({d.order})"
    if isinstance(d, Surface):
        cones = ";" + ",".join(str(m) for m in d.cone_orders) if d.cone_orders else ""
        return f"surface({d.genus},{d.boundary}{cones})"
    if isinstance(d, ProductTorus):
        return f"{describe(d.base)} x torus({d.torus_factors})"
    if isinstance(d, Custom):
        return f"file:{d.path}"
    raise TypeError(f"not a descriptor: {d!r}")


_ID_RE = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass(frozen=True)
class Cell:
    """One cell: label, dimension, weight, and incidence list.

    Repeated boundary labels are merged by summing coefficients; zero
    coefficients are dropped.
    """

    id: str
    dim: int
    weight: int
    boundary: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if not _ID_RE.match(self.id):
            raise ValueError(f"bad cell id {self.id!r}")
        if self.dim < 0:
            raise ValueError(f"cell {self.id}: negative dimension")
        if self.weight < 1:
            raise ValueError(f"cell {self.id}: weight must be at least 1")
        merged: dict[str, int] = {}
        order: list[str] = []
        for ref, coefficient in self.boundary:
            if ref not in merged:
                merged[ref] = 0
                order.append(ref)
            merged[ref] += int(coefficient)
        object.__setattr__(self, "boundary",
                           tuple((ref, merged[ref]) for ref in order if merged[ref]))


class WeightedCellComplex:
    """Immutable weighted cell complex with named subcomplexes.

    Construction checks that boundary references exist one dimension
    down, that the induced chain complex satisfies boundary-of-boundary
    equals zero, and that subcomplex members exist.
    """

    __slots__ = ("name", "dim", "cells", "subs", "_by_id")

    def __init__(self, name: str, dim: int, cells: Sequence[Cell],
                 subs: Mapping[str, Iterable[str]] | None = None):
        cells = tuple(cells)
        by_id: dict[str, Cell] = {}
        for cell in cells:
            if cell.id in by_id:
                raise ValueError(f"duplicate cell id {cell.id}")
            if cell.dim > dim:
                raise ValueError(f"cell {cell.id}: dimension {cell.dim} "
                                 f"exceeds complex dimension {dim}")
            by_id[cell.id] = cell
        for cell in cells:
            for ref, _ in cell.boundary:
                if ref not in by_id:
                    raise ValueError(f"cell {cell.id}: unknown boundary "
                                     f"cell {ref}")
                if by_id[ref].dim != cell.dim - 1:
                    raise ValueError(
                        f"cell {cell.id}: boundary cell {ref} has dimension "
                        f"{by_id[ref].dim}, expected {cell.dim - 1}")
        normalized: dict[str, frozenset[str]] = {}
        for sub_name, members in (subs or {}).items():
            members = frozenset(members)
            unknown = members - by_id.keys()
            if unknown:
                raise ValueError(f"subcomplex {sub_name}: unknown cells "
                                 f"{sorted(unknown)}")
            normalized[sub_name] = members
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "subs", normalized)
        object.__setattr__(self, "_by_id", by_id)
        problems = chains.validate(self.chain_complex())
        if problems:
            raise ValueError(f"complex {name}: " + problems[0])

    def __setattr__(self, name, value):
        raise AttributeError("WeightedCellComplex is immutable")

    def cell(self, cell_id: str) -> Cell:
        return self._by_id[cell_id]

    def ids(self) -> list[str]:
        return [cell.id for cell in self.cells]

    def cells_of_dim(self, q: int) -> list[Cell]:
        return [cell for cell in self.cells if cell.dim == q]

    def sub_cells(self, name: str) -> frozenset[str]:
        if name == "all":
            return frozenset(self._by_id)
        if name not in self.subs:
            raise ValueError(f"no subcomplex named {name!r}")
        return self.subs[name]

    def chain_complex(self) -> ChainComplex:
        basis = [[cell.id for cell in self.cells_of_dim(q)]
                 for q in range(self.dim + 1)]
        position = [{label: i for i, label in enumerate(labels)}
                    for labels in basis]
        boundaries = []
        for q in range(1, self.dim + 1):
            mat = [[0] * len(basis[q]) for _ in range(len(basis[q - 1]))]
            for j, label in enumerate(basis[q]):
                for ref, coefficient in self.cell(label).boundary:
                    mat[position[q - 1][ref]][j] += coefficient
            boundaries.append(IntMatrix(mat, cols=len(basis[q])))
        return ChainComplex(basis, boundaries)


def tensor_weighted(a: WeightedCellComplex, b: WeightedCellComplex,
                    name: str | None = None) -> WeightedCellComplex:
    """Product complex: weights multiply, boundaries get the product sign.

    Named subcomplexes of the first factor propagate as their product
    with all of the second factor.
    """
    cells = []
    for ca in a.cells:
        sign = -1 if ca.dim % 2 else 1
        for cb in b.cells:
            boundary = [(f"{ref}_x_{cb.id}", coefficient)
                        for ref, coefficient in ca.boundary]
            boundary += [(f"{ca.id}_x_{ref}", sign * coefficient)
                         for ref, coefficient in cb.boundary]
            cells.append(Cell(f"{ca.id}_x_{cb.id}", ca.dim + cb.dim,
                              ca.weight * cb.weight, tuple(boundary)))
    cells.sort(key=lambda cell: cell.dim)
    b_ids = b.ids()
    subs = {sub_name: {f"{x}_x_{y}" for x in members for y in b_ids}
            for sub_name, members in a.subs.items()}
    return WeightedCellComplex(name or f"{a.name}_x_{b.name}",
                               a.dim + b.dim, cells, subs)


def _circle() -> WeightedCellComplex:
    return WeightedCellComplex("circle", 1, [Cell("z", 0, 1), Cell("t", 1, 1)])


def cone_point_index(m1: int, m2: int, m3: int) -> int:
    """Order of the local group at the cone point of a ballic model.

    Equals the least common multiple of the three orders when the
    sorted triple is (2, 2, odd), and twice that otherwise.  Rejects
    non-spherical triples.
    """
    triple = tuple(sorted((m1, m2, m3)))
    if any(m < 2 for m in triple):
        raise ValueError("orders must be at least 2")
    spherical = (triple[:2] == (2, 2)) or triple in ((2, 3, 3), (2, 3, 4), (2, 3, 5))
    if not spherical:
        raise ValueError(f"({m1},{m2},{m3}) is not a spherical triple")
    ell = _lcm(triple)
    if triple[:2] == (2, 2) and triple[2] % 2 == 1:
        return ell
    return 2 * ell


def _t_surface(d: Surface, name: str) -> WeightedCellComplex:
    g, b, ms = d.genus, d.boundary, d.cone_orders
    cells = [Cell("v", 0, 1)]
    loop_names = []
    for k in range(1, g + 1):
        loop_names += [f"a{k}", f"b{k}"]
    cells += [Cell(label, 1, 1) for label in loop_names]
    cells += [Cell(f"c{i}", 1, 1) for i in range(1, len(ms) + 1)]
    for j in range(1, b + 1):
        cells.append(Cell(f"w{j}", 0, 1))
        cells.append(Cell(f"r{j}", 1, 1, ((f"w{j}", 1), ("v", -1))))
        cells.append(Cell(f"d{j}", 1, 1))
    for i, m in enumerate(ms, start=1):
        cells.append(Cell(f"sighat{i}", 2, m, ((f"c{i}", m),)))
    sigma_boundary = tuple((f"c{i}", -1) for i in range(1, len(ms) + 1))
    sigma_boundary += tuple((f"d{j}", -1) for j in range(1, b + 1))
    cells.append(Cell("sigma0", 2, 1, sigma_boundary))
    cells.sort(key=lambda cell: cell.dim)

    subs: dict[str, set[str]] = {}
    if b >= 1:
        subs["boundary"] = {f"w{j}" for j in range(1, b + 1)}
        subs["boundary"] |= {f"d{j}" for j in range(1, b + 1)}
    subs["conedisks"] = {"v"} | {f"c{i}" for i in range(1, len(ms) + 1)} \
        | {f"sighat{i}" for i in range(1, len(ms) + 1)}
    subs["complement"] = {cell.id for cell in cells} \
        - {f"sighat{i}" for i in range(1, len(ms) + 1)}
    return WeightedCellComplex(name, 2, cells, subs)


def t_model(d: OrbifoldDesc) -> WeightedCellComplex:
    """Weighted model whose chain complex computes transversal homology.

    Cone points carry weighted 2-cells attached with multiplicity equal
    to the cone order; ballic models add a weighted 3-cell attached to
    the boundary sphere with multiplicities scaled by the cone point
    index.
    """
    if isinstance(d, Disc2):
        n = d.order
        cells = [
            Cell("v0", 0, 1),
            Cell("u", 0, 1),
            Cell("c_out", 1, 1),
            Cell("r", 1, 1, (("v0", 1), ("u", -1))),
            Cell("c_in", 1, 1),
            Cell("A", 2, 1, (("c_out", 1), ("c_in", -1))),
            Cell("sighat", 2, n, (("c_in", n),)),
        ]
        subs = {
            "boundary": {"v0", "c_out"},
            "cone": {"u", "c_in", "sighat"},
            "annulus": {"v0", "u", "c_out", "r", "c_in", "A"},
        }
        return WeightedCellComplex(describe(d), 2, cells, subs)
    if isinstance(d, Surface):
        return _t_surface(d, describe(d))
    if isinstance(d, Ball3):
        n0 = cone_point_index(*d.orders)
        sphere = _t_surface(Surface(0, 0, d.orders), "sphere")
        boundary = tuple((f"sighat{i}", n0 // m)
                         for i, m in enumerate(d.orders, start=1))
        tau = Cell("tauhat", 3, n0, (("sigma0", n0),) + boundary)
        cells = list(sphere.cells) + [tau]
        subs = {"boundary": set(sphere.ids())}
        return WeightedCellComplex(describe(d), 3, cells, subs)
    if isinstance(d, Ball3Cyclic):
        n = d.order
        sphere = _t_surface(Surface(0, 0, (n, n)), "sphere")
        tau = Cell("tauhat", 3, n,
                   (("sigma0", n), ("sighat1", 1), ("sighat2", 1)))
        cells = list(sphere.cells) + [tau]
        subs = {"boundary": set(sphere.ids())}
        return WeightedCellComplex(describe(d), 3, cells, subs)
    if isinstance(d, ProductTorus):
        model = t_model(d.base)
        for _ in range(d.torus_factors):
            model = tensor_weighted(model, _circle())
        return WeightedCellComplex(describe(d), model.dim, model.cells,
                                   model.subs)
    if isinstance(d, Custom):
        with open(d.path, encoding="utf-8") as handle:
            return parse_owc(handle.read())
    raise TypeError(f"not a descriptor: {d!r}")


def degenerate_weights(wcc: WeightedCellComplex) -> WeightedCellComplex:
    """Set every weight to 1 and rescale incidences to match.

    The incidence from a cell onto a face is divided by the ratio of
    their weights; this is the weights-to-1 degeneration whose homology
    is that of the underlying space.
    """
    cells = []
    for cell in wcc.cells:
        boundary = []
        for ref, coefficient in cell.boundary:
            ratio, remainder = divmod(cell.weight, wcc.cell(ref).weight)
            if remainder:
                raise ValueError(f"cell {cell.id}: weight does not divide "
                                 f"the weight of its face {ref}")
            scaled, remainder = divmod(coefficient, ratio)
            if remainder:
                raise ValueError(f"cell {cell.id}: incidence on {ref} is "
                                 "not divisible by the weight ratio")
            boundary.append((ref, scaled))
        cells.append(Cell(cell.id, cell.dim, 1, tuple(boundary)))
    return WeightedCellComplex(f"{wcc.name}_underlying", wcc.dim, cells,
                               wcc.subs)


def underlying_model(d: OrbifoldDesc) -> WeightedCellComplex:
    """Model of the underlying space, as the weight degeneration."""
    return degenerate_weights(t_model(d))


def adapted_model(d: OrbifoldDesc) -> WeightedCellComplex:
    """Cell structure in which every open cell lies in one stratum.

    Singular strata appear as weighted vertices and arcs; the scaled
    dual of this complex carries the weighted cochains.  For a file
    descriptor the parsed complex itself is taken as already adapted.
    """
    if isinstance(d, Disc2):
        n = d.order
        cells = [
            Cell("v", 0, 1),
            Cell("p", 0, n),
            Cell("a", 1, 1, (("p", 1), ("v", -1))),
            Cell("c", 1, 1),
            Cell("E", 2, 1, (("c", 1),)),
        ]
        return WeightedCellComplex(describe(d), 2, cells,
                                   {"boundary": {"v", "c"}})
    if isinstance(d, Surface):
        g, b, ms = d.genus, d.boundary, d.cone_orders
        cells = [Cell("v", 0, 1)]
        for i, m in enumerate(ms, start=1):
            cells.append(Cell(f"p{i}", 0, m))
            cells.append(Cell(f"e{i}", 1, 1, ((f"p{i}", 1), ("v", -1))))
        for k in range(1, g + 1):
            cells.append(Cell(f"a{k}", 1, 1))
            cells.append(Cell(f"b{k}", 1, 1))
        for j in range(1, b + 1):
            cells.append(Cell(f"w{j}", 0, 1))
            cells.append(Cell(f"r{j}", 1, 1, ((f"w{j}", 1), ("v", -1))))
            cells.append(Cell(f"d{j}", 1, 1))
        cells.append(Cell("F", 2, 1,
                          tuple((f"d{j}", 1) for j in range(1, b + 1))))
        cells.sort(key=lambda cell: cell.dim)
        subs = {}
        if b >= 1:
            subs["boundary"] = {f"w{j}" for j in range(1, b + 1)} \
                | {f"d{j}" for j in range(1, b + 1)}
        return WeightedCellComplex(describe(d), 2, cells, subs)
    if isinstance(d, Ball3):
        m1, m2, m3 = d.orders
        n0 = cone_point_index(m1, m2, m3)
        cells = [
            Cell("p1", 0, m1), Cell("p2", 0, m2), Cell("p3", 0, m3),
            Cell("o", 0, n0),
            Cell("E12", 1, 1, (("p2", 1), ("p1", -1))),
            Cell("E23", 1, 1, (("p3", 1), ("p2", -1))),
            Cell("E31", 1, 1, (("p1", 1), ("p3", -1))),
            Cell("g1", 1, m1, (("p1", 1), ("o", -1))),
            Cell("g2", 1, m2, (("p2", 1), ("o", -1))),
            Cell("g3", 1, m3, (("p3", 1), ("o", -1))),
            Cell("F_up", 2, 1, (("E12", 1), ("E23", 1), ("E31", 1))),
            Cell("F_down", 2, 1, (("E12", -1), ("E23", -1), ("E31", -1))),
            Cell("D12", 2, 1, (("g1", 1), ("E12", 1), ("g2", -1))),
            Cell("D23", 2, 1, (("g2", 1), ("E23", 1), ("g3", -1))),
            Cell("D31", 2, 1, (("g3", 1), ("E31", 1), ("g1", -1))),
            Cell("T_up", 3, 1,
                 (("F_up", 1), ("D12", -1), ("D23", -1), ("D31", -1))),
            Cell("T_down", 3, 1,
                 (("F_down", 1), ("D12", 1), ("D23", 1), ("D31", 1))),
        ]
        subs = {"boundary": {"p1", "p2", "p3", "E12", "E23", "E31",
                             "F_up", "F_down"}}
        return WeightedCellComplex(describe(d), 3, cells, subs)
    if isinstance(d, Ball3Cyclic):
        n = d.order
        cells = [
            Cell("p1", 0, n), Cell("p2", 0, n),
            Cell("e_a", 1, 1, (("p2", 1), ("p1", -1))),
            Cell("e_b", 1, 1, (("p2", 1), ("p1", -1))),
            Cell("g", 1, n, (("p2", 1), ("p1", -1))),
            Cell("F_a", 2, 1, (("e_a", 1), ("e_b", -1))),
            Cell("F_b", 2, 1, (("e_b", 1), ("e_a", -1))),
            Cell("D_a", 2, 1, (("e_a", 1), ("g", -1))),
            Cell("D_b", 2, 1, (("e_b", 1), ("g", -1))),
            Cell("T_a", 3, 1, (("F_a", 1), ("D_a", -1), ("D_b", 1))),
            Cell("T_b", 3, 1, (("F_b", 1), ("D_a", 1), ("D_b", -1))),
        ]
        subs = {"boundary": {"p1", "p2", "e_a", "e_b", "F_a", "F_b"}}
        return WeightedCellComplex(describe(d), 3, cells, subs)
    if isinstance(d, ProductTorus):
        model = adapted_model(d.base)
        for _ in range(d.torus_factors):
            model = tensor_weighted(model, _circle())
        return WeightedCellComplex(describe(d), model.dim, model.cells,
                                   model.subs)
    if isinstance(d, Custom):
        with open(d.path, encoding="utf-8") as handle:
            return parse_owc(handle.read())
    raise TypeError(f"not a descriptor: {d!r}")


def ws_complex(wcc: WeightedCellComplex, rel: str | None = None) -> ChainComplex:
    """Scaled dual cochain complex, encoded with reversed degrees.

    Degree k of the result holds the duals of the (n-k)-cells, scaled by
    their weights, so that homology in degree k is the weighted
    cohomology in degree n-k.  With rel set, duals of cells in that
    named subcomplex are dropped (cochains vanishing on it).
    """
    dropped = wcc.sub_cells(rel) if rel is not None else frozenset()
    n = wcc.dim
    kept = [[cell for cell in wcc.cells_of_dim(q) if cell.id not in dropped]
            for q in range(n + 1)]
    basis = [[cell.id for cell in kept[n - k]] for k in range(n + 1)]
    boundaries = []
    for k in range(1, n + 1):
        q = n - k
        row_pos = {cell.id: i for i, cell in enumerate(kept[q + 1])}
        mat = [[0] * len(kept[q]) for _ in range(len(kept[q + 1]))]
        for j, cell in enumerate(kept[q]):
            for f in kept[q + 1]:
                for ref, coefficient in f.boundary:
                    if ref != cell.id:
                        continue
                    scaled, remainder = divmod(coefficient * cell.weight,
                                               f.weight)
                    if remainder:
                        raise ValueError(
                            f"weights are not adapted: entry from {f.id} "
                            f"to {cell.id} is not integral")
                    mat[row_pos[f.id]][j] += scaled
        boundaries.append(IntMatrix(mat, cols=len(kept[q])))
    return ChainComplex(basis, boundaries)


def ws_model(d: OrbifoldDesc) -> ChainComplex:
    """Absolute weighted cochain complex of the adapted model."""
    return ws_complex(adapted_model(d))


class OwcError(ValueError):
    """Parse or validation failure in .owc text, with a line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


_KV_RE = re.compile(r"^(\w+)=(\S+)$")


def parse_owc(text: str) -> WeightedCellComplex:
    """Parse the .owc text format.

    Grammar (one directive per line, '#' starts a comment):
      orbifold <name>
      dim <n>
      cell <id> dim=<q> weight=<w> [boundary=<id>:<int>,...]
      sub <name> = <id>,...
    """
    name = None
    dim = None
    cells: list[Cell] = []
    cell_lines: dict[str, int] = {}
    raw_subs: list[tuple[int, str, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        verb = parts[0]
        if verb == "orbifold":
            if len(parts) < 2:
                raise OwcError(lineno, "orbifold needs a name")
            name = line[len("orbifold"):].strip()
        elif verb == "dim":
            if len(parts) != 2 or not parts[1].lstrip("-").isdigit():
                raise OwcError(lineno, "dim needs one integer")
            dim = int(parts[1])
            if dim < 0:
                raise OwcError(lineno, "dim must be non-negative")
        elif verb == "cell":
            if len(parts) < 2:
                raise OwcError(lineno, "cell needs an id")
            cell_id = parts[1]
            if not _ID_RE.match(cell_id):
                raise OwcError(lineno, f"bad cell id {cell_id!r}")
            if cell_id in cell_lines:
                raise OwcError(lineno, f"duplicate cell id {cell_id}")
            fields = {}
            for chunk in parts[2:]:
                match = _KV_RE.match(chunk)
                if not match:
                    raise OwcError(lineno, f"bad cell field {chunk!r}")
                key, value = match.groups()
                if key in fields:
                    raise OwcError(lineno, f"repeated field {key}")
                fields[key] = value
            if "dim" not in fields or "weight" not in fields:
                raise OwcError(lineno, "cell needs dim= and weight=")
            try:
                cell_dim = int(fields["dim"])
                weight = int(fields["weight"])
            except ValueError:
                raise OwcError(lineno, "dim and weight must be integers")
            if weight < 1:
                raise OwcError(lineno, f"cell {cell_id}: weight must be "
                                       "at least 1")
            boundary = []
            if "boundary" in fields:
                for entry in fields["boundary"].split(","):
                    if ":" not in entry:
                        raise OwcError(lineno, f"bad boundary entry "
                                               f"{entry!r}, want id:int")
                    ref, _, coefficient = entry.partition(":")
                    try:
                        boundary.append((ref, int(coefficient)))
                    except ValueError:
                        raise OwcError(lineno, f"bad boundary coefficient "
                                               f"in {entry!r}")
            try:
                cells.append(Cell(cell_id, cell_dim, weight, tuple(boundary)))
            except ValueError as exc:
                raise OwcError(lineno, str(exc))
            cell_lines[cell_id] = lineno
        elif verb == "sub":
            rest = line[len("sub"):].strip()
            if "=" not in rest:
                raise OwcError(lineno, "sub needs '= id,id,...'")
            sub_name, _, members = rest.partition("=")
            sub_name = sub_name.strip()
            if not _ID_RE.match(sub_name):
                raise OwcError(lineno, f"bad subcomplex name {sub_name!r}")
            ids = [m.strip() for m in members.split(",") if m.strip()]
            raw_subs.append((lineno, sub_name, ids))
        else:
            raise OwcError(lineno, f"unknown directive {verb!r}")
    if name is None:
        raise OwcError(1, "missing 'orbifold <name>' line")
    if dim is None:
        raise OwcError(1, "missing 'dim <n>' line")

    by_id = {cell.id: cell for cell in cells}
    for cell in cells:
        if cell.dim > dim:
            raise OwcError(cell_lines[cell.id],
                           f"cell {cell.id}: dimension {cell.dim} exceeds "
                           f"declared dim {dim}")
        for ref, _ in cell.boundary:
            if ref not in by_id:
                raise OwcError(cell_lines[cell.id],
                               f"cell {cell.id}: unknown boundary cell {ref}")
            if by_id[ref].dim != cell.dim - 1:
                raise OwcError(cell_lines[cell.id],
                               f"cell {cell.id}: boundary cell {ref} has "
                               f"dimension {by_id[ref].dim}, expected "
                               f"{cell.dim - 1}")
    subs: dict[str, set[str]] = {}
    for lineno, sub_name, ids in raw_subs:
        unknown = [i for i in ids if i not in by_id]
        if unknown:
            raise OwcError(lineno, f"subcomplex {sub_name}: unknown cell "
                                   f"{unknown[0]}")
        subs.setdefault(sub_name, set()).update(ids)

    complex_candidate = ChainComplex(
        [[cell.id for cell in cells if cell.dim == q] for q in range(dim + 1)],
        _boundary_matrices(cells, dim))
    problems = chains.validate(complex_candidate)
    if problems:
        offender = problems[0].split("boundary of boundary of ", 1)
        cell_id = offender[1].split()[0] if len(offender) == 2 else cells[0].id
        raise OwcError(cell_lines.get(cell_id, 1),
                       "boundary of boundary is nonzero: " + problems[0])
    return WeightedCellComplex(name, dim, cells, subs)


def _boundary_matrices(cells: Sequence[Cell], dim: int) -> list[IntMatrix]:
    basis = [[cell.id for cell in cells if cell.dim == q]
             for q in range(dim + 1)]
    position = [{label: i for i, label in enumerate(labels)}
                for labels in basis]
    by_id = {cell.id: cell for cell in cells}
    out = []
    for q in range(1, dim + 1):
        mat = [[0] * len(basis[q]) for _ in range(len(basis[q - 1]))]
        for j, label in enumerate(basis[q]):
            for ref, coefficient in by_id[label].boundary:
                mat[position[q - 1][ref]][j] += coefficient
        out.append(IntMatrix(mat, cols=len(basis[q])))
    return out


def serialize_owc(wcc: WeightedCellComplex) -> str:
    """Deterministic .owc text for a complex; parses back to an equal one."""
    lines = [f"orbifold {wcc.name}", f"dim {wcc.dim}"]
    for cell in wcc.cells:
        line = f"cell {cell.id} dim={cell.dim} weight={cell.weight}"
        if cell.boundary:
            entries = ",".join(f"{ref}:{coefficient}"
                               for ref, coefficient in cell.boundary)
            line += f" boundary={entries}"
        lines.append(line)
    order = {cell.id: i for i, cell in enumerate(wcc.cells)}
    for sub_name in sorted(wcc.subs):
        members = sorted(wcc.subs[sub_name], key=order.__getitem__)
        lines.append(f"sub {sub_name} = {','.join(members)}")
    return "\n".join(lines) + "\n"
