"""Affine singular chains with the refinement and prism operators.

An affine simplex is an ordered tuple of points with exact rational
coordinates.  Given a marked face of a simplex and a strictly interior
barycentric point of that face, the refinement operator replaces the
simplex by a signed fan of simplices through the new point, and the
prism operator provides the chain homotopy between refinement and the
identity.  Both satisfy, on any chain c in which the marked face is
matched exactly where it occurs:

    boundary(Sd(c)) == Sd(boundary(c))
    boundary(P(c))  == c - Sd(c) - P(boundary(c))

The self-test exercises both identities on seeded random inputs.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .report import Assertion, VerdictReport

Point = tuple[Fraction, ...]


def _as_point(coords) -> Point:
    return tuple(Fraction(x) for x in coords)


@dataclass(frozen=True)
class AffineSimplex:
    """An ordered tuple of points in a common ambient dimension."""

    vertices: tuple[Point, ...]

    def __init__(self, vertices):
        verts = tuple(_as_point(v) for v in vertices)
        if not verts:
            raise ValueError("a simplex needs at least one vertex")
        ambient = len(verts[0])
        if any(len(v) != ambient for v in verts):
            raise ValueError("vertices have mixed ambient dimensions")
        object.__setattr__(self, "vertices", verts)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient(self) -> int:
        return len(self.vertices[0])

    def face(self, i: int) -> "AffineSimplex":
        """Delete vertex i."""
        if not 0 <= i <= self.dim:
            raise ValueError(f"no face index {i} on a {self.dim}-simplex")
        return AffineSimplex(self.vertices[:i] + self.vertices[i + 1:])

    def restrict(self, indices) -> "AffineSimplex":
        """Sub-simplex on an increasing tuple of vertex indices."""
        idx = tuple(indices)
        if list(idx) != sorted(set(idx)):
            raise ValueError("face indices must be strictly increasing")
        if not idx or idx[0] < 0 or idx[-1] > self.dim:
            raise ValueError(f"face indices {idx} out of range")
        return AffineSimplex(tuple(self.vertices[i] for i in idx))

    def __repr__(self) -> str:
        pts = ", ".join(
            "(" + ", ".join(str(x) for x in v) + ")" for v in self.vertices
        )
        return f"<{pts}>"


class AffineChain:
    """Integer combination of affine simplices of one ambient space."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        data: dict[AffineSimplex, int] = {}
        if terms:
            for simplex, coeff in (
                terms.items() if isinstance(terms, dict) else terms
            ):
                if not isinstance(simplex, AffineSimplex):
                    simplex = AffineSimplex(simplex)
                if coeff:
                    data[simplex] = data.get(simplex, 0) + coeff
        self._terms = {s: c for s, c in data.items() if c}

    @classmethod
    def zero(cls) -> "AffineChain":
        return cls()

    @classmethod
    def of(cls, simplex, coeff: int = 1) -> "AffineChain":
        return cls([(simplex, coeff)])

    def terms(self):
        """The nonzero terms as a simplex -> coefficient mapping."""
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, AffineChain) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "AffineChain") -> "AffineChain":
        out = dict(self._terms)
        for s, c in other._terms.items():
            out[s] = out.get(s, 0) + c
        return AffineChain(out)

    def __neg__(self) -> "AffineChain":
        return AffineChain({s: -c for s, c in self._terms.items()})

    def __sub__(self, other: "AffineChain") -> "AffineChain":
        return self + (-other)

    def scale(self, n: int) -> "AffineChain":
        return AffineChain({s: n * c for s, c in self._terms.items()})

    def degree(self) -> int:
        """Common dimension of all terms (error if mixed or zero)."""
        dims = {s.dim for s in self._terms}
        if len(dims) != 1:
            raise ValueError("chain is zero or mixes dimensions")
        return dims.pop()

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for s, c in sorted(
            self._terms.items(), key=lambda item: item[0].vertices
        ):
            parts.append(f"{c:+d}*{s!r}")
        return " ".join(parts)


def boundary(c) -> AffineChain:
    """Alternating-sign sum of vertex deletions, extended linearly."""
    if isinstance(c, AffineSimplex):
        c = AffineChain.of(c)
    out: dict[AffineSimplex, int] = {}
    for s, n in c.terms().items():
        if s.dim == 0:
            continue
        for i in range(s.dim + 1):
            t = s.face(i)
            out[t] = out.get(t, 0) + n * (-1) ** i
    return AffineChain(out)


def _check_interior(a, p: int) -> tuple[Fraction, ...]:
    weights = tuple(Fraction(x) for x in a)
    if len(weights) != p + 1:
        raise ValueError(
            f"interior point needs {p + 1} barycentric coordinates, "
            f"got {len(weights)}"
        )
    if any(w <= 0 for w in weights):
        raise ValueError("interior point needs strictly positive coordinates")
    if sum(weights) != 1:
        raise ValueError("barycentric coordinates must sum to 1")
    return weights


def _face_point(s: AffineSimplex, face, a) -> Point:
    weights = _check_interior(a, len(face) - 1)
    ambient = s.ambient
    return tuple(
        sum((weights[k] * s.vertices[face[k]][j] for k in range(len(face))),
            Fraction(0))
        for j in range(ambient)
    )


def _check_face(s: AffineSimplex, face) -> tuple[int, ...]:
    idx = tuple(face)
    if list(idx) != sorted(set(idx)):
        raise ValueError("face indices must be strictly increasing")
    if len(idx) < 2:
        raise ValueError("the marked face must have dimension at least 1")
    if idx[0] < 0 or idx[-1] > s.dim:
        raise ValueError(f"face indices {idx} out of range for dim {s.dim}")
    return idx


def refine(s: AffineSimplex, face, a) -> AffineChain:
    """Fan of s through the interior point of the marked face.

    face is a strictly increasing tuple of vertex indices of s of
    length at least 2, and a gives barycentric coordinates of a
    strictly interior point of that face.  The result has one term per
    face vertex.
    """
    idx = _check_face(s, face)
    ap = _face_point(s, idx, a)
    q = s.dim
    ip = idx[-1]
    out: dict[AffineSimplex, int] = {}
    for k in range(len(idx)):
        ik = idx[k]
        verts = (
            [s.vertices[t] for t in range(ip + 1) if t != ik]
            + [ap]
            + [s.vertices[t] for t in range(ip + 1, q + 1)]
        )
        term = AffineSimplex(tuple(verts))
        sign = (-1) ** (ik + ip)
        out[term] = out.get(term, 0) + sign
    return AffineChain(out)


def prism(s: AffineSimplex, face, a) -> AffineChain:
    """Degree +1 homotopy term for one simplex.

    With face None the result is the plain vertex-doubling prism; with
    a marked face it mixes doubled prefixes with fan terms through the
    interior point.
    """
    q = s.dim
    out: dict[AffineSimplex, int] = {}

    def add(verts, coeff):
        term = AffineSimplex(tuple(verts))
        val = out.get(term, 0) + coeff
        if val:
            out[term] = val
        elif term in out:
            del out[term]

    if face is None:
        for j in range(q + 1):
            verts = (
                [s.vertices[t] for t in range(j + 1)]
                + [s.vertices[t] for t in range(j, q + 1)]
            )
            add(verts, (-1) ** (j + 1))
        return AffineChain(out)

    idx = _check_face(s, face)
    ap = _face_point(s, idx, a)
    i0, ip = idx[0], idx[-1]
    for j in range(q + 1):
        if j <= i0:
            for k in range(len(idx)):
                ik = idx[k]
                verts = (
                    [s.vertices[t] for t in range(j + 1)]
                    + [s.vertices[t] for t in range(j, ip + 1) if t != ik]
                    + [ap]
                    + [s.vertices[t] for t in range(ip + 1, q + 1)]
                )
                add(verts, (-1) ** (j + 1) * (-1) ** (ik + ip))
        else:
            verts = (
                [s.vertices[t] for t in range(j + 1)]
                + [s.vertices[t] for t in range(j, q + 1)]
            )
            add(verts, (-1) ** (j + 1))
    return AffineChain(out)


def find_face(s: AffineSimplex, phi: AffineSimplex):
    """First increasing index tuple of s whose restriction equals phi,
    or None when phi does not occur as a face of s."""
    if phi.dim > s.dim or phi.ambient != s.ambient:
        return None
    for idx in itertools.combinations(range(s.dim + 1), phi.dim + 1):
        if tuple(s.vertices[i] for i in idx) == phi.vertices:
            return idx
    return None


def sd_operator(phi: AffineSimplex, a, c: AffineChain) -> AffineChain:
    """Refinement operator on chains: fan every simplex containing phi
    as a face through the marked interior point, keep the rest."""
    _check_interior(a, phi.dim)
    out = AffineChain.zero()
    for s, n in c.terms().items():
        idx = find_face(s, phi)
        if idx is None:
            out = out + AffineChain.of(s, n)
        else:
            out = out + refine(s, idx, a).scale(n)
    return out


def prism_operator(phi: AffineSimplex, a, c: AffineChain) -> AffineChain:
    """Chain homotopy between the identity and the refinement operator."""
    _check_interior(a, phi.dim)
    out = AffineChain.zero()
    for s, n in c.terms().items():
        idx = find_face(s, phi)
        out = out + prism(s, idx, a if idx is not None else None).scale(n)
    return out


def _random_simplex(rng: random.Random, q: int, ambient: int) -> AffineSimplex:
    while True:
        verts = tuple(
            tuple(Fraction(rng.randint(-8, 8), rng.randint(1, 8))
                  for _ in range(ambient))
            for _ in range(q + 1)
        )
        if len(set(verts)) == q + 1:
            return AffineSimplex(verts)


def selftest(trials: int = 200, seed: int = 0) -> VerdictReport:
    """Check both operator identities on seeded random simplices.

    Each trial draws a simplex of dimension 1..4 with exact rational
    coordinates, marks a random face of dimension >= 1 and a random
    interior point, then verifies

        (i)  boundary(Sd(c)) == Sd(boundary(c))
        (ii) boundary(P(c))  == c - Sd(c) - P(boundary(c))

    The report is deterministic for a fixed (trials, seed) pair and
    quotes any counterexample verbatim.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    fail_i = fail_ii = 0
    notes: list[str] = []
    for trial in range(trials):
        q = rng.randint(1, 4)
        ambient = rng.randint(q, q + 2)
        s = _random_simplex(rng, q, ambient)
        p = rng.randint(1, q)
        face = tuple(sorted(rng.sample(range(q + 1), p + 1)))
        weights = [rng.randint(1, 4) for _ in range(p + 1)]
        total = sum(weights)
        a = tuple(Fraction(w, total) for w in weights)
        phi = s.restrict(face)
        c = AffineChain.of(s)

        lhs_i = boundary(sd_operator(phi, a, c))
        rhs_i = sd_operator(phi, a, boundary(c))
        if lhs_i != rhs_i:
            fail_i += 1
            if len(notes) < 6:
                notes.append(
                    f"trial {trial} identity (i) failed on {s!r} "
                    f"face {face}: difference {(lhs_i - rhs_i)!r}"
                )

        lhs_ii = boundary(prism_operator(phi, a, c))
        rhs_ii = c - sd_operator(phi, a, c) - prism_operator(phi, a, boundary(c))
        if lhs_ii != rhs_ii:
            fail_ii += 1
            if len(notes) < 6:
                notes.append(
                    f"trial {trial} identity (ii) failed on {s!r} "
                    f"face {face}: difference {(lhs_ii - rhs_ii)!r}"
                )

    report = VerdictReport(
        check="affops-selftest",
        subject=f"trials={trials} seed={seed}",
        assertions=[
            Assertion(
                statement=(
                    "boundary commutes with refinement "
                    f"on {trials} random chains"
                ),
                left=f"{fail_i} failures",
                right="0 failures",
                passed=fail_i == 0,
            ),
            Assertion(
                statement=(
                    "prism homotopy matches identity minus refinement "
                    f"on {trials} random chains"
                ),
                left=f"{fail_ii} failures",
                right="0 failures",
                passed=fail_ii == 0,
            ),
        ],
        notes=notes,
    )
    return report
