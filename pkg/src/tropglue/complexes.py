"""Embedded polyhedral complexes: tropical parts of exploded manifolds.

A complex is a finite set of closed integral-affine polytopes in one ambient
R^N together with a declared face-of relation. Dual complexes of
normal-crossing degenerations, stratum queries, and tangent cones (the
tropical side of tropical completion) live here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    ComplexValidationError,
    DimensionMismatchError,
    OutsideComplexError,
)
from .lattice import (
    IntegralAffineFunctional,
    IntegralAffinePolytope,
    Row,
    _normalize_row,
    as_point,
    feasible,
    rational_rank,
    spans_infinite_ray,
)

_COVERAGE_BUDGET = 20000


@dataclass(frozen=True)
class ComplexStratum:
    """The relatively open stratum of a complex at a point."""

    face_id: str
    active: frozenset[int]
    dim: int
    point: tuple[Fraction, ...]


@dataclass(frozen=True)
class Fan:
    """Cones with apex at the origin; the tropical part of a completion B<v>."""

    ambient_dim: int
    cones: tuple[IntegralAffinePolytope, ...]
    source_face_ids: tuple[str, ...]

    def __post_init__(self):
        for cone in self.cones:
            if not cone.is_cone():
                raise ComplexValidationError("fan cone has a nonzero constant term")
            if not cone.contains(tuple(Fraction(0) for _ in range(self.ambient_dim))):
                raise ComplexValidationError("fan cone does not contain the origin")

    def origin(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(0) for _ in range(self.ambient_dim))

    def contains_ray(self, v) -> bool:
        return any(spans_infinite_ray(c, self.origin(), v) for c in self.cones)

    def minimal_cone_for_ray(self, v) -> str | None:
        """Source face id of the smallest cone containing the ray along v."""
        holders = [
            (cone, fid)
            for cone, fid in zip(self.cones, self.source_face_ids)
            if spans_infinite_ray(cone, self.origin(), v)
        ]
        for cone, fid in holders:
            if all(cone.is_subset_of(other) for other, _ in holders):
                return fid
        return holders[0][1] if holders else None


def _covered_by(rows: list[Row], dim: int, covers: Sequence[IntegralAffinePolytope],
                budget: list[int]) -> bool:
    """Exact test that the feasible set of ``rows`` is inside the union of covers."""
    budget[0] -= 1
    if budget[0] < 0:
        raise ComplexValidationError("complex-condition coverage check exceeded budget")
    if not feasible(rows, dim):
        return True
    if not covers:
        return False
    head, tail = covers[0], covers[1:]
    # points of the region outside `head` violate one of its constraints
    for c, s in zip(head.constraints, head.strict):
        neg = _normalize_row([Fraction(-a) for a in c.linear], -c.constant, not s)
        if not _covered_by(rows + [neg], dim, tail, budget):
            return False
    return True


class PolyhedralComplex:
    """An embedded complex of closed integral-affine polytopes.

    ``chart_real_dim`` is optional bookkeeping metadata: the real dimension of
    the exploded chart over each face, used by the evaluation-space module.
    Pass an int for a uniform value or a mapping keyed by face id.
    """

    def __init__(
        self,
        ambient_dim: int,
        faces: Mapping[str, IntegralAffinePolytope],
        incidence: Iterable[tuple[str, str]] = (),
        chart_real_dim: int | Mapping[str, int] | None = None,
        validate: bool = True,
    ):
        self.ambient_dim = ambient_dim
        self.faces = dict(faces)
        pairs = {(str(a), str(b)) for a, b in incidence}
        self.incidence = frozenset(pairs)
        if isinstance(chart_real_dim, Mapping):
            self._chart_dims = dict(chart_real_dim)
        elif chart_real_dim is None:
            self._chart_dims = None
        else:
            self._chart_dims = {fid: int(chart_real_dim) for fid in self.faces}
        self._below: dict[str, set[str]] = {fid: set() for fid in self.faces}
        for sub, sup in pairs:
            if sub not in self.faces or sup not in self.faces:
                raise ComplexValidationError(f"incidence names unknown face: {sub}, {sup}")
            self._below[sup].add(sub)
        # transitive closure of the face-of relation
        changed = True
        while changed:
            changed = False
            for sup, subs in self._below.items():
                extra = set()
                for s in subs:
                    extra |= self._below[s]
                if not extra <= subs:
                    subs |= extra
                    changed = True
        if validate:
            self._validate()

    # -- structure ----------------------------------------------------------

    def face_ids(self) -> list[str]:
        return sorted(self.faces)

    def subfaces_of(self, face_id: str) -> set[str]:
        return set(self._below[face_id])

    def is_face_of(self, sub: str, sup: str) -> bool:
        return sub == sup or sub in self._below[sup]

    def chart_real_dim_for(self, face_id: str) -> int | None:
        if self._chart_dims is None:
            return None
        return self._chart_dims.get(face_id)

    def _validate(self) -> None:
        for fid, poly in self.faces.items():
            if poly.ambient_dim != self.ambient_dim:
                raise DimensionMismatchError(f"face {fid} has wrong ambient dimension")
            if not poly.is_closed():
                raise ComplexValidationError(f"face {fid} is not closed")
        for sub, sup in self.incidence:
            self._check_face_inclusion(sub, sup)
        ids = self.face_ids()
        for a, b in itertools.combinations(ids, 2):
            self._check_pair_intersection(a, b)

    def _check_face_inclusion(self, sub: str, sup: str) -> None:
        small, big = self.faces[sub], self.faces[sup]
        if not small.is_subset_of(big):
            raise ComplexValidationError(f"declared face {sub} is not inside {sup}")
        # `sub` must be the face of `sup` cut out by the constraints of `sup`
        # that vanish identically on it
        active = []
        for i, c in enumerate(big.constraints):
            rows = small._rows(extra=[([Fraction(a) for a in c.linear], c.constant, True)])
            if not feasible(rows, self.ambient_dim):
                active.append(i)
        cons = list(big.constraints)
        flags = list(big.strict)
        for i in active:
            cons.append(IntegralAffineFunctional(
                [-a for a in big.constraints[i].linear], -big.constraints[i].constant))
            flags.append(False)
        induced = IntegralAffinePolytope(self.ambient_dim, cons, flags)
        if not induced.is_subset_of(small):
            raise ComplexValidationError(
                f"{sub} is not a geometric face of {sup}: the induced face is larger"
            )

    def _check_pair_intersection(self, a: str, b: str) -> None:
        fa, fb = self.faces[a], self.faces[b]
        rows = fa.intersection_rows(fb)
        if not feasible(rows, self.ambient_dim):
            return
        common = [
            self.faces[k]
            for k in self.face_ids()
            if self.is_face_of(k, a) and self.is_face_of(k, b)
        ]
        budget = [_COVERAGE_BUDGET]
        if not _covered_by(rows, self.ambient_dim, common, budget):
            raise ComplexValidationError(
                f"intersection of faces {a} and {b} is not a union of common faces"
            )

    # -- point queries ------------------------------------------------------

    def contains_point(self, point) -> bool:
        pt = as_point(point)
        return any(f.contains(pt) for f in self.faces.values())

    def faces_containing(self, point) -> list[str]:
        pt = as_point(point)
        return [fid for fid in self.face_ids() if self.faces[fid].contains(pt)]

    def stratum_containing(self, point) -> ComplexStratum:
        """The unique minimal face and relatively open stratum holding the point."""
        pt = as_point(point)
        holders = self.faces_containing(pt)
        if not holders:
            raise OutsideComplexError(f"point {pt} lies in no face")
        minimal = [
            f for f in holders
            if all(self.is_face_of(f, g) for g in holders)
        ]
        if len(minimal) != 1:
            raise OutsideComplexError(
                f"no unique minimal face contains {pt}; complex may be malformed"
            )
        fid = minimal[0]
        face = self.faces[fid]
        active = face.active_set(pt)
        lin_rows = [[Fraction(x) for x in face.constraints[i].linear] for i in active]
        return ComplexStratum(fid, active, self.ambient_dim - rational_rank(lin_rows), pt)

    def is_interior_to_maximal_face(self, point) -> bool:
        """True iff the point lies in the open top stratum of a single maximal face."""
        pt = as_point(point)
        holders = self.faces_containing(pt)
        if len(holders) != 1:
            return False
        face = self.faces[holders[0]]
        stratum = self.stratum_containing(pt)
        return stratum.dim == face.dim()

    # -- tangent cones and completion ----------------------------------------

    def tangent_cone(self, point) -> Fan:
        """The fan of local cones at a point: the tropical part of B<point>."""
        pt = as_point(point)
        holders = self.faces_containing(pt)
        if not holders:
            raise OutsideComplexError(f"point {pt} lies in no face")
        cones = []
        for fid in holders:
            cones.append(local_cone(self.faces[fid], pt))
        return Fan(self.ambient_dim, tuple(cones), tuple(holders))

    def completed_at(self, point) -> "PolyhedralComplex":
        """The tropical completion at a point: faces become their local cones."""
        pt = as_point(point)
        fan = self.tangent_cone(pt)
        faces = dict(zip(fan.source_face_ids, fan.cones))
        incidence = [
            (a, b) for (a, b) in self.incidence if a in faces and b in faces
        ]
        dims = None
        if self._chart_dims is not None:
            dims = {fid: self._chart_dims[fid] for fid in faces if fid in self._chart_dims}
        return PolyhedralComplex(
            self.ambient_dim, faces, incidence, chart_real_dim=dims, validate=False
        )

    def closure_of_stratum(self, face_id: str) -> "PolyhedralComplex":
        """The closed face and everything below it, as a sub-complex."""
        if face_id not in self.faces:
            raise OutsideComplexError(f"unknown face id {face_id!r}")
        keep = {face_id} | self._below[face_id]
        faces = {fid: self.faces[fid] for fid in keep}
        incidence = [(a, b) for (a, b) in self.incidence if a in keep and b in keep]
        dims = None
        if self._chart_dims is not None:
            dims = {fid: self._chart_dims[fid] for fid in keep if fid in self._chart_dims}
        return PolyhedralComplex(
            self.ambient_dim, faces, incidence, chart_real_dim=dims, validate=False
        )

    # -- segments and rays ----------------------------------------------------

    def _segment_breakpoints(self, a, b) -> list[Fraction]:
        pa, pb = as_point(a), as_point(b)
        ts = {Fraction(0), Fraction(1)}
        for face in self.faces.values():
            for c in face.constraints:
                v0 = c.value_at(pa)
                v1 = c.value_at(pb)
                denom = v1 - v0
                if denom != 0:
                    t = -v0 / denom
                    if 0 < t < 1:
                        ts.add(t)
        return sorted(ts)

    def segment_in_complex(self, a, b) -> bool:
        """Exact containment of the closed segment [a, b] in the complex."""
        pa, pb = as_point(a), as_point(b)
        ts = self._segment_breakpoints(pa, pb)
        samples = list(ts)
        samples += [(ts[i] + ts[i + 1]) / 2 for i in range(len(ts) - 1)]
        for t in samples:
            pt = tuple(x + t * (y - x) for x, y in zip(pa, pb))
            if not self.contains_point(pt):
                return False
        return True

    def ray_in_complex(self, base, v) -> bool:
        """Exact containment of {base + t v : t >= 0} in the complex."""
        pt = as_point(base)
        if not self.contains_point(pt):
            return False
        ents = tuple(int(e) for e in v)
        if all(e == 0 for e in ents):
            return True
        # crossings of all constraint hyperplanes along the ray
        ts = {Fraction(0)}
        for face in self.faces.values():
            for c in face.constraints:
                slope = c.pair(ents)
                if slope != 0:
                    t = -c.value_at(pt) / slope
                    if t > 0:
                        ts.add(t)
        ordered = sorted(ts)
        samples = list(ordered)
        samples += [(ordered[i] + ordered[i + 1]) / 2 for i in range(len(ordered) - 1)]
        for t in samples:
            q = tuple(x + t * e for x, e in zip(pt, ents))
            if not self.contains_point(q):
                return False
        # beyond the last crossing, membership is decided by a single face
        far = ordered[-1] + 1
        q = tuple(x + far * e for x, e in zip(pt, ents))
        for fid in self.faces_containing(q):
            if spans_infinite_ray(self.faces[fid], q, ents):
                return True
        return False

    def minimal_face_containing_segment(self, a, b) -> str:
        """Smallest face containing the whole closed segment [a, b]."""
        pa, pb = as_point(a), as_point(b)
        ts = self._segment_breakpoints(pa, pb)
        samples = list(ts) + [(ts[i] + ts[i + 1]) / 2 for i in range(len(ts) - 1)]
        pts = [tuple(x + t * (y - x) for x, y in zip(pa, pb)) for t in samples]
        holders = [
            fid for fid in self.face_ids()
            if all(self.faces[fid].contains(p) for p in pts)
        ]
        if not holders:
            raise OutsideComplexError("segment is not contained in a single face")
        minimal = [f for f in holders if all(self.is_face_of(f, g) for g in holders)]
        if not minimal:
            raise OutsideComplexError("no minimal face contains the segment")
        return minimal[0]

    def minimal_face_containing_ray(self, base, v) -> str:
        """Smallest face containing the whole ray from base along v."""
        pt = as_point(base)
        ents = tuple(int(e) for e in v)
        if all(e == 0 for e in ents):
            return self.stratum_containing(pt).face_id
        holders = []
        for fid in self.face_ids():
            face = self.faces[fid]
            if face.contains(pt) and spans_infinite_ray(face, pt, ents):
                holders.append(fid)
        if not holders:
            raise OutsideComplexError("ray is not contained in a single face")
        minimal = [f for f in holders if all(self.is_face_of(f, g) for g in holders)]
        if not minimal:
            raise OutsideComplexError("no minimal face contains the ray")
        return minimal[0]


def local_cone(polytope: IntegralAffinePolytope, point) -> IntegralAffinePolytope:
    """The cone {t (x - p) : x in P near p, t >= 0}: active constraints, zeroed."""
    pt = as_point(point)
    if not polytope.contains(pt):
        raise OutsideComplexError(f"point {pt} not in polytope")
    cons = []
    for c in polytope.constraints:
        if c.value_at(pt) == 0:
            cons.append(IntegralAffineFunctional(c.linear, 0))
    return IntegralAffinePolytope(polytope.ambient_dim, cons)


# ---------------------------------------------------------------------------
# dual complexes of normal-crossing degenerations


@dataclass(frozen=True)
class NCDegenerationDescription:
    """Components of a singular fiber and which intersections are nonempty."""

    components: tuple[str, ...]
    intersections: tuple[frozenset[str], ...]

    def __init__(self, components: Iterable[str], intersections: Iterable[Iterable[str]]):
        comps = tuple(str(c) for c in components)
        if len(set(comps)) != len(comps):
            raise ComplexValidationError("duplicate component names")
        inters = tuple(frozenset(str(x) for x in i) for i in intersections)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "intersections", inters)
        known = set(comps)
        declared = {i for i in inters}
        for inter in inters:
            if not inter <= known:
                raise ComplexValidationError(f"intersection {sorted(inter)} names unknown components")
            if len(inter) < 2:
                continue
            if len(inter) > 2:
                for sub in itertools.combinations(sorted(inter), len(inter) - 1):
                    if frozenset(sub) not in declared:
                        raise ComplexValidationError(
                            f"intersections are not subset-closed: {sorted(sub)} missing "
                            f"below {sorted(inter)}"
                        )


def dual_complex(
    description: NCDegenerationDescription,
    chart_real_dim: int | Mapping[str, int] | None = None,
) -> PolyhedralComplex:
    """The dual complex: a vertex per component, a unit simplex per intersection.

    Embedded in R^n with the vertex for component i at the i-th coordinate
    unit point, n the number of components.
    """
    comps = description.components
    n = len(comps)
    index = {name: i for i, name in enumerate(comps)}
    subsets: set[frozenset[str]] = {frozenset({c}) for c in comps}
    subsets |= {i for i in description.intersections if len(i) >= 1}
    faces = {}
    for sub in subsets:
        fid = "+".join(sorted(sub))
        cons = []
        ones = [1] * n
        cons.append(IntegralAffineFunctional(ones, -1))
        cons.append(IntegralAffineFunctional([-1] * n, 1))
        for name, i in index.items():
            e = [0] * n
            e[i] = 1
            if name in sub:
                cons.append(IntegralAffineFunctional(e, 0))
            else:
                cons.append(IntegralAffineFunctional(e, 0))
                cons.append(IntegralAffineFunctional([-x for x in e], 0))
        faces[fid] = IntegralAffinePolytope(n, cons)
    incidence = []
    for a, b in itertools.permutations(subsets, 2):
        if a < b:
            incidence.append(("+".join(sorted(a)), "+".join(sorted(b))))
    return PolyhedralComplex(
        n, faces, incidence, chart_real_dim=chart_real_dim, validate=True
    )
