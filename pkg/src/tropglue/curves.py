"""Tropical curves in a polyhedral complex and their cut/star/glue calculus.

A curve is a decorated graph: vertices carry exact rational positions and
genera, internal edges carry positive rational lengths and integral
derivative vectors (position(head) = position(tail) + length * derivative),
and ends carry integral derivatives and distinct labels.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .complexes import PolyhedralComplex
from .errors import (
    CurveStructureError,
    CutError,
    GluingError,
    StarInconsistencyError,
)
from .lattice import IntegralVector, as_point, content


def _ivec(v) -> IntegralVector:
    return v if isinstance(v, IntegralVector) else IntegralVector(int(e) for e in v)


@dataclass(frozen=True)
class Vertex:
    id: str
    position: tuple[Fraction, ...]
    genus: int = 0

    def __init__(self, id: str, position, genus: int = 0):
        object.__setattr__(self, "id", str(id))
        object.__setattr__(self, "position", as_point(position))
        if genus < 0:
            raise CurveStructureError(f"vertex {id} has negative genus")
        object.__setattr__(self, "genus", int(genus))


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction
    derivative: IntegralVector

    def __init__(self, id: str, tail: str, head: str, length, derivative):
        object.__setattr__(self, "id", str(id))
        object.__setattr__(self, "tail", str(tail))
        object.__setattr__(self, "head", str(head))
        ln = Fraction(length)
        if ln <= 0:
            raise CurveStructureError(f"edge {id} must have positive length")
        object.__setattr__(self, "length", ln)
        object.__setattr__(self, "derivative", _ivec(derivative))


@dataclass(frozen=True)
class End:
    id: str
    vertex: str
    derivative: IntegralVector
    label: str

    def __init__(self, id: str, vertex: str, derivative, label: str | None = None):
        object.__setattr__(self, "id", str(id))
        object.__setattr__(self, "vertex", str(vertex))
        object.__setattr__(self, "derivative", _ivec(derivative))
        object.__setattr__(self, "label", str(label) if label is not None else str(id))


class TropicalCurve:
    """Decorated graph with an integral-affine map into a complex."""

    def __init__(
        self,
        ambient_dim: int,
        vertices: Iterable[Vertex],
        edges: Iterable[Edge] = (),
        ends: Iterable[End] = (),
    ):
        self.ambient_dim = ambient_dim
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.ends = tuple(ends)
        self._vx = {v.id: v for v in self.vertices}
        if not self.vertices:
            raise CurveStructureError("a tropical curve needs at least one vertex")
        if len(self._vx) != len(self.vertices):
            raise CurveStructureError("duplicate vertex ids")
        eids = [e.id for e in self.edges] + [e.id for e in self.ends]
        if len(set(eids)) != len(eids):
            raise CurveStructureError("duplicate edge/end ids")
        labels = [e.label for e in self.ends]
        if len(set(labels)) != len(labels):
            raise CurveStructureError("end labels must be distinct")
        for v in self.vertices:
            if len(v.position) != ambient_dim:
                raise CurveStructureError(f"vertex {v.id} position has wrong dimension")
        for e in self.edges:
            if e.tail not in self._vx or e.head not in self._vx:
                raise CurveStructureError(f"edge {e.id} references a missing vertex")
            if len(e.derivative) != ambient_dim:
                raise CurveStructureError(f"edge {e.id} derivative has wrong dimension")
        for e in self.ends:
            if e.vertex not in self._vx:
                raise CurveStructureError(f"end {e.id} references a missing vertex")
            if len(e.derivative) != ambient_dim:
                raise CurveStructureError(f"end {e.id} derivative has wrong dimension")

    def vertex(self, vid: str) -> Vertex:
        return self._vx[vid]

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    def end(self, eid: str) -> End:
        for e in self.ends:
            if e.id == eid:
                return e
        raise KeyError(eid)

    def incident_edges(self, vid: str) -> list[Edge]:
        return [e for e in self.edges if vid in (e.tail, e.head)]

    def incident_ends(self, vid: str) -> list[End]:
        return [e for e in self.ends if e.vertex == vid]

    def outgoing_derivatives(self, vid: str) -> list[IntegralVector]:
        """Derivatives of all incident edges and ends, oriented away from vid."""
        out = []
        for e in self.edges:
            if e.tail == vid:
                out.append(e.derivative)
            if e.head == vid:
                out.append(-e.derivative)
        out.extend(e.derivative for e in self.ends if e.vertex == vid)
        return out

    def components(self) -> list[set[str]]:
        adj: dict[str, set[str]] = {v.id: set() for v in self.vertices}
        for e in self.edges:
            adj[e.tail].add(e.head)
            adj[e.head].add(e.tail)
        seen: set[str] = set()
        comps = []
        for v in sorted(adj):
            if v in seen:
                continue
            stack, comp = [v], set()
            while stack:
                cur = stack.pop()
                if cur in comp:
                    continue
                comp.add(cur)
                stack.extend(adj[cur] - comp)
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


def validate(
    curve: TropicalCurve,
    complex_: PolyhedralComplex,
    balancing: str = "interior-only",
) -> ValidationReport:
    """Check that the curve is a genuine tropical curve in the complex.

    ``balancing`` is "on", "off", or "interior-only" (default): the sum of
    outgoing derivatives must vanish at the selected vertices. Boundary
    behaviour is not forced by the theory, hence the default.
    """
    if balancing not in ("on", "off", "interior-only"):
        raise ValueError(f"unknown balancing mode {balancing!r}")
    bad: list[Violation] = []
    for v in curve.vertices:
        if not complex_.contains_point(v.position):
            bad.append(Violation("vertex-outside", v.id, f"vertex {v.id} lies outside the complex"))
    for e in curve.edges:
        tail = curve.vertex(e.tail)
        head = curve.vertex(e.head)
        expected = tuple(
            p + e.length * d for p, d in zip(tail.position, e.derivative)
        )
        if expected != head.position:
            bad.append(Violation(
                "displacement", e.id,
                f"edge {e.id}: head position != tail + length * derivative",
            ))
            continue
        if not complex_.segment_in_complex(tail.position, head.position):
            bad.append(Violation(
                "edge-outside", e.id, f"edge {e.id} leaves the complex"))
    for e in curve.ends:
        base = curve.vertex(e.vertex).position
        if not complex_.ray_in_complex(base, e.derivative):
            bad.append(Violation(
                "end-not-ray", e.id,
                f"end {e.id} does not span an infinite ray in the complex",
            ))
    if balancing != "off":
        for v in curve.vertices:
            if not complex_.contains_point(v.position):
                continue
            if balancing == "interior-only" and not complex_.is_interior_to_maximal_face(
                v.position
            ):
                continue
            total = [0] * curve.ambient_dim
            for d in curve.outgoing_derivatives(v.id):
                total = [a + b for a, b in zip(total, d)]
            if any(total):
                bad.append(Violation(
                    "unbalanced", v.id,
                    f"vertex {v.id} has outgoing derivative sum {tuple(total)}",
                ))
    return ValidationReport(not bad, tuple(bad))


# ---------------------------------------------------------------------------
# numerical invariants


def genus(curve: TropicalCurve) -> int | list[int]:
    """Sum of vertex genera plus the first Betti number of the graph.

    Connected input gives a single integer; disconnected input gives the
    per-component list (sorted by smallest vertex id).
    """
    comps = curve.components()
    if len(comps) == 1:
        b1 = len(curve.edges) - len(curve.vertices) + 1
        return sum(v.genus for v in curve.vertices) + b1
    out = []
    for comp in comps:
        edges = [e for e in curve.edges if e.tail in comp]
        b1 = len(edges) - len(comp) + 1
        out.append(sum(curve.vertex(v).genus for v in comp) + b1)
    return out


def euler_exponent(curve: TropicalCurve) -> int:
    """2g - 2 + n, the exponent of hbar attached to the curve."""
    if not curve.is_connected():
        raise CurveStructureError("euler exponent needs a connected curve")
    return 2 * genus(curve) - 2 + len(curve.ends)


def k_gamma(curve: TropicalCurve) -> int:
    """Product of internal-edge multiplicities; 0 if any edge is contracted."""
    k = 1
    for e in curve.edges:
        k *= content(e.derivative)
    return k


# ---------------------------------------------------------------------------
# automorphisms and isomorphisms
#
# Automorphisms fix every labeled end, preserve vertex positions and genera,
# and map edges to edges with the same length and the same derivative once
# orientations are matched (reversal negates the derivative). Loops are
# mapped at the level of half-edges, so reversing a contracted loop is a
# nontrivial automorphism.


def _vertex_signature(curve: TropicalCurve, vid: str):
    v = curve.vertex(vid)
    decorations = []
    for e in curve.edges:
        if e.tail == vid and e.head == vid:
            decorations.append(("loop", e.length, _canon_pm(e.derivative)))
        elif e.tail == vid:
            decorations.append(("out", e.length, e.derivative.entries))
        elif e.head == vid:
            decorations.append(("out", e.length, (-e.derivative).entries))
    ends = sorted(
        (e.label, e.derivative.entries) for e in curve.incident_ends(vid)
    )
    return (v.position, v.genus, tuple(sorted(decorations)), tuple(ends))


def _canon_pm(d: IntegralVector) -> tuple[int, ...]:
    for e in d.entries:
        if e > 0:
            return d.entries
        if e < 0:
            return (-d).entries
    return d.entries


def _edge_extension_count(
    c1: TropicalCurve, c2: TropicalCurve, sigma: Mapping[str, str]
) -> int:
    """Number of edge bijections compatible with the vertex map sigma, or 0."""
    groups1: dict = {}
    groups2: dict = {}
    loops1: dict = {}
    loops2: dict = {}
    for e in c1.edges:
        if e.tail == e.head:
            loops1.setdefault(e.tail, []).append((e.length, _canon_pm(e.derivative)))
        else:
            key = tuple(sorted((e.tail, e.head)))
            dec = (e.length, e.derivative.entries) if e.tail == key[0] else (
                e.length, (-e.derivative).entries)
            groups1.setdefault(key, []).append(dec)
    for e in c2.edges:
        if e.tail == e.head:
            loops2.setdefault(e.tail, []).append((e.length, _canon_pm(e.derivative)))
        else:
            key = tuple(sorted((e.tail, e.head)))
            dec = (e.length, e.derivative.entries) if e.tail == key[0] else (
                e.length, (-e.derivative).entries)
            groups2.setdefault(key, []).append(dec)
    total = 1
    for (u, w), decs in groups1.items():
        su = sigma[u]
        sw = sigma[w]
        key2 = tuple(sorted((su, sw)))
        decs2 = groups2.get(key2)
        if decs2 is None or len(decs) != len(decs2):
            return 0
        # stored decorations are oriented from min(endpoint ids); re-orient
        # both multisets so they are read from u and from sigma(u)
        src = sorted(
            (l, der) if u == min(u, w) else (l, tuple(-x for x in der))
            for (l, der) in decs
        )
        dst = sorted(
            (l, der) if su == key2[0] else (l, tuple(-x for x in der))
            for (l, der) in decs2
        )
        if src != dst:
            return 0
        counts: dict = {}
        for d in src:
            counts[d] = counts.get(d, 0) + 1
        for c in counts.values():
            total *= math.factorial(c)
    if len(groups2) != len(groups1):
        return 0
    for v, ls in loops1.items():
        ls2 = loops2.get(sigma[v])
        if ls2 is None or sorted(ls) != sorted(ls2):
            return 0
        counts: dict = {}
        for d in ls:
            counts[d] = counts.get(d, 0) + 1
        for c in counts.values():
            total *= math.factorial(c)
        total *= 2 ** len(ls)
    if len(loops2) != len(loops1):
        return 0
    return total


def _vertex_maps(c1: TropicalCurve, c2: TropicalCurve):
    """Backtracking generator of decoration-compatible vertex bijections."""
    v1 = sorted(v.id for v in c1.vertices)
    sig2: dict = {}
    for v in c2.vertices:
        sig2.setdefault(_vertex_signature(c2, v.id), []).append(v.id)
    # ends pin vertices across the two curves by label
    pin: dict[str, str] = {}
    labels1 = {e.label: e for e in c1.ends}
    labels2 = {e.label: e for e in c2.ends}
    if set(labels1) != set(labels2):
        return
    for lbl, e1 in labels1.items():
        e2 = labels2[lbl]
        if e1.derivative.entries != e2.derivative.entries:
            return
        if pin.get(e1.vertex, e2.vertex) != e2.vertex:
            return
        pin[e1.vertex] = e2.vertex
    if len(c1.vertices) != len(c2.vertices) or len(c1.edges) != len(c2.edges):
        return

    def extend(i: int, sigma: dict[str, str], used: set[str]):
        if i == len(v1):
            yield dict(sigma)
            return
        vid = v1[i]
        sig = _vertex_signature(c1, vid)
        forced = pin.get(vid)
        candidates = [forced] if forced is not None else sig2.get(sig, [])
        for cand in candidates:
            if cand in used:
                continue
            if _vertex_signature(c2, cand) != sig:
                continue
            sigma[vid] = cand
            used.add(cand)
            yield from extend(i + 1, sigma, used)
            used.discard(cand)
            del sigma[vid]

    yield from extend(0, {}, set())


def aut_order(curve: TropicalCurve) -> int:
    """Order of the decorated-graph automorphism group fixing every end."""
    total = 0
    for sigma in _vertex_maps(curve, curve):
        total += _edge_extension_count(curve, curve, sigma)
    return total


def are_isomorphic(c1: TropicalCurve, c2: TropicalCurve) -> bool:
    """Isomorphism of decorated curves (positions exact, ends matched by label)."""
    for sigma in _vertex_maps(c1, c2):
        if _edge_extension_count(c1, c2, sigma) > 0:
            return True
    return False


# ---------------------------------------------------------------------------
# cutting


@dataclass(frozen=True)
class CutEdge:
    """A finite stub left at a vertex after cutting an edge or an end.

    ``provenance`` is (original id, side) with side one of "tail", "head",
    "end". Cut edges coming from ends retain the end label.
    """

    id: str
    origin: str
    derivative: IntegralVector
    cut_length: Fraction
    provenance: tuple[str, str]
    label: str | None = None


@dataclass(frozen=True)
class CutCurveComponent:
    """One vertex-containing connected piece of a cut curve."""

    ambient_dim: int
    vertices: tuple[Vertex, ...]
    cut_edges: tuple[CutEdge, ...]

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def evaluation_point(self, cut_edge: CutEdge) -> tuple[Fraction, ...]:
        base = self.vertex(cut_edge.origin).position
        return tuple(
            p + cut_edge.cut_length * d for p, d in zip(base, cut_edge.derivative)
        )


def cut(
    curve: TropicalCurve, cut_points: Mapping[str, Fraction]
) -> list[CutCurveComponent]:
    """Cut the curve at one chosen point on every edge and every end.

    Internal-edge cut points must be strictly between the endpoints; end cut
    points are any positive finite parameter. Each internal edge e yields two
    cut edges (tail side, head side) with the head-side derivative negated;
    each end yields one cut edge retaining its label. Pieces not attached to
    a vertex are discarded, so the components are indexed by vertices.
    """
    wanted = {e.id for e in curve.edges} | {e.id for e in curve.ends}
    given = set(cut_points)
    if wanted != given:
        missing = sorted(wanted - given)
        extra = sorted(given - wanted)
        raise CutError(f"cut points must cover every edge exactly; missing={missing} unknown={extra}")
    stubs: dict[str, list[CutEdge]] = {v.id: [] for v in curve.vertices}
    for e in curve.edges:
        t = Fraction(cut_points[e.id])
        if not (0 < t < e.length):
            raise CutError(
                f"cut point on edge {e.id} must satisfy 0 < t < length, got {t}"
            )
        stubs[e.tail].append(CutEdge(
            f"{e.id}.tail", e.tail, e.derivative, t, (e.id, "tail")))
        stubs[e.head].append(CutEdge(
            f"{e.id}.head", e.head, -e.derivative, e.length - t, (e.id, "head")))
    for e in curve.ends:
        t = Fraction(cut_points[e.id])
        if t <= 0:
            raise CutError(f"cut point on end {e.id} must be a positive parameter")
        stubs[e.vertex].append(CutEdge(
            f"{e.id}.end", e.vertex, e.derivative, t, (e.id, "end"), label=e.label))
    out = []
    for v in sorted(stubs):
        out.append(CutCurveComponent(
            curve.ambient_dim, (curve.vertex(v),), tuple(stubs[v])))
    return out


def midpoint_cut_points(curve: TropicalCurve) -> dict[str, Fraction]:
    """Default cut data: internal edges at midpoints, ends at parameter 1."""
    pts = {e.id: e.length / 2 for e in curve.edges}
    pts.update({e.id: Fraction(1) for e in curve.ends})
    return pts


def induced_matching(components: Sequence[CutCurveComponent]) -> list[tuple[str, str]]:
    """Pair tail/head cut edges coming from the same original internal edge."""
    sides: dict[str, dict[str, str]] = {}
    for comp in components:
        for ce in comp.cut_edges:
            orig, side = ce.provenance
            if side in ("tail", "head"):
                sides.setdefault(orig, {})[side] = ce.id
    out = []
    for orig in sorted(sides):
        pair = sides[orig]
        if set(pair) != {"tail", "head"}:
            raise GluingError(f"edge {orig} is missing a cut side")
        out.append((pair["tail"], pair["head"]))
    return out


# ---------------------------------------------------------------------------
# star curves


@dataclass(frozen=True)
class Ray:
    provenance: tuple[str, str]  # ("edge"|"end", id)
    derivative: IntegralVector
    label: str | None = None


@dataclass(frozen=True)
class StarCurve:
    """Single vertex at the apex of a fan, with semi-infinite rays."""

    fan: "object"
    vertex_id: str
    genus: int
    rays: tuple[Ray, ...]


def star(curve: TropicalCurve, vertex_id: str, complex_: PolyhedralComplex) -> StarCurve:
    """The star curve at a vertex: rays in the tangent cone of the complex."""
    v = curve.vertex(vertex_id)
    fan = complex_.tangent_cone(v.position)
    rays: list[Ray] = []
    for e in curve.edges:
        if e.tail == vertex_id:
            rays.append(Ray(("edge", e.id), e.derivative))
        if e.head == vertex_id:
            rays.append(Ray(("edge", e.id), -e.derivative))
    for e in curve.ends:
        if e.vertex == vertex_id:
            rays.append(Ray(("end", e.id), e.derivative, label=e.label))
    for r in rays:
        if not fan.contains_ray(r.derivative):
            raise StarInconsistencyError(
                f"ray from {r.provenance} with derivative {r.derivative.entries} "
                f"is not contained in the tangent cone at {vertex_id}"
            )
    return StarCurve(fan, vertex_id, v.genus, tuple(rays))


# ---------------------------------------------------------------------------
# gluing


def glue(
    components: Sequence[CutCurveComponent],
    matching: Iterable[tuple[str, str]],
    complex_: PolyhedralComplex,
) -> TropicalCurve:
    """Reassemble cut components into a tropical curve.

    Matched cut edges must evaluate to the same point of the complex and
    carry opposite derivatives; unmatched cut edges must extend to
    semi-infinite ends. The round trip glue(cut(curve)) with the induced
    matching reproduces the curve.
    """
    if not components:
        raise GluingError("nothing to glue")
    dim = components[0].ambient_dim
    index: dict[str, tuple[CutCurveComponent, CutEdge]] = {}
    vertices: dict[str, Vertex] = {}
    for comp in components:
        if comp.ambient_dim != dim:
            raise GluingError("components live in different ambient dimensions")
        for v in comp.vertices:
            if v.id in vertices:
                raise GluingError(f"duplicate vertex id {v.id} across components")
            vertices[v.id] = v
        for ce in comp.cut_edges:
            if ce.id in index:
                raise GluingError(f"duplicate cut edge id {ce.id}")
            index[ce.id] = (comp, ce)
    pairs = [(str(a), str(b)) for a, b in matching]
    used: set[str] = set()
    edges: list[Edge] = []
    for a, b in pairs:
        if a not in index or b not in index:
            raise GluingError(f"matching references unknown cut edge in ({a}, {b})")
        if a in used or b in used:
            raise GluingError(f"cut edge matched twice in ({a}, {b})")
        used.update((a, b))
        comp_a, ce_a = index[a]
        comp_b, ce_b = index[b]
        if ce_a.derivative.entries != (-ce_b.derivative).entries:
            raise GluingError(
                f"cut edges ({a}, {b}) do not have opposite derivatives"
            )
        if comp_a.evaluation_point(ce_a) != comp_b.evaluation_point(ce_b):
            raise GluingError(
                f"cut edges ({a}, {b}) evaluate to different points of the complex"
            )
        # contracted stubs glue to a contracted edge only if the evaluation
        # points already agree, which the check above guarantees
        orig_a, side_a = ce_a.provenance
        orig_b, side_b = ce_b.provenance
        if orig_a == orig_b and {side_a, side_b} == {"tail", "head"}:
            eid = orig_a
            tail_ce, head_ce = (ce_a, ce_b) if side_a == "tail" else (ce_b, ce_a)
        else:
            eid = f"glued:{a}+{b}"
            tail_ce, head_ce = ce_a, ce_b
        edges.append(Edge(
            eid, tail_ce.origin, head_ce.origin,
            tail_ce.cut_length + head_ce.cut_length, tail_ce.derivative))
    ends: list[End] = []
    for comp in components:
        for ce in comp.cut_edges:
            if ce.id in used:
                continue
            base = comp.vertex(ce.origin).position
            if not complex_.ray_in_complex(base, ce.derivative):
                raise GluingError(
                    f"unmatched cut edge {ce.id} does not extend semi-infinitely"
                )
            orig, side = ce.provenance
            if side == "end":
                ends.append(End(orig, ce.origin, ce.derivative, label=ce.label))
            else:
                ends.append(End(ce.id, ce.origin, ce.derivative, label=ce.id))
    return TropicalCurve(dim, vertices.values(), edges, ends)
