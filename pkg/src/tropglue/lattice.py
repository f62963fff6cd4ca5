"""Exact integer/rational linear algebra and integral-affine polytopes.

Everything here is computed over arbitrary-precision integers and
``fractions.Fraction``; there is no floating point. Polytopes are rational
polyhedra in R^N cut out by integral-affine functionals ``alpha >= 0`` (or
``alpha > 0`` when the matching strictness flag is set). Feasibility,
witness points and projections are decided by exact Fourier-Motzkin
elimination.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatchError,
    EmptyPolytopeError,
    EmptyStratumError,
    InvalidQuotientError,
    NoRayError,
    PointNotInPolytopeError,
)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected a rational number, got {type(x).__name__}")


def as_point(coords: Iterable) -> tuple[Fraction, ...]:
    """Coerce an iterable of rationals to an exact point."""
    return tuple(_frac(c) for c in coords)


# ---------------------------------------------------------------------------
# integral vectors


@dataclass(frozen=True)
class IntegralVector:
    """A vector with integer entries; the derivative data of tropical edges."""

    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int]):
        ents = tuple(entries)
        for e in ents:
            if not isinstance(e, int) or isinstance(e, bool):
                raise TypeError(f"integral vector entries must be ints, got {e!r}")
        object.__setattr__(self, "entries", ents)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __add__(self, other: "IntegralVector") -> "IntegralVector":
        self._check_dim(other)
        return IntegralVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "IntegralVector") -> "IntegralVector":
        self._check_dim(other)
        return IntegralVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "IntegralVector":
        return IntegralVector(-a for a in self.entries)

    def __mul__(self, k: int) -> "IntegralVector":
        return IntegralVector(k * a for a in self.entries)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def _check_dim(self, other: "IntegralVector") -> None:
        if len(self) != len(other):
            raise DimensionMismatchError(
                f"vector dimensions differ: {len(self)} vs {len(other)}"
            )


def _as_int_tuple(v) -> tuple[int, ...]:
    if isinstance(v, IntegralVector):
        return v.entries
    return tuple(int(e) for e in v)


def content(v) -> int:
    """gcd of the absolute entries; 0 exactly for the zero vector."""
    return math.gcd(*_as_int_tuple(v)) if len(_as_int_tuple(v)) else 0


def primitive(v) -> IntegralVector:
    """The primitive vector u with v = content(v) * u; undefined for v = 0."""
    ents = _as_int_tuple(v)
    c = math.gcd(*ents) if ents else 0
    if c == 0:
        raise ValueError("the zero vector has no primitive direction")
    return IntegralVector(e // c for e in ents)


def primitive_canonical(v) -> IntegralVector:
    """primitive(v) with sign normalised so the first nonzero entry is > 0.

    Used wherever only the line spanned by v matters, e.g. quotient lattices,
    so that v and -v produce identical output.
    """
    u = primitive(v)
    for e in u.entries:
        if e != 0:
            return u if e > 0 else -u
    raise AssertionError("unreachable: primitive vector is nonzero")


def dot(linear: Sequence[int], v) -> int:
    ents = _as_int_tuple(v)
    if len(linear) != len(ents):
        raise DimensionMismatchError("covector/vector length mismatch")
    return sum(a * b for a, b in zip(linear, ents))


# ---------------------------------------------------------------------------
# integer matrices


def abs_det(matrix: Sequence[Sequence[int]]) -> int:
    """|det M| for a square integer matrix, by fraction-free (Bareiss) elimination."""
    n = len(matrix)
    rows = [list(int(x) for x in row) for row in matrix]
    for row in rows:
        if len(row) != n:
            raise DimensionMismatchError(
                f"abs_det needs a square matrix, got a row of length {len(row)} in a {n}-row matrix"
            )
    if n == 0:
        return 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if pivot is None:
                return 0
            rows[k], rows[pivot] = rows[pivot], rows[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = rows[k][k]
    return abs(rows[n - 1][n - 1])


def elementary_divisors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (nonnegative, each dividing the next).

    Works for any rectangular integer matrix and never computes a determinant,
    so it serves as an independent oracle for abs_det.
    """
    rows = [list(int(x) for x in row) for row in matrix]
    m = len(rows)
    n = len(rows[0]) if m else 0
    if any(len(r) != n for r in rows):
        raise DimensionMismatchError("ragged matrix")
    divisors: list[int] = []
    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = abs(rows[i][j])
                if a and (best is None or a < best):
                    best, pivot = a, (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        rows[t], rows[pi] = rows[pi], rows[t]
        for r in rows:
            r[t], r[pj] = r[pj], r[t]
        while True:
            if rows[t][t] < 0:
                rows[t] = [-x for x in rows[t]]
            done = True
            for i in range(t + 1, m):
                if rows[i][t]:
                    q = rows[i][t] // rows[t][t]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[t])]
                    if rows[i][t]:
                        rows[t], rows[i] = rows[i], rows[t]
                        done = False
                        break
            if not done:
                continue
            for j in range(t + 1, n):
                if rows[t][j]:
                    q = rows[t][j] // rows[t][t]
                    for r in rows:
                        r[j] -= q * r[t]
                    if rows[t][j]:
                        for r in rows:
                            r[t], r[j] = r[j], r[t]
                        done = False
                        break
            if done:
                break
        # enforce divisibility of the remaining block
        fixed = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if rows[i][j] % rows[t][t]:
                    rows[t] = [a + b for a, b in zip(rows[t], rows[i])]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        divisors.append(abs(rows[t][t]))
        t += 1
    divisors.extend([0] * (min(m, n) - len(divisors)))
    return divisors


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def unimodular_with_inverse(w) -> tuple[list[list[int]], list[list[int]]]:
    """(U, V) integer matrices with det +-1, V = U^-1 and U @ w = e_0.

    Requires w primitive. The construction is deterministic: entries of w are
    folded into position 0 by extended-gcd row operations in index order.
    """
    ents = list(_as_int_tuple(w))
    n = len(ents)
    if math.gcd(*ents) != 1:
        raise ValueError("unimodular completion needs a primitive vector")
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    vec = ents[:]
    for i in range(1, n):
        a, b = vec[0], vec[i]
        if b == 0 and a > 0:
            continue
        g, x, y = _xgcd(a, b)
        # rows of U: row0' = x*row0 + y*rowi ; rowi' = -(b/g)*row0 + (a/g)*rowi
        p, q = -(b // g), a // g
        r0 = [x * U[0][j] + y * U[i][j] for j in range(n)]
        ri = [p * U[0][j] + q * U[i][j] for j in range(n)]
        U[0], U[i] = r0, ri
        # columns of V pick up the inverse operation
        for k in range(n):
            c0, ci = V[k][0], V[k][i]
            V[k][0] = c0 * q - ci * p
            V[k][i] = -c0 * y + ci * x
        vec[0], vec[i] = g, 0
    if vec[0] != 1:
        raise AssertionError("primitive vector did not reduce to e_0")
    return U, V


def mat_vec(matrix: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(row[j] * v[j] for j in range(len(v))) for row in matrix]


# ---------------------------------------------------------------------------
# exact rational linear solves (used by strata dimensions and the enumerator)


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    mat = [list(map(_frac, r)) for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    col = 0
    while rank < len(mat) and col < ncols:
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [x / pv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


def solve_exact(
    a_rows: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> tuple[str, tuple[Fraction, ...] | None]:
    """Solve A x = b exactly. Returns ("unique", x), ("many", some x) or ("none", None)."""
    mat = [list(map(_frac, row)) + [_frac(rhs)] for row, rhs in zip(a_rows, b)]
    ncols = len(a_rows[0]) if a_rows else 0
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [x / pv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, len(mat)):
        if mat[i][ncols] != 0:
            return "none", None
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        x[col] = mat[r][ncols]  # free columns stay 0
    status = "unique" if rank == ncols else "many"
    return status, tuple(x)


# ---------------------------------------------------------------------------
# Fourier-Motzkin machinery
#
# A row is (coeffs, const, strict) encoding coeffs . x + const >= 0, with
# strict inequality when the flag is set. Rows are kept as coprime integer
# vectors (const included) to bound coefficient growth.

Row = tuple[tuple[int, ...], int, bool]


def _normalize_row(coeffs: Sequence[Fraction], const: Fraction, strict: bool) -> Row:
    fracs = [_frac(c) for c in coeffs] + [_frac(const)]
    scale = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
    ints = [int(f * scale) for f in fracs]
    g = math.gcd(*ints) if any(ints) else 1
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints[:-1]), ints[-1], strict


def _rows_of(
    constraints: Iterable[tuple[Sequence[Fraction], Fraction, bool]]
) -> list[Row]:
    return [_normalize_row(c, k, s) for (c, k, s) in constraints]


def _eliminate_var(rows: list[Row], j: int) -> list[Row]:
    """One Fourier-Motzkin step removing variable j (coordinates keep length)."""
    zero, pos, neg = [], [], []
    for coeffs, const, strict in rows:
        a = coeffs[j]
        if a == 0:
            zero.append((coeffs, const, strict))
        elif a > 0:
            pos.append((coeffs, const, strict))
        else:
            neg.append((coeffs, const, strict))
    out = list(zero)
    seen = {(c, k, s) for (c, k, s) in zero}
    for (cp, kp, sp), (cn, kn, sn) in itertools.product(pos, neg):
        ap, an = cp[j], cn[j]
        coeffs = tuple(ap * bn - an * bp for bp, bn in zip(cp, cn))
        const = ap * kn - an * kp
        row = _normalize_row(
            [Fraction(c) for c in coeffs], Fraction(const), sp or sn
        )
        if row not in seen:
            seen.add(row)
            out.append(row)
    return out


def _atom_ok(const: int, strict: bool) -> bool:
    return const > 0 if strict else const >= 0


def feasible(rows: list[Row], dim: int) -> bool:
    current = rows
    for j in range(dim):
        current = _eliminate_var(current, j)
        if any(
            all(c == 0 for c in coeffs) and not _atom_ok(k, s)
            for coeffs, k, s in current
        ):
            return False
    return all(
        _atom_ok(k, s)
        for coeffs, k, s in current
        if all(c == 0 for c in coeffs)
    )


def find_point(rows: list[Row], dim: int) -> tuple[Fraction, ...] | None:
    """A rational point satisfying the system, or None when infeasible."""
    stages = [rows]
    for j in range(dim - 1, -1, -1):
        # eliminate variables from the back so stage k constrains x_0..x_{k-1}
        stages.append(_eliminate_var(stages[-1], j))
    final = stages[-1]
    if not all(_atom_ok(k, s) for c, k, s in final if all(x == 0 for x in c)):
        return None
    values: list[Fraction] = []
    for j in range(dim):
        system = stages[dim - 1 - j]  # constrains x_0 .. x_j
        lo: Fraction | None = None
        lo_strict = False
        hi: Fraction | None = None
        hi_strict = False
        for coeffs, const, strict in system:
            a = coeffs[j]
            if a == 0:
                continue
            rest = Fraction(const) + sum(
                Fraction(coeffs[i]) * values[i] for i in range(j)
            )
            bound = -rest / a
            if a > 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
            else:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
        if lo is None and hi is None:
            values.append(Fraction(0))
        elif lo is None:
            values.append(hi - 1 if hi_strict else hi)
        elif hi is None:
            values.append(lo + 1 if lo_strict else lo)
        elif lo == hi:
            if lo_strict or hi_strict:
                return None
            values.append(lo)
        else:
            values.append((lo + hi) / 2)
    return tuple(values)


def fourier_motzkin_project(rows: list[Row], dim: int, drop: int) -> list[Row]:
    """Project the system onto the complement of variable ``drop``.

    The returned rows have ``dim - 1`` coefficients (the dropped coordinate is
    excised), so they describe the image of the feasible set under deleting
    that coordinate.
    """
    eliminated = _eliminate_var(rows, drop)
    out = []
    for coeffs, const, strict in eliminated:
        reduced = coeffs[:drop] + coeffs[drop + 1 :]
        out.append((reduced, const, strict))
    return out


# ---------------------------------------------------------------------------
# integral-affine functionals and polytopes


@dataclass(frozen=True)
class IntegralAffineFunctional:
    """alpha(x) = linear . x + constant with an integer linear part."""

    linear: tuple[int, ...]
    constant: Fraction

    def __init__(self, linear: Iterable[int], constant) -> None:
        lin = tuple(int(a) for a in linear)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "constant", _frac(constant))

    def value_at(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != len(self.linear):
            raise DimensionMismatchError("point dimension mismatch")
        return sum(
            (a * _frac(x) for a, x in zip(self.linear, point)), start=self.constant
        )

    def pair(self, v) -> int:
        """Pairing of the linear part with an integral direction vector."""
        return dot(self.linear, v)


class IntegralAffinePolytope:
    """Feasible region of integral-affine constraints, validated nonempty."""

    __slots__ = ("ambient_dim", "constraints", "strict", "_point")

    def __init__(
        self,
        ambient_dim: int,
        constraints: Iterable[IntegralAffineFunctional | tuple],
        strict: Iterable[bool] | None = None,
    ):
        cons = []
        for c in constraints:
            if isinstance(c, IntegralAffineFunctional):
                cons.append(c)
            else:
                lin, const = c
                cons.append(IntegralAffineFunctional(lin, const))
        for c in cons:
            if len(c.linear) != ambient_dim:
                raise DimensionMismatchError(
                    f"constraint arity {len(c.linear)} != ambient dim {ambient_dim}"
                )
        flags = tuple(bool(s) for s in strict) if strict is not None else tuple(
            False for _ in cons
        )
        if len(flags) != len(cons):
            raise DimensionMismatchError("one strictness flag per constraint required")
        self.ambient_dim = ambient_dim
        self.constraints = tuple(cons)
        self.strict = flags
        self._point = find_point(self._rows(), ambient_dim)
        if self._point is None:
            raise EmptyPolytopeError("constraints have no common solution")

    # -- basic queries ------------------------------------------------------

    def _rows(self, extra: Iterable[tuple] = ()) -> list[Row]:
        base = [
            ([Fraction(a) for a in c.linear], c.constant, s)
            for c, s in zip(self.constraints, self.strict)
        ]
        base.extend(extra)
        return _rows_of(base)

    def contains(self, point: Sequence) -> bool:
        pt = as_point(point)
        for c, s in zip(self.constraints, self.strict):
            v = c.value_at(pt)
            if v < 0 or (s and v == 0):
                return False
        return True

    def active_set(self, point: Sequence) -> frozenset[int]:
        pt = as_point(point)
        return frozenset(
            i for i, c in enumerate(self.constraints) if c.value_at(pt) == 0
        )

    def find_point(self) -> tuple[Fraction, ...]:
        return self._point

    def is_closed(self) -> bool:
        return not any(self.strict)

    def is_cone(self) -> bool:
        return all(c.constant == 0 for c in self.constraints)

    def closure(self) -> "IntegralAffinePolytope":
        return IntegralAffinePolytope(
            self.ambient_dim, self.constraints, (False,) * len(self.constraints)
        )

    def implied_equalities(self) -> list[int]:
        """Indices of constraints that vanish identically on the polytope."""
        out = []
        for i, c in enumerate(self.constraints):
            rows = self._rows(
                extra=[([Fraction(a) for a in c.linear], c.constant, True)]
            )
            if not feasible(rows, self.ambient_dim):
                out.append(i)
        return out

    def dim(self) -> int:
        eq = self.implied_equalities()
        lin_rows = [
            [Fraction(a) for a in self.constraints[i].linear] for i in eq
        ]
        return self.ambient_dim - rational_rank(lin_rows)

    # -- set comparisons ----------------------------------------------------

    def is_subset_of(self, other: "IntegralAffinePolytope") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError("ambient dimensions differ")
        for c, s in zip(other.constraints, other.strict):
            # a point of self violating (c, s) means self is not inside other
            neg = (
                [-Fraction(a) for a in c.linear],
                -c.constant,
                not s,
            )
            if feasible(self._rows(extra=[neg]), self.ambient_dim):
                return False
        return True

    def equals_as_set(self, other: "IntegralAffinePolytope") -> bool:
        return self.is_subset_of(other) and other.is_subset_of(self)

    def intersection_rows(self, other: "IntegralAffinePolytope") -> list[Row]:
        return self._rows() + other._rows()

    def __repr__(self) -> str:
        parts = []
        for c, s in zip(self.constraints, self.strict):
            op = ">" if s else ">="
            parts.append(f"{list(c.linear)}.x + {c.constant} {op} 0")
        inner = ", ".join(parts) if parts else "no constraints"
        return f"Polytope(R^{self.ambient_dim}: {inner})"


def full_space(n: int) -> IntegralAffinePolytope:
    return IntegralAffinePolytope(n, [])


# ---------------------------------------------------------------------------
# strata


@dataclass(frozen=True)
class Stratum:
    """A nonempty relatively open face: constraints in ``active`` hold with
    equality, all others strictly."""

    active: frozenset[int]
    dim: int
    witness: tuple[Fraction, ...]


def strata(polytope: IntegralAffinePolytope) -> list[Stratum]:
    """All nonempty relatively open faces; they partition the polytope.

    Enumerates active subsets, so it is exponential in the constraint count;
    intended for the small systems this toolkit works with.
    """
    n = polytope.ambient_dim
    out: list[Stratum] = []
    idx = range(len(polytope.constraints))
    for r in range(len(polytope.constraints) + 1):
        for subset in itertools.combinations(idx, r):
            active = frozenset(subset)
            rows = []
            for i, (c, s) in enumerate(zip(polytope.constraints, polytope.strict)):
                lin = [Fraction(a) for a in c.linear]
                if i in active:
                    rows.append((lin, c.constant, False))
                    rows.append(([-a for a in lin], -c.constant, False))
                else:
                    rows.append((lin, c.constant, True))
            rows = _rows_of(rows)
            witness = find_point(rows, n)
            if witness is None:
                continue
            lin_rows = [
                [Fraction(a) for a in polytope.constraints[i].linear] for i in active
            ]
            out.append(Stratum(active, n - rational_rank(lin_rows), witness))
    out.sort(key=lambda s: (-s.dim, sorted(s.active)))
    return out


def strata_union_tangent(
    polytope: IntegralAffinePolytope, v
) -> IntegralAffinePolytope:
    """The union P_v of all strata tangent to v.

    Keeps every constraint, tightening to strict those whose linear part
    pairs nonzero with v. Raises EmptyStratumError when v is tangent to no
    stratum.
    """
    flags = [
        s or (c.pair(v) != 0)
        for c, s in zip(polytope.constraints, polytope.strict)
    ]
    try:
        return IntegralAffinePolytope(polytope.ambient_dim, polytope.constraints, flags)
    except EmptyPolytopeError:
        raise EmptyStratumError(
            f"direction {_as_int_tuple(v)} is tangent to no stratum"
        ) from None


def spans_infinite_ray(polytope: IntegralAffinePolytope, base, v) -> bool:
    """True iff base + t*v stays in the polytope for every t >= 0."""
    pt = as_point(base)
    if not polytope.contains(pt):
        raise PointNotInPolytopeError(f"base point {pt} is not in the polytope")
    return all(c.pair(v) >= 0 for c in polytope.constraints)


def has_infinite_ray(polytope: IntegralAffinePolytope, v) -> bool:
    """True iff some point of the polytope spans an infinite ray along v."""
    if _as_int_tuple(v) == tuple(0 for _ in range(polytope.ambient_dim)):
        return True
    return all(c.pair(v) >= 0 for c in polytope.constraints)


def quotient(polytope: IntegralAffinePolytope, v) -> IntegralAffinePolytope:
    """The quotient P/v in explicit coordinates on Z^N / Z*primitive(v).

    The quotient lattice is realised by a deterministic unimodular change of
    basis sending the sign-canonical primitive direction to the first
    coordinate vector, which is then dropped. Exactly the constraints whose
    linear part annihilates v survive, keeping their strictness flags, so a
    closed P yields a closed (complete) quotient.
    """
    ents = _as_int_tuple(v)
    if all(e == 0 for e in ents):
        raise InvalidQuotientError("cannot quotient by the zero vector")
    if len(ents) != polytope.ambient_dim:
        raise DimensionMismatchError("direction dimension mismatch")
    if not has_infinite_ray(polytope, v):
        raise NoRayError(
            f"direction {ents} spans no infinite ray in the polytope"
        )
    w = primitive_canonical(v)
    _, V = unimodular_with_inverse(w)  # columns change x = V y
    kept = []
    flags = []
    for c, s in zip(polytope.constraints, polytope.strict):
        if c.pair(v) != 0:
            continue
        coeffs = [
            sum(c.linear[i] * V[i][j] for i in range(polytope.ambient_dim))
            for j in range(polytope.ambient_dim)
        ]
        if coeffs[0] != 0:
            raise AssertionError("kept constraint does not descend to the quotient")
        kept.append(IntegralAffineFunctional(coeffs[1:], c.constant))
        flags.append(s)
    return IntegralAffinePolytope(polytope.ambient_dim - 1, kept, flags)
