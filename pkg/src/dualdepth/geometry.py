"""Exact vector/hyperplane primitives and general-position validation.

All predicates and linear solves in this module are carried out over
``fractions.Fraction``, so results are exact: a sign is zero if and only if
the underlying quantity is zero.  Floating point appears nowhere here; the
heuristic and Monte Carlo layers live in other modules and re-certify their
answers through these primitives.

Internally most hot paths run on integer-scaled copies of the data (each
hyperplane multiplied by the lcm of its denominators), which preserves every
sign and every intersection point while keeping arithmetic in plain ints.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Scalar = Fraction
Point = tuple[Fraction, ...]
Direction = tuple[Fraction, ...]


class GeometryError(Exception):
    """Base class for errors raised by the exact-geometry layer."""


class DimensionMismatchError(GeometryError):
    pass


class ZeroDirectionError(GeometryError):
    pass


class DegenerateSubfamilyError(GeometryError):
    """A d-subset of hyperplanes has no unique common point."""

    def __init__(self, indices: Sequence[int], message: str = ""):
        self.indices = tuple(indices)
        super().__init__(message or f"degenerate subfamily {self.indices}")


class DegenerateInstanceError(GeometryError):
    """The instance violates general position where it is required."""


def as_scalar(value) -> Fraction:
    """Convert ints, strings ("p/q" or decimal) and floats to an exact Fraction.

    Floats convert via their exact binary value, matching the approximate-view
    contract (round trip within one ulp is in fact exact here).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Scalar")


def as_point(coords: Iterable) -> Point:
    return tuple(as_scalar(c) for c in coords)


def approx(value: Fraction) -> float:
    """Floating view of an exact scalar (nearest double)."""
    return float(value)


def dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise DimensionMismatchError(f"dot: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Integer linear algebra (Bareiss determinants, Cramer solves)
# ---------------------------------------------------------------------------

def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix, fraction-free (Bareiss)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_int_square(rows: Sequence[Sequence[int]], rhs: Sequence[int]):
    """Solve an integer d x d system exactly.

    Returns ``(numerators, denominator)`` with denominator > 0, or ``None``
    when the matrix is singular.  Solution coordinates are numerators[i]/den.
    """
    d = len(rows)
    det = int_det(rows)
    if det == 0:
        return None
    nums = []
    for j in range(d):
        col = [list(r) for r in rows]
        for i in range(d):
            col[i][j] = rhs[i]
        nums.append(int_det(col))
    if det < 0:
        det = -det
        nums = [-x for x in nums]
    return tuple(nums), det


def cofactor_direction(rows: Sequence[Sequence[int]], dim: int) -> tuple[int, ...]:
    """Vector orthogonal to d-1 integer row vectors (generalized cross product).

    Component j is the signed maximal minor omitting column j.  The result is
    the zero vector exactly when the rows have rank < d-1.
    """
    if len(rows) != dim - 1:
        raise DimensionMismatchError("cofactor_direction needs d-1 rows")
    out = []
    for j in range(dim):
        minor = [[r[c] for c in range(dim) if c != j] for r in rows]
        out.append((-1) ** j * int_det(minor))
    return tuple(out)


def scale_to_int(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector by the (positive) lcm of denominators."""
    denlcm = 1
    for v in vec:
        denlcm = denlcm * v.denominator // math.gcd(denlcm, v.denominator)
    return tuple(int(v * denlcm) for v in vec)


def fraction_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    # coerce: int rows would hit float true-division below
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return 0
    cols = len(m[0])
    rank = 0
    row = 0
    for col in range(cols):
        piv = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        pv = m[row][col]
        for i in range(row + 1, len(m)):
            if m[i][col] != 0:
                f = m[i][col] / pv
                for j in range(col, cols):
                    m[i][j] -= f * m[row][j]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def fraction_nullspace(rows: Sequence[Sequence[Fraction]], dim: int) -> list[tuple[Fraction, ...]]:
    """Basis of {u : r . u = 0 for all rows r}, exact."""
    m = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    row = 0
    for col in range(dim):
        piv = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        pv = m[row][col]
        m[row] = [x / pv for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
    basis = []
    free = [c for c in range(dim) if c not in pivots]
    for fc in free:
        vec = [Fraction(0)] * dim
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -m[r][fc]
        basis.append(tuple(vec))
    return basis


def solve_underdetermined(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[Point]:
    """Particular solution of a consistent rational system (free vars = 0)."""
    m = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    dim = len(rows[0]) if rows else 0
    pivots = []
    row = 0
    for col in range(dim):
        piv = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        pv = m[row][col]
        m[row] = [x / pv for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
    for i in range(row, len(m)):
        if m[i][dim] != 0:
            return None  # inconsistent
    x = [Fraction(0)] * dim
    for r, pc in enumerate(pivots):
        x[pc] = m[r][dim]
    return tuple(x)


# ---------------------------------------------------------------------------
# Hyperplanes and instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    """The point set {y : normal . y = offset}; normal must be nonzero."""

    normal: tuple[Fraction, ...]
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", as_point(self.normal))
        object.__setattr__(self, "offset", as_scalar(self.offset))
        if all(c == 0 for c in self.normal):
            raise ZeroDirectionError("hyperplane normal is zero")

    @property
    def dim(self) -> int:
        return len(self.normal)

    def scaled(self) -> tuple[tuple[int, ...], int]:
        """Integer form (a, b) with a . y = b defining the same hyperplane."""
        ints = scale_to_int(tuple(self.normal) + (self.offset,))
        return ints[:-1], ints[-1]

    def canonicalized(self) -> "Hyperplane":
        """Primitive integer form with positive leading normal coordinate."""
        a, b = self.scaled()
        g = 0
        for v in a + (b,):
            g = math.gcd(g, abs(v))
        g = g or 1
        a = tuple(v // g for v in a)
        b = b // g
        lead = next(v for v in a if v != 0)
        if lead < 0:
            a = tuple(-v for v in a)
            b = -b
        return Hyperplane(tuple(Fraction(v) for v in a), Fraction(b))


def side_of(h: Hyperplane, x: Point) -> int:
    """Sign of normal . x - offset: which side of h the point lies on."""
    if len(x) != h.dim:
        raise DimensionMismatchError(f"point dim {len(x)} vs hyperplane dim {h.dim}")
    v = dot(h.normal, x) - h.offset
    return (v > 0) - (v < 0)


def project_onto(h: Hyperplane, x: Point) -> Point:
    """Orthogonal projection of x onto h, exact."""
    if len(x) != h.dim:
        raise DimensionMismatchError(f"point dim {len(x)} vs hyperplane dim {h.dim}")
    t = (dot(h.normal, x) - h.offset) / dot(h.normal, h.normal)
    return tuple(xi - t * ni for xi, ni in zip(x, h.normal))


def intersect_subfamily(hs: Sequence[Hyperplane]) -> Point:
    """Unique common point of d hyperplanes in R^d.

    Raises DegenerateSubfamilyError when the system is singular.
    """
    d = hs[0].dim
    if len(hs) != d:
        raise DimensionMismatchError(f"need exactly {d} hyperplanes, got {len(hs)}")
    if any(h.dim != d for h in hs):
        raise DimensionMismatchError("mixed dimensions in subfamily")
    rows, rhs = [], []
    for h in hs:
        a, b = h.scaled()
        rows.append(a)
        rhs.append(b)
    sol = solve_int_square(rows, rhs)
    if sol is None:
        raise DegenerateSubfamilyError(range(len(hs)))
    nums, den = sol
    return tuple(Fraction(n, den) for n in nums)


@dataclass(frozen=True)
class GeneralPositionResult:
    """Outcome of the exhaustive general-position check.

    ``violation`` names the offending hyperplane index set when not ok;
    ``reason`` is "degenerate" (some d-subset has no unique point) or
    "concurrent" (some d+1-subset shares a point).
    """

    ok: bool
    violation: Optional[tuple[int, ...]] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class Instance:
    """A family of hyperplanes in R^d, optionally colored.

    Treated as an immutable value; private fields cache derived data
    (integer-scaled coefficients, vertex solutions, the general-position
    verdict) so repeated queries stay cheap.
    """

    dim: int
    hyperplanes: list[Hyperplane]
    colors: Optional[list[int]] = None
    metadata: dict = field(default_factory=dict)

    _scaled: Optional[tuple] = field(default=None, repr=False, compare=False)
    _vertices: Optional[dict] = field(default=None, repr=False, compare=False)
    _gp: Optional[GeneralPositionResult] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatchError("dimension must be positive")
        for h in self.hyperplanes:
            if h.dim != self.dim:
                raise DimensionMismatchError("hyperplane dimension differs from instance")
        if self.colors is not None:
            if len(self.colors) != len(self.hyperplanes):
                raise DimensionMismatchError("colors length differs from hyperplane count")
            for c in self.colors:
                if not 0 <= c <= self.dim:
                    raise ValueError(f"color {c} out of range [0, {self.dim}]")

    @property
    def n(self) -> int:
        return len(self.hyperplanes)

    def scaled(self) -> tuple[list[tuple[int, ...]], list[int]]:
        if self._scaled is None:
            pairs = [h.scaled() for h in self.hyperplanes]
            self._scaled = ([a for a, _ in pairs], [b for _, b in pairs])
        return self._scaled

    def color_classes(self) -> dict[int, list[int]]:
        if self.colors is None:
            return {}
        classes: dict[int, list[int]] = {}
        for i, c in enumerate(self.colors):
            classes.setdefault(c, []).append(i)
        return classes

    def vertex(self, subset: tuple[int, ...]):
        """Cached common point of a d-subset as (numerators, den>0), or None."""
        if self._vertices is None:
            self._vertices = {}
        if subset not in self._vertices:
            normals, offsets = self.scaled()
            rows = [normals[i] for i in subset]
            rhs = [offsets[i] for i in subset]
            self._vertices[subset] = solve_int_square(rows, rhs)
        return self._vertices[subset]

    def vertex_point(self, subset: tuple[int, ...]) -> Optional[Point]:
        sol = self.vertex(subset)
        if sol is None:
            return None
        nums, den = sol
        return tuple(Fraction(v, den) for v in nums)


def check_general_position(F: Instance) -> GeneralPositionResult:
    """Exhaustive general-position check over all d- and (d+1)-subsets.

    Exact and brute force; intended for desk-scale n (<= ~30).  The verdict
    is cached on the instance.
    """
    if F._gp is not None:
        return F._gp
    d, n = F.dim, F.n
    normals, offsets = F.scaled()
    result = None
    for sub in itertools.combinations(range(n), min(d, n)):
        if len(sub) < d:
            # fewer hyperplanes than d: require independent normals instead
            if fraction_rank([F.hyperplanes[i].normal for i in sub]) < len(sub):
                result = GeneralPositionResult(False, sub, "degenerate")
            break
        if F.vertex(sub) is None:
            result = GeneralPositionResult(False, sub, "degenerate")
            break
    if result is None and n >= d + 1:
        for sub in itertools.combinations(range(n), d + 1):
            nums, den = F.vertex(sub[:d])
            j = sub[d]
            if sum(a * v for a, v in zip(normals[j], nums)) == offsets[j] * den:
                result = GeneralPositionResult(False, sub, "concurrent")
                break
    if result is None:
        result = GeneralPositionResult(True)
    F._gp = result
    return result


def ensure_general_position(F: Instance) -> None:
    gp = check_general_position(F)
    if not gp.ok:
        raise DegenerateInstanceError(
            f"instance is not in general position: {gp.reason} subset {gp.violation}"
        )
