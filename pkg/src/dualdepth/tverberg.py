"""Simplices formed by hyperplane subfamilies and dual Tverberg partitions.

d+1 hyperplanes in general position in R^d form a simplex whose vertex i is
the common point of all chosen hyperplanes except the i-th.  A collection of
such simplices has a common strict interior point exactly when the margin LP
(maximize the minimum inward slack over every facet) has a positive optimum;
the optimum point doubles as an exact certificate checkable by substitution.

Three partitioners are provided: the constructive planar one (circular order
of projection directions around a depth-maximizing point, triples n apart),
an exhaustive certified search over partitions into (d+1)-groups, and the
colorful variant that picks disjoint one-per-color groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Optional, Sequence

from . import lp
from .depth import max_depth_point
from .geometry import (
    DegenerateSubfamilyError,
    DimensionMismatchError,
    Hyperplane,
    Instance,
    Point,
    as_point,
    dot,
    ensure_general_position,
    intersect_subfamily,
)


@dataclass(frozen=True)
class SimplexSpec:
    """Simplex formed by d+1 hyperplanes.

    ``vertices[i]`` is the intersection of every chosen hyperplane except
    ``indices[i]``; ``facets[i]`` is the inward halfspace form
    (normal, offset) with the inside satisfying normal . x >= offset, its
    boundary lying on hyperplane ``indices[i]``.
    """

    indices: tuple[int, ...]
    vertices: tuple[Point, ...]
    facets: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    @property
    def dim(self) -> int:
        return len(self.vertices[0])


@dataclass(frozen=True)
class PartitionResult:
    groups: tuple[tuple[int, ...], ...]
    witness: Point
    margin: Fraction
    strict: bool
    metadata: dict = field(default_factory=dict)


def form_simplex(F: Instance, idx: Sequence[int]) -> SimplexSpec:
    """Build the simplex of a (d+1)-subset of hyperplane indices."""
    d = F.dim
    idx = tuple(sorted(idx))
    if len(idx) != d + 1 or len(set(idx)) != d + 1:
        raise DimensionMismatchError(f"need d+1 distinct indices, got {idx}")
    vertices = []
    for i in idx:
        others = [F.hyperplanes[j] for j in idx if j != i]
        try:
            vertices.append(intersect_subfamily(others))
        except DegenerateSubfamilyError:
            raise DegenerateSubfamilyError(
                [j for j in idx if j != i], f"subfamily {idx} is degenerate"
            )
    facets = []
    for pos, i in enumerate(idx):
        h = F.hyperplanes[i]
        opposite = vertices[pos]
        s = dot(h.normal, opposite) - h.offset
        if s == 0:
            raise DegenerateSubfamilyError(idx, "flat simplex (vertex on its facet)")
        sign = 1 if s > 0 else -1
        facets.append((tuple(sign * c for c in h.normal), sign * h.offset))
    return SimplexSpec(idx, tuple(vertices), tuple(facets))


def common_interior_point(simplices: Sequence[SimplexSpec]):
    """Exact LP certificate for a common interior point of simplices.

    Maximizes the slack e subject to inward_normal . x >= inward_offset + e
    over every facet (e capped at 1 to keep the LP bounded for large
    simplices).  Returns (witness, margin) with margin > 0 for a strict
    interior point, margin == 0 when the intersection is nonempty but has
    empty interior, and None when even the closed intersection is empty.
    """
    if not simplices:
        raise ValueError("need at least one simplex")
    d = simplices[0].dim
    if any(s.dim != d for s in simplices):
        raise DimensionMismatchError("mixed simplex dimensions")
    # variables (x_1..x_d, e): maximize e
    A, b = [], []
    for s in simplices:
        for normal, offset in s.facets:
            A.append([-c for c in normal] + [Fraction(1)])
            b.append(-offset)
    A.append([Fraction(0)] * d + [Fraction(1)])
    b.append(Fraction(1))
    res = lp.maximize([Fraction(0)] * d + [Fraction(1)], A, b)
    assert res.status == lp.OPTIMAL  # always feasible, objective capped
    margin = res.value
    if margin < 0:
        return None
    return tuple(res.x[:d]), margin


def _containment_margin(simplices: Sequence[SimplexSpec], x: Point) -> Fraction:
    """Minimum inward slack of x over all facets (negative when outside)."""
    return min(
        dot(normal, x) - offset for s in simplices for normal, offset in s.facets
    )


def _angle_cmp(a: tuple, b: tuple) -> int:
    """Exact circular comparison of nonzero plane vectors from angle 0."""
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    ha, hb = half(a), half(b)
    if ha != hb:
        return -1 if ha < hb else 1
    cross = a[0] * b[1] - a[1] * b[0]
    if cross > 0:
        return -1
    if cross < 0:
        return 1
    return 0


def dual_tverberg_plane(F: Instance) -> PartitionResult:
    """Constructive planar partition of 3n lines into n witness-sharing triples.

    Orders the lines circularly by the direction from a depth-maximizing
    point x to its projection on each line (a line through x takes the
    direction of its stored normal) and groups positions k, k+n, k+2n.
    """
    if F.dim != 2:
        raise DimensionMismatchError("dual_tverberg_plane requires d = 2")
    if F.n % 3 != 0:
        raise ValueError(f"line count {F.n} is not divisible by 3")
    ensure_general_position(F)
    n = F.n // 3
    cert = max_depth_point(F)
    x = cert.point

    off_dirs, on_idx = [], []
    for i, h in enumerate(F.hyperplanes):
        r = h.offset - dot(h.normal, x)
        if r == 0:
            on_idx.append(i)
        else:
            sign = 1 if r > 0 else -1
            off_dirs.append((tuple(sign * c for c in h.normal), i))

    def groups_from(order):
        gs = [
            tuple(sorted((order[k], order[k + n], order[k + 2 * n])))
            for k in range(n)
        ]
        gs.sort()
        return tuple(gs)

    ordered = sorted(
        off_dirs, key=cmp_to_key(lambda p, q: _angle_cmp(p[0], q[0]) or (p[1] - q[1]))
    )
    base = [i for _, i in ordered]

    # Lines through x can go anywhere in the circular order, but not every
    # slot yields triangles containing x; the natural choice (the line's
    # normal angle) is tried first and the remaining insertion slots are
    # scanned in order until the containment check passes.  At most two
    # lines pass through x in general position.
    candidates = []
    if on_idx:
        naive = sorted(
            off_dirs + [(tuple(F.hyperplanes[i].normal), i) for i in on_idx],
            key=cmp_to_key(lambda p, q: _angle_cmp(p[0], q[0]) or (p[1] - q[1])),
        )
        candidates.append([i for _, i in naive])
        m = len(base)
        if len(on_idx) == 1:
            for s in range(m):
                candidates.append(base[:s] + [on_idx[0]] + base[s:])
        else:
            a, b = on_idx
            for s in range(m):
                trial = base[:s] + [a] + base[s:]
                for t in range(m + 1):
                    candidates.append(trial[:t] + [b] + trial[t:])
    else:
        candidates.append(base)

    best = None
    for order in candidates:
        groups = groups_from(order)
        simplices = [form_simplex(F, g) for g in groups]
        margin = _containment_margin(simplices, x)
        if best is None or margin > best[1]:
            best = (groups, margin)
        if margin >= 0:
            break

    groups, margin = best
    return PartitionResult(
        groups, x, margin, margin > 0, {"depth": cert.depth, "bound": cert.bound}
    )


def _partitions(indices: list[int], size: int):
    """Unordered partitions into groups of the given size, lexicographic.

    Each group is emitted sorted; groups are ordered by their smallest
    element, which is the canonical (and enumeration) order.
    """
    if not indices:
        yield []
        return
    head = indices[0]
    rest = indices[1:]
    for tail in itertools.combinations(rest, size - 1):
        group = (head,) + tail
        remaining = [i for i in rest if i not in tail]
        for sub in _partitions(remaining, size):
            yield [group] + sub


def dual_tverberg_search(F: Instance, n: int) -> Optional[PartitionResult]:
    """First (lexicographic) partition into n simplices with a strict common point.

    Exhaustive and certified: a partition is accepted exactly when the
    margin LP is strictly positive.  Returns None (NotFound) when no
    partition qualifies; for prime-power n in general position that signals
    a bug rather than a legitimate outcome.
    """
    d = F.dim
    if F.n != (d + 1) * n:
        raise ValueError(f"need (d+1)*n = {(d + 1) * n} hyperplanes, got {F.n}")
    ensure_general_position(F)
    cert = max_depth_point(F)
    x_star = cert.point

    simplex_cache: dict[tuple[int, ...], SimplexSpec] = {}
    margin_cache: dict[tuple[int, ...], Fraction] = {}
    box_cache: dict[tuple[int, ...], tuple] = {}

    def simplex(g):
        if g not in simplex_cache:
            simplex_cache[g] = form_simplex(F, g)
        return simplex_cache[g]

    def star_margin(g):
        if g not in margin_cache:
            margin_cache[g] = _containment_margin([simplex(g)], x_star)
        return margin_cache[g]

    def box(g):
        if g not in box_cache:
            vs = simplex(g).vertices
            box_cache[g] = (
                tuple(min(v[k] for v in vs) for k in range(d)),
                tuple(max(v[k] for v in vs) for k in range(d)),
            )
        return box_cache[g]

    def boxes_overlap(groups) -> bool:
        # open overlap of the vertex bounding boxes is necessary for a
        # strict common point, so a degenerate overlap rules the LP out
        for k in range(d):
            if max(box(g)[0][k] for g in groups) >= min(box(g)[1][k] for g in groups):
                return False
        return True

    checked = 0
    for part in _partitions(list(range(F.n)), d + 1):
        checked += 1
        groups = tuple(part)
        if all(star_margin(g) > 0 for g in groups):
            margin = min(star_margin(g) for g in groups)
            return PartitionResult(
                groups, x_star, margin, True, {"candidates_checked": checked}
            )
        if not boxes_overlap(groups):
            continue
        res = common_interior_point([simplex(g) for g in groups])
        if res is not None and res[1] > 0:
            return PartitionResult(
                groups, res[0], res[1], True, {"candidates_checked": checked}
            )
    return None


def colorful_dual_tverberg_search(F: Instance, r: int) -> Optional[PartitionResult]:
    """First r disjoint colorful (d+1)-groups with a strict common point.

    Preconditions of the colorful guarantee (t >= 2r-1, r a prime power) are
    recorded in the result metadata but not enforced; the search runs
    regardless and reports what it finds.
    """
    d = F.dim
    if F.colors is None:
        raise ValueError("instance has no colors")
    classes = F.color_classes()
    if sorted(classes) != list(range(d + 1)):
        raise ValueError(f"need exactly colors 0..{d}, got {sorted(classes)}")
    sizes = {len(v) for v in classes.values()}
    if len(sizes) != 1:
        raise ValueError("color classes must have equal size")
    t = sizes.pop()
    preconditions = {
        "t": t,
        "r": r,
        "t_ge_2r_minus_1": t >= 2 * r - 1,
        "r_prime_power": _is_prime_power(r),
    }
    ensure_general_position(F)

    colorful = sorted(
        tuple(sorted(pick))
        for pick in itertools.product(*(classes[c] for c in range(d + 1)))
    )
    simplex_cache: dict[tuple[int, ...], SimplexSpec] = {}

    def simplex(g):
        if g not in simplex_cache:
            simplex_cache[g] = form_simplex(F, g)
        return simplex_cache[g]

    checked = 0
    for combo in itertools.combinations(colorful, r):
        flat = [i for g in combo for i in g]
        if len(set(flat)) != len(flat):
            continue
        checked += 1
        res = common_interior_point([simplex(g) for g in combo])
        if res is not None and res[1] > 0:
            return PartitionResult(
                tuple(combo),
                res[0],
                res[1],
                True,
                {"candidates_checked": checked, "preconditions": preconditions},
            )
    return None


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return n == 1  # the r = 1 search is trivially fine
    for p in range(2, n + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return False
