"""Shared fixtures and independent brute-force oracles for the test suite.

The oracles here deliberately avoid the library's own search code paths:
depth is re-derived from mass direction sampling in integer arithmetic,
partitions are enumerated by a second, separately written generator, and LP
infeasibility is re-proved by exhaustive constraint-vertex enumeration.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from dualdepth import Hyperplane, Instance, common_interior_point
from dualdepth.geometry import solve_int_square


@pytest.fixture
def triangle() -> Instance:
    """The lines x1 = 0, x2 = 0, x1 + x2 = 1 bounding the standard triangle."""
    return Instance(
        2,
        [
            Hyperplane((Fraction(1), Fraction(0)), Fraction(0)),
            Hyperplane((Fraction(0), Fraction(1)), Fraction(0)),
            Hyperplane((Fraction(1), Fraction(1)), Fraction(1)),
        ],
    )


def sampled_depth_oracle(F: Instance, x, n_dirs: int, seed: int) -> int:
    """Minimum ray-crossing count over many random directions, exactly.

    Directions are random nonzero integer vectors and the point is cleared
    of denominators, so every sign below is computed in exact int64
    arithmetic (bounds small enough that no overflow is possible).  The
    result is an upper bound on the true depth; equality against the exact
    algorithm is what the calling tests assert.
    """
    d = F.dim
    normals, offsets = F.scaled()
    N = np.array(normals, dtype=np.int64)
    off = np.array(offsets, dtype=np.int64)

    den = 1
    for c in x:
        c = Fraction(c)
        den = den * c.denominator // math.gcd(den, c.denominator)
    xnum = np.array([int(Fraction(c) * den) for c in x], dtype=np.int64)

    r = off * den - N @ xnum
    contained = int((r == 0).sum())
    s = np.sign(r)

    rng = np.random.default_rng(seed)
    U = rng.integers(-999, 1000, size=(n_dirs, d), dtype=np.int64)
    U = U[np.any(U != 0, axis=1)]
    hits = (U @ N.T) * s[np.newaxis, :] > 0
    return int(hits.sum(axis=1).min()) + contained


def enumerate_partitions_oracle(indices, group_size):
    """Unordered partitions into equal groups, written independently.

    Iterative worklist formulation (the library uses a recursive generator):
    each state is (remaining sorted indices, groups so far); the smallest
    remaining index always leads the next group, which yields each unordered
    partition exactly once in lexicographic order of the group lists.
    """
    stack = [(tuple(sorted(indices)), ())]
    out = []
    while stack:
        remaining, groups = stack.pop()
        if not remaining:
            out.append(groups)
            continue
        head, rest = remaining[0], remaining[1:]
        for tail in itertools.combinations(rest, group_size - 1):
            group = (head,) + tail
            left = tuple(i for i in rest if i not in tail)
            stack.append((left, groups + (group,)))
    return sorted(out)


def strict_partitions_oracle(F: Instance, n: int):
    """All partitions admitting a strict common interior point, in lex order."""
    from dualdepth import form_simplex

    d = F.dim
    found = []
    for part in enumerate_partitions_oracle(range(F.n), d + 1):
        res = common_interior_point([form_simplex(F, g) for g in part])
        if res is not None and res[1] > 0:
            found.append(part)
    return found


def closed_feasible_by_vertex_enumeration(simplices) -> bool:
    """Does the intersection of the simplices contain any point at all?

    Exhaustive oracle: the intersection is bounded (each simplex is), so if
    nonempty it has an extreme point lying on d of the facet hyperplanes.
    Every d-subset of facets is solved exactly and the solution tested
    against all constraints.
    """
    d = simplices[0].dim
    cons = [(normal, offset) for s in simplices for normal, offset in s.facets]

    def satisfies(p):
        return all(
            sum(a * b for a, b in zip(normal, p)) >= offset
            for normal, offset in cons
        )

    for sub in itertools.combinations(range(len(cons)), d):
        rows, rhs = [], []
        for i in sub:
            normal, offset = cons[i]
            den = 1
            for v in tuple(normal) + (offset,):
                den = den * v.denominator // math.gcd(den, v.denominator)
            rows.append([int(v * den) for v in normal])
            rhs.append(int(offset * den))
        sol = solve_int_square(rows, rhs)
        if sol is None:
            continue
        nums, den = sol
        p = tuple(Fraction(v, den) for v in nums)
        if satisfies(p):
            return True
    return False
