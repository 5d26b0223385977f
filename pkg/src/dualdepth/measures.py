"""Samplers for measures on affine flats and Monte Carlo bound verifiers.

A flat of codimension c in R^d is stored as (basis, point): ``basis`` is an
orthonormal c x d row basis of the linear subspace orthogonal to the flat,
and ``point`` is the unique point of the flat inside that subspace.  For
c = 1 this is the familiar (unit normal, foot of perpendicular) form of a
hyperplane; for c = d the flat is a single point.

Measures are specified generatively: a kind, its parameters, and a seed.
Verification is Monte Carlo against the theoretical lower bounds (1/(d+1)
for rays against hyperplane measures, 1/(k+2) for half-flats against k-flat
measures), with tolerances tied to the binomial standard error and raw
counts reported so stricter post-hoc analysis stays possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .depth import center_fixed_point, max_depth_point
from .geometry import (
    DimensionMismatchError,
    Hyperplane,
    Instance,
    Point,
    check_general_position,
)

KINDS = ("uniform-angle-offset", "gaussian-offset", "smoothed-points")


@dataclass(frozen=True)
class Flat:
    """Affine flat of codimension len(basis) in R^d."""

    basis: np.ndarray  # (c, d) orthonormal rows spanning the normal space
    point: np.ndarray  # (d,) point of the flat, lies in span(basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def codim(self) -> int:
        return self.basis.shape[0]

    def as_hyperplane(self) -> tuple[np.ndarray, float]:
        if self.codim != 1:
            raise DimensionMismatchError("not a hyperplane")
        n = self.basis[0]
        return n, float(n @ self.point)


@dataclass(frozen=True)
class FlatMeasureSpec:
    dim: int
    codim: int
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.codim <= self.dim:
            raise ValueError(f"codimension {self.codim} out of range for d={self.dim}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "smoothed-points":
            flats = self.params.get("flats")
            if not flats:
                raise ValueError("smoothed-points requires a 'flats' parameter")

    @property
    def flat_dim(self) -> int:
        return self.dim - self.codim

    def support_radius(self) -> float:
        if self.kind == "uniform-angle-offset":
            return float(self.params.get("radius", 1.0))
        if self.kind == "gaussian-offset":
            # not compactly supported in the strict sense; report 6 sigma
            return abs(float(self.params.get("mean", 0.0))) + 6.0 * float(
                self.params.get("std", 1.0)
            )
        sigma = float(self.params.get("sigma", 0.0))
        offs = [abs(float(f[1])) for f in self.params["flats"]]
        return max(offs) + 6.0 * sigma + 1.0

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "codim": self.codim,
            "kind": self.kind,
            "params": self.params,
            "seed": self.seed,
        }

    @staticmethod
    def from_json(obj: dict) -> "FlatMeasureSpec":
        return FlatMeasureSpec(
            dim=int(obj["dim"]),
            codim=int(obj["codim"]),
            kind=str(obj["kind"]),
            params=dict(obj.get("params", {})),
            seed=int(obj.get("seed", 0)),
        )


@dataclass(frozen=True)
class VerificationReport:
    estimate: float
    bound: float
    trials: int
    sample_size: int
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "estimate": self.estimate,
            "bound": self.bound,
            "trials": self.trials,
            "sample_size": self.sample_size,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        out.update({f"detail_{k}": v for k, v in self.details.items()})
        return out


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _random_frame(rng, d: int, c: int) -> np.ndarray:
    """Orthonormal c x d frame, rotation invariant (QR of a Gaussian)."""
    g = rng.normal(size=(d, c))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))[np.newaxis, :]
    return q.T


def sample_flats(spec: FlatMeasureSpec, N: int) -> list[Flat]:
    """Draw N flats; bit-exact replayable for a fixed spec and seed."""
    if N < 1:
        raise ValueError("N must be >= 1")
    rng = np.random.default_rng(spec.seed)
    d, c = spec.dim, spec.codim
    out = []
    if spec.kind == "uniform-angle-offset":
        radius = float(spec.params.get("radius", 1.0))
        center = np.asarray(spec.params.get("center", [0.0] * d), dtype=float)
        for _ in range(N):
            B = _random_frame(rng, d, c)
            # uniform point in the c-ball of the normal space, shifted so the
            # support surrounds the declared center
            u = rng.normal(size=c)
            u /= np.linalg.norm(u)
            rad = radius * rng.random() ** (1.0 / c)
            p = B.T @ (u * rad) + B.T @ (B @ center)
            out.append(Flat(B, p))
    elif spec.kind == "gaussian-offset":
        mean = float(spec.params.get("mean", 0.0))
        std = float(spec.params.get("std", 1.0))
        for _ in range(N):
            B = _random_frame(rng, d, c)
            offsets = mean + std * rng.normal(size=c)
            out.append(Flat(B, B.T @ offsets))
    else:  # smoothed-points
        sigma = float(spec.params.get("sigma", 0.0))
        bases = spec.params["flats"]  # list of (normal, offset), codim 1 only
        if c != 1:
            raise ValueError("smoothed-points is defined for codimension 1")
        weights = np.asarray(
            spec.params.get("weights", [1.0] * len(bases)), dtype=float
        )
        weights = weights / weights.sum()
        for _ in range(N):
            i = int(rng.choice(len(bases), p=weights))
            normal = np.asarray(bases[i][0], dtype=float)
            normal = normal / np.linalg.norm(normal)
            offset = float(bases[i][1])
            if sigma > 0.0:
                normal = normal + sigma * rng.normal(size=d)
                normal = normal / np.linalg.norm(normal)
                offset = offset + sigma * rng.normal()
            B = normal[np.newaxis, :]
            out.append(Flat(B, normal * offset))
    return out


def _flats_as_arrays(flats: Sequence[Flat]):
    normals = np.stack([f.basis[0] for f in flats])
    offsets = np.einsum("ij,ij->i", normals, np.stack([f.point for f in flats]))
    return normals, offsets


# ---------------------------------------------------------------------------
# Intersection predicates
# ---------------------------------------------------------------------------

def flat_intersects_ray(flat: Flat, origin, direction) -> bool:
    """Does a codimension-1 flat meet the ray origin + t*direction, t >= 0?

    Containment (origin exactly on the flat) always counts; a parallel
    hyperplane not containing the origin never does — the same semantics as
    the exact ray_crossings predicate.
    """
    if flat.codim != 1:
        raise DimensionMismatchError("ray predicate needs a hyperplane")
    n, c = flat.as_hyperplane()
    o = np.asarray(origin, dtype=float)
    u = np.asarray(direction, dtype=float)
    r = c - float(n @ o)
    if r == 0.0:
        return True
    return r * float(n @ u) > 0.0


# ---------------------------------------------------------------------------
# Probe direction coverings
# ---------------------------------------------------------------------------

def sphere_covering(dim: int, count: int) -> np.ndarray:
    """Deterministic low-discrepancy covering of the unit sphere in R^dim."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        ang = 2.0 * np.pi * np.arange(count) / count
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)
    if dim == 3:
        # Fibonacci spiral
        i = np.arange(count) + 0.5
        phi = np.arccos(1.0 - 2.0 * i / count)
        theta = np.pi * (1.0 + 5.0**0.5) * i
        return np.stack(
            [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)],
            axis=1,
        )
    rng = np.random.default_rng(count)  # deterministic in count
    g = rng.normal(size=(count, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _ray_fractions(normals, offsets, x, dirs) -> np.ndarray:
    """Fraction of sampled hyperplanes met by the ray from x, per direction."""
    r = offsets - normals @ x
    contained = r == 0.0
    s = np.sign(r)
    proj = normals @ dirs.T  # (N, P)
    hits = (proj * s[:, np.newaxis]) > 0.0
    hits |= contained[:, np.newaxis]
    return hits.mean(axis=0)


# ---------------------------------------------------------------------------
# Verifiers and searcher
# ---------------------------------------------------------------------------

def verify_dual_cpt_measure(
    spec: FlatMeasureSpec,
    x: Sequence[float],
    N: int,
    ray_probes: int = 720,
    tol: Optional[float] = None,
    se_multiplier: float = 3.0,
    refine_rounds: int = 2,
) -> VerificationReport:
    """Monte Carlo check of the ray-measure lower bound 1/(d+1) at x.

    Probes a deterministic sphere covering, then refines with seeded random
    directions near the running minimum (the adversarial quantifier over
    rays needs density where the estimate dips).
    """
    if spec.codim != 1:
        raise DimensionMismatchError("dual central point verification needs codim 1")
    if N < 1 or ray_probes < 1:
        raise ValueError("N and ray_probes must be >= 1")
    d = spec.dim
    flats = sample_flats(spec, N)
    normals, offsets = _flats_as_arrays(flats)
    xv = np.asarray([float(c) for c in x], dtype=float)

    dirs = sphere_covering(d, ray_probes)
    fracs = _ray_fractions(normals, offsets, xv, dirs)
    j = int(fracs.argmin())
    estimate = float(fracs[j])
    worst = dirs[j]
    rng = np.random.default_rng((spec.seed, 0x5EED))
    total_probes = len(dirs)
    for _ in range(refine_rounds):
        cand = worst[np.newaxis, :] + 0.2 * rng.normal(size=(ray_probes // 4, d))
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        fr = _ray_fractions(normals, offsets, xv, cand)
        total_probes += len(cand)
        jj = int(fr.argmin())
        if fr[jj] < estimate:
            estimate = float(fr[jj])
            worst = cand[jj]

    bound = 1.0 / (d + 1)
    se = math.sqrt(bound * (1.0 - bound) / N)
    tolerance = tol if tol is not None else se_multiplier * se
    return VerificationReport(
        estimate=estimate,
        bound=bound,
        trials=total_probes,
        sample_size=N,
        tolerance=tolerance,
        passed=estimate >= bound - tolerance,
        details={
            "worst_direction": [float(v) for v in worst],
            "min_hits": int(round(estimate * N)),
            "standard_error": se,
        },
    )


def search_center_sampled(
    spec: FlatMeasureSpec,
    N: int,
    exact_subsample: int = 10,
    refine_subsample: int = 200,
    refine_iters: int = 3,
) -> Point:
    """Candidate central point for a sampled hyperplane measure.

    Bridge to the discrete machinery: run the exact depth maximizer on a small
    evenly-spread subsample (floats lifted to exact rationals), then refine
    with the projection fixed-point heuristic on a larger subsample.  The
    result is a candidate only; certify with verify_dual_cpt_measure.
    """
    if spec.codim != 1:
        raise DimensionMismatchError("center search needs codim 1")
    flats = sample_flats(spec, N)
    attempts = 0
    while True:
        inst = _exact_instance(flats, min(exact_subsample, len(flats)))
        if check_general_position(inst).ok:
            break
        attempts += 1
        if attempts > 8:
            raise RuntimeError("could not draw a general-position subsample")
        flats = sample_flats(
            FlatMeasureSpec(spec.dim, spec.codim, spec.kind, spec.params,
                            seed=spec.seed + 1000 + attempts),
            N,
        )
    cert = max_depth_point(inst)
    point = cert.point
    if len(flats) > inst.n and refine_iters > 0:
        big = _exact_instance(flats, min(refine_subsample, len(flats)))
        point = center_fixed_point(big, point, max_iters=refine_iters).point
    point = _polish_center(spec, flats, point)
    return point


def _polish_center(spec, flats, point, probes: int = 180, rounds: int = 40):
    """Pattern-search ascent of the sampled min-ray-fraction objective.

    The exact subsample stage can land far from the sampled optimum when
    the measure is strongly clustered; this climbs the Monte Carlo score
    directly with a shrinking deterministic step pattern.
    """
    d = spec.dim
    normals, offsets = _flats_as_arrays(flats)
    dirs = sphere_covering(d, probes)
    moves = sphere_covering(d, 4 * d)

    def score(p):
        return float(_ray_fractions(normals, offsets, p, dirs).min())

    p = np.asarray([float(c) for c in point], dtype=float)
    best = score(p)
    step = spec.support_radius() / 4.0
    floor = spec.support_radius() * 1e-3
    for _ in range(rounds):
        moved = False
        for mv in moves:
            q = p + step * mv
            s = score(q)
            if s > best:
                p, best, moved = q, s, True
                break
        if not moved:
            step *= 0.5
            if step < floor:
                break
    return tuple(Fraction(float(v)).limit_denominator(10**6) for v in p)


def _exact_instance(flats: Sequence[Flat], count: int) -> Instance:
    idx = np.linspace(0, len(flats) - 1, count).round().astype(int)
    hps = []
    for i in sorted(set(int(v) for v in idx)):
        n, c = flats[i].as_hyperplane()
        hps.append(
            Hyperplane(
                tuple(Fraction(float(v)).limit_denominator(1000) for v in n),
                Fraction(float(c)).limit_denominator(1000),
            )
        )
    return Instance(flats[0].dim, hps, metadata={"source": "sampled"})


def verify_dual_ctr(
    specs: Sequence[FlatMeasureSpec],
    L_point: Sequence[float],
    L_directions: Sequence[Sequence[float]],
    N: int,
    probes: int = 360,
    tol: Optional[float] = None,
    se_multiplier: float = 3.0,
) -> VerificationReport:
    """Monte Carlo check of the half-flat bound 1/(k+2) at a candidate flat L.

    L has dimension d-k-1 and is given by a point and spanning directions;
    the d-k measures live on k-flats (codimension d-k).  Half-flats bounded
    by L are L + nonnegative multiples of a unit vector w orthogonal to L;
    w sweeps a deterministic covering of the sphere in that complement.
    """
    if not specs:
        raise ValueError("need at least one measure spec")
    d = specs[0].dim
    c = specs[0].codim
    k = d - c
    if any(s.dim != d or s.codim != c for s in specs):
        raise DimensionMismatchError("all measures must share dim and codim")
    if len(specs) != c:
        raise ValueError(f"need d-k = {c} measures, got {len(specs)}")
    L_dirs = np.asarray(L_directions, dtype=float).reshape(-1, d)
    if L_dirs.shape[0] != d - k - 1:
        raise DimensionMismatchError(
            f"L must have dimension d-k-1 = {d - k - 1}, got {L_dirs.shape[0]}"
        )
    l0 = np.asarray(L_point, dtype=float)

    # orthonormalize L's directions and take the (k+1)-dim complement
    if L_dirs.shape[0]:
        Q, _ = np.linalg.qr(L_dirs.T)
        D = Q.T
    else:
        D = np.zeros((0, d))
    full = np.eye(d)
    comp = full - D.T @ D if D.shape[0] else full
    eigval, eigvec = np.linalg.eigh(comp)
    W = eigvec[:, eigval > 0.5].T  # (k+1, d) orthonormal complement basis

    probe_dirs = sphere_covering(k + 1, probes) @ W  # (P, d)

    bound = 1.0 / (k + 2)
    se = math.sqrt(bound * (1.0 - bound) / N)
    tolerance = tol if tol is not None else se_multiplier * se

    per_measure = []
    overall = 1.0
    for spec in specs:
        flats = sample_flats(spec, N)
        if c == 1:
            normals, offsets = _flats_as_arrays(flats)
            fracs = _ray_fractions(normals, offsets, l0, probe_dirs)
            m = float(fracs.min())
        else:
            m = _halfflat_min_fraction(flats, l0, D, probe_dirs)
        per_measure.append(m)
        overall = min(overall, m)

    return VerificationReport(
        estimate=overall,
        bound=bound,
        trials=len(probe_dirs),
        sample_size=N,
        tolerance=tolerance,
        passed=all(m >= bound - tolerance for m in per_measure),
        details={"per_measure_min": per_measure, "standard_error": se},
    )


def _halfflat_min_fraction(flats, l0, D, probe_dirs) -> float:
    """Minimum over probes of the fraction of flats meeting the half-flat.

    For each sampled flat G (codim c, basis B, point p) and half-flat
    M = {l0 + D^T s + t w : t >= 0}, solve B (l0 + D^T s + t w) = B p for
    (s, t); G meets M exactly when the system is solvable with t >= 0.
    """
    B_all = np.stack([f.basis for f in flats])  # (N, c, d)
    p_all = np.stack([f.point for f in flats])  # (N, d)
    rhs = np.einsum("ncd,nd->nc", B_all, p_all - l0[np.newaxis, :])  # (N, c)
    best = 1.0
    for w in probe_dirs:
        cols = np.concatenate([D.T, w[:, np.newaxis]], axis=1)  # (d, c)
        A = B_all @ cols  # (N, c, c)
        dets = np.linalg.det(A)
        ok = np.abs(dets) > 1e-12
        sol = np.full((len(flats), cols.shape[1]), np.nan)
        if ok.any():
            sol[ok] = np.linalg.solve(A[ok], rhs[ok][..., np.newaxis])[..., 0]
        hits = ok & (sol[:, -1] >= 0.0)
        frac = float(hits.mean())
        best = min(best, frac)
    return best
