"""Flat-measure samplers and Monte Carlo verification of the depth bounds."""

import math

import numpy as np
import pytest

from dualdepth import (
    FlatMeasureSpec,
    flat_intersects_ray,
    gen_instance,
    ray_crossings,
    sample_flats,
    search_center_sampled,
    verify_dual_cpt_measure,
    verify_dual_ctr,
)
from dualdepth.geometry import DimensionMismatchError
from dualdepth.measures import Flat, sphere_covering


def flats_equal(a, b):
    return np.array_equal(a.basis, b.basis) and np.array_equal(a.point, b.point)


class TestSampleFlats:
    def test_deterministic_replay(self):
        spec = FlatMeasureSpec(2, 1, "uniform-angle-offset", {"radius": 1.0}, seed=1)
        first = sample_flats(spec, 3)
        second = sample_flats(spec, 3)
        assert len(first) == 3
        assert all(flats_equal(a, b) for a, b in zip(first, second))

    def test_smoothed_sigma_zero_copies(self):
        spec = FlatMeasureSpec(
            2, 1, "smoothed-points",
            {"flats": [[[3.0, 4.0], 2.0]], "sigma": 0.0}, seed=7,
        )
        flats = sample_flats(spec, 5)
        n, c = flats[0].as_hyperplane()
        assert np.allclose(n, [0.6, 0.8]) and abs(c - 2.0) < 1e-12
        assert all(flats_equal(f, flats[0]) for f in flats)

    def test_gaussian_offset_mean(self):
        spec = FlatMeasureSpec(3, 1, "gaussian-offset", {"mean": 2.0, "std": 0.5}, seed=3)
        flats = sample_flats(spec, 10_000)
        offsets = [float(f.basis[0] @ f.point) for f in flats]
        assert abs(np.mean(offsets) - 2.0) <= 3 * 0.5 / math.sqrt(10_000)

    def test_uniform_support_radius(self):
        spec = FlatMeasureSpec(2, 1, "uniform-angle-offset", {"radius": 1.5}, seed=2)
        for f in sample_flats(spec, 200):
            assert np.linalg.norm(f.point) <= 1.5 + 1e-9

    def test_orthonormal_bases(self):
        spec = FlatMeasureSpec(3, 2, "uniform-angle-offset", {"radius": 1.0}, seed=4)
        for f in sample_flats(spec, 50):
            assert f.codim == 2 and f.dim == 3
            assert np.allclose(f.basis @ f.basis.T, np.eye(2), atol=1e-12)

    def test_invalid_specs(self):
        with pytest.raises(ValueError):
            FlatMeasureSpec(2, 3, "uniform-angle-offset")
        with pytest.raises(ValueError):
            FlatMeasureSpec(2, 1, "no-such-kind")
        with pytest.raises(ValueError):
            FlatMeasureSpec(2, 1, "smoothed-points", {})
        spec = FlatMeasureSpec(2, 1, "uniform-angle-offset")
        with pytest.raises(ValueError):
            sample_flats(spec, 0)

    def test_spec_json_round_trip(self):
        spec = FlatMeasureSpec(3, 1, "gaussian-offset", {"mean": 1.0}, seed=9)
        assert FlatMeasureSpec.from_json(spec.to_json()) == spec


class TestFlatIntersectsRay:
    def line_x1(self):
        return Flat(np.array([[1.0, 0.0]]), np.array([0.0, 0.0]))

    def test_ray_into_line(self):
        assert flat_intersects_ray(self.line_x1(), (1, 0), (-1, 0))

    def test_parallel_ray(self):
        assert not flat_intersects_ray(self.line_x1(), (1, 0), (0, 1))

    def test_origin_on_line(self):
        for u in ((0, 1), (1, 0), (-1, -1)):
            assert flat_intersects_ray(self.line_x1(), (0, 3), u)

    def test_agrees_with_exact_ray_crossings(self):
        rng = np.random.default_rng(11)
        F = gen_instance("random-rational", 6, 2, seed=1)
        for _ in range(40):
            x = tuple(int(v) for v in rng.integers(-4, 5, size=2))
            u = tuple(int(v) for v in rng.integers(-5, 6, size=2))
            if u == (0, 0):
                continue
            exact = ray_crossings(F, x, u)
            approx = 0
            for h in F.hyperplanes:
                n = np.array([float(c) for c in h.normal])
                n_unit = n / np.linalg.norm(n)
                flat = Flat(n_unit[np.newaxis, :], n_unit * (float(h.offset) / np.linalg.norm(n)))
                approx += flat_intersects_ray(flat, x, u)
            assert approx == exact

    def test_codimension_checked(self):
        flat = Flat(np.eye(2), np.zeros(2))
        with pytest.raises(DimensionMismatchError):
            flat_intersects_ray(flat, (0, 0), (1, 0))


class TestSphereCovering:
    def test_unit_vectors(self):
        for dim, count in ((2, 36), (3, 100), (4, 50)):
            dirs = sphere_covering(dim, count)
            assert dirs.shape == (count, dim)
            assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0)

    def test_one_dimensional(self):
        assert sphere_covering(1, 10).tolist() == [[1.0], [-1.0]]


class TestVerifyDualCptMeasure:
    def test_center_passes(self):
        spec = FlatMeasureSpec(2, 1, "uniform-angle-offset", {"radius": 1.0}, seed=0)
        rep = verify_dual_cpt_measure(spec, (0.0, 0.0), 4000, 360)
        assert rep.passed
        assert rep.estimate >= rep.bound - rep.tolerance
        assert rep.bound == pytest.approx(1 / 3)

    def test_far_point_fails(self):
        spec = FlatMeasureSpec(2, 1, "uniform-angle-offset", {"radius": 1.0}, seed=0)
        rep = verify_dual_cpt_measure(spec, (10.0, 0.0), 4000, 360)
        assert not rep.passed
        assert rep.estimate < 0.05

    def test_point_on_smoothed_line(self):
        spec = FlatMeasureSpec(
            2, 1, "smoothed-points",
            {"flats": [[[0.0, 1.0], 2.0]], "sigma": 0.0}, seed=1,
        )
        rep = verify_dual_cpt_measure(spec, (0.0, 2.0), 1000, 90)
        assert rep.passed
        assert rep.estimate == 1.0  # containment counts for every ray

    def test_report_consistency(self):
        spec = FlatMeasureSpec(3, 1, "gaussian-offset", {}, seed=5)
        rep = verify_dual_cpt_measure(spec, (0.0, 0.0, 0.0), 2000, 200)
        assert rep.passed == (rep.estimate >= rep.bound - rep.tolerance)
        assert rep.tolerance >= 3.0 * rep.details["standard_error"] - 1e-12
        assert rep.sample_size == 2000


class TestSearchCenterSampled:
    def test_symmetric_measure_near_origin(self):
        spec = FlatMeasureSpec(2, 1, "uniform-angle-offset", {"radius": 1.0}, seed=8)
        p = search_center_sampled(spec, 3000)
        assert math.hypot(*[float(c) for c in p]) <= 0.1

    def test_smoothed_line_attracts(self):
        spec = FlatMeasureSpec(
            2, 1, "smoothed-points",
            {"flats": [[[1.0, 0.0], 1.0]], "sigma": 0.05}, seed=2,
        )
        p = search_center_sampled(spec, 2000)
        assert abs(float(p[0]) - 1.0) <= 0.05

    def test_two_line_cluster_pass(self):
        spec = FlatMeasureSpec(
            2, 1, "smoothed-points",
            {"flats": [[[1.0, 0.0], 0.0], [[0.0, 1.0], 0.0]], "sigma": 0.1},
            seed=3,
        )
        p = search_center_sampled(spec, 3000)
        assert math.hypot(*[float(c) for c in p]) <= 0.5
        rep = verify_dual_cpt_measure(spec, [float(c) for c in p], 3000, 360)
        assert rep.passed

    def test_codimension_checked(self):
        spec = FlatMeasureSpec(2, 2, "uniform-angle-offset", {"radius": 1.0})
        with pytest.raises(DimensionMismatchError):
            search_center_sampled(spec, 100)


class TestVerifyDualCtr:
    def test_point_case_reduces_to_ray_verifier(self):
        spec = FlatMeasureSpec(2, 1, "uniform-angle-offset", {"radius": 1.0}, seed=0)
        ray_rep = verify_dual_cpt_measure(spec, (0.0, 0.0), 3000, 360, tol=0.03)
        ctr_rep = verify_dual_ctr([spec], (0.0, 0.0), [], 3000, 360, tol=0.03)
        assert ctr_rep.bound == pytest.approx(ray_rep.bound)
        assert ctr_rep.passed == ray_rep.passed

    def test_two_disks_good_line(self):
        specs = [
            FlatMeasureSpec(2, 2, "uniform-angle-offset",
                            {"radius": 1.0, "center": [-2.0, 0.0]}, seed=0),
            FlatMeasureSpec(2, 2, "uniform-angle-offset",
                            {"radius": 1.0, "center": [2.0, 0.0]}, seed=1),
        ]
        rep = verify_dual_ctr(specs, (0.0, 0.0), [[1.0, 0.0]], 4000, 64)
        assert rep.passed
        assert rep.bound == pytest.approx(0.5)

    def test_two_disks_bad_line(self):
        specs = [
            FlatMeasureSpec(2, 2, "uniform-angle-offset",
                            {"radius": 1.0, "center": [-2.0, 0.0]}, seed=0),
            FlatMeasureSpec(2, 2, "uniform-angle-offset",
                            {"radius": 1.0, "center": [2.0, 0.0]}, seed=1),
        ]
        rep = verify_dual_ctr(specs, (2.0, 0.0), [[0.0, 1.0]], 4000, 64)
        assert not rep.passed
        assert min(rep.details["per_measure_min"]) == 0.0

    def test_measure_count_checked(self):
        spec = FlatMeasureSpec(2, 2, "uniform-angle-offset", {"radius": 1.0})
        with pytest.raises(ValueError):
            verify_dual_ctr([spec], (0.0, 0.0), [[1.0, 0.0]], 100, 8)


class TestEstimatorConsistency:
    def test_standard_error_scales_with_sample_size(self):
        def estimate(seed, N):
            spec = FlatMeasureSpec(2, 1, "uniform-angle-offset", {"radius": 1.0}, seed=seed)
            hit = 0
            for f in sample_flats(spec, N):
                n, c = f.as_hyperplane()
                r = c  # ray origin at (0, 0)
                hit += (r == 0.0) or (r * float(n @ np.array([1.0, 0.0]))) > 0.0
            return hit / N

        small = np.std([estimate(s, 200) for s in range(100)])
        large = np.std([estimate(s + 1000, 400) for s in range(100)])
        ratio = large / small
        assert abs(ratio - 1 / math.sqrt(2)) <= 0.2 * (1 / math.sqrt(2))
