"""Backend equivalence: the compiled kernels must mirror the pure twins."""

import numpy as np
import pytest

from netequil import _kernels_py as pure
from netequil import kernels

compiled = kernels.compiled

needs_compiled = pytest.mark.skipif(compiled is None,
                                    reason="compiled kernels unavailable")


def test_active_backend_is_exposed():
    assert kernels.backend_name in ("cython", "python")
    assert kernels.pure.BACKEND == "python"


class TestGaussSolve:
    def test_pure_matches_numpy(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 8))
            a = rng.normal(size=(n, n)) + n * np.eye(n)
            b = rng.normal(size=n)
            x, pivot = pure.gauss_solve(a, b)
            assert pivot == 0
            assert np.allclose(x, np.linalg.solve(a.T, b), atol=1e-9)

    def test_pure_detects_singularity(self):
        x, pivot = pure.gauss_solve(np.ones((3, 3)), np.zeros(3))
        assert x is None and pivot > 0

    @needs_compiled
    def test_backends_agree(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 9))
            a = rng.normal(size=(n, n))
            if rng.random() < 0.3:
                a[:, int(rng.integers(0, n))] = 0.0  # force singularity
            b = rng.normal(size=n)
            xp, pp = pure.gauss_solve(a.copy(), b.copy())
            xc, pc = compiled.gauss_solve(a.copy(), b.copy())
            assert pp == pc
            if pp == 0:
                assert np.allclose(xp, xc, atol=1e-12, rtol=1e-12)


class TestClampIterate:
    @needs_compiled
    def test_backends_agree(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 7))
            w = rng.uniform(0, 1, (n, n))
            w *= 0.8 / max(np.abs(np.linalg.eigvals(w)).max(), 1e-12)
            eps = rng.normal(size=n)
            off = rng.normal(size=n)
            gain = rng.uniform(0.2, 1.0, n)
            lo = rng.uniform(-3, -1, n)
            hi = rng.uniform(1, 3, n)
            x0 = rng.normal(size=n)
            got_p = pure.clamp_iterate(w, eps, off, gain, lo, hi, x0,
                                       1e-10, 10000)
            got_c = compiled.clamp_iterate(w, eps, off, gain, lo, hi, x0,
                                           1e-10, 10000)
            assert got_p[2] == got_c[2]
            assert np.allclose(got_p[0], got_c[0], atol=1e-12)
            assert got_p[1] == pytest.approx(got_c[1], abs=1e-12)

    def test_pure_fixed_point_semantics(self):
        w = np.array([[0.5]])
        x, diff, iters = pure.clamp_iterate(
            w, np.array([1.0]), np.zeros(1), np.ones(1),
            np.array([-np.inf]), np.array([np.inf]), np.zeros(1), 1e-10, 1000)
        # returned point is the pre-image: its residual equals diff
        assert abs((x[0] * 0.5 + 1.0) - x[0]) == pytest.approx(diff, abs=1e-15)
        assert diff <= 1e-10


class TestPatternScan:
    @needs_compiled
    def test_backends_agree(self, rng):
        for _ in range(25):
            n = int(rng.integers(1, 6))
            w = rng.uniform(0, 1, (n, n))
            w /= w.sum(axis=1, keepdims=True)
            lo = rng.uniform(-2, 0, n)
            hi = lo + rng.uniform(0.5, 2.0, n)
            eps = rng.uniform(-1, 1, n)
            pts_p, codes_p, sing_p = pure.pattern_scan(w, eps, lo, hi, 1e-9)
            pts_c, codes_c, sing_c = compiled.pattern_scan(w, eps, lo, hi, 1e-9)
            assert codes_p == codes_c
            assert sing_p == sing_c
            assert len(pts_p) == len(pts_c)
            for a, b in zip(pts_p, pts_c):
                assert np.allclose(a, b, atol=1e-12)

    @needs_compiled
    def test_backends_agree_on_singular_patterns(self):
        w = np.array([[0.0, 1.0], [1.0, 0.0]])
        args = (w, np.array([1.0, -1.0]), np.array([-2.0, -2.0]),
                np.array([2.0, 2.0]), 1e-9)
        _, _, sing_p = pure.pattern_scan(*args)
        _, _, sing_c = compiled.pattern_scan(*args)
        assert sing_p == sing_c
        assert sing_p  # the all-interior pattern is singular here
