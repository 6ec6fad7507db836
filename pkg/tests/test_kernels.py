"""Cross-backend equivalence: the compiled and pure-python kernels must
return identical values (same floats, same counts, same argmins)."""

import numpy as np
import pytest

from quadlab import _kernels

backends = _kernels.backends()
needs_native = pytest.mark.skipif("native" not in backends,
                                  reason="compiled kernel not built")


def pair():
    return backends["native"], backends["python"]


@needs_native
class TestBackendEquality:
    def test_count_quadratic_grid(self):
        nat, py = pair()
        A3 = np.ascontiguousarray(np.diag([1.0, 1.0, -np.sqrt(2.0)]))
        A2 = np.array([[0.0, 0.5], [0.5, 0.0]])
        cases = []
        for t in (7.0, 10.0, 10.5):
            zmin = np.full(2, -int(t), dtype=np.int64)
            zmax = np.full(2, int(t), dtype=np.int64)
            for mode in (0, 1, 2):
                cases.append((A2, np.zeros(2), 1.0, np.zeros(2), zmin, zmax,
                              -0.5, 0.5, True, True, mode, t))
        zmin = np.full(3, -12, dtype=np.int64)
        zmax = np.full(3, 12, dtype=np.int64)
        cases.append((A3, np.array([1/3, 1/7, 1/11]), 1.0, np.zeros(3),
                      zmin, zmax, -0.25, 0.25, True, True, 1, 12.0))
        cases.append((A3, np.array([1.0, 1.0, 1.0]), 3.0, np.array([1.0, 1.0, 1.0]),
                      np.full(3, -4, dtype=np.int64), np.full(3, 4, dtype=np.int64),
                      -2.0, 2.0, False, False, 2, 12.5))
        for case in cases:
            assert nat.count_quadratic(*case) == py.count_quadratic(*case)

    def test_min_abs_quadratic(self):
        nat, py = pair()
        phi = (1 + np.sqrt(5.0)) / 2
        A = np.ascontiguousarray(np.diag([1.0, -phi * phi]))
        for lo, hi, nz in ((1, 200, True), (16, 32, False)):
            a = nat.min_abs_quadratic(A, np.zeros(2), lo, hi, nz)
            b = py.min_abs_quadratic(A, np.zeros(2), lo, hi, nz)
            assert a[0] == b[0]
            assert np.array_equal(a[1], b[1])

    def test_min_abs_power_family(self):
        nat, py = pair()
        theta = np.array([0.5, 0.0, 0.0])
        for k, a2, a3 in ((2, 1.0, 0.7), (3, 1.7, 0.3), (2, 2.0, 0.0)):
            a = nat.min_abs_power_family(k, a2, a3, theta, 4, 12, False)
            b = py.min_abs_power_family(k, a2, a3, theta, 4, 12, False)
            assert a[0] == b[0]
            assert np.array_equal(a[1], b[1])

    def test_four_term(self):
        nat, py = pair()
        ms = np.arange(4, 9, dtype=float)
        a = (ms + 0.3) ** 0.5
        b = np.sqrt(2.0) * ((ms + 0.1) ** 0.5)
        thr = 0.1 * 4 ** 0.5
        assert nat.four_term_pair_count(a, b, thr) == py.four_term_pair_count(a, b, thr)

    def test_points_in_disk(self):
        nat, py = pair()
        basis = np.ascontiguousarray([[1.0, 0.3], [0.0, 1.0]])
        shift = np.array([0.2, 0.7])
        center = np.array([-0.5, 1.5])
        a = nat.points_in_disk(basis, shift, center, 6.0, -10, 10, -10, 10)
        b = py.points_in_disk(basis, shift, center, 6.0, -10, 10, -10, 10)
        assert np.array_equal(a, b)


def test_backend_selector_env(monkeypatch):
    import importlib
    import quadlab._kernels as k
    monkeypatch.setenv("QUADLAB_BACKEND", "python")
    mod = importlib.reload(k)
    assert mod.BACKEND == "python"
    monkeypatch.delenv("QUADLAB_BACKEND")
    importlib.reload(k)
