"""Backend parity: the compiled kernels must agree with the numpy reference."""

import numpy as np
import pytest

from nscrit import _ref, kernels

compiled = pytest.importorskip("nscrit._accel", reason="compiled kernels not built")


@pytest.fixture
def arrays(rng):
    n = 4096
    return tuple(np.ascontiguousarray(rng.standard_normal(n)) for _ in range(3))


class TestParity:
    @pytest.mark.parametrize("p", [1.0, 2.0, 2.5, 4.0, 8.0 / 3.0])
    def test_abs_pow_sum(self, arrays, p):
        x = arrays[0]
        assert compiled.abs_pow_sum(x, p) == pytest.approx(_ref.abs_pow_sum(x, p), rel=1e-13)

    @pytest.mark.parametrize("p", [2.0, 3.0, 4.5])
    def test_mag_pow_sum(self, arrays, p):
        x, y, z = arrays
        assert compiled.mag_pow_sum(x, y, z, p) == pytest.approx(_ref.mag_pow_sum(x, y, z, p), rel=1e-13)

    def test_triple_product_sum(self, arrays):
        a, b, c = arrays
        ref = _ref.triple_product_sum(a, b, c)
        scale = float(np.sum(np.abs(a * b * c)))
        assert compiled.triple_product_sum(a, b, c) == pytest.approx(ref, abs=1e-13 * scale)

    def test_advect(self, rng):
        n = 2048
        u = [np.ascontiguousarray(rng.standard_normal(n)) for _ in range(3)]
        g = [np.ascontiguousarray(rng.standard_normal(n)) for _ in range(9)]
        w_c = [np.empty(n) for _ in range(3)]
        w_r = [np.empty(n) for _ in range(3)]
        compiled.advect(*u, *g, *w_c)
        _ref.advect(*u, *g, *w_r)
        for a, b in zip(w_c, w_r):
            assert np.allclose(a, b, rtol=1e-13, atol=0.0)

    def test_project_and_mask(self, rng):
        n = 2048
        c_c = [np.ascontiguousarray(rng.standard_normal(n) + 1j * rng.standard_normal(n)) for _ in range(3)]
        c_r = [c.copy() for c in c_c]
        k = [np.ascontiguousarray(rng.standard_normal(n)) for _ in range(3)]
        ksq = k[0] ** 2 + k[1] ** 2 + k[2] ** 2
        inv = np.where(ksq > 0, 1.0 / np.where(ksq > 0, ksq, 1.0), 0.0)
        mask = np.ascontiguousarray((rng.random(n) > 0.3).astype(np.float64))
        compiled.project_and_mask(*c_c, *k, inv, mask)
        _ref.project_and_mask(*c_r, *k, inv, mask)
        for a, b in zip(c_c, c_r):
            assert np.allclose(a, b, rtol=1e-12, atol=1e-14)

    def test_projection_annihilates_parallel_part(self, rng):
        """After projection, k . c vanishes wherever the mask keeps the mode."""
        n = 1024
        c = [np.ascontiguousarray(rng.standard_normal(n) + 1j * rng.standard_normal(n)) for _ in range(3)]
        k = [np.ascontiguousarray(rng.standard_normal(n)) for _ in range(3)]
        ksq = k[0] ** 2 + k[1] ** 2 + k[2] ** 2
        inv = 1.0 / ksq
        mask = np.ones(n)
        compiled.project_and_mask(*c, *k, inv, mask)
        dot = k[0] * c[0] + k[1] * c[1] + k[2] * c[2]
        assert np.max(np.abs(dot)) < 1e-12 * np.max(np.sqrt(ksq))


class TestSelection:
    def test_backend_name_reported(self):
        assert kernels.backend_name() in kernels.available_backends()

    def test_set_backend_roundtrip(self):
        current = kernels.backend_name()
        try:
            kernels.set_backend("python")
            assert kernels.backend_name() == "python"
            x = np.array([1.0, -2.0, 3.0])
            assert kernels.abs_pow_sum(x, 2.0) == pytest.approx(14.0)
        finally:
            kernels.set_backend(current)

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError, match="backend"):
            kernels.set_backend("fortran")

    def test_auto_prefers_compiled(self):
        current = kernels.backend_name()
        try:
            kernels.set_backend("auto")
            assert kernels.backend_name() == "compiled"
        finally:
            kernels.set_backend(current)
