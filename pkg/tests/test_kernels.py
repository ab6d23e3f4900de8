"""Fast path vs fallback: the two kernel implementations must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from rdclab import _kernels
from rdclab.discrete_region import Channel, DiscreteSource, _enumeration_arrays

needs_numba = pytest.mark.skipif(
    not _kernels.USE_NUMBA, reason="numba path disabled in this session"
)


def flip_arrays(levels=6):
    src = DiscreteSource(
        np.array([-1.0, 1.0]), 2, np.array([[0.5, 0.0], [0.0, 0.5]])
    )
    enc = Channel(np.array([[0.9, 0.1], [0.1, 0.9]]))
    vals = np.array([-1.0, -0.8, 0.8, 1.0])
    return _enumeration_arrays(src, enc, levels, vals), vals


@needs_numba
class TestPathEquivalence:
    def test_grid_scan_bitwise(self):
        args = (1.0, 1.4189385332046727, 0.49, 0.5, 2.0, 400, 400)
        jit = _kernels._grid_rate_scan_jit(*args)
        ref = _kernels._grid_rate_scan_numpy(*args)
        assert bool(jit[0]) == ref[0]
        assert jit[1] == ref[1] and jit[2] == ref[2] and jit[3] == ref[3]

    def test_grid_scan_infeasible_case(self):
        args = (1.0, 1.4189385332046727, 0.49, 0.5, 1.0, 64, 64)
        jit = _kernels._grid_rate_scan_jit(*args)
        ref = _kernels._grid_rate_scan_numpy(*args)
        assert not jit[0] and not ref[0]

    def test_dc_scan(self):
        (rows, row_d, b), _ = flip_arrays()
        total = rows.shape[0] ** 2
        d1 = np.empty(total)
        c1 = np.empty(total)
        _kernels._dc_scan_jit(rows, 2, row_d, b, d1, c1)
        d2 = np.empty(total)
        c2 = np.empty(total)
        _kernels._dc_scan_numpy(rows, 2, row_d, b, d2, c2)
        np.testing.assert_allclose(d1, d2, atol=1e-13)
        np.testing.assert_allclose(c1, c2, atol=1e-13)

    def test_cmin_scan(self):
        (rows, row_d, b), _ = flip_arrays()
        f1, v1 = _kernels._cmin_scan_jit(rows, 2, row_d, b, 0.4)
        f2, v2 = _kernels._cmin_scan_numpy(rows, 2, row_d, b, 0.4)
        assert v1 == pytest.approx(v2, abs=1e-13)
        assert f1 == f2

    def test_outer_scan(self):
        (rows, row_d, b), vals = flip_arrays()
        p_z = b.sum(axis=1)
        p_xt = np.array([0.0, 0.5, 0.5, 0.0])
        jit = _kernels._outer_scan_jit(rows, 2, row_d, p_z, vals, p_xt, 0.36, 1e-12)
        ref = _kernels._outer_scan_py(rows, 2, row_d, p_z, vals, p_xt, 0.36, 1e-12)
        assert jit[0] == ref[0]
        assert jit[1] == pytest.approx(ref[1], abs=1e-13)

    def test_w2_quantile(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n, m = rng.integers(1, 12, 2)
            xv = np.sort(rng.normal(size=n))
            yv = np.sort(rng.normal(size=m))
            xp = rng.dirichlet(np.ones(n))
            yp = rng.dirichlet(np.ones(m))
            assert _kernels._w2_quantile_jit(xv, xp, yv, yp) == pytest.approx(
                _kernels._w2_quantile_py(xv, xp, yv, yp), abs=1e-14
            )


class TestEnvFlag:
    def test_disable_flag_selects_fallback(self):
        env = dict(os.environ, RDCLAB_NO_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c", "import rdclab; print(rdclab.USE_NUMBA)"],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        assert out.stdout.strip() == "False"

    def test_fallback_matches_package_results(self):
        # Same public call through a fallback subprocess vs this session.
        code = (
            "import rdclab, json;"
            "src = rdclab.GaussianPairSource(0.0, 1.0, 0.0, 1.0, 0.7);"
            "v = rdclab.grid_oracle_rate(src, 0.5, 2.0);"
            "print(json.dumps([v.status, v.value]))"
        )
        env = dict(os.environ, RDCLAB_NO_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        import json

        import rdclab

        status, value = json.loads(out.stdout)
        src = rdclab.GaussianPairSource(0.0, 1.0, 0.0, 1.0, 0.7)
        here = rdclab.grid_oracle_rate(src, 0.5, 2.0)
        assert here.status == status
        assert here.value == pytest.approx(value, abs=1e-15)
