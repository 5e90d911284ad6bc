# Copyright 2026 The stcorr Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import stcorr


def test_exact_values():
    assert stcorr.g11_exact(0, 0) == 2.0
    assert stcorr.g11_exact(4, 0) == 0.546875
    assert stcorr.g22_exact(1, 0) == -0.25
    assert stcorr.g12_exact(1, 1) == -0.5
    assert stcorr.exact("g21", 2, 1) == -stcorr.g12_exact(2, 1)
    assert stcorr.exact(stcorr.CorrelationKind.G11, 1, 2) == 0.5


def test_parity_and_domain_errors():
    with pytest.raises(stcorr.ParityError):
        stcorr.g11_exact(2, 1)
    with pytest.raises(ValueError):
        stcorr.g22_exact(0, 0)
    with pytest.raises(ValueError):
        stcorr.exact("g13", 1, 0)


def test_asymptotics_vectorize():
    assert stcorr.g11_asym(100.0, 0.0) == pytest.approx(0.11283792, abs=5e-9)
    js = np.arange(-4.0, 5.0)
    v = stcorr.g11_asym(50.0, js)
    assert v.shape == js.shape
    np.testing.assert_allclose(v, v[::-1])
    assert stcorr.displacement_correlation_asym(100.0, 0.0) == pytest.approx(7.9788456, abs=5e-8)


def test_quadrature_agrees():
    assert stcorr.g11_quadrature(3, 2) == pytest.approx(stcorr.g11_exact(3, 2), abs=1e-10)


def test_exact_table_header():
    rows = [r for r in stcorr.exact_table(1, 2).splitlines() if not r.startswith("#")]
    assert rows[0] == "kind,t,j,exact,asymptotic"
    assert "g11,1,0,1,1.1283791670955126" in rows


def test_spectral():
    assert stcorr.equilibrium_gradient_variance(4, 2) == pytest.approx(1.0)
    assert stcorr.poisson_kernel(0.5, 2) == pytest.approx(1 / 3)


def test_sample_equilibrium_shape_and_determinism():
    h = stcorr.sample_equilibrium(64, 2, seed=3)
    assert h.shape == (64, 64)
    np.testing.assert_array_equal(h, stcorr.sample_equilibrium(64, 2, seed=3))
    with pytest.raises(ValueError):
        stcorr.sample_equilibrium(7)


def test_oracle_and_size_cap():
    v = stcorr.oracle_pair_correlation("g22", 1, 0, T=32, L=32)
    assert v == pytest.approx(-0.25, abs=0.03)
    with pytest.raises(stcorr.FiniteSizeError):
        stcorr.oracle_pair_correlation("g11", 1, 0, T=400, L=400)


def test_simulate_snapshots():
    frames = stcorr.simulate(32, rounds=4, stride=2, seed=5)
    assert len(frames) == 3
    assert all(f.shape == (32,) for f in frames)
    again = stcorr.simulate(32, rounds=4, stride=2, seed=5)
    for a, b in zip(frames, again):
        np.testing.assert_array_equal(a, b)
    flat = stcorr.simulate(16, initial=stcorr.InitialCondition.FLAT)
    np.testing.assert_array_equal(flat[0], np.zeros(16))


def test_measure_matches_exact():
    res = stcorr.measure(4096, t_max=2, j_max=2, origins=20, seed=2, blocks=16)
    g11 = res["g11"]
    assert g11["mean"].shape == (3, 5)
    assert np.isnan(g11["mean"][0, 1])
    for t in range(3):
        z = (g11["mean"][t, 2] - stcorr.g11_exact(t, 0)) / g11["err"][t, 2]
        assert abs(z) < 4.5
    assert np.isnan(res["g22"]["mean"][0, 2])
    assert res["g12"]["mean"][1, 3] == pytest.approx(stcorr.g12_exact(1, 1), abs=0.05)
