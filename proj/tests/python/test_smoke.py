# SPDX-License-Identifier: Apache-2.0
#
# hbsim: hybrid beam selection simulator for beamspace MIMO
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

import math

import numpy as np
import pytest

import hbsim


def test_version_and_exports():
    assert isinstance(hbsim.__version__, str)
    assert issubclass(hbsim.SingularityError, hbsim.NumericalError)
    assert issubclass(hbsim.ConfigError, hbsim.Error)


def test_special_functions_match_math():
    for x in (0.5, 1.0, 3.25, 40.0):
        assert hbsim.log_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-13, abs=1e-12)
    assert hbsim.beta_fn(2.0, 3.0) == pytest.approx(1.0 / 12.0, rel=1e-13)


def test_dft_is_unitary():
    F = hbsim.dft_matrix(16)
    assert F.shape == (16, 16)
    np.testing.assert_allclose(F.conj().T @ F, np.eye(16), atol=1e-12)


def test_pseudoinverse_against_numpy():
    rng = np.random.default_rng(3)
    G = rng.standard_normal((3, 7)) + 1j * rng.standard_normal((3, 7))
    np.testing.assert_allclose(hbsim.right_pseudoinverse(G), np.linalg.pinv(G), atol=1e-12)


def test_steering_vector_norm():
    a = hbsim.steering_vector(0.1, 32)
    assert a.shape == (32,)
    assert np.linalg.norm(a) == pytest.approx(1.0, abs=1e-12)


def test_channels_are_seeded():
    a = hbsim.sample_channels(64, 4, 3, 11)
    b = hbsim.sample_channels(64, 4, 3, 11)
    c = hbsim.sample_channels(64, 4, 3, 12)
    assert a.shape == (64, 4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sbs_picks_strongest_beams_for_single_user():
    H = hbsim.sample_channels(64, 1, 3, 5)
    beams = hbsim.select_sbs(H, 4)
    power = np.abs(hbsim.dft_matrix(64) @ H[:, 0]) ** 2
    assert sorted(beams[0]) == sorted(np.argsort(power)[-4:].tolist())


def test_feedback_rule_and_expectation():
    assert hbsim.feedback_bits(12.0, 16, 3.0) == 15
    for L, N in ((2, 7), (3, 15), (4, 5)):
        assert hbsim.expected_qe_closed(L, N) == pytest.approx(hbsim.expected_qe_numeric(L, N), rel=1e-9)
    samples = hbsim.sample_isotropic_qe(3, 4, 4000, 7)
    assert np.mean(samples) == pytest.approx(hbsim.expected_qe_closed(3, 4), abs=0.02)


def test_zero_forcing_nulls_interference():
    h = hbsim.sample_channels(32, 4, 2, 9)[:12, :]
    W, lam = hbsim.zf_precoder(h)
    G = h.conj().T @ W
    off = G - np.diag(np.diag(G))
    assert np.max(np.abs(off)) < 1e-9
    assert np.all(lam > 0)
    np.testing.assert_allclose(np.linalg.norm(W, axis=0), 1.0, atol=1e-12)
    perfect = hbsim.rate_perfect(h, 10.0)
    assert np.allclose(perfect, hbsim.rate_quantized(h, h, 10.0))


def test_singular_channel_raises():
    h = np.ones((4, 2), dtype=complex)
    with pytest.raises(hbsim.SingularityError):
        hbsim.zf_precoder(h)


def test_run_report():
    report = hbsim.run(M=32, K=4, L=2, n_rf=8, trials=4, seed=3, snr_db=[0, 6])
    assert [row["snr_db"] for row in report["rows"]] == [0.0, 6.0]
    row = report["rows"][0]
    assert row["trials"] == 4
    assert row["singular_trials"] == 0
    assert row["rate_perfect"] >= 0.0
    again = hbsim.run(M=32, K=4, L=2, n_rf=8, trials=4, seed=3, snr_db=[0, 6])
    assert again["rows"] == report["rows"]


def test_unknown_key_is_config_error():
    with pytest.raises(hbsim.ConfigError):
        hbsim.run(antennas=32)


def test_sweep_points():
    out = hbsim.sweep("fig2", M=64, K=4, trials=2, seed=1, snr_db=[10])
    schemes = [p["scheme"] for p in out["points"]]
    assert schemes == ["sbs", "hbs_case_i", "hbs_case_ii", "ideal"]
    ideal = out["points"][-1]["rate"]
    assert all(ideal >= p["rate"] - 1e-12 for p in out["points"][:3])


def test_qe_table():
    rows = hbsim.qe_table([2.0, 3.0], [7])
    assert len(rows) == 2
    for r in rows:
        assert r["E_numeric"] == pytest.approx(r["E_closed"], rel=1e-9)
