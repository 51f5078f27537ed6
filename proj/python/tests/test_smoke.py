import json
import math
import os
from pathlib import Path

import pytest

import pdcspec

FIXTURES = Path(os.environ.get("PDC_FIXTURES_DIR", Path(__file__).resolve().parents[2] / "fixtures"))


def test_angular_frequency():
    assert pdcspec.wavelength_to_angular_frequency(1.5502) == pytest.approx(1215.10228829109, rel=1e-12)


def test_gamma():
    assert pdcspec.gamma_from_sinc_matching() == pytest.approx(0.178975353413632, abs=1e-10)


def test_bandwidth():
    bw = pdcspec.phasematching_bandwidth(996.0, 0.179, -1.37e-3, -1.37e-3, 1550.2)
    assert bw["intensity_fwhm_nm"] == pytest.approx(3.67968971526, abs=1e-9)


def test_contour_roots_zero_detuning():
    roots = pdcspec.contour_roots(-0.983 * 1.37e-3, -1.37e-3, 0.8e-3 * 1.37e-3, 0.7e-3 * 1.37e-3, 0.0, delta=0.0)
    assert len(roots) == 2
    assert any(abs(s) < 1e-9 for s, _ in roots)


def test_fringe_round_trip():
    axis = [1.523 + 0.071 * k / 5999 for k in range(6000)]
    y = pdcspec.synthesize_fringes([3.31], length_um=996.0, wavelength_um=axis, noise=0.005, seed=3)
    peaks = pdcspec.extract_group_indices(axis, y, 996.0, max_modes=1)
    assert peaks[0]["group_index"] == pytest.approx(3.31, rel=5e-3)


def test_noise_only_raises():
    axis = [1.523 + 0.071 * k / 999 for k in range(1000)]
    y = pdcspec.synthesize_fringes([3.31], weights=[0.0], length_um=996.0, wavelength_um=axis, noise=0.01, seed=3)
    with pytest.raises(pdcspec.NoFringeError):
        pdcspec.extract_group_indices(axis, y, 996.0)


def test_marginal_peaks_at_roots():
    detuning = [-100.0 + 0.05 * k for k in range(4001)]
    y = pdcspec.marginal_spectrum(str(FIXTURES / "params_marginal.json"), 766.7, detuning)
    assert max(y) == pytest.approx(1.0, abs=1e-3)
    assert min(y) >= 0.0


def test_run_mc_small():
    obs = json.loads((FIXTURES / "closed_loop_observations.json").read_text())
    config = json.loads((FIXTURES / "mc_config.json").read_text())
    config["n_runs"] = 100000
    post = pdcspec.run_mc(obs, config)
    assert post["n_accepted"] > 0
    assert math.isclose(post["acceptance_rate"], post["n_accepted"] / 100000)
