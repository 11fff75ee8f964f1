import math

import numpy as np
import pytest

from ratchet.state import (
    LadderState,
    NoPeakError,
    block_bounds,
    consecutive_state,
    fwhm,
    make_superposition,
    plane_wave,
    ratchet_state,
    spatial_profile,
)

PI = math.pi


def test_plane_wave_basics():
    st = plane_wave(3, beta=0.25)
    assert st.n_min == st.n_max == 3
    assert st.momenta().tolist() == [3.25]
    assert st.amplitude(3) == 1.0 + 0.0j
    assert st.amplitude(4) == 0.0j


def test_rejects_unnormalized_amplitudes():
    with pytest.raises(ValueError, match="not normalized"):
        LadderState(0.5, 0, np.array([1.0, 1.0]))


def test_rejects_quasimomentum_outside_unit_interval():
    with pytest.raises(ValueError, match="quasimomentum"):
        plane_wave(0, beta=1.0)
    with pytest.raises(ValueError, match="quasimomentum"):
        plane_wave(0, beta=-0.1)


def test_amps_are_immutable():
    st = ratchet_state(3)
    with pytest.raises(ValueError):
        st.amps[0] = 0.0


def test_make_superposition_validation():
    with pytest.raises(ValueError, match="at least one"):
        make_superposition([])
    with pytest.raises(ValueError, match="duplicate"):
        make_superposition([(0, 0.0, 1.0), (0, 0.0, 1.0)])
    with pytest.raises(ValueError, match="non-negative"):
        make_superposition([(0, 0.0, -1.0)])
    with pytest.raises(ValueError, match="zero"):
        make_superposition([(0, 0.0, 0.0), (1, 0.0, 0.0)])


def test_make_superposition_weights_need_not_sum_to_one():
    st = make_superposition([(0, 0.0, 2.0), (1, 0.0, 6.0)])
    assert np.allclose(st.probabilities(), [0.25, 0.75])


def test_block_bounds_contains_zero_and_one():
    # even counts take the extra site on the positive side
    assert block_bounds(2) == (0, 1)
    assert block_bounds(3) == (-1, 1)
    assert block_bounds(4) == (-1, 2)
    assert block_bounds(7) == (-3, 3)
    for count in range(2, 10):
        lo, hi = block_bounds(count)
        assert hi - lo + 1 == count
        assert lo <= 0 and hi >= 1


def test_consecutive_state_phases():
    gamma = 0.7
    st = consecutive_state(-1, 2, gamma=gamma)
    for n in range(-1, 3):
        expected = 0.5 * np.exp(-1j * n * gamma)
        assert st.amplitude(n) == pytest.approx(expected, abs=1e-15)


def test_overlap_handles_disjoint_windows():
    a = plane_wave(0)
    b = plane_wave(5)
    assert a.overlap(b) == 0.0
    assert a.fidelity(a) == pytest.approx(1.0)


def test_phase_slope_translates_density():
    # gamma an exact multiple of the grid step makes the translation a roll
    k = 90
    gamma = k * 2 * PI / 512
    st = ratchet_state(4)
    shifted = st.with_phase_slope(gamma)
    base = spatial_profile(st, m=512)
    moved = spatial_profile(shifted, m=512)
    # density(theta) of the shifted state equals density(theta - gamma)
    assert np.allclose(np.roll(base.density, k), moved.density, atol=1e-12)
    peak_shift = moved.theta[np.argmax(moved.density)] - base.theta[np.argmax(base.density)]
    assert peak_shift == pytest.approx(gamma, abs=base.step)


def test_json_roundtrip(tmp_path):
    st = make_superposition([(0, 0.3, 1.0), (2, -1.2, 2.0)], beta=0.125)
    path = tmp_path / "state.json"
    st.save(path)
    back = LadderState.load(path)
    assert back.beta == st.beta
    assert back.n_min == st.n_min
    assert np.allclose(back.amps, st.amps)


def test_profile_normalized_and_matches_direct_sum():
    st = ratchet_state(5, gamma=0.4)
    prof = spatial_profile(st, m=256)
    assert prof.integral() == pytest.approx(1.0, abs=1e-12)
    theta = prof.theta[17]
    direct = abs(sum(st.amplitude(n) * np.exp(1j * n * theta) for n in st.n_values())) ** 2
    assert prof.density[17] == pytest.approx(direct / (2 * PI), abs=1e-12)


def test_profile_rejects_coarse_grid():
    with pytest.raises(ValueError, match="too coarse"):
        spatial_profile(ratchet_state(7), m=16)


def test_two_state_density_is_one_plus_cos():
    # amplitudes (1, e^{-i pi/2})/sqrt(2) give density (1 + sin theta)/2pi
    st = consecutive_state(0, 1, gamma=PI / 2)
    prof = spatial_profile(st, m=512)
    expected = (1.0 + np.sin(prof.theta)) / (2 * PI)
    assert np.allclose(prof.density, expected, atol=1e-12)


def test_fwhm_two_state_is_exactly_pi():
    # (1 + cos theta)/2pi crosses its half level at theta = +-pi/2
    prof = spatial_profile(consecutive_state(0, 1), m=4096)
    assert fwhm(prof) == pytest.approx(PI, abs=1e-3)


def test_fwhm_narrows_with_component_count():
    widths = []
    for count in range(2, 8):
        prof = spatial_profile(ratchet_state(count, gamma=PI / 2), m=4096)
        widths.append(fwhm(prof))
    assert all(a > b for a, b in zip(widths, widths[1:]))
    assert widths[0] == pytest.approx(PI, abs=1e-3)


def test_fwhm_wraps_around_the_grid_edge():
    # peak at pi sits on the wrap point; width must match the peak-at-zero case
    centered = fwhm(spatial_profile(ratchet_state(5), m=2048))
    wrapped = fwhm(spatial_profile(ratchet_state(5, gamma=PI), m=2048))
    assert wrapped == pytest.approx(centered, abs=1e-6)


def test_fwhm_rejects_flat_profile():
    with pytest.raises(NoPeakError):
        fwhm(spatial_profile(plane_wave(0), m=64))
