"""Tests for the eavesdropper-position sweep and its path-loss geometry."""

import numpy as np
import pytest

from secrecy_rates import (
    RawMacChannel,
    RawTwChannel,
    Scene,
    default_scene,
    gains_from_geometry,
    sweep,
)

BOUNDS = (-1.0, 1.0, -1.0, 1.0)


def test_gain_law_examples():
    scene = Scene(transmitter_positions=((0.0, 0.0), (3.0, 0.0)), receiver_position=(1.0, 0.0))
    raw = gains_from_geometry(scene, (0.0, 2.0))
    assert raw.main_gains[0] == 1.0  # d = 1
    assert raw.tap_gains[0] == 0.25  # d = 2, inverse square
    at_tx = gains_from_geometry(scene, (0.0, 0.0))
    assert at_tx.tap_gains[0] == 1e6  # distance floor 1e-3


def test_gain_law_exponent():
    scene = Scene(
        transmitter_positions=((0.0, 0.0), (3.0, 0.0)),
        receiver_position=(1.0, 0.0),
        path_loss_exponent=3.0,
    )
    raw = gains_from_geometry(scene, (0.0, 2.0))
    assert np.isclose(raw.tap_gains[0], 2.0 ** -3.0, rtol=0, atol=1e-15)


def test_mode_inference():
    with_rx = default_scene()
    assert isinstance(gains_from_geometry(with_rx, (1.0, 1.0)), RawMacChannel)
    assert isinstance(gains_from_geometry(with_rx, (1.0, 1.0), "tw"), RawTwChannel)
    no_rx = Scene(transmitter_positions=((-0.5, 0.0), (0.5, 0.0)))
    assert isinstance(gains_from_geometry(no_rx, (1.0, 1.0)), RawTwChannel)
    with pytest.raises(ValueError):
        gains_from_geometry(no_rx, (1.0, 1.0), "mac")


def test_scene_validation():
    with pytest.raises(ValueError):
        Scene(transmitter_positions=((0.0, 0.0),))
    with pytest.raises(ValueError):
        Scene(transmitter_positions=((0.0, 0.0), (1.0, 0.0)), path_loss_exponent=0.0)
    with pytest.raises(ValueError):
        Scene(transmitter_positions=((0.0, 0.0), (np.inf, 0.0)))


def test_sweep_argument_validation():
    scene = default_scene()
    with pytest.raises(ValueError):
        sweep(scene, BOUNDS, 1, "MAC-CJ")
    with pytest.raises(ValueError):
        sweep(scene, (1.0, -1.0, -1.0, 1.0), 8, "MAC-CJ")
    with pytest.raises(ValueError):
        sweep(scene, BOUNDS, 8, "sideways")


def test_sweep_receiver_cell_and_transmitter_cells():
    """Qualitative structure: silence at the receiver, jamming at a sender."""
    result = sweep(default_scene(), BOUNDS, 9, "MAC-CJ")
    ix0 = int(np.flatnonzero(np.isclose(result.xs, 0.0))[0])
    iy0 = int(np.flatnonzero(np.isclose(result.ys, 0.0))[0])
    assert result.sum_rate[iy0, ix0] == 0.0
    ixt = int(np.flatnonzero(np.isclose(result.xs, -0.5))[0])
    assert result.tx_power[iy0, ixt, 0] == 0.0
    assert result.jam_power[iy0, ixt, 0] > 0.0
    assert result.tx_power[iy0, ixt, 1] > 0.0
    assert not result.error.any()
    assert (result.sum_rate >= 0.0).all()


def test_sweep_powers_stay_within_caps():
    scene = default_scene()
    for mode in ("MAC-CJ", "TW-CJ"):
        result = sweep(scene, BOUNDS, 9, mode)
        total = result.tx_power + result.jam_power
        for u in range(2):
            assert (total[:, :, u] <= scene.raw_power_caps[u] + 1e-9).all(), (
                f"{mode} user {u + 1} exceeds its cap"
            )


def test_sweep_far_eavesdropper_limit():
    """A distant eavesdropper leaves the plain full-power MAC rate."""
    result = sweep(default_scene(), (1000.0, 1001.0, 1000.0, 1001.0), 2, "MAC-CJ")
    # standardized caps are 4 * 2 = 8 per user, so the ceiling is log2(17)/2
    ceiling = 0.5 * np.log2(17.0)
    assert np.all(np.abs(result.sum_rate - ceiling) < 1e-3), f"rates {result.sum_rate}"
    assert np.allclose(result.tx_power, 2.0, rtol=0, atol=1e-9)
    assert np.all(result.jam_power == 0.0)


def test_sweep_mac_symmetry_bit_exact():
    result = sweep(default_scene(), BOUNDS, 33, "MAC-CJ")
    assert np.array_equal(result.sum_rate, result.sum_rate[:, ::-1])
    assert np.array_equal(result.sum_rate, result.sum_rate[::-1, :])
    # mirroring x swaps the two transmitters
    assert np.array_equal(result.tx_power, result.tx_power[:, ::-1, ::-1])
    assert np.array_equal(result.jam_power, result.jam_power[:, ::-1, ::-1])
    assert np.array_equal(result.tx_power, result.tx_power[::-1, :, :])
    assert np.array_equal(result.jam_power, result.jam_power[::-1, :, :])


def test_sweep_tw_symmetry_bit_exact():
    result = sweep(default_scene(), BOUNDS, 33, "TW-CJ")
    assert np.array_equal(result.sum_rate, result.sum_rate[:, ::-1])
    assert np.array_equal(result.sum_rate, result.sum_rate[::-1, :])
    assert np.array_equal(result.tx_power, result.tx_power[::-1, :, :])
    assert np.array_equal(result.jam_power, result.jam_power[::-1, :, :])
    # off the centerline the x-mirror swaps the terminals exactly; on it the
    # two gains tie and the documented tie-break always jams terminal 2
    off = np.flatnonzero(~np.isclose(result.xs, 0.0))
    mirrored_tx = result.tx_power[:, ::-1, ::-1]
    mirrored_jam = result.jam_power[:, ::-1, ::-1]
    assert np.array_equal(result.tx_power[:, off], mirrored_tx[:, off])
    assert np.array_equal(result.jam_power[:, off], mirrored_jam[:, off])
    center = np.flatnonzero(np.isclose(result.xs, 0.0))
    for ix in center:
        for iy in range(len(result.ys)):
            assert result.jam_power[iy, ix, 0] == 0.0, "tie must jam terminal 2"


def test_sweep_tw_positive_cells_cover_mac():
    mac = sweep(default_scene(), BOUNDS, 17, "MAC-CJ")
    tw = sweep(default_scene(), BOUNDS, 17, "TW-CJ")
    mac_pos = mac.sum_rate > 1e-9
    assert tw.sum_rate[mac_pos].min() > 1e-9, "a MAC-positive cell lost secrecy in TW"
    assert int(tw.sum_rate.size - np.count_nonzero(tw.sum_rate > 1e-9)) <= int(
        mac.sum_rate.size - np.count_nonzero(mac_pos)
    )


def test_sweep_csv_and_metadata():
    result = sweep(default_scene(), BOUNDS, 5, "MAC-CJ")
    text = result.csv_text()
    lines = text.splitlines()
    assert lines[0] == "x,y,p1_tx,p2_tx,p1_jam,p2_jam,sum_rate_bits,branch"
    assert len(lines) == 1 + 25
    again = sweep(default_scene(), BOUNDS, 5, "MAC-CJ")
    assert again.csv_text() == text, "sweep output must be byte-stable"
    meta = result.metadata_json()
    for key in (
        "scene",
        "path_loss_exponent",
        "resolution",
        "mode",
        "grid_bounds",
        "distance_floor",
        "library_version",
        "workers",
    ):
        assert key in meta, f"metadata missing {key}"
    assert meta["resolution"] == 5
    assert meta["mode"] == "MAC-CJ"


def test_sweep_single_worker_matches_default(monkeypatch):
    base = sweep(default_scene(), BOUNDS, 7, "TW-CJ")
    monkeypatch.setenv("SECRECY_RATES_THREADS", "1")
    serial = sweep(default_scene(), BOUNDS, 7, "TW-CJ")
    assert np.array_equal(base.sum_rate, serial.sum_rate)
    assert np.array_equal(base.tx_power, serial.tx_power)
    assert base.branch == serial.branch
    assert serial.metadata["workers"] == 1


def test_sweep_bad_thread_env(monkeypatch):
    monkeypatch.setenv("SECRECY_RATES_THREADS", "many")
    with pytest.raises(ValueError):
        sweep(default_scene(), BOUNDS, 3, "MAC-CJ")
