import pytest

from kinetic1d.errors import ParameterError
from kinetic1d.model.grid import BoundaryMode
from kinetic1d.model.initial import HeavisideIC, MultiRectangleIC
from kinetic1d.model.kernels import truncation_radius
from kinetic1d.scenario.presets import get_preset, preset_names
from kinetic1d.scenario.scenario import scenario_hash


def test_every_preset_builds():
    names = preset_names()
    assert len(names) == 23
    for name in names:
        scenario = get_preset(name)
        assert scenario.name == name
        for spec in scenario.kernels:
            assert truncation_radius(spec) < scenario.grid.length / 2


def test_wide_kernels_are_truncated_inside_the_period():
    scenario = get_preset("fig1e")
    assert scenario.b.sigma == 2.0
    assert scenario.b.cutoff == pytest.approx(9.9)
    assert truncation_radius(scenario.b) == pytest.approx(9.9)
    assert scenario.a.cutoff is None
    assert any("truncated" in note for note in scenario.notes)


def test_free_jumps_preset_has_only_jumps():
    scenario = get_preset("fig1a")
    assert scenario.a.enabled
    assert not scenario.phi.enabled and not scenario.b.enabled
    assert scenario.integration.t_end == 400.0


def test_shifted_pair_preset():
    scenario = get_preset("fig6a")
    assert scenario.boundary is BoundaryMode.LEFT_ASYMPTOTIC_RIGHT_DIRICHLET
    assert scenario.adaptive.enabled
    assert isinstance(scenario.initial, HeavisideIC)
    assert (scenario.a.mu, scenario.a.shift) == (1.0, 2.0)
    assert (scenario.phi.mu, scenario.phi.shift) == (10.0, 4.0)
    assert not scenario.b.enabled
    assert get_preset("fig6b").b.enabled


def test_three_rectangles():
    scenario = get_preset("fig2")
    assert scenario.initial == MultiRectangleIC(amplitudes=(0.6, 0.3, 0.8), ranges=(1.0,))
    assert scenario.b.enabled


def test_long_horizon_is_capped_with_a_note():
    scenario = get_preset("fig3a")
    assert scenario.integration.t_end == 2000.0
    assert scenario.notes


def test_unknown_preset():
    with pytest.raises(ParameterError, match="Unknown preset"):
        get_preset("fig9z")


def test_hash_is_stable_and_distinguishes_presets():
    assert scenario_hash(get_preset("fig4a")) == scenario_hash(get_preset("FIG4A"))
    hashes = {scenario_hash(get_preset(name)) for name in preset_names()}
    assert len(hashes) == len(preset_names())
