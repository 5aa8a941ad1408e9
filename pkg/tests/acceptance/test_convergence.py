"""Mesh and step refinement on the coalescing step front."""

from dataclasses import replace

import numpy as np
import pytest

from kinetic1d.analysis.harness import sweep_errors
from kinetic1d.scenario.presets import STEP_WINDOWS, get_preset

pytestmark = pytest.mark.slow

HS = [0.02, 0.04, 0.1, 0.2]


def test_mesh_refinement_is_at_least_first_order():
    report = sweep_errors(get_preset("fig5d"), hs=HS, dts=[0.1], ref_h=0.005, ref_dt=0.1)
    table = report.table
    assert set(table["status"]) == {"ok"}
    assert len(table) == len(HS) * len(STEP_WINDOWS)

    for _, cells in table.groupby("region"):
        by_h = cells.set_index("h")["theta"]
        assert np.all(np.isfinite(by_h))
        assert by_h[0.02] <= 0.1
        assert by_h[0.02] < by_h[0.2]

    slopes = report.slopes[report.slopes["axis"] == "h"]
    assert len(slopes) == len(STEP_WINDOWS)
    # the step lies on a cell face on every mesh
    assert (slopes["slope"] >= 0.6).all()


@pytest.mark.parametrize("stepper, order", [("rk4", 4.0), ("rk2_heun", 2.0)])
def test_step_refinement_follows_the_scheme_order(stepper, order):
    base = replace(get_preset("fig5d"), stepper=stepper)
    report = sweep_errors(base, hs=[0.1], dts=[0.1, 0.2, 0.4], ref_h=0.1, ref_dt=0.01)
    slopes = report.slopes[report.slopes["axis"] == "dt"]
    assert len(slopes) == len(STEP_WINDOWS)
    for slope in slopes["slope"]:
        assert slope == pytest.approx(order, abs=0.3)
