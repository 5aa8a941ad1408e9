import numpy as np
import pytest

from kinetic1d.model.grid import BoundaryMode, build_grid
from kinetic1d.model.initial import ConstantIC, RectangleIC, TrigonometricIC
from kinetic1d.model.kernels import KernelShape, KernelSpec
from kinetic1d.scenario.scenario import Scenario
from kinetic1d.solver.config import IntegrationConfig


def gauss(mu, sigma=1.0, shift=0.0):
    return KernelSpec(shape=KernelShape.GAUSSIAN, mu=mu, sigma=sigma, shift=shift)


def periodic_scenario(**overrides) -> Scenario:
    """Small periodic run with jumps and repulsion on L = 20, h = 0.2."""
    settings = dict(
        name="small",
        grid=build_grid(20.0, 100),
        boundary=BoundaryMode.PERIODIC,
        a=gauss(1.0),
        phi=gauss(2.0),
        initial=RectangleIC(v=1.0, sigma=1.0),
        integration=IntegrationConfig(dt=0.1, t_end=2.0, snapshot_times=(0.0, 1.0, 2.0)),
    )
    settings.update(overrides)
    return Scenario(**settings)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def small_scenario():
    return periodic_scenario()


@pytest.fixture
def trig_scenario():
    return periodic_scenario(
        name="trig",
        initial=TrigonometricIC(n0=1.0, mu0=0.5, k=2),
        integration=IntegrationConfig(dt=0.1, t_end=10.0, snapshot_times=(0.0, 5.0, 10.0)),
    )


@pytest.fixture
def divergent_scenario():
    return periodic_scenario(
        name="blowup",
        grid=build_grid(20.0, 40),
        a=gauss(1.0),
        phi=KernelSpec(),
        b=gauss(5.0),
        initial=ConstantIC(n0=10.0),
        integration=IntegrationConfig(dt=2.5, t_end=50.0, snapshot_times=(0.0, 50.0)),
    )
