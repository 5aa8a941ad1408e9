import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kinetic1d.errors import ParameterError
from kinetic1d.model.kernels import (
    KernelShape,
    KernelSpec,
    eval_kernel,
    kernel_mass,
    truncation_radius,
)

shapes = st.sampled_from([KernelShape.GAUSSIAN, KernelShape.RECTANGLE])
specs = st.builds(
    KernelSpec,
    shape=shapes,
    mu=st.floats(0.01, 50.0),
    sigma=st.floats(0.05, 5.0),
    shift=st.one_of(st.just(0.0), st.floats(0.0, 8.0)),
)


@given(spec=specs, x=st.floats(-60.0, 60.0))
def test_kernels_are_even(spec, x):
    assert eval_kernel(spec, x) == eval_kernel(spec, -x)


@given(spec=specs, x=st.floats(-60.0, 60.0))
def test_kernels_are_nonnegative(spec, x):
    assert eval_kernel(spec, x) >= 0.0


@pytest.mark.parametrize(
    "spec",
    [
        KernelSpec(KernelShape.GAUSSIAN, mu=1.0, sigma=1.0),
        KernelSpec(KernelShape.GAUSSIAN, mu=20.0, sigma=0.5, shift=4.0),
        KernelSpec(KernelShape.RECTANGLE, mu=1.0, sigma=1.0, shift=8.0),
        KernelSpec(KernelShape.RECTANGLE, mu=0.3, sigma=2.0),
    ],
)
def test_kernel_integrates_to_its_intensity(spec):
    dx = 1e-4
    x = np.arange(-20.0, 20.0, dx) + dx / 2
    integral = float(np.sum(eval_kernel(spec, x)) * dx)
    tolerance = 1e-7 if spec.shape is KernelShape.GAUSSIAN else 1e-3
    assert integral == pytest.approx(kernel_mass(spec), rel=tolerance)


def test_truncation_radius_by_shape():
    assert truncation_radius(KernelSpec(KernelShape.GAUSSIAN, mu=1.0, sigma=1.0)) == 6.0
    assert truncation_radius(KernelSpec(KernelShape.GAUSSIAN, mu=1.0, sigma=0.5, shift=2)) == 5.0
    assert truncation_radius(KernelSpec(KernelShape.RECTANGLE, mu=1.0, sigma=1.0, shift=8)) == 9.0
    assert truncation_radius(KernelSpec()) == 0.0


def test_cutoff_shortens_the_reach():
    spec = KernelSpec(KernelShape.GAUSSIAN, mu=1.0, sigma=2.0, cutoff=9.9)
    assert truncation_radius(spec) == 9.9
    assert eval_kernel(spec, 9.95) == 0.0
    assert eval_kernel(spec, 9.85) > 0.0


def test_values_beyond_the_radius_are_exactly_zero():
    spec = KernelSpec(KernelShape.GAUSSIAN, mu=1.0, sigma=1.0)
    values = eval_kernel(spec, np.array([5.99, 6.0, 6.01, 50.0]))
    assert values[0] > 0 and values[1] > 0
    assert values[2] == 0.0 and values[3] == 0.0


def test_gaussian_peak_value():
    spec = KernelSpec(KernelShape.GAUSSIAN, mu=2.0, sigma=1.0)
    assert eval_kernel(spec, 0.0) == pytest.approx(2.0 / math.sqrt(2.0 * math.pi))


def test_shifted_pair_has_two_bumps():
    spec = KernelSpec(KernelShape.RECTANGLE, mu=1.0, sigma=1.0, shift=8.0)
    assert eval_kernel(spec, 0.0) == 0.0
    assert eval_kernel(spec, 8.0) == pytest.approx(0.25)
    assert eval_kernel(spec, -8.5) == pytest.approx(0.25)


def test_disabled_kernel_is_zero_everywhere():
    spec = KernelSpec.disabled()
    assert not spec.enabled
    np.testing.assert_array_equal(eval_kernel(spec, np.linspace(-3, 3, 7)), np.zeros(7))


def test_scalar_in_scalar_out():
    assert isinstance(eval_kernel(KernelSpec(mu=1.0), 0.5), float)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(mu=-1.0),
        dict(mu=1.0, sigma=0.0),
        dict(mu=1.0, sigma=-2.0),
        dict(mu=1.0, shift=-1.0),
        dict(mu=float("nan")),
        dict(mu=1.0, cutoff=0.0),
    ],
)
def test_invalid_parameters_are_rejected(kwargs):
    with pytest.raises(ParameterError):
        KernelSpec(**kwargs)


def test_labels():
    assert KernelSpec(KernelShape.GAUSSIAN, mu=1.0, sigma=1.0).label() == "G(1,1)"
    assert KernelSpec(KernelShape.RECTANGLE, mu=1.0, sigma=1.0, shift=8.0).label() == "C(1,1,8)"
