import math

import pytest

from irskit.core import C0, wavelength, wavenumber, wrap_phase
from irskit.errors import InvalidInput


def test_wavelength_5ghz():
    # c/f with the exact speed of light, not the 60 mm round number
    assert wavelength(5e9) == pytest.approx(0.0599585, abs=1e-7)
    assert wavelength(5e9) == C0 / 5e9


def test_wavelength_1hz():
    assert wavelength(1.0) == C0


def test_wavelength_10ghz():
    assert wavelength(10e9) == pytest.approx(0.0299792, abs=1e-7)


def test_wavenumber_5ghz():
    assert wavenumber(5e9) == pytest.approx(104.79, abs=0.01)


def test_wavenumber_unit_wavelength():
    f = C0 / 1.0  # lambda = 1 m
    assert wavenumber(f) == pytest.approx(2 * math.pi, rel=1e-15)


def test_wavenumber_2p5ghz():
    assert wavenumber(2.5e9) == pytest.approx(52.40, abs=0.01)


def test_nonpositive_frequency_rejected():
    for f in (0.0, -1.0, -5e9):
        with pytest.raises(InvalidInput):
            wavelength(f)
        with pytest.raises(InvalidInput):
            wavenumber(f)


def test_product_is_two_pi():
    for exp in range(0, 13):
        f = 3.7 * 10**exp
        assert wavelength(f) * wavenumber(f) == pytest.approx(
            2 * math.pi, rel=1e-12
        )


def test_doubling_frequency_halves_wavelength():
    for f in (1.0, 5e9, 2.4e9, 61.3e6):
        assert wavelength(2 * f) == pytest.approx(wavelength(f) / 2, rel=1e-15)


def test_wrap_phase_branch():
    assert wrap_phase(0.0) == 0.0
    assert wrap_phase(math.pi) == pytest.approx(math.pi)
    assert wrap_phase(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
    assert wrap_phase(-3 * math.pi / 2) == pytest.approx(math.pi / 2)
    assert abs(wrap_phase(7.5 * math.pi)) <= math.pi
