"""Physical constants and frequency/angle conversions shared by all modules.

Conventions: SI units internally (hertz, meters, radians); angles are
measured from the surface normal and are positive on the steering side.
Phasors use the exp(+jwt) engineering convention, so lossy permittivity is
eps_r * (1 - j*tan_delta).
"""

import math

from .errors import InvalidInput

# Exact speed of light (m/s) and free-space wave impedance (ohm).
C0 = 299792458.0
ETA0 = 376.730313668

TWO_PI = 2.0 * math.pi


def wavelength(f_hz):
    """Free-space wavelength in meters for frequency f_hz > 0."""
    if f_hz <= 0.0:
        raise InvalidInput(f"frequency must be positive, got {f_hz}")
    return C0 / f_hz


def wavenumber(f_hz):
    """Free-space wavenumber k0 = 2*pi*f/c in rad/m for f_hz > 0."""
    if f_hz <= 0.0:
        raise InvalidInput(f"frequency must be positive, got {f_hz}")
    return TWO_PI * f_hz / C0


def wrap_phase(phi):
    """Wrap a phase (rad) to the (-pi, pi] branch used for reflection angles."""
    return math.atan2(math.sin(phi), math.cos(phi))


def db10(x):
    """10*log10(x), for power-like ratios."""
    return 10.0 * math.log10(x)


def db20(x):
    """20*log10(x), for field-like ratios."""
    return 20.0 * math.log10(x)
