"""Linearly polarized laser pulse and its time-integrated field areas.

The polarization makes an angle theta with the z axis (the perpendicular-to-
molecule direction), so the field vector is

    E_vec(t) = (sin(theta), cos(theta)) * E(t)        (y, z components).

E(t) = E0 * env(t) * cos(omega*(t - T/2) + cep) with the carrier-envelope
phase referenced to the envelope peak at T/2.  Envelope kinds:

* "sin2"  - sin^2(pi t / T) over exactly n_cycles optical cycles (default),
* "const" - E(t) = E0 on [0, T], no carrier; analytic test envelope.

Field areas (cumulative composite-Simpson integrals of the scalar E):

    F(t) = int_0^t E,   G(t) = int_0^t t' E,   eta(t) = int_0^t F G.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

INTENSITY_AU = 3.50945e16        # W/cm^2 per (a.u. field)^2
OMEGA_NM_AU = 45.5634            # omega[a.u.] = OMEGA_NM_AU / lambda[nm]


@dataclass(frozen=True)
class LaserPulse:
    omega: float                 # carrier, a.u.
    E0: float                    # peak field, a.u.
    n_cycles: int
    envelope: str = "sin2"
    cep: float = 0.0             # rad, referenced to envelope peak
    theta: float = 0.0           # polarization angle from z, rad

    def __post_init__(self):
        if self.omega <= 0 or self.E0 < 0 or self.n_cycles < 1:
            raise ValueError("invalid pulse parameters")
        if self.envelope not in ("sin2", "const"):
            raise ValueError(f"unknown envelope {self.envelope!r}")

    @classmethod
    def from_experiment(cls, wavelength_nm=None, omega=None,
                        intensity_Wcm2=None, E0=None, n_cycles=3,
                        envelope="sin2", cep=0.5 * np.pi, theta=0.0):
        """Build from lab-style parameters (wavelength nm, intensity W/cm^2).

        The default CEP of pi/2 (sine carrier under the envelope) makes the
        field odd about the envelope peak, so F(T) vanishes identically for
        *any* integer cycle count while G(T) stays nonzero; a cosine carrier
        (cep=0) is zero-area only from two cycles up and has G(T) = 0 by
        symmetry.
        """
        if (wavelength_nm is None) == (omega is None):
            raise ValueError("give exactly one of wavelength_nm / omega")
        if (intensity_Wcm2 is None) == (E0 is None):
            raise ValueError("give exactly one of intensity_Wcm2 / E0")
        if omega is None:
            omega = OMEGA_NM_AU / wavelength_nm
        if E0 is None:
            E0 = np.sqrt(intensity_Wcm2 / INTENSITY_AU)
        return cls(omega=omega, E0=E0, n_cycles=int(n_cycles),
                   envelope=envelope, cep=cep, theta=theta)

    @property
    def duration(self):
        """Total pulse length T = 2 pi n_cycles / omega, a.u."""
        return 2.0 * np.pi * self.n_cycles / self.omega

    @property
    def period(self):
        return 2.0 * np.pi / self.omega

    @property
    def ponderomotive_energy(self):
        return self.E0 ** 2 / (4.0 * self.omega ** 2)

    @property
    def quiver_radius(self):
        return self.E0 / self.omega ** 2

    def field_scalar(self, t):
        """Scalar field amplitude E(t); zero outside [0, T]."""
        t = np.asarray(t, dtype=float)
        T = self.duration
        inside = (t >= 0.0) & (t <= T)
        if self.envelope == "const":
            out = np.where(inside, self.E0, 0.0)
        else:
            env = np.sin(np.pi * np.clip(t, 0.0, T) / T) ** 2
            out = np.where(inside,
                           self.E0 * env * np.cos(self.omega * (t - 0.5 * T) + self.cep),
                           0.0)
        return out if out.ndim else float(out)

    def field_at(self, t):
        """(E_y, E_z) components at time t."""
        e = self.field_scalar(t)
        return np.sin(self.theta) * e, np.cos(self.theta) * e

    def with_theta(self, theta):
        return LaserPulse(self.omega, self.E0, self.n_cycles,
                          self.envelope, self.cep, float(theta))


@dataclass(frozen=True)
class FieldIntegrals:
    """Sampled cumulative areas of the scalar field on a uniform time grid."""
    t: np.ndarray
    E: np.ndarray
    F: np.ndarray                # int E dt'            (a.u. momentum)
    G: np.ndarray                # int t' E dt'         (a.u. length)
    eta: np.ndarray              # int F G dt'          (rad)

    @property
    def dt(self):
        return self.t[1] - self.t[0]

    def index_of(self, t):
        i = int(round(t / self.dt))
        if not (0 <= i < len(self.t)) or abs(self.t[i] - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"time {t} is not on the sample grid (dt={self.dt})")
        return i

    def at(self, t):
        """(F, G, eta) at a sample time t."""
        i = self.index_of(t)
        return self.F[i], self.G[i], self.eta[i]

    def interp(self, t):
        """Linear interpolation off-grid; for plotting and previews."""
        return (np.interp(t, self.t, self.F),
                np.interp(t, self.t, self.G),
                np.interp(t, self.t, self.eta))


def field_integrals(pulse, dt=None, n_per_cycle=2048):
    """Cumulative Simpson F, G, eta for a pulse, sampled every `dt`.

    `dt` must divide the pulse duration to rounding; by default a fine grid of
    `n_per_cycle` samples per optical cycle is used.
    """
    T = pulse.duration
    if dt is None:
        n = int(pulse.n_cycles * n_per_cycle)
    else:
        n = int(round(T / dt))
        if abs(n * dt - T) > 1e-8 * T:
            raise ValueError("dt must divide the pulse duration")
    t = np.linspace(0.0, T, n + 1)
    e = pulse.field_scalar(t)
    f = cumulative_simpson(e, x=t, initial=0.0)
    gq = cumulative_simpson(t * e, x=t, initial=0.0)
    eta = cumulative_simpson(f * gq, x=t, initial=0.0)
    return FieldIntegrals(t=t, E=e, F=f, G=gq, eta=eta)
