"""Photoelectron momentum spectra, LIED traces and fringe inversion.

Extraction removes the bound interior |r| < r0 with a smooth radial mask and
Fourier-transforms the remainder; |<k|psi_ext>|^2 is the momentum density.
When the state is taken before the end of the pulse, the remaining field
imparts a uniform drift -(F(T) - F(t)) along the polarization; the optional
drift correction displaces the amplitude accordingly so momenta are
asymptotic (Coulomb distortion after extraction is neglected).

The LIED trace S(k_y) integrates |A|^2 over k_z in the high-energy annulus
|k| > k_min.  Fringe inversion Fourier-analyzes S(k_y): the cross term of the
two-center amplitude beats with period 2 pi / R (conjugate position R), the
squared term with period pi / R (conjugate position 2 R); the pair structure
identifies the families and yields the R estimates.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft
import scipy.signal

from . import grid as g


class InsufficientFringesError(ValueError):
    """The trace does not contain enough oscillations to invert."""


@dataclass
class MomentumSpectrum:
    """|A(k)|^2 on an ascending (k_y, k_z) grid (probability per a.u.^2)."""
    k_y: np.ndarray
    k_z: np.ndarray
    values: np.ndarray
    r0: float = None
    time: float = None

    @property
    def dk_y(self):
        return self.k_y[1] - self.k_y[0]

    @property
    def dk_z(self):
        return self.k_z[1] - self.k_z[0]

    def total(self):
        return float(self.values.sum() * self.dk_y * self.dk_z)

    def copy(self):
        return MomentumSpectrum(self.k_y.copy(), self.k_z.copy(),
                                self.values.copy(), self.r0, self.time)

    def same_grid(self, other):
        return (self.values.shape == other.values.shape
                and np.allclose(self.k_y, other.k_y)
                and np.allclose(self.k_z, other.k_z))


@dataclass
class LiedTrace:
    """k_z-integrated high-energy diffraction trace S(k_y)."""
    k_y: np.ndarray
    S: np.ndarray
    k_min: float

    @property
    def dk_y(self):
        return self.k_y[1] - self.k_y[0]


def spectrum_from_amplitude(phi, r0=None, time=None):
    """|phi|^2 of a momentum-space WaveFunction, reordered to ascending axes."""
    if phi.space != "k":
        raise ValueError("expected a momentum-space field")
    grid = phi.grid
    dens = np.abs(_fft.fftshift(phi.values)) ** 2
    return MomentumSpectrum(k_y=_fft.fftshift(grid.k_y).copy(),
                            k_z=_fft.fftshift(grid.k_z).copy(),
                            values=dens, r0=r0, time=time)


def extract_momentum_amplitude(psi, r0, smooth_width, drift_shift=(0.0, 0.0)):
    """Momentum amplitude of the exterior part of psi (bound part removed).

    `drift_shift` displaces the amplitude by the given (dk_y, dk_z); pass the
    residual field area to map an in-pulse state to asymptotic momenta.
    """
    grid = psi.grid
    mask = g.radial_exterior_mask(grid, r0, smooth_width)
    work = psi.values * mask
    d_y, d_z = drift_shift
    if d_y != 0.0 or d_z != 0.0:
        y, z = grid.mesh()
        work = work * np.exp(1j * (d_y * y + d_z * z))
    return g.to_momentum(g.WaveFunction(grid, work))


def extract_momentum_spectrum(psi, r0, smooth_width, drift_shift=(0.0, 0.0),
                              time=None):
    """Momentum spectrum of the exterior part of psi; see module docstring."""
    phi = extract_momentum_amplitude(psi, r0, smooth_width, drift_shift)
    return spectrum_from_amplitude(phi, r0=r0, time=time)


def lied_trace(spec, k_min):
    """S(k_y) = integral over k_z of the spectrum restricted to |k| > k_min."""
    kk = np.hypot(spec.k_y[:, None], spec.k_z[None, :])
    annulus = kk > k_min
    if not annulus.any():
        raise ValueError(f"no grid points beyond k_min={k_min}")
    vals = np.where(annulus, spec.values, 0.0)
    return LiedTrace(k_y=spec.k_y.copy(), S=vals.sum(axis=1) * spec.dk_z,
                     k_min=float(k_min))


def _parabolic_peak(x, y, i):
    """Quadratic interpolation of a discrete peak at index i."""
    if i <= 0 or i >= len(x) - 1:
        return x[i], y[i]
    denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
    if denom == 0:
        return x[i], y[i]
    d = 0.5 * (y[i - 1] - y[i + 1]) / denom
    d = np.clip(d, -1.0, 1.0)
    return x[i] + d * (x[1] - x[0]), y[i] - 0.25 * (y[i - 1] - y[i + 1]) * d


@dataclass
class FringeReport:
    """Detected fringe components of a LIED trace.

    `peaks` lists (x, amplitude) with x the conjugate position in bohr;
    `periods` the corresponding k_y periods 2 pi / x.  R estimates come from
    the cross term (x = R) and the squared term (x = 2R) when both are found.
    """
    peaks: list = field(default_factory=list)
    r_from_cross: float = None
    r_from_squared: float = None
    r_best: float = None

    @property
    def periods(self):
        return [2.0 * np.pi / x for x, _ in self.peaks]


def fringe_analysis(trace, pad_factor=16, min_fringes=3.0,
                    rel_prominence=0.02, pair_tol=0.12):
    """Fourier analysis of S(k_y); returns a FringeReport.

    A Hann-windowed, detrended, zero-padded FFT of the trace gives the
    conjugate-position amplitude; local maxima with at least `min_fringes`
    oscillations across the trace support are fringe candidates.  A pair with
    x2 ~= 2 x1 fixes the cross (R) and squared (2R) families; if only a single
    line is present it is read as the squared family (pure cos^2 traces have
    no cross term).
    """
    k = np.asarray(trace.k_y, dtype=float)
    s = np.asarray(trace.S, dtype=float)
    live = s > (s.max() * 1e-12 if s.max() > 0 else 0.0)
    if live.sum() < 8:
        raise InsufficientFringesError("trace support is too small")
    i0, i1 = np.flatnonzero(live)[[0, -1]]
    k, s = k[i0:i1 + 1], s[i0:i1 + 1]
    n = len(k)
    dk = k[1] - k[0]
    k_range = k[-1] - k[0]
    x_lo = min_fringes * 2.0 * np.pi / k_range

    window = np.hanning(n)
    detrended = s - _smooth(s, max(5, n // 8))
    amp = np.abs(_fft.rfft(detrended * window, n=pad_factor * n))
    x = 2.0 * np.pi * _fft.rfftfreq(pad_factor * n, d=dk)

    sel = x >= x_lo
    if not sel.any():
        raise InsufficientFringesError("fewer than the minimum number of fringes")
    floor = amp[sel].max() * rel_prominence
    idx, _ = scipy.signal.find_peaks(amp, prominence=floor, height=floor)
    idx = [i for i in idx if x[i] >= x_lo]
    if not idx:
        raise InsufficientFringesError("no fringe component above threshold")
    peaks = sorted((_parabolic_peak(x, amp, i) for i in idx),
                   key=lambda p: -p[1])[:6]

    report = FringeReport(peaks=[(float(px), float(pa)) for px, pa in peaks])
    best_pair, best_score = None, 0.0
    for xi, ai in peaks:
        for xj, aj in peaks:
            if xj <= xi:
                continue
            if abs(xj / xi - 2.0) < pair_tol and ai + aj > best_score:
                best_pair, best_score = (xi, ai, xj, aj), ai + aj
    if best_pair is not None:
        xi, ai, xj, aj = best_pair
        report.r_from_cross = xi
        report.r_from_squared = 0.5 * xj
        report.r_best = (ai * xi + aj * 0.5 * xj) / (ai + aj)
    else:
        x0, _ = peaks[0]
        report.r_from_squared = 0.5 * x0
        report.r_best = 0.5 * x0
    return report


def _smooth(y, width):
    """Moving-average baseline with edge padding."""
    width = int(width) | 1
    pad = width // 2
    ext = np.concatenate([np.full(pad, y[:pad].mean()), y,
                          np.full(pad, y[-pad:].mean())])
    kernel = np.ones(width) / width
    return np.convolve(ext, kernel, mode="valid")


def local_minima(x, y):
    """Parabolic-refined local minima of y(x); [(x_min, y_min), ...]."""
    out = []
    for i in range(1, len(y) - 1):
        if y[i] <= y[i - 1] and y[i] < y[i + 1]:
            xm, ym = _parabolic_peak(x, -np.asarray(y), i)
            out.append((xm, -ym))
    return out


def fringe_zeros(trace, depth=0.05):
    """Positions of fringe minima that drop below `depth` of the flanking maxima."""
    mins = local_minima(trace.k_y, trace.S)
    out = []
    s = trace.S
    for xm, ym in mins:
        i = int(np.searchsorted(trace.k_y, xm))
        lo, hi = max(0, i - 40), min(len(s), i + 40)
        ref = s[lo:hi].max()
        if ref > 0 and ym < depth * ref:
            out.append(xm)
    return np.asarray(out)


def fringe_contrast(trace, band):
    """(max - min)/(max + min) of S over the k_y band (lo, hi)."""
    lo, hi = band
    sel = (trace.k_y >= lo) & (trace.k_y <= hi)
    if sel.sum() < 4:
        raise ValueError("band selects too few samples")
    s = trace.S[sel]
    smax, smin = float(s.max()), float(s.min())
    if smax + smin == 0:
        return 0.0
    return (smax - smin) / (smax + smin)
