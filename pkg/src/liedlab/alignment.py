"""Alignment-defect ensembles and polarisation-angle scans.

An imperfectly aligned ensemble is modelled by a cos^N(theta) distribution of
polarization angles around the nominal alignment; N follows from the requested
full width at half maximum through N = ln 2 / (-ln cos(fwhm/2)).  Spectra of
ensemble members add incoherently (independent emitters), so averaging acts
on probabilities, never amplitudes.

theta_bar = pi/2 - theta measures the deviation from a *parallel* alignment;
scans over theta_bar drive the full propagation + extraction pipeline per
angle through a bounded work queue and never abort on a single failed member.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import pulse as pls
from . import spectrum as spc
from . import tdse


def n_from_fwhm(fwhm_deg):
    """Exponent N with cos^N(fwhm/2) = 1/2."""
    if not 0.0 < fwhm_deg < 180.0:
        raise ValueError("fwhm must lie in (0, 180) degrees")
    half = np.radians(0.5 * fwhm_deg)
    return float(np.log(2.0) / (-np.log(np.cos(half))))


def fwhm_from_n(n):
    """Inverse of :func:`n_from_fwhm`, degrees."""
    return float(2.0 * np.degrees(np.arccos(2.0 ** (-1.0 / n))))


@dataclass(frozen=True)
class AlignmentDistribution:
    """Discretized cos^N distribution: symmetric theta samples and weights."""
    N: float
    thetas: np.ndarray           # rad, relative to the nominal alignment
    weights: np.ndarray          # normalized, sum to 1

    @classmethod
    def from_fwhm(cls, fwhm_deg, n_samples=9, span_factor=1.5, center=0.0):
        """Symmetric sampling over +- span_factor * fwhm, weights cos^N."""
        if n_samples < 1 or n_samples % 2 == 0:
            raise ValueError("n_samples must be odd so theta=center is sampled")
        n = n_from_fwhm(fwhm_deg)
        half_span = np.radians(span_factor * fwhm_deg)
        thetas = center + np.linspace(-half_span, half_span, n_samples)
        w = np.cos(np.clip(thetas - center, -0.5 * np.pi, 0.5 * np.pi)) ** n
        w = np.where(np.abs(thetas - center) < 0.5 * np.pi, w, 0.0)
        return cls(N=n, thetas=thetas, weights=w / w.sum())

    @classmethod
    def delta(cls, theta=0.0):
        """Single-angle (perfect alignment) distribution."""
        return cls(N=np.inf, thetas=np.array([theta]), weights=np.array([1.0]))


def average_spectra(runs, dist, match_tol=1e-9):
    """Incoherent weighted average of (theta, MomentumSpectrum) pairs.

    Pairing with dist.weights is positional; run angles must agree with the
    distribution samples.
    """
    if len(runs) != len(dist.weights):
        raise ValueError("number of runs does not match distribution samples")
    ref = runs[0][1]
    acc = np.zeros_like(ref.values)
    for (theta, spec), theta_d, w in zip(runs, dist.thetas, dist.weights):
        if abs(theta - theta_d) > match_tol:
            raise ValueError(f"run angle {theta} does not match sample {theta_d}")
        if not ref.same_grid(spec):
            raise ValueError("spectra live on different momentum grids")
        acc += w * spec.values
    return spc.MomentumSpectrum(ref.k_y.copy(), ref.k_z.copy(), acc,
                                r0=ref.r0, time=ref.time)


@dataclass
class ScanEntry:
    theta_bar_deg: float
    theta: float
    spectrum: object = None
    norm: float = None
    error: str = None


def theta_bar_scan(mol, pulse_template, theta_bars_deg, cfg, orbital,
                   r0, smooth_width, t_extract=None, drift_correct=True,
                   threads=1):
    """Run the propagation + extraction pipeline per theta_bar value.

    theta = pi/2 - theta_bar; theta_bar = 0 is the parallel alignment.
    Members execute on a bounded thread pool; a failing member is recorded in
    its ScanEntry and the scan continues.
    """
    t_ex = pulse_template.duration if t_extract is None else float(t_extract)

    def run_one(tb_deg):
        theta = 0.5 * np.pi - np.radians(tb_deg)
        pulse = pulse_template.with_theta(theta)
        run_cfg = tdse.PropagationConfig(dt=cfg.dt, t_final=t_ex,
                                         mask_width=cfg.mask_width,
                                         mask_power=cfg.mask_power)
        res = tdse.propagate(orbital.psi, mol, pulse, run_cfg)
        shift = (0.0, 0.0)
        if drift_correct:
            fi = pls.field_integrals(pulse)
            F_end = fi.F[-1]
            F_ex = np.interp(t_ex, fi.t, fi.F)
            dF = F_end - F_ex
            shift = (np.sin(theta) * -dF, np.cos(theta) * -dF)
        spec = spc.extract_momentum_spectrum(res.psi, r0, smooth_width,
                                             drift_shift=shift, time=t_ex)
        return spec, res.norms[-1]

    entries = [ScanEntry(theta_bar_deg=float(tb),
                         theta=0.5 * np.pi - np.radians(tb))
               for tb in theta_bars_deg]

    def worker(entry):
        try:
            entry.spectrum, entry.norm = run_one(entry.theta_bar_deg)
        except Exception as exc:  # keep scanning, report per member
            entry.error = f"{type(exc).__name__}: {exc}"
        return entry

    if threads <= 1:
        for e in entries:
            worker(e)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(worker, entries))
    return entries


def kz_profile(spec):
    """k_y-integrated profile P(k_z)."""
    return spec.values.sum(axis=0) * spec.dk_y


def classify_kz_morphology(spec, node_depth=0.05, window=1.0, ridge_window=0.3,
                           ridge_tol=0.98):
    """'node' | 'ridge' | 'other' for the k_z = 0 line of a spectrum.

    node: P(0) below node_depth times the flanking local maxima inside
    |k_z| < window; ridge: P(0) within ridge_tol of the maximum over
    |k_z| < ridge_window.
    """
    p = kz_profile(spec)
    kz = spec.k_z
    i0 = int(np.argmin(np.abs(kz)))
    p0 = p[i0]

    near = np.abs(kz) <= ridge_window
    if p0 >= ridge_tol * p[near].max():
        return "ridge"

    side = (np.abs(kz) <= window)
    left = side & (kz < 0)
    right = side & (kz > 0)
    if left.any() and right.any():
        ref = min(p[left].max(), p[right].max())
        if ref > 0 and p0 < node_depth * ref:
            return "node"
    return "other"
