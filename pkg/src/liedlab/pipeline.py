"""Wiring of the standard experiments from a RunConfig.

Each ``run_*`` function is the programmatic body of the corresponding CLI
subcommand; outputs are plain objects so tests and notebook-style scripts can
drive them directly.
"""

from dataclasses import dataclass

import numpy as np

from . import alignment as align
from . import grid as g
from . import pulse as pls
from . import sfa
from . import spectrum as spc
from . import tdse
from .molecule import build_homo_minus_1, relax_molecule, MolecularOrbital


@dataclass
class Workspace:
    """Lazily built shared objects for one configuration."""
    cfg: object
    grid: object = None
    mol: object = None
    ao: object = None
    orbital: object = None
    relax_info: dict = None

    def build(self):
        if self.grid is None:
            self.grid = self.cfg.make_grid()
            self.mol = self.cfg.make_molecule()
            self.ao = self.cfg.make_ao()
        return self

    def get_orbital(self):
        """Initial a1 molecular orbital per [propagation] initial_state."""
        self.build()
        if self.orbital is not None:
            return self.orbital
        a, b = self.cfg.lcao_pair()
        mo = build_homo_minus_1(self.mol, self.grid, a=a, b=b, ao=self.ao)
        if self.cfg.propagation.initial_state == "relaxed":
            psi, energy, info = relax_molecule(self.mol, self.grid, ao=self.ao)
            self.relax_info = {"energy": energy, "residual": info["residual"]}
            mo = MolecularOrbital(a=mo.a, b=mo.b, psi=psi, irrep=mo.irrep,
                                  ao=mo.ao, a_prim=mo.a_prim, b_prim=mo.b_prim)
        self.orbital = mo
        return mo


def prop_config(cfg, t_final=None, snapshot_times=(), record=True):
    p = cfg.propagation
    return tdse.PropagationConfig(
        dt=p.dt_au, t_final=t_final,
        mask_width=p.mask_width_bohr if p.mask_width_bohr > 0 else None,
        mask_power=p.mask_power,
        record_stride=p.record_stride if record else 0,
        snapshot_times=tuple(snapshot_times))


def run_relax(cfg, ws=None):
    """Relax the sector ground state; returns (psi, report dict)."""
    ws = (ws or Workspace(cfg)).build()
    a, b = cfg.lcao_pair()
    seed_mo = build_homo_minus_1(ws.mol, ws.grid, a=a, b=b, ao=ws.ao)
    psi, energy, info = relax_molecule(ws.mol, ws.grid, ao=ws.ao)
    report = {"energy_hartree": energy, "residual": info["residual"],
              "converged": bool(info["converged"]),
              "lcao_a": seed_mo.a, "lcao_b": seed_mo.b}
    return psi, report


def run_propagate(cfg, ws=None, theta=None, t_final=None, snapshot_times=()):
    """Full propagation of the initial MO; returns (result, workspace)."""
    ws = (ws or Workspace(cfg)).build()
    orbital = ws.get_orbital()
    pulse = cfg.make_pulse(theta)
    res = tdse.propagate(orbital.psi, ws.mol, pulse,
                         prop_config(cfg, t_final, snapshot_times))
    return res, ws


def run_channels(cfg, ws=None, theta=None, t_final=None):
    """Per-AO channel propagation plus the direct MO run for comparison."""
    ws = (ws or Workspace(cfg)).build()
    orbital = ws.get_orbital()
    pulse = cfg.make_pulse(theta)
    pcfg = prop_config(cfg, t_final, record=False)
    channels = tdse.propagate_channels(ws.mol, pulse, pcfg, ws.grid, ws.ao)
    direct = tdse.propagate(orbital.psi, ws.mol, pulse, pcfg)
    assembled = tdse.reconstruct_from_channels(channels, orbital.a_prim,
                                               orbital.b_prim, ws.mol)
    return {"channels": channels, "direct": direct, "assembled": assembled,
            "workspace": ws}


def extraction_drift(pulse, t_extract):
    """Uniform momentum map from extraction time to the end of the pulse."""
    fi = pls.field_integrals(pulse)
    d_f = fi.F[-1] - np.interp(t_extract, fi.t, fi.F)
    return (-np.sin(pulse.theta) * d_f, -np.cos(pulse.theta) * d_f)


def run_spectrum(cfg, ws=None, theta=None):
    """Propagate to the extraction time and build the momentum spectrum."""
    ws = (ws or Workspace(cfg)).build()
    pulse = cfg.make_pulse(theta)
    t_ex = cfg.spectrum.t_extract_frac * pulse.duration
    res, ws = run_propagate(cfg, ws, theta=theta, t_final=t_ex)
    shift = (extraction_drift(pulse, t_ex) if cfg.spectrum.drift_correction
             else (0.0, 0.0))
    spec = spc.extract_momentum_spectrum(
        res.psi, cfg.spectrum.r0_bohr, cfg.spectrum.smooth_width_bohr,
        drift_shift=shift, time=t_ex)
    return spec, res, ws


def run_lied(cfg, ws=None, theta=None, spec=None):
    if spec is None:
        spec, _, ws = run_spectrum(cfg, ws, theta)
    trace = spc.lied_trace(spec, cfg.k_min())
    return trace, spec, ws


def run_invert(cfg, ws=None, trace=None):
    if trace is None:
        trace, _, ws = run_lied(cfg, ws)
    report = spc.fringe_analysis(trace)
    return report, trace, ws


def run_scan_theta(cfg, ws=None, theta_bars_deg=None):
    ws = (ws or Workspace(cfg)).build()
    orbital = ws.get_orbital()
    pulse0 = cfg.make_pulse()
    if theta_bars_deg is None:
        theta_bars_deg = [float(x) for x in
                          cfg.alignment.theta_bars_deg.split(",")]
    t_ex = cfg.spectrum.t_extract_frac * pulse0.duration
    entries = align.theta_bar_scan(
        ws.mol, pulse0, theta_bars_deg, prop_config(cfg, record=False),
        orbital, cfg.spectrum.r0_bohr, cfg.spectrum.smooth_width_bohr,
        t_extract=t_ex, drift_correct=cfg.spectrum.drift_correction,
        threads=cfg.run.threads)
    return entries, ws


def run_average(cfg, ws=None):
    """Spectra over a cos^N ensemble of theta around the configured angle."""
    ws = (ws or Workspace(cfg)).build()
    base_theta = np.radians(cfg.pulse.theta_deg)
    dist = align.AlignmentDistribution.from_fwhm(
        cfg.alignment.fwhm_deg, n_samples=cfg.alignment.n_samples,
        span_factor=cfg.alignment.span_factor, center=base_theta)
    runs = []
    for theta in dist.thetas:
        spec, _, _ = run_spectrum(cfg, ws, theta=float(theta))
        runs.append((float(theta), spec))
    avg = align.average_spectra(runs, dist)
    return avg, runs, dist, ws


def run_sfa_predict(cfg, times=None, major_axis="perp"):
    """Misalignment-law table for the configured pulse."""
    pulse = cfg.make_pulse()
    if times is None:
        # quarter-cycle sampling resolves the F(t) oscillation
        n = 4 * pulse.n_cycles
        times = np.linspace(0.0, pulse.duration, n + 1)
    fi = pls.field_integrals(pulse)
    idx = np.clip(np.round(np.asarray(times) / fi.dt).astype(int),
                  0, len(fi.t) - 1)
    times = fi.t[idx]
    pred = sfa.misalignment_prediction(pulse, times, major_axis, integrals=fi)
    return pred, pulse
