"""Length-gauge split-operator propagation on a 2D spectral grid.

One step of size dt applies the second-order Strang factorization

    exp(-i V(t_mid) dt/2) * exp(-i T dt) * exp(-i V(t_mid) dt/2)

with V(t) = v_coul(r) + y E_y(t) + z E_z(t) sampled at the step midpoint and
T = p^2/2 applied in momentum space.  The laser part of V is separable, so its
phase factor is an outer product of two 1D phase vectors; the static part and
the absorbing mask are precomputed 2D arrays.  Between observable records the
trailing and leading potential half-steps of consecutive steps are fused,
which is algebraically identical and saves one array pass per step.

The absorbing mask only prevents wrap-around; spectra are extracted before
outgoing flux reaches it (see the spectrum module).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft

from . import grid as g
from . import symmetry as sym
from .molecule import MoleculeABA, soft_core_potential


class NumericalFailure(RuntimeError):
    """The propagation produced non-finite values."""


@dataclass(frozen=True)
class PropagationConfig:
    dt: float = 0.05                 # target step, a.u.; adjusted to divide t_final
    t_final: float = None            # None -> pulse duration
    mask_width: float = None         # bohr; None disables absorption
    mask_power: float = 0.125
    record_stride: int = 0           # record norm/irrep weights every this many steps
    snapshot_times: tuple = ()       # a.u.; full-field copies at nearest step ends
    gauge: str = "length"

    def __post_init__(self):
        if self.gauge != "length":
            raise ValueError("only the length gauge is implemented")
        if self.dt <= 0:
            raise ValueError("dt must be positive")


@dataclass
class PropagationResult:
    psi: g.WaveFunction
    t_final: float
    dt: float
    record_times: np.ndarray
    norms: np.ndarray
    weights: dict                    # irrep -> array aligned with record_times
    snapshots: list = field(default_factory=list)   # [(t, WaveFunction)]

    def weight_series(self, irrep):
        return self.weights[irrep]


def _resolve_potential(potential, grid):
    if potential is None:
        return np.zeros((grid.n_y, grid.n_z))
    if isinstance(potential, MoleculeABA):
        return soft_core_potential(potential, grid)
    v = np.asarray(potential, dtype=float)
    if v.shape != (grid.n_y, grid.n_z):
        raise ValueError("potential shape does not match grid")
    return v


def _dealias(values, grid):
    work = _fft.fft2(values, workers=g.FFT_WORKERS)
    work[grid.n_y // 2, :] = 0.0
    work[:, grid.n_z // 2] = 0.0
    return _fft.ifft2(work, workers=g.FFT_WORKERS, overwrite_x=True)


def _observe(grid, values, cell):
    wf = g.WaveFunction(grid, values)
    n_sq = wf.norm_sq()
    if not np.isfinite(n_sq):
        raise NumericalFailure("wavefunction norm is not finite")
    ws = sym.irrep_weights(wf) if n_sq > 0 else {ir: 0.0 for ir in sym.IRREPS}
    return np.sqrt(n_sq), ws


def propagate(psi0, potential, pulse, cfg):
    """Propagate psi0 under H(t) = p^2/2 + v + r.E(t) from t=0 to cfg.t_final.

    `potential` may be a MoleculeABA, a real array on psi0's grid, or None
    (free/Volkov propagation).  Returns a PropagationResult; psi0 is untouched.
    """
    grid = psi0.grid
    v = _resolve_potential(potential, grid)
    t_final = pulse.duration if cfg.t_final is None else float(cfg.t_final)
    n_steps = max(1, int(round(t_final / cfg.dt)))
    dt = t_final / n_steps

    v_abs_max = float(np.max(np.abs(v)))
    if dt * v_abs_max > 0.5:
        import warnings
        warnings.warn(f"dt*max|V| = {dt * v_abs_max:.2f} exceeds the 0.5 "
                      "stability guideline", stacklevel=2)

    sin_t, cos_t = np.sin(pulse.theta), np.cos(pulse.theta)
    t_mid = (np.arange(n_steps) + 0.5) * dt
    e_mid = np.asarray(pulse.field_scalar(t_mid), dtype=float)

    exp_v_half = np.exp(-0.5j * dt * v)
    exp_v_full = exp_v_half * exp_v_half
    exp_k = np.exp(-0.5j * dt * grid.k_squared)
    # project out the unpaired Nyquist modes (they have no mirror partner, so
    # keeping them breaks exact translation/symmetry identities); for smooth
    # states the removed weight is far below every tolerance used here
    exp_k[grid.n_y // 2, :] = 0.0
    exp_k[:, grid.n_z // 2] = 0.0
    mask = None
    if cfg.mask_width is not None:
        mask = g.cos_edge_mask(grid, cfg.mask_width, cfg.mask_power)
        exp_v_full_m = exp_v_full * mask
    else:
        exp_v_full_m = exp_v_full

    y, z = grid.y, grid.z

    def field_phases(coeff):
        # separable laser phase exp(-i coeff (y sin + z cos))
        return (np.exp(-1j * coeff * sin_t * y)[:, None],
                np.exp(-1j * coeff * cos_t * z)[None, :])

    record_steps = set()
    if cfg.record_stride:
        record_steps.update(range(cfg.record_stride, n_steps, cfg.record_stride))
    snap_steps = {}
    for ts in cfg.snapshot_times:
        idx = min(n_steps, max(0, int(round(ts / dt))))
        snap_steps.setdefault(idx, ts)

    psi = psi0.values.astype(np.complex128, copy=True)
    record_times, norms = [], []
    weights = {ir: [] for ir in sym.IRREPS}
    snapshots = []

    def record(step):
        n, ws = _observe(grid, psi, grid.cell)
        record_times.append(step * dt)
        norms.append(n)
        for ir in sym.IRREPS:
            weights[ir].append(ws[ir])

    record(0)
    if 0 in snap_steps:
        snapshots.append((0.0, g.WaveFunction(grid, psi.copy())))

    # leading half-step of step 0
    py, pz = field_phases(0.5 * dt * e_mid[0])
    psi *= exp_v_half
    psi *= py
    psi *= pz

    for n in range(n_steps):
        psi = _fft.fft2(psi, workers=g.FFT_WORKERS, overwrite_x=True)
        psi *= exp_k
        psi = _fft.ifft2(psi, workers=g.FFT_WORKERS, overwrite_x=True)
        last = n == n_steps - 1
        at_boundary = last or (n + 1) in record_steps or (n + 1) in snap_steps
        if at_boundary:
            # complete step n exactly, observe, then open step n+1
            py, pz = field_phases(0.5 * dt * e_mid[n])
            psi *= exp_v_half
            psi *= py
            psi *= pz
            if mask is not None:
                psi *= mask
            if (n + 1) in record_steps or last:
                record(n + 1)
            if (n + 1) in snap_steps:
                snapshots.append(((n + 1) * dt, g.WaveFunction(grid, psi.copy())))
            if not last:
                py, pz = field_phases(0.5 * dt * e_mid[n + 1])
                psi *= exp_v_half
                psi *= py
                psi *= pz
        else:
            # fused trailing + leading half-steps (identical algebra)
            py, pz = field_phases(0.5 * dt * (e_mid[n] + e_mid[n + 1]))
            psi *= exp_v_full_m
            psi *= py
            psi *= pz

    if not np.all(np.isfinite(psi[:: max(1, grid.n_y // 8) ])):
        raise NumericalFailure("propagation produced non-finite values")

    # states handed out are exactly Nyquist-free (see exp_k projection above);
    # the last potential half-step deposits a fresh sliver, removed here
    psi = _dealias(psi, grid)
    snapshots = [(t, g.WaveFunction(grid, _dealias(s.values, grid)))
                 for t, s in snapshots]

    return PropagationResult(
        psi=g.WaveFunction(grid, psi), t_final=t_final, dt=dt,
        record_times=np.asarray(record_times), norms=np.asarray(norms),
        weights={ir: np.asarray(weights[ir]) for ir in sym.IRREPS},
        snapshots=snapshots)


#: channel name -> center sign convention for an ABA molecule
CHANNELS = ("A-", "A+", "B")


def channel_center(name, mol):
    return {"A-": (-mol.R, 0.0), "A+": (+mol.R, 0.0), "B": (0.0, 0.0)}[name]


def propagate_channels(mol, pulse, cfg, grid, ao, initial_origin_fields=None):
    """Propagate each atomic-orbital channel independently under the full H.

    Each channel places the origin-referenced AO at its center, propagates it,
    and translates it back, i.e. chi(t) = T_{-c} U(t,0) T_{+c} chi.  Returns
    {name: PropagationResult} with result.psi already origin-referenced.

    `initial_origin_fields` optionally overrides the origin AO per channel
    (used by the analytic-channel machinery to pre-dress the orbital).
    """
    out = {}
    for name in CHANNELS:
        center = channel_center(name, mol)
        chi = (initial_origin_fields[name] if initial_origin_fields is not None
               else ao.build(grid))
        res = propagate(g.translate(chi, center), mol, pulse, cfg)
        res.psi = g.translate(res.psi, (-center[0], -center[1]))
        res.snapshots = [(t, g.translate(s, (-center[0], -center[1])))
                         for t, s in res.snapshots]
        out[name] = res
    return out


def reconstruct_from_channels(channels, a, b, mol):
    """Assemble a * (T_{-R} chi_{A-} + T_{+R} chi_{A+}) + b * chi_B from the
    origin-referenced channel fields; by linearity this equals direct
    propagation of the molecular orbital."""
    psi_m = g.translate(channels["A-"].psi, (-mol.R, 0.0))
    psi_p = g.translate(channels["A+"].psi, (+mol.R, 0.0))
    values = a * (psi_m.values + psi_p.values) + b * channels["B"].psi.values
    return g.WaveFunction(psi_m.grid, values)


def symmetry_trace(snapshots):
    """Irrep-weight time series {irrep: array} plus times, from (t, psi) pairs."""
    times = np.array([t for t, _ in snapshots])
    series = {ir: np.empty(len(snapshots)) for ir in sym.IRREPS}
    for i, (_, psi) in enumerate(snapshots):
        ws = sym.irrep_weights(psi)
        for ir in sym.IRREPS:
            series[ir][i] = ws[ir]
    return times, series
