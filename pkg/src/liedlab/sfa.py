"""Analytic strong-field channel: factorized propagator and misalignment laws.

For a polarization tilted by theta from the perpendicular, the field splits
into a major component (defining the symmetry group of the dressed molecule)
and a minor, symmetry-breaking one.  The propagator factorizes as
U(t,0) ~= U_major(t,0) * U_minor_I(t,0), and with the Coulomb force dropped
from the interaction-picture equations of motion the minor factor is the
closed-form product

    U_minor_I(t,0) = exp(-i beta^2 eta(t)) exp(-i beta F(t) u) exp(-i beta G(t) p_u)

where u is the minor-axis coordinate (y for a perpendicular-major split, z
for a parallel-major one), beta = sin(theta) resp. cos(theta), and F, G, eta
are the field areas from the pulse module.  The factor ordering above is the
literal operator product; reorderings differ only by a constant phase.

Consequences for the two-center momentum amplitude (perpendicular major):
the fringe factor shifts to cos((k_y + beta F(t)) R) and the atomic envelopes
are displaced by beta G(t) along the minor momentum axis,

    A(k) = 2 a cos((k_y + beta F) R) M_A(k - beta G e_m) + b M_B(k - beta G e_m)

with channel amplitudes M = <k| [e^{-i beta F(t) u} chi]_t >.  Channels can be
produced in two modes: "volkov" (major-field-only evolution, a one-shot
momentum-space map) or "tdse" (exact grid propagation under the major
Hamiltonian including the molecular potential).
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from . import grid as g
from . import pulse as pls
from . import tdse


def split_parameters(pulse, major_axis):
    """(beta, minor_axis, major_scale, major_unit) for a major/minor split.

    major_axis "perp": major field along z scaled by cos(theta), minor along y
    with beta = sin(theta).  major_axis "parallel": the reverse.
    """
    if major_axis == "perp":
        return np.sin(pulse.theta), "y", np.cos(pulse.theta), "z"
    if major_axis == "parallel":
        return np.cos(pulse.theta), "z", np.sin(pulse.theta), "y"
    raise ValueError("major_axis must be 'perp' or 'parallel'")


def _axis_coordinate(grid, axis):
    y, z = grid.mesh()
    return y if axis == "y" else z


def u_minor_interaction(psi, pulse, t, major_axis="perp", integrals=None):
    """Apply the closed-form minor-field interaction propagator at time t.

    Literal factor order: translation by beta*G along the minor axis first,
    then the minor-coordinate phase e^{-i beta F u}, then the global phase
    e^{-i beta^2 eta}.  Unitary; beta = 0 reduces to the identity.
    """
    beta, minor, _, _ = split_parameters(pulse, major_axis)
    if integrals is None:
        integrals = pls.field_integrals(pulse)
    F, G, eta = integrals.at(t)
    if beta == 0.0:
        return psi.copy()
    shift = (beta * G, 0.0) if minor == "y" else (0.0, beta * G)
    out = g.translate(psi, shift)
    u = _axis_coordinate(psi.grid, minor)
    out.values *= np.exp(-1j * beta * F * u)
    out.values *= np.exp(-1j * beta * beta * eta)
    return out


def decompose_a1_b2(ao_origin, pulse, t, integrals=None):
    """Split e^{+-i beta F y} chi(r +- beta G e_y) into a1 and b2 components.

    Returns (f_a1, f_b2) built from the displaced-orbital combinations
    pi_u = (T_{-bG} + T_{+bG}) chi / 2 (y-even) and
    pi_g = (T_{-bG} - T_{+bG}) chi / 2 (y-odd):

        f_a1 = cos(bF y) pi_u + i sin(bF y) pi_g
        f_b2 = cos(bF y) pi_g + i sin(bF y) pi_u

    so that f_a1 + f_b2 = e^{+i bF y} chi(r + bG e_y) and
    f_a1 - f_b2 = e^{-i bF y} chi(r - bG e_y), pointwise.
    """
    beta, minor, _, _ = split_parameters(pulse, "perp")
    if integrals is None:
        integrals = pls.field_integrals(pulse)
    F, G, _ = integrals.at(t)
    bG, bF = beta * G, beta * F
    chi_plus = g.translate(ao_origin, (-bG, 0.0))    # chi(r + bG e_y)
    chi_minus = g.translate(ao_origin, (+bG, 0.0))   # chi(r - bG e_y)
    pi_u = 0.5 * (chi_plus.values + chi_minus.values)
    pi_g = 0.5 * (chi_plus.values - chi_minus.values)
    y = ao_origin.grid.y[:, None]
    c, s = np.cos(bF * y), np.sin(bF * y)
    f_a1 = g.WaveFunction(ao_origin.grid, c * pi_u + 1j * s * pi_g)
    f_b2 = g.WaveFunction(ao_origin.grid, c * pi_g + 1j * s * pi_u)
    return f_a1, f_b2


def major_pulse(pulse, major_axis):
    """The major-component pulse: projected amplitude, polarization on axis."""
    beta, _, scale, unit = split_parameters(pulse, major_axis)
    theta = 0.0 if unit == "z" else 0.5 * np.pi
    return pls.LaserPulse(pulse.omega, pulse.E0 * abs(scale), pulse.n_cycles,
                          pulse.envelope, pulse.cep, theta)


def volkov_propagate(psi0, pulse, t, integrals=None):
    """Field-only (v_coul = 0) evolution from 0 to t, as a one-shot k-space map.

    For H = p^2/2 + r.E_vec(t') the exact propagator acts on the momentum
    representation as phi(k, t) = e^{-i Phi(k)} phi0(k + Fvec(t)) with
    Phi(k) = |k|^2 t / 2 + k . J1 + J2 / 2, J1 = int (Fvec(t) - Fvec(t')) dt',
    J2 = int |Fvec(t) - Fvec(t')|^2 dt'.  The pulse polarization supplies
    Fvec = (sin theta, cos theta) F.
    """
    if t == 0.0:
        return psi0.copy()
    if integrals is None:
        integrals = pls.field_integrals(pulse)
    i = integrals.index_of(t)
    ts, Fs = integrals.t[:i + 1], integrals.F[:i + 1]
    F_t = Fs[-1]
    dF = F_t - Fs
    j1 = simpson(dF, x=ts)
    j2 = simpson(dF * dF, x=ts)
    e_y, e_z = np.sin(pulse.theta), np.cos(pulse.theta)

    grid = psi0.grid
    y, z = grid.mesh()
    work = psi0.values * np.exp(-1j * F_t * (e_y * y + e_z * z))
    phi = g.to_momentum(g.WaveFunction(grid, work))
    ky, kz = grid.k_mesh()
    phase = 0.5 * t * grid.k_squared + (e_y * ky + e_z * kz) * j1 + 0.5 * j2
    phi.values *= np.exp(-1j * phase)
    return g.from_momentum(phi)


def channel_amplitudes(mol, grid, pulse, t, ao, major_axis="perp",
                       mode="volkov", cfg=None, integrals=None, dress=True):
    """Momentum amplitudes <k| [e^{-i beta F(t) u} chi]_t > per unique center.

    The bracket [f]_t places f at the channel center, evolves it from 0 to t
    under the *major* Hamiltonian, and translates it back; the A-atom channel
    uses the +R center, the B channel the origin.  In "volkov" mode the major
    evolution is field-only; in "tdse" mode it is the exact grid propagation
    including the molecular potential (cfg supplies dt and mask settings).

    Returns {"A": WaveFunction-in-k, "B": WaveFunction-in-k}.
    """
    beta, minor, _, _ = split_parameters(pulse, major_axis)
    if integrals is None:
        integrals = pls.field_integrals(pulse)
    F_t, _, _ = integrals.at(t)
    chi = ao.build(grid)
    if dress and beta != 0.0:
        u = _axis_coordinate(grid, minor)
        chi = g.WaveFunction(grid, chi.values * np.exp(-1j * beta * F_t * u))

    maj = major_pulse(pulse, major_axis)
    maj_integrals = pls.field_integrals(maj, dt=integrals.dt)

    def bracket(center):
        placed = g.translate(chi, center) if center != (0.0, 0.0) else chi
        if mode == "volkov":
            evolved = volkov_propagate(placed, maj, t, integrals=maj_integrals)
        elif mode == "tdse":
            run_cfg = cfg if cfg is not None else tdse.PropagationConfig()
            run_cfg = tdse.PropagationConfig(
                dt=run_cfg.dt, t_final=t, mask_width=run_cfg.mask_width,
                mask_power=run_cfg.mask_power)
            evolved = tdse.propagate(placed, mol, maj, run_cfg).psi
        else:
            raise ValueError("mode must be 'volkov' or 'tdse'")
        if center != (0.0, 0.0):
            evolved = g.translate(evolved, (-center[0], -center[1]))
        return g.to_momentum(evolved)

    return {"A": bracket((+mol.R, 0.0)), "B": bracket((0.0, 0.0))}


def misaligned_amplitude_perp_major(mol, pulse, t, atomic_amplitudes, a, b,
                                    integrals=None):
    """Assemble A(k) = 2a cos((k_y + bF) R) M_A(k - bG e_y) + b M_B(k - bG e_y).

    `atomic_amplitudes` is the {"A", "B"} dict from :func:`channel_amplitudes`.
    At beta = 0 this reduces to the perfect-alignment amplitude
    2a cos(k_y R) <k|chi_A(t)> + b <k|chi_B(t)>.
    """
    for name in ("A", "B"):
        if name not in atomic_amplitudes:
            raise ValueError(f"missing channel amplitude {name!r}")
    beta, minor, _, _ = split_parameters(pulse, "perp")
    if integrals is None:
        integrals = pls.field_integrals(pulse)
    F_t, G_t, _ = integrals.at(t)
    m_a, m_b = atomic_amplitudes["A"], atomic_amplitudes["B"]
    if beta != 0.0 and G_t != 0.0:
        delta = (beta * G_t, 0.0)
        m_a = g.shift_momentum(m_a, delta)
        m_b = g.shift_momentum(m_b, delta)
    grid = m_a.grid
    fringe = np.cos((grid.k_y + beta * F_t) * mol.R)[:, None]
    values = 2.0 * a * fringe * m_a.values + b * m_b.values
    return g.WaveFunction(grid, values, space="k")


def parallel_amplitude(mol, pulse, t, atomic_amplitudes, a, b):
    """Three-center coherent sum for a (near-)parallel major alignment,

        A(k) = a (e^{+i k_y R} M_{A-} + e^{-i k_y R} M_{A+}) + b M_B,

    from origin-referenced channel amplitudes {"A-", "A+", "B"}.  The
    geometric information enters only through the translation phases; no
    explicit cos(k_y R) coherence factor is carried.
    """
    for name in ("A-", "A+", "B"):
        if name not in atomic_amplitudes:
            raise ValueError(f"missing channel amplitude {name!r}")
    m_m = atomic_amplitudes["A-"]
    m_p = atomic_amplitudes["A+"]
    m_b = atomic_amplitudes["B"]
    grid = m_b.grid
    phase = np.exp(1j * grid.k_y * mol.R)[:, None]
    values = a * (phase * m_m.values + np.conj(phase) * m_p.values) + b * m_b.values
    return g.WaveFunction(grid, values, space="k")


def parallel_channel_amplitudes(mol, grid, pulse, t, ao, mode="volkov",
                                cfg=None, integrals=None, dress=True):
    """Origin-referenced channel amplitudes for the parallel-major case.

    Each of the three centers is propagated independently under the parallel
    major Hamiltonian; the minor (perpendicular) dressing e^{-i beta F z}
    commutes with the y translations and is applied to the origin orbital.
    """
    beta, minor, _, _ = split_parameters(pulse, "parallel")
    if integrals is None:
        integrals = pls.field_integrals(pulse)
    F_t, _, _ = integrals.at(t)
    chi = ao.build(grid)
    if dress and beta != 0.0:
        u = _axis_coordinate(grid, minor)
        chi = g.WaveFunction(grid, chi.values * np.exp(-1j * beta * F_t * u))
    maj = major_pulse(pulse, "parallel")
    maj_integrals = pls.field_integrals(maj, dt=integrals.dt)

    out = {}
    for name in tdse.CHANNELS:
        center = tdse.channel_center(name, mol)
        placed = g.translate(chi, center) if center != (0.0, 0.0) else chi
        if mode == "volkov":
            evolved = volkov_propagate(placed, maj, t, integrals=maj_integrals)
        else:
            run_cfg = cfg if cfg is not None else tdse.PropagationConfig()
            run_cfg = tdse.PropagationConfig(
                dt=run_cfg.dt, t_final=t, mask_width=run_cfg.mask_width,
                mask_power=run_cfg.mask_power)
            evolved = tdse.propagate(placed, mol, maj, run_cfg).psi
        if center != (0.0, 0.0):
            evolved = g.translate(evolved, (-center[0], -center[1]))
        out[name] = g.to_momentum(evolved)
    return out


@dataclass
class MisalignmentPrediction:
    """Closed-form misalignment observables along the pulse."""
    times: np.ndarray
    beta: float
    F: np.ndarray
    G: np.ndarray
    eta: np.ndarray

    @property
    def fringe_shift(self):
        """k_y offset of the fringe pattern, beta * F(t)."""
        return self.beta * self.F

    @property
    def displacement(self):
        """Minor-axis momentum displacement of the envelopes, beta * G(t)."""
        return self.beta * self.G

    @property
    def global_phase(self):
        """Unobservable overall phase beta^2 * eta(t)."""
        return self.beta ** 2 * self.eta


def misalignment_prediction(pulse, times, major_axis="perp", integrals=None):
    """Evaluate the misalignment laws at the given sample times."""
    beta, _, _, _ = split_parameters(pulse, major_axis)
    if integrals is None:
        integrals = pls.field_integrals(pulse)
    rows = [integrals.at(t) for t in times]
    F = np.array([r[0] for r in rows])
    G = np.array([r[1] for r in rows])
    eta = np.array([r[2] for r in rows])
    return MisalignmentPrediction(times=np.asarray(times, dtype=float),
                                  beta=float(beta), F=F, G=G, eta=eta)
