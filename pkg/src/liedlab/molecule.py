"""Symmetric linear ABA molecule in the single-active-electron picture.

Geometry: the two A atoms sit on the internuclear (y) axis at y = -R and
y = +R, the central B atom at the origin.  The active electron moves in a
soft-core multi-center potential

    v(r) = - sum_i q_i / sqrt(|r - R_i|^2 + eps_i^2)

which is invariant under all four in-plane C2v operations.  Valence structure
is modelled with 2p_z-type atomic orbitals (odd in z); the relevant a1
molecular orbital is a * SALC(A, A') + b * AO(B).

Default charges/softenings come from the calibration run in
``demos/02_calibrate_molecule.py``; see CALIBRATION notes there.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import grid as g
from . import symmetry as sym

ANGSTROM_TO_BOHR = 1.8897261

# calibrated so the z-odd a1 eigenstate of the default CO2-like molecule sits
# near -0.63 hartree (17.3 eV): E = -0.62952 at R = 5.669 bohr, insensitive to
# grid spacing between dy = 0.23 and dy = 0.59 (demos/02_calibrate_molecule.py)
DEFAULT_Q_A = 0.8
DEFAULT_Q_B = 1.6
DEFAULT_EPS_A = 1.15
DEFAULT_EPS_B = 1.15


@dataclass(frozen=True)
class MoleculeABA:
    """ABA geometry and soft-core parameters (atomic units)."""
    R: float                      # A-B bond length, bohr
    q_A: float = DEFAULT_Q_A
    q_B: float = DEFAULT_Q_B
    eps_A: float = DEFAULT_EPS_A
    eps_B: float = DEFAULT_EPS_B

    def __post_init__(self):
        if self.R <= 0:
            raise ValueError("bond length must be positive")
        if self.eps_A <= 0 or self.eps_B <= 0:
            raise ValueError("soft-core parameters must be positive")

    @property
    def centers(self):
        """[(y, z, q, eps)] for the three nuclei."""
        return [(-self.R, 0.0, self.q_A, self.eps_A),
                (+self.R, 0.0, self.q_A, self.eps_A),
                (0.0, 0.0, self.q_B, self.eps_B)]

    @classmethod
    def from_angstrom(cls, r_angstrom, **kw):
        return cls(R=r_angstrom * ANGSTROM_TO_BOHR, **kw)


@dataclass(frozen=True)
class AtomicOrbital:
    """2p_z-type orbital shape: gaussian z*exp(-r^2/(2 sigma^2)) or slater z*exp(-zeta r)."""
    kind: str = "gaussian"        # "gaussian" | "slater"
    sigma: float = 1.0            # gaussian width, bohr
    zeta: float = 1.0             # slater exponent, 1/bohr

    def build(self, grid, center=(0.0, 0.0)):
        """Sample the normalized orbital centered at `center` (bohr)."""
        y, z = grid.mesh()
        yy = y - center[0]
        zz = z - center[1]
        r_sq = yy ** 2 + zz ** 2
        if self.kind == "gaussian":
            values = zz * np.exp(-r_sq / (2.0 * self.sigma ** 2))
        elif self.kind == "slater":
            values = zz * np.exp(-self.zeta * np.sqrt(r_sq))
        else:
            raise ValueError(f"unknown orbital kind {self.kind!r}")
        psi = g.WaveFunction(grid, values.astype(np.complex128))
        return psi.normalized()


def soft_core_potential(mol, grid):
    """Sampled SAE potential; real (n_y, n_z) array."""
    y, z = grid.mesh()
    v = np.zeros((grid.n_y, grid.n_z))
    for (cy, cz, q, eps) in mol.centers:
        v -= q / np.sqrt((y - cy) ** 2 + (z - cz) ** 2 + eps ** 2)
    return v


@dataclass
class MolecularOrbital:
    """LCAO molecular orbital assembled from SALC + central AO.

    a, b weight the *normalized* SALC and central AO; a_prim, b_prim are the
    equivalent weights of the primitive one-center orbitals, i.e.
    psi = a_prim (T_{-R} chi + T_{+R} chi) + b_prim chi.
    """
    a: float
    b: float
    psi: g.WaveFunction
    irrep: str = "a1"
    ao: AtomicOrbital = field(default_factory=AtomicOrbital)
    a_prim: float = None
    b_prim: float = None


def _salc_pair(mol, grid, ao):
    """Normalized two-center a1 SALC of the A-atom orbitals."""
    chi = ao.build(grid)
    return sym.salc(chi, (-mol.R, 0.0), "a1").normalized()


def lcao_coefficients(mol, grid, ao=AtomicOrbital()):
    """(a, b) from the generalized eigenproblem H c = E S c in the basis
    {a1 SALC of the A orbitals, central B orbital}; lowest state returned.

    Coefficients refer to the *normalized* SALC and AO factors and are scaled
    so the assembled orbital has unit norm; sign fixed with a > 0.
    """
    v = soft_core_potential(mol, grid)
    basis = [_salc_pair(mol, grid, ao), ao.build(grid)]
    h_basis = [g.apply_hamiltonian(b, v) for b in basis]
    S = np.array([[g.inner_product(bi, bj) for bj in basis] for bi in basis]).real
    H = np.array([[g.inner_product(bi, hj) for hj in h_basis] for bi in basis]).real
    evals, evecs = scipy.linalg.eigh(H, S)
    c = evecs[:, 0]
    # eigh normalizes c^T S c = 1, which is exactly unit norm for the sum
    if c[0] < 0:
        c = -c
    return float(c[0]), float(c[1]), float(evals[0])


def build_homo_minus_1(mol, grid, a="auto", b="auto", ao=AtomicOrbital()):
    """Assemble the a1 valence orbital a * SALC_a1(A) + b * AO(B), normalized.

    With a = b = "auto" the coefficients come from :func:`lcao_coefficients`.
    """
    auto = (a == "auto") or (b == "auto")
    if auto:
        a, b, _ = lcao_coefficients(mol, grid, ao)
    if a == 0 and b == 0:
        raise ValueError("coefficients (a, b) must not both vanish")
    chi = ao.build(grid)
    raw_salc = sym.salc(chi, (-mol.R, 0.0), "a1")     # (T_-R + T_+R) chi / 2
    s_norm = raw_salc.norm()
    parts = (a / s_norm) * raw_salc.values + b * chi.values
    psi = g.WaveFunction(grid, parts)
    nu = psi.norm()
    psi = g.WaveFunction(grid, psi.values / nu)
    return MolecularOrbital(a=float(a), b=float(b), psi=psi, irrep="a1", ao=ao,
                            a_prim=float(a / (2.0 * s_norm * nu)),
                            b_prim=float(b / nu))


def _project_sector(psi, irrep, z_parity):
    out = psi
    if irrep is not None:
        out = sym.project(out, irrep)
    if z_parity is not None:
        flipped = sym.flip_axis(out.values, 1)
        out = g.WaveFunction(out.grid, 0.5 * (out.values + z_parity * flipped))
    return out


def relax_imaginary_time(potential, seed, irrep=None, z_parity=None,
                         dtau_schedule=(0.1, 0.02, 0.004), max_steps=4000,
                         tol_energy=1e-12, residual_target=1e-6,
                         krylov_dim=40):
    """Lowest eigenstate of H = p^2/2 + v within a symmetry sector.

    Split-operator imaginary-time iteration with the sector projection applied
    every step, followed by a small Krylov diagonalization to polish away the
    Trotter bias.  Returns (psi, energy, info dict).

    `potential` is a MoleculeABA (resolved on seed.grid) or a real array.
    `z_parity` of -1 keeps the z-odd (2p_z-like) sector.
    """
    grid = seed.grid
    v = soft_core_potential(potential, grid) if isinstance(potential, MoleculeABA) \
        else np.asarray(potential, dtype=float)
    psi = _project_sector(seed, irrep, z_parity)
    if psi.norm() < 1e-12:
        raise ValueError("seed has no component in the requested symmetry sector")
    psi = psi.normalized()

    import scipy.fft as _fft
    energies = []
    k_sq = grid.k_squared
    for dtau in dtau_schedule:
        exp_v_half = np.exp(-0.5 * dtau * v)
        exp_k = np.exp(-dtau * 0.5 * k_sq)
        prev_e = np.inf
        for _ in range(max_steps):
            w = psi.values * exp_v_half
            w = _fft.ifft2(_fft.fft2(w, workers=g.FFT_WORKERS) * exp_k,
                           workers=g.FFT_WORKERS)
            w *= exp_v_half
            psi = _project_sector(g.WaveFunction(grid, w), irrep, z_parity).normalized()
            e = g.total_energy(psi, v)
            energies.append(e)
            if abs(e - prev_e) < tol_energy * max(1.0, abs(e)):
                break
            prev_e = e

    # Lanczos polish: the imaginary-time state is close to the eigenvector but
    # carries an O(dtau^2) Trotter bias; restarted, fully reorthogonalized
    # Lanczos on the exact H (kept inside the symmetry sector) removes it.
    for _ in range(6):
        if g.hamiltonian_residual(psi, v) < residual_target:
            break
        basis = [psi]
        for _ in range(krylov_dim - 1):
            nxt = g.apply_hamiltonian(basis[-1], v)
            nxt = _project_sector(nxt, irrep, z_parity)
            for b in basis:
                nxt.values -= g.inner_product(b, nxt) * b.values
            for b in basis:  # second reorthogonalization pass
                nxt.values -= g.inner_product(b, nxt) * b.values
            n = nxt.norm()
            if n < 1e-12:
                break
            nxt.values /= n
            basis.append(nxt)
        if len(basis) == 1:
            break
        H = np.array([[g.inner_product(bi, g.apply_hamiltonian(bj, v))
                       for bj in basis] for bi in basis])
        evals, evecs = np.linalg.eigh(0.5 * (H + H.conj().T))
        c = evecs[:, 0]
        mix = np.zeros_like(psi.values)
        for ci, bi in zip(c, basis):
            mix += ci * bi.values
        psi = _project_sector(g.WaveFunction(grid, mix), irrep, z_parity).normalized()

    energy = g.total_energy(psi, v)
    residual = g.hamiltonian_residual(psi, v)
    info = {"energy": energy, "residual": residual, "energies": np.array(energies),
            "converged": residual < residual_target}
    return psi, energy, info


def relax_molecule(mol, grid, ao=AtomicOrbital(), **kw):
    """Relax the z-odd a1 valence state of an ABA molecule, seeded by the LCAO guess."""
    seed = build_homo_minus_1(mol, grid, ao=ao).psi
    return relax_imaginary_time(mol, seed, irrep="a1", z_parity=-1, **kw)
