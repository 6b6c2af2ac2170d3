"""Uniform 2D periodic grid, complex fields and the spectral operations on them.

Conventions (used by every other module):

* The box spans ``y in [-L_y, L_y)``, ``z in [-L_z, L_z)`` with ``n_y x n_z``
  points (powers of two).  Coordinates are built as ``dy * (i - n/2)`` so the
  grid is exactly origin-centered and exactly mirror-symmetric in floating
  point: ``y[(n - i) % n] == -y[i]``.
* Momentum grids follow standard DFT ordering, ``k = 2*pi*fftfreq(n, d)``,
  spanning ``[-pi/d, pi/d)``.
* The momentum representation is the unitary 2D Fourier transform
  ``phi(k) = (2*pi)^-1 * integral exp(-i k.r) psi(r) d^2r`` discretised with
  ``dy*dz`` weights, so Parseval holds: ``norm_r == norm_k``.
* The translation operator ``T_rho = exp(-i rho.p)`` moves the support of a
  function *to* ``+rho``: ``(T_rho psi)(r) = psi(r - rho)``.  It is applied in
  momentum space (exact to spectral accuracy).

All lengths are in bohr, momenta in 1/bohr, atomic units throughout.
"""

import numpy as np
import scipy.fft as _fft

# pocketfft thread count; 0/None would disable the worker pool
FFT_WORKERS = 2


class GridMismatchError(ValueError):
    """Two fields that must share a grid do not."""


class Grid2D:
    """Uniform Cartesian (y, z) real-space grid with its conjugate momentum grid.

    Parameters
    ----------
    n_y, n_z : int
        Point counts, powers of two.
    L_y, L_z : float
        Box half-lengths in bohr; the box is [-L, L) in each direction.
    """

    def __init__(self, n_y, n_z, L_y, L_z):
        for n in (n_y, n_z):
            if n < 2 or (n & (n - 1)) != 0:
                raise ValueError(f"grid counts must be powers of two, got {n}")
        if L_y <= 0 or L_z <= 0:
            raise ValueError("box half-lengths must be positive")
        self.n_y = int(n_y)
        self.n_z = int(n_z)
        self.L_y = float(L_y)
        self.L_z = float(L_z)
        self.dy = 2.0 * L_y / n_y
        self.dz = 2.0 * L_z / n_z
        self.dk_y = 2.0 * np.pi / (self.n_y * self.dy)
        self.dk_z = 2.0 * np.pi / (self.n_z * self.dz)
        # exact mirror symmetry: y[(n-i) % n] == -y[i]
        self.y = self.dy * (np.arange(self.n_y) - self.n_y // 2)
        self.z = self.dz * (np.arange(self.n_z) - self.n_z // 2)
        self.k_y = 2.0 * np.pi * _fft.fftfreq(self.n_y, d=self.dy)
        self.k_z = 2.0 * np.pi * _fft.fftfreq(self.n_z, d=self.dz)
        # phase factors exp(-i k y0) absorbing the off-origin first sample
        self._fwd_phase_y = np.exp(-1j * self.k_y * self.y[0])
        self._fwd_phase_z = np.exp(-1j * self.k_z * self.z[0])
        self._k_sq = self.k_y[:, None] ** 2 + self.k_z[None, :] ** 2

    @property
    def cell(self):
        """Area element dy*dz."""
        return self.dy * self.dz

    @property
    def k_cell(self):
        return self.dk_y * self.dk_z

    def mesh(self):
        """Return broadcastable coordinate planes (Y, Z)."""
        return self.y[:, None], self.z[None, :]

    def k_mesh(self):
        return self.k_y[:, None], self.k_z[None, :]

    @property
    def k_squared(self):
        """|k|^2 plane in DFT ordering."""
        return self._k_sq

    def __eq__(self, other):
        if not isinstance(other, Grid2D):
            return NotImplemented
        return (self.n_y, self.n_z, self.L_y, self.L_z) == (
            other.n_y, other.n_z, other.L_y, other.L_z)

    def __hash__(self):
        return hash((self.n_y, self.n_z, self.L_y, self.L_z))

    def __repr__(self):
        return (f"Grid2D(n_y={self.n_y}, n_z={self.n_z}, "
                f"L_y={self.L_y}, L_z={self.L_z})")


class WaveFunction:
    """Complex field sampled on a Grid2D, in position ('r') or momentum ('k') space."""

    __slots__ = ("grid", "values", "space")

    def __init__(self, grid, values, space="r"):
        if space not in ("r", "k"):
            raise ValueError("space must be 'r' or 'k'")
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (grid.n_y, grid.n_z):
            raise ValueError(f"field shape {values.shape} does not match grid "
                             f"({grid.n_y}, {grid.n_z})")
        self.grid = grid
        self.values = values
        self.space = space

    def copy(self):
        return WaveFunction(self.grid, self.values.copy(), self.space)

    @property
    def _weight(self):
        return self.grid.cell if self.space == "r" else self.grid.k_cell

    def norm_sq(self):
        return float(np.vdot(self.values, self.values).real * self._weight)

    def norm(self):
        return float(np.sqrt(self.norm_sq()))

    def normalized(self):
        n = self.norm()
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize a zero field")
        return WaveFunction(self.grid, self.values / n, self.space)

    def __repr__(self):
        return f"WaveFunction({self.grid!r}, space={self.space!r}, norm={self.norm():.6g})"


def _check_same(a, b):
    if a.grid != b.grid or a.space != b.space:
        raise GridMismatchError("operands live on different grids or spaces")


def inner_product(a, b):
    """Discrete <a|b> = sum conj(a)*b * cell, in whichever space both live."""
    _check_same(a, b)
    return complex(np.vdot(a.values, b.values) * a._weight)


def to_momentum(psi):
    """Unitary transform to momentum space, <k|psi> = (2pi)^-1 int e^{-ik.r} psi."""
    if psi.space != "r":
        raise ValueError("to_momentum expects a position-space field")
    g = psi.grid
    raw = _fft.fft2(psi.values, workers=FFT_WORKERS)
    raw *= g.cell / (2.0 * np.pi)
    raw *= g._fwd_phase_y[:, None]
    raw *= g._fwd_phase_z[None, :]
    return WaveFunction(g, raw, space="k")


def from_momentum(phi):
    """Inverse of :func:`to_momentum`."""
    if phi.space != "k":
        raise ValueError("from_momentum expects a momentum-space field")
    g = phi.grid
    work = phi.values * np.conj(g._fwd_phase_y)[:, None]
    work *= np.conj(g._fwd_phase_z)[None, :]
    work *= (2.0 * np.pi) / g.cell
    return WaveFunction(g, _fft.ifft2(work, workers=FFT_WORKERS), space="r")


def _translation_phase(k, n, rho):
    """exp(-i k rho) with the symmetric cosine convention at the Nyquist bin.

    The unpaired Nyquist mode is treated as an equal mix of +-pi/d waves, so
    translation commutes *exactly* with the mirror permutation k -> -k; for
    band-limited fields the convention is invisible.
    """
    phase = np.exp(-1j * rho * k)
    phase[n // 2] = np.cos(rho * k[n // 2])
    return phase


def translate(psi, rho):
    """Apply T_rho = exp(-i rho.p): support of psi moves by +rho = (rho_y, rho_z).

    Periodic wrap-around is inherent to the spectral implementation; callers
    keep |rho| small against the box so boundary leakage is negligible.
    """
    if psi.space != "r":
        raise ValueError("translate expects a position-space field")
    g = psi.grid
    rho_y, rho_z = float(rho[0]), float(rho[1])
    work = _fft.fft2(psi.values, workers=FFT_WORKERS)
    if rho_y != 0.0:
        work *= _translation_phase(g.k_y, g.n_y, rho_y)[:, None]
    if rho_z != 0.0:
        work *= _translation_phase(g.k_z, g.n_z, rho_z)[None, :]
    return WaveFunction(g, _fft.ifft2(work, workers=FFT_WORKERS), space="r")


def shift_momentum(phi, delta):
    """Displace a momentum-space field by +delta: out(k) = phi(k - delta).

    Implemented through the position representation (multiply by e^{i delta.r}),
    exact to spectral accuracy.
    """
    if phi.space != "k":
        raise ValueError("shift_momentum expects a momentum-space field")
    psi = from_momentum(phi)
    y, z = psi.grid.mesh()
    d_y, d_z = float(delta[0]), float(delta[1])
    psi.values *= np.exp(1j * (d_y * y + d_z * z))
    return to_momentum(psi)


def apply_mask(psi, mask):
    """Pointwise product with a real mask with values in [0, 1]."""
    mask = np.asarray(mask)
    if mask.shape != psi.values.shape:
        raise GridMismatchError("mask shape does not match field")
    return WaveFunction(psi.grid, psi.values * mask, psi.space)


def cos_edge_mask(grid, width, power=0.125):
    """Absorbing boundary mask: 1 in the interior, cos^power roll-off of the
    given width (bohr) at each box edge, 0 at the boundary."""

    def profile(x, half, w):
        m = np.ones_like(x)
        depth = np.abs(x) - (half - w)
        band = depth > 0
        m[band] = np.cos(0.5 * np.pi * np.minimum(depth[band], w) / w) ** power
        return m

    my = profile(grid.y, grid.L_y, width)
    mz = profile(grid.z, grid.L_z, width)
    return my[:, None] * mz[None, :]


def radial_exterior_mask(grid, r0, smooth_width):
    """Smooth mask that removes the interior |r| < r0: 0 inside, a half-cosine
    ramp of the given width, 1 beyond r0 + smooth_width."""
    if r0 >= min(grid.L_y, grid.L_z):
        raise ValueError("r0 must be smaller than the box")
    y, z = grid.mesh()
    r = np.hypot(y, z)
    m = np.ones((grid.n_y, grid.n_z))
    m[r <= r0] = 0.0
    ramp = (r > r0) & (r < r0 + smooth_width)
    m[ramp] = 0.5 * (1.0 - np.cos(np.pi * (r[ramp] - r0) / smooth_width))
    return m


def apply_kinetic(psi):
    """Apply p^2/2 spectrally."""
    if psi.space != "r":
        raise ValueError("apply_kinetic expects a position-space field")
    g = psi.grid
    work = _fft.fft2(psi.values, workers=FFT_WORKERS)
    work *= 0.5 * g.k_squared
    return WaveFunction(g, _fft.ifft2(work, workers=FFT_WORKERS), space="r")


def apply_hamiltonian(psi, potential):
    """Apply H = p^2/2 + v(r) with a real potential array."""
    out = apply_kinetic(psi)
    out.values += potential * psi.values
    return out


def total_energy(psi, potential):
    """Rayleigh quotient <psi|H|psi>/<psi|psi>."""
    h_psi = apply_hamiltonian(psi, potential)
    return (inner_product(psi, h_psi) / psi.norm_sq()).real


def hamiltonian_residual(psi, potential):
    """|| (H - <H>) psi || for a normalized psi; the eigenstate defect."""
    h_psi = apply_hamiltonian(psi, potential)
    e = (inner_product(psi, h_psi) / psi.norm_sq()).real
    h_psi.values -= e * psi.values
    return h_psi.norm() / psi.norm()
