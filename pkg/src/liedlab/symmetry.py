"""C2v group machinery restricted to the 2D (y, z) plane.

The molecule+field system of interest keeps the four C2v elements
{E, C2(z), sigma_xz, sigma_yz}.  Reduced to functions of (y, z) the elements
act through 2x2 orthogonal matrices: E and sigma_yz become the identity, while
C2 and sigma_xz both map y -> -y.  The abstract four-element bookkeeping is
kept so that characters and projectors follow the conventional character
table; sums over the group therefore contain pairs of identical in-plane
permutations.

Grids must be origin-centered with even counts so that every symmetry action
is an exact index permutation (no interpolation).
"""

from dataclasses import dataclass

import numpy as np

from .grid import WaveFunction, translate


@dataclass(frozen=True)
class SymmetryOp:
    """One C2v element with its in-plane 2x2 action on (y, z)."""
    label: str
    matrix: tuple  # ((myy, myz), (mzy, mzz)), entries in {-1, 0, 1}

    def mat(self):
        return np.array(self.matrix, dtype=float)

    def inverse_map(self, vec):
        """S^-1 applied to a 2-vector (all C2v elements are involutions)."""
        m = self.mat()
        return tuple(np.linalg.solve(m, np.asarray(vec, dtype=float)))


E = SymmetryOp("E", ((1, 0), (0, 1)))
C2 = SymmetryOp("C2", ((-1, 0), (0, 1)))
SIGMA_XZ = SymmetryOp("sigma_xz", ((-1, 0), (0, 1)))
SIGMA_YZ = SymmetryOp("sigma_yz", ((1, 0), (0, 1)))

C2V_OPS = (E, C2, SIGMA_XZ, SIGMA_YZ)
GROUP_ORDER = 4

# Conventional C2v character table, sigma_v = xz plane, sigma_v' = yz plane.
CHARACTERS = {
    "a1": {"E": 1, "C2": 1, "sigma_xz": 1, "sigma_yz": 1},
    "a2": {"E": 1, "C2": 1, "sigma_xz": -1, "sigma_yz": -1},
    "b1": {"E": 1, "C2": -1, "sigma_xz": 1, "sigma_yz": -1},
    "b2": {"E": 1, "C2": -1, "sigma_xz": -1, "sigma_yz": 1},
}
IRREPS = ("a1", "a2", "b1", "b2")


def character(irrep, op):
    return CHARACTERS[irrep][op.label]


def flip_axis(values, axis):
    """Index map i -> (n - i) mod n: the exact permutation realizing x -> -x
    on an origin-centered periodic grid."""
    return np.roll(np.flip(values, axis=axis), 1, axis=axis)


def apply_symmetry(psi, op):
    """Apply S f(r) := f(S^-1 r) as an exact index permutation."""
    if psi.space != "r":
        raise ValueError("apply_symmetry expects a position-space field")
    if psi.grid.n_y % 2 or psi.grid.n_z % 2:
        raise ValueError("symmetry actions need even, origin-centered grids")
    m = op.mat()
    out = psi.values
    if m[0, 0] == -1:
        out = flip_axis(out, 0)
    if m[1, 1] == -1:
        out = flip_axis(out, 1)
    if out is psi.values:
        out = out.copy()
    return WaveFunction(psi.grid, out, "r")


def project(psi, irrep):
    """Projection P^Gamma = (1/h) sum_j chi_Gamma(S_j) S_j for the 1D irreps."""
    acc = np.zeros_like(psi.values)
    for op in C2V_OPS:
        acc += character(irrep, op) * apply_symmetry(psi, op).values
    return WaveFunction(psi.grid, acc / GROUP_ORDER, "r")


def salc(ao, center, irrep):
    """Symmetry-adapted combination: translate an origin AO to `center`, project."""
    return project(translate(ao, center), irrep)


def irrep_weights(psi):
    """Weights w_Gamma = ||P^Gamma psi||^2 / ||psi||^2 over the four irreps."""
    total = psi.norm_sq()
    if total == 0.0:
        raise ZeroDivisionError("irrep weights of a zero field are undefined")
    return {irrep: project(psi, irrep).norm_sq() / total for irrep in IRREPS}
