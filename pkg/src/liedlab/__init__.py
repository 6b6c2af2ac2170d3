"""liedlab: laser-induced electron diffraction laboratory for ABA molecules.

A 2D spectral toolbox: symmetry-adapted molecular orbitals, split-operator
strong-field propagation, an analytic field-only channel, photoelectron
momentum spectra, LIED fringe inversion, and alignment-defect ensembles.
Atomic units throughout; lengths in bohr.
"""

from .grid import (Grid2D, WaveFunction, inner_product, translate,
                   to_momentum, from_momentum, shift_momentum, apply_mask,
                   cos_edge_mask, radial_exterior_mask)
from .symmetry import (C2V_OPS, IRREPS, apply_symmetry, project, salc,
                       irrep_weights)
from .molecule import (MoleculeABA, AtomicOrbital, MolecularOrbital,
                       soft_core_potential, build_homo_minus_1,
                       lcao_coefficients, relax_imaginary_time, relax_molecule,
                       ANGSTROM_TO_BOHR)
from .pulse import LaserPulse, FieldIntegrals, field_integrals
from .tdse import (PropagationConfig, PropagationResult, propagate,
                   propagate_channels, reconstruct_from_channels,
                   symmetry_trace, NumericalFailure)
from .sfa import (u_minor_interaction, decompose_a1_b2, channel_amplitudes,
                  misaligned_amplitude_perp_major, parallel_amplitude,
                  misalignment_prediction, MisalignmentPrediction,
                  volkov_propagate)
from .spectrum import (MomentumSpectrum, LiedTrace, extract_momentum_spectrum,
                       extract_momentum_amplitude, spectrum_from_amplitude,
                       lied_trace, fringe_analysis, fringe_contrast,
                       FringeReport)
from .alignment import (AlignmentDistribution, n_from_fwhm, fwhm_from_n,
                        average_spectra, theta_bar_scan,
                        classify_kz_morphology)

__version__ = "0.1.0"
