import numpy as np
import pytest

import liedlab as ll
from liedlab import symmetry as sym
from liedlab.molecule import AtomicOrbital

from conftest import band_limited_random


def make_grid(n=128, L=20.0):
    return ll.Grid2D(n, n, L, L)


def random_field(grid, seed):
    return band_limited_random(grid, seed)


class TestGroupStructure:
    def test_matrices_orthogonal_and_involutive(self):
        for op in sym.C2V_OPS:
            m = op.mat()
            assert np.allclose(m @ m.T, np.eye(2))
            assert np.allclose(m @ m, np.eye(2))

    def test_character_orthogonality(self):
        for g1 in sym.IRREPS:
            for g2 in sym.IRREPS:
                s = sum(sym.CHARACTERS[g1][op.label] * sym.CHARACTERS[g2][op.label]
                        for op in sym.C2V_OPS)
                assert s == (4 if g1 == g2 else 0)


class TestApplySymmetry:
    def test_identity(self):
        psi = random_field(make_grid(), 0)
        out = sym.apply_symmetry(psi, sym.E)
        assert np.array_equal(out.values, psi.values)

    def test_c2_moves_orbital_between_centers(self):
        grid = make_grid()
        ao = AtomicOrbital()
        at_minus = ll.translate(ao.build(grid), (-5.0, 0.0))
        at_plus = ll.translate(ao.build(grid), (+5.0, 0.0))
        moved = sym.apply_symmetry(at_minus, sym.C2)
        assert np.max(np.abs(moved.values - at_plus.values)) < 1e-12

    def test_involution_exact(self):
        psi = random_field(make_grid(), 1)
        twice = sym.apply_symmetry(sym.apply_symmetry(psi, sym.C2), sym.C2)
        assert np.array_equal(twice.values, psi.values)

    def test_sigma_yz_is_in_plane_identity(self):
        psi = random_field(make_grid(64), 2)
        out = sym.apply_symmetry(psi, sym.SIGMA_YZ)
        assert np.array_equal(out.values, psi.values)


class TestProjection:
    def test_idempotent_on_pure_field(self):
        grid = make_grid()
        psi = random_field(grid, 3)
        a1 = sym.project(psi, "a1")
        again = sym.project(a1, "a1")
        assert np.max(np.abs(again.values - a1.values)) < 1e-14

    def test_cross_projection_vanishes(self):
        psi = random_field(make_grid(), 4)
        a1 = sym.project(psi, "a1")
        cross = sym.project(a1, "b2")
        assert np.max(np.abs(cross.values)) < 1e-14

    def test_projection_of_translated_orbital_is_two_center_sum(self):
        grid = make_grid()
        ao = AtomicOrbital().build(grid)
        proj = sym.project(ll.translate(ao, (-5.0, 0.0)), "a1")
        two_center = 0.5 * (ll.translate(ao, (-5.0, 0.0)).values
                            + ll.translate(ao, (+5.0, 0.0)).values)
        assert np.max(np.abs(proj.values - two_center)) < 1e-12

    def test_resolution_of_identity(self):
        psi = random_field(make_grid(), 5)
        acc = sum(sym.project(psi, irrep).values for irrep in sym.IRREPS)
        assert np.max(np.abs(acc - psi.values)) < 1e-12

    def test_transforms_in_irrep(self):
        psi = random_field(make_grid(), 6)
        for irrep in ("a1", "b2"):
            proj = sym.project(psi, irrep)
            for op in sym.C2V_OPS:
                acted = sym.apply_symmetry(proj, op)
                expected = sym.character(irrep, op) * proj.values
                assert np.max(np.abs(acted.values - expected)) < 1e-12


class TestSalc:
    def test_a1_two_center(self):
        grid = make_grid()
        ao = AtomicOrbital().build(grid)
        s = sym.salc(ao, (-5.0, 0.0), "a1")
        ref = 0.5 * (ll.translate(ao, (-5.0, 0.0)).values
                     + ll.translate(ao, (5.0, 0.0)).values)
        assert np.max(np.abs(s.values - ref)) < 1e-12

    def test_central_atom_is_own_orbit(self):
        grid = make_grid()
        ao = AtomicOrbital().build(grid)
        s = sym.salc(ao, (0.0, 0.0), "a1")
        assert np.max(np.abs(s.values - ao.values)) < 1e-12

    def test_b2_from_explicit_projector_sum(self):
        # oracle: explicit four-term sum with b2 characters
        grid = make_grid()
        ao = AtomicOrbital().build(grid)
        placed = ll.translate(ao, (-5.0, 0.0))
        acc = np.zeros_like(placed.values)
        for op in sym.C2V_OPS:
            acc += sym.CHARACTERS["b2"][op.label] * sym.apply_symmetry(placed, op).values
        oracle = acc / 4.0
        s = sym.salc(ao, (-5.0, 0.0), "b2")
        assert np.max(np.abs(s.values - oracle)) < 1e-14
        # structure: antisymmetric two-center combination
        ref = 0.5 * (ll.translate(ao, (-5.0, 0.0)).values
                     - ll.translate(ao, (5.0, 0.0)).values)
        assert np.max(np.abs(s.values - ref)) < 1e-12


class TestCommutation:
    @pytest.mark.parametrize("op", sym.C2V_OPS, ids=lambda o: o.label)
    def test_symmetry_translation_commutation(self, op):
        # S T_rho f == T_{S^-1 rho} S f
        grid = make_grid()
        psi = random_field(grid, 7)
        rho = (2.7, -1.3)
        lhs = sym.apply_symmetry(ll.translate(psi, rho), op)
        rhs = ll.translate(sym.apply_symmetry(psi, op), op.inverse_map(rho))
        assert np.max(np.abs(lhs.values - rhs.values)) < 1e-12

    def test_equal_action_pairs_give_equal_composites(self):
        # C2 and sigma_xz act identically on in-plane functions and map the
        # center -R to +R identically; their translation composites agree
        grid = make_grid()
        ao = AtomicOrbital().build(grid)
        for s1, s2 in ((sym.C2, sym.SIGMA_XZ), (sym.E, sym.SIGMA_YZ)):
            assert np.array_equal(sym.apply_symmetry(ao, s1).values,
                                  sym.apply_symmetry(ao, s2).values)
            c1 = ll.translate(sym.apply_symmetry(ao, s1), s1.inverse_map((-5.0, 0.0)))
            c2 = ll.translate(sym.apply_symmetry(ao, s2), s2.inverse_map((-5.0, 0.0)))
            assert np.max(np.abs(c1.values - c2.values)) < 1e-12


class TestIrrepWeights:
    def test_pure_field(self):
        psi = sym.project(random_field(make_grid(), 8), "a1").normalized()
        w = sym.irrep_weights(psi)
        assert w["a1"] == pytest.approx(1.0, abs=1e-12)
        assert w["b2"] == pytest.approx(0.0, abs=1e-12)

    def test_equal_mixture(self):
        grid = make_grid()
        a1 = sym.project(random_field(grid, 9), "a1").normalized()
        b2 = sym.project(random_field(grid, 10), "b2").normalized()
        mix = ll.WaveFunction(grid, (a1.values + b2.values) / np.sqrt(2.0))
        w = sym.irrep_weights(mix)
        assert w["a1"] == pytest.approx(0.5, abs=1e-10)
        assert w["b2"] == pytest.approx(0.5, abs=1e-10)
        assert sum(w.values()) == pytest.approx(1.0, abs=1e-10)

    def test_zero_field_raises(self):
        grid = make_grid()
        zero = ll.WaveFunction(grid, np.zeros((grid.n_y, grid.n_z), complex))
        with pytest.raises(ZeroDivisionError):
            sym.irrep_weights(zero)
