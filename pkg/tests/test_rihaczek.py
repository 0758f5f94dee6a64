import math

import numpy as np
import pytest

from conftest import mixed_norm_oracle
from tflattice.exponents import ExponentTuple
from tflattice.lattice import (Grid, LatticeSignal, bump_signal,
                               default_window, delta_signal, random_signal,
                               zero_signal)
from tflattice.rihaczek import (PhaseSpaceSignal, _dense_phase_space_norm,
                                boundedness_ratio, duality_residual,
                                kohn_nirenberg_apply,
                                phase_space_modulation_norm, phase_space_stft,
                                rihaczek, rihaczek_identity_residual,
                                rihaczek_stft_closed_form)
from tflattice.transforms import dft


def random_symbol(grid: Grid, m: int, seed: int) -> PhaseSpaceSignal:
    rng = np.random.default_rng(seed)
    shape = (grid.N,) * ((m + 1) * grid.d)
    vals = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return PhaseSpaceSignal(grid, m, vals)


class TestRihaczekAssembly:
    def test_delta_pair(self):
        g = Grid(1, 8, 1.0)
        R = rihaczek(delta_signal(g, 0), [delta_signal(g, 0)])
        # transform of delta is alpha^d = 1; phase is 1 on x = 0
        expect = np.zeros((8, 8), dtype=complex)
        expect[0, :] = 1.0
        assert np.abs(R.values - expect).max() < 1e-12

    def test_zero_slot(self, grid8):
        R = rihaczek(zero_signal(grid8), [random_signal(grid8, 1)])
        assert np.all(R.values == 0)

    def test_modulus_factorizes(self):
        g = Grid(1, 8, 1.0)
        sig_g = random_signal(g, 2)
        f1, f2 = random_signal(g, 3), random_signal(g, 4)
        R = rihaczek(sig_g, [f1, f2])
        h1, h2 = np.abs(dft(f1).values), np.abs(dft(f2).values)
        expect = (np.abs(sig_g.values)[:, None, None]
                  * h1[None, :, None] * h2[None, None, :])
        assert np.abs(np.abs(R.values) - expect).max() < 1e-12

    def test_grid_mismatch(self):
        with pytest.raises(ValueError):
            rihaczek(random_signal(Grid(1, 8), 0), [random_signal(Grid(1, 4), 0)])

    def test_linearity_in_first_slot(self, grid8):
        f = random_signal(grid8, 5)
        g1, g2 = random_signal(grid8, 6), random_signal(grid8, 7)
        R = rihaczek(g1 + 2 * g2, [f])
        R1, R2 = rihaczek(g1, [f]), rihaczek(g2, [f])
        assert np.abs(R.values - (R1.values + 2 * R2.values)).max() < 1e-12

    def test_conjugate_linearity_in_argument_slot(self, grid8):
        g = random_signal(grid8, 8)
        f1, f2 = random_signal(grid8, 9), random_signal(grid8, 10)
        R = rihaczek(g, [f1 + (2j) * f2])
        R1, R2 = rihaczek(g, [f1]), rihaczek(g, [f2])
        assert np.abs(R.values - (R1.values + np.conj(2j) * R2.values)).max() < 1e-12

    def test_json_roundtrip(self, grid8):
        R = rihaczek(random_signal(grid8, 11), [random_signal(grid8, 12)])
        back = PhaseSpaceSignal.from_json_dict(R.to_json_dict())
        assert np.array_equal(back.values, R.values) and back.m == R.m


class TestClosedFormIdentity:
    def test_zero_inputs(self, grid8):
        w = default_window(grid8)
        out = rihaczek_stft_closed_form(zero_signal(grid8), [zero_signal(grid8)],
                                        [w, w])
        assert np.all(out == 0)

    @pytest.mark.parametrize("alpha", [1.0, 0.5, 8 ** -0.5])
    def test_m1_residual(self, alpha):
        g = Grid(1, 8, alpha)
        sig_g, f = random_signal(g, 13), random_signal(g, 14)
        w = default_window(g)
        assert rihaczek_identity_residual(sig_g, [f], [w, w]) < 1e-9

    def test_m2_residual(self):
        g = Grid(1, 4, 1.0)
        sig_g = random_signal(g, 15)
        fs = [random_signal(g, 16), random_signal(g, 17)]
        ws = [default_window(g)] * 3
        assert rihaczek_identity_residual(sig_g, fs, ws) < 1e-9

    def test_distinct_windows(self):
        g = Grid(1, 8, 1.0)
        ws = [bump_signal(g, 2.0), bump_signal(g, 3.0)]
        assert rihaczek_identity_residual(random_signal(g, 18),
                                          [random_signal(g, 19)], ws) < 1e-9

    def test_two_dimensional_base_grid(self):
        g = Grid(2, 4, 0.5)
        w = default_window(g)
        assert rihaczek_identity_residual(random_signal(g, 40),
                                          [random_signal(g, 41)], [w, w]) < 1e-9


class TestKohnNirenberg:
    def test_identity_symbol_inverts(self):
        g = Grid(1, 16, 1.0)
        f = random_signal(g, 20)
        sigma = PhaseSpaceSignal(g, 1, np.ones((16, 16)))
        out = kohn_nirenberg_apply(sigma, [f])
        assert np.abs(out.values - f.values).max() < 1e-10

    def test_multiplier_symbol(self):
        g = Grid(1, 16, 0.5)
        f = random_signal(g, 21)
        mult = np.exp(1j * np.arange(16) / 3.0)
        sigma = PhaseSpaceSignal(g, 1, np.broadcast_to(mult[None, :], (16, 16)))
        out = kohn_nirenberg_apply(sigma, [f])
        expect = dft(LatticeSignal(g.dual(), mult * dft(f).values), inverse=True)
        assert np.abs(out.values - expect.values).max() < 1e-10

    def test_bilinear_constant_symbol_is_product(self):
        g = Grid(1, 8, 1.0)
        f1, f2 = random_signal(g, 22), random_signal(g, 23)
        sigma = PhaseSpaceSignal(g, 2, np.ones((8, 8, 8)))
        out = kohn_nirenberg_apply(sigma, [f1, f2])
        assert np.abs(out.values - f1.values * f2.values).max() < 1e-10

    def test_arity_mismatch(self, grid8):
        sigma = random_symbol(grid8, 2, 0)
        with pytest.raises(ValueError):
            kohn_nirenberg_apply(sigma, [random_signal(grid8, 1)])


class TestDuality:
    def test_zero_inputs(self, grid8):
        sigma = PhaseSpaceSignal(grid8, 1, np.zeros((8, 8)))
        assert duality_residual(sigma, [zero_signal(grid8)], zero_signal(grid8)) == 0.0

    @pytest.mark.parametrize("alpha", [1.0, 0.5])
    def test_linear_random(self, alpha):
        g = Grid(1, 8, alpha)
        sigma = random_symbol(g, 1, 24)
        assert duality_residual(sigma, [random_signal(g, 25)],
                                random_signal(g, 26)) < 1e-9

    def test_bilinear_random(self):
        g = Grid(1, 4, 1.0)
        sigma = random_symbol(g, 2, 27)
        fs = [random_signal(g, 28), random_signal(g, 29)]
        assert duality_residual(sigma, fs, random_signal(g, 30)) < 1e-9


class TestPhaseSpaceNorm:
    @pytest.mark.parametrize("p,q", [(1.0, 1.0), (2.0, 2.0), (1.0, 2.0),
                                     (2.0, 1.0), (0.5, 1.0), (1.0, math.inf),
                                     (math.inf, 2.0)])
    def test_fast_paths_match_dense(self, p, q):
        g = Grid(1, 8, 1.0)
        sig_g, f = random_signal(g, 31), random_signal(g, 32)
        w = default_window(g)
        fast = phase_space_modulation_norm(sig_g, [f], p, q, windows=[w, w],
                                           riemann=False)
        dense = _dense_phase_space_norm(sig_g, [f], p, q, [w, w], "modulation",
                                        None)
        assert math.isclose(fast, dense, rel_tol=1e-10), (p, q)

    @pytest.mark.parametrize("p,q", [(1.0, 1.0), (1.0, 2.0), (2.0, 1.0)])
    def test_fourier_target_matches_dense(self, p, q):
        g = Grid(1, 8, 1.0)
        sig_g, f = random_signal(g, 33), random_signal(g, 34)
        w = default_window(g)
        fast = phase_space_modulation_norm(sig_g, [f], p, q, windows=[w, w],
                                           target="fourier_modulation",
                                           riemann=False)
        dense = _dense_phase_space_norm(sig_g, [f], p, q, [w, w],
                                        "fourier_modulation", None)
        assert math.isclose(fast, dense, rel_tol=1e-10), (p, q)

    def test_dense_path_agrees_with_direct_stft_mixed_norm(self):
        g = Grid(1, 4, 1.0)
        sig_g, f = random_signal(g, 35), random_signal(g, 36)
        w = default_window(g)
        R = rihaczek(sig_g, [f])
        Phi = rihaczek(w, [w])
        V = phase_space_stft(R, Phi)
        for p, q in [(1.0, 1.0), (2.0, 1.0)]:
            expect = mixed_norm_oracle(V, p, q, 2)
            got = _dense_phase_space_norm(sig_g, [f], p, q, [w, w],
                                          "modulation", None)
            assert math.isclose(got, expect, rel_tol=1e-10)

    def test_trilinear_diagonal_fast_path(self):
        g = Grid(1, 4, 1.0)
        sig_g = random_signal(g, 37)
        fs = [random_signal(g, 38), random_signal(g, 39)]
        w = default_window(g)
        fast = phase_space_modulation_norm(sig_g, fs, 2.0, 2.0,
                                           windows=[w, w, w], riemann=False)
        dense = _dense_phase_space_norm(sig_g, fs, 2.0, 2.0, [w, w, w],
                                        "modulation", None)
        assert math.isclose(fast, dense, rel_tol=1e-10)


class TestBoundednessRatio:
    def test_all_two_tuple_stability_across_n(self):
        tup = ExponentTuple.build(1, 2, 2, ["2", "2"], ["2", "2"])
        vals = []
        for N in (8, 16, 32):
            g = Grid.balanced(1, N)
            x = g.centered_axis() * g.alpha
            gauss = LatticeSignal(g, np.exp(-np.pi * x ** 2))
            vals.append(boundedness_ratio(gauss, [gauss], tup))
        gm = float(np.prod(vals)) ** (1 / 3)
        assert all(0.8 * gm <= v <= 1.2 * gm for v in vals), vals

    def test_bounded_tuple_dilation_stays_within_factor_four(self):
        from tflattice.experiments import dilated_bump
        tup = ExponentTuple.build(1, 2, 2, ["2", "2"], ["2", "2"])
        g = Grid.balanced(1, 64)
        ratios = [boundedness_ratio(dilated_bump(lam, g, base_radius=1.0),
                                    [dilated_bump(lam, g, base_radius=1.0)], tup)
                  for lam in (1.0, 0.5, 0.25)]
        assert max(ratios) / min(ratios) < 4.0

    def test_zero_denominator_raises(self, grid8):
        tup = ExponentTuple.build(1, 2, 2, ["2", "2"], ["2", "2"])
        with pytest.raises(ValueError):
            boundedness_ratio(zero_signal(grid8), [zero_signal(grid8)], tup)
