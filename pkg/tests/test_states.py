import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from vnlattice.errors import DomainError, PrecisionError, UsageError
from vnlattice.states import (CoherentParam, DensityMatrix, FockState,
                              _coherent_rows, coherent_amplitude,
                              fock_envelope_tail_mass, fock_expand_coherent,
                              fock_tail_radius, husimi_centroid, husimi_q,
                              load_density_matrix, make_cat_state,
                              parse_state_spec, poisson_truncation_tail)


def ground_state():
    return FockState(np.array([1.0 + 0j]))


def random_fock(rng, n):
    c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    return FockState(c / np.linalg.norm(c))


class TestCoherentAmplitude:
    def test_vacuum_overlap(self):
        assert coherent_amplitude(0j, ground_state()) == 1.0

    @pytest.mark.parametrize("gamma", [0.5, 1j, 1.2 - 0.7j, 3.0 + 2.0j])
    def test_ground_state_gaussian(self, gamma):
        amp = coherent_amplitude(gamma, ground_state())
        assert abs(amp - math.exp(-abs(gamma) ** 2 / 2)) <= 1e-15

    def test_coherent_overlap_magnitude(self):
        # |<gamma|z>|^2 = exp(-|gamma - z|^2), the analytic oracle
        state = fock_expand_coherent(1.0 + 0j, 40)
        for g in (1.0, 0.0, 1.5 + 1.0j, -1.0 - 2.0j):
            q = abs(coherent_amplitude(g, state)) ** 2
            assert abs(q - math.exp(-abs(g - 1.0) ** 2)) <= 1e-12

    def test_array_input(self):
        g = np.array([[0j, 1j], [2.0, 1.0 + 1j]])
        amp = coherent_amplitude(g, ground_state())
        assert amp.shape == g.shape
        assert_allclose(np.abs(amp), np.exp(-np.abs(g) ** 2 / 2), atol=1e-15)


class TestHusimiQ:
    def test_coherent_peak(self):
        assert husimi_q(0.3 - 0.4j, CoherentParam(0.3 - 0.4j)) == 1.0

    @pytest.mark.parametrize("g,z", [(0j, 1.0), (1j, -1j), (2.0 + 1j, 0.5)])
    def test_coherent_gaussian_falloff(self, g, z):
        assert abs(husimi_q(g, CoherentParam(z)) - math.exp(-abs(g - z) ** 2)) <= 1e-15

    def test_pure_density_matches_vector_path(self):
        rng = np.random.default_rng(11)
        psi = random_fock(rng, 12)
        rho = DensityMatrix(np.outer(psi.coeffs, psi.coeffs.conj()))
        grid = rng.normal(size=40) + 1j * rng.normal(size=40)
        assert_allclose(husimi_q(grid, rho), husimi_q(grid, psi), rtol=0, atol=1e-12)

    def test_vacuum_projector(self):
        rho = DensityMatrix(np.array([[1.0 + 0j]]))
        assert husimi_q(0j, rho) == 1.0

    def test_values_in_unit_interval(self):
        rng = np.random.default_rng(3)
        psi = random_fock(rng, 20)
        grid = 3 * (rng.normal(size=100) + 1j * rng.normal(size=100))
        q = husimi_q(grid, psi)
        assert np.all(q >= 0.0) and np.all(q <= 1.0)

    def test_plane_integral_is_one(self):
        # quadrature oracle with numpy's own nodes: integral of Q/pi over a
        # square chosen by the tail rule equals 1
        states = [ground_state(),
                  parse_state_spec("fock:1"),
                  parse_state_spec("fock:3"),
                  make_cat_state(1.0 + 0j, +1, 30)]
        for st in states:
            radius = fock_tail_radius(st.truncation, 1e-10)
            x, w = np.polynomial.legendre.leggauss(160)
            nodes = x * radius
            weights = w * radius
            grid = nodes[:, None] + 1j * nodes[None, :]
            total = weights @ husimi_q(grid, st) @ weights / math.pi
            assert abs(total - 1.0) <= 1e-8


class TestFockExpandCoherent:
    def test_zero_displacement(self):
        st = fock_expand_coherent(0j, 0)
        assert st.coeffs[0] == 1.0
        assert st.truncation_tail == 0.0

    def test_normalized(self):
        st = fock_expand_coherent(1.0 + 0j, 40)
        assert abs(np.sum(np.abs(st.coeffs) ** 2) - 1.0) <= 1e-14

    def test_overlap_matches_analytic(self):
        z = 0.8 - 1.1j
        st = fock_expand_coherent(z, 48)
        for g in (0j, z, z + 1.0, z + 2j, z - 3.0):
            assert abs(husimi_q(g, st) - math.exp(-abs(g - z) ** 2)) <= 1e-12

    def test_insufficient_truncation_rejected(self):
        with pytest.raises(PrecisionError):
            fock_expand_coherent(3.0 + 0j, 5)

    def test_tail_bound_recorded(self):
        st = fock_expand_coherent(1.0 + 0j, 20)
        assert st.truncation_tail == poisson_truncation_tail(1.0, 20)
        assert 0.0 < st.truncation_tail < 1e-14


class TestCatStates:
    def test_even_cat_has_even_support(self):
        st = make_cat_state(1.5 + 0j, +1, 30)
        assert np.all(np.abs(st.coeffs[1::2]) == 0.0)

    def test_odd_cat_has_odd_support(self):
        st = make_cat_state(1.5 + 0j, -1, 30)
        assert np.all(np.abs(st.coeffs[0::2]) == 0.0)

    def test_zero_even_cat_is_ground_state(self):
        st = make_cat_state(0j, +1, 0)
        assert st.coeffs[0] == 1.0

    def test_zero_odd_cat_rejected(self):
        with pytest.raises(DomainError):
            make_cat_state(0j, -1, 10)

    def test_bad_sign_rejected(self):
        with pytest.raises(DomainError):
            make_cat_state(1.0 + 0j, 2, 10)

    def test_unnormalized_norm_matches_overlap_formula(self):
        # oracle: || |z> + |-z> ||^2 = 2 (1 + exp(-2|z|^2))
        z = 2.0 + 0j
        n = np.arange(41)
        root_fact = np.sqrt(np.array([float(math.factorial(int(k))) for k in n]))
        pois = np.exp(-abs(z) ** 2 / 2) * z.real ** n / root_fact
        raw = pois + pois * (-1.0) ** n
        expected = 2.0 * (1.0 + math.exp(-2 * abs(z) ** 2))
        assert abs(np.sum(np.abs(raw) ** 2) - expected) <= 1e-12

    def test_normalized(self):
        st = make_cat_state(2.0 + 0j, +1, 40)
        assert abs(np.sum(np.abs(st.coeffs) ** 2) - 1.0) <= 1e-12


class TestCentroid:
    def test_coherent(self):
        assert husimi_centroid(CoherentParam(0.4 + 0.9j)) == 0.4 + 0.9j

    def test_expanded_coherent(self):
        z = 0.7 + 0.3j
        assert abs(husimi_centroid(fock_expand_coherent(z, 40)) - z) <= 1e-10

    def test_even_cat_centered_at_origin(self):
        assert abs(husimi_centroid(make_cat_state(2.0 + 0j, +1, 40))) <= 1e-12

    def test_density_matrix(self):
        # rho for (|0> + |1>)/sqrt(2): <a> = 1/2
        v = np.array([1.0, 1.0]) / math.sqrt(2.0)
        rho = DensityMatrix(np.outer(v, v).astype(complex))
        assert abs(husimi_centroid(rho) - 0.5) <= 1e-15


class TestValidation:
    def test_fock_state_must_be_normalized(self):
        with pytest.raises(DomainError):
            FockState(np.array([1.0, 1.0]))

    def test_density_matrix_not_hermitian(self):
        with pytest.raises(DomainError):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_density_matrix_bad_trace(self):
        with pytest.raises(DomainError):
            DensityMatrix(np.array([[0.5, 0.0], [0.0, 0.4]]))

    def test_density_matrix_negative_eigenvalue(self):
        with pytest.raises(DomainError):
            DensityMatrix(np.array([[1.2, 0.0], [0.0, -0.2]]))

    def test_coherent_param_must_be_finite(self):
        with pytest.raises(DomainError):
            CoherentParam(complex(math.inf, 0.0))


class TestAmplitudeAssemblyPaths:
    def test_log_and_product_paths_agree(self):
        rng = np.random.default_rng(5)
        g = rng.normal(size=60) + 1j * rng.normal(size=60)
        for scale in (0.5, 4.0, 12.0):
            a = _coherent_rows(g * scale, 48, force_log=False)
            b = _coherent_rows(g * scale, 48, force_log=True)
            rel = np.abs(a - b) / np.maximum(np.abs(a), 1e-280)
            assert np.max(rel) <= 1e-10

    def test_log_path_handles_zero(self):
        rows = _coherent_rows(np.array([0j]), 5, force_log=True)
        assert rows[0, 0] == 1.0
        assert np.all(rows[0, 1:] == 0.0)


class TestEnvelopeTail:
    def test_unusable_below_peak_radius(self):
        assert fock_envelope_tail_mass(25, 4.0) == math.inf

    def test_decreasing_in_distance(self):
        vals = [fock_envelope_tail_mass(8, d) for d in (3.0, 5.0, 8.0, 12.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("n,tol", [(0, 1e-10), (5, 1e-10), (40, 1e-12)])
    def test_radius_certifies(self, n, tol):
        r = fock_tail_radius(n, tol)
        assert fock_envelope_tail_mass(n, r) <= tol


class TestStateSpecLanguage:
    def test_coherent(self):
        st = parse_state_spec("coherent:0.5,-0.25")
        assert isinstance(st, CoherentParam)
        assert st.z == 0.5 - 0.25j

    def test_fock(self):
        st = parse_state_spec("fock:3")
        assert isinstance(st, FockState)
        assert st.coeffs[3] == 1.0 and st.truncation == 3

    def test_cat(self):
        st = parse_state_spec("cat:1,0,+")
        assert isinstance(st, FockState)
        assert np.all(np.abs(st.coeffs[1::2]) == 0.0)

    def test_mixed_round_trip(self, tmp_path):
        path = tmp_path / "rho.txt"
        path.write_text("0.5 0.25i\n-0.25i 0.5\n")
        st = parse_state_spec(f"mixed:{path}")
        assert isinstance(st, DensityMatrix)
        assert st.entries[0, 1] == 0.25j

    @pytest.mark.parametrize("bad", [
        "swizzle:1", "coherent:1", "coherent:a,b", "fock:-1", "fock:x",
        "cat:1,0", "cat:1,0,*", "mixed:", "nocolon",
    ])
    def test_bad_specs_rejected(self, bad):
        with pytest.raises(UsageError):
            parse_state_spec(bad)

    def test_missing_mixed_file_is_io_error(self, tmp_path):
        with pytest.raises(OSError):
            parse_state_spec(f"mixed:{tmp_path}/absent.txt")

    def test_malformed_mixed_file(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0.5 what\n0 0.5\n")
        with pytest.raises(UsageError):
            load_density_matrix(str(path))

    def test_ragged_mixed_file(self, tmp_path):
        path = tmp_path / "ragged.txt"
        path.write_text("0.5 0\n0\n")
        with pytest.raises(UsageError):
            load_density_matrix(str(path))
