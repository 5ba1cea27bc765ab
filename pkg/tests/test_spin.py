"""Spin coherent states, cone quorums, and Stern-Gerlach reconstruction."""

import dataclasses

import numpy as np
import pytest
from scipy.linalg import expm

from tomoframe import (
    ConditioningError,
    DataError,
    DimensionError,
    RangeError,
    build_spin_quorum,
    quorum_compatibility_report,
    random_density_matrix,
    spin_coherent_state,
    spin_probabilities,
    spin_reconstruct,
)
from tomoframe.spin import spin_operators


def direction_vector(theta, phi):
    return np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )


class TestSpinCoherentState:
    def test_north_pole_is_highest_weight(self):
        for two_s in (1, 2, 5):
            state = spin_coherent_state(two_s, 0.0, 0.0)
            expected = np.zeros(two_s + 1)
            expected[0] = 1.0
            np.testing.assert_allclose(state.vector, expected, atol=1e-12)

    def test_equator_half_spin(self):
        state = spin_coherent_state(1, np.pi / 2, 0.0)
        np.testing.assert_allclose(
            state.vector, np.array([1.0, 1.0]) / np.sqrt(2.0), atol=1e-12
        )

    def test_matches_rotation_route(self):
        # independent oracle: matrix exponential of the spin operators
        rng = np.random.default_rng(3)
        for two_s in (1, 2, 3, 4, 5, 6):
            sx, sy, sz = spin_operators(two_s)
            for _ in range(50 // 6 + 1):
                theta = float(rng.uniform(0, np.pi))
                phi = float(rng.uniform(0, 2 * np.pi))
                state = spin_coherent_state(two_s, theta, phi)
                axis = -np.sin(phi) * sx + np.cos(phi) * sy
                rotated = expm(-1j * theta * axis)[:, 0]
                assert np.linalg.norm(state.vector - rotated) <= 1e-9
                assert np.linalg.norm(state.vector) == pytest.approx(1.0, abs=1e-10)

    def test_overlap_law(self):
        # |<n|n'>|^2 = cos(gamma/2)^(4s) with gamma the angle between axes
        rng = np.random.default_rng(5)
        two_s = 2
        for _ in range(20):
            t1, t2 = rng.uniform(0, np.pi, 2)
            p1, p2 = rng.uniform(0, 2 * np.pi, 2)
            a = spin_coherent_state(two_s, float(t1), float(p1)).vector
            b = spin_coherent_state(two_s, float(t2), float(p2)).vector
            cos_gamma = float(
                np.clip(direction_vector(t1, p1) @ direction_vector(t2, p2), -1, 1)
            )
            # cos(gamma/2)^(4s) with cos^2(gamma/2) = (1 + cos gamma)/2
            expected = ((1.0 + cos_gamma) / 2.0) ** two_s
            assert abs(np.vdot(a, b)) ** 2 == pytest.approx(expected, abs=1e-10)

    def test_invalid_arguments(self):
        with pytest.raises(RangeError):
            spin_coherent_state(-1, 0.0, 0.0)
        with pytest.raises(RangeError):
            spin_coherent_state(2, 3.5, 0.0)


class TestBuildSpinQuorum:
    @pytest.mark.parametrize("two_s", [1, 2, 3, 4])
    def test_count_rank_and_conditioning(self, two_s):
        quorum = build_spin_quorum(two_s)
        k = (two_s + 1) ** 2
        assert quorum.projectors.shape == (k, two_s + 1, two_s + 1)
        assert quorum.rank == k
        assert quorum.complete
        assert quorum.condition_number < 1e8
        assert quorum.jitter_attempts == 0

    def test_azimuth_rotation_permutes_each_cone(self):
        two_s = 2
        n = two_s + 1
        quorum = build_spin_quorum(two_s)
        step = 2.0 * np.pi / n
        for k in range(n):
            mask = quorum.cone_indices == k
            originals = quorum.projectors[mask]
            for theta, phi in quorum.directions[mask]:
                rotated = spin_coherent_state(two_s, float(theta), float(phi + step))
                proj = np.outer(rotated.vector, rotated.vector.conj())
                gaps = [np.abs(proj - p).max() for p in originals]
                assert min(gaps) <= 1e-12

    def test_near_degenerate_scheme_recovers_by_jitter(self):
        quorum = build_spin_quorum(2, polar_scheme=[0.8, 0.8 + 1e-12, 2.0])
        assert quorum.jitter_attempts >= 1
        assert quorum.complete

    def test_hopeless_scheme_raises(self):
        with pytest.raises(ConditioningError) as err:
            build_spin_quorum(2, polar_scheme=[1e-6, 2e-6, 3e-6])
        assert err.value.spectrum is not None

    def test_scheme_validation(self):
        with pytest.raises(RangeError):
            build_spin_quorum(2, polar_scheme=[0.5, 1.0])
        with pytest.raises(RangeError):
            build_spin_quorum(2, polar_scheme=[0.5, 0.5, 1.0])
        with pytest.raises(RangeError):
            build_spin_quorum(2, polar_scheme=[0.0, 0.5, 1.0])


class TestSpinReconstruct:
    @pytest.mark.parametrize("two_s", [1, 2, 3])
    def test_noiseless_round_trip(self, two_s):
        rng = np.random.default_rng(7 + two_s)
        quorum = build_spin_quorum(two_s)
        rho = random_density_matrix(two_s + 1, rng)
        report = spin_reconstruct(quorum, spin_probabilities(quorum, rho), reference=rho)
        assert report.trace_distance <= 1e-8
        assert report.trace == pytest.approx(1.0, abs=1e-6)

    def test_maximally_mixed(self):
        two_s = 2
        quorum = build_spin_quorum(two_s)
        dim = two_s + 1
        p = spin_probabilities(quorum, np.eye(dim, dtype=complex) / dim)
        np.testing.assert_allclose(p, np.full(dim * dim, 1.0 / dim), atol=1e-10)
        report = spin_reconstruct(quorum, p)
        np.testing.assert_allclose(report.matrix, np.eye(dim) / dim, atol=1e-8)

    def test_probability_sum_strictly_inside_bounds(self):
        rng = np.random.default_rng(11)
        for two_s in (1, 2, 3):
            quorum = build_spin_quorum(two_s)
            for _ in range(20):
                rho = random_density_matrix(two_s + 1, rng)
                total = float(spin_probabilities(quorum, rho).sum())
                assert 0.0 < total < (two_s + 1) ** 2

    def test_trace_ties_probabilities_together(self):
        rng = np.random.default_rng(13)
        quorum = build_spin_quorum(2)
        p = spin_probabilities(quorum, random_density_matrix(3, rng))
        assert spin_reconstruct(quorum, p).trace == pytest.approx(1.0, abs=1e-10)
        bumped = p.copy()
        bumped[0] = min(1.0, bumped[0] + 0.05)
        assert abs(spin_reconstruct(quorum, bumped).trace - 1.0) > 1e-4

    def test_input_validation(self):
        quorum = build_spin_quorum(1)
        with pytest.raises(DimensionError):
            spin_reconstruct(quorum, np.full(3, 0.1))
        with pytest.raises(DataError):
            spin_reconstruct(quorum, np.array([1.5, 0.1, 0.1, 0.1]))


class TestCompatibilityReport:
    def test_half_spin_all_incompatible(self):
        summary = quorum_compatibility_report(build_spin_quorum(1))
        assert summary.min_norm > 0.0
        assert not summary.degenerate_pairs

    def test_spin_one_all_pairs(self):
        summary = quorum_compatibility_report(build_spin_quorum(2))
        assert summary.min_norm > 1e-6
        assert summary.max_norm >= summary.min_norm

    def test_duplicate_directions_flagged(self):
        quorum = build_spin_quorum(1)
        duplicated = dataclasses.replace(
            quorum, projectors=np.concatenate([quorum.projectors[:1], quorum.projectors])
        )
        summary = quorum_compatibility_report(duplicated)
        assert (0, 1) in summary.degenerate_pairs
