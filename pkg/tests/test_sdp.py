"""Feasibility, duality gap, slackness, and truncation coefficient checks."""

import numpy as np
import pytest

from tomoframe import (
    FeasibilityError,
    OperatorBasis,
    SdpPoint,
    SdpProblem,
    TruncationProblem,
    build_dual_frame,
    check_slackness,
    duality_gap,
    evaluate_constraint,
    expand,
    extract_coefficients,
    kernel_projector,
    phase_states,
    random_density_matrix,
    su_generators,
    truncation_certificate,
    truncation_sdp,
)
from tomoframe.qudit import PAULI_X, PAULI_Y, PAULI_Z, TETRAHEDRON_DIRECTIONS

I2 = np.eye(2, dtype=complex)


def tetrahedron_frame():
    projectors = np.stack(
        [
            0.5 * (I2 + n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z)
            for n in TETRAHEDRON_DIRECTIONS
        ]
    )
    return build_dual_frame(OperatorBasis(projectors))


def orthonormal_frame(d):
    return build_dual_frame(OperatorBasis(su_generators(d).elements_with_identity()))


def phase_diagonal_state(weights, basis):
    return np.einsum("m,mi,mj->ij", weights, basis.states, basis.states.conj())


class TestEvaluateConstraint:
    def test_zero_point_returns_f0(self):
        rng = np.random.default_rng(0)
        rho = random_density_matrix(3, rng)
        frame = orthonormal_frame(3)
        problem = truncation_sdp(TruncationProblem(rho, frame))
        fx, margin = evaluate_constraint(problem, np.zeros(9))
        np.testing.assert_allclose(fx, rho, atol=1e-12)
        assert margin >= -1e-12

    def test_complete_frame_zero_slack(self):
        rng = np.random.default_rng(1)
        rho = random_density_matrix(2, rng)
        trunc = TruncationProblem(rho, tetrahedron_frame())
        coeffs = extract_coefficients(trunc).coefficients.real
        fx, margin = evaluate_constraint(truncation_sdp(trunc), coeffs)
        np.testing.assert_allclose(fx, np.zeros((2, 2)), atol=1e-12)
        assert abs(margin) <= 1e-12

    def test_phase_truncation_psd(self):
        basis = phase_states(3)
        weights = np.array([0.4, 0.3, 0.2, 0.1])
        rho = phase_diagonal_state(weights, basis)
        kept = OperatorBasis(basis.projectors()[:3])
        trunc = TruncationProblem(rho, build_dual_frame(kept))
        coeffs = extract_coefficients(trunc).coefficients.real
        _, margin = evaluate_constraint(truncation_sdp(trunc), coeffs)
        assert margin >= -1e-12


class TestDualityGap:
    def test_zero_dual_matrix(self):
        # with Z = 0 the dual equalities force c = 0; the gap is exactly 0
        rng = np.random.default_rng(2)
        rho = random_density_matrix(2, rng)
        frame = tetrahedron_frame()
        problem = SdpProblem(f0=rho, fs=-frame.basis.elements, c=np.zeros(4))
        point = SdpPoint(x=np.zeros(4), z=np.zeros((2, 2), dtype=complex))
        assert duality_gap(problem, point) == pytest.approx(0.0)

    def test_truncation_optimum_gap_vanishes(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            rho = random_density_matrix(2, rng)
            trunc = TruncationProblem(rho, tetrahedron_frame())
            gap = duality_gap(truncation_sdp(trunc), truncation_certificate(trunc))
            assert abs(gap) <= 1e-9

    def test_feasible_perturbation_positive_gap(self):
        # shift the optimal coefficients toward a strictly feasible interior
        # point; the slack becomes eps * I and the gap turns positive
        rng = np.random.default_rng(4)
        rho = random_density_matrix(4, rng)
        frame = orthonormal_frame(4)
        trunc = TruncationProblem(rho, frame)
        point = truncation_certificate(trunc)
        identity_coeffs = expand(frame, np.eye(4, dtype=complex)).real
        eps = 1e-3
        perturbed = SdpPoint(x=point.x - eps * identity_coeffs, z=point.z)
        problem = truncation_sdp(trunc)
        fx, margin = evaluate_constraint(problem, perturbed.x)
        np.testing.assert_allclose(fx, eps * np.eye(4), atol=1e-12)
        assert margin >= -1e-9
        gap = duality_gap(problem, perturbed)
        assert gap > 0
        assert gap == pytest.approx(eps * 4.0, rel=1e-9)

    def test_weak_duality_random_pairs(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            d = int(rng.integers(2, 5))
            n = int(rng.integers(1, 5))
            f0 = random_density_matrix(d, rng) + 0.5 * np.eye(d)
            fs = np.stack(
                [
                    0.05 * (m + m.conj().T)
                    for m in (
                        rng.normal(size=(n, d, d)) + 1j * rng.normal(size=(n, d, d))
                    )
                ]
            )
            z = random_density_matrix(d, rng) * rng.uniform(0.1, 3.0)
            c = np.einsum("iab,ba->i", fs, z).real
            problem = SdpProblem(f0=f0, fs=fs, c=c)
            x = rng.normal(size=n) * 0.1
            _, margin = evaluate_constraint(problem, x)
            if margin < 0:
                continue
            point = SdpPoint(x=x, z=z)
            gap = duality_gap(problem, point)
            assert gap >= -1e-9
            assert gap == pytest.approx(
                float(c @ x + np.trace(f0 @ z).real), abs=1e-9
            )

    def test_infeasible_points_rejected(self):
        rng = np.random.default_rng(6)
        rho = random_density_matrix(2, rng)
        trunc = TruncationProblem(rho, tetrahedron_frame())
        problem = truncation_sdp(trunc)
        good = truncation_certificate(trunc)
        with pytest.raises(FeasibilityError, match="primal"):
            duality_gap(problem, SdpPoint(x=good.x + 0.5, z=good.z))
        with pytest.raises(FeasibilityError, match="not PSD"):
            duality_gap(problem, SdpPoint(x=good.x, z=-np.eye(2, dtype=complex)))
        with pytest.raises(FeasibilityError, match="dual equality"):
            duality_gap(problem, SdpPoint(x=good.x, z=0.5 * np.eye(2, dtype=complex)))
        with pytest.raises(FeasibilityError, match="no dual"):
            duality_gap(problem, SdpPoint(x=good.x, z=None))


class TestSlackness:
    def test_zero_dual_matrix(self):
        rng = np.random.default_rng(7)
        rho = random_density_matrix(2, rng)
        frame = tetrahedron_frame()
        problem = SdpProblem(f0=rho, fs=-frame.basis.elements, c=np.zeros(4))
        point = SdpPoint(x=np.zeros(4), z=np.zeros((2, 2), dtype=complex))
        assert check_slackness(problem, point) == pytest.approx(0.0)

    def test_truncation_optimum_certified(self):
        rng = np.random.default_rng(8)
        rho = random_density_matrix(2, rng)
        trunc = TruncationProblem(rho, tetrahedron_frame())
        residual = check_slackness(truncation_sdp(trunc), truncation_certificate(trunc))
        assert residual <= 1e-9

    def test_wrong_coefficients_full_residual(self):
        rng = np.random.default_rng(9)
        rho = random_density_matrix(2, rng)
        trunc = TruncationProblem(rho, tetrahedron_frame())
        problem = truncation_sdp(trunc)
        point = SdpPoint(x=np.zeros(4), z=np.eye(2, dtype=complex))
        residual = check_slackness(problem, point)
        assert residual == pytest.approx(float(np.linalg.norm(rho)), abs=1e-12)

    def test_gap_bounded_by_dim_times_residual(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            d = 4
            rho = random_density_matrix(d, rng)
            frame = orthonormal_frame(d)
            trunc = TruncationProblem(rho, frame)
            problem = truncation_sdp(trunc)
            point = truncation_certificate(trunc)
            identity_coeffs = expand(frame, np.eye(d, dtype=complex)).real
            eps = rng.uniform(1e-6, 1e-3)
            shifted = SdpPoint(x=point.x - eps * identity_coeffs, z=point.z)
            residual = check_slackness(problem, shifted)
            gap = duality_gap(problem, shifted)
            assert gap <= d * residual + 1e-12


class TestExtractCoefficients:
    def test_complete_frame_exact(self):
        rng = np.random.default_rng(11)
        rho = random_density_matrix(2, rng)
        result = extract_coefficients(TruncationProblem(rho, tetrahedron_frame()))
        np.testing.assert_allclose(result.truncated, rho, atol=1e-12)
        np.testing.assert_allclose(result.slack_spectrum, np.zeros(2), atol=1e-12)

    def test_phase_truncation_spectrum(self):
        basis = phase_states(3)
        weights = np.array([0.4, 0.3, 0.2, 0.1])
        rho = phase_diagonal_state(weights, basis)
        kept = OperatorBasis(basis.projectors()[:3])
        result = extract_coefficients(TruncationProblem(rho, build_dual_frame(kept)))
        np.testing.assert_allclose(result.coefficients.real, weights[:3], atol=1e-12)
        np.testing.assert_allclose(
            result.slack_spectrum, [0.0, 0.0, 0.0, 0.1], atol=1e-12
        )

    def test_tetrahedron_bloch_formula(self):
        s = np.array([-0.2, 0.4, 0.5])
        rho = 0.5 * (I2 + s[0] * PAULI_X + s[1] * PAULI_Y + s[2] * PAULI_Z)
        result = extract_coefficients(TruncationProblem(rho, tetrahedron_frame()))
        expected = 0.25 * (1.0 + 3.0 * TETRAHEDRON_DIRECTIONS @ s)
        np.testing.assert_allclose(result.coefficients.real, expected, atol=1e-10)

    def test_agrees_with_expand(self):
        rng = np.random.default_rng(12)
        for frame in (tetrahedron_frame(), orthonormal_frame(3)):
            rho = random_density_matrix(frame.basis.dim, rng)
            trunc = TruncationProblem(rho, frame)
            lam = extract_coefficients(trunc).coefficients
            np.testing.assert_allclose(lam, expand(frame, rho), atol=1e-12)

    def test_truncated_trace(self):
        rng = np.random.default_rng(13)
        frame = tetrahedron_frame()
        rho = random_density_matrix(2, rng)
        result = extract_coefficients(TruncationProblem(rho, frame))
        traces = np.einsum("jaa->j", frame.basis.elements).real
        total = float(result.coefficients.real @ traces)
        assert total == pytest.approx(float(np.trace(result.truncated).real), abs=1e-12)
        assert total == pytest.approx(1.0, abs=1e-10)


def test_kernel_projector_spans_null_space():
    m = np.diag([0.0, 0.0, 1.0]).astype(complex)
    proj = kernel_projector(m)
    np.testing.assert_allclose(proj, np.diag([1.0, 1.0, 0.0]), atol=1e-12)
