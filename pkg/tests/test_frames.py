"""Vector-frame operations: analysis, synthesis, bounds, projection method."""

import numpy as np
import pytest

from tomoframe import (
    DimensionError,
    RangeError,
    SpanError,
    VectorFrame,
    analysis,
    frame_coefficients,
    frame_operator,
    projection_method,
    synthesis,
)


def doubled_basis_frame():
    """{e1, e1, e2} in C^2."""
    return VectorFrame(np.array([[1, 0], [1, 0], [0, 1]], dtype=complex))


def mercedes_frame():
    angles = np.array([np.pi / 2, np.pi / 2 + 2 * np.pi / 3, np.pi / 2 + 4 * np.pi / 3])
    return VectorFrame(np.stack([np.cos(angles), np.sin(angles)], axis=1).astype(complex))


def random_frame(rng, n, dim):
    return VectorFrame(rng.normal(size=(n, dim)) + 1j * rng.normal(size=(n, dim)))


def test_analysis_standard_basis():
    frame = VectorFrame(np.eye(3, dtype=complex))
    f = np.array([1.0, 2.0j, 0.0])
    np.testing.assert_allclose(analysis(frame, f), f, atol=0)


def test_analysis_doubled_basis():
    np.testing.assert_allclose(
        analysis(doubled_basis_frame(), np.array([1.0, 0.0])), [1, 1, 0], atol=0
    )


def test_analysis_zero_vector():
    frame = random_frame(np.random.default_rng(0), 5, 3)
    np.testing.assert_allclose(analysis(frame, np.zeros(3)), np.zeros(5), atol=0)


def test_synthesis_selects_vector():
    frame = random_frame(np.random.default_rng(1), 4, 3)
    for k in range(4):
        np.testing.assert_allclose(
            synthesis(frame, np.eye(4)[k]), frame.vectors[k], atol=0
        )


def test_synthesis_doubled_basis():
    np.testing.assert_allclose(
        synthesis(doubled_basis_frame(), [1, 1, 0]), [2, 0], atol=0
    )


def test_synthesis_zero_coefficients():
    frame = random_frame(np.random.default_rng(2), 4, 3)
    np.testing.assert_allclose(synthesis(frame, np.zeros(4)), np.zeros(3), atol=0)


def test_frame_operator_orthonormal_basis():
    frame = VectorFrame(np.eye(4, dtype=complex))
    data = frame_operator(frame)
    np.testing.assert_allclose(data.matrix, np.eye(4), atol=1e-15)
    assert frame.bounds == pytest.approx((1.0, 1.0))


def test_frame_operator_doubled_basis():
    frame = doubled_basis_frame()
    data = frame_operator(frame)
    np.testing.assert_allclose(data.matrix, np.diag([2.0, 1.0]), atol=1e-15)
    assert frame.bounds == pytest.approx((1.0, 2.0))


def test_frame_operator_mercedes_tight():
    # oracle: sum of the three rank-1 projectors at 120 degrees
    frame = mercedes_frame()
    s = sum(np.outer(v, v.conj()) for v in frame.vectors)
    np.testing.assert_allclose(s, 1.5 * np.eye(2), atol=1e-12)
    data = frame_operator(frame)
    np.testing.assert_allclose(data.matrix, 1.5 * np.eye(2), atol=1e-12)
    assert frame.bounds == pytest.approx((1.5, 1.5))


def test_frame_operator_is_synthesis_times_analysis():
    rng = np.random.default_rng(3)
    frame = random_frame(rng, 7, 4)
    t = frame.vectors.T
    np.testing.assert_allclose(
        frame_operator(frame).matrix, t @ t.conj().T, atol=1e-12
    )


def test_frame_inequality_random_vectors():
    rng = np.random.default_rng(4)
    frame = random_frame(rng, 9, 4)
    frame_operator(frame)
    a, b = frame.bounds
    for _ in range(100):
        f = rng.normal(size=4) + 1j * rng.normal(size=4)
        energy = np.sum(np.abs(analysis(frame, f)) ** 2)
        norm2 = np.linalg.norm(f) ** 2
        assert energy - a * norm2 >= -1e-9
        assert b * norm2 - energy >= -1e-9


def test_frame_coefficients_orthonormal():
    frame = VectorFrame(np.eye(3, dtype=complex))
    f = np.array([1.0, 2.0j, -0.5])
    np.testing.assert_allclose(frame_coefficients(frame, f), f, atol=1e-12)


def test_frame_coefficients_tight_frame_scaling():
    frame = mercedes_frame()
    f = np.array([0.3, -1.1], dtype=complex)
    np.testing.assert_allclose(
        frame_coefficients(frame, f), analysis(frame, f) / 1.5, atol=1e-12
    )


def test_frame_coefficients_doubled_basis():
    np.testing.assert_allclose(
        frame_coefficients(doubled_basis_frame(), np.array([1.0, 0.0])),
        [0.5, 0.5, 0.0],
        atol=1e-12,
    )


def test_frame_coefficients_reconstruct():
    rng = np.random.default_rng(5)
    frame = random_frame(rng, 8, 5)
    f = rng.normal(size=5) + 1j * rng.normal(size=5)
    coeffs = frame_coefficients(frame, f)
    np.testing.assert_allclose(synthesis(frame, coeffs), f, atol=1e-9)


def test_frame_coefficients_span_error():
    frame = VectorFrame(np.array([[1, 0, 0], [0, 1, 0]], dtype=complex))
    with pytest.raises(SpanError) as err:
        frame_coefficients(frame, np.array([0.0, 0.0, 1.0]))
    assert err.value.residual == pytest.approx(1.0)


def test_projection_full_frame_recovers():
    rng = np.random.default_rng(6)
    frame = random_frame(rng, 6, 4)
    f = rng.normal(size=4) + 1j * rng.normal(size=4)
    result = projection_method(frame, f, len(frame))
    assert result.error <= 1e-9
    np.testing.assert_allclose(result.projection, f, atol=1e-9)


def test_projection_first_vector():
    rng = np.random.default_rng(7)
    frame = random_frame(rng, 5, 3)
    result = projection_method(frame, frame.vectors[0], 1)
    assert result.error <= 1e-12


def test_projection_error_monotone():
    rng = np.random.default_rng(8)
    frame = random_frame(rng, 12, 6)
    f = rng.normal(size=6) + 1j * rng.normal(size=6)
    errors = [projection_method(frame, f, n).error for n in range(1, 13)]
    for previous, current in zip(errors, errors[1:]):
        assert current <= previous + 1e-12


def test_projection_idempotent():
    rng = np.random.default_rng(9)
    frame = random_frame(rng, 10, 6)
    f = rng.normal(size=6) + 1j * rng.normal(size=6)
    first = projection_method(frame, f, 4)
    second = projection_method(frame, first.projection, 4)
    np.testing.assert_allclose(second.projection, first.projection, atol=1e-9)
    assert second.error <= 1e-9


def test_projection_range_error():
    frame = doubled_basis_frame()
    with pytest.raises(RangeError):
        projection_method(frame, np.array([1.0, 0.0]), 0)
    with pytest.raises(RangeError):
        projection_method(frame, np.array([1.0, 0.0]), 4)


def test_dimension_errors():
    frame = doubled_basis_frame()
    with pytest.raises(DimensionError):
        analysis(frame, np.zeros(3))
    with pytest.raises(DimensionError):
        synthesis(frame, np.zeros(2))
