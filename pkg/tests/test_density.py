"""Tests for the dense and graded density-matrix engines.

The two engines implement the same channels; on any Z-type channel
sequence whose error-event count stays within the graded engine's kmax,
materializing the graded state must reproduce the dense state exactly.
"""
from __future__ import annotations

import numpy as np
import pytest

from msdsim.density import (
    DensityMatrix,
    GradedDensityMatrix,
    RotationErrorProfile,
    StorageRates,
    pure_state_infidelity,
)
from msdsim.pauli import PauliProduct


def _random_z_axis(rng: np.random.Generator, n: int) -> PauliProduct:
    mask = int(rng.integers(1, 1 << n))
    return PauliProduct("".join("Z" if mask >> i & 1 else "I"
                                for i in range(n)))


def _random_ops(rng: np.random.Generator, n: int, count: int):
    """A list of (kind, args) channel applications on n qubits."""
    ops = []
    for _ in range(count):
        kind = rng.choice(["rotation", "storage", "coherent"])
        if kind == "rotation":
            probs = rng.uniform(0.0, 0.03, size=3)
            profile = RotationErrorProfile(
                probs[0], probs[1], probs[2],
                p_z_output=float(rng.uniform(0.0, 0.02)),
            )
            ops.append((
                "rotation",
                (_random_z_axis(rng, n), profile, frozenset({0}),
                 int(rng.choice([1, -1]))),
            ))
        elif kind == "storage":
            rates = StorageRates(float(rng.uniform(0.0, 0.01)),
                                 float(rng.uniform(0.0, 0.01)))
            ops.append(("storage", (int(rng.integers(0, n)), rates,
                                    float(rng.uniform(0.5, 3.0)))))
        else:
            ops.append((
                "coherent",
                (_random_z_axis(rng, n), float(rng.uniform(-0.05, 0.05)),
                 int(rng.choice([1, -1]))),
            ))
    return ops


def _apply(state, op):
    kind, args = op
    if kind == "rotation":
        return state.apply_faulty_rotation(args[0], args[1], args[2],
                                           sign=args[3])
    if kind == "storage":
        return state.apply_storage(*args)
    return state.apply_coherent_rotation(*args)


class TestDensityMatrix:
    def test_init_plus_is_valid(self):
        rho = DensityMatrix.init_plus(3)
        rho.validate()
        plus = np.full(8, 8.0 ** -0.5)
        np.testing.assert_allclose(rho.fidelity_with_pure(plus), 1.0,
                                   rtol=1e-12)

    def test_qubit_count_bounds(self):
        with pytest.raises(ValueError):
            DensityMatrix.init_plus(0)
        with pytest.raises(ValueError):
            DensityMatrix.init_plus(11)

    def test_channels_preserve_state_invariants(self):
        # Randomized channel applications keep the state a density matrix:
        # unit trace, Hermitian, positive semidefinite.
        rng = np.random.default_rng(42)
        applications = 0
        for _ in range(10):
            rho = DensityMatrix.init_plus(3)
            for op in _random_ops(rng, 3, 20):
                rho = _apply(rho, op)
                rho.validate()
                applications += 1
        assert applications == 200

    def test_projection_renormalizes(self):
        rng = np.random.default_rng(7)
        rho = DensityMatrix.init_plus(3)
        for op in _random_ops(rng, 3, 12):
            rho = _apply(rho, op)
        projected, p_fail = rho.project_plus(frozenset({1, 2}))
        projected.validate()
        assert 0.0 <= p_fail < 1.0
        with pytest.raises(ValueError):
            rho.project_plus(frozenset())

    def test_full_strength_pauli_channels(self):
        # A certain Z flip turns |+> into |->; a certain X flip fixes |+>.
        rho = DensityMatrix.init_plus(1)
        flipped = rho.apply_storage(0, StorageRates(0.0, 0.5), 1.9999)
        plus = np.array([1.0, 1.0]) / np.sqrt(2)
        minus = np.array([1.0, -1.0]) / np.sqrt(2)
        assert flipped.fidelity_with_pure(minus) == pytest.approx(
            0.99995, rel=1e-9)
        fixed = rho.apply_storage(0, StorageRates(0.5, 0.0), 1.5)
        assert fixed.fidelity_with_pure(plus) == pytest.approx(1.0)

    def test_storage_probability_bound(self):
        rho = DensityMatrix.init_plus(1)
        with pytest.raises(ValueError):
            rho.apply_storage(0, StorageRates(0.3, 0.0), 4.0)
        with pytest.raises(ValueError):
            rho.apply_storage(1, StorageRates(0.1, 0.1), 1.0)


class TestProfiles:
    def test_profile_validation(self):
        with pytest.raises(ValueError):
            RotationErrorProfile(-0.1, 0.0, 0.0)
        with pytest.raises(ValueError):
            RotationErrorProfile(0.5, 0.4, 0.2)

    def test_profile_scaled(self):
        p = RotationErrorProfile(0.1, 0.02, 0.03, 0.04).scaled(0.5)
        np.testing.assert_allclose(
            [p.p_half, p.p_quarter, p.p_mquarter, p.p_z_output],
            [0.05, 0.01, 0.015, 0.02],
        )

    def test_storage_rates_validation(self):
        with pytest.raises(ValueError):
            StorageRates(-0.1, 0.0)
        with pytest.raises(ValueError):
            StorageRates(0.0, 1.5)


class TestGradedAgainstDense:
    def test_materialized_sequences_agree(self):
        rng = np.random.default_rng(2024)
        for trial in range(6):
            n = int(rng.integers(2, 4))
            ops = _random_ops(rng, n, 10)
            dense = DensityMatrix.init_plus(n)
            # every op contributes at most two error events (branch plus
            # output Z, or X plus Z storage), so this kmax loses nothing
            graded = GradedDensityMatrix.init_plus(n, kmax=2 * len(ops))
            for op in ops:
                dense = _apply(dense, op)
                graded = _apply(graded, op)
            np.testing.assert_allclose(graded.trace_total(), 1.0, rtol=1e-12)
            np.testing.assert_allclose(
                graded.materialize().data, dense.data, atol=1e-12
            )

    def test_projection_agrees(self):
        rng = np.random.default_rng(99)
        n = 3
        ops = _random_ops(rng, n, 8)
        dense = DensityMatrix.init_plus(n)
        graded = GradedDensityMatrix.init_plus(n, kmax=2 * len(ops))
        for op in ops:
            dense = _apply(dense, op)
            graded = _apply(graded, op)
        dense_p, dense_fail = dense.project_plus(frozenset({0, 2}))
        graded_p, graded_fail = graded.project_plus(frozenset({0, 2}))
        np.testing.assert_allclose(graded_fail, dense_fail, rtol=1e-10)
        np.testing.assert_allclose(
            graded_p.materialize().data, dense_p.data, atol=1e-11
        )

    def test_infidelity_agrees_with_materialized(self):
        rng = np.random.default_rng(31)
        n = 2
        ops = _random_ops(rng, n, 6)
        graded = GradedDensityMatrix.init_plus(n, kmax=2 * len(ops))
        for op in ops:
            graded = _apply(graded, op)
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1 / np.sqrt(2)
        direct = graded.infidelity_with_pure(psi)
        dense = graded.materialize()
        reference = 1.0 - dense.fidelity_with_pure(psi) / graded.trace_total()
        np.testing.assert_allclose(direct, reference, rtol=1e-9)

    def test_truncation_error_is_bounded(self):
        rng = np.random.default_rng(17)
        ops = _random_ops(rng, 2, 12)
        full = GradedDensityMatrix.init_plus(2, kmax=24)
        cut = GradedDensityMatrix.init_plus(2, kmax=2)
        for op in ops:
            full = _apply(full, op)
            cut = _apply(cut, op)
        dropped = 1.0 - cut.trace_total()
        assert dropped >= -1e-12
        gap = np.max(np.abs(full.materialize().data
                            - cut.materialize().data))
        assert gap <= dropped + 1e-12

    def test_graded_rejects_non_z_axes(self):
        graded = GradedDensityMatrix.init_plus(2, kmax=2)
        with pytest.raises(ValueError):
            graded.apply_faulty_rotation(
                PauliProduct("XI"), RotationErrorProfile(0.01, 0.0, 0.0)
            )


class TestPureStateInfidelity:
    def test_exact_match_is_zero(self):
        psi = np.array([1.0, 1j]) / np.sqrt(2)
        assert pure_state_infidelity(psi, psi) == pytest.approx(0.0, abs=1e-15)
        assert pure_state_infidelity(0.3 * psi, psi) == pytest.approx(
            0.0, abs=1e-15)

    def test_orthogonal_states(self):
        a = np.array([1.0, 0.0])
        b = np.array([0.0, 1.0])
        assert pure_state_infidelity(a, b) == pytest.approx(1.0)

    def test_requires_normalized_reference(self):
        graded = GradedDensityMatrix.init_plus(1, kmax=1)
        with pytest.raises(ValueError):
            graded.infidelity_with_pure(np.array([1.0, 1.0]))
