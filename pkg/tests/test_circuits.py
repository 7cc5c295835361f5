"""Tests for the distillation-circuit catalog and circuit-level noise."""
from __future__ import annotations

import math
import time

import numpy as np
import pytest

from msdsim.circuits import (
    CATALOG_KINDS,
    NoiseSpec,
    catalog,
    coherent,
    compose_unitary,
    format_circuit,
    random_pauli,
    simulate_circuit,
    undetected_error_sets,
    verify_equivalence,
    verify_gadget,
    z_only,
)
from msdsim.pauli import PauliProduct, Rotation, RotationAngle, equal_up_to_phase


class TestCatalog:
    def test_all_kinds_build(self):
        for kind in CATALOG_KINDS:
            c = catalog(kind)
            assert c.name == kind
            assert len(format_circuit(c).splitlines()) == len(c.rotations) + 1
        with pytest.raises(ValueError):
            catalog("nonsense")

    def test_rotation_counts(self):
        assert len(catalog("fifteen_to_one").rotations) == 15
        assert len(catalog("identity16").rotations) == 16
        assert len(catalog("twenty_to_four").rotations) == 20
        assert len(catalog("eight_to_ccz").rotations) == 8
        assert len(catalog("ccz7").rotations) == 7

    def test_identity16_composes_to_identity(self):
        u = compose_unitary(catalog("identity16"))
        assert equal_up_to_phase(u, np.eye(32, dtype=complex), tol=1e-9)

    def test_identity15_4q_composes_to_identity(self):
        u = compose_unitary(catalog("identity15_4q"))
        assert equal_up_to_phase(u, np.eye(16, dtype=complex), tol=1e-9)

    def test_fifteen_to_one_is_single_rotation(self):
        target = [Rotation(PauliProduct("ZIIII"), RotationAngle(-1))]
        assert verify_equivalence(catalog("fifteen_to_one"), target, tol=1e-9)

    def test_eight_to_ccz_matches_ccz_decomposition(self):
        assert verify_equivalence(
            catalog("eight_to_ccz"), catalog("ccz7"), tol=1e-9
        )

    def test_twenty_to_four_noiseless_fidelity(self):
        c = catalog("twenty_to_four")
        p_out, p_fail = simulate_circuit(c, z_only(0.0), kmax=1)
        assert c.outputs * p_out <= 1e-10
        assert p_fail <= 1e-10

    def test_noiseless_runs_reproduce_ideal_outputs(self):
        for kind in CATALOG_KINDS:
            p_out, p_fail = simulate_circuit(catalog(kind), z_only(0.0),
                                             kmax=1)
            assert p_out <= 1e-12
            assert p_fail <= 1e-12


class TestUndetectedErrorSets:
    def test_counts(self):
        c15 = catalog("fifteen_to_one")
        c20 = catalog("twenty_to_four")
        c8 = catalog("eight_to_ccz")
        start = time.monotonic()
        assert undetected_error_sets(c15, 1) == 0
        assert undetected_error_sets(c15, 2) == 0
        assert undetected_error_sets(c15, 3) == 35
        assert undetected_error_sets(c20, 1) == 0
        assert undetected_error_sets(c20, 2) == 22
        assert undetected_error_sets(c8, 1) == 0
        assert undetected_error_sets(c8, 2) == 28
        assert time.monotonic() - start < 10.0

    def test_subset_budget(self):
        total = sum(math.comb(15, k) for k in (1, 2, 3))
        total += sum(math.comb(20, k) for k in (1, 2))
        total += sum(math.comb(8, k) for k in (1, 2))
        assert total <= 2**20

    def test_order_bound(self):
        with pytest.raises(ValueError):
            undetected_error_sets(catalog("eight_to_ccz"), 9)


class TestGadgets:
    def test_branch_rules(self):
        for kind in ("consumption", "t_measurement", "delayed_choice",
                     "auto_corrected"):
            assert verify_gadget(kind, tol=1e-9)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            verify_gadget("bogus")


class TestNoiseSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            NoiseSpec("bogus", 0.1)
        with pytest.raises(ValueError):
            NoiseSpec("z_only", 0.5)
        # the coherent kind carries an angle, not a probability
        NoiseSpec("coherent", 0.3)


class TestSimulateCircuit:
    """Frozen circuit-level results; the engine is deterministic."""

    def test_fifteen_to_one_z_only(self):
        p_out, p_fail = simulate_circuit(catalog("fifteen_to_one"),
                                         z_only(1e-4))
        np.testing.assert_allclose(p_out, 3.5010503771183636e-11, rtol=1e-9)
        np.testing.assert_allclose(p_fail, 0.0014989504198946735, rtol=1e-9)

    def test_fifteen_to_one_random_pauli(self):
        p_out, p_fail = simulate_circuit(catalog("fifteen_to_one"),
                                         random_pauli(1e-4))
        np.testing.assert_allclose(p_out, 1.0372444616892254e-11, rtol=1e-9)
        np.testing.assert_allclose(p_fail, 0.0009995334577566073, rtol=1e-9)

    def test_twenty_to_four_z_only(self):
        p_out, p_fail = simulate_circuit(catalog("twenty_to_four"),
                                         z_only(1e-4))
        np.testing.assert_allclose(p_out, 5.505101426495561e-08, rtol=1e-9)
        np.testing.assert_allclose(p_fail, 0.001997881375392363, rtol=1e-9)
        p_out3, _ = simulate_circuit(catalog("twenty_to_four"), z_only(1e-3))
        np.testing.assert_allclose(p_out3, 5.5511417342829176e-06, rtol=1e-9)

    def test_eight_to_ccz_z_only(self):
        p_out, _ = simulate_circuit(catalog("eight_to_ccz"), z_only(1e-4))
        np.testing.assert_allclose(p_out, 2.800559355719528e-07, rtol=1e-9)

    def test_fifteen_to_one_coherent(self):
        p_out, _ = simulate_circuit(catalog("fifteen_to_one"),
                                    coherent(math.asin(0.01)))
        np.testing.assert_allclose(p_out, 1.2241891177506528e-09, rtol=1e-9)

    def test_leading_order_coefficients(self):
        # At p = 1e-6 the undetected-set counts dominate: 35 p^3 for
        # 15-to-1, 22 p^2 / 4 per state for 20-to-4, 28 p^2 for 8-to-CCZ.
        p = 1e-6
        p15, _ = simulate_circuit(catalog("fifteen_to_one"), z_only(p))
        np.testing.assert_allclose(p15, 35 * p**3, rtol=0.01)
        p20, _ = simulate_circuit(catalog("twenty_to_four"), z_only(p))
        np.testing.assert_allclose(p20, 22 * p**2 / 4, rtol=0.01)
        p8, _ = simulate_circuit(catalog("eight_to_ccz"), z_only(p))
        np.testing.assert_allclose(p8, 28 * p**2, rtol=0.01)

    def test_monotone_in_noise(self):
        previous = 0.0
        for p in (2e-5, 5e-5, 1e-4, 2e-4, 5e-4):
            p_out, _ = simulate_circuit(catalog("fifteen_to_one"), z_only(p))
            assert p_out > previous
            previous = p_out
