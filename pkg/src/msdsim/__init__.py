"""Simulator and resource estimator for magic-state distillation factories.

Subpackages:

- ``pauli``:    Pauli products, pi/8-family rotations, phase lookups.
- ``density``:  exact density-matrix engine graded by error count.
- ``circuits``: distillation circuit catalog, noise models, gadget checks.
- ``noise``:    physical/logical error-rate models and rotation profiles.
- ``factory``:  factory schedules, cost formulas, simulation, and sweeps.
- ``cli``:      command-line interface (``msdsim ...``).
"""
from __future__ import annotations

__version__ = "0.1.0"
