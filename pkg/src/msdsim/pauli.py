"""Exact algebra for n-qubit Pauli products and pi/8-multiple rotations.

A :class:`PauliProduct` is a string over ``{I, X, Y, Z}``; a
:class:`Rotation` pairs a Pauli axis with an angle ``k*pi/8`` and has the
unitary ``exp(-i * axis * k*pi/8)``.  Everything is small and dense (at most
10 qubits), intended for exact verification of distillation circuits and
lattice-surgery gadgets.

Usage::

    from msdsim.pauli import PauliProduct, Rotation, RotationAngle
    zz = PauliProduct("ZZ")
    u = Rotation(zz, RotationAngle(1)).unitary()   # exp(-i ZZ pi/8)
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

MAX_QUBITS = 10

_SINGLE = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

_ALLOWED_K = frozenset({-2, -1, 1, 2, 3, 4, 5})


@dataclass(frozen=True)
class PauliProduct:
    """An n-qubit Pauli product, e.g. ``PauliProduct("ZIZ")``."""

    letters: str

    def __post_init__(self) -> None:
        if len(self.letters) < 1:
            raise ValueError("PauliProduct needs at least one qubit")
        bad = set(self.letters) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letters: {sorted(bad)}")

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def support(self) -> tuple[int, ...]:
        """Indices (0-based) with a non-identity letter."""
        return tuple(i for i, c in enumerate(self.letters) if c != "I")

    def is_identity(self) -> bool:
        return all(c == "I" for c in self.letters)


def matrix_of(p: PauliProduct) -> np.ndarray:
    """Dense matrix of a Pauli product.

    Convention: basis index bit i (little-endian) is qubit i, and qubit i is
    ``letters[i]``; hence the Kronecker product runs over the letters in
    reverse (qubit n-1 contributes the leftmost factor).
    """
    if p.n > MAX_QUBITS:
        raise ValueError(f"too many qubits: {p.n} > {MAX_QUBITS}")
    return reduce(np.kron, (_SINGLE[c] for c in reversed(p.letters)))


def commutes(p: PauliProduct, q: PauliProduct) -> bool:
    """True iff the products commute (even number of anticommuting positions)."""
    if p.n != q.n:
        raise ValueError(f"length mismatch: {p.n} vs {q.n}")
    clashes = sum(
        1
        for a, b in zip(p.letters, q.letters)
        if a != "I" and b != "I" and a != b
    )
    return clashes % 2 == 0


@dataclass(frozen=True)
class RotationAngle:
    """An angle ``k * pi/8`` on the discrete lattice used by the circuits.

    k covers every rotation and error in scope: +-pi/8 rotations, and errors
    that shift k by -2, +2 or +4 (P_{-pi/4}, P_{pi/4}, P_{pi/2}).
    """

    k: int

    def __post_init__(self) -> None:
        if self.k not in _ALLOWED_K:
            raise ValueError(f"k={self.k} outside supported set {sorted(_ALLOWED_K)}")

    @property
    def radians(self) -> float:
        return self.k * np.pi / 8


@dataclass(frozen=True)
class Rotation:
    """A Pauli product rotation P_phi = exp(-i * P * phi) with phi = k*pi/8."""

    axis: PauliProduct
    angle: RotationAngle

    def unitary(self) -> np.ndarray:
        return rotation_unitary(self)


def rotation_unitary(r: Rotation) -> np.ndarray:
    """exp(-i * axis * k*pi/8) via the cos/sin closed form."""
    phi = r.angle.radians
    m = matrix_of(r.axis)
    dim = m.shape[0]
    return np.cos(phi) * np.eye(dim, dtype=np.complex128) - 1j * np.sin(phi) * m


def rotation_phases(mask: int, n: int, phi: float) -> np.ndarray:
    """Diagonal of exp(-i * Z_mask * phi) for a Z-type axis given as a bitmask.

    Bit i of ``mask`` marks a Z on qubit i; basis index bit i is qubit i's
    computational value.  Z-type rotations are diagonal, so circuits made of
    them can be applied as elementwise phase multiplications.
    """
    par = parity_lookup(mask, n)
    signs = 1.0 - 2.0 * par  # (+1) for even overlap, (-1) for odd
    return np.exp(-1j * phi * signs)


def parity_lookup(mask: int, n: int) -> np.ndarray:
    """parity(popcount(x & mask)) for every basis index x in [0, 2^n)."""
    x = np.arange(1 << n, dtype=np.uint32) & np.uint32(mask)
    # O(N log N) parity fold
    for shift in (16, 8, 4, 2, 1):
        x ^= x >> np.uint32(shift)
    return (x & 1).astype(np.int8)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff matrices (or vectors) agree up to a single global phase."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        return False
    ia = np.argmax(np.abs(a))
    if abs(a.flat[ia]) < tol or abs(b.flat[ia]) < tol:
        # fall back: both (near) zero at the reference entry
        return bool(np.allclose(a, b, atol=tol))
    phase = b.flat[ia] / a.flat[ia]
    if abs(abs(phase) - 1.0) > tol:
        return False
    return bool(np.max(np.abs(a * phase - b)) <= tol)
