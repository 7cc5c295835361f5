"""Catalog of distillation circuits, their algebraic checks, and noisy runs.

The catalog holds six Z-type rotation sequences: the 16-rotation identity,
the 15-to-1 circuit, the 20-to-4 circuit, the 15-rotation 4-qubit identity,
the 8-to-CCZ circuit, and the 7-rotation CCZ decomposition.  All angles are
+-pi/8.  Qubit order inside each axis string: letter i is qubit i; check and
output qubit indices are 0-based.

Also here: unitary equivalence checks, brute-force undetected-error-set
counting, full density-matrix circuit simulations under three noise models,
and branch-wise verification of the four lattice-surgery gadgets
(state consumption, faulty T measurement, delayed-choice rotation, and the
auto-corrected rotation).

Usage::

    from msdsim.circuits import catalog, simulate_circuit, z_only
    c = catalog("fifteen_to_one")
    p_out, p_fail = simulate_circuit(c, z_only(1e-4))
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .density import (
    GradedDensityMatrix,
    RotationErrorProfile,
    _vec_project_checks,
    pure_state_infidelity,
)
from .pauli import (
    PauliProduct,
    Rotation,
    RotationAngle,
    equal_up_to_phase,
    matrix_of,
    parity_lookup,
    rotation_unitary,
)

SQ2 = np.sqrt(0.5)
PLUS = np.array([SQ2, SQ2], dtype=np.complex128)
# |m> consumed by pi/8 gadgets, and the conjugate |m~> produced by distillation
MAGIC = np.array([SQ2, SQ2 * np.exp(1j * np.pi / 4)], dtype=np.complex128)
MAGIC_CONJ = np.array([SQ2, SQ2 * np.exp(-1j * np.pi / 4)], dtype=np.complex128)
ZERO = np.array([1.0, 0.0], dtype=np.complex128)


def product_state(qubit_states: list[np.ndarray]) -> np.ndarray:
    """Kron of per-qubit states, little-endian (qubit 0 = lowest index bit)."""
    return reduce(np.kron, reversed([np.asarray(s) for s in qubit_states]))


def ccz_plus_state() -> np.ndarray:
    """CCZ applied to |+++> on qubits 0-2, i.e. signed uniform amplitudes."""
    idx = np.arange(8)
    signs = np.where((idx & 1) * ((idx >> 1) & 1) * ((idx >> 2) & 1) == 1, -1.0, 1.0)
    return signs / np.sqrt(8.0)


@dataclass(frozen=True)
class Circuit:
    """A post-selected Z-type rotation circuit with designated outputs."""

    name: str
    n: int
    rotations: tuple[Rotation, ...]
    check_qubits: frozenset[int]
    output_qubits: frozenset[int]
    outputs: int
    ideal_output: np.ndarray

    def __post_init__(self) -> None:
        touched: set[int] = set()
        for r in self.rotations:
            if r.axis.n != self.n:
                raise ValueError("rotation width differs from circuit width")
            if set(r.axis.letters) - {"I", "Z"}:
                raise ValueError("catalog circuits are Z-type only")
            touched.update(r.axis.support)
        if self.check_qubits & self.output_qubits:
            raise ValueError("check and output sets overlap")
        for q in self.check_qubits:
            if q not in touched:
                raise ValueError(f"check qubit {q} appears in no rotation")
        if self.ideal_output.shape != (1 << self.n,):
            raise ValueError("ideal output has the wrong dimension")


def _zrot(n: int, qubits: tuple[int, ...], sign: int) -> Rotation:
    letters = "".join("Z" if i in qubits else "I" for i in range(n))
    return Rotation(PauliProduct(letters), RotationAngle(sign))


# --- 15-to-1: five qubits, checks on 2-5 (indices 1-4), output on 1 (index 0)
_FIFTEEN = [
    ((1,), 1), ((2,), 1), ((3,), 1), ((4,), 1),
    ((1, 2, 3), 1),
    ((0, 1, 2), 1), ((0, 1, 3), 1),
    ((2, 3, 4), 1), ((0, 3, 4), 1),
    ((0, 2, 3), 1), ((0, 2, 4), 1),
    ((0, 1, 4), 1), ((0, 1, 2, 3, 4), 1),
    ((1, 3, 4), 1), ((1, 2, 4), 1),
]

# --- 20-to-4: seven qubits, checks on 5-7 (indices 4-6), outputs 1-4 (0-3).
# The first two rotations avoid qubit 1, which is initialized one step later.
_TWENTY = [
    ((4,), -1), ((5,), -1),
    ((0, 4, 5), 1), ((0, 4, 6), -1), ((0, 5, 6), -1),
    ((0, 1, 2, 3, 4), 1), ((0, 1, 2, 3, 5), 1), ((0, 1, 2, 3, 6), -1),
    ((0, 1, 2, 3, 4, 5, 6), -1),
    ((6,), 1), ((4, 5, 6), 1),
    ((1, 4, 5), 1), ((1, 4, 6), -1), ((1, 5, 6), -1),
    ((2, 4, 5), 1), ((2, 4, 6), -1), ((2, 5, 6), -1),
    ((3, 4, 5), 1), ((3, 4, 6), -1), ((3, 5, 6), -1),
]

# --- 8-to-CCZ: four qubits, check on 4 (index 3), outputs 1-3 (0-2)
_EIGHT = [
    ((0, 3), 1), ((1, 3), 1), ((2, 3), 1),
    ((3,), -1),
    ((0, 1, 3), -1), ((0, 2, 3), -1), ((1, 2, 3), -1),
    ((0, 1, 2, 3), 1),
]

# --- 7-rotation CCZ decomposition (padded to four qubits for comparisons)
_CCZ7 = [
    ((0,), 1), ((1,), 1), ((2,), 1),
    ((0, 1), -1), ((0, 2), -1), ((1, 2), -1),
    ((0, 1, 2), 1),
]

# --- 15-rotation identity on 4 qubits: the 8-to-CCZ rotations flanked by the
# rotations that cancel against the CCZ decomposition
_IDENTITY15_4Q = (
    [((0,), -1), ((1,), -1), ((2,), -1)]
    + _EIGHT
    + [((0, 1), 1), ((0, 2), 1), ((1, 2), 1), ((0, 1, 2), -1)]
)


def _build(name, n, spec, checks, outs, outputs, ideal) -> Circuit:
    return Circuit(
        name=name,
        n=n,
        rotations=tuple(_zrot(n, q, s) for q, s in spec),
        check_qubits=frozenset(checks),
        output_qubits=frozenset(outs),
        outputs=outputs,
        ideal_output=ideal,
    )


def catalog(kind: str) -> Circuit:
    """Return one of the six cataloged circuits by name."""
    plus5 = product_state([PLUS] * 5)
    if kind == "fifteen_to_one":
        ideal = product_state([MAGIC_CONJ] + [PLUS] * 4)
        return _build(kind, 5, _FIFTEEN, {1, 2, 3, 4}, {0}, 1, ideal)
    if kind == "identity16":
        spec = [((0,), 1)] + _FIFTEEN
        return _build(kind, 5, spec, set(), set(), 1, plus5)
    if kind == "twenty_to_four":
        ideal = product_state([MAGIC_CONJ] * 4 + [PLUS] * 3)
        return _build(kind, 7, _TWENTY, {4, 5, 6}, {0, 1, 2, 3}, 4, ideal)
    if kind == "eight_to_ccz":
        ideal = product_state([ccz_plus_state(), PLUS])
        return _build(kind, 4, _EIGHT, {3}, {0, 1, 2}, 1, ideal)
    if kind == "ccz7":
        ideal = product_state([ccz_plus_state(), PLUS])
        return _build(kind, 4, _CCZ7, set(), {0, 1, 2}, 1, ideal)
    if kind == "identity15_4q":
        return _build(kind, 4, _IDENTITY15_4Q, set(), set(), 1,
                      product_state([PLUS] * 4))
    raise ValueError(f"unknown circuit kind: {kind}")


CATALOG_KINDS = (
    "identity16",
    "fifteen_to_one",
    "twenty_to_four",
    "identity15_4q",
    "eight_to_ccz",
    "ccz7",
)


def format_circuit(c: Circuit) -> str:
    """Plain-text table, one rotation per line: sign and axis letters."""
    lines = [f"# {c.name}: {c.n} qubits, checks {sorted(c.check_qubits)}, "
             f"outputs {sorted(c.output_qubits)}"]
    for r in c.rotations:
        sign = "+" if r.angle.k > 0 else "-"
        lines.append(f"{sign} {r.axis.letters}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# algebraic checks
# ---------------------------------------------------------------------------


def compose_unitary(item, n: int | None = None) -> np.ndarray:
    """Product unitary of a Circuit or rotation list (first rotation acts first)."""
    rotations = item.rotations if isinstance(item, Circuit) else tuple(item)
    if isinstance(item, Circuit):
        n = item.n
    elif n is None:
        if not rotations:
            raise ValueError("cannot infer width of an empty rotation list")
        n = rotations[0].axis.n
    u = np.eye(1 << n, dtype=np.complex128)
    for r in rotations:
        u = rotation_unitary(r) @ u
    return u


def verify_equivalence(a, b, tol: float = 1e-9) -> bool:
    """True iff the composed unitaries agree up to global phase within tol."""
    na = a.n if isinstance(a, Circuit) else (a[0].axis.n if a else None)
    nb = b.n if isinstance(b, Circuit) else (b[0].axis.n if b else None)
    n = na if na is not None else nb
    if n is None:
        return True
    if na is not None and nb is not None and na != nb:
        raise ValueError("qubit counts differ")
    return equal_up_to_phase(compose_unitary(a, n), compose_unitary(b, n), tol)


def _mask(axis: PauliProduct) -> int:
    return sum(1 << i for i in axis.support)


def undetected_error_sets(c: Circuit, order: int) -> int:
    """Count order-sized rotation subsets whose joint P_{pi/2} error passes.

    For each subset, a P_{pi/2} (Pauli Z-product) error is inserted at those
    rotations in the noiseless circuit; the subset counts if every check
    X-measurement still returns +1 and the output state's fidelity with the
    ideal output drops below 1 - 1e-9.
    """
    if order > len(c.rotations):
        raise ValueError("order exceeds the rotation count")
    checks = tuple(sorted(c.check_qubits))
    ideal = c.ideal_output
    masks = [_mask(r.axis) for r in c.rotations]
    count = 0
    for subset in itertools.combinations(range(len(masks)), order):
        em = 0
        for j in subset:
            em ^= masks[j]
        # the Z-product error commutes with every rotation, so the final
        # state is the error applied to the noiseless output
        signs = 1.0 - 2.0 * parity_lookup(em, c.n).astype(np.float64)
        state = signs * ideal
        if checks:
            projected = _vec_project_checks(state, checks, c.n)
            if float(np.vdot(projected, projected).real) < 1.0 - 1e-9:
                continue  # some check flipped: detected
            state = projected
        overlap = abs(np.vdot(ideal, state)) ** 2
        if overlap < 1.0 - 1e-9:
            count += 1
    return count


# ---------------------------------------------------------------------------
# circuit-level noise simulation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoiseSpec:
    """Circuit-level noise model: kind in {z_only, random_pauli, coherent}."""

    kind: str
    value: float

    def __post_init__(self) -> None:
        if self.kind not in ("z_only", "random_pauli", "coherent"):
            raise ValueError(f"unknown noise kind: {self.kind}")
        if self.kind != "coherent" and not 0.0 <= self.value <= 0.1:
            raise ValueError("probability outside [0, 0.1]")


def z_only(p: float) -> NoiseSpec:
    return NoiseSpec("z_only", p)


def random_pauli(p: float) -> NoiseSpec:
    return NoiseSpec("random_pauli", p)


def coherent(phi: float) -> NoiseSpec:
    return NoiseSpec("coherent", phi)


def simulate_circuit(
    c: Circuit, noise: NoiseSpec, kmax: int = 6
) -> tuple[float, float]:
    """Run the circuit under the given noise; return (p_out per state, p_fail).

    z_only applies a P_{pi/2} error with probability p after each rotation;
    random_pauli applies each of P_{pi/2}, P_{pi/4}, P_{-pi/4} with
    probability p/3; coherent over-rotates every gate by a fixed excess
    angle.  p_out is the infidelity of the projected state with the ideal
    output, divided by the number of output states.
    """
    if noise.kind == "coherent":
        psi = product_state([PLUS] * c.n)
        dim = 1 << c.n
        for r in c.rotations:
            signs = 1.0 - 2.0 * parity_lookup(_mask(r.axis), c.n).astype(np.float64)
            psi = np.exp(-1j * (r.angle.radians + noise.value * np.sign(r.angle.k))
                         * signs) * psi
        p_fail = 0.0
        if c.check_qubits:
            psi = _vec_project_checks(psi, tuple(sorted(c.check_qubits)), c.n)
            p_fail = 1.0 - float(np.vdot(psi, psi).real)
        assert psi.shape == (dim,)
        return pure_state_infidelity(psi, c.ideal_output) / c.outputs, p_fail

    if noise.kind == "z_only":
        profile = RotationErrorProfile(noise.value, 0.0, 0.0, 0.0)
    else:
        third = noise.value / 3.0
        profile = RotationErrorProfile(third, third, third, 0.0)

    rho = GradedDensityMatrix.init_plus(c.n, kmax=kmax)
    for r in c.rotations:
        rho = rho.apply_faulty_rotation(
            r.axis, profile, frozenset(), sign=int(np.sign(r.angle.k))
        )
    p_fail = 0.0
    if c.check_qubits:
        rho, p_fail = rho.project_plus(c.check_qubits)
    p_out = rho.infidelity_with_pure(c.ideal_output) / c.outputs
    return p_out, p_fail


# ---------------------------------------------------------------------------
# gadget verification
# ---------------------------------------------------------------------------
#
# All four gadgets perform P_{pi/8} on a data register via one or more Pauli
# product measurements and destructive ancilla readouts, with Pauli(-only or
# Pauli+Clifford) corrections.  Branch rules implemented here:
#
# consumption   data (x) |m>; measure P(x)Z -> s; measure ancilla X -> t;
#               corrections: Pauli P iff t=-1, P_{pi/4} iff s=-1.
# t_measurement data (x) |+>; measure P(x)Z -> s; apply T (s=+1) or
#               T-dagger (s=-1) to the ancilla, measure it in X -> t;
#               correction: Pauli P iff t=-1 (never a Clifford).
#               An ancilla X error before the T step turns every branch
#               into P_{-pi/8} (an S-dagger error); a Z error gives a
#               Pauli P error.
# delayed_choice data (x) |m> (x) |+>; measure P(x)Z(x)Z -> s; measure the
#               magic ancilla in X -> t; afterwards EITHER read the extra
#               qubit in Z (outcome e=+-1): rotation performed, corrections
#               Pauli P iff t=-1 and P_{pi/4} iff s*e=-1; OR read it in X
#               (outcome x): no operation, correction Pauli P iff x=-1.
# auto_corrected data (x) |m> (x) |0>; measure P(x)Z (data,magic) -> a and
#               Z(x)Y (magic,zero) -> b simultaneously; measure magic in X
#               -> c; read the zero qubit in Z if a=+1 (outcome z in {0,1}),
#               in X if a=-1 (outcome x); correction: Pauli P iff
#               (a=+1 and (c=-1) xor (z=1)) or (a=-1 and (c=-1) xor (x=-1)
#               xor (b=-1)).  Never a Clifford correction.


def _op_on(register_n: int, factors: dict[int, str]) -> np.ndarray:
    letters = "".join(factors.get(i, "I") for i in range(register_n))
    return matrix_of(PauliProduct(letters))


def _project_outcome(state: np.ndarray, qubit: int, n: int,
                       outcome: np.ndarray) -> np.ndarray:
    """Project one qubit onto the given (normalized) 1-qubit outcome state."""
    proj = np.outer(outcome, outcome.conj())
    return _apply_single(state, proj, qubit, n)


def _apply_single(state: np.ndarray, op2: np.ndarray, qubit: int,
                  n: int) -> np.ndarray:
    t = state.reshape((2,) * n)
    ax = n - 1 - qubit
    t = np.moveaxis(t, ax, 0)
    t = np.tensordot(op2, t, axes=(1, 0))
    return np.moveaxis(t, 0, ax).reshape(-1)


def _rot_on_data(data_n: int, p_support: tuple[int, ...], k8: float,
                 register_n: int) -> np.ndarray:
    """exp(-i * P * k8*pi/8) acting on the data qubits of the register."""
    letters = "".join("Z" if i in p_support else "I" for i in range(register_n))
    p = PauliProduct(letters)
    theta = k8 * np.pi / 8
    dim = 1 << register_n
    return np.cos(theta) * np.eye(dim) - 1j * np.sin(theta) * matrix_of(p)


def _test_states(data_n: int, rng: np.random.Generator, count: int = 4):
    states = [product_state([PLUS] * data_n)]
    for _ in range(count):
        v = rng.normal(size=1 << data_n) + 1j * rng.normal(size=1 << data_n)
        states.append(v / np.linalg.norm(v))
    return states


def _proportional(actual: np.ndarray, expected: np.ndarray,
                  tol: float = 1e-9) -> bool:
    na, ne = np.linalg.norm(actual), np.linalg.norm(expected)
    if na < 1e-8 or ne < 1e-8:
        return False
    return equal_up_to_phase(actual / na, expected / ne, tol)


def _xstate(t: int) -> np.ndarray:
    return np.array([SQ2, t * SQ2], dtype=np.complex128)


def verify_gadget(kind: str, seed: int = 7, tol: float = 1e-9) -> bool:
    """Check a gadget's branch rules on fixed plus random data states."""
    rng = np.random.default_rng(seed)
    checkers = {
        "consumption": _check_consumption,
        "t_measurement": _check_t_measurement,
        "delayed_choice": _check_delayed_choice,
        "auto_corrected": _check_auto_corrected,
    }
    if kind not in checkers:
        raise ValueError(f"unknown gadget kind: {kind}")
    for data_n, support in ((1, (0,)), (2, (0, 1))):
        for psi in _test_states(data_n, rng):
            if not checkers[kind](psi, data_n, support, tol):
                return False
    return True


def _check_consumption(psi, data_n, support, tol) -> bool:
    n = data_n + 1
    anc = data_n
    start = np.kron(MAGIC, psi)  # little-endian: ancilla is the high qubit
    ideal = _apply_register_rot(psi, support, 1.0, data_n)
    meas = _op_on(n, {**{i: "Z" for i in support}, anc: "Z"})
    dim = 1 << n
    for s in (1, -1):
        proj = 0.5 * (np.eye(dim) + s * meas)
        mid = proj @ start
        for t in (1, -1):
            branch = _project_outcome(mid, anc, n, _xstate(t))
            data = _extract_data(branch, anc, n, _xstate(t))
            if data is None:
                return False
            if t == -1:
                data = _apply_register_rot(data, support, 4.0, data_n)
            if s == -1:
                data = _apply_register_rot(data, support, 2.0, data_n)
            if not _proportional(data, ideal, tol):
                return False
    return True


def _check_t_measurement(psi, data_n, support, tol) -> bool:
    n = data_n + 1
    anc = data_n
    ideal = _apply_register_rot(psi, support, 1.0, data_n)
    sdag_ideal = _apply_register_rot(psi, support, -1.0, data_n)
    meas = _op_on(n, {**{i: "Z" for i in support}, anc: "Z"})
    dim = 1 << n
    start = np.kron(PLUS, psi)
    for injected, expected in ((None, ideal), ("X", sdag_ideal),
                               ("Z", None)):
        for s in (1, -1):
            mid = (0.5 * (np.eye(dim) + s * meas)) @ start
            if injected is not None:
                mid = _apply_single(mid, matrix_of(PauliProduct(injected)),
                                    anc, n)
            tgate = np.array([[1.0, 0.0], [0.0, np.exp(1j * s * np.pi / 4)]])
            mid = _apply_single(mid, tgate, anc, n)
            for t in (1, -1):
                data = _extract_data(
                    _project_outcome(mid, anc, n, _xstate(t)), anc, n,
                    _xstate(t))
                if data is None:
                    return False
                if t == -1:
                    data = _apply_register_rot(data, support, 4.0, data_n)
                want = expected
                if want is None:  # Z injection: a Pauli P error on the data
                    want = _apply_register_rot(ideal, support, 4.0, data_n)
                if not _proportional(data, want, tol):
                    return False
    return True


def _check_delayed_choice(psi, data_n, support, tol) -> bool:
    n = data_n + 2
    anc, extra = data_n, data_n + 1
    ideal = _apply_register_rot(psi, support, 1.0, data_n)
    meas = _op_on(n, {**{i: "Z" for i in support}, anc: "Z", extra: "Z"})
    dim = 1 << n
    start = np.kron(PLUS, np.kron(MAGIC, psi))
    for s in (1, -1):
        mid0 = (0.5 * (np.eye(dim) + s * meas)) @ start
        for t in (1, -1):
            mid = _project_outcome(mid0, anc, n, _xstate(t))
            # later choice 1: Z readout of the extra qubit -> rotation
            for e, ket in ((1, ZERO), (-1, np.array([0.0, 1.0]))):
                data = _extract_data2(mid, anc, extra, n,
                                      _xstate(t), ket)
                if data is None:
                    return False
                if t == -1:
                    data = _apply_register_rot(data, support, 4.0, data_n)
                if s * e == -1:
                    data = _apply_register_rot(data, support, 2.0, data_n)
                if not _proportional(data, ideal, tol):
                    return False
            # later choice 2: X readout -> no operation
            for x in (1, -1):
                data = _extract_data2(mid, anc, extra, n,
                                      _xstate(t), _xstate(x))
                if data is None:
                    return False
                if x == -1:
                    data = _apply_register_rot(data, support, 4.0, data_n)
                if not _proportional(data, psi, tol):
                    return False
    return True


def _check_auto_corrected(psi, data_n, support, tol) -> bool:
    n = data_n + 2
    anc, zero = data_n, data_n + 1
    ideal = _apply_register_rot(psi, support, 1.0, data_n)
    meas_a = _op_on(n, {**{i: "Z" for i in support}, anc: "Z"})
    meas_b = _op_on(n, {anc: "Z", zero: "Y"})
    dim = 1 << n
    start = np.kron(ZERO, np.kron(MAGIC, psi))
    for a in (1, -1):
        for b in (1, -1):
            mid0 = (0.5 * (np.eye(dim) + a * meas_a)) @ start
            mid0 = (0.5 * (np.eye(dim) + b * meas_b)) @ mid0
            for c in (1, -1):
                mid = _project_outcome(mid0, anc, n, _xstate(c))
                if a == 1:
                    readouts = [(ZERO, 0), (np.array([0.0, 1.0]), 1)]
                    for ket, z in readouts:
                        data = _extract_data2(mid, anc, zero, n,
                                              _xstate(c), ket)
                        if data is None:
                            return False
                        if (c == -1) ^ (z == 1):
                            data = _apply_register_rot(data, support, 4.0,
                                                       data_n)
                        if not _proportional(data, ideal, tol):
                            return False
                else:
                    for x in (1, -1):
                        data = _extract_data2(mid, anc, zero, n,
                                              _xstate(c), _xstate(x))
                        if data is None:
                            return False
                        if (c == -1) ^ (x == -1) ^ (b == -1):
                            data = _apply_register_rot(data, support, 4.0,
                                                       data_n)
                        if not _proportional(data, ideal, tol):
                            return False
    return True


def _apply_register_rot(state: np.ndarray, support: tuple[int, ...],
                        k8: float, n: int) -> np.ndarray:
    mask = sum(1 << i for i in support)
    signs = 1.0 - 2.0 * parity_lookup(mask, n).astype(np.float64)
    return np.exp(-1j * (k8 * np.pi / 8) * signs) * state


def _extract_data(state: np.ndarray, anc: int, n: int,
                  anc_state: np.ndarray) -> np.ndarray | None:
    """Factor out one ancilla qubit known to be in anc_state."""
    return _extract_many(state, [(anc, anc_state)], n)


def _extract_data2(state, anc1, anc2, n, s1, s2) -> np.ndarray | None:
    return _extract_many(state, [(anc1, s1), (anc2, s2)], n)


def _extract_many(state: np.ndarray, ancs: list[tuple[int, np.ndarray]],
                  n: int) -> np.ndarray | None:
    """Contract known ancilla states out of the register (highest qubit first).

    Returns the remaining data state, or None when the branch has
    (numerically) zero probability.
    """
    t = state.reshape((2,) * n)
    cur_n = n
    for qubit, anc_state in sorted(ancs, key=lambda kv: -kv[0]):
        ax = cur_n - 1 - qubit
        t = np.tensordot(anc_state.conj(), np.moveaxis(t, ax, 0), axes=(0, 0))
        cur_n -= 1
    vec = t.reshape(-1)
    if np.linalg.norm(vec) < 1e-8:
        return None
    return vec
