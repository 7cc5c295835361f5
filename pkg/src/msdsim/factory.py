"""Factory-level simulation: schedules, costs, and resource reports.

Six protocol families are supported:

- ``L1_15to1``        one-level 15-to-1 block
- ``L1_15to1_small``  footprint-optimized one-level 15-to-1
- ``L2_15x15``        two-level (15-to-1)^nL1 x (15-to-1)
- ``L2_15x20``        two-level (15-to-1)^nL1 x (20-to-4)
- ``L2_15xCCZ``       two-level (15-to-1)^nL1 x (8-to-CCZ)
- ``L2_15x15_small``  footprint-optimized two-level 15-to-1 x 15-to-1

Each family maps a cataloged circuit onto a step schedule (which rotations
run together, when qubits enter, how long everything is stored), attaches
surface-code error profiles to every rotation, and runs the graded
density-matrix engine to get the output infidelity and failure rates.
Closed-form qubit/cycle costs and full-distance metrics complete the
report.

Usage::

    from msdsim.factory import FactoryConfig, simulate_factory
    from msdsim.noise import DistanceSet, PhysicalNoise
    cfg = FactoryConfig("L1_15to1", DistanceSet(7, 3, 3), PhysicalNoise(1e-4))
    report = simulate_factory(cfg)
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

import numpy as np

from .circuits import Circuit, catalog
from .density import (
    GradedDensityMatrix,
    StorageRates,
    _mask_of,
    _vec_project_checks,
    _vec_xflip,
    _vec_zsigns,
)
from .pauli import rotation_phases
from .noise import (
    DistanceSet,
    PhysicalNoise,
    level2_rotation_profile,
    logical_error_rate,
    multiqubit_rotation_profile,
    patch_storage_rates,
    single_qubit_rotation_profile,
)

FAMILIES = (
    "L1_15to1",
    "L1_15to1_small",
    "L2_15x15",
    "L2_15x20",
    "L2_15xCCZ",
    "L2_15x15_small",
)

_LEVEL2_CIRCUIT = {
    "L2_15x15": "fifteen_to_one",
    "L2_15x20": "twenty_to_four",
    "L2_15xCCZ": "eight_to_ccz",
    "L2_15x15_small": "fifteen_to_one",
}

_LEVEL2_MULTIPLIER = {"L2_15x15": 7.5, "L2_15x20": 10.0, "L2_15xCCZ": 4.0}

FULL_DISTANCE_PATCHES = {"qubits100": 231, "qubits10k": 20284}


@dataclass(frozen=True)
class FactoryConfig:
    """A factory family with its distances, physical noise, and toggles.

    consumption_prefactor_toggle selects how much storage error the level-2
    output picks up while being consumed: False (default) uses half of
    dX2 * p_L(p, dX2) per axis, True uses the full amount.
    """

    family: str
    distances: DistanceSet
    noise: PhysicalNoise
    consumption_prefactor_toggle: bool = False

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family: {self.family}")
        d = self.distances
        if self.family in _LEVEL2_CIRCUIT:
            if not d.has_level2:
                raise ValueError(f"{self.family} requires level-2 distances")
            if self.family != "L2_15x15_small" and d.nL1 is None:
                raise ValueError(f"{self.family} requires nL1")


class Level1Result(NamedTuple):
    p_out: float
    p_fail: float


@dataclass(frozen=True)
class FactoryReport:
    """Unrounded simulation results for one factory configuration."""

    protocol: str
    p_phys: float
    p_out: float
    p_fail_L1: float
    p_fail_L2: float
    qubits: float
    cycles: float
    qubitcycles_per_state: float
    d_full_100: int | None
    cost_d3_100: float | None
    d_full_10k: int | None
    cost_d3_10k: float | None


@dataclass(frozen=True)
class ScheduleStep:
    """One factory step: rotations applied, qubits entering, then storage."""

    rotations: tuple[int, ...]
    initialize: frozenset[int] = frozenset()
    measure: frozenset[int] = frozenset()
    storage: bool = True


@dataclass(frozen=True)
class Schedule:
    circuit: Circuit
    steps: tuple[ScheduleStep, ...]

    def __post_init__(self) -> None:
        seen: list[int] = []
        initialized: set[int] = set()
        for step in self.steps:
            initialized |= step.initialize
            seen.extend(step.rotations)
            for ri in step.rotations:
                if not set(self.circuit.rotations[ri].axis.support) <= initialized:
                    raise ValueError(
                        f"rotation {ri} touches an uninitialized qubit")
        if sorted(seen) != list(range(len(self.circuit.rotations))):
            raise ValueError("schedule must apply every rotation exactly once")


def _fs(*qubits: int) -> frozenset[int]:
    return frozenset(qubits)


def build_schedule(family: str) -> Schedule:
    """The step-to-rotation mapping of each family (part of the contract)."""
    if family in ("L1_15to1", "L1_15to1_small"):
        c = catalog("fifteen_to_one")
        steps = (
            ScheduleStep((0, 1, 2, 4), initialize=_fs(1, 2, 3)),
            ScheduleStep((5, 6), initialize=_fs(0)),
            ScheduleStep((3, 7, 8), initialize=_fs(4)),
            ScheduleStep((9, 10)),
            ScheduleStep((11, 12)),
            ScheduleStep((13, 14)),
            ScheduleStep((), measure=_fs(1, 2, 3, 4), storage=False),
        )
        return Schedule(c, steps)
    if family in ("L2_15x15", "L2_15x15_small"):
        c = catalog("fifteen_to_one")
        everyone = _fs(0, 1, 2, 3, 4)
        if family == "L2_15x15":
            groups = [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11),
                      (12, 13), (14,)]
        else:
            groups = [(i,) for i in range(15)]
        steps = tuple(
            ScheduleStep(g, initialize=everyone if i == 0 else frozenset(),
                         measure=_fs(1, 2, 3, 4) if i == len(groups) - 1
                         else frozenset())
            for i, g in enumerate(groups)
        )
        return Schedule(c, steps)
    if family == "L2_15x20":
        c = catalog("twenty_to_four")
        groups = [(0, 1), (3, 4), (2, 5), (6, 7), (8, 9), (10, 11),
                  (12, 13), (14, 15), (16, 17), (18, 19)]
        inits = [_fs(1, 2, 3, 4, 5, 6), _fs(0)] + [frozenset()] * 8
        steps = tuple(
            ScheduleStep(g, initialize=init,
                         measure=_fs(4, 5, 6) if i == len(groups) - 1
                         else frozenset())
            for i, (g, init) in enumerate(zip(groups, inits))
        )
        return Schedule(c, steps)
    if family == "L2_15xCCZ":
        c = catalog("eight_to_ccz")
        groups = [(0, 1), (2, 3), (4, 5), (6, 7)]
        steps = tuple(
            ScheduleStep(g, initialize=_fs(0, 1, 2, 3) if i == 0 else frozenset(),
                         measure=_fs(3) if i == len(groups) - 1 else frozenset())
            for i, g in enumerate(groups)
        )
        return Schedule(c, steps)
    raise ValueError(f"unknown family: {family}")


# ---------------------------------------------------------------------------
# closed-form costs
# ---------------------------------------------------------------------------


def qubit_cost(config: FactoryConfig) -> float:
    """Physical qubit count (including measurement ancillas)."""
    d = config.distances
    fam = config.family
    if fam == "L1_15to1":
        return 2 * (d.dX + 4 * d.dZ) * 3 * d.dX + 4 * d.dm
    if fam == "L1_15to1_small":
        return 4 * (d.dX + 4 * d.dZ) * d.dX + 2 * d.dm
    l1_blocks = (d.dX + 4 * d.dZ) * (3 * d.dX + d.dm2 / 2) + 2 * d.dm
    if fam == "L2_15x15":
        block = 2 * (d.dX2 + 4 * d.dZ2) * 3 * d.dX2
    elif fam == "L2_15x20":
        block = 2 * (4 * d.dX2 + 3 * d.dZ2) * 3 * d.dX2
    elif fam == "L2_15xCCZ":
        block = 2 * (3 * d.dX2 + d.dZ2) * 3 * d.dX2
    else:  # L2_15x15_small
        return (2 * (d.dX2 + 4 * d.dZ2) * 2 * d.dX2
                + 2 * (d.dX + 4 * d.dZ) * 3 * d.dX + 4 * d.dm
                + 2 * (4 * d.dm2**2 + d.dm2 * d.dX2))
    return (block + 2 * d.nL1 * l1_blocks
            + 2 * (20 * d.dm2**2 + 2 * d.dX2 * d.dm2))


def _t_level1(config: FactoryConfig, p_fail_L1: float) -> float:
    """Cadence at which the level-2 block can consume level-1 states."""
    d = config.distances
    if config.family == "L2_15x15_small":
        return max(2 * d.dm2, 6 * d.dm / (1.0 - p_fail_L1))
    return max(d.dm2, 6 * d.dm / (1.0 - p_fail_L1) / (d.nL1 / 2))


def cycle_cost(config: FactoryConfig, p_fail_L1: float) -> float:
    """Code cycles per protocol round (level-2 time is not retry-adjusted)."""
    if p_fail_L1 >= 1.0:
        raise ValueError("p_fail_L1 must be below 1")
    d = config.distances
    fam = config.family
    if fam == "L1_15to1":
        return 6 * d.dm / (1.0 - p_fail_L1)
    if fam == "L1_15to1_small":
        return 12 * d.dm / (1.0 - p_fail_L1)
    if fam == "L2_15x15_small":
        return 15 * _t_level1(config, p_fail_L1)
    return _LEVEL2_MULTIPLIER[fam] * _t_level1(config, p_fail_L1)


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------


# Below this output error the dense engine's float64 extraction is swamped
# by round-off from harmless branch mass (~1e-8 of trace, eps ~1e-16), so
# simulate_factory switches to the perturbative event enumeration, which is
# exact to third order in the event probabilities.
PERTURBATIVE_THRESHOLD = 1e-18


def _run_schedule(
    schedule: Schedule,
    profiles: list,
    rates: dict[int, StorageRates],
    storage_cycles: float,
    consumption: StorageRates,
    kmax: int,
) -> tuple[float, float]:
    """Run one factory schedule; return (p_out per state, p_fail)."""
    c = schedule.circuit
    rho = GradedDensityMatrix.init_plus(c.n, kmax=kmax)
    initialized: set[int] = set()
    p_fail = 0.0
    for step in schedule.steps:
        initialized |= step.initialize
        for ri in step.rotations:
            r = c.rotations[ri]
            involved_outputs = c.output_qubits & frozenset(r.axis.support)
            rho = rho.apply_faulty_rotation(
                r.axis, profiles[ri], involved_outputs,
                sign=1 if r.angle.k > 0 else -1)
        if step.storage:
            for q in sorted(initialized):
                rho = rho.apply_storage(q, rates[q], storage_cycles)
        if step.measure:
            rho, p_fail = rho.project_plus(step.measure)
    for q in sorted(c.output_qubits):
        rho = rho.apply_storage(q, consumption, 1.0)
    p_out = rho.infidelity_with_pure(c.ideal_output) / c.outputs
    return p_out, p_fail


def _ideal_prefinal(c: Circuit) -> np.ndarray:
    """Noiseless pre-measurement state: every rotation applied to |+>^n."""
    vec = np.full(2**c.n, 2.0 ** (-c.n / 2), dtype=complex)
    for r in c.rotations:
        vec = vec * rotation_phases(_mask_of(r.axis), c.n, r.angle.radians)
    return vec


def _perturbative_p_out(
    schedule: Schedule,
    profiles: list,
    rates: dict[int, StorageRates],
    storage_cycles: float,
    consumption: StorageRates,
) -> float:
    """Output infidelity per state by third-order error-event enumeration.

    Replaces the dense engine's readout when the measured infidelity falls
    below PERTURBATIVE_THRESHOLD, where float64 round-off from harmless
    branch mass swamps the true signal.  Quarter-angle error branches are
    counted as axis flips at half probability.  Z-type events commute with
    the whole circuit, so subsets of up to three are enumerated directly: a
    subset goes undetected exactly when the XOR of its masks avoids every
    check qubit, and its damage is one minus the squared overlap that the
    combined flip leaves on the ideal output.  X-type events are evaluated
    one at a time with their exact end effect (a mid-circuit bit flip
    reverses the sign of every later rotation touching that qubit).
    Neglected terms -- fourth-order subsets, interference between branches,
    X-event pairs, and acceptance renormalization -- are smaller by at
    least the total event probability, far inside the tolerance wherever
    the threshold applies.
    """
    c = schedule.circuit
    n = c.n
    checks = tuple(sorted(c.check_qubits))
    checkmask = sum(1 << q for q in checks)
    psi_pre = _ideal_prefinal(c)
    out = c.ideal_output

    z_events: dict[int, float] = {}

    def add_z(mask: int, p: float) -> None:
        if p > 0.0 and mask:
            z_events[mask] = z_events.get(mask, 0.0) + p

    x_events: list[tuple[int, float, int]] = []  # (qubit, prob, step index)
    initialized: set[int] = set()
    for si, step in enumerate(schedule.steps):
        initialized |= step.initialize
        for ri in step.rotations:
            r = c.rotations[ri]
            prof = profiles[ri]
            mask = _mask_of(r.axis)
            add_z(mask, prof.p_half + (prof.p_quarter + prof.p_mquarter) / 2)
            for q in c.output_qubits & frozenset(r.axis.support):
                add_z(1 << q, prof.p_z_output)
        if step.storage:
            for q in sorted(initialized):
                add_z(1 << q, rates[q].pZ * storage_cycles)
                x_events.append((q, rates[q].pX * storage_cycles, si))
    n_steps = len(schedule.steps)
    for q in sorted(c.output_qubits):
        add_z(1 << q, consumption.pZ)
        x_events.append((q, consumption.pX, n_steps))

    harm_cache: dict[int, float] = {}

    def z_harm(mask: int) -> float:
        if mask not in harm_cache:
            amp = np.vdot(out, _vec_zsigns(mask, n) * out)
            harm_cache[mask] = max(1.0 - abs(amp) ** 2, 0.0)
        return harm_cache[mask]

    total = 0.0
    items = sorted(z_events.items())
    for size in (1, 2, 3):
        for combo in itertools.combinations(items, size):
            mask = 0
            prob = 1.0
            for m, p in combo:
                mask ^= m
                prob *= p
            if mask & checkmask == 0:
                total += prob * z_harm(mask)

    step_of = {ri: si for si, step in enumerate(schedule.steps)
               for ri in step.rotations}
    for q, p, si in x_events:
        if p <= 0.0:
            continue
        v = psi_pre
        for ri, r in enumerate(c.rotations):
            if step_of[ri] > si and q in r.axis.support:
                v = v * rotation_phases(_mask_of(r.axis), n,
                                        -2.0 * r.angle.radians)
        v = _vec_project_checks(v, checks, n)
        v = _vec_xflip(v, q, n)
        mass = np.vdot(v, v).real
        total += p * max(mass - abs(np.vdot(out, v)) ** 2, 0.0)

    return float(total) / c.outputs


def _run_level1(config: FactoryConfig, kmax: int) -> tuple[float, float]:
    d, noise = config.distances, config.noise
    schedule = build_schedule(config.family)
    c = schedule.circuit
    l_anc = d.dX + 4 * d.dZ
    profiles = [
        single_qubit_rotation_profile(noise, d.dZ, d.dm)
        if len(r.axis.support) == 1
        else multiqubit_rotation_profile(
            noise, l_anc, d.dX, d.dm, bool(c.output_qubits & frozenset(r.axis.support)))
        for r in c.rotations
    ]
    rates = {
        q: patch_storage_rates(noise, d.dX, d.dX if q in c.output_qubits else d.dZ)
        for q in range(c.n)
    }
    half_consume = 0.5 * logical_error_rate(noise.p_phys, d.dX) * d.dX
    consumption = StorageRates(half_consume, half_consume)
    storage_cycles = 2 * d.dm if config.family == "L1_15to1_small" else d.dm
    p_out, p_fail = _run_schedule(schedule, profiles, rates, storage_cycles,
                                  consumption, kmax)
    if p_out < PERTURBATIVE_THRESHOLD:
        p_out = _perturbative_p_out(schedule, profiles, rates,
                                    storage_cycles, consumption)
    return p_out, p_fail


@lru_cache(maxsize=None)
def _level1_cached(dX: int, dZ: int, dm: int, p_phys: float, c_T: float,
                   kmax: int) -> Level1Result:
    cfg = FactoryConfig("L1_15to1", DistanceSet(dX, dZ, dm),
                        PhysicalNoise(p_phys, c_T))
    return Level1Result(*_run_level1(cfg, kmax))


def level1_output_error(config: FactoryConfig, kmax: int = 6) -> Level1Result:
    """Output error and failure rate of the embedded one-level block."""
    d, noise = config.distances, config.noise
    return _level1_cached(d.dX, d.dZ, d.dm, noise.p_phys, noise.c_T, kmax)


def _run_level2(config: FactoryConfig, level1: Level1Result,
                kmax: int) -> tuple[float, float]:
    d, noise = config.distances, config.noise
    schedule = build_schedule(config.family)
    c = schedule.circuit
    if config.family == "L2_15xCCZ":
        l_anc = 3 * d.dX2 + d.dZ2 + d.dm2
    else:
        l_anc = d.dX2 + 4 * d.dZ2 + d.dm2
    if config.family == "L2_15x15_small":
        l_move = 10.0 * d.dm2
    else:
        l_move = d.nL1 / 4 * (d.dX + 4 * d.dZ) + 10.0 * d.dm2
    profiles = [
        level2_rotation_profile(
            noise, level1.p_out, l_anc, d.dX2, d.dm2, l_move,
            bool(c.output_qubits & frozenset(r.axis.support)))
        for r in c.rotations
    ]
    rates = {
        q: patch_storage_rates(noise, d.dX2,
                               d.dX2 if q in c.output_qubits else d.dZ2)
        for q in range(c.n)
    }
    prefactor = 1.0 if config.consumption_prefactor_toggle else 0.5
    consume = prefactor * d.dX2 * logical_error_rate(noise.p_phys, d.dX2)
    consumption = StorageRates(consume, consume)
    t_l1 = _t_level1(config, level1.p_fail)
    p_out, p_fail = _run_schedule(schedule, profiles, rates, t_l1,
                                  consumption, kmax)
    if p_out < PERTURBATIVE_THRESHOLD:
        p_out = _perturbative_p_out(schedule, profiles, rates, t_l1,
                                    consumption)
    return p_out, p_fail


def protocol_name(config: FactoryConfig) -> str:
    d = config.distances
    base = f"(15-to-1)_{{{d.dX},{d.dZ},{d.dm}}}"
    if config.family == "L1_15to1":
        return base
    if config.family == "L1_15to1_small":
        return base + " small footprint"
    top = {
        "L2_15x15": "(15-to-1)",
        "L2_15x20": "(20-to-4)",
        "L2_15xCCZ": "(8-to-CCZ)",
        "L2_15x15_small": "(15-to-1)",
    }[config.family]
    top = f"{top}_{{{d.dX2},{d.dZ2},{d.dm2}}}"
    if config.family == "L2_15x15_small":
        return f"{base} x {top} small footprint"
    return f"(15-to-1)^{d.nL1}_{{{d.dX},{d.dZ},{d.dm}}} x {top}"


def family_outputs(family: str) -> int:
    """Magic states produced per round (the 20-to-4 family produces four)."""
    return 4 if family == "L2_15x20" else 1


def full_distance(p_out: float, scale: str, p_phys: float) -> int | None:
    """Smallest odd d whose storage error stays below 1% of p_out.

    scale selects the stored-patch count: 231 for a 100-qubit computation,
    20,284 for a 10^4-qubit one.  Search is bounded at d <= 99; returns
    None when no bounded distance satisfies the condition.
    """
    if p_out <= 0.0:
        raise ValueError("p_out must be positive")
    n_patches = FULL_DISTANCE_PATCHES[scale]
    for d in range(1, 100, 2):
        if n_patches * d * logical_error_rate(p_phys, d) < 0.01 * p_out:
            return d
    return None


def d3_cost(qubits: float, cycles: float, outputs: int, d: int) -> float:
    """Space-time cost in units of d^3 qubitcycles (half qubit counting)."""
    return qubits * cycles / (2.0 * outputs * d**3)


def simulate_factory(config: FactoryConfig, kmax: int = 6) -> FactoryReport:
    """Full factory run: error simulation plus closed-form cost metrics."""
    if config.family in ("L1_15to1", "L1_15to1_small"):
        p_out, p_fail_l1 = _run_level1(config, kmax)
        p_fail_l2 = 0.0
    else:
        level1 = level1_output_error(config, kmax)
        p_out, p_fail_l2 = _run_level2(config, level1, kmax)
        p_fail_l1 = level1.p_fail
    qubits = qubit_cost(config)
    cycles = cycle_cost(config, p_fail_l1)
    outputs = family_outputs(config.family)
    # One CCZ resource state substitutes four T-gate magic states, so the
    # full-distance normalization uses the per-T-equivalent error p_out/4.
    p_equiv = p_out / 4 if config.family == "L2_15xCCZ" else p_out
    d100 = d10k = None
    cost100 = cost10k = None
    if p_out > 0.0:
        d100 = full_distance(p_equiv, "qubits100", config.noise.p_phys)
        d10k = full_distance(p_equiv, "qubits10k", config.noise.p_phys)
        if d100 is not None:
            cost100 = d3_cost(qubits, cycles, outputs, d100)
        if d10k is not None:
            cost10k = d3_cost(qubits, cycles, outputs, d10k)
    return FactoryReport(
        protocol=protocol_name(config),
        p_phys=config.noise.p_phys,
        p_out=p_out,
        p_fail_L1=p_fail_l1,
        p_fail_L2=p_fail_l2,
        qubits=qubits,
        cycles=cycles,
        qubitcycles_per_state=qubits * cycles / outputs,
        d_full_100=d100,
        cost_d3_100=cost100,
        d_full_10k=d10k,
        cost_d3_10k=cost10k,
    )


def sweep(
    family: str,
    ranges: dict[str, Iterable[int]],
    noise: PhysicalNoise,
    target_p_out: float,
    consumption_prefactor_toggle: bool = False,
    kmax: int = 6,
) -> list[FactoryReport]:
    """Pareto-minimal configurations meeting the output-error target.

    ranges maps DistanceSet field names (dX, dZ, dm, and for level-2
    families dX2, dZ2, dm2, nL1) to iterables of values.  Every
    combination with a valid DistanceSet is simulated (level-1 results are
    memoized); configurations with p_out <= target_p_out are filtered to
    the Pareto front in (qubits, qubitcycles_per_state) and sorted by
    qubitcycles_per_state, ties broken by qubits then distances.
    """
    level2 = family in _LEVEL2_CIRCUIT
    keys = ["dX", "dZ", "dm"]
    if level2:
        keys += ["dX2", "dZ2", "dm2"]
        if family != "L2_15x15_small":
            keys.append("nL1")
    unknown = set(ranges) - set(keys)
    if unknown:
        raise ValueError(f"unexpected range keys: {sorted(unknown)}")
    missing = set(keys) - set(ranges)
    if missing:
        raise ValueError(f"missing range keys: {sorted(missing)}")
    candidates = []
    for combo in itertools.product(*(list(ranges[k]) for k in keys)):
        kwargs = dict(zip(keys, combo))
        try:
            distances = DistanceSet(**kwargs)
            config = FactoryConfig(family, distances, noise,
                                   consumption_prefactor_toggle)
        except ValueError:
            continue
        report = simulate_factory(config, kmax)
        if report.p_out <= target_p_out:
            sort_key = tuple(kwargs[k] for k in keys)
            candidates.append((report, sort_key))
    front = []
    for report, key in candidates:
        dominated = False
        for other, _ in candidates:
            if other is report:
                continue
            if (other.qubits <= report.qubits
                    and other.qubitcycles_per_state
                    <= report.qubitcycles_per_state
                    and (other.qubits < report.qubits
                         or other.qubitcycles_per_state
                         < report.qubitcycles_per_state)):
                dominated = True
                break
        if not dominated:
            front.append((report, key))
    front.sort(key=lambda rk: (rk[0].qubitcycles_per_state, rk[0].qubits,
                               rk[1]))
    return [report for report, _ in front]
