"""Operational and denotational semantics of patterns.

``run`` executes a pattern on a concrete input, either sampling outcomes
with Born weights (seeded NumPy ``default_rng``, i.e. PCG64) or forcing
a fixed outcome bitstring.  States stay unnormalized throughout: the
squared norm of the final state is the probability of the realized
branch (for a normalized input).

``kraus_map`` turns a pattern into its completely positive
trace-preserving map as a list of branch maps (Kraus operators), one
per outcome bitstring; branch operators are obtained by evolving the
whole computational basis of the system space at once.  Maps are
compared through their Choi matrices, which is insensitive to Kraus
relabelling, and operator comparisons are insensitive to global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import qcore
from .errors import AdqcError, CapacityError
from .pattern import (
    Correct,
    Interact,
    LocalClifford,
    Measure,
    Pattern,
    Prep,
    Shift,
    validate,
)
from .qcore import ATOL, StateVector

MAX_BRANCH_QUBITS = 16


@dataclass
class BranchMap:
    """One Kraus operator, indexed by the outcome bits that produced it.

    ``bits[i]`` is the outcome of the i-th measurement in execution
    order; ``probability`` is tr(K^dag K) / 2^{|S|}, the branch weight
    for a maximally mixed input.
    """

    bits: str
    operator: np.ndarray
    probability: float


@dataclass
class CptpMap:
    """A pattern denotation: rho -> sum_b K_b rho K_b^dag."""

    branches: list[BranchMap]
    dim: int

    def kraus_operators(self) -> list[np.ndarray]:
        return [b.operator for b in self.branches]

    def completeness_defect(self) -> float:
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for b in self.branches:
            acc += b.operator.conj().T @ b.operator
        return float(np.max(np.abs(acc - np.eye(self.dim))))

    def is_complete(self, tol: float = ATOL) -> bool:
        return self.completeness_defect() <= tol

    def choi(self) -> np.ndarray:
        """Unnormalized Choi matrix sum_b vec(K_b) vec(K_b)^dag."""
        d2 = self.dim * self.dim
        out = np.zeros((d2, d2), dtype=complex)
        for b in self.branches:
            v = b.operator.reshape(-1)
            out += np.outer(v, v.conj())
        return out


def choi_distance(m1: CptpMap, m2: CptpMap) -> float:
    """Frobenius distance between Choi matrices."""
    return float(np.linalg.norm(m1.choi() - m2.choi()))


def compose_maps(m2: CptpMap, m1: CptpMap) -> CptpMap:
    """The map 'm1 then m2' with Kraus products K2 K1."""
    if m1.dim != m2.dim:
        raise AdqcError(f"dimension mismatch {m1.dim} vs {m2.dim}")
    branches = [
        BranchMap(b1.bits + b2.bits, b2.operator @ b1.operator, 0.0)
        for b1 in m1.branches
        for b2 in m2.branches
    ]
    for b in branches:
        b.probability = float(np.trace(b.operator.conj().T @ b.operator).real) / m1.dim
    return CptpMap(branches, m1.dim)


def tensor_maps(m1: CptpMap, m2: CptpMap) -> CptpMap:
    """Tensor of maps, m1 on the more significant factor."""
    dim = m1.dim * m2.dim
    branches = [
        BranchMap(b1.bits + b2.bits, np.kron(b1.operator, b2.operator), b1.probability * b2.probability)
        for b1 in m1.branches
        for b2 in m2.branches
    ]
    return CptpMap(branches, dim)


class _Register:
    """Mutable simulation register with an optional batch axis.

    ``amps`` has shape ``batch_shape + (2,) * n`` for the ``n`` live
    qubits in ``labels``.
    """

    def __init__(self, amps: np.ndarray, labels: list[str]):
        self.amps = amps
        self.labels = labels

    def axis(self, q: str) -> int:
        return self.labels.index(q)

    def add_qubit(self, q: str, ket: np.ndarray):
        if len(self.labels) >= qcore.MAX_QUBITS:
            raise CapacityError(f"register would exceed {qcore.MAX_QUBITS} qubits")
        self.amps = np.multiply.outer(self.amps, ket)
        self.labels.append(q)

    def apply(self, gate: np.ndarray, qubits: Sequence[str]):
        pos = [self.axis(q) for q in qubits]
        self.amps = qcore.apply_gate_tensor(self.amps, len(self.labels), gate, pos)

    def project(self, q: str, bra: np.ndarray):
        pos = self.axis(q)
        self.amps = qcore.project_tensor(self.amps, len(self.labels), pos, bra)
        self.labels.pop(pos)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def outcome_weights(self, q: str, bras: tuple[np.ndarray, np.ndarray]) -> tuple[float, float]:
        pos = self.axis(q)
        n = len(self.labels)
        w = []
        for bra in bras:
            proj = qcore.project_tensor(self.amps, n, pos, bra)
            w.append(float(np.vdot(proj, proj).real))
        return w[0], w[1]


def _prep_ket(cmd: Prep) -> np.ndarray:
    theta, phi = cmd.angles()
    return qcore.bloch_ket(theta, phi)


def _measure_bras(spec, outcome: int) -> np.ndarray:
    plus, minus = qcore.plane_kets(spec.plane, spec.angle)
    ket = plus if outcome == 0 else minus
    return ket.conj()


class _OutcomeSource:
    """Either a seeded sampler or a forced bitstring."""

    def __init__(self, outcomes):
        self.rng = None
        self.forced: list[int] | None = None
        self.used = 0
        if outcomes is None:
            self.rng = np.random.default_rng(0)
        elif isinstance(outcomes, (int, np.integer)):
            self.rng = np.random.default_rng(int(outcomes))
        elif isinstance(outcomes, np.random.Generator):
            self.rng = outcomes
        else:
            bits = [int(b) for b in outcomes]
            if any(b not in (0, 1) for b in bits):
                raise AdqcError(f"forced branch {outcomes!r} is not a bitstring")
            self.forced = bits

    def draw(self, w0: float, w1: float) -> int:
        if self.forced is not None:
            if self.used >= len(self.forced):
                raise AdqcError("forced branch shorter than the number of measurements")
            bit = self.forced[self.used]
            self.used += 1
            return bit
        total = w0 + w1
        if total <= 0.0:
            return 0
        self.used += 1
        return int(self.rng.random() * total >= w0)


def _execute(p: Pattern, register: _Register, source: _OutcomeSource) -> dict[str, int]:
    """Run the command sequence in place; returns the outcome map."""
    gamma: dict[str, int] = {}
    for cmd in p.commands:
        if isinstance(cmd, Prep):
            register.add_qubit(cmd.qubit, _prep_ket(cmd))
        elif isinstance(cmd, Interact):
            register.apply(qcore.ETILDE, [cmd.ancilla, cmd.system])
        elif isinstance(cmd, Measure):
            spec = cmd.spec
            # Dependent measurement = apply Z^t then X^s, then project.
            if spec.t.evaluate(gamma):
                register.apply(qcore.Z, [cmd.qubit])
            if spec.s.evaluate(gamma):
                register.apply(qcore.X, [cmd.qubit])
            plus, minus = qcore.plane_kets(spec.plane, spec.angle)
            if source.forced is not None:
                bit = source.draw(0.0, 0.0)
            else:
                w0, w1 = register.outcome_weights(cmd.qubit, (plus.conj(), minus.conj()))
                bit = source.draw(w0, w1)
            register.project(cmd.qubit, (plus if bit == 0 else minus).conj())
            gamma[cmd.qubit] = bit
        elif isinstance(cmd, Correct):
            if cmd.signal.evaluate(gamma):
                register.apply(qcore.X if cmd.axis == "X" else qcore.Z, [cmd.qubit])
        elif isinstance(cmd, Shift):
            gamma[cmd.qubit] = (gamma[cmd.qubit] + cmd.signal.evaluate(gamma)) % 2
        elif isinstance(cmd, LocalClifford):
            mat = {
                "H": qcore.H,
                "X": qcore.X,
                "Z": qcore.Z,
                "P": qcore.phase_gate(cmd.angle),
            }[cmd.kind]
            register.apply(mat, [cmd.qubit])
        else:  # pragma: no cover
            raise AdqcError(f"cannot execute {cmd!r}")
    return gamma


def _require_valid(p: Pattern):
    bad = validate(p)
    if bad:
        raise AdqcError("invalid pattern: " + "; ".join(str(v) for v in bad[:3]))


def _input_register(p: Pattern, input_state) -> _Register:
    if isinstance(input_state, StateVector):
        if set(input_state.qubit_labels) != set(p.systems):
            raise AdqcError(
                f"input labels {input_state.qubit_labels} != systems {p.systems}"
            )
        sv = input_state.reordered(p.systems)
        amps = sv.amplitudes
    else:
        amps = np.asarray(input_state, dtype=complex).reshape(-1)
        if amps.size != 2 ** len(p.systems):
            raise AdqcError(f"input dimension {amps.size} != 2^{len(p.systems)}")
    return _Register(amps.reshape((2,) * len(p.systems)), list(p.systems))


def run(p: Pattern, input_state, outcomes=None) -> tuple[StateVector, dict[str, int]]:
    """Execute a pattern on a system input state.

    ``outcomes`` is a 64-bit seed (or NumPy Generator) for Born
    sampling, or a bitstring forcing one branch (i-th bit = i-th
    measurement in execution order).  The returned state is restricted
    to the system qubits and left unnormalized: its squared norm is the
    realized branch probability.  A forced branch of probability zero
    returns a zero state.
    """
    _require_valid(p)
    register = _input_register(p, input_state)
    source = _OutcomeSource(outcomes)
    gamma = _execute(p, register, source)
    labels = tuple(register.labels)
    final = StateVector(register.amps.reshape(-1), labels).reordered(p.systems)
    return final, gamma


def enumerate_branches(p: Pattern, input_state) -> list[tuple[str, StateVector, float]]:
    """All 2^n outcome branches with their final states and probabilities."""
    _require_valid(p)
    n = len(p.measurement_order())
    if n > MAX_BRANCH_QUBITS:
        raise CapacityError(f"{n} measurements exceed the branch limit {MAX_BRANCH_QUBITS}")
    out = []
    for idx in range(2**n):
        bits = format(idx, f"0{n}b") if n else ""
        register = _input_register(p, input_state)
        _execute(p, register, _OutcomeSource(bits))
        state = StateVector(register.amps.reshape(-1), tuple(register.labels)).reordered(p.systems)
        out.append((bits, state, state.norm_sq()))
    return out


def kraus_map(p: Pattern) -> CptpMap:
    """The CPTP map realized by ``p``, one Kraus operator per branch."""
    _require_valid(p)
    n_sys = len(p.systems)
    n_meas = len(p.measurement_order())
    if n_sys > 6 or n_meas > 12:
        raise CapacityError("kraus_map limited to 6 system / 12 measured qubits")
    dim = 2**n_sys
    branches = []
    for idx in range(2**n_meas):
        bits = format(idx, f"0{n_meas}b") if n_meas else ""
        # Batch axis = input basis index; register holds dim parallel runs.
        amps = np.eye(dim, dtype=complex).reshape((dim,) + (2,) * n_sys)
        register = _Register(amps, list(p.systems))
        _execute(p, register, _OutcomeSource(bits))
        final = register.amps.reshape(dim, -1)
        if tuple(register.labels) != p.systems:
            perm = [register.labels.index(q) for q in p.systems]
            t = register.amps.reshape((dim,) + (2,) * n_sys)
            final = np.transpose(t, [0] + [1 + ax for ax in perm]).reshape(dim, -1)
        kraus = final.T  # column j = pattern applied to |j>
        prob = float(np.trace(kraus.conj().T @ kraus).real) / dim
        branches.append(BranchMap(bits, kraus, prob))
    return CptpMap(branches, dim)


def operators_equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = ATOL) -> bool:
    """True when |tr(a^dag b)| / (||a|| ||b||) >= 1 - tol."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return na == nb
    return abs(np.trace(a.conj().T @ b)) / (na * nb) >= 1.0 - tol


def is_strongly_deterministic(p: Pattern, tol: float = ATOL) -> tuple[bool, np.ndarray | None]:
    """Decide whether all branch maps agree up to global phase.

    On success returns the common unitary with the phase fixed so that
    the first nonzero entry (row-major) is real positive.  Branches of
    (numerically) zero probability are skipped: they never occur.
    """
    cptp = kraus_map(p)
    dim = cptp.dim
    reference: np.ndarray | None = None
    for b in cptp.branches:
        if b.probability <= tol:
            continue
        normalized = b.operator / math.sqrt(b.probability)
        if reference is None:
            reference = normalized
        elif not operators_equal_up_to_phase(reference, normalized, tol):
            return False, None
    if reference is None:
        return False, None
    # Phase fixing: first entry with significant magnitude made real positive.
    flat = reference.reshape(-1)
    pivot = flat[np.argmax(np.abs(flat) > 100 * tol)]
    unitary = reference * (abs(pivot) / pivot)
    if np.max(np.abs(unitary.conj().T @ unitary - np.eye(dim))) > math.sqrt(tol):
        return False, None
    return True, unitary


def apply_cptp(cptp: CptpMap, rho: np.ndarray) -> np.ndarray:
    """E(rho) = sum_b K_b rho K_b^dag."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (cptp.dim, cptp.dim):
        raise AdqcError(f"density matrix shape {rho.shape} != {(cptp.dim, cptp.dim)}")
    out = np.zeros_like(rho)
    for b in cptp.branches:
        out += b.operator @ rho @ b.operator.conj().T
    return out


def sample_counts(p: Pattern, input_state, shots: int, seed: int) -> dict[str, int]:
    """Histogram of outcome bitstrings over ``shots`` seeded runs."""
    rng = np.random.default_rng(seed)
    counts: dict[str, int] = {}
    order = p.measurement_order()
    for _ in range(shots):
        _, gamma = run(p, input_state, rng)
        bits = "".join(str(gamma[q]) for q in order)
        counts[bits] = counts.get(bits, 0) + 1
    return counts
