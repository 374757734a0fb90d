"""Dense complex linear algebra and elementary quantum-state operations.

Conventions used throughout the package:

* Qubit ordering: the first label in ``qubit_labels`` is the most
  significant bit of the amplitude index, so for labels ``(q0, q1)`` the
  amplitude of ``|10>`` (q0 = 1, q1 = 0) sits at index 2.
* States are allowed to be unnormalized.  During branch evolution the
  squared norm of a state equals the probability accumulated along the
  branch so far, and nothing ever renormalizes behind the caller's back.
* All floating-point comparisons use the absolute tolerance ``ATOL``
  unless a caller overrides it.
* Dense registers are capped at ``MAX_QUBITS`` qubits; larger requests
  raise :class:`~adqc.errors.CapacityError`.

Single-qubit states on the Bloch sphere are written ``|+_{theta,phi}>``
with ``|+> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`` and the
antipodal state ``|-_{theta,phi}> = sin(theta/2)|0> - e^{i phi}
cos(theta/2)|1>``.  Measurement planes map onto these as XY: (pi/2,
alpha), XZ: (alpha, 0), YZ: (alpha, pi/2); the plus projector records
outcome 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ArityMismatchError, CapacityError, UnknownQubitError

ATOL = 1e-9
MAX_QUBITS = 20

# Fixed 2x2 / 4x4 operators.
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
# The ADQC interaction: controlled-Z followed by a Hadamard on each qubit.
ETILDE = np.kron(H, H) @ CZ

PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def phase_gate(alpha: float) -> np.ndarray:
    """diag(1, e^{i alpha})."""
    return np.array([[1, 0], [0, cmath.exp(1j * alpha)]], dtype=complex)


def j_gate(alpha: float) -> np.ndarray:
    """The single-qubit generator J(alpha) = H P(alpha); J(0) = H."""
    e = cmath.exp(1j * alpha)
    return np.array([[1, e], [1, -e]], dtype=complex) / math.sqrt(2)


def bloch_ket(theta: float, phi: float) -> np.ndarray:
    """The state |+_{theta,phi}>."""
    return np.array(
        [math.cos(theta / 2), cmath.exp(1j * phi) * math.sin(theta / 2)],
        dtype=complex,
    )


def bloch_ket_orth(theta: float, phi: float) -> np.ndarray:
    """The antipodal state |-_{theta,phi}>."""
    return np.array(
        [math.sin(theta / 2), -cmath.exp(1j * phi) * math.cos(theta / 2)],
        dtype=complex,
    )


_PLANE_ANGLES = {
    "XY": lambda a: (math.pi / 2, a),
    "XZ": lambda a: (a, 0.0),
    "YZ": lambda a: (a, math.pi / 2),
}


def plane_kets(plane: str, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Projector kets (|+>, |->) of a planar measurement at angle alpha."""
    try:
        theta, phi = _PLANE_ANGLES[plane](alpha)
    except KeyError:
        raise ValueError(f"unknown measurement plane {plane!r}") from None
    return bloch_ket(theta, phi), bloch_ket_orth(theta, phi)


@dataclass(frozen=True)
class Operator:
    """A dense operator on ``arity`` qubits (2^arity x 2^arity matrix)."""

    entries: np.ndarray
    arity: int = field(default=0)

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        dim = entries.shape[0]
        if entries.ndim != 2 or entries.shape[1] != dim or dim & (dim - 1):
            raise ArityMismatchError(f"operator shape {entries.shape} is not 2^k x 2^k")
        arity = dim.bit_length() - 1
        if self.arity and self.arity != arity:
            raise ArityMismatchError(f"declared arity {self.arity} != matrix arity {arity}")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "arity", arity)

    def is_unitary(self, tol: float = ATOL) -> bool:
        d = self.entries.shape[0]
        return bool(np.allclose(self.entries.conj().T @ self.entries, np.eye(d), atol=tol))


@dataclass(frozen=True)
class StateVector:
    """Unnormalized state of a labelled qubit register.

    ``amplitudes`` has length ``2 ** len(qubit_labels)``; position in
    ``qubit_labels`` fixes the tensor slot (first label = most
    significant bit).
    """

    amplitudes: np.ndarray
    qubit_labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.qubit_labels)
        if len(set(labels)) != len(labels):
            raise UnknownQubitError(f"duplicate qubit labels in {labels}")
        if len(labels) > MAX_QUBITS:
            raise CapacityError(f"{len(labels)} qubits exceeds the dense limit of {MAX_QUBITS}")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2 ** len(labels):
            raise ArityMismatchError(
                f"{amps.size} amplitudes for {len(labels)} labelled qubits"
            )
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "qubit_labels", labels)

    @property
    def n_qubits(self) -> int:
        return len(self.qubit_labels)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def axis_of(self, qubit: str) -> int:
        try:
            return self.qubit_labels.index(qubit)
        except ValueError:
            raise UnknownQubitError(f"qubit {qubit!r} not in register {self.qubit_labels}") from None

    def reordered(self, new_labels: Sequence[str]) -> "StateVector":
        """Same state with tensor slots permuted to ``new_labels``."""
        new_labels = tuple(new_labels)
        if set(new_labels) != set(self.qubit_labels) or len(new_labels) != self.n_qubits:
            raise UnknownQubitError(f"cannot reorder {self.qubit_labels} into {new_labels}")
        perm = [self.axis_of(q) for q in new_labels]
        tensor = self.amplitudes.reshape((2,) * self.n_qubits)
        return StateVector(np.transpose(tensor, perm).reshape(-1), new_labels)


def basis_state(labels: Sequence[str], bits: str = "") -> StateVector:
    """Computational-basis state |bits> over ``labels`` (default all zero)."""
    labels = tuple(labels)
    bits = bits or "0" * len(labels)
    if len(bits) != len(labels):
        raise ArityMismatchError(f"bitstring {bits!r} for {len(labels)} qubits")
    amps = np.zeros(2 ** len(labels), dtype=complex)
    amps[int(bits, 2) if bits else 0] = 1.0
    return StateVector(amps, labels)


# ---------------------------------------------------------------------------
# Raw-array kernels.  They operate on arrays of shape (..., 2, 2, ..., 2)
# where the trailing ``n`` axes are qubit slots; leading axes are batch
# dimensions (the simulator batches over input basis states this way).
# ---------------------------------------------------------------------------


def apply_gate_tensor(tensor: np.ndarray, n: int, gate: np.ndarray, positions: Sequence[int]) -> np.ndarray:
    """Apply ``gate`` to the qubit axes ``positions`` of ``tensor``.

    ``tensor`` has ``n`` trailing qubit axes; ``positions`` index those
    axes (0 = first qubit).  Batch axes in front are preserved.
    """
    k = len(positions)
    if gate.shape != (2**k, 2**k):
        raise ArityMismatchError(f"gate shape {gate.shape} for {k} targets")
    batch = tensor.ndim - n
    axes = [batch + p for p in positions]
    gate_t = gate.reshape((2,) * (2 * k))
    # Contract gate input indices (last k of gate_t) with the target axes.
    moved = np.tensordot(tensor, gate_t, axes=(axes, list(range(k, 2 * k))))
    # tensordot appends the gate output axes at the end, in target order.
    return np.moveaxis(moved, list(range(moved.ndim - k, moved.ndim)), axes)


def project_tensor(tensor: np.ndarray, n: int, position: int, bra: np.ndarray) -> np.ndarray:
    """Contract ``bra`` (length-2) onto one qubit axis, removing it."""
    batch = tensor.ndim - n
    return np.tensordot(tensor, np.asarray(bra, dtype=complex), axes=([batch + position], [0]))


# ---------------------------------------------------------------------------
# Public operations on StateVector.
# ---------------------------------------------------------------------------


def apply_gate(state: StateVector, gate: Operator | np.ndarray, targets: Sequence[str]) -> StateVector:
    """Apply a k-qubit gate to the named target slots of ``state``.

    Targets must be distinct and present; norm is preserved whenever the
    gate is unitary.  Non-target slots are untouched.
    """
    matrix = gate.entries if isinstance(gate, Operator) else np.asarray(gate, dtype=complex)
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise UnknownQubitError(f"duplicate targets {targets}")
    positions = [state.axis_of(q) for q in targets]
    n = state.n_qubits
    if matrix.shape != (2 ** len(targets), 2 ** len(targets)):
        raise ArityMismatchError(
            f"gate of shape {matrix.shape} applied to {len(targets)} targets"
        )
    tensor = state.amplitudes.reshape((2,) * n)
    out = apply_gate_tensor(tensor, n, matrix, positions)
    return StateVector(out.reshape(-1), state.qubit_labels)


def project_and_remove(state: StateVector, qubit: str, bra: Sequence[complex]) -> tuple[StateVector, float]:
    """Destructively measure one qubit: contract ``bra`` and drop the slot.

    Returns the contracted state (still unnormalized) and its squared
    norm.  For a normalized input the weight is the probability of this
    outcome; weights of an orthonormal bra pair sum to the squared norm
    of the input.
    """
    pos = state.axis_of(qubit)
    n = state.n_qubits
    tensor = state.amplitudes.reshape((2,) * n)
    out = project_tensor(tensor, n, pos, np.asarray(bra, dtype=complex)).reshape(-1)
    labels = tuple(q for q in state.qubit_labels if q != qubit)
    new_state = StateVector(out, labels)
    return new_state, new_state.norm_sq()


_PAULI_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}

_PHASES = (1, 1j, -1, -1j)


@dataclass(frozen=True)
class PauliString:
    """A phased Pauli word: ``phase * prod_q sigma_q``.

    ``paulis`` maps qubit id -> one of 'X', 'Y', 'Z' (identity factors
    are omitted); ``phase`` is one of +1, -1, +i, -i.
    """

    paulis: Mapping[str, str]
    phase: complex = 1

    def __post_init__(self):
        cleaned = {q: p for q, p in dict(self.paulis).items() if p != "I"}
        for q, p in cleaned.items():
            if p not in ("X", "Y", "Z"):
                raise ValueError(f"bad Pauli letter {p!r} on {q!r}")
        phase = complex(self.phase)
        if not any(abs(phase - c) < 1e-12 for c in _PHASES):
            raise ValueError(f"phase {phase} not in {{1, -1, i, -i}}")
        object.__setattr__(self, "paulis", dict(cleaned))
        object.__setattr__(self, "phase", min(_PHASES, key=lambda c: abs(phase - c)))

    def support(self) -> frozenset[str]:
        return frozenset(self.paulis)

    def get(self, qubit: str) -> str:
        return self.paulis.get(qubit, "I")

    def __mul__(self, other: "PauliString") -> "PauliString":
        phase = self.phase * other.phase
        merged: dict[str, str] = dict(self.paulis)
        for q, p in other.paulis.items():
            f, r = _PAULI_MUL[(merged.get(q, "I"), p)]
            phase *= f
            if r == "I":
                merged.pop(q, None)
            else:
                merged[q] = r
        return PauliString(merged, phase)

    def items(self) -> Iterable[tuple[str, str]]:
        return sorted(self.paulis.items())

    def __str__(self) -> str:
        body = " ".join(f"{p}[{q}]" for q, p in self.items()) or "I"
        pre = {1: "", -1: "-", 1j: "i", -1j: "-i"}[self.phase]
        return pre + body


def pauli_string_to_operator(p: PauliString, qubit_labels: Sequence[str]) -> Operator:
    """Embed a Pauli string into the full register (identity elsewhere)."""
    labels = tuple(qubit_labels)
    missing = p.support() - set(labels)
    if missing:
        raise UnknownQubitError(f"Pauli string acts on unhoused qubits {sorted(missing)}")
    out = np.array([[p.phase]], dtype=complex)
    for q in labels:
        out = np.kron(out, PAULIS[p.get(q)])
    return Operator(out)
