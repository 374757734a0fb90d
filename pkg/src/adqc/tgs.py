"""Twisted graph states: geometry, stabilizers, causal flow, synthesis.

A twisted graph state is a bipartite labelled graph over system and
ancilla qubits: edges are applications of the two-qubit interaction
(CZ then H on each side), so edges sharing a qubit do not commute and
the integer edge labels record the order (total and strict on edges
sharing a vertex).  Ancillas have degree at most 2.  The associated
quantum state prepares systems arbitrarily, ancillas in |+>, and
applies the edges in label order.

Stabilizers are computed by conjugating the seed Pauli X on an ancilla
through the edge sequence.  Each edge conjugates exactly
(X_a -> Z_a X_s, Z_a -> X_a and symmetrically), so the result is a
Pauli word fixing the state by construction, whatever the labelling.
On graphs where every propagation step enters a degree-2 ancilla
through its earlier edge, this reproduces the local/recursive
stabilizer construction rule for rule; graphs where a push reaches a
degree-2 ancilla after both its edges were already applied simply leave
an X residue there instead of continuing (such ancillas are Pauli-Z
measured, so downstream flow analysis is unaffected).

Causal flow and the synthesis of strongly deterministic patterns follow
the stabilizer-based construction: the plan must measure degree-1
ancillas in the XY plane and degree-2 ancillas in Z; corrections for
ancilla ``a`` are its stabilizer with the ``a`` component removed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import qcore
from .errors import CapacityError, FlowError, GraphError
from .pattern import (
    Correct,
    Interact,
    Measure,
    MeasurementSpec,
    Pattern,
    Prep,
    Shift,
    Signal,
    pauli_z_spec,
)
from .qcore import ATOL, PauliString


@dataclass(frozen=True)
class Edge:
    ancilla: str
    system: str
    label: int


@dataclass(frozen=True)
class MeasurePlan:
    """Per-ancilla measurement plan: plane 'XY' (with angle) or 'Z'."""

    plane: str
    angle: float = 0.0

    def __post_init__(self):
        if self.plane not in ("XY", "Z"):
            raise GraphError(f"measurement plan plane must be XY or Z, got {self.plane!r}")

    def is_pauli(self, tol: float = 1e-12) -> bool:
        return self.plane == "Z" or abs(math.remainder(self.angle, math.pi)) <= tol


@dataclass(frozen=True)
class TwistedGraphState:
    systems: tuple[str, ...]
    ancillas: tuple[str, ...]
    edges: tuple[Edge, ...]
    measurements: Mapping[str, MeasurePlan] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "systems", tuple(self.systems))
        object.__setattr__(self, "ancillas", tuple(self.ancillas))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "measurements", dict(self.measurements))
        self._check()

    def _check(self):
        systems, ancillas = set(self.systems), set(self.ancillas)
        if systems & ancillas:
            raise GraphError("system and ancilla sets overlap")
        per_vertex: dict[str, set[int]] = {}
        for e in self.edges:
            if e.ancilla not in ancillas or e.system not in systems:
                raise GraphError(f"edge {e} is not (ancilla, system)")
            for v in (e.ancilla, e.system):
                labels = per_vertex.setdefault(v, set())
                if e.label in labels:
                    raise GraphError(f"labels on edges at {v!r} are not strict")
                labels.add(e.label)
        for a in ancillas:
            if len(self.edges_at(a)) > 2:
                raise GraphError(f"ancilla {a!r} has degree > 2")
        for q in self.measurements:
            if q not in ancillas:
                raise GraphError(f"measurement plan on non-ancilla {q!r}")

    def edges_at(self, vertex: str) -> list[Edge]:
        return sorted(
            (e for e in self.edges if vertex in (e.ancilla, e.system)),
            key=lambda e: e.label,
        )

    def degree(self, ancilla: str) -> int:
        return len(self.edges_at(ancilla))

    def ordered_edges(self) -> list[Edge]:
        """Edges in a linear order compatible with the labelling.

        Equal labels never share a vertex, so any tie-break yields the
        same state; sorting keys are (label, ancilla, system).
        """
        return sorted(self.edges, key=lambda e: (e.label, e.ancilla, e.system))

    def plan_for(self, ancilla: str) -> MeasurePlan:
        plan = self.measurements.get(ancilla)
        if plan is not None:
            return plan
        return MeasurePlan("XY", 0.0) if self.degree(ancilla) == 1 else MeasurePlan("Z")

    def max_label(self) -> int:
        return max((e.label for e in self.edges), default=0)


# --- JSON schema -----------------------------------------------------------


def to_json(g: TwistedGraphState) -> str:
    """Serialize with deterministic key order."""
    doc = {
        "systems": list(g.systems),
        "ancillas": list(g.ancillas),
        "edges": [
            {"a": e.ancilla, "s": e.system, "label": e.label} for e in g.ordered_edges()
        ],
        "measurements": {
            a: {"plane": g.plan_for(a).plane, "angle": g.plan_for(a).angle}
            for a in g.ancillas
        },
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def from_json(text: str) -> TwistedGraphState:
    doc = json.loads(text)
    edges = tuple(Edge(e["a"], e["s"], int(e["label"])) for e in doc["edges"])
    measurements = {
        q: MeasurePlan(m["plane"], float(m.get("angle", 0.0)))
        for q, m in doc.get("measurements", {}).items()
    }
    return TwistedGraphState(
        tuple(doc["systems"]), tuple(doc["ancillas"]), edges, measurements
    )


# --- Extraction from standard patterns -------------------------------------


def extract_graph(p: Pattern) -> TwistedGraphState:
    """Underlying twisted graph state of a standard pattern.

    Edges are the interaction commands; the label of each is the
    greedy layer index: scanning interactions in execution order, each
    gets the smallest layer strictly above every earlier interaction
    sharing a qubit.  Measurements and corrections are forgotten except
    for the per-ancilla measurement plan.
    """
    from .rewrite import is_standard

    if not is_standard(p):
        raise GraphError("extract_graph requires a standard pattern")
    layer_at: dict[str, int] = {}
    edges: list[Edge] = []
    for cmd in p.interactions():
        a, s = cmd.ancilla, cmd.system
        label = max(layer_at.get(a, 0), layer_at.get(s, 0)) + 1
        layer_at[a] = label
        layer_at[s] = label
        edges.append(Edge(a, s, label))
    counts: dict[str, int] = {}
    for e in edges:
        counts[e.ancilla] = counts.get(e.ancilla, 0) + 1
        if counts[e.ancilla] > 2:
            raise GraphError(f"ancilla {e.ancilla!r} has degree > 2")
    plans: dict[str, MeasurePlan] = {}
    for cmd in p.measures():
        spec = cmd.spec
        if spec.plane == "XY":
            plans[cmd.qubit] = MeasurePlan("XY", spec.angle)
        elif spec.is_pauli_z():
            plans[cmd.qubit] = MeasurePlan("Z")
        else:
            raise GraphError(
                f"measurement on {cmd.qubit!r} is neither XY-plane nor Pauli Z"
            )
    return TwistedGraphState(p.systems, p.ancillas, tuple(edges), plans)


# --- Stabilizers ------------------------------------------------------------


def _etilde_conjugation_table() -> dict[tuple[str, str], tuple[complex, str, str]]:
    """Exact conjugation of two-qubit Pauli words by the interaction."""
    letters = ("I", "X", "Y", "Z")
    table = {}
    e = qcore.ETILDE
    edag = e.conj().T
    for p1 in letters:
        for p2 in letters:
            m = e @ np.kron(qcore.PAULIS[p1], qcore.PAULIS[p2]) @ edag
            for q1 in letters:
                for q2 in letters:
                    basis = np.kron(qcore.PAULIS[q1], qcore.PAULIS[q2])
                    coeff = np.trace(basis.conj().T @ m) / 4.0
                    if abs(coeff) > 0.5:
                        table[(p1, p2)] = (complex(np.round(coeff.real) + 1j * np.round(coeff.imag)), q1, q2)
    return table


_CONJ = _etilde_conjugation_table()


def _conjugate_through(g: TwistedGraphState, seed: PauliString) -> PauliString:
    """Conjugate a Pauli word through all edges in label order."""
    paulis = dict(seed.paulis)
    phase = seed.phase
    for e in g.ordered_edges():
        pa = paulis.pop(e.ancilla, "I")
        ps = paulis.pop(e.system, "I")
        if pa == "I" and ps == "I":
            continue
        coeff, qa, qs = _CONJ[(pa, ps)]
        phase *= coeff
        if qa != "I":
            paulis[e.ancilla] = qa
        if qs != "I":
            paulis[e.system] = qs
    return PauliString(paulis, phase)


def stabilizer(g: TwistedGraphState, a: str) -> PauliString:
    """The stabilizer P(a): conjugation of X_a through the edge sequence.

    Satisfies ``P(a) |state> = |state>`` for every system input by
    construction (X on a fresh |+> ancilla is absorbed).  Degree-1
    ancillas come out with a Z on ``a``, degree-2 ancillas with an X.
    """
    if a not in g.ancillas:
        raise GraphError(f"{a!r} is not an ancilla")
    out = _conjugate_through(g, PauliString({a: "X"}))
    if out.phase not in (1,):
        # Conjugation preserves Hermiticity, so only a -1 is possible;
        # it cannot arise from an acyclic propagation.  Refuse to guess.
        raise GraphError(f"labelling of {a!r} yields a negative-phase stabilizer")
    return out


def local_stabilizer(g: TwistedGraphState, a: str) -> PauliString:
    """One propagation step: the residues deposited around S(a).

    Relabel the edges at S(a) carrying labels >= label(a) as 1..n (the
    edge of ``a`` is 1).  Ancillas at even positions receive X if they
    have degree 1 and Z if degree 2; S(a) receives X for odd n, else Z.
    """
    edges_a = g.edges_at(a)
    if not edges_a:
        raise GraphError(f"ancilla {a!r} has no edges")
    first = edges_a[0]
    s = first.system
    window = [e for e in g.edges_at(s) if e.label >= first.label]
    window.sort(key=lambda e: e.label)
    out: dict[str, str] = {}
    for pos, e in enumerate(window, start=1):
        if pos == 1 or pos % 2 == 1:
            continue
        out[e.ancilla] = "X" if g.degree(e.ancilla) == 1 else "Z"
    out[s] = "X" if len(window) % 2 == 1 else "Z"
    return PauliString(out)


def build_state(g: TwistedGraphState, system_input: np.ndarray) -> qcore.StateVector:
    """|state> for a given system input: ancillas |+>, edges in order."""
    n = len(g.systems) + len(g.ancillas)
    if n > 12:
        raise CapacityError(f"{n} qubits exceeds the verification limit of 12")
    amps = np.asarray(system_input, dtype=complex).reshape((2,) * len(g.systems))
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    for _ in g.ancillas:
        amps = np.multiply.outer(amps, plus)
    labels = list(g.systems) + list(g.ancillas)
    for e in g.ordered_edges():
        amps = qcore.apply_gate_tensor(
            amps, n, qcore.ETILDE, [labels.index(e.ancilla), labels.index(e.system)]
        )
    return qcore.StateVector(amps.reshape(-1), tuple(labels))


def verify_stabilizer(g: TwistedGraphState, a: str, n_inputs: int = 3, seed: int = 7, tol: float = ATOL) -> bool:
    """Numerically check P(a)|state> = |state> on random system inputs."""
    p = stabilizer(g, a)
    rng = np.random.default_rng(seed)
    op = qcore.pauli_string_to_operator(p, tuple(g.systems) + tuple(g.ancillas))
    for _ in range(n_inputs):
        raw = rng.normal(size=2 ** len(g.systems)) + 1j * rng.normal(size=2 ** len(g.systems))
        raw /= np.linalg.norm(raw)
        state = build_state(g, raw)
        moved = op.entries @ state.amplitudes
        if np.max(np.abs(moved - state.amplitudes)) > tol:
            return False
    return True


# --- Causal flow ------------------------------------------------------------


@dataclass
class FlowResult:
    """Causal-flow analysis: existence, layered ranks, and corrections.

    ``layers`` maps each ancilla to its longest-path rank in the
    precedence digraph (only meaningful when ``exists``); ``corrections``
    maps ancilla ``a`` to C(a) = P(a) with the ``a`` component removed.
    """

    exists: bool
    layers: dict[str, int]
    corrections: dict[str, PauliString]

    def layer_list(self) -> list[list[str]]:
        if not self.exists:
            return []
        depth = max(self.layers.values(), default=0)
        return [sorted(q for q, l in self.layers.items() if l == k) for k in range(1, depth + 1)]


def _check_plan(g: TwistedGraphState):
    for a in g.ancillas:
        plan = g.plan_for(a)
        deg = g.degree(a)
        if deg == 1 and plan.plane != "XY":
            raise FlowError(f"degree-1 ancilla {a!r} must be measured in the XY plane")
        if deg == 2 and plan.plane != "Z":
            raise FlowError(f"degree-2 ancilla {a!r} must be measured in Pauli Z")
        if deg == 0:
            raise FlowError(f"ancilla {a!r} is disconnected")


def find_causal_flow(g: TwistedGraphState) -> FlowResult:
    """Decide causal flow: a partial order putting every non-Pauli-Z
    target of each stabilizer strictly after its ancilla.

    Builds the precedence digraph a -> a' for every ancilla a' in the
    support of P(a) (other than a) that is not Pauli-Z measured; flow
    exists iff this digraph is acyclic.  Layers are longest-path ranks.
    """
    _check_plan(g)
    corrections: dict[str, PauliString] = {}
    succ: dict[str, set[str]] = {a: set() for a in g.ancillas}
    for a in g.ancillas:
        p = stabilizer(g, a)
        c = dict(p.paulis)
        c.pop(a, None)
        corrections[a] = PauliString(c)
        for q in c:
            if q in succ and g.plan_for(q).plane != "Z":
                succ[a].add(q)

    indeg = {a: 0 for a in g.ancillas}
    for a, targets in succ.items():
        for t in targets:
            indeg[t] += 1
    layers: dict[str, int] = {}
    frontier = sorted(a for a, d in indeg.items() if d == 0)
    rank = {a: 1 for a in frontier}
    order: list[str] = []
    while frontier:
        a = frontier.pop(0)
        order.append(a)
        layers[a] = rank[a]
        for t in sorted(succ[a]):
            indeg[t] -= 1
            rank[t] = max(rank.get(t, 1), rank[a] + 1)
            if indeg[t] == 0:
                frontier.append(t)
        frontier.sort()
    exists = len(order) == len(g.ancillas)
    return FlowResult(exists, layers if exists else {}, corrections)


# --- Synthesis (flow theorem) -----------------------------------------------


def synthesize_deterministic(
    g: TwistedGraphState, angles: Mapping[str, float] | None = None, name: str = "synth"
) -> Pattern:
    """Build the runnable, strongly deterministic pattern of a flow graph.

    Commands: prepare all ancillas in |+>, apply the edges in label
    order, then measure ancillas layer by layer, emitting after each
    measurement the corrections C(a)^{m_a}.  Z corrections aimed at
    Pauli-Z-measured ancillas are dropped (they cannot change a Z
    measurement); an X correction aimed at an already-measured
    (necessarily Pauli-Z) ancilla becomes a shift of its record.
    Degree-1 ancillas take their measurement angles from ``angles`` or
    the graph's plan.
    """
    flow = find_causal_flow(g)
    if not flow.exists:
        raise FlowError("graph has no causal flow")
    angle_of = dict(angles or {})

    commands = [Prep(a) for a in sorted(g.ancillas)]
    commands += [Interact(e.ancilla, e.system) for e in g.ordered_edges()]

    measured: set[str] = set()
    for layer in flow.layer_list():
        # Within a layer: XY-measured first, so corrections they send to
        # same-layer Z-measured ancillas land before those measurements.
        ordered = [a for a in layer if g.plan_for(a).plane == "XY"] + [
            a for a in layer if g.plan_for(a).plane == "Z"
        ]
        for a in ordered:
            plan = g.plan_for(a)
            if plan.plane == "XY":
                alpha = float(angle_of.get(a, plan.angle))
                commands.append(Measure(a, MeasurementSpec("XY", alpha)))
            else:
                commands.append(Measure(a, pauli_z_spec()))
            measured.add(a)
            sig = Signal.of(a)
            correction = flow.corrections[a]
            for q, pauli in correction.items():
                z_target = q not in g.systems and g.plan_for(q).plane == "Z"
                for axis in {"X": ("X",), "Z": ("Z",), "Y": ("Z", "X")}[pauli]:
                    if q in g.systems:
                        commands.append(Correct(q, axis, sig))
                    elif axis == "Z" and z_target:
                        continue  # M^Z Z^m = M^Z
                    elif q in measured:
                        if axis == "X":
                            commands.append(Shift(q, sig))
                    else:
                        commands.append(Correct(q, axis, sig))
    return Pattern(name, g.systems, g.ancillas, tuple(commands))
