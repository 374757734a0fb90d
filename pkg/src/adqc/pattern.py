"""The ADQC command language: abstract syntax, validation, combination.

A pattern is a named command sequence over declared system and ancilla
qubits.  Commands are stored and printed in *execution order* (first
executed first); the literature writes the same sequences as operator
products read right to left, so a printed pattern is the reversal of the
usual algebraic notation.

Signals are sets of measured-qubit ids with mod-2 (parity) semantics:
a dependent command fires when the parity of the recorded outcomes over
the signal's domain is 1.  Duplicate qubits in a signal cancel.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .errors import CompositionError

PLANES = ("XY", "XZ", "YZ")


@dataclass(frozen=True)
class Signal:
    """Mod-2 sum of measurement outcomes over a set of qubit ids."""

    qubits: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "qubits", frozenset(self.qubits))

    @staticmethod
    def of(*qubits: str) -> "Signal":
        return Signal(frozenset(qubits))

    def evaluate(self, outcomes: Mapping[str, int]) -> int:
        return sum(outcomes[q] for q in self.qubits) % 2

    def __xor__(self, other: "Signal") -> "Signal":
        return Signal(self.qubits ^ other.qubits)

    def substitute(self, qubit: str, addend: "Signal") -> "Signal":
        """Replace ``m_qubit`` by ``m_qubit + addend`` (mod 2) if present."""
        if qubit in self.qubits:
            return self ^ addend
        return self

    def __bool__(self) -> bool:
        return bool(self.qubits)

    def sorted(self) -> list[str]:
        return sorted(self.qubits)

    def __str__(self) -> str:
        return "[" + ",".join(self.sorted()) + "]"


EMPTY_SIGNAL = Signal()


@dataclass(frozen=True)
class MeasurementSpec:
    """Plane, angle and signal dependencies of a planar measurement.

    The dependent measurement ``M[s][t]`` means: apply ``Z^t`` then
    ``X^s`` and measure in the plane at the base angle.  For the XY
    plane this is the usual angle update ``(-1)^s alpha + t pi``.
    """

    plane: str
    angle: float
    s: Signal = EMPTY_SIGNAL
    t: Signal = EMPTY_SIGNAL

    def __post_init__(self):
        if self.plane not in PLANES:
            raise ValueError(f"unknown plane {self.plane!r}")

    def is_pauli_z(self, tol: float = 1e-12) -> bool:
        """True for Pauli-Z measurements: XZ or YZ plane at angle 0 mod pi."""
        import math

        if self.plane == "XY":
            return False
        return abs(math.remainder(self.angle, math.pi)) <= tol

    def is_pauli(self, tol: float = 1e-12) -> bool:
        """True for any Pauli measurement (X, Y or Z basis)."""
        import math

        return abs(math.remainder(self.angle, math.pi)) <= tol


def pauli_z_spec() -> MeasurementSpec:
    return MeasurementSpec("XZ", 0.0)


@dataclass(frozen=True)
class Prep:
    """Prepare an ancilla, by default in |+> = |+_{pi/2,0}>."""

    qubit: str
    theta: float | None = None
    phi: float | None = None

    def angles(self) -> tuple[float, float]:
        import math

        if self.theta is None:
            return (math.pi / 2, 0.0)
        return (self.theta, self.phi if self.phi is not None else 0.0)

    def is_plus(self, tol: float = 1e-12) -> bool:
        import math

        theta, phi = self.angles()
        return abs(theta - math.pi / 2) <= tol and abs(phi) <= tol


@dataclass(frozen=True)
class Interact:
    """The fixed two-qubit interaction (CZ followed by H on each qubit)."""

    ancilla: str
    system: str

    @property
    def pair(self) -> tuple[str, str]:
        return (self.ancilla, self.system)


@dataclass(frozen=True)
class Measure:
    qubit: str
    spec: MeasurementSpec


@dataclass(frozen=True)
class Correct:
    qubit: str
    axis: str  # 'X' or 'Z'
    signal: Signal

    def __post_init__(self):
        if self.axis not in ("X", "Z"):
            raise ValueError(f"correction axis must be X or Z, got {self.axis!r}")


@dataclass(frozen=True)
class Shift:
    """Add a signal (mod 2) onto a recorded measurement outcome."""

    qubit: str
    signal: Signal


@dataclass(frozen=True)
class LocalClifford:
    """Unconditional local gate; a translation device, not core ADQC."""

    qubit: str
    kind: str  # 'H', 'P', 'X' or 'Z'
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in ("H", "P", "X", "Z"):
            raise ValueError(f"unsupported local Clifford {self.kind!r}")


Command = Union[Prep, Interact, Measure, Correct, Shift, LocalClifford]


def targets_of(cmd: Command) -> tuple[str, ...]:
    if isinstance(cmd, Interact):
        return cmd.pair
    return (cmd.qubit,)


def signals_of(cmd: Command) -> tuple[Signal, ...]:
    if isinstance(cmd, Measure):
        return (cmd.spec.s, cmd.spec.t)
    if isinstance(cmd, (Correct, Shift)):
        return (cmd.signal,)
    return ()


@dataclass(frozen=True)
class Pattern:
    """An ordered ADQC command sequence over named qubits."""

    name: str
    systems: tuple[str, ...]
    ancillas: tuple[str, ...]
    commands: tuple[Command, ...]

    def __post_init__(self):
        object.__setattr__(self, "systems", tuple(self.systems))
        object.__setattr__(self, "ancillas", tuple(self.ancillas))
        object.__setattr__(self, "commands", tuple(self.commands))

    @property
    def qubits(self) -> tuple[str, ...]:
        return self.systems + self.ancillas

    def is_system(self, q: str) -> bool:
        return q in self.systems

    def is_ancilla(self, q: str) -> bool:
        return q in self.ancillas

    def measures(self) -> list[Measure]:
        return [c for c in self.commands if isinstance(c, Measure)]

    def measurement_order(self) -> list[str]:
        return [c.qubit for c in self.measures()]

    def interactions(self) -> list[Interact]:
        return [c for c in self.commands if isinstance(c, Interact)]


@dataclass(frozen=True)
class Violation:
    """One definiteness violation: offending command index and rule name."""

    index: int
    rule: str
    message: str

    def __str__(self) -> str:
        where = f"command {self.index}" if self.index >= 0 else "pattern"
        return f"{where}: {self.rule}: {self.message}"


def validate(p: Pattern, strict: bool = False) -> list[Violation]:
    """Check the definiteness condition; empty result means valid.

    Rules: qubit declarations are unique and disjoint; commands only
    touch declared qubits; exactly ancillas are prepared and measured
    (each exactly once, prepared before first use); no command acts on
    a measured qubit; interactions couple one ancilla with one system
    qubit; signals only reference already-measured qubits; shifts only
    retag already-measured qubits.  With ``strict=True`` local Clifford
    commands are flagged as foreign to pure ADQC.
    """
    out: list[Violation] = []
    declared = set(p.systems) | set(p.ancillas)
    if len(p.systems) != len(set(p.systems)) or len(p.ancillas) != len(set(p.ancillas)):
        out.append(Violation(-1, "duplicate-declaration", "qubit declared twice"))
    if set(p.systems) & set(p.ancillas):
        out.append(
            Violation(-1, "duplicate-declaration", "qubit declared as both system and ancilla")
        )

    prepared: set[str] = set()
    measured: set[str] = set()

    def check_live(i: int, q: str) -> bool:
        ok = True
        if q not in declared:
            out.append(Violation(i, "unknown-qubit", f"{q!r} is not declared"))
            return False
        if q in measured:
            out.append(Violation(i, "acts-on-measured", f"{q!r} was already measured"))
            ok = False
        if q in set(p.ancillas) and q not in prepared:
            out.append(Violation(i, "use-before-prep", f"ancilla {q!r} used before preparation"))
            ok = False
        return ok

    def check_signal(i: int, sig: Signal):
        for q in sig.sorted():
            if q not in declared:
                out.append(Violation(i, "unknown-qubit", f"signal references undeclared {q!r}"))
            elif q not in measured:
                out.append(
                    Violation(i, "acausal-dependency", f"signal references unmeasured {q!r}")
                )

    for i, cmd in enumerate(p.commands):
        if isinstance(cmd, Prep):
            if cmd.qubit not in declared:
                out.append(Violation(i, "unknown-qubit", f"{cmd.qubit!r} is not declared"))
            elif cmd.qubit in p.systems:
                out.append(
                    Violation(i, "only-ancillas-prepared", f"system {cmd.qubit!r} prepared")
                )
            elif cmd.qubit in prepared:
                out.append(Violation(i, "double-prep", f"{cmd.qubit!r} prepared twice"))
            elif cmd.qubit in measured:
                out.append(Violation(i, "acts-on-measured", f"{cmd.qubit!r} was already measured"))
            prepared.add(cmd.qubit)
        elif isinstance(cmd, Interact):
            a, s = cmd.ancilla, cmd.system
            check_live(i, a)
            check_live(i, s)
            if a in declared and s in declared:
                if not (p.is_ancilla(a) and p.is_system(s)):
                    out.append(
                        Violation(
                            i,
                            "interaction-roles",
                            f"interaction must couple one ancilla and one system, got ({a!r}, {s!r})",
                        )
                    )
        elif isinstance(cmd, Measure):
            q = cmd.qubit
            check_live(i, q)
            if q in declared and not p.is_ancilla(q):
                out.append(Violation(i, "only-ancillas-measured", f"system {q!r} measured"))
            check_signal(i, cmd.spec.s)
            check_signal(i, cmd.spec.t)
            measured.add(q)
        elif isinstance(cmd, Correct):
            check_live(i, cmd.qubit)
            check_signal(i, cmd.signal)
        elif isinstance(cmd, Shift):
            if cmd.qubit not in declared:
                out.append(Violation(i, "unknown-qubit", f"{cmd.qubit!r} is not declared"))
            elif cmd.qubit not in measured:
                out.append(
                    Violation(i, "shift-before-measure", f"{cmd.qubit!r} has no recorded outcome")
                )
            check_signal(i, cmd.signal)
        elif isinstance(cmd, LocalClifford):
            check_live(i, cmd.qubit)
            if strict:
                out.append(
                    Violation(i, "non-adqc-command", "local Clifford commands are translation devices")
                )
        else:  # pragma: no cover - exhaustiveness guard
            out.append(Violation(i, "unknown-command", repr(cmd)))

    for a in p.ancillas:
        if a not in measured:
            out.append(Violation(-1, "ancilla-unmeasured", f"ancilla {a!r} is never measured"))
        if a not in prepared:
            out.append(Violation(-1, "ancilla-unprepared", f"ancilla {a!r} is never prepared"))
    return out


def compose(p2: Pattern, p1: Pattern) -> Pattern:
    """Run ``p1`` first, then ``p2`` on the same system register.

    Requires equal system sets and disjoint ancilla sets; the relative
    order of interaction commands inside each part is preserved.
    """
    if set(p1.systems) != set(p2.systems):
        raise CompositionError(
            f"system mismatch: {sorted(p1.systems)} vs {sorted(p2.systems)}"
        )
    overlap = set(p1.ancillas) & set(p2.ancillas)
    if overlap:
        raise CompositionError(f"ancilla collision: {sorted(overlap)}")
    return Pattern(
        name=f"{p2.name}.{p1.name}",
        systems=p1.systems,
        ancillas=p1.ancillas + p2.ancillas,
        commands=p1.commands + p2.commands,
    )


def tensor(p1: Pattern, p2: Pattern) -> Pattern:
    """Side-by-side combination on disjoint qubit sets (p1 slots first)."""
    overlap = set(p1.qubits) & set(p2.qubits)
    if overlap:
        raise CompositionError(f"qubit collision: {sorted(overlap)}")
    return Pattern(
        name=f"{p1.name}.{p2.name}",
        systems=p1.systems + p2.systems,
        ancillas=p1.ancillas + p2.ancillas,
        commands=p1.commands + p2.commands,
    )


def rename_qubits(p: Pattern, mapping: Mapping[str, str], name: str | None = None) -> Pattern:
    """Consistently rename qubits (used to make patterns composable)."""

    def m(q: str) -> str:
        return mapping.get(q, q)

    def rename_sig(sig: Signal) -> Signal:
        return Signal(frozenset(m(q) for q in sig.qubits))

    renamed: list[Command] = []
    for cmd in p.commands:
        if isinstance(cmd, Prep):
            renamed.append(Prep(m(cmd.qubit), cmd.theta, cmd.phi))
        elif isinstance(cmd, Interact):
            renamed.append(Interact(m(cmd.ancilla), m(cmd.system)))
        elif isinstance(cmd, Measure):
            spec = cmd.spec
            renamed.append(
                Measure(m(cmd.qubit), MeasurementSpec(spec.plane, spec.angle, rename_sig(spec.s), rename_sig(spec.t)))
            )
        elif isinstance(cmd, Correct):
            renamed.append(Correct(m(cmd.qubit), cmd.axis, rename_sig(cmd.signal)))
        elif isinstance(cmd, Shift):
            renamed.append(Shift(m(cmd.qubit), rename_sig(cmd.signal)))
        else:
            renamed.append(LocalClifford(m(cmd.qubit), cmd.kind, cmd.angle))
    new = tuple(m(q) for q in p.systems), tuple(m(q) for q in p.ancillas)
    if len(set(new[0]) | set(new[1])) != len(new[0]) + len(new[1]):
        raise CompositionError("renaming collapses distinct qubits")
    return Pattern(name or p.name, new[0], new[1], tuple(renamed))


def fresh_names(prefix: str, avoid: Iterable[str]) -> Iterable[str]:
    """Endless supply of identifiers not clashing with ``avoid``."""
    taken = set(avoid)
    for i in itertools.count():
        q = f"{prefix}{i}"
        if q not in taken:
            taken.add(q)
            yield q
