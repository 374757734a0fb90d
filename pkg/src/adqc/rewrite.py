"""Standardisation engine: rewrite wild patterns into standard form.

Standard form orders command kinds as preparations, then interactions,
then measurements, then corrections and shifts.  The engine repeatedly
resolves the leftmost adjacent phase inversion with the calculus rules:

* interaction/correction propagation  ``E X -> Z X E``-style (the X
  correction hops to the partner qubit and leaves a Z behind; a Z
  correction turns into an X),
* measurement absorption (corrections fold into the s/t dependencies;
  for Pauli-Z measurements an X correction becomes a signal shift and a
  Z correction disappears),
* free commutation of commands on disjoint qubits.

After every rule application runs of adjacent corrections are merged
per (qubit, axis) with mod-2 signal addition.  Merging may reorder
anticommuting corrections on one qubit, which can flip the sign of
individual branch maps; the realized CPTP map is unchanged, and all
semantic contracts in this package compare maps, not branch phases.

Rule applications are logged; replaying the trace on the input with
:func:`replay` reproduces the output exactly.  A budget of
``10 * len(commands)**2`` rule applications guards against engine bugs
(the calculus itself terminates).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AdqcError, RewriteBudgetError, RewriteUnsupportedError
from .pattern import (
    Command,
    Correct,
    Interact,
    LocalClifford,
    Measure,
    MeasurementSpec,
    Pattern,
    Prep,
    Shift,
    Signal,
    validate,
)


@dataclass(frozen=True)
class TraceStep:
    rule: str
    index: int


RewriteTrace = list


def _phase(cmd: Command) -> int:
    if isinstance(cmd, Prep):
        return 0
    if isinstance(cmd, Interact):
        return 1
    if isinstance(cmd, Measure):
        return 2
    if isinstance(cmd, (Correct, Shift)):
        return 3
    raise RewriteUnsupportedError(f"{cmd!r} is outside the rewrite calculus")


def is_standard(p: Pattern) -> bool:
    """True iff command kinds appear in phase order P <= E <= M <= (C|S)."""
    if any(isinstance(c, LocalClifford) for c in p.commands):
        return False
    last = 0
    for cmd in p.commands:
        ph = _phase(cmd)
        if ph < last:
            return False
        last = ph
    return True


def _subst(sig: Signal, qubit: str, addend: Signal) -> Signal:
    """The substitution m[addend + m_qubit / m_qubit]."""
    return sig ^ addend if qubit in sig.qubits else sig


def _resolve(cmds: list[Command], i: int) -> tuple[list[Command], str] | None:
    """Resolve the adjacent inversion at (i, i+1); None if not an inversion."""
    c1, c2 = cmds[i], cmds[i + 1]
    if _phase(c1) <= _phase(c2):
        return None

    if isinstance(c2, Prep):
        return [c2, c1], "commute-prep"

    if isinstance(c2, Interact):
        pair = {c2.ancilla, c2.system}
        if isinstance(c1, Correct) and c1.qubit in pair:
            other = c2.system if c1.qubit == c2.ancilla else c2.ancilla
            if c1.axis == "X":
                # E X_i = X_j Z_i E: the X hops across, a Z stays behind.
                return [c2, Correct(c1.qubit, "Z", c1.signal), Correct(other, "X", c1.signal)], "propagate-EX"
            return [c2, Correct(c1.qubit, "X", c1.signal)], "propagate-EZ"
        if isinstance(c1, Measure):
            return [c2, c1], "commute-EM"
        if isinstance(c1, Correct):
            return [c2, c1], "commute-EC"
        return [c2, c1], "commute-ES"  # Shift: classical, commutes freely

    if isinstance(c2, Measure):
        spec = c2.spec
        if isinstance(c1, Correct) and c1.qubit == c2.qubit:
            if spec.is_pauli_z():
                if c1.axis == "X":
                    # M^Z X^m = S^m M^Z: the correction flips the record.
                    return [c2, Shift(c2.qubit, c1.signal)], "absorb-pauliZ-X"
                return [c2], "absorb-pauliZ-Z"
            if c1.axis == "X":
                new = MeasurementSpec(spec.plane, spec.angle, spec.s ^ c1.signal, spec.t)
                return [Measure(c2.qubit, new)], "absorb-MX"
            new = MeasurementSpec(spec.plane, spec.angle, spec.s, spec.t ^ c1.signal)
            return [Measure(c2.qubit, new)], "absorb-MZ"
        if isinstance(c1, Correct):
            return [c2, c1], "commute-CM"
        # Shift past a measurement: rewrite signals that mention the
        # shifted record, then swap.
        assert isinstance(c1, Shift)
        new = MeasurementSpec(
            spec.plane, spec.angle, _subst(spec.s, c1.qubit, c1.signal), _subst(spec.t, c1.qubit, c1.signal)
        )
        return [Measure(c2.qubit, new), c1], "shift-M"

    return None


def _merge_corrections(cmds: list[Command]) -> list[Command]:
    """Merge runs of adjacent corrections per (qubit, axis); drop no-ops."""
    out: list[Command] = []
    i = 0
    while i < len(cmds):
        if not isinstance(cmds[i], Correct):
            out.append(cmds[i])
            i += 1
            continue
        j = i
        keyed: dict[tuple[str, str], Signal] = {}
        while j < len(cmds) and isinstance(cmds[j], Correct):
            c = cmds[j]
            key = (c.qubit, c.axis)
            keyed[key] = keyed[key] ^ c.signal if key in keyed else c.signal
            j += 1
        for (qubit, axis), sig in keyed.items():
            if sig:
                out.append(Correct(qubit, axis, sig))
        i = j
    return out


def standardize(p: Pattern, budget_factor: int = 10) -> tuple[Pattern, RewriteTrace]:
    """Rewrite a valid pattern into standard form.

    Returns the standardized pattern and the replayable trace of rule
    applications.  Raises :class:`RewriteBudgetError` when the budget of
    ``budget_factor * len(commands)**2`` applications is exceeded, which
    indicates an engine bug rather than a property of the input.
    """
    bad = validate(p)
    if bad:
        raise AdqcError("cannot standardize invalid pattern: " + str(bad[0]))
    if any(isinstance(c, LocalClifford) for c in p.commands):
        raise RewriteUnsupportedError("local Clifford commands have no rewrite rules")

    cmds = list(p.commands)
    trace: list[TraceStep] = []
    budget = budget_factor * max(1, len(cmds)) ** 2
    while True:
        applied = False
        for i in range(len(cmds) - 1):
            step = _resolve(cmds, i)
            if step is not None:
                replacement, rule = step
                trace.append(TraceStep(rule, i))
                cmds[i : i + 2] = replacement
                cmds = _merge_corrections(cmds)
                applied = True
                break
        if not applied:
            break
        if len(trace) > budget:
            raise RewriteBudgetError(
                f"exceeded {budget} rule applications on {len(p.commands)} commands"
            )
    out = Pattern(p.name, p.systems, p.ancillas, tuple(cmds))
    return out, trace


def replay(p: Pattern, trace: RewriteTrace) -> Pattern:
    """Re-apply a recorded trace; reproduces standardize's output."""
    cmds = list(p.commands)
    for step in trace:
        resolved = _resolve(cmds, step.index)
        if resolved is None or resolved[1] != step.rule:
            raise AdqcError(f"trace step {step} does not apply")
        cmds[step.index : step.index + 2] = resolved[0]
        cmds = _merge_corrections(cmds)
    return Pattern(p.name, p.systems, p.ancillas, tuple(cmds))


def shift_signals(p: Pattern) -> Pattern:
    """Eliminate t-dependencies and shift commands from a standard pattern.

    Measurement t-dependencies become trailing shifts (``M[s][t] = S^t
    M[s][0]``, exact for the XY plane); Pauli-Z measurements lose their
    t-dependency outright and trade an s-dependency for a shift.  All
    shifts are then pushed to the end, rewriting the signals they pass
    through, and dropped: the map is unchanged up to relabelling of the
    outcome record.  t-dependencies on general XZ/YZ measurements have
    no angle-preserving shift form and are left in place.
    """
    if not is_standard(p):
        raise AdqcError("shift_signals requires a standard pattern")

    cmds: list[Command] = []
    for cmd in p.commands:
        if not isinstance(cmd, Measure):
            cmds.append(cmd)
            continue
        spec = cmd.spec
        if spec.is_pauli_z():
            shift_sig = spec.s
            cmds.append(Measure(cmd.qubit, MeasurementSpec(spec.plane, spec.angle)))
            if shift_sig:
                cmds.append(Shift(cmd.qubit, shift_sig))
        elif spec.plane == "XY" and spec.t:
            cmds.append(Measure(cmd.qubit, MeasurementSpec(spec.plane, spec.angle, spec.s)))
            cmds.append(Shift(cmd.qubit, spec.t))
        else:
            cmds.append(cmd)

    # Bubble every shift to the end, then drop the trailing block.
    moved = True
    while moved:
        moved = False
        for i in range(len(cmds) - 1):
            c1, c2 = cmds[i], cmds[i + 1]
            if not isinstance(c1, Shift) or isinstance(c2, Shift):
                continue
            if isinstance(c2, Measure):
                spec = c2.spec
                new = MeasurementSpec(
                    spec.plane,
                    spec.angle,
                    _subst(spec.s, c1.qubit, c1.signal),
                    _subst(spec.t, c1.qubit, c1.signal),
                )
                cmds[i : i + 2] = [Measure(c2.qubit, new), c1]
            elif isinstance(c2, Correct):
                cmds[i : i + 2] = [Correct(c2.qubit, c2.axis, _subst(c2.signal, c1.qubit, c1.signal)), c1]
            else:  # Prep/Interact: classical record vs quantum command
                cmds[i : i + 2] = [c2, c1]
            moved = True
            break
    while cmds and isinstance(cmds[-1], Shift):
        cmds.pop()
    return Pattern(p.name, p.systems, p.ancillas, tuple(cmds))
