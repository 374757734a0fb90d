"""Textual pattern format: parser and round-tripping printer.

The format, one command per line, executed top to bottom::

    pattern jgen {
      system: s;
      ancilla: a;
      commands:
        N a
        E a s
        M a XY 0.7853981633974483 s[] t[]
        X s [a]
    }

Command lines:

* ``N a [theta phi]``     prepare ancilla (default |+>)
* ``E a s``               interaction between ancilla ``a`` and system ``s``
* ``M q PLANE angle [s[...]] [t[...]]``  planar measurement, PLANE in XY/XZ/YZ
* ``X q [sig]`` / ``Z q [sig]``  dependent Pauli correction
* ``X q`` / ``Z q``       unconditional local Pauli (translation device)
* ``S q [sig]``           signal shift
* ``H q`` / ``P q angle`` local Clifford (translation device)

Angles are decimal radians.  Signals are comma-separated qubit ids in
brackets; the parser cancels duplicated ids eagerly (parity semantics).
``#`` starts a comment running to end of line.
"""

from __future__ import annotations

import re

from .errors import PatternSyntaxError
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
)

_TOKEN = re.compile(
    r"""(?P<ws>[ \t]+)
      | (?P<comment>\#[^\n]*)
      | (?P<newline>\n)
      | (?P<punct>[{}();:,\[\]])
      | (?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<word>[A-Za-z_][A-Za-z_0-9.']*)
    """,
    re.VERBOSE,
)

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


class _Tokens:
    def __init__(self, text: str):
        self.items: list[tuple[str, str, int, int]] = []  # (kind, value, line, col)
        line, col = 1, 1
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise PatternSyntaxError(f"unexpected character {text[pos]!r}", line, col)
            kind = m.lastgroup or ""
            value = m.group()
            if kind == "newline":
                self.items.append(("newline", value, line, col))
                line += 1
                col = 1
            else:
                if kind not in ("ws", "comment"):
                    self.items.append((kind, value, line, col))
                col += len(value)
            pos = m.end()
        self.items.append(("eof", "", line, col))
        self.i = 0

    def peek(self, skip_newlines: bool = True) -> tuple[str, str, int, int]:
        j = self.i
        while skip_newlines and self.items[j][0] == "newline":
            j += 1
        return self.items[j]

    def next(self, skip_newlines: bool = True) -> tuple[str, str, int, int]:
        while skip_newlines and self.items[self.i][0] == "newline":
            self.i += 1
        tok = self.items[self.i]
        if tok[0] != "eof":
            self.i += 1
        return tok

    def expect(self, value: str) -> tuple[str, str, int, int]:
        tok = self.next()
        if tok[1] != value:
            raise PatternSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2], tok[3])
        return tok

    def at_line_end(self) -> bool:
        return self.items[self.i][0] in ("newline", "eof") or self.items[self.i][1] == "}"

    def end_line(self):
        tok = self.items[self.i]
        if tok[0] == "newline":
            self.i += 1
        elif tok[0] != "eof" and tok[1] != "}":
            raise PatternSyntaxError(f"unexpected trailing {tok[1]!r}", tok[2], tok[3])


def _parse_idlist(toks: _Tokens) -> list[str]:
    ids: list[str] = []
    if toks.peek()[1] == ";":
        return ids
    while True:
        tok = toks.next()
        if tok[0] != "word":
            raise PatternSyntaxError(f"expected qubit id, found {tok[1]!r}", tok[2], tok[3])
        ids.append(tok[1])
        if toks.peek()[1] != ",":
            return ids
        toks.next()


def _parse_signal(toks: _Tokens) -> Signal:
    toks.expect("[")
    seen: set[str] = set()
    if toks.peek()[1] == "]":
        toks.next()
        return Signal(frozenset())
    while True:
        tok = toks.next()
        if tok[0] != "word":
            raise PatternSyntaxError(f"expected qubit id in signal, found {tok[1]!r}", tok[2], tok[3])
        seen ^= {tok[1]}  # parity: pairs cancel
        nxt = toks.next()
        if nxt[1] == "]":
            return Signal(frozenset(seen))
        if nxt[1] != ",":
            raise PatternSyntaxError(f"expected ',' or ']' in signal, found {nxt[1]!r}", nxt[2], nxt[3])


def _parse_angle(toks: _Tokens) -> float:
    tok = toks.next(skip_newlines=False)
    if tok[0] != "number":
        raise PatternSyntaxError(f"expected angle, found {tok[1]!r}", tok[2], tok[3])
    return float(tok[1])


def _parse_qubit(toks: _Tokens) -> str:
    tok = toks.next(skip_newlines=False)
    if tok[0] != "word":
        raise PatternSyntaxError(f"expected qubit id, found {tok[1]!r}", tok[2], tok[3])
    return tok[1]


def _parse_command(toks: _Tokens, declared: set[str]) -> Command:
    tok = toks.next()
    kind, line, col = tok[1], tok[2], tok[3]

    def known(q: str) -> str:
        if q not in declared:
            raise PatternSyntaxError(f"unknown qubit {q!r}", line, col)
        return q

    if kind == "N":
        q = known(_parse_qubit(toks))
        if not toks.at_line_end():
            theta = _parse_angle(toks)
            phi = _parse_angle(toks)
            return Prep(q, theta, phi)
        return Prep(q)
    if kind == "E":
        a = known(_parse_qubit(toks))
        s = known(_parse_qubit(toks))
        return Interact(a, s)
    if kind == "M":
        q = known(_parse_qubit(toks))
        plane_tok = toks.next(skip_newlines=False)
        if plane_tok[1] not in ("XY", "XZ", "YZ"):
            raise PatternSyntaxError(f"bad plane {plane_tok[1]!r}", plane_tok[2], plane_tok[3])
        angle = _parse_angle(toks)
        s_sig = t_sig = Signal(frozenset())
        while not toks.at_line_end():
            which = toks.next(skip_newlines=False)
            if which[1] == "s":
                s_sig = _parse_signal(toks)
            elif which[1] == "t":
                t_sig = _parse_signal(toks)
            else:
                raise PatternSyntaxError(
                    f"expected s[...] or t[...], found {which[1]!r}", which[2], which[3]
                )
        for q2 in (s_sig.qubits | t_sig.qubits):
            if q2 not in declared:
                raise PatternSyntaxError(f"unknown qubit {q2!r} in signal", line, col)
        return Measure(q, MeasurementSpec(plane_tok[1], angle, s_sig, t_sig))
    if kind in ("X", "Z"):
        q = known(_parse_qubit(toks))
        if toks.at_line_end():
            return LocalClifford(q, kind)
        sig = _parse_signal(toks)
        for q2 in sig.qubits:
            if q2 not in declared:
                raise PatternSyntaxError(f"unknown qubit {q2!r} in signal", line, col)
        return Correct(q, kind, sig)
    if kind == "S":
        q = known(_parse_qubit(toks))
        sig = _parse_signal(toks)
        for q2 in sig.qubits:
            if q2 not in declared:
                raise PatternSyntaxError(f"unknown qubit {q2!r} in signal", line, col)
        return Shift(q, sig)
    if kind == "H":
        return LocalClifford(known(_parse_qubit(toks)), "H")
    if kind == "P":
        q = known(_parse_qubit(toks))
        return LocalClifford(q, "P", _parse_angle(toks))
    raise PatternSyntaxError(f"unknown command {kind!r}", line, col)


def parse(text: str) -> Pattern:
    """Parse the textual format into a :class:`~adqc.pattern.Pattern`."""
    toks = _Tokens(text)
    toks.expect("pattern")
    name_tok = toks.next()
    if name_tok[0] != "word":
        raise PatternSyntaxError(f"expected pattern name, found {name_tok[1]!r}", name_tok[2], name_tok[3])
    toks.expect("{")
    toks.expect("system")
    toks.expect(":")
    systems = _parse_idlist(toks)
    toks.expect(";")
    toks.expect("ancilla")
    toks.expect(":")
    ancillas = _parse_idlist(toks)
    toks.expect(";")
    dup = [q for q in set(systems) | set(ancillas) if systems.count(q) + ancillas.count(q) > 1]
    if dup:
        raise PatternSyntaxError(f"duplicate declaration of {sorted(dup)!r}", name_tok[2], name_tok[3])
    declared = set(systems) | set(ancillas)

    commands: list[Command] = []
    if toks.peek()[1] == "commands":
        toks.expect("commands")
        toks.expect(":")
        while toks.peek()[1] != "}":
            commands.append(_parse_command(toks, declared))
            toks.end_line()
    toks.expect("}")
    tail = toks.next()
    if tail[0] != "eof":
        raise PatternSyntaxError(f"unexpected trailing {tail[1]!r}", tail[2], tail[3])
    return Pattern(name_tok[1], tuple(systems), tuple(ancillas), tuple(commands))


def _fmt_angle(x: float) -> str:
    return repr(float(x))


def _fmt_signal(sig: Signal) -> str:
    return "[" + ",".join(sig.sorted()) + "]"


def _fmt_command(cmd: Command) -> str:
    if isinstance(cmd, Prep):
        if cmd.theta is None:
            return f"N {cmd.qubit}"
        theta, phi = cmd.angles()
        return f"N {cmd.qubit} {_fmt_angle(theta)} {_fmt_angle(phi)}"
    if isinstance(cmd, Interact):
        return f"E {cmd.ancilla} {cmd.system}"
    if isinstance(cmd, Measure):
        spec = cmd.spec
        return (
            f"M {cmd.qubit} {spec.plane} {_fmt_angle(spec.angle)}"
            f" s{_fmt_signal(spec.s)} t{_fmt_signal(spec.t)}"
        )
    if isinstance(cmd, Correct):
        return f"{cmd.axis} {cmd.qubit} {_fmt_signal(cmd.signal)}"
    if isinstance(cmd, Shift):
        return f"S {cmd.qubit} {_fmt_signal(cmd.signal)}"
    if isinstance(cmd, LocalClifford):
        if cmd.kind == "P":
            return f"P {cmd.qubit} {_fmt_angle(cmd.angle)}"
        return f"{cmd.kind} {cmd.qubit}"
    raise TypeError(f"cannot print {cmd!r}")


def print_pattern(p: Pattern) -> str:
    """Render a pattern in the textual format; inverse of :func:`parse`."""
    lines = [
        f"pattern {p.name} {{",
        f"  system: {','.join(p.systems)};",
        f"  ancilla: {','.join(p.ancillas)};",
    ]
    if p.commands:
        lines.append("  commands:")
        lines.extend(f"    {_fmt_command(c)}" for c in p.commands)
    lines.append("}")
    return "\n".join(lines) + "\n"
