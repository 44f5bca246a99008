"""Reader and writer for a small OpenQASM 2 subset.

Supported: the ``OPENQASM``/``include`` header, ``qreg``/``creg``
declarations, the gates of :mod:`.ir` with register broadcast, and
``barrier``/``measure``/``reset`` statements, which are dropped.  Parameter
expressions accept ``pi``, numbers, ``+ - * / ^``, unary minus and the
functions ``sin cos tan exp ln sqrt``.
"""

from __future__ import annotations

import math
import re
from typing import NamedTuple

from ..errors import ParseError, UnsupportedGate
from .ir import N_PARAMS, ONE_QUBIT, TWO_QUBIT, Circuit, Gate

SUPPORTED = ONE_QUBIT | TWO_QUBIT
_IGNORED = {"barrier", "measure", "reset"}
_FUNCS = {"sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
          "ln": math.log, "sqrt": math.sqrt}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<real>(\d+\.\d*|\.\d+)([eE][-+]?\d+)?|\d+[eE][-+]?\d+)
  | (?P<int>\d+)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[\[\](){};,+\-*/^])
""", re.VERBOSE)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.regs = {}  # name -> (offset, size)
        self.n_qubits = 0
        self.gates = []

    # token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, message, expected=None, tok=None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col, expected)

    def accept(self, text):
        if self.tok.text == text and self.tok.kind != "string":
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.fail(f"unexpected {self.tok.text or 'end of input'!r}", repr(text))

    def expect_kind(self, kind, what):
        tok = self.tok
        if tok.kind != kind:
            self.fail(f"unexpected {tok.text or 'end of input'!r}", what)
        self.i += 1
        return tok

    # grammar
    def parse(self):
        if self.tok.text == "OPENQASM":
            self.i += 1
            v = self.tok
            if v.kind not in ("real", "int"):
                self.fail("bad version", "version number")
            if not v.text.startswith("2"):
                self.fail(f"unsupported OpenQASM version {v.text}")
            self.i += 1
            self.expect(";")
        while self.tok.kind != "eof":
            self.statement()
        if self.n_qubits == 0:
            self.fail("no qreg declared", "qreg")
        return Circuit(self.n_qubits, self.gates)

    def statement(self):
        tok = self.tok
        if tok.kind != "id":
            self.fail(f"unexpected {tok.text!r}", "statement")
        word = tok.text
        if word == "include":
            self.i += 1
            self.expect_kind("string", "file name")
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.i += 1
            name = self.expect_kind("id", "register name").text
            self.expect("[")
            size = int(self.expect_kind("int", "register size").text)
            self.expect("]")
            self.expect(";")
            if word == "qreg":
                if name in self.regs:
                    self.fail(f"register {name!r} redeclared", tok=tok)
                self.regs[name] = (self.n_qubits, size)
                self.n_qubits += size
        elif word in _IGNORED:
            while self.tok.text != ";":
                if self.tok.kind == "eof":
                    self.fail("unterminated statement", "';'")
                self.i += 1
            self.i += 1
        elif word in ("gate", "opaque", "if"):
            raise UnsupportedGate(word, tok.line, tok.col)
        else:
            self.gate_call()

    def gate_call(self):
        tok = self.expect_kind("id", "gate name")
        name = tok.text
        if name not in SUPPORTED:
            raise UnsupportedGate(name, tok.line, tok.col)
        params = []
        if self.accept("("):
            if not self.accept(")"):
                params.append(self.expr())
                while self.accept(","):
                    params.append(self.expr())
                self.expect(")")
        want = N_PARAMS.get(name, 0)
        if len(params) != want:
            self.fail(f"{name} takes {want} parameter(s), got {len(params)}", tok=tok)
        args = [self.argument()]
        while self.accept(","):
            args.append(self.argument())
        self.expect(";")
        n = 1 if name in ONE_QUBIT else 2
        if len(args) != n:
            self.fail(f"{name} takes {n} operand(s), got {len(args)}", tok=tok)
        sizes = {len(a) for a in args if len(a) > 1}
        if len(sizes) > 1:
            self.fail("register size mismatch in broadcast", tok=tok)
        width = sizes.pop() if sizes else 1
        for k in range(width):
            qs = tuple(a[k] if len(a) > 1 else a[0] for a in args)
            if len(set(qs)) != len(qs):
                self.fail(f"repeated operand in {name}", tok=tok)
            self.gates.append(Gate(name, qs, tuple(params)))

    def argument(self):
        tok = self.expect_kind("id", "register")
        if tok.text not in self.regs:
            self.fail(f"undeclared register {tok.text!r}", tok=tok)
        offset, size = self.regs[tok.text]
        if self.accept("["):
            itok = self.expect_kind("int", "qubit index")
            idx = int(itok.text)
            self.expect("]")
            if idx >= size:
                self.fail(f"index {idx} out of range for {tok.text}[{size}]", tok=itok)
            return [offset + idx]
        return list(range(offset, offset + size))

    # expressions: sum := term (('+'|'-') term)*, etc.
    def expr(self):
        v = self.term()
        while self.tok.text in ("+", "-"):
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.tok.text
            tok = self.tok
            self.i += 1
            rhs = self.unary()
            if op == "/" and rhs == 0:
                self.fail("division by zero", tok=tok)
            v = v * rhs if op == "*" else v / rhs
        return v

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            return base ** self.unary()
        return base

    def atom(self):
        tok = self.tok
        if tok.kind in ("real", "int"):
            self.i += 1
            return float(tok.text)
        if tok.kind == "id":
            self.i += 1
            if tok.text == "pi":
                return math.pi
            if tok.text in _FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                try:
                    return _FUNCS[tok.text](arg)
                except ValueError:
                    self.fail(f"{tok.text}({arg}) is undefined", tok=tok)
            self.fail(f"unknown identifier {tok.text!r}", "number, 'pi' or function", tok)
        if self.accept("("):
            v = self.expr()
            self.expect(")")
            return v
        self.fail(f"unexpected {tok.text or 'end of input'!r}", "expression")


def parse_qasm(text: str) -> Circuit:
    """Parse OpenQASM 2 source into a :class:`Circuit`.

    Several ``qreg`` declarations are concatenated in declaration order.

    Raises:
        ParseError: malformed input, with line/column and the expected token.
        UnsupportedGate: a gate outside the supported set (e.g. ``ccx``).
    """
    return _Parser(text).parse()


def emit_qasm(circ: Circuit) -> str:
    """OpenQASM 2 text for a circuit of standard gates.

    Angles are written with ``repr`` so that parsing the output reproduces the
    gate list exactly.
    """
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circ.n_qubits}];"]
    for g in circ.gates:
        if g.name not in SUPPORTED:
            raise UnsupportedGate(g.name)
        head = g.name
        if g.params:
            head += "(" + ",".join(repr(float(p)) for p in g.params) + ")"
        ops = ",".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{head} {ops};")
    return "\n".join(lines) + "\n"
