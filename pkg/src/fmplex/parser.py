"""Problem instances from an SMT-LIB v2 subset or a plain line format, and result output.

Plain format, one item per line (``#`` starts a comment)::

    vars: x1, x2            # optional, fixes the variable order
    eliminate: x2, x1       # optional, makes this an elimination problem
    -1*x1 + -1*x2 <= -4
    2/3*x1 < 1/2

Relations are ``<=, <, =, !=, >=, >``; both sides may be linear expressions.
Without a ``vars:`` line the variables are ordered by name with digit runs
compared numerically (``x2`` before ``x10``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import ZERO, LinearConstraint, Relation, Sat, Unknown, Unsat, fmt_rational

CHECK_SAT = "check-sat"
ELIMINATE = "eliminate"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass
class ProblemInstance:
    variable_names: list
    constraints: list
    goal: str = CHECK_SAT
    eliminate: list = field(default_factory=list)  # variable indices, in order

    @property
    def n(self) -> int:
        return len(self.variable_names)

    def index(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r}") from None


def _normalize(lin: dict, const: Fraction, rel: str, names: list) -> LinearConstraint:
    """``lin . x + const  rel  0`` as a constraint with ``<=, <, =, !=``."""
    coeffs = [lin.get(v, ZERO) for v in names]
    rhs = -const
    if rel in (">=", ">"):
        coeffs = [-c for c in coeffs]
        rhs = -rhs
        rel = "<=" if rel == ">=" else "<"
    relation = {"<=": Relation.LEQ, "<": Relation.LT, "=": Relation.EQ, "!=": Relation.NEQ}[rel]
    return LinearConstraint(tuple(coeffs), relation, rhs)


# -- SMT-LIB --------------------------------------------------------------------

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|\|[^|]*\||[^\s()|;]+")


@dataclass
class _Sym:
    text: str
    line: int
    col: int


def _tokenize(text: str):
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        tok = m.group(0)
        if not tok.isspace() and not tok.startswith(";"):
            yield _Sym(tok, line, col)
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()


def _read_sexprs(text: str) -> list:
    stack = [[]]
    opens = []
    for tok in _tokenize(text):
        if tok.text == "(":
            stack.append([])
            opens.append(tok)
        elif tok.text == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", tok.line, tok.col)
            done = stack.pop()
            start = opens.pop()
            stack[-1].append(_List(done, start.line, start.col))
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise ParseError("unbalanced '('", opens[-1].line, opens[-1].col)
    return stack[0]


class _List(list):
    def __init__(self, items, line, col):
        super().__init__(items)
        self.line = line
        self.col = col


def _where(node):
    return node.line, node.col


def _head(node) -> str | None:
    if isinstance(node, _List) and node and isinstance(node[0], _Sym):
        return node[0].text
    return None


_NUMERAL = re.compile(r"^-?[0-9]+(\.[0-9]+)?$")  # a leading minus is a common extension


def _constant(node) -> Fraction | None:
    if isinstance(node, _Sym):
        return Fraction(node.text) if _NUMERAL.match(node.text) else None
    h = _head(node)
    if h == "/" and len(node) == 3:
        p, q = _constant(node[1]), _constant(node[2])
        if p is not None and q is not None:
            if q == 0:
                raise ParseError("division by zero", *_where(node))
            return p / q
    if h == "-" and len(node) == 2:
        v = _constant(node[1])
        return -v if v is not None else None
    return None


class _SmtReader:
    def __init__(self):
        self.names = []
        self.constraints = []
        self.logic = None

    def term(self, node) -> tuple:
        """``(coefficients by name, constant)``."""
        c = _constant(node)
        if c is not None:
            return {}, c
        if isinstance(node, _Sym):
            name = node.text.strip("|")
            if name not in self.names:
                raise ParseError(f"unknown symbol {node.text!r}", node.line, node.col)
            return {name: Fraction(1)}, ZERO
        h = _head(node)
        args = node[1:]
        if h == "+" and args:
            return self._sum([self.term(a) for a in args], [1] * len(args))
        if h == "-" and len(args) == 1:
            return self._sum([self.term(args[0])], [-1])
        if h == "-" and len(args) >= 2:
            return self._sum([self.term(a) for a in args], [1] + [-1] * (len(args) - 1))
        if h == "*" and len(args) >= 2:
            parts = [self.term(a) for a in args]
            nonconst = [p for p in parts if p[0]]
            if len(nonconst) > 1:
                raise ParseError("non-linear term", *_where(node))
            factor = Fraction(1)
            for lin, const in parts:
                if not lin:
                    factor *= const
            if not nonconst:
                return {}, factor
            lin, const = nonconst[0]
            return {v: factor * c for v, c in lin.items()}, factor * const
        if h == "/" and len(args) == 2:
            q = _constant(args[1])
            if q is None:
                raise ParseError("non-linear term", *_where(node))
            if q == 0:
                raise ParseError("division by zero", *_where(node))
            lin, const = self.term(args[0])
            return {v: c / q for v, c in lin.items()}, const / q
        where = _where(node)
        raise ParseError(f"unsupported term {h or '()'!r}", *where)

    @staticmethod
    def _sum(parts, signs) -> tuple:
        lin, const = {}, ZERO
        for (l, c), s in zip(parts, signs):
            const += s * c
            for v, a in l.items():
                lin[v] = lin.get(v, ZERO) + s * a
        return lin, const

    def atom(self, node):
        h = _head(node)
        if h not in ("<=", "<", ">=", ">", "=", "distinct"):
            line, col = _where(node) if isinstance(node, _List) else (node.line, node.col)
            raise ParseError(f"unsupported atom {h or getattr(node, 'text', '()')!r}", line, col)
        if len(node) != 3:
            raise ParseError(f"'{h}' expects two arguments", *_where(node))
        l1, c1 = self.term(node[1])
        l2, c2 = self.term(node[2])
        lin, const = self._sum([(l1, c1), (l2, c2)], [1, -1])
        rel = "!=" if h == "distinct" else h
        self.constraints.append(_normalize(lin, const, rel, self.names))

    def command(self, node):
        h = _head(node)
        if h is None:
            line, col = _where(node) if isinstance(node, _List) else (node.line, node.col)
            raise ParseError("expected a command", line, col)
        if h == "set-logic":
            logic = node[1].text if len(node) > 1 and isinstance(node[1], _Sym) else None
            if logic not in ("QF_LRA", "LRA"):
                raise ParseError(f"unsupported logic {logic!r}", *_where(node))
            self.logic = logic
        elif h in ("declare-fun", "declare-const"):
            if h == "declare-fun":
                ok = len(node) == 4 and isinstance(node[2], _List) and not node[2]
                sort = node[3] if ok else None
            else:
                ok = len(node) == 3
                sort = node[2] if ok else None
            if not ok or not isinstance(sort, _Sym) or sort.text != "Real":
                raise ParseError("only constants of sort Real can be declared", *_where(node))
            name = node[1].text.strip("|")
            if name in self.names:
                raise ParseError(f"duplicate declaration of {name!r}", *_where(node))
            self.names.append(name)
            # widen earlier constraints with a zero column
            self.constraints = [c.padded(len(self.names)) for c in self.constraints]
        elif h == "assert":
            if len(node) != 2:
                raise ParseError("assert expects one formula", *_where(node))
            body = node[1]
            if _head(body) == "and":
                for a in body[1:]:
                    self.atom(a)
            else:
                self.atom(body)
        elif h in ("check-sat", "exit", "get-model", "set-info", "set-option", "get-info"):
            pass
        else:
            raise ParseError(f"unsupported command {h!r}", *_where(node))


def parse_smtlib(text: str | bytes) -> ProblemInstance:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    reader = _SmtReader()
    for node in _read_sexprs(text):
        reader.command(node)
    n = len(reader.names)
    return ProblemInstance(list(reader.names), [c.padded(n) for c in reader.constraints])


# -- plain format ---------------------------------------------------------------

_REL = re.compile(r"<=|>=|!=|==|<|>|=")
_NUM = r"[0-9]+(?:\.[0-9]+)?(?:/[0-9]+)?"
_IDENT = r"[A-Za-z_][A-Za-z0-9_.']*"
_PLAIN_TERM = re.compile(
    rf"\s*([+-](?:\s*[+-])*)?\s*(?:({_NUM})\s*(\*)?\s*({_IDENT})?|({_IDENT}))\s*"
)


def _natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def _parse_expr(text: str, lineno: int) -> tuple:
    lin, const = {}, ZERO
    pos = 0
    first = True
    text = text.strip()
    if not text:
        raise ParseError("empty side of a relation", lineno)
    while pos < len(text):
        m = _PLAIN_TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"cannot parse {text[pos:]!r}", lineno)
        sign, num, star, var, bare = m.groups()
        if sign is None and not first:
            raise ParseError(f"missing operator before {text[pos:].strip()!r}", lineno)
        if star and var is None:
            raise ParseError("'*' must be followed by a variable", lineno)
        s = -1 if sign is not None and sign.count("-") % 2 else 1
        if bare is not None:
            lin[bare] = lin.get(bare, ZERO) + s
        elif var is not None:
            lin[var] = lin.get(var, ZERO) + s * Fraction(num)
        else:
            const += s * Fraction(num)
        pos = m.end()
        first = False
    return lin, const


def parse_plain(text: str | bytes) -> ProblemInstance:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    declared = None
    eliminate_names = None
    raw = []
    seen = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("vars:") or low.startswith("eliminate:"):
            key, _, rest = line.partition(":")
            names = [t.strip() for t in rest.split(",") if t.strip()]
            for nm in names:
                if not re.fullmatch(_IDENT, nm):
                    raise ParseError(f"bad variable name {nm!r}", lineno)
            if key.lower() == "vars":
                declared = names
            else:
                eliminate_names = (names, lineno)
            continue
        rels = list(_REL.finditer(line))
        if len(rels) != 1:
            raise ParseError("expected exactly one relation", lineno)
        m = rels[0]
        rel = "=" if m.group(0) == "==" else m.group(0)
        left = _parse_expr(line[: m.start()], lineno)
        right = _parse_expr(line[m.end():], lineno)
        lin = dict(left[0])
        for v, c in right[0].items():
            lin[v] = lin.get(v, ZERO) - c
        for v in lin:
            if v not in seen:
                seen.append(v)
        raw.append((lin, left[1] - right[1], rel, lineno))
    if declared is not None:
        names = list(declared)
        for v in seen:
            if v not in names:
                line = next(r[3] for r in raw if v in r[0])
                raise ParseError(f"undeclared variable {v!r}", line)
    else:
        names = sorted(seen, key=_natural_key)
    constraints = [_normalize(lin, const, rel, names) for lin, const, rel, _ in raw]
    inst = ProblemInstance(names, constraints)
    if eliminate_names is not None:
        order, lineno = eliminate_names
        for nm in order:
            if nm not in names:
                if declared is not None:
                    raise ParseError(f"unknown variable {nm!r}", lineno)
                names.append(nm)
        n = len(names)
        inst.constraints = [c.padded(n) for c in inst.constraints]
        inst.goal = ELIMINATE
        inst.eliminate = [names.index(nm) for nm in order]
    return inst


def parse_file(path: str, fmt: str = "auto") -> ProblemInstance:
    with open(path, "rb") as fh:
        data = fh.read()
    if fmt == "auto":
        fmt = "smt" if str(path).endswith(".smt2") else "plain"
    return parse_smtlib(data) if fmt == "smt" else parse_plain(data)


# -- output ---------------------------------------------------------------------


def format_constraint(c: LinearConstraint, names: Sequence[str] | None = None) -> str:
    from .fmplex import render_row

    return render_row(c.coeffs, c.rhs, names, c.relation.value)


def emit_instance(inst: ProblemInstance) -> str:
    lines = ["vars: " + ", ".join(inst.variable_names)] if inst.variable_names else []
    if inst.goal == ELIMINATE:
        lines.append("eliminate: " + ", ".join(inst.variable_names[k] for k in inst.eliminate))
    lines += [format_constraint(c, inst.variable_names) for c in inst.constraints]
    return "\n".join(lines) + "\n"


def emit_result(outcome, fmt: str = "smt", names: Sequence[str] | None = None) -> str:
    """Text for a ``Sat``/``Unsat``/``Unknown`` outcome or a QE result."""
    from .fmplex import QeResult

    if isinstance(outcome, QeResult):
        return outcome.render(names)
    if isinstance(outcome, Sat):
        keys = sorted(outcome.model)
        label = [names[k] if names and k < len(names) else f"x{k + 1}" for k in keys]
        if fmt == "smt":
            defs = " ".join(
                f"(define-fun {nm} () Real {fmt_rational(outcome.model[k])})" for nm, k in zip(label, keys)
            )
            return "sat\n(model" + (" " + defs if defs else "") + ")"
        return "sat" + "".join(f"\n{nm} = {fmt_rational(outcome.model[k])}" for nm, k in zip(label, keys))
    if isinstance(outcome, Unsat):
        return "unsat\ncore: " + " ".join(str(k + 1) for k in sorted(outcome.core))
    if isinstance(outcome, Unknown):
        return f"unknown\nreason: {outcome.reason}"
    raise TypeError(f"cannot emit {type(outcome).__name__}")
