"""Line-oriented argument files.

::

    atoms typeI black
    constraint P(typeI) = 0.6
    constraint P(black | typeI) = 0.9
    constraint P(black | !typeI) = 0.2
    observe black
    query typeI

Statements: ``atoms``, ``constraint``, ``given`` (background, structural),
``observe`` (evidence, conditioned on), ``query``, ``threshold``,
``act NAME { F: u; ... }`` and ``support NAME { ... concludes F }``. Blocks
may span lines. ``#`` starts a comment. Numbers are decimals or ``a/b`` and
are read exactly.

Inside ``P(...)`` a top-level ``|`` separates target from condition, so a
disjunction there must be parenthesised: ``P((a | b) | c)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .credal import ProbStatement
from .decision import Act, DecisionProblem
from .errors import (
    ArgumentFileError,
    FormulaSyntaxError,
    UnknownAtomError,
    WorldSpaceError,
)
from .logic import (
    DEFAULT_ATOM_CAP,
    TOP,
    Formula,
    WorldSpace,
    parse_formula,
    render,
)
from .schema import SchemaIArgument, SchemaIIArgument, UncertaintyPremise

_NUMBER = re.compile(r"-?(?:\d+/\d+|\d+(?:\.\d+)?|\.\d+)")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class SupportBlock:
    name: str
    concludes: Formula
    constraints: tuple[ProbStatement, ...] = ()
    given: tuple[Formula, ...] = ()
    observe: tuple[Formula, ...] = ()
    threshold: Fraction | None = None


@dataclass(frozen=True)
class ArgumentFile:
    space: WorldSpace
    constraints: tuple[ProbStatement, ...] = ()
    given: tuple[Formula, ...] = ()
    observe: tuple[Formula, ...] = ()
    query: Formula | None = None
    threshold: Fraction | None = None
    acts: tuple[Act, ...] = ()
    supports: tuple[SupportBlock, ...] = ()

    @property
    def atoms(self) -> tuple[str, ...]:
        return self.space.atoms

    def uncertainty(self) -> UncertaintyPremise:
        return UncertaintyPremise(self.constraints)

    def schema_i(self) -> SchemaIArgument:
        if self.query is None:
            raise ValueError("the file has no query")
        return SchemaIArgument(
            self.space, self.uncertainty(), self.query, self.given, self.observe
        )

    def schema_ii(self, threshold: Fraction | None = None) -> SchemaIIArgument:
        p = threshold if threshold is not None else self.threshold
        if p is None:
            raise ValueError("the file has no threshold")
        return SchemaIIArgument(self.schema_i(), p)

    def support_arguments(self) -> list[tuple[Formula, SchemaIIArgument]]:
        out = []
        for s in self.supports:
            p = s.threshold if s.threshold is not None else self.threshold
            if p is None:
                raise ValueError(f"support {s.name} has no threshold")
            base = SchemaIArgument(
                self.space, UncertaintyPremise(s.constraints), s.concludes, s.given, s.observe
            )
            out.append((s.concludes, SchemaIIArgument(base, p)))
        return out

    def decision_problem(self) -> DecisionProblem:
        return DecisionProblem(self.space, self.uncertainty(), self.acts, self.given, self.observe)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


@dataclass
class _Line:
    number: int
    text: str  # comment stripped, right-stripped
    indent: int

    @property
    def keyword(self) -> str:
        return self.text.split(None, 1)[0] if self.text.strip() else ""

    def rest(self) -> tuple[str, int]:
        """Text after the keyword and its 1-based column."""
        body = self.text[self.indent:]
        kw = self.keyword
        after = body[len(kw):]
        stripped = after.lstrip()
        col = self.indent + len(kw) + (len(after) - len(stripped)) + 1
        return stripped, col


@dataclass
class _Block:
    keyword: str
    name: str
    opener: _Line
    lines: list[_Line] = field(default_factory=list)
    inline: str = ""
    inline_col: int = 1


def _lines(text: str) -> list[_Line]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            out.append(_Line(i, body, len(body) - len(body.lstrip())))
    return out


def parse_number(text: str, line: int, col: int) -> Fraction:
    text = text.strip()
    if not _NUMBER.fullmatch(text):
        raise ArgumentFileError(f"expected a number, found {text!r}", line, col)
    return Fraction(text)


def _threshold(text: str, line: int, col: int) -> Fraction:
    p = parse_number(text, line, col)
    if not Fraction(1, 2) < p <= 1:
        raise ArgumentFileError(f"threshold {p} must lie in (1/2, 1]", line, col)
    return p


def _prob(value: Fraction, line: int, col: int) -> Fraction:
    if not 0 <= value <= 1:
        raise ArgumentFileError(f"probability {value} outside [0, 1]", line, col)
    return value


def _value(text: str, line: int, col: int) -> Fraction:
    # col is where text starts; errors point at the number itself
    col += len(text) - len(text.lstrip())
    return _prob(parse_number(text, line, col), line, col)


class _Parser:
    def __init__(self, text: str, max_atoms: int):
        self.lines = _lines(text)
        self.max_atoms = max_atoms
        self.space: WorldSpace | None = None

    def formula(self, text: str, line: int, col: int) -> Formula:
        try:
            return parse_formula(text, self.space)
        except FormulaSyntaxError as exc:
            reason = str(exc).rsplit(" (at position", 1)[0]
            raise ArgumentFileError(reason, line, col + exc.position) from None
        except UnknownAtomError as exc:
            offset = exc.position or 0
            raise ArgumentFileError(f"unknown atom {exc.name!r}", line, col + offset) from None

    # -- structure ---------------------------------------------------------

    def group(self) -> list[_Line | _Block]:
        """Collapse ``act``/``support`` blocks into single items."""
        items: list[_Line | _Block] = []
        i = 0
        while i < len(self.lines):
            ln = self.lines[i]
            if ln.keyword in ("act", "support"):
                block, i = self.block(i)
                items.append(block)
                continue
            if ln.text.strip() == "}":
                raise ArgumentFileError("unmatched '}'", ln.number, ln.indent + 1)
            items.append(ln)
            i += 1
        return items

    def block(self, i: int) -> tuple[_Block, int]:
        ln = self.lines[i]
        rest, col = ln.rest()
        m = _NAME.match(rest)
        if not m:
            raise ArgumentFileError(f"{ln.keyword} needs a name", ln.number, col)
        name = m.group(0)
        after = rest[m.end():].lstrip()
        brace_col = col + len(rest) - len(after)
        if not after.startswith("{"):
            raise ArgumentFileError("expected '{'", ln.number, brace_col)
        inner = after[1:]
        block = _Block(ln.keyword, name, ln, inline_col=brace_col + 1)
        if "}" in inner:
            body, tail = inner.split("}", 1)
            if tail.strip():
                raise ArgumentFileError("unexpected text after '}'", ln.number, brace_col)
            block.inline = body
            return block, i + 1
        block.inline = inner
        j = i + 1
        while j < len(self.lines):
            cur = self.lines[j]
            stripped = cur.text.strip()
            if stripped.endswith("}"):
                before = stripped[:-1].strip()
                if before:
                    block.lines.append(_Line(cur.number, cur.text.rstrip()[:-1].rstrip(), cur.indent))
                return block, j + 1
            if cur.keyword in ("act", "support"):
                raise ArgumentFileError(f"nested {cur.keyword} block", cur.number, cur.indent + 1)
            block.lines.append(cur)
            j += 1
        raise ArgumentFileError(f"unterminated {ln.keyword} block", ln.number, ln.indent + 1)

    # -- statements --------------------------------------------------------

    def constraint(self, ln: _Line) -> ProbStatement:
        rest, col = ln.rest()
        if not rest.startswith("P("):
            raise ArgumentFileError("expected P(...)", ln.number, col)
        depth, close, bars = 0, None, []
        for k in range(1, len(rest)):
            ch = rest[k]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    close = k
                    break
            elif ch == "|" and depth == 1:
                bars.append(k)
        if close is None:
            raise ArgumentFileError("unclosed P(", ln.number, col + 1)
        if len(bars) > 1:
            raise ArgumentFileError(
                "more than one '|' inside P(...); parenthesise disjunctions",
                ln.number, col + bars[1],
            )
        if bars:
            target = self.formula(rest[2:bars[0]], ln.number, col + 2)
            condition = self.formula(rest[bars[0] + 1:close], ln.number, col + bars[0] + 1)
        else:
            target = self.formula(rest[2:close], ln.number, col + 2)
            condition = TOP
        tail = rest[close + 1:]
        stripped = tail.lstrip()
        tcol = col + close + 1 + len(tail) - len(stripped)
        for op, make in ((">=", ProbStatement.at_least), ("<=", ProbStatement.at_most), ("=", ProbStatement.equal)):
            if stripped.startswith(op):
                v = _value(stripped[len(op):], ln.number, tcol + len(op))
                return make(target, v, condition)
        m = re.fullmatch(r"in\s*\[([^,\]]*),([^\]]*)\]", stripped)
        if m:
            lo = _value(m.group(1), ln.number, tcol + m.start(1))
            hi = _value(m.group(2), ln.number, tcol + m.start(2))
            if lo > hi:
                raise ArgumentFileError(f"empty interval [{lo}, {hi}]", ln.number, tcol)
            return ProbStatement.between(target, lo, hi, condition)
        raise ArgumentFileError("expected '=', '>=', '<=' or 'in [x, y]'", ln.number, tcol)

    def act(self, block: _Block) -> Act:
        pieces = [(block.opener.number, block.inline_col, block.inline)]
        pieces += [(ln.number, 1, ln.text) for ln in block.lines]
        clauses = []
        for number, base, text in pieces:
            offset = 0
            for chunk in text.split(";"):
                if chunk.strip():
                    lead = len(chunk) - len(chunk.lstrip())
                    col = base + offset + lead
                    if ":" not in chunk:
                        raise ArgumentFileError("expected 'formula: utility'", number, col)
                    f_text, u_text = chunk.rsplit(":", 1)
                    f = self.formula(f_text, number, col - lead)
                    u = parse_number(u_text, number, col + len(f_text) + 1 - lead)
                    clauses.append((f, u))
                offset += len(chunk) + 1
        if not clauses:
            raise ArgumentFileError(f"act {block.name} has no clauses", block.opener.number, 1)
        return Act(block.name, tuple(clauses))

    def support(self, block: _Block) -> SupportBlock:
        opener = block.opener
        if block.inline.strip():
            raise ArgumentFileError(
                "support blocks must start their body on a new line",
                opener.number, block.inline_col,
            )
        constraints, given, observe = [], [], []
        threshold = concludes = None
        for ln in block.lines:
            kw = ln.keyword
            rest, col = ln.rest()
            if kw == "constraint":
                constraints.append(self.constraint(ln))
            elif kw == "given":
                given.append(self.formula(rest, ln.number, col))
            elif kw == "observe":
                observe.append(self.formula(rest, ln.number, col))
            elif kw == "threshold":
                if threshold is not None:
                    raise ArgumentFileError("duplicate threshold", ln.number, ln.indent + 1)
                threshold = _threshold(rest, ln.number, col)
            elif kw == "concludes":
                if concludes is not None:
                    raise ArgumentFileError("duplicate concludes", ln.number, ln.indent + 1)
                concludes = self.formula(rest, ln.number, col)
            else:
                raise ArgumentFileError(
                    f"unexpected {kw!r} inside support block", ln.number, ln.indent + 1
                )
        if concludes is None:
            raise ArgumentFileError(f"support {block.name} lacks 'concludes'", opener.number, 1)
        return SupportBlock(
            block.name, concludes, tuple(constraints), tuple(given), tuple(observe), threshold
        )

    def parse(self) -> ArgumentFile:
        items = self.group()
        atoms_lines = [it for it in items if isinstance(it, _Line) and it.keyword == "atoms"]
        if not atoms_lines:
            raise ArgumentFileError("missing 'atoms' line", 1, 1)
        if len(atoms_lines) > 1:
            raise ArgumentFileError("duplicate atoms section", atoms_lines[1].number, 1)
        rest, col = atoms_lines[0].rest()
        try:
            self.space = WorldSpace(tuple(rest.split()), cap=self.max_atoms)
        except WorldSpaceError as exc:
            raise ArgumentFileError(str(exc), atoms_lines[0].number, col) from None

        constraints, given, observe, acts, supports = [], [], [], [], []
        query = threshold = None
        for it in items:
            if isinstance(it, _Block):
                names = [a.name for a in acts] if it.keyword == "act" else [s.name for s in supports]
                if it.name in names:
                    raise ArgumentFileError(
                        f"duplicate {it.keyword} {it.name!r}", it.opener.number, 1
                    )
                if it.keyword == "act":
                    acts.append(self.act(it))
                else:
                    supports.append(self.support(it))
                continue
            kw = it.keyword
            rest, col = it.rest()
            if kw == "atoms":
                continue
            if kw == "constraint":
                constraints.append(self.constraint(it))
            elif kw == "given":
                given.append(self.formula(rest, it.number, col))
            elif kw == "observe":
                observe.append(self.formula(rest, it.number, col))
            elif kw == "query":
                if query is not None:
                    raise ArgumentFileError("duplicate query", it.number, it.indent + 1)
                query = self.formula(rest, it.number, col)
            elif kw == "threshold":
                if threshold is not None:
                    raise ArgumentFileError("duplicate threshold", it.number, it.indent + 1)
                threshold = _threshold(rest, it.number, col)
            else:
                raise ArgumentFileError(f"unknown statement {kw!r}", it.number, it.indent + 1)
        return ArgumentFile(
            self.space, tuple(constraints), tuple(given), tuple(observe),
            query, threshold, tuple(acts), tuple(supports),
        )


def parse_argument_file(text: str, max_atoms: int = DEFAULT_ATOM_CAP) -> ArgumentFile:
    """Parse an argument file; errors carry line and column."""
    return _Parser(text, max_atoms).parse()


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def exact_decimal(x: Fraction) -> str | None:
    """Finite decimal expansion of ``x``, or ``None`` if it does not terminate."""
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    digits = max(twos, fives)
    if digits == 0:
        return str(x.numerator)
    scaled = abs(x.numerator) * 10**digits // x.denominator
    sign = "-" if x < 0 else ""
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def format_number(x: Fraction) -> str:
    """Exact text for ``x`` that :func:`parse_number` reads back unchanged."""
    return exact_decimal(x) or f"{x.numerator}/{x.denominator}"


def _p_operand(f: Formula) -> str:
    text = render(f)
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "|" and depth == 0:
            return f"({text})"
    return text


def render_statement(s: ProbStatement) -> str:
    inner = _p_operand(s.target)
    if s.condition != TOP:
        inner += " | " + _p_operand(s.condition)
    head = f"constraint P({inner})"
    if s.kind == "=":
        return f"{head} = {format_number(s.lower)}"
    if s.kind == ">=":
        return f"{head} >= {format_number(s.lower)}"
    if s.kind == "<=":
        return f"{head} <= {format_number(s.upper)}"
    return f"{head} in [{format_number(s.lower)}, {format_number(s.upper)}]"


def render_argument_file(af: ArgumentFile) -> str:
    out = ["atoms " + " ".join(af.atoms)]
    out += [render_statement(s) for s in af.constraints]
    out += ["given " + render(f) for f in af.given]
    out += ["observe " + render(f) for f in af.observe]
    if af.query is not None:
        out.append("query " + render(af.query))
    if af.threshold is not None:
        out.append("threshold " + format_number(af.threshold))
    for a in af.acts:
        body = "; ".join(f"{render(f)}: {format_number(u)}" for f, u in a.clauses)
        out.append(f"act {a.name} {{ {body} }}")
    for s in af.supports:
        out.append(f"support {s.name} {{")
        out += ["  " + render_statement(st) for st in s.constraints]
        out += ["  given " + render(f) for f in s.given]
        out += ["  observe " + render(f) for f in s.observe]
        if s.threshold is not None:
            out.append("  threshold " + format_number(s.threshold))
        out.append("  concludes " + render(s.concludes))
        out.append("}")
    return "\n".join(out) + "\n"
