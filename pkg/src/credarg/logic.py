"""Finite propositional world algebra.

A :class:`WorldSpace` is an ordered vocabulary of atoms; world ``w`` makes
atom ``i`` true iff bit ``i`` of ``w`` is set. Model sets are stored as
Python integers used as bitmasks over the ``2**n`` worlds, so conjunction,
disjunction and negation of model sets are single bitwise operations even
for the largest allowed spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence, Union

from .errors import FormulaSyntaxError, UnknownAtomError, WorldSpaceError

DEFAULT_ATOM_CAP = 16

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KEYWORDS = frozenset({"true", "false"})


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


class Formula:
    """Base class for formula nodes. Nodes are immutable and hashable."""

    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def implies(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def atoms(self) -> frozenset[str]:
        raise NotImplementedError

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, eq=True)
class Const(Formula):
    value: bool

    def atoms(self) -> frozenset[str]:
        return frozenset()


@dataclass(frozen=True, eq=True)
class Var(Formula):
    name: str

    def atoms(self) -> frozenset[str]:
        return frozenset((self.name,))


@dataclass(frozen=True, eq=True)
class Not(Formula):
    operand: Formula

    def atoms(self) -> frozenset[str]:
        return self.operand.atoms()


@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula

    def atoms(self) -> frozenset[str]:
        return self.left.atoms() | self.right.atoms()


@dataclass(frozen=True, eq=True)
class Or(Formula):
    left: Formula
    right: Formula

    def atoms(self) -> frozenset[str]:
        return self.left.atoms() | self.right.atoms()


@dataclass(frozen=True, eq=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def atoms(self) -> frozenset[str]:
        return self.left.atoms() | self.right.atoms()


TOP = Const(True)
BOTTOM = Const(False)


def conjoin(formulas: Sequence[Formula]) -> Formula:
    """Left-nested conjunction of ``formulas``; ``TOP`` when empty."""
    formulas = list(formulas)
    if not formulas:
        return TOP
    result = formulas[0]
    for f in formulas[1:]:
        result = And(result, f)
    return result


def conjuncts(f: Formula) -> list[Formula]:
    """Flatten top-level conjunctions into their operands."""
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


# ---------------------------------------------------------------------------
# World spaces and world sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WorldSpace:
    atoms: tuple[str, ...]
    cap: int = field(default=DEFAULT_ATOM_CAP, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(self.atoms) > self.cap:
            raise WorldSpaceError(
                f"{len(self.atoms)} atoms exceeds the cap of {self.cap}"
            )
        seen = set()
        for name in self.atoms:
            if not isinstance(name, str) or not _IDENT.fullmatch(name):
                raise WorldSpaceError(f"invalid atom name {name!r}")
            if name in _KEYWORDS:
                raise WorldSpaceError(f"atom name {name!r} is reserved")
            if name in seen:
                raise WorldSpaceError(f"duplicate atom name {name!r}")
            seen.add(name)

    @property
    def world_count(self) -> int:
        return 1 << len(self.atoms)

    @property
    def full_mask(self) -> int:
        return (1 << self.world_count) - 1

    def index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise UnknownAtomError(name) from None

    def atom_mask(self, name: str) -> int:
        return _atom_mask(len(self.atoms), self.index(name))

    def world_formula(self, world: int) -> Formula:
        """The conjunction of literals true exactly at ``world``."""
        literals = [
            Var(a) if world >> i & 1 else Not(Var(a))
            for i, a in enumerate(self.atoms)
        ]
        return conjoin(literals)

    def describe_world(self, world: int) -> str:
        if not self.atoms:
            return "true"
        return render(self.world_formula(world))

    def valuation(self, world: int) -> dict[str, bool]:
        return {a: bool(world >> i & 1) for i, a in enumerate(self.atoms)}


def world_space(atom_names: Sequence[str], cap: int = DEFAULT_ATOM_CAP) -> WorldSpace:
    """Build a :class:`WorldSpace`; atom ``i`` contributes bit ``i``."""
    return WorldSpace(tuple(atom_names), cap=cap)


@lru_cache(maxsize=1024)
def _atom_mask(n_atoms: int, i: int) -> int:
    # Worlds with bit i set form runs of 2**i ones every 2**(i+1) worlds.
    run = 1 << i
    period = run << 1
    block = ((1 << run) - 1) << run
    repeats = (1 << n_atoms) // period
    # Sum of block shifted by every multiple of period (a geometric series).
    spread = ((1 << (period * repeats)) - 1) // ((1 << period) - 1)
    return block * spread


@dataclass(frozen=True)
class WorldSet:
    """A set of worlds of ``space`` stored as a bitmask."""

    space: WorldSpace
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask > self.space.full_mask:
            raise ValueError("mask does not fit the world space")

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __contains__(self, world: int) -> bool:
        return bool(self.mask >> world & 1)

    def _check(self, other: "WorldSet") -> None:
        if other.space != self.space:
            raise ValueError("world sets belong to different spaces")

    def __and__(self, other: "WorldSet") -> "WorldSet":
        self._check(other)
        return WorldSet(self.space, self.mask & other.mask)

    def __or__(self, other: "WorldSet") -> "WorldSet":
        self._check(other)
        return WorldSet(self.space, self.mask | other.mask)

    def __invert__(self) -> "WorldSet":
        return WorldSet(self.space, self.space.full_mask ^ self.mask)

    def __sub__(self, other: "WorldSet") -> "WorldSet":
        self._check(other)
        return WorldSet(self.space, self.mask & ~other.mask)

    def is_empty(self) -> bool:
        return self.mask == 0

    def issubset(self, other: "WorldSet") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "WorldSet") -> bool:
        self._check(other)
        return self.mask & other.mask == 0


def models(f: Formula, space: WorldSpace) -> WorldSet:
    """The set of worlds of ``space`` satisfying ``f``."""
    return WorldSet(space, model_mask(f, space))


@lru_cache(maxsize=65536)
def model_mask(f: Formula, space: WorldSpace) -> int:
    """Bitmask form of :func:`models`."""
    full = space.full_mask
    if isinstance(f, Const):
        return full if f.value else 0
    if isinstance(f, Var):
        return space.atom_mask(f.name)
    if isinstance(f, Not):
        return full ^ model_mask(f.operand, space)
    if isinstance(f, And):
        return model_mask(f.left, space) & model_mask(f.right, space)
    if isinstance(f, Or):
        return model_mask(f.left, space) | model_mask(f.right, space)
    if isinstance(f, Implies):
        return (full ^ model_mask(f.left, space)) | model_mask(f.right, space)
    raise TypeError(f"not a formula: {f!r}")


def check_formula(f: Formula, space: WorldSpace) -> Formula:
    for name in sorted(f.atoms()):
        if name not in space.atoms:
            raise UnknownAtomError(name)
    return f


def as_formula(f: Union[Formula, str], space: WorldSpace) -> Formula:
    """Accept a formula or its textual form and check it against ``space``."""
    if isinstance(f, str):
        return parse_formula(f, space)
    if isinstance(f, Formula):
        return check_formula(f, space)
    raise TypeError(f"expected a formula or string, got {type(f).__name__}")


# ---------------------------------------------------------------------------
# Parsing and rendering
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->)|([!&|()])|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(1):
            tokens.append(("op", "->", m.start(1)))
        elif m.group(2):
            tokens.append(("op", m.group(2), m.start(2)))
        elif m.group(3):
            tokens.append(("ident", m.group(3), m.start(3)))
        else:
            raise FormulaSyntaxError(
                f"unexpected character {m.group(4)!r}", m.start(4), text
            )
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, space: WorldSpace | None):
        self.text = text
        self.space = space
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok) -> FormulaSyntaxError:
        if tok[0] == "end":
            message += " at end of input"
        else:
            message += f", found {tok[1]!r}"
        return FormulaSyntaxError(message, tok[2], self.text)

    def parse(self) -> Formula:
        f = self.impl()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error("expected end of formula", tok)
        return f

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->" and self.peek()[0] == "op":
            self.take()
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[:2] == ("op", "|"):
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.neg()
        while self.peek()[:2] == ("op", "&"):
            self.take()
            f = And(f, self.neg())
        return f

    def neg(self) -> Formula:
        tok = self.take()
        kind, value, pos = tok
        if kind == "op" and value == "!":
            return Not(self.neg())
        if kind == "op" and value == "(":
            f = self.impl()
            close = self.take()
            if close[:2] != ("op", ")"):
                raise self.error("expected ')'", close)
            return f
        if kind == "ident":
            if value == "true":
                return TOP
            if value == "false":
                return BOTTOM
            if self.space is not None and value not in self.space.atoms:
                raise UnknownAtomError(value, pos)
            return Var(value)
        raise self.error("expected a formula", tok)


def parse_formula(text: str, space: WorldSpace | None = None) -> Formula:
    """Parse ``text`` with precedence ``!`` > ``&`` > ``|`` > ``->``.

    ``->`` is right-associative, ``&`` and ``|`` are left-associative.
    When ``space`` is given, every atom must belong to it.
    """
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", 0, text)
    return _Parser(text, space).parse()


_PREC = {Implies: 1, Or: 2, And: 3, Not: 4, Var: 5, Const: 5}
_SYMBOL = {Implies: "->", Or: "|", And: "&"}


def render(f: Formula) -> str:
    """Canonical text for ``f``; ``parse_formula(render(f)) == f``."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        inner = render(f.operand)
        if _PREC[type(f.operand)] < _PREC[Not]:
            inner = f"({inner})"
        return "!" + inner
    op = type(f)
    prec = _PREC[op]
    left, right = render(f.left), render(f.right)
    lp, rp = _PREC[type(f.left)], _PREC[type(f.right)]
    if op is Implies:
        # right-associative: parenthesize a left operand of equal precedence
        if lp <= prec:
            left = f"({left})"
        if rp < prec:
            right = f"({right})"
    else:
        if lp < prec:
            left = f"({left})"
        if rp <= prec:
            right = f"({right})"
    return f"{left} {_SYMBOL[op]} {right}"
