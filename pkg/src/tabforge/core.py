"""Formula algebra, logic matrices, and the brute-force semantic oracle.

Truth values are integer indices 0..n-1; the rational i/(n-1) is used for
display only.  Everything in this module is immutable and side-effect free.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import product
from typing import Iterable, Iterator, Mapping, Union

F = "F"
T = "T"
SIGNS = (F, T)

DEFAULT_ASSIGNMENT_CAP = 10_000_000


class TabforgeError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(TabforgeError):
    """A logic specification (or a value built from one) failed validation."""


class FormulaSyntaxError(TabforgeError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvaluationError(TabforgeError):
    """A formula could not be evaluated under the given assignment."""


class ResourceCapError(TabforgeError):
    """A configurable resource cap was exceeded."""


def conjugate(sign: str) -> str:
    return F if sign == T else T


# ---------------------------------------------------------------------------
# formulas

@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class App:
    head: str
    args: tuple["Formula", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((self.head, self.args)))

    def __hash__(self) -> int:
        return self._h  # type: ignore[attr-defined]

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            type(other) is App
            and self._h == other._h  # type: ignore[attr-defined]
            and self.head == other.head
            and self.args == other.args
        )

    def __str__(self) -> str:
        if not self.args:
            return self.head
        return f"{self.head}({','.join(str(a) for a in self.args)})"


Formula = Union[Atom, App]


@dataclass(frozen=True)
class SignedFormula:
    sign: str
    formula: Formula

    def __str__(self) -> str:
        return f"{self.sign}:{self.formula}"


def formula_to_str(f: Formula) -> str:
    return str(f)


def is_noncomposite(f: Formula) -> bool:
    """Atoms and sentential constants (nullary applications)."""
    return isinstance(f, Atom) or not f.args


def depth(f: Formula) -> int:
    """Nesting depth of non-nullary constructors (atoms and constants are 0)."""
    if is_noncomposite(f):
        return 0
    return 1 + max(depth(a) for a in f.args)


def subformulas(f: Formula) -> frozenset:
    """Smallest set containing ``f`` and closed under immediate subformulas."""
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if isinstance(g, App):
            stack.extend(g.args)
    return frozenset(seen)


def atoms_of(f: Formula) -> frozenset:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def substitute(f: Formula, name: str, replacement: Formula) -> Formula:
    """Replace every occurrence of the atom ``name`` in ``f``."""
    if isinstance(f, Atom):
        return replacement if f.name == name else f
    if not f.args:
        return f
    return App(f.head, tuple(substitute(a, name, replacement) for a in f.args))


_ATOM_RE = re.compile(r"[p-z][0-9]*\Z")


def atom_sort_key(name: str):
    m = re.fullmatch(r"([p-z])([0-9]*)", name)
    if not m:
        return (1, name, -1)
    return (0, m.group(1), int(m.group(2)) if m.group(2) else -1)


# ---------------------------------------------------------------------------
# matrices

@dataclass(frozen=True)
class Connective:
    name: str
    arity: int
    table: tuple[int, ...]


@dataclass(frozen=True)
class Matrix:
    """A finite signature interpreted over n truth values with designated subset."""

    name: str
    n: int
    designated: frozenset
    connectives: tuple[Connective, ...]

    def __post_init__(self):
        if self.n < 2:
            raise SpecError(f"values: need at least 2 truth values, got {self.n}")
        if not self.designated:
            raise SpecError("designated: must be nonempty")
        if not all(isinstance(v, int) and 0 <= v < self.n for v in self.designated):
            raise SpecError(f"designated: indices must lie in 0..{self.n - 1}")
        if len(self.designated) == self.n:
            raise SpecError("designated: must be a proper subset of the truth values")
        seen = set()
        for i, c in enumerate(self.connectives):
            where = f"connectives[{i}] ({c.name!r})"
            if c.name in seen:
                raise SpecError(f"{where}: duplicate connective name")
            seen.add(c.name)
            if c.arity < 0:
                raise SpecError(f"{where}: negative arity")
            if len(c.table) != self.n ** c.arity:
                raise SpecError(
                    f"{where}.table: expected {self.n ** c.arity} entries, got {len(c.table)}"
                )
            if not all(isinstance(v, int) and 0 <= v < self.n for v in c.table):
                raise SpecError(f"{where}.table: entries must lie in 0..{self.n - 1}")
        object.__setattr__(self, "by_name", {c.name: c for c in self.connectives})

    # -- semantics ---------------------------------------------------------
    def op_value(self, name: str, args: Iterable[int]) -> int:
        c = self.by_name[name]  # type: ignore[attr-defined]
        idx = 0
        for v in args:
            idx = idx * self.n + v
        return c.table[idx]

    def is_designated(self, v: int) -> bool:
        return v in self.designated

    @property
    def undesignated(self) -> frozenset:
        return frozenset(range(self.n)) - self.designated

    def value_str(self, v: int) -> str:
        return str(Fraction(v, self.n - 1))

    def extended(self, extra: Iterable[Connective], name: str | None = None) -> "Matrix":
        return Matrix(
            name=name or f"{self.name}+",
            n=self.n,
            designated=self.designated,
            connectives=self.connectives + tuple(extra),
        )

    # -- serialization -----------------------------------------------------
    @staticmethod
    def from_json(data: Mapping) -> "Matrix":
        for key in ("name", "values", "designated", "connectives"):
            if key not in data:
                raise SpecError(f"{key}: missing field")
        conns = []
        for i, c in enumerate(data["connectives"]):
            for key in ("name", "arity", "table"):
                if key not in c:
                    raise SpecError(f"connectives[{i}].{key}: missing field")
            conns.append(Connective(c["name"], c["arity"], tuple(c["table"])))
        return Matrix(
            name=data["name"],
            n=data["values"],
            designated=frozenset(data["designated"]),
            connectives=tuple(conns),
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "values": self.n,
            "designated": sorted(self.designated),
            "connectives": [
                {"name": c.name, "arity": c.arity, "table": list(c.table)}
                for c in self.connectives
            ],
        }

    @staticmethod
    def from_file(path) -> "Matrix":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SpecError(f"invalid JSON in {path}: {exc}") from exc
        return Matrix.from_json(data)


def bundled_names() -> list:
    root = resources.files("tabforge").joinpath("specs")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_matrix(name: str) -> Matrix:
    path = resources.files("tabforge").joinpath("specs", f"{name}.json")
    if not path.is_file():
        raise SpecError(f"no bundled logic named {name!r}; available: {', '.join(bundled_names())}")
    return Matrix.from_json(json.loads(path.read_text(encoding="utf-8")))


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[(),]")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(0), pos))
        pos = m.end()
    return tokens


def parse_formula(text: str, matrix: Matrix) -> Formula:
    """Parse prefix notation: ``ATOM | NAME | NAME '(' formula (',' formula)* ')'``."""
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, len(text))

    def term() -> Formula:
        nonlocal i
        tok, pos = peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", pos)
        if tok in "(),":
            raise FormulaSyntaxError(f"expected a formula, found {tok!r}", pos)
        i += 1
        conn = matrix.by_name.get(tok)  # type: ignore[attr-defined]
        nxt, npos = peek()
        if nxt == "(":
            if conn is None:
                raise FormulaSyntaxError(f"unknown connective {tok!r}", pos)
            i += 1
            args = [term()]
            while True:
                tok2, pos2 = peek()
                if tok2 == ",":
                    i += 1
                    args.append(term())
                elif tok2 == ")":
                    i += 1
                    break
                else:
                    raise FormulaSyntaxError("expected ',' or ')'", pos2)
            if len(args) != conn.arity:
                raise FormulaSyntaxError(
                    f"connective {tok!r} has arity {conn.arity}, got {len(args)} arguments", pos
                )
            return App(tok, tuple(args))
        if conn is not None:
            if conn.arity != 0:
                raise FormulaSyntaxError(
                    f"connective {tok!r} has arity {conn.arity} and needs arguments", pos
                )
            return App(tok)
        if not _ATOM_RE.match(tok):
            raise FormulaSyntaxError(f"unknown connective {tok!r}", pos)
        return Atom(tok)

    f = term()
    tok, pos = peek()
    if tok is not None:
        raise FormulaSyntaxError(f"trailing input {tok!r}", pos)
    return f


# ---------------------------------------------------------------------------
# evaluation and the truth-table oracle

Assignment = Mapping


def evaluate(matrix: Matrix, f: Formula, assignment: Assignment) -> int:
    if isinstance(f, Atom):
        try:
            return assignment[f.name]
        except KeyError:
            raise EvaluationError(f"no value assigned to atom {f.name!r}") from None
    if f.head not in matrix.by_name:  # type: ignore[attr-defined]
        raise EvaluationError(f"connective {f.head!r} is not declared in {matrix.name!r}")
    return matrix.op_value(f.head, (evaluate(matrix, a, assignment) for a in f.args))


def bivalent_value(matrix: Matrix, f: Formula, assignment: Assignment) -> str:
    return T if evaluate(matrix, f, assignment) in matrix.designated else F


def satisfies_signed(matrix: Matrix, assignment: Assignment, sf: SignedFormula) -> bool:
    return bivalent_value(matrix, sf.formula, assignment) == sf.sign


def assignments_over(matrix: Matrix, atoms, cap: int = DEFAULT_ASSIGNMENT_CAP) -> Iterator[dict]:
    """All assignments over the given atoms in mixed-radix counting order."""
    names = sorted(atoms, key=atom_sort_key)
    total = matrix.n ** len(names)
    if total > cap:
        raise ResourceCapError(
            f"{total} assignments over {len(names)} atoms exceed the cap of {cap}"
        )
    for values in product(range(matrix.n), repeat=len(names)):
        yield dict(zip(names, values))


def oracle_countermodel(
    matrix: Matrix,
    gamma: Iterable[Formula],
    alpha: Formula,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
):
    """First assignment designating all of gamma but not alpha, or None."""
    gamma = tuple(gamma)
    names = set()
    for g in gamma:
        names |= atoms_of(g)
    names |= atoms_of(alpha)
    for a in assignments_over(matrix, names, cap):
        if all(evaluate(matrix, g, a) in matrix.designated for g in gamma):
            if evaluate(matrix, alpha, a) not in matrix.designated:
                return a
    return None


def entails_oracle(
    matrix: Matrix,
    gamma: Iterable[Formula],
    alpha: Formula,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
) -> bool:
    """Exhaustive truth-table check of the entailment gamma |= alpha."""
    return oracle_countermodel(matrix, gamma, alpha, cap) is None
