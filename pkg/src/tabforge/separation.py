"""Separability analysis and construction of separating sequences.

A separating sequence is a list of one-variable formulas, starting with the
identity, whose induced unary functions jointly tell all truth values apart
through the designated/undesignated split.  Logics that are not expressive
enough are upgraded by a conservative extension (new constants or new
primitive unary connectives).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .core import (
    App,
    Atom,
    Connective,
    Formula,
    Matrix,
    SpecError,
    TabforgeError,
    atoms_of,
    depth,
    evaluate,
    substitute,
)

SEQ_VAR = "p"


class NotSeparableError(TabforgeError):
    def __init__(self, message: str, pairs=()):
        super().__init__(message)
        self.pairs = tuple(pairs)


@dataclass(frozen=True)
class UnaryFunction:
    """A definable unary operation together with a one-variable witness formula."""

    outputs: tuple[int, ...]
    witness: Formula

    @property
    def witness_depth(self) -> int:
        return depth(self.witness)


def make_unary(matrix: Matrix, witness: Formula) -> UnaryFunction:
    """Build a UnaryFunction from a witness formula with at most one atom."""
    names = sorted(atoms_of(witness))
    if len(names) > 1:
        raise SpecError(f"witness {witness} uses more than one atom: {names}")
    if names and names[0] != SEQ_VAR:
        witness = substitute(witness, names[0], Atom(SEQ_VAR))
    outputs = tuple(evaluate(matrix, witness, {SEQ_VAR: v}) for v in range(matrix.n))
    return UnaryFunction(outputs, witness)


@dataclass(frozen=True)
class SeparatingSequence:
    separators: tuple[UnaryFunction, ...]

    def __len__(self) -> int:
        return len(self.separators)

    def apply(self, r: int, f: Formula) -> Formula:
        """The r-th separator applied to f (identity when r = 0)."""
        if r == 0:
            return f
        return substitute(self.separators[r].witness, SEQ_VAR, f)

    def witness_formulas(self) -> tuple[Formula, ...]:
        return tuple(s.witness for s in self.separators)


def _separates(matrix: Matrix, fn: UnaryFunction, x: int, y: int) -> bool:
    return matrix.is_designated(fn.outputs[x]) != matrix.is_designated(fn.outputs[y])


def validate_sequence(matrix: Matrix, seq: SeparatingSequence) -> None:
    n = matrix.n
    seps = seq.separators
    if not seps or seps[0].witness != Atom(SEQ_VAR) or seps[0].outputs != tuple(range(n)):
        raise SpecError("separating sequence must start with the identity formula")
    for i, fn in enumerate(seps):
        expected = tuple(evaluate(matrix, fn.witness, {SEQ_VAR: v}) for v in range(n))
        if expected != fn.outputs:
            raise SpecError(f"separator {i} outputs do not match its witness formula")
    missing = [
        (x, y)
        for x in range(n)
        for y in range(x + 1, n)
        if not any(_separates(matrix, fn, x, y) for fn in seps)
    ]
    if missing:
        raise NotSeparableError(f"sequence does not separate pairs {missing}", missing)
    if not (math.log2(n) <= len(seps) < n):
        raise SpecError(
            f"sequence length {len(seps)} violates log2({n}) <= length < {n}"
        )


# ---------------------------------------------------------------------------
# definable unary functions (least fixed point of composition)

def definable_unary_functions(matrix: Matrix) -> list:
    """All unary operations expressible by one-variable formulas, in discovery
    order.  Witnesses have minimal depth among all defining formulas (level-wise
    search guarantees this); ties keep the first discovery.
    """
    n = matrix.n
    by_out: dict = {}
    order: list = []

    def consider(outputs, witness, bucket):
        if outputs not in by_out:
            fn = UnaryFunction(outputs, witness)
            by_out[outputs] = fn
            order.append(fn)
            bucket.append(fn)

    frontier: list = []
    consider(tuple(range(n)), Atom(SEQ_VAR), frontier)
    for c in matrix.connectives:
        if c.arity == 0:
            consider((c.table[0],) * n, App(c.name), frontier)

    known: list = []
    while frontier:
        old = list(known)
        known.extend(frontier)
        last, frontier = frontier, []
        for c in matrix.connectives:
            if c.arity == 0:
                continue
            if c.arity == 1:
                for h in last:
                    outputs = tuple(c.table[h.outputs[v]] for v in range(n))
                    consider(outputs, App(c.name, (h.witness,)), frontier)
            elif c.arity == 2:
                # combos with at least one element from the last round
                pairs = [(a, b) for a in last for b in known] + [
                    (a, b) for a in old for b in last
                ]
                for a, b in pairs:
                    outputs = tuple(
                        c.table[a.outputs[v] * n + b.outputs[v]] for v in range(n)
                    )
                    consider(outputs, App(c.name, (a.witness, b.witness)), frontier)
            else:
                combos = _mixed_combos(known, last, c.arity)
                for hs in combos:
                    outputs = tuple(
                        matrix.op_value(c.name, (h.outputs[v] for h in hs))
                        for v in range(n)
                    )
                    consider(outputs, App(c.name, tuple(h.witness for h in hs)), frontier)
    return order


def _mixed_combos(known, last, k):
    from itertools import product as iproduct

    last_set = set(id(h) for h in last)
    for hs in iproduct(known, repeat=k):
        if any(id(h) in last_set for h in hs):
            yield hs


def is_separable(matrix: Matrix):
    """Whether every pair of values is distinguishable; lists witness-less pairs."""
    fns = definable_unary_functions(matrix)
    missing = [
        (x, y)
        for x in range(matrix.n)
        for y in range(x + 1, matrix.n)
        if not any(_separates(matrix, fn, x, y) for fn in fns)
    ]
    return (not missing, missing)


# ---------------------------------------------------------------------------
# sequence construction

def _uncovered(matrix, chosen, pairs):
    return [
        p for p in pairs if not any(_separates(matrix, fn, p[0], p[1]) for fn in chosen)
    ]


def separating_sequence(matrix: Matrix, exact: bool = False) -> SeparatingSequence:
    """Greedy minimum-cover selection of separators (exact search optional).

    The identity covers every designated/undesignated pair; each further pick
    is the definable function separating the most still-unseparated pairs,
    ties broken by smaller witness depth, then discovery order.
    """
    fns = definable_unary_functions(matrix)
    identity = fns[0]
    all_pairs = [(x, y) for x in range(matrix.n) for y in range(x + 1, matrix.n)]

    if exact:
        seq = _exact_sequence(matrix, fns, all_pairs)
        if seq is not None:
            return seq

    chosen = [identity]
    remaining = _uncovered(matrix, chosen, all_pairs)
    while remaining:
        best = None
        for idx, fn in enumerate(fns):
            covered = sum(1 for (x, y) in remaining if _separates(matrix, fn, x, y))
            if covered == 0:
                continue
            key = (-covered, fn.witness_depth, idx)
            if best is None or key < best[0]:
                best = (key, fn)
        if best is None:
            raise NotSeparableError(
                f"{matrix.name}: not separable; pairs {remaining} have no separator",
                remaining,
            )
        chosen.append(best[1])
        remaining = _uncovered(matrix, chosen, remaining)
    seq = SeparatingSequence(tuple(chosen))
    validate_sequence(matrix, seq)
    return seq


_EXACT_LIMIT = 4  # exhaustive search only while the sequence stays this short


def _exact_sequence(matrix, fns, all_pairs):
    identity = fns[0]
    others = [fn for fn in fns if fn is not identity]
    base_missing = _uncovered(matrix, [identity], all_pairs)
    if not base_missing:
        return SeparatingSequence((identity,))
    top = min(matrix.n - 1, _EXACT_LIMIT)
    for extra in range(1, top):
        for combo in combinations(range(len(others)), extra):
            cand = [identity] + [others[i] for i in combo]
            if not _uncovered(matrix, cand, base_missing):
                seq = SeparatingSequence(tuple(cand))
                validate_sequence(matrix, seq)
                return seq
    return None


def sequence_from_tables(matrix: Matrix, tables) -> SeparatingSequence:
    """Sequence whose separators realize the given output tables (identity is
    implicit); each table must be definable in the matrix."""
    fns = {fn.outputs: fn for fn in definable_unary_functions(matrix)}
    seps = [fns[tuple(range(matrix.n))]]
    for t in tables:
        t = tuple(t)
        if t not in fns:
            raise NotSeparableError(f"no definable unary function with table {t}")
        seps.append(fns[t])
    seq = SeparatingSequence(tuple(seps))
    validate_sequence(matrix, seq)
    return seq


def sequence_from_witnesses(matrix: Matrix, witnesses) -> SeparatingSequence:
    """Sequence built from explicit one-variable witness formulas (identity is
    implicit)."""
    seps = [make_unary(matrix, Atom(SEQ_VAR))]
    seps.extend(make_unary(matrix, w) for w in witnesses)
    seq = SeparatingSequence(tuple(seps))
    validate_sequence(matrix, seq)
    return seq


# ---------------------------------------------------------------------------
# conservative extensions

CONSTANT_PREFIX = "a"
SEPARATOR_PREFIX = "k"


def conservative_extension(matrix: Matrix, mode: str) -> Matrix:
    """Extend a logic so that it becomes separable.

    ``constants`` adds sentential constants naming the members of each
    unseparated pair (no-op when already separable); ``primitive`` adds one
    fresh unary connective per non-representative truth value, whose table
    maps its value to a canonical designated output and everything else to a
    canonical undesignated output.  Original tables are untouched, so both
    extensions are conservative by construction.
    """
    if mode == "constants":
        return _extend_with_constants(matrix)
    if mode == "primitive":
        return _extend_with_primitives(matrix)
    raise SpecError(f"unknown extension mode {mode!r}; use 'constants' or 'primitive'")


def _constant_name(matrix: Matrix, v: int) -> str:
    name = f"{CONSTANT_PREFIX}{v}"
    existing = matrix.by_name.get(name)  # type: ignore[attr-defined]
    if existing is not None:
        if existing.arity == 0 and existing.table == (v,):
            return ""  # already present with the right meaning
        raise SpecError(f"cannot add constant {name!r}: name already in use")
    return name


def _extend_with_constants(matrix: Matrix) -> Matrix:
    current = matrix
    while True:
        ok, pairs = is_separable(current)
        if ok:
            return current
        wanted = sorted(set(pairs[0]))
        added = []
        for v in wanted:
            name = _constant_name(current, v)
            if name:
                added.append(Connective(name, 0, (v,)))
        if not added:
            # pair constants already present: fall back to naming every value
            for v in range(current.n):
                name = _constant_name(current, v)
                if name:
                    added.append(Connective(name, 0, (v,)))
            if not added:
                raise NotSeparableError(
                    f"{matrix.name}: pairs {pairs} stay unseparated even with all "
                    "constants; the matrix is not genuinely many-valued",
                    pairs,
                )
        current = current.extended(added, name=f"{matrix.name}+")


def _extend_with_primitives(matrix: Matrix) -> Matrix:
    rep_d = min(matrix.designated)
    rep_u = min(matrix.undesignated)
    added = []
    for v in range(matrix.n):
        if v in (rep_d, rep_u):
            continue
        table = tuple(rep_d if z == v else rep_u for z in range(matrix.n))
        name = f"{SEPARATOR_PREFIX}{v}"
        existing = matrix.by_name.get(name)  # type: ignore[attr-defined]
        if existing is not None:
            if existing.arity == 1 and existing.table == table:
                continue
            raise SpecError(f"cannot add separator {name!r}: name already in use")
        added.append(Connective(name, 1, table))
    if not added:
        return matrix
    return matrix.extended(added, name=f"{matrix.name}+")
