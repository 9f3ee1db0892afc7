"""Binary prints of truth values and the unobtainable-print analysis.

A (partial) binary print is a string over ``F``/``T``/``*`` with one cell per
separator; ``*`` marks an undefined cell.
"""
from __future__ import annotations

from itertools import product

from .core import F, Matrix, SpecError, T
from .separation import SeparatingSequence

UNDEF = "*"
CELLS = (F, T, UNDEF)


def binary_print(matrix: Matrix, seq: SeparatingSequence, v: int) -> str:
    """The total print of a truth value: cell r is T iff separator r maps v
    into the designated set."""
    return "".join(
        T if matrix.is_designated(fn.outputs[v]) else F for fn in seq.separators
    )


def print_dom(p: str) -> tuple[int, ...]:
    return tuple(i for i, c in enumerate(p) if c != UNDEF)


def is_total(p: str) -> bool:
    return UNDEF not in p


def extends(y: str, z: str) -> bool:
    """Whether print y extends print z (defined wherever z is, and agreeing)."""
    if len(y) != len(z):
        raise SpecError(f"print length mismatch: {y!r} vs {z!r}")
    return all(zc == UNDEF or zc == yc for yc, zc in zip(y, z))


def print_table(matrix: Matrix, seq: SeparatingSequence) -> dict:
    table = {v: binary_print(matrix, seq, v) for v in range(matrix.n)}
    if len(set(table.values())) != matrix.n:
        raise SpecError("separating sequence does not give injective binary prints")
    return table


def obtainable_prints(matrix: Matrix, seq: SeparatingSequence) -> frozenset:
    return frozenset(print_table(matrix, seq).values())


def minimal_unobtainable_prints(matrix: Matrix, seq: SeparatingSequence) -> tuple:
    """All partial prints that no truth value can extend, filtered down to the
    ones minimal under `extends`."""
    width = len(seq)
    obtainable = obtainable_prints(matrix, seq)

    def unobtainable(p: str) -> bool:
        slots = [(F, T) if c == UNDEF else (c,) for c in p]
        return all("".join(tot) not in obtainable for tot in product(*slots))

    bad = ["".join(p) for p in product(CELLS, repeat=width) if unobtainable("".join(p))]
    minimal = [
        p for p in bad if not any(q != p and extends(p, q) for q in bad)
    ]
    return tuple(sorted(minimal))
