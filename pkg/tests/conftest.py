"""Shared fixtures: bundled logics, pinned sequences, and samplers."""
from __future__ import annotations

import itertools
import random

import pytest

from tabforge import (
    App,
    Atom,
    Connective,
    Matrix,
    NotSeparableError,
    SpecError,
    bundled_matrix,
    conservative_extension,
    is_separable,
    parse_formula,
    separating_sequence,
    sequence_from_tables,
    sequence_from_witnesses,
)


@pytest.fixture(scope="session")
def l3():
    return bundled_matrix("lukasiewicz-3")


@pytest.fixture(scope="session")
def l3_seq(l3):
    # the separator with the threshold table (designated iff value >= 1/2)
    return sequence_from_tables(l3, [(0, 2, 2)])


@pytest.fixture(scope="session")
def g4():
    return bundled_matrix("goedel-4")


@pytest.fixture(scope="session")
def g4plus(g4):
    m = conservative_extension(g4, "constants")
    th1 = parse_formula("and(imp(a1,p),imp(p,a1))", m)
    th2 = parse_formula("and(imp(p,a2),imp(a2,p))", m)
    return m, sequence_from_witnesses(m, [th1, th2])


@pytest.fixture(scope="session")
def classical():
    return bundled_matrix("classical")


@pytest.fixture(scope="session")
def kleene():
    return bundled_matrix("kleene")


def random_matrix(rng: random.Random, idx: int, n_choices=(2, 3, 4), max_conns=3):
    """A random matrix with at least one connective of positive arity."""
    n = rng.choice(list(n_choices))
    n_conns = rng.randint(1, max_conns)
    arities = [rng.randint(0, 2) for _ in range(n_conns)]
    if not any(a >= 1 for a in arities):
        arities[0] = rng.randint(1, 2)
    conns = []
    for i, k in enumerate(arities):
        table = tuple(rng.randrange(n) for _ in range(n**k))
        conns.append(Connective(f"c{i}", k, table))
    m = rng.randint(1, n - 1)
    designated = frozenset(rng.sample(range(n), m))
    return Matrix(f"rnd{idx}", n, designated, tuple(conns))


def separable_or_extended(rng: random.Random, idx: int):
    """A random matrix made separable (extended when needed), with its greedy
    sequence; returns (matrix, sequence) or None when unusable."""
    m = random_matrix(rng, idx)
    ok, _ = is_separable(m)
    if not ok:
        mode = "constants" if idx % 2 == 0 else "primitive"
        try:
            m2 = conservative_extension(m, mode)
        except (NotSeparableError, SpecError):
            m2 = conservative_extension(m, "primitive")
        if not is_separable(m2)[0]:
            return None
        m = m2
    try:
        seq = separating_sequence(m)
    except NotSeparableError:
        return None
    return m, seq


def enumerate_formulas(matrix: Matrix, atoms, max_depth: int):
    """All formulas over the given atoms up to the given constructor depth."""
    pool = [Atom(a) for a in atoms]
    pool += [App(c.name) for c in matrix.connectives if c.arity == 0]
    for _ in range(max_depth):
        new = []
        for c in matrix.connectives:
            if c.arity == 0:
                continue
            for args in itertools.product(pool, repeat=c.arity):
                new.append(App(c.name, args))
        pool = pool + new
    return pool


def random_formula(rng: random.Random, matrix: Matrix, atoms, depth: int):
    if depth == 0 or (depth > 0 and rng.random() < 0.15):
        nullary = [c for c in matrix.connectives if c.arity == 0]
        if nullary and rng.random() < 0.3:
            return App(rng.choice(nullary).name)
        return Atom(rng.choice(list(atoms)))
    cands = [c for c in matrix.connectives if c.arity >= 1]
    c = rng.choice(cands)
    return App(c.name, tuple(random_formula(rng, matrix, atoms, depth - 1) for _ in range(c.arity)))
