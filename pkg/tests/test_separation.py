"""Definable unary functions, separability, and conservative extensions."""
import itertools
import random

import pytest

from tabforge import (
    App,
    Atom,
    Connective,
    Matrix,
    NotSeparableError,
    SeparatingSequence,
    atoms_of,
    bundled_matrix,
    conservative_extension,
    definable_unary_functions,
    depth,
    entails_oracle,
    evaluate,
    is_separable,
    make_unary,
    parse_formula,
    separating_sequence,
    sequence_from_tables,
    validate_sequence,
)
from conftest import enumerate_formulas, random_formula, random_matrix


def min_only_3():
    """Three-valued logic with conjunction as the only connective."""
    table = tuple(min(x, y) for x in range(3) for y in range(3))
    return Matrix("min3", 3, frozenset({2}), (Connective("and", 2, table),))


# -- definable unary functions --------------------------------------------------

def test_goedel4_has_exactly_six(g4):
    fns = definable_unary_functions(g4)
    assert len(fns) == 6
    outs = {fn.outputs for fn in fns}
    assert (0, 1, 2, 3) in outs  # identity
    assert (3, 0, 0, 0) in outs  # the involution-free negation


def test_classical_functions_brute_force(classical):
    fns = {fn.outputs for fn in definable_unary_functions(classical)}
    # brute force: every unary function on two values is reachable by some
    # one-variable formula of depth <= 3
    reachable = set()
    for f in enumerate_formulas(classical, ("p",), 3):
        outputs = tuple(evaluate(classical, f, {"p": v}) for v in range(2))
        reachable.add(outputs)
    assert fns == reachable == {(0, 1), (1, 0), (0, 0), (1, 1)}


def test_empty_signature_fixed_point():
    m = Matrix("bare", 2, frozenset({1}), ())
    fns = definable_unary_functions(m)
    assert [fn.outputs for fn in fns] == [(0, 1)]
    assert fns[0].witness == Atom("p")


def test_witnesses_define_their_outputs():
    rng = random.Random(11)
    for idx in range(10):
        m = random_matrix(rng, idx)
        for fn in definable_unary_functions(m):
            got = tuple(evaluate(m, fn.witness, {"p": v}) for v in range(m.n))
            assert got == fn.outputs
            assert len(atoms_of(fn.witness)) <= 1


def test_fixed_point_complete_small_scale():
    # exhaustive one-variable formula enumeration to depth 4 finds nothing
    # outside the fixed point (matrices whose formula pool explodes are skipped)
    rng = random.Random(13)
    checked = 0
    for idx in range(80):
        m = random_matrix(rng, idx, n_choices=(2, 3))
        fns = {fn.outputs for fn in definable_unary_functions(m)}
        pool = [Atom("p")] + [App(c.name) for c in m.connectives if c.arity == 0]
        feasible = True
        for _ in range(4):
            growth = sum(len(pool) ** c.arity for c in m.connectives if c.arity)
            if len(pool) + growth > 20000:
                feasible = False
                break
            new = []
            for c in m.connectives:
                if c.arity == 0:
                    continue
                for args in itertools.product(pool, repeat=c.arity):
                    new.append(App(c.name, args))
            pool += new
        if not feasible:
            continue
        seen = {tuple(evaluate(m, f, {"p": v}) for v in range(m.n)) for f in pool}
        assert seen <= fns
        checked += 1
    assert checked >= 10


# -- separability ----------------------------------------------------------------

def test_lukasiewicz3_separable(l3):
    ok, pairs = is_separable(l3)
    assert ok and pairs == []


def test_goedel4_not_separable(g4):
    ok, pairs = is_separable(g4)
    assert not ok
    assert pairs == [(1, 2)]


def test_classical_separable(classical):
    assert is_separable(classical) == (True, [])


# -- separating sequences ----------------------------------------------------------

def test_classical_sequence_is_identity_alone(classical):
    seq = separating_sequence(classical)
    assert len(seq) == 1
    assert seq.separators[0].witness == Atom("p")


def test_kleene_sequence_adds_negation(kleene):
    seq = separating_sequence(kleene)
    assert [str(w) for w in seq.witness_formulas()] == ["p", "neg(p)"]


def test_lukasiewicz3_greedy_and_pinned(l3, l3_seq):
    # greedy picks the smallest-depth witness separating (0, 1/2): negation
    greedy = separating_sequence(l3)
    assert len(greedy) == 2
    assert str(greedy.separators[1].witness) == "neg(p)"
    # the threshold table is definable and can be requested explicitly;
    # discovery returns the depth-minimal witness for it
    assert l3_seq.separators[1].outputs == (0, 2, 2)
    assert str(l3_seq.separators[1].witness) == "imp(neg(p),p)"


def test_exact_search_matches_greedy_length(l3, kleene):
    for m in (l3, kleene):
        exact = separating_sequence(m, exact=True)
        greedy = separating_sequence(m)
        assert len(exact) == len(greedy)
        validate_sequence(m, exact)


def test_sequence_certificate_and_bounds():
    import math

    rng = random.Random(17)
    done = 0
    for idx in range(40):
        m = random_matrix(rng, idx)
        ok, _ = is_separable(m)
        if not ok:
            continue
        seq = separating_sequence(m)
        done += 1
        width = len(seq)
        assert math.log2(m.n) <= width <= m.n - 1
        for x in range(m.n):
            for y in range(x + 1, m.n):
                assert any(
                    m.is_designated(fn.outputs[x]) != m.is_designated(fn.outputs[y])
                    for fn in seq.separators
                )
    assert done >= 10


def test_sequence_validation_rejects_junk(l3):
    not_id = make_unary(l3, parse_formula("neg(p)", l3))
    with pytest.raises(Exception):
        validate_sequence(l3, SeparatingSequence((not_id,)))
    with pytest.raises(NotSeparableError):
        validate_sequence(l3, SeparatingSequence((make_unary(l3, Atom("p")),)))


def test_sequence_from_tables_rejects_undefinable(l3):
    # the constant-1/2 function is not definable over the implication fragment
    with pytest.raises(NotSeparableError):
        sequence_from_tables(l3, [(1, 1, 1)])


# -- conservative extensions -----------------------------------------------------

def test_goedel4_constants_extension(g4):
    ext = conservative_extension(g4, "constants")
    added = [c.name for c in ext.connectives if c.name not in g4.by_name]
    assert added == ["a1", "a2"]
    assert ext.by_name["a1"].table == (1,)
    assert ext.by_name["a2"].table == (2,)
    ok, _ = is_separable(ext)
    assert ok
    # the advertised separators do their job
    th1 = parse_formula("and(imp(a1,p),imp(p,a1))", ext)
    th2 = parse_formula("and(imp(p,a2),imp(a2,p))", ext)
    f1 = make_unary(ext, th1)
    f2 = make_unary(ext, th2)
    desig = ext.is_designated
    assert [desig(v) for v in f1.outputs] == [False, True, False, False]
    assert [desig(v) for v in f2.outputs] == [False, False, True, False]


def test_constants_extension_noop_when_separable(l3):
    assert conservative_extension(l3, "constants") is l3


def test_primitive_extension_on_min_only_logic():
    m = min_only_3()
    ok, pairs = is_separable(m)
    assert not ok and pairs == [(0, 1)]
    ext = conservative_extension(m, "primitive")
    added = [c for c in ext.connectives if c.name not in m.by_name]
    assert [c.name for c in added] == ["k1"]
    k1 = added[0]
    assert [ext.is_designated(v) for v in k1.table] == [False, True, False]
    assert is_separable(ext)[0]


def test_primitive_extension_tables_use_representatives(g4):
    ext = conservative_extension(g4, "primitive")
    assert ext.by_name["k1"].table == (0, 3, 0, 0)
    assert ext.by_name["k2"].table == (0, 0, 3, 0)
    seq = separating_sequence(ext)
    validate_sequence(ext, seq)


def test_extension_modes_error_message(l3):
    with pytest.raises(Exception):
        conservative_extension(l3, "nonsense")


def test_conservativity_random():
    # entailment over the original signature is untouched by either extension
    rng = random.Random(23)
    tested = 0
    for idx in range(60):
        if tested >= 8:
            break
        m = random_matrix(rng, idx, n_choices=(3, 4))
        ok, _ = is_separable(m)
        if ok:
            continue
        try:
            exts = [conservative_extension(m, "constants"),
                    conservative_extension(m, "primitive")]
        except NotSeparableError:
            continue
        tested += 1
        for _ in range(25):
            gamma = [random_formula(rng, m, ("p", "q"), 2)]
            alpha = random_formula(rng, m, ("p", "q"), 2)
            want = entails_oracle(m, gamma, alpha)
            for ext in exts:
                assert entails_oracle(ext, gamma, alpha) == want
    assert tested >= 3
