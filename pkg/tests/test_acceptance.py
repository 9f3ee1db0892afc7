"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criterion 10 audits structural data collected while criteria 6-8 run, so this
module's tests are meant to run in file order (the default).
"""
import functools
import random
import time
from itertools import product

from tabforge import (
    Atom,
    F,
    RuleContext,
    SignedFormula,
    T,
    behavior_statement,
    binary_print,
    build_branching_system,
    build_cutbased_system,
    bundled_matrix,
    conservative_extension,
    decide_entailment,
    definable_unary_functions,
    entails_oracle,
    fat_formula,
    is_separable,
    linear_statements,
    metrics,
    minimal_unobtainable_prints,
    parse_formula,
    prove_branching_analytic,
    prove_cutbased_analytic,
    prove_cutbased_ttsim,
    satisfies_signed,
    separating_sequence,
    sequence_from_tables,
    sequence_from_witnesses,
    simulate_branching_rule,
    streamline_behavior,
    streamline_linear,
    subformulas,
)
from conftest import enumerate_formulas, random_formula, random_matrix, separable_or_extended

THEOREM = "imp(imp(imp(p,neg(p)),p),p)"

# rho values and measure traces from cut-based runs in criteria 6-8,
# audited by criterion 10
COLLECTED = {"rho": [], "traces": 0, "runs": 0}


def criterion(number, limit_s, description):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            start = time.monotonic()
            try:
                fn()
            except BaseException:
                print(f"ACCEPTANCE {number}: FAIL — {description}")
                raise
            elapsed = time.monotonic() - start
            assert elapsed < limit_s, f"criterion {number} took {elapsed:.1f}s (limit {limit_s}s)"
            print(f"ACCEPTANCE {number}: PASS — {description} ({elapsed:.1f}s)")
        return run
    return wrap


def _l3_threshold():
    m = bundled_matrix("lukasiewicz-3")
    return m, sequence_from_tables(m, [(0, 2, 2)])


def _g4_extended():
    g4 = bundled_matrix("goedel-4")
    m = conservative_extension(g4, "constants")
    th1 = parse_formula("and(imp(a1,p),imp(p,a1))", m)
    th2 = parse_formula("and(imp(p,a2),imp(a2,p))", m)
    return m, sequence_from_witnesses(m, [th1, th2])


def _record_cut_run(ruleset, verdict):
    ctx = ruleset.ctx
    maxarity = max((c.arity for c in ctx.matrix.connectives), default=0)
    COLLECTED["rho"].append((metrics(verdict.tableau).rho, maxarity * ctx.width))
    COLLECTED["runs"] += 1


def _record_trace(verdict):
    trace = verdict.tableau.measure_trace
    assert all(a > b for a, b in zip(trace, trace[1:])), "measure must strictly decrease"
    COLLECTED["traces"] += 1


@criterion(1, 1.0, "three-valued threshold prints FF/FT/TT with {TF} unobtainable")
def test_acceptance_01_l3_prints():
    m, seq = _l3_threshold()
    assert [binary_print(m, seq, v) for v in range(3)] == ["FF", "FT", "TT"]
    assert minimal_unobtainable_prints(m, seq) == ("TF",)


@criterion(2, 5.0, "four-valued goedel logic has 6 unary functions, (1,2) unseparated")
def test_acceptance_02_g4_expressiveness():
    g4 = bundled_matrix("goedel-4")
    assert len(definable_unary_functions(g4)) == 6
    separable, pairs = is_separable(g4)
    assert not separable and pairs == [(1, 2)]


@criterion(3, 5.0, "constants extension yields prints with {TT*, T*T, *TT} unobtainable")
def test_acceptance_03_g4plus_prints():
    m, seq = _g4_extended()
    assert [c.name for c in m.connectives[-2:]] == ["a1", "a2"]
    assert set(minimal_unobtainable_prints(m, seq)) == {"TT*", "T*T", "*TT"}


# transcription of the streamlined branching statements for the three-valued
# system (slot tokens: p/q are the arguments, tp/tq the separated arguments)
TABLE_BRANCHING = {
    (F, 0, "neg"): [[(T, "tp")]],
    (T, 0, "neg"): [[(F, "tp")]],
    (F, 1, "neg"): [[(T, "p")]],
    (T, 1, "neg"): [[(F, "p")]],
    (F, 0, "imp"): [[(T, "p"), (F, "q")], [(T, "tp"), (F, "tq")]],
    (T, 0, "imp"): [[(F, "p"), (T, "tq")], [(F, "tp")], [(T, "q")]],
    (F, 1, "imp"): [[(T, "p"), (F, "tq")]],
    (T, 1, "imp"): [[(F, "p")], [(T, "tq")]],
    (F, 0, "or"): [[(F, "p"), (F, "q")]],
    (T, 0, "or"): [[(T, "p")], [(T, "q")]],
    (F, 1, "or"): [[(F, "tp"), (F, "tq")]],
    (T, 1, "or"): [[(T, "tp")], [(T, "tq")]],
    (F, 0, "and"): [[(F, "p")], [(F, "q")]],
    (T, 0, "and"): [[(T, "p"), (T, "q")]],
    (F, 1, "and"): [[(F, "tp")], [(F, "tq")]],
    (T, 1, "and"): [[(T, "tp"), (T, "tq")]],
}

SLOT_INDEX = {"p": (0, 0), "tp": (0, 1), "q": (1, 0), "tq": (1, 1)}


@criterion(4, 10.0, "streamlined branching statements match the classic streamlined set")
def test_acceptance_04_streamlining_fidelity():
    m, seq = _l3_threshold()
    ctx = RuleContext(m, seq)
    slot_formula = {}
    for i in (1, 2):
        for t in (0, 1):
            slot_formula[ctx.apply_sep(t, Atom(f"_{i}"))] = (i - 1, t)

    def mine(rhs, prints):
        for disjunct in rhs:
            if all(prints[slot_formula[sf.formula][0]][slot_formula[sf.formula][1]]
                   == sf.sign for sf in disjunct):
                return True
        return False

    def expected(pattern, prints):
        for disjunct in pattern:
            if all(prints[SLOT_INDEX[tok][0]][SLOT_INDEX[tok][1]] == sign
                   for sign, tok in disjunct):
                return True
        return False

    prints_of = {v: binary_print(m, seq, v) for v in range(3)}
    for (sign, r, conn), pattern in TABLE_BRANCHING.items():
        st = streamline_behavior(ctx, behavior_statement(ctx, sign, r, conn))
        k = m.by_name[conn].arity
        for xs in product(range(3), repeat=k):
            prints = tuple(prints_of[x] for x in xs)
            assert mine(st.rhs, prints) == expected(pattern, prints), (sign, r, conn, xs)
    slim = streamline_behavior(ctx, behavior_statement(ctx, F, 0, "imp"))
    assert len(slim.rhs) == 2


# transcription of the streamlined linear statements (vectors are per-argument
# prints over F/T/*; right sides list slot tokens)
TABLE_LINEAR = {
    (F, 0, "neg"): {"**": [(T, "tp")]},
    (T, 0, "neg"): {"**": [(F, "p"), (F, "tp")]},
    (F, 1, "neg"): {"**": [(T, "p"), (T, "tp")]},
    (T, 1, "neg"): {"**": [(F, "p")]},
    (F, 0, "imp"): {
        "**,**": [(T, "tp"), (F, "q")],
        "**,*T": [(T, "p"), (T, "tp"), (F, "q")],
        "F*,**": [(T, "tp"), (F, "q"), (F, "tq")],
    },
    (T, 0, "imp"): {
        "**,*F": [(F, "p"), (F, "tp"), (F, "q")],
        "**,F*": [(F, "p")],
        "**,T*": [(T, "tq")],
        "*F,**": [(F, "p")],
        "*F,T*": [(F, "p"), (T, "tq")],
        "*T,**": [(T, "tq")],
        "*T,F*": [(F, "p"), (T, "tq")],
        "T*,**": [(T, "tp"), (T, "q"), (T, "tq")],
    },
    (F, 1, "imp"): {"**,**": [(T, "p"), (T, "tp"), (F, "q"), (F, "tq")]},
    (T, 1, "imp"): {
        "**,*F": [(F, "p"), (F, "q")],
        "**,T*": [(T, "tq")],
        "*F,**": [(F, "p")],
        "*F,T*": [(F, "p"), (T, "tq")],
        "T*,**": [(T, "tp"), (T, "tq")],
    },
    (F, 0, "or"): {"**,**": [(F, "p"), (F, "q")]},
    (T, 0, "or"): {
        "**,*F": [(T, "p"), (T, "tp"), (F, "q")],
        "**,F*": [(T, "p"), (T, "tp")],
        "**,T*": [(T, "tq")],
        "*F,**": [(F, "p"), (T, "q"), (T, "tq")],
        "F*,**": [(T, "q"), (T, "tq")],
        "T*,**": [(T, "tp")],
        "T*,T*": [(T, "tp"), (T, "tq")],
    },
    (F, 1, "or"): {"**,**": [(F, "p"), (F, "tp"), (F, "q"), (F, "tq")]},
    (T, 1, "or"): {
        "**,*F": [(T, "tp"), (F, "q")],
        "**,T*": [(T, "tq")],
        "*F,**": [(F, "p"), (T, "tq")],
        "T*,**": [(T, "tp")],
        "T*,T*": [(T, "tp"), (T, "tq")],
    },
    (F, 0, "and"): {
        "**,*F": [(F, "q")],
        "**,T*": [(F, "p"), (T, "tq")],
        "*F,**": [(F, "p")],
        "*F,*F": [(F, "p"), (F, "q")],
        "T*,**": [(T, "tp"), (F, "q")],
    },
    (T, 0, "and"): {"**,**": [(T, "p"), (T, "tp"), (T, "q"), (T, "tq")]},
    (F, 1, "and"): {
        "**,*F": [(F, "q")],
        "**,*T": [(F, "p"), (F, "tp")],
        "**,T*": [(F, "p"), (F, "tp"), (T, "tq")],
        "*F,**": [(F, "p")],
        "*F,*F": [(F, "p"), (F, "q")],
        "*T,**": [(F, "q"), (F, "tq")],
        "T*,**": [(T, "tp"), (F, "q"), (F, "tq")],
    },
    (T, 1, "and"): {"**,**": [(T, "tp"), (T, "tq")]},
}


@criterion(5, 30.0, "streamlined linear statements match the classic streamlined set")
def test_acceptance_05_linear_streamlining():
    m, seq = _l3_threshold()
    ctx = RuleContext(m, seq)

    # the false-negation family keeps exactly one statement
    family = streamline_linear(ctx, linear_statements(ctx, F, 0, "neg"))
    assert len(family) == 1
    st = family[0]
    assert st.vector == ("**",)
    assert st.rhs == ((SignedFormula(T, ctx.apply_sep(1, Atom("_1"))),),)

    # family-wise propositional equivalence with the transcribed set
    slot_formula = {}
    for i in (1, 2):
        for t in (0, 1):
            slot_formula[ctx.apply_sep(t, Atom(f"_{i}"))] = (i - 1, t)

    for conn in ("neg", "imp", "or", "and"):
        k = m.by_name[conn].arity
        nslots = 2 * k
        for sign in (F, T):
            for r in (0, 1):
                mine = streamline_linear(ctx, linear_statements(ctx, sign, r, conn))
                table = TABLE_LINEAR[(sign, r, conn)]

                def sat_mine(head, cells):
                    for st in mine:
                        if head != sign:
                            continue
                        match_lhs = all(
                            cells[i * 2 + t] == st.vector[i][t]
                            for i in range(k)
                            for t in range(2)
                            if st.vector[i][t] != "*"
                        )
                        if not match_lhs:
                            continue
                        if st.rhs == "close":
                            return False
                        for disj in st.rhs:
                            for sf in disj:
                                a, t = slot_formula[sf.formula]
                                if cells[a * 2 + t] != sf.sign:
                                    return False
                    return True

                def sat_table(head, cells):
                    for vec, rhs in table.items():
                        if head != sign:
                            continue
                        parts = vec.split(",")
                        match_lhs = all(
                            cells[i * 2 + t] == parts[i][t]
                            for i in range(k)
                            for t in range(2)
                            if parts[i][t] != "*"
                        )
                        if not match_lhs:
                            continue
                        for s, tok in rhs:
                            a, t = SLOT_INDEX[tok]
                            if cells[a * 2 + t] != s:
                                return False
                    return True

                for head in (F, T):
                    for cells in product((F, T), repeat=nslots):
                        assert sat_mine(head, cells) == sat_table(head, cells), \
                            (sign, r, conn, head, cells)


@criterion(6, 600.0, "three strategies agree with the oracle on seeded random logics")
def test_acceptance_06_oracle_equivalence():
    rng = random.Random(2026)
    matrices = []
    idx = 0
    while len(matrices) < 50:
        idx += 1
        pair = separable_or_extended(rng, idx)
        if pair is not None:
            matrices.append(pair)
    checked = deep = 0
    for m, seq in matrices:
        bsys = build_branching_system(m, seq)
        csys = build_cutbased_system(m, seq)
        pool = enumerate_formulas(m, ("p", "q"), 2)
        roots = [(rng.choice(pool), rng.choice(pool)) for _ in range(110)]
        roots += [
            (random_formula(rng, m, ("p", "q"), 3), random_formula(rng, m, ("p", "q"), 3))
            for _ in range(4)
        ]
        deep += 4
        for gamma, alpha in roots:
            want = entails_oracle(m, [gamma], alpha)
            checked += 1
            for sysm, strat in ((bsys, "analytic"), (csys, "analytic"), (csys, "ttsim")):
                v = decide_entailment(sysm, [gamma], alpha, strategy=strat)
                assert v.valid == want, (m.name, strat, str(gamma), str(alpha))
                if sysm is csys:
                    _record_cut_run(sysm, v)
                if strat == "analytic":
                    _record_trace(v)
                if not v.valid:
                    root = [SignedFormula(T, gamma), SignedFormula(F, alpha)]
                    assert all(satisfies_signed(m, v.assignment, sf) for sf in root)
    assert checked >= 50 * 114 and deep >= 200


@criterion(7, 60.0, "headline verdicts: theoremhood, countermodels, fat refutations")
def test_acceptance_07_headline_verdicts():
    l3, l3_seq = _l3_threshold()
    bsys = build_branching_system(l3, l3_seq)
    assert decide_entailment(bsys, [], parse_formula(THEOREM, l3)).valid

    g4p, g4_seq = _g4_extended()
    gsys = build_branching_system(g4p, g4_seq)
    v = decide_entailment(gsys, [], parse_formula(THEOREM, g4p))
    assert not v.valid and v.assignment["p"] in (1, 2)
    _record_trace(v)

    kleene = bundled_matrix("kleene")
    ksys = build_branching_system(kleene, separating_sequence(kleene))
    v = decide_entailment(ksys, [], parse_formula("or(p,neg(p))", kleene))
    assert not v.valid
    _record_trace(v)

    for name in ("classical", "lukasiewicz-3", "lukasiewicz-4", "lukasiewicz-5",
                 "goedel-3", "goedel-4"):
        m = bundled_matrix(name)
        if not is_separable(m)[0]:
            m = conservative_extension(m, "constants")
        seq = separating_sequence(m)
        csys = build_cutbased_system(m, seq)
        for k in (1, 2, 3):
            v = prove_cutbased_analytic(csys, [SignedFormula(T, fat_formula(k, m))])
            assert v.valid, (name, k)
            _record_cut_run(csys, v)
            _record_trace(v)


@criterion(8, 300.0, "cut-based proofs beat branching proofs on fat formulas")
def test_acceptance_08_complexity_separation():
    m, seq = _l3_threshold()
    bsys = build_branching_system(m, seq)
    csys = build_cutbased_system(m, seq)
    width = len(seq)
    branching_lam, cut_lam, tt_lam, bases = {}, {}, {}, {}
    for k in (1, 2, 3):
        phi = fat_formula(k, m)
        root = [SignedFormula(T, phi)]
        vb = prove_branching_analytic(bsys, root)
        vc = prove_cutbased_analytic(csys, root)
        vt = prove_cutbased_ttsim(csys, root)
        assert vb.valid and vc.valid and vt.valid
        _record_trace(vb)
        _record_trace(vc)
        _record_cut_run(csys, vc)
        _record_cut_run(csys, vt)
        branching_lam[k] = metrics(vb.tableau).lam
        cut_lam[k] = metrics(vc.tableau).lam
        tt_lam[k] = metrics(vt.tableau).lam
        bases[k] = len(subformulas(phi)) * width * 2 ** (k * width)
    assert branching_lam[1] < branching_lam[2] < branching_lam[3]
    assert branching_lam[3] > 100
    assert cut_lam[3] * 2 <= branching_lam[3]
    # fit the constant on the smallest instance, then verify the bound's shape
    c = -(-tt_lam[1] // bases[1])  # integer ceiling
    for k in (2, 3):
        assert tt_lam[k] <= c * bases[k], (k, tt_lam[k], c * bases[k])


@criterion(9, 60.0, "cut-based fragments simulate branching rules within their size")
def test_acceptance_09_simulation():
    from tabforge.rulegen import Rule, instantiate

    rng = random.Random(909)
    sampled = 0
    for name in ("classical", "kleene", "priest", "lukasiewicz-3", "goedel-3"):
        m = bundled_matrix(name)
        seq = separating_sequence(m)
        ctx = RuleContext(m, seq)
        csys = build_cutbased_system(m, seq)
        pool = enumerate_formulas(m, ("p", "q"), 1)
        conns = [c for c in m.connectives if c.arity >= 1]
        for _ in range(40):
            c = rng.choice(conns)
            sign = rng.choice((F, T))
            r = rng.randrange(len(seq))
            st = behavior_statement(ctx, sign, r, c.name)
            if st.rhs in ("close", "noop"):
                continue
            rule = Rule(st.tag, st.kind, st.lhs, st.rhs, sign=st.sign,
                        sep_index=st.sep_index, conn=st.conn)
            binding = {f"_{i+1}": rng.choice(pool) for i in range(c.arity)}
            tab = simulate_branching_rule(csys, rule, binding)
            sampled += 1
            conclusion = [
                tuple(SignedFormula(sf.sign, instantiate(sf.formula, binding))
                      for sf in conj)
                for conj in rule.branches
            ]
            allowed = {sf for conj in conclusion for sf in conj}
            added = [sf for node in tab.iter_nodes() if node.rule_tag != "root"
                     for sf in node.formulas]
            assert all(sf in allowed for sf in added), rule.tag
            assert len(added) <= sum(len(conj) for conj in conclusion), rule.tag
    assert sampled >= 200


@criterion(10, 60.0, "structural bounds hold on every collected run")
def test_acceptance_10_structural_bounds():
    assert COLLECTED["runs"] >= 100
    for rho, bound in COLLECTED["rho"]:
        assert rho <= bound, (rho, bound)
    # every analytic strategy trace was checked strictly decreasing on record
    assert COLLECTED["traces"] >= 100


@criterion(11, 120.0, "conservative extensions preserve the oracle's verdicts")
def test_acceptance_11_conservativity():
    rng = random.Random(1111)
    found = 0
    idx = 0
    while found < 20:
        idx += 1
        assert idx < 4000, "sampler failed to find enough non-separable logics"
        m = random_matrix(rng, idx, n_choices=(3, 4))
        if is_separable(m)[0]:
            continue
        try:
            exts = (conservative_extension(m, "constants"),
                    conservative_extension(m, "primitive"))
        except Exception:
            continue
        if not all(is_separable(e)[0] for e in exts):
            continue
        found += 1
        for _ in range(100):
            gamma = [random_formula(rng, m, ("p", "q"), 2)]
            alpha = random_formula(rng, m, ("p", "q"), 2)
            want = entails_oracle(m, gamma, alpha)
            for ext in exts:
                assert entails_oracle(ext, gamma, alpha) == want
    assert found == 20
