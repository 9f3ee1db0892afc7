"""Tableau engine for the branching and cut-based systems.

Closure rules are applied eagerly: whenever a rule application produces a
branch on which a closure rule fits, the branch is closed on the spot.  The
analytic strategies otherwise expand a most-complex pending formula, consuming
it on every open branch where it is still pending; that batch discipline makes
the lexicographic (max-complexity, pending-count, open-branches) progress
measure strictly decrease, and the engine asserts the decrease at every
expansion step.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    Atom,
    F,
    Formula,
    Matrix,
    ResourceCapError,
    SignedFormula,
    SpecError,
    T,
    atom_sort_key,
    atoms_of,
    conjugate,
    evaluate,
    satisfies_signed,
)
from .prints import UNDEF, binary_print, extends
from .rulegen import (
    BRANCHING,
    CLOSE,
    CUT_BASED,
    Rule,
    RuleSet,
    instantiate,
    match,
    vec_extends,
)
from .separation import SeparatingSequence

DEFAULT_NODE_BUDGET = 1_000_000

_DONE = "linear-done"


class StrategyInvariantError(AssertionError):
    """The strategy's termination measure failed to decrease (engine bug)."""


# ---------------------------------------------------------------------------
# tree and branch bookkeeping

@dataclass
class Node:
    formulas: tuple[SignedFormula, ...]
    rule_tag: str
    children: list = field(default_factory=list)
    star: bool = False


class Branch:
    """One root-to-leaf path with the bookkeeping the strategies need.

    ``order`` maps each distinct signed formula to its first-occurrence index
    and doubles as the deterministic iteration order (plain sets would leak
    hash randomization into rule choice).  ``pending`` caches expansion
    candidates; stale entries are filtered out lazily against ``applied``.
    """

    __slots__ = ("leaf", "path", "formulas", "order", "applied", "pending",
                 "closed", "item_idx", "closure_rev")

    def __init__(self, leaf: Node, path: tuple = ()):
        self.leaf = leaf
        self.path = path
        self.formulas: list = []
        self.order: dict = {}
        self.applied: set = set()
        self.pending: dict = {}
        self.closed = False
        self.item_idx = 0  # cursor for the table-wise strategy
        self.closure_rev = -1  # formula count at the last failed closure scan

    def clone(self, leaf: Node, path: tuple) -> "Branch":
        b = Branch(leaf, path)
        b.formulas = list(self.formulas)
        b.order = dict(self.order)
        b.applied = set(self.applied)
        b.pending = dict(self.pending)
        b.item_idx = self.item_idx
        return b

    def has(self, sf: SignedFormula) -> bool:
        return sf in self.order

    def decided(self, f: Formula) -> bool:
        return SignedFormula(F, f) in self.order or SignedFormula(T, f) in self.order

    def iter_pending(self):
        """Live pending entries, dropping ones already consumed here."""
        stale = None
        for sf, info in self.pending.items():
            if info[-1] in self.applied:
                stale = [sf] if stale is None else stale + [sf]
                continue
            yield sf, info
        if stale:
            for sf in stale:
                del self.pending[sf]


class Tableau:
    """The proof tree: a chain of single-formula root nodes, then rule nodes."""

    def __init__(self, root: list, ruleset: RuleSet, node_budget: int = DEFAULT_NODE_BUDGET):
        if not root:
            raise SpecError("empty root set")
        self.ruleset = ruleset
        self.node_budget = node_budget
        self.node_count = 0
        self.measure_trace: list = []
        self.cut_formulas: list = []
        self.root_set = tuple(root)
        self.pend_info = _pending_info_fn(ruleset)
        first = parent = None
        for sf in root:
            node = self._new_node((sf,), "root")
            if parent is None:
                first = node
            else:
                parent.children.append(node)
            parent = node
        self.root = first
        branch = Branch(parent)
        for sf in root:
            self._add_formula(branch, sf)
        self.branches: list = [branch]
        _close_if_possible(self, branch)

    def _new_node(self, formulas, tag, star=False) -> Node:
        if self.node_count >= self.node_budget:
            raise ResourceCapError(f"node budget of {self.node_budget} exceeded")
        self.node_count += 1
        return Node(tuple(formulas), tag, star=star)

    def _add_formula(self, branch: Branch, sf: SignedFormula):
        branch.formulas.append(sf)
        if sf not in branch.order:
            branch.order[sf] = len(branch.formulas) - 1
            info = self.pend_info(sf)
            if info is not None and info[-1] not in branch.applied:
                branch.pending[sf] = info

    def open_branches(self) -> list:
        """Live branches in creation order; compacts the backing list."""
        live = [b for b in self.branches if not b.closed]
        self.branches = live
        return live

    def close_branch(self, branch: Branch, tag: str):
        star = self._new_node((), tag, star=True)
        branch.leaf.children.append(star)
        branch.leaf = star
        branch.closed = True

    def extend_branch(self, branch: Branch, tag: str, conclusion_branches) -> list:
        """Ramify a branch per an instantiated rule conclusion; the parent is
        retired and the children take its place."""
        children = []
        for i, formulas in enumerate(conclusion_branches):
            node = self._new_node(formulas, tag)
            branch.leaf.children.append(node)
            child = branch.clone(node, branch.path + (i,))
            for sf in formulas:
                self._add_formula(child, sf)
            children.append(child)
        branch.closed = True  # retired: replaced by its children
        self.branches.extend(children)
        return children

    def iter_nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children)


@dataclass(frozen=True)
class ProofMetrics:
    size: int
    lam: int
    rho: int


def metrics(tableau: Tableau) -> ProofMetrics:
    """Total labeled formulas, node count, and max labeled formulas per node.

    Closure markers count as nodes but carry no formulas."""
    size = lam = rho = 0
    for node in tableau.iter_nodes():
        lam += 1
        size += len(node.formulas)
        rho = max(rho, len(node.formulas))
    return ProofMetrics(size, lam, rho)


@dataclass
class Verdict:
    valid: bool
    tableau: Tableau
    assignment: dict | None = None
    branch: object | None = None

    @property
    def proof_metrics(self) -> ProofMetrics:
        return metrics(self.tableau)


# ---------------------------------------------------------------------------
# premise matching

def _binding_key(binding: dict):
    return tuple(sorted(binding.items(), key=lambda kv: kv[0]))


def _match_premises(premises, branch: Branch, binding: dict, idx: int = 0):
    """All ways to match the remaining premises against branch formulas."""
    if idx == len(premises):
        yield binding
        return
    sf = premises[idx]
    try:
        inst = instantiate(sf.formula, binding)
    except SpecError:
        inst = None
    if inst is not None:
        if SignedFormula(sf.sign, inst) in branch.order:
            yield from _match_premises(premises, branch, binding, idx + 1)
        return
    for cand in branch.order:
        if cand.sign != sf.sign:
            continue
        b = match(sf.formula, cand.formula, binding)
        if b is not None:
            yield from _match_premises(premises, branch, b, idx + 1)


def applicable_instances(branch: Branch, ruleset: RuleSet) -> list:
    """All (rule, binding) pairs applicable on an open branch, excluding pairs
    already applied there.  The cut rule is omitted: it applies to any formula
    and is instantiated by the strategies directly."""
    out = []
    for rule in ruleset.rules:
        if rule.kind == "cut":
            continue
        for binding in _match_premises(rule.premises, branch, {}):
            if (rule.tag, _binding_key(binding)) not in branch.applied:
                out.append((rule, binding))
    return out


def _find_closure(branch: Branch, ruleset: RuleSet):
    if branch.closure_rev == len(branch.formulas):
        return None
    for rule in ruleset.closure_rules:
        for binding in _match_premises(rule.premises, branch, {}):
            return rule, binding
    branch.closure_rev = len(branch.formulas)
    return None


def _close_if_possible(tableau: Tableau, branch: Branch) -> bool:
    hit = _find_closure(branch, tableau.ruleset)
    if hit is None:
        return False
    rule, binding = hit
    branch.applied.add((rule.tag, _binding_key(binding)))
    tableau.close_branch(branch, rule.tag)
    return True


def apply_rule(tableau: Tableau, branch: Branch, rule: Rule, binding: dict) -> list:
    """Apply one rule instance on one branch; closure rules close it, other
    rules ramify it.  Children on which a closure rule fits are closed on the
    spot.  Returns the child branches (closed ones included)."""
    branch.applied.add((rule.tag, _binding_key(binding)))
    if rule.branches == CLOSE:
        tableau.close_branch(branch, rule.tag)
        return []
    conclusion = [
        tuple(SignedFormula(sf.sign, instantiate(sf.formula, binding)) for sf in conj)
        for conj in rule.branches
    ]
    children = tableau.extend_branch(branch, rule.tag, conclusion)
    for child in children:
        _close_if_possible(tableau, child)
    return children


# ---------------------------------------------------------------------------
# pending bookkeeping and the progress measure

def _pending_info_fn(ruleset: RuleSet):
    """Eligibility test for expansion candidates, memoized per signed formula.

    Branching: (cplx, rule, binding, applied-key).  Cut-based: (cplx, done-key).
    """
    ctx = ruleset.ctx
    memo: dict = {}
    if ruleset.system == BRANCHING:

        def info(sf: SignedFormula):
            if sf in memo:
                return memo[sf]
            out = None
            if ctx.complexity(sf.formula) > 0:
                r, conn, _ = ctx.proper_decomposition(sf.formula)
                rule = next(
                    (rl for rl in ruleset.head_rules(sf.sign, r, conn) if not rl.is_closure),
                    None,
                )
                if rule is not None:
                    binding = match(rule.premises[0].formula, sf.formula)
                    if binding is not None:
                        out = (ctx.complexity(sf.formula), rule, binding,
                               (rule.tag, _binding_key(binding)))
            memo[sf] = out
            return out

    else:

        def info(sf: SignedFormula):
            if sf in memo:
                return memo[sf]
            out = None
            if ctx.complexity(sf.formula) > 0:
                out = (ctx.complexity(sf.formula), (_DONE, sf))
            memo[sf] = out
            return out

    return info


def _scan_pending(tableau: Tableau):
    """(branch, sf, info) triples for all live pending entries."""
    out = []
    for branch in tableau.open_branches():
        for sf, info in branch.iter_pending():
            out.append((branch, sf, info))
    return out


def _measure(tableau: Tableau, pending) -> tuple:
    opens = len(tableau.open_branches())
    if not pending:
        return (0, 0, opens)
    i = max(p[2][0] for p in pending)
    j = len({p[1] for p in pending if p[2][0] == i})
    return (i, j, opens)


def _record_measure(tableau: Tableau, pending):
    m = _measure(tableau, pending)
    if tableau.measure_trace and not m < tableau.measure_trace[-1]:
        raise StrategyInvariantError(
            f"measure did not decrease: {tableau.measure_trace[-1]} -> {m}"
        )
    tableau.measure_trace.append(m)


def _pick(pending):
    """Most complex first; ties by age on the owning branch, then by the
    leftmost branch (branch paths order the tree left to right)."""
    best = None
    for p in pending:
        branch, sf, info = p
        k = (-info[0], branch.order[sf], branch.path)
        if best is None or k < best[0]:
            best = (k, p)
    return best[1]


def _analytic_cut(tableau: Tableau, branch: Branch, g: Formula) -> list:
    """Split a branch on g (left child F, right child T).  Strategies only cut
    generalized subformulas of branch formulas; the cut trail is recorded so
    analyticity can be audited."""
    tableau.cut_formulas.append(g)
    return apply_rule(tableau, branch, tableau.ruleset.cut_rule, {"_1": g})


def _apply_linear_family(tableau: Tableau, branch: Branch, sf: SignedFormula, family=None):
    """Fire the linear rules of sf's family on one branch until nothing new
    fires.  Returns the live branch object (end of the clone chain)."""
    ctx = tableau.ruleset.ctx
    if family is None:
        r, conn, _ = ctx.proper_decomposition(sf.formula)
        family = (sf.sign, r, conn)
    rules = tableau.ruleset.head_rules(*family)
    if not rules:
        return branch
    head_binding = match(rules[0].premises[0].formula, sf.formula)
    if head_binding is None:
        return branch
    changed = True
    while changed and not branch.closed:
        changed = False
        for rule in rules:
            if branch.closed:
                return branch
            hit = next(_match_premises(rule.premises, branch, dict(head_binding)), None)
            if hit is None:
                continue
            key = (rule.tag, _binding_key(hit))
            if key in branch.applied:
                continue
            if rule.branches != CLOSE:
                conclusion = [
                    SignedFormula(c.sign, instantiate(c.formula, hit))
                    for c in rule.branches[0]
                ]
                if all(c in branch.order for c in conclusion):
                    branch.applied.add(key)  # nothing new: record, add no node
                    continue
            new_branches = apply_rule(tableau, branch, rule, hit)
            changed = True
            if new_branches:
                branch = new_branches[0]  # linear rules have a single conclusion
    return branch


# ---------------------------------------------------------------------------
# branching system strategy

def prove_branching_analytic(
    ruleset: RuleSet, root, node_budget: int = DEFAULT_NODE_BUDGET
) -> Verdict:
    """Expand the most complex pending formula with its most concrete rule, on
    every open branch where it is pending; closure rules fire eagerly."""
    if ruleset.system != BRANCHING:
        raise SpecError("prove_branching_analytic needs a branching rule set")
    tableau = Tableau(list(root), ruleset, node_budget)
    while True:
        pending = _scan_pending(tableau)
        if not pending:
            if tableau.open_branches():
                return _countermodel(tableau)
            return Verdict(True, tableau)
        _record_measure(tableau, pending)
        _, sf, info = _pick(pending)
        _, rule, binding, key = info
        for branch in list(tableau.open_branches()):
            if branch.has(sf) and key not in branch.applied:
                apply_rule(tableau, branch, rule, binding)


# ---------------------------------------------------------------------------
# cut-based strategies

def _branch_vector(ctx, branch: Branch, args) -> tuple:
    """The partial print vector the branch knows for the given argument
    formulas."""
    out = []
    for a in args:
        cells = []
        for t in range(ctx.width):
            g = ctx.apply_sep(t, a)
            if SignedFormula(T, g) in branch.order:
                cells.append(T)
            elif SignedFormula(F, g) in branch.order:
                cells.append(F)
            else:
                cells.append(UNDEF)
        out.append("".join(cells))
    return tuple(out)


def _head_settled(ctx, branch: Branch, sf: SignedFormula, r: int, conn: str, args) -> bool:
    """Whether the branch's partial information about the arguments already
    forces the head's sign, making further cuts on its slots pointless: no
    argument tuple compatible with the branch lies on the opposite side."""
    vector = _branch_vector(ctx, branch, args)
    complement = ctx.arg_tuples(conjugate(sf.sign), r, conn)
    return not any(vec_extends(ctx.print_vector(xs), vector) for xs in complement)


def _determined_sign(ctx, branch: Branch, g: Formula):
    """The sign the branch's total slot information forces on g, or None when
    some slot below g is still open."""
    if ctx.is_analyzable(g):
        r, conn, args = ctx.proper_decomposition(g)
        values = []
        for pr in _branch_vector(ctx, branch, args):
            v = ctx.value_of_print.get(pr)
            if v is None:
                return None
            values.append(v)
        out = ctx.matrix.op_value(conn, values)
        return T if ctx.seq.separators[r].outputs[out] in ctx.matrix.designated else F
    if not atoms_of(g):
        return T if evaluate(ctx.matrix, g, {}) in ctx.matrix.designated else F
    return None


def prove_cutbased_analytic(
    ruleset: RuleSet, root, node_budget: int = DEFAULT_NODE_BUDGET
) -> Verdict:
    """Pick the most complex pending formula, cut its undecided immediate
    generalized subformulas, and fire the matching linear rules on each branch
    as it develops; closure rules fire eagerly.  A slot is not cut when a rule
    already decided it, and a branch stops cutting a formula's slots entirely
    once its partial information semantically settles the formula's sign (the
    partial-print rules then carry everything the sign can still contribute).
    """
    if ruleset.system != CUT_BASED:
        raise SpecError("prove_cutbased_analytic needs a cut-based rule set")
    ctx = ruleset.ctx
    tableau = Tableau(list(root), ruleset, node_budget)
    while True:
        pending = _scan_pending(tableau)
        if not pending:
            if tableau.open_branches():
                return _countermodel(tableau)
            return Verdict(True, tableau)
        _record_measure(tableau, pending)
        _, sf, info = _pick(pending)
        done_key = info[-1]
        gsubs = ctx.immediate_gsubs(sf.formula)
        r, conn, args = ctx.proper_decomposition(sf.formula)
        family_key = (sf.sign, r, conn)
        for branch in list(tableau.open_branches()):
            if not branch.has(sf) or done_key in branch.applied:
                continue
            branch.applied.add(done_key)
            branch.pending.pop(sf, None)
            work = [branch]
            while work:
                leaf = work.pop()
                if leaf.closed:
                    continue
                leaf = _apply_linear_family(tableau, leaf, sf, family=family_key)
                if leaf.closed:
                    continue
                if _head_settled(ctx, leaf, sf, r, conn, args):
                    continue
                g = next((g for g in gsubs if not leaf.decided(g)), None)
                if g is None:
                    continue
                left, right = _analytic_cut(tableau, leaf, g)
                work.append(right)
                work.append(left)


def prove_cutbased_ttsim(
    ruleset: RuleSet, root, node_budget: int = DEFAULT_NODE_BUDGET
) -> Verdict:
    """Truth-table-style procedure: cut every separator slot of every root
    atom up front (2^(atoms x separators) branches), then work bottom-up
    through the remaining generalized subformulas, cutting each undecided one
    and firing its linear rules; contradictions close with a closure rule."""
    if ruleset.system != CUT_BASED:
        raise SpecError("prove_cutbased_ttsim needs a cut-based rule set")
    ctx = ruleset.ctx
    tableau = Tableau(list(root), ruleset, node_budget)

    names = set()
    for sf in tableau.root_set:
        names |= atoms_of(sf.formula)
    atom_slots = [
        ctx.apply_sep(t, Atom(name))
        for name in sorted(names, key=atom_sort_key)
        for t in range(ctx.width)
    ]
    tableau.basic_cut_count = len(atom_slots)  # type: ignore[attr-defined]

    pool: list = []
    pos: dict = {}
    for sf in tableau.root_set:
        for g in ctx.generalized_subformulas(sf.formula):
            if g not in pos:
                pos[g] = len(pool)
                pool.append(g)
    slot_set = set(atom_slots)
    items = atom_slots + sorted(
        (g for g in pool if g not in slot_set),
        key=lambda g: (ctx.complexity(g), pos[g]),
    )

    def close_wrong_side(branch: Branch, g: Formula):
        """All slots below g are decided, so its sign is determined; firing the
        linear family on the contradicting side closes it (the right side
        needs nothing)."""
        if branch.closed:
            return branch
        sign = _determined_sign(ctx, branch, g)
        if sign is None:
            # fall back: fire whatever is present
            for s in (F, T):
                sf = SignedFormula(s, g)
                if not branch.closed and branch.has(sf) and ctx.is_analyzable(g):
                    branch = _apply_linear_family(tableau, branch, sf)
            return branch
        wrong = SignedFormula(F if sign == T else T, g)
        if branch.has(wrong) and ctx.is_analyzable(g):
            branch = _apply_linear_family(tableau, branch, wrong)
        return branch

    stack = [tableau.branches[0]]
    while stack:
        branch = stack.pop()
        while not branch.closed:
            if branch.item_idx >= len(items):
                break  # exhausted and open
            g = items[branch.item_idx]
            branch.item_idx += 1
            if branch.decided(g):
                branch = close_wrong_side(branch, g)
                continue
            left, right = _analytic_cut(tableau, branch, g)
            left = close_wrong_side(left, g)
            right = close_wrong_side(right, g)
            stack.append(right)
            branch = left
    if not tableau.open_branches():
        return Verdict(True, tableau)
    return _countermodel(tableau)


# ---------------------------------------------------------------------------
# countermodels

def extract_countermodel(matrix: Matrix, seq: SeparatingSequence, branch: Branch) -> dict:
    """Read an assignment off an open exhausted branch: each atom gets the
    smallest value whose print extends the branch's partial information.  The
    result is checked against every signed formula on the branch."""
    names = set()
    for sf in branch.order:
        names |= atoms_of(sf.formula)
    assignment = {}
    totals = {v: binary_print(matrix, seq, v) for v in range(matrix.n)}
    for name in sorted(names, key=atom_sort_key):
        cells = []
        for r in range(len(seq)):
            target = seq.apply(r, Atom(name))
            if SignedFormula(T, target) in branch.order:
                cells.append(T)
            elif SignedFormula(F, target) in branch.order:
                cells.append(F)
            else:
                cells.append(UNDEF)
        partial = "".join(cells)
        value = next((v for v in range(matrix.n) if extends(totals[v], partial)), None)
        if value is None:
            raise SpecError(f"branch print {partial!r} for {name!r} is unobtainable")
        assignment[name] = value
    for sf in branch.order:
        if not satisfies_signed(matrix, assignment, sf):
            raise SpecError(
                f"extracted assignment fails {sf}; the rule generator is inconsistent"
            )
    return assignment


def _countermodel(tableau: Tableau) -> Verdict:
    branch = min(tableau.open_branches(), key=lambda b: b.path)
    ctx = tableau.ruleset.ctx
    assignment = extract_countermodel(ctx.matrix, ctx.seq, branch)
    return Verdict(False, tableau, assignment=assignment, branch=branch)


# ---------------------------------------------------------------------------
# entailment front end

def decide_entailment(
    ruleset: RuleSet,
    gamma,
    alpha: Formula,
    strategy: str = "analytic",
    node_budget: int = DEFAULT_NODE_BUDGET,
    cross_check: bool = False,
) -> Verdict:
    """Prove gamma |- alpha from the root set {T:gamma..., F:alpha}.

    With ``cross_check`` the verdict is compared against the brute-force
    truth-table oracle (test harness use)."""
    gamma = list(gamma)
    root = [SignedFormula(T, g) for g in gamma] + [SignedFormula(F, alpha)]
    if ruleset.system == BRANCHING:
        if strategy != "analytic":
            raise SpecError(f"strategy {strategy!r} needs the cut-based system")
        verdict = prove_branching_analytic(ruleset, root, node_budget)
    elif strategy == "analytic":
        verdict = prove_cutbased_analytic(ruleset, root, node_budget)
    elif strategy == "ttsim":
        verdict = prove_cutbased_ttsim(ruleset, root, node_budget)
    else:
        raise SpecError(f"unknown strategy {strategy!r}; use 'analytic' or 'ttsim'")
    if cross_check:
        from .core import entails_oracle

        want = entails_oracle(ruleset.ctx.matrix, gamma, alpha)
        if want != verdict.valid:
            raise SpecError(
                f"prover disagrees with the oracle on {gamma} |- {alpha}: "
                f"{verdict.valid} vs {want}"
            )
    return verdict


# ---------------------------------------------------------------------------
# simulating a branching rule inside the cut-based system

def simulate_branching_rule(cut_ruleset: RuleSet, b_rule, binding: dict) -> Tableau:
    """Replay one branching-rule instance with linear rules plus analytic cuts.

    Linear rules of the instance's own family are applied as long as possible;
    when none fire, the fragment cuts on a separator slot that occurs with
    both signs across the branching rule's conclusion.  Every formula added
    this way occurs in some conclusion branch of the simulated rule.
    """
    if cut_ruleset.system != CUT_BASED:
        raise SpecError("simulation needs a cut-based rule set")
    if b_rule.kind != "behavior":
        raise SpecError("only behavior rules are simulated")
    ctx = cut_ruleset.ctx
    premise = SignedFormula(
        b_rule.premises[0].sign, instantiate(b_rule.premises[0].formula, binding)
    )
    if b_rule.branches == CLOSE:
        # the cut system closes the same premise with one of its closure rules
        tableau = Tableau([premise], cut_ruleset)
        if tableau.open_branches():
            branch = tableau.branches[0]
            branch = _apply_linear_family(
                tableau, branch, premise,
                family=(b_rule.sign, b_rule.sep_index, b_rule.conn),
            )
            if not branch.closed:
                raise SpecError(f"cut system cannot close {premise}")
        return tableau
    conclusion_set = {
        SignedFormula(sf.sign, instantiate(sf.formula, binding))
        for conj in b_rule.branches
        for sf in conj
    }
    both_signs = [
        f
        for f in dict.fromkeys(sf.formula for sf in conclusion_set)
        if SignedFormula(F, f) in conclusion_set and SignedFormula(T, f) in conclusion_set
    ]
    k = cut_ruleset.ctx.matrix.by_name[b_rule.conn].arity  # type: ignore[attr-defined]
    slot_order = [
        ctx.apply_sep(t, binding[f"_{i + 1}"]) for i in range(k) for t in range(ctx.width)
    ]
    family = (b_rule.sign, b_rule.sep_index, b_rule.conn)

    tableau = Tableau([premise], cut_ruleset)
    stack = list(tableau.open_branches())
    while stack:
        branch = stack.pop()
        while not branch.closed:
            branch = _apply_linear_family(tableau, branch, premise, family=family)
            if branch.closed:
                break
            g = next(
                (s for s in slot_order if s in both_signs and not branch.decided(s)), None
            )
            if g is None:
                break
            left, right = _analytic_cut(tableau, branch, g)
            stack.append(right)
            branch = left
    return tableau


# ---------------------------------------------------------------------------
# hard-formula generator

def fat_formula(k: int, matrix: Matrix) -> Formula:
    """Conjunction, over all sign patterns of k atoms, of the disjunction of
    the correspondingly signed literals; unsatisfiable but exponentially hard
    for standard branching tableaux."""
    from .core import App

    if k < 1:
        raise SpecError("fat formulas need k >= 1")
    for name, arity in (("and", 2), ("or", 2), ("neg", 1)):
        c = matrix.by_name.get(name)  # type: ignore[attr-defined]
        if c is None or c.arity != arity:
            raise SpecError(f"fat formulas need a {arity}-ary connective named {name!r}")
    letters = "pqrstuvwxyz"
    names = [letters[i] if i < len(letters) else f"p{i}" for i in range(k)]

    def disjunct(mask: int) -> Formula:
        lits = [
            App("neg", (Atom(names[i]),)) if mask & (1 << i) else Atom(names[i])
            for i in range(k)
        ]
        out = lits[-1]
        for lit in reversed(lits[:-1]):
            out = App("or", (lit, out))
        return out

    masks = sorted(range(1 << k), key=lambda m: (bin(m).count("1"), m))
    parts = [disjunct(m) for m in masks]
    out = parts[-1]
    for part in reversed(parts[:-1]):
        out = App("and", (part, out))
    return out
