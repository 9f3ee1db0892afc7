"""Statement synthesis and rule compilation for both tableau systems.

From a matrix and a separating sequence this module derives:

* behavior statements: for each sign, separator and connective, the exhaustive
  disjunctive description of the argument prints compatible with that signed
  head (optionally minimized with Quine-McCluskey plus Petrick's method);
* unobtainable-print closure statements, one per minimal unobtainable print;
* ground closure statements for intersection formulas (formulas that
  instantiate two incomparable separator/connective fits at once);
* linear statements for the cut-based system: for every vector of partial
  argument prints, either a closure or the largest print vector entailed.

Compiled rule sets drive the provers in :mod:`tabforge.prover`.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import (
    App,
    Atom,
    F,
    Formula,
    Matrix,
    ResourceCapError,
    SignedFormula,
    SpecError,
    T,
    TabforgeError,
    conjugate,
    evaluate,
    is_noncomposite,
)
from .prints import UNDEF, extends, minimal_unobtainable_prints, print_table
from .separation import SeparatingSequence

CLOSE = "close"
NOOP = "noop"

DEFAULT_VECTOR_CAP = 1_000_000


class BasicFormulaError(TabforgeError):
    """Raised when an operation needs a composite, analyzable formula."""


class IntersectionFormulaError(TabforgeError):
    """Raised when a formula instantiates two incomparable fits at once."""


class UnsatisfiedVectorError(TabforgeError):
    """No argument tuple in the given set matches the print vector."""


# ---------------------------------------------------------------------------
# schema formulas: metavariables, matching, unification

MV_PREFIX = "_"


def mv(i) -> Atom:
    return Atom(f"{MV_PREFIX}{i}")


def is_mv(f: Formula) -> bool:
    return isinstance(f, Atom) and f.name.startswith(MV_PREFIX)


def match(pattern: Formula, target: Formula, binding: dict | None = None):
    """One-way matching: metavariables in the pattern bind subterms of the
    target (which is treated as inert).  Returns the binding or None."""
    binding = {} if binding is None else dict(binding)
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if is_mv(p):
            bound = binding.get(p.name)
            if bound is None:
                binding[p.name] = t
            elif bound != t:
                return None
        elif isinstance(p, Atom):
            if p != t:
                return None
        else:
            if not (isinstance(t, App) and t.head == p.head and len(t.args) == len(p.args)):
                return None
            stack.extend(zip(p.args, t.args))
    return binding


def instantiate(f: Formula, binding: dict) -> Formula:
    if is_mv(f):
        try:
            return binding[f.name]
        except KeyError:
            raise SpecError(f"unbound metavariable {f.name}") from None
    if isinstance(f, Atom) or not f.args:
        return f
    return App(f.head, tuple(instantiate(a, binding) for a in f.args))


def _walk(f: Formula, subst: dict) -> Formula:
    while is_mv(f) and f.name in subst:
        f = subst[f.name]
    return f


def _occurs(name: str, f: Formula, subst: dict) -> bool:
    f = _walk(f, subst)
    if is_mv(f):
        return f.name == name
    if isinstance(f, App):
        return any(_occurs(name, a, subst) for a in f.args)
    return False


def unify(a: Formula, b: Formula):
    """Robinson unification over formulas with metavariables; returns the most
    general unifier as a substitution dict, or None."""
    subst: dict = {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = _walk(x, subst), _walk(y, subst)
        if x == y:
            continue
        if is_mv(x):
            if _occurs(x.name, y, subst):
                return None
            subst[x.name] = y
        elif is_mv(y):
            if _occurs(y.name, x, subst):
                return None
            subst[y.name] = x
        elif isinstance(x, App) and isinstance(y, App) and x.head == y.head and len(x.args) == len(y.args):
            stack.extend(zip(x.args, y.args))
        else:
            return None
    return subst


def resolve(f: Formula, subst: dict) -> Formula:
    f = _walk(f, subst)
    if isinstance(f, App) and f.args:
        return App(f.head, tuple(resolve(a, subst) for a in f.args))
    return f


def _is_ground_schema(f: Formula) -> bool:
    if is_mv(f):
        return False
    if isinstance(f, Atom):
        return True  # ordinary atoms never occur in schema patterns
    return all(_is_ground_schema(a) for a in f.args)


def _rename_mvs(f: Formula, suffix: str) -> Formula:
    if is_mv(f):
        return Atom(f.name + suffix)
    if isinstance(f, Atom) or not f.args:
        return f
    return App(f.head, tuple(_rename_mvs(a, suffix) for a in f.args))


# ---------------------------------------------------------------------------
# context: everything derived from (matrix, sequence)

class RuleContext:
    """Caches the print data and the generalized-subformula analysis for one
    matrix/sequence pair."""

    def __init__(self, matrix: Matrix, seq: SeparatingSequence):
        self.matrix = matrix
        self.seq = seq
        self.width = len(seq)
        self.print_of = print_table(matrix, seq)
        self.obtainable = frozenset(self.print_of.values())
        self.value_of_print = {p: v for v, p in self.print_of.items()}
        self.minimal_unobtainable = minimal_unobtainable_prints(matrix, seq)
        self._strip_memo: dict = {}
        self._apply_memo: dict = {}
        self._fits_memo: dict = {}
        self._cplx_memo: dict = {}
        self._tuples_memo: dict = {}
        self._fit_patterns: dict = {}
        self.intersections = self._compute_intersections()

    # -- separator application and stripping --------------------------------
    def apply_sep(self, r: int, f: Formula) -> Formula:
        key = (r, f)
        out = self._apply_memo.get(key)
        if out is None:
            out = self.seq.apply(r, f)
            self._apply_memo[key] = out
        return out

    def strip_all(self, f: Formula):
        """All ways of reading f as separator-of-core: tuple of (r, core)."""
        out = self._strip_memo.get(f)
        if out is None:
            hits = []
            for r in range(self.width):
                if r == 0:
                    hits.append((0, f))
                    continue
                pattern = self._sep_pattern(r)
                if pattern is None:
                    continue
                b = match(pattern, f)
                if b is not None:
                    hits.append((r, b["_s"]))
            out = tuple(hits)
            self._strip_memo[f] = out
        return out

    def _sep_pattern(self, r: int):
        """Witness of separator r with its variable replaced by a metavariable;
        None for ground (constant) witnesses, which cannot be stripped."""
        from .core import substitute
        from .separation import SEQ_VAR

        w = self.seq.separators[r].witness
        pattern = substitute(w, SEQ_VAR, mv("s"))
        if pattern == w:  # no variable occurrence
            return None
        return pattern

    def fit_pattern(self, r: int, conn_name: str) -> Formula:
        key = (r, conn_name)
        out = self._fit_patterns.get(key)
        if out is None:
            c = self.matrix.by_name[conn_name]  # type: ignore[attr-defined]
            core = App(conn_name, tuple(mv(i + 1) for i in range(c.arity)))
            out = self.apply_sep(r, core)
            self._fit_patterns[key] = out
        return out

    # -- basic formulas, fits, intersection formulas ------------------------
    def is_basic(self, f: Formula) -> bool:
        return any(is_noncomposite(core) for _, core in self.strip_all(f))

    def fits(self, f: Formula):
        """All (r, connective) pairs whose schema f instantiates, most concrete
        first.  Noncomposite formulas have no fits at all."""
        if is_noncomposite(f):
            raise BasicFormulaError(f"{f} is not a composite formula")
        out = self._fits_memo.get(f)
        if out is not None:
            return out
        cands = []
        for r, core in self.strip_all(f):
            if isinstance(core, App):
                cands.append((r, core.head, core))
        ordered = self._order_fits(cands)
        self._fits_memo[f] = ordered
        return ordered

    def _order_fits(self, cands):
        def strictly_more_concrete(a, b):
            pa = self.fit_pattern(a[0], a[1])
            pb = self.fit_pattern(b[0], b[1])
            return match(pb, pa) is not None and match(pa, pb) is None

        def key(c):
            dominated = sum(1 for d in cands if d is not c and strictly_more_concrete(c, d))
            conn_idx = list(self.matrix.by_name).index(c[1])  # type: ignore[attr-defined]
            return (-dominated, c[0], conn_idx)

        return tuple(sorted(cands, key=key))

    def proper_decomposition(self, f: Formula):
        """(r, connective, args) for the most concrete fit of an analyzable
        formula."""
        if f in self.intersections:
            raise IntersectionFormulaError(f"{f} is an intersection formula")
        if self.is_basic(f):
            raise BasicFormulaError(f"{f} is basic")
        r, head, core = self.fits(f)[0]
        return r, head, core.args

    def _compute_intersections(self) -> dict:
        pats = []
        for r in range(self.width):
            for c in self.matrix.connectives:
                pats.append((r, c.name, self.fit_pattern(r, c.name)))
        found: dict = {}
        for i in range(len(pats)):
            for j in range(i + 1, len(pats)):
                r1, c1, p1 = pats[i]
                r2, c2, p2 = pats[j]
                if r1 == r2:
                    continue
                p2r = _rename_mvs(p2, "b")
                subst = unify(p1, p2r)
                if subst is None:
                    continue
                common = resolve(p1, subst)
                if not _is_ground_schema(common):
                    continue  # nesting overlap, not a single shared instance
                one_way = match(p2, p1) is not None
                other_way = match(p1, p2) is not None
                if one_way != other_way:
                    continue  # strict nesting of one schema inside the other
                found.setdefault(common, ((r1, c1), (r2, c2)))
        return found

    # -- generalized complexity ---------------------------------------------
    def complexity(self, f: Formula) -> int:
        out = self._cplx_memo.get(f)
        if out is not None:
            return out
        if self.is_basic(f) or f in self.intersections:
            out = 0
        else:
            r, head, args = self.proper_decomposition(f)
            out = 1 + max(
                self.complexity(self.apply_sep(t, a))
                for a in args
                for t in range(self.width)
            )
        self._cplx_memo[f] = out
        return out

    def is_analyzable(self, f: Formula) -> bool:
        return self.complexity(f) > 0

    def immediate_gsubs(self, f: Formula):
        """Generalized immediate subformulas: every separator applied to every
        immediate subformula under the most concrete fit."""
        _, _, args = self.proper_decomposition(f)
        out = []
        for a in args:
            for t in range(self.width):
                g = self.apply_sep(t, a)
                if g not in out:
                    out.append(g)
        return tuple(out)

    def generalized_subformulas(self, f: Formula):
        """Closure of {f} under generalized immediate subformulas."""
        seen = []
        stack = [f]
        while stack:
            g = stack.pop(0)
            if g in seen:
                continue
            seen.append(g)
            if self.is_analyzable(g):
                stack.extend(self.immediate_gsubs(g))
        return tuple(seen)

    # -- semantic tables -----------------------------------------------------
    def arg_tuples(self, sign: str, r: int, conn_name: str):
        """Argument-value tuples that give the separator-of-connective head the
        bivalent value `sign`."""
        key = (sign, r, conn_name)
        out = self._tuples_memo.get(key)
        if out is None:
            c = self.matrix.by_name[conn_name]  # type: ignore[attr-defined]
            sep_out = self.seq.separators[r].outputs
            desig = self.matrix.designated
            keep = []
            for xs in product(range(self.matrix.n), repeat=c.arity):
                value_sign = T if sep_out[self.matrix.op_value(conn_name, xs)] in desig else F
                if value_sign == sign:
                    keep.append(xs)
            out = tuple(keep)
            self._tuples_memo[key] = out
        return out

    def print_vector(self, xs) -> tuple:
        return tuple(self.print_of[x] for x in xs)


# module-level wrappers keeping the operation surface free of the context class

def fits(f: Formula, seq: SeparatingSequence, matrix: Matrix):
    return [(r, name) for r, name, _ in RuleContext(matrix, seq).fits(f)]


def intersection_formulas(seq: SeparatingSequence, matrix: Matrix):
    ctx = RuleContext(matrix, seq)
    return sorted(ctx.intersections.items(), key=lambda kv: str(kv[0]))


def complexity(f: Formula, seq: SeparatingSequence, matrix: Matrix) -> int:
    return RuleContext(matrix, seq).complexity(f)


def generalized_immediate_subformulas(f: Formula, seq: SeparatingSequence, matrix: Matrix):
    return RuleContext(matrix, seq).immediate_gsubs(f)


def arg_tuples(matrix: Matrix, seq: SeparatingSequence, sign: str, r: int, conn_name: str):
    return RuleContext(matrix, seq).arg_tuples(sign, r, conn_name)


# ---------------------------------------------------------------------------
# statements

@dataclass(frozen=True)
class Statement:
    """A metalinguistic conditional: conjunctive left side, and a right side
    that is a DNF (tuple of conjunctions), a closure marker, or a no-op."""

    kind: str  # behavior | unobtainable | ground | linear | absurd | cut
    tag: str
    lhs: tuple[SignedFormula, ...]
    rhs: object  # tuple[tuple[SignedFormula, ...], ...] | "close" | "noop"
    sign: str | None = None
    sep_index: int | None = None
    conn: str | None = None
    vector: tuple | None = None

    @property
    def is_closure(self) -> bool:
        return self.rhs == CLOSE


def _v_conjuncts(ctx: RuleContext, args, prints) -> tuple:
    """Signed separator formulas describing each argument's (partial) print."""
    out = []
    for i, (arg, pr) in enumerate(zip(args, prints)):
        for t, cell in enumerate(pr):
            if cell != UNDEF:
                out.append(SignedFormula(cell, ctx.apply_sep(t, arg)))
    return tuple(out)


def behavior_statement(ctx: RuleContext, sign: str, r: int, conn_name: str) -> Statement:
    c = ctx.matrix.by_name[conn_name]  # type: ignore[attr-defined]
    args = tuple(mv(i + 1) for i in range(c.arity))
    head = SignedFormula(sign, ctx.apply_sep(r, App(conn_name, args)))
    tuples = ctx.arg_tuples(sign, r, conn_name)
    tag = f"behavior:{sign}:{r}:{conn_name}"
    if not tuples:
        rhs: object = CLOSE
    elif len(tuples) == ctx.matrix.n ** c.arity:
        rhs = NOOP
    else:
        rhs = tuple(_v_conjuncts(ctx, args, ctx.print_vector(xs)) for xs in tuples)
    return Statement("behavior", tag, (head,), rhs, sign=sign, sep_index=r, conn=conn_name)


def unobtainable_statements(ctx: RuleContext):
    out = []
    for p in ctx.minimal_unobtainable:
        lhs = _v_conjuncts(ctx, (mv(1),), (p,))
        out.append(Statement("unobtainable", f"unobtainable:{p}", lhs, CLOSE, vector=(p,)))
    return out


def ground_statements(ctx: RuleContext):
    out = []
    for f in sorted(ctx.intersections, key=str):
        sign = T if evaluate(ctx.matrix, f, {}) in ctx.matrix.designated else F
        lhs = (SignedFormula(conjugate(sign), f),)
        out.append(Statement("ground", f"ground:{f}", lhs, CLOSE, sign=sign))
    return out


def absurd_statement() -> Statement:
    return Statement("absurd", "absurd", (SignedFormula(F, mv(1)), SignedFormula(T, mv(1))), CLOSE)


def cut_statement() -> Statement:
    return Statement(
        "cut", "cut", (), ((SignedFormula(F, mv(1)),), (SignedFormula(T, mv(1)),)), sign=None
    )


# ---------------------------------------------------------------------------
# two-level minimization (Quine-McCluskey with Petrick's method)

def _qm_primes(nvars: int, minterms) -> list:
    groups: dict = {}
    for m in minterms:
        cube = tuple((m >> (nvars - 1 - i)) & 1 for i in range(nvars))
        groups.setdefault(sum(cube), set()).add(cube)
    primes = set()
    while groups:
        nxt: dict = {}
        merged = set()
        for k in sorted(groups):
            for a in groups[k]:
                for b in groups.get(k + 1, ()):
                    diff = [i for i in range(nvars) if a[i] != b[i]]
                    if len(diff) == 1 and a[diff[0]] != 2 and b[diff[0]] != 2:
                        c = tuple(2 if i == diff[0] else a[i] for i in range(nvars))
                        nxt.setdefault(sum(1 for x in c if x == 1), set()).add(c)
                        merged.add(a)
                        merged.add(b)
        for k in groups:
            primes.update(groups[k] - merged)
        groups = nxt
    return sorted(primes)


def _covers(cube, m, nvars) -> bool:
    for i in range(nvars):
        bit = (m >> (nvars - 1 - i)) & 1
        if cube[i] != 2 and cube[i] != bit:
            return False
    return True


def qm_minimize(nvars: int, on, dc) -> list:
    """Exact minimum sum-of-products cover of `on` within `on | dc`.

    Cubes are tuples over {0, 1, 2}, 2 meaning "free".  Deterministic: the
    cover with fewest products, then fewest literals, then lexicographically
    least, wins.
    """
    on = sorted(set(on))
    if not on:
        return []
    primes = _qm_primes(nvars, sorted(set(on) | set(dc)))
    chart = {m: frozenset(i for i, p in enumerate(primes) if _covers(p, m, nvars)) for m in on}
    # Petrick: products of prime-index sets with absorption
    products = [frozenset()]
    for m in on:
        nxt = []
        for prod in products:
            if prod & chart[m]:
                nxt.append(prod)
            else:
                nxt.extend(prod | {i} for i in sorted(chart[m]))
        # absorb supersets
        nxt.sort(key=len)
        kept: list = []
        for cand in nxt:
            if not any(k <= cand for k in kept):
                kept.append(cand)
        products = kept
        if not products:
            raise SpecError("minimization chart has an uncoverable row")

    def literals(prod):
        return sum(sum(1 for x in primes[i] if x != 2) for i in prod)

    best = min(
        products,
        key=lambda prod: (len(prod), literals(prod), tuple(sorted(primes[i] for i in prod))),
    )
    return sorted(primes[i] for i in best)


def streamline_behavior(ctx: RuleContext, stmt: Statement) -> Statement:
    """Minimize a behavior statement's DNF, treating argument prints that
    extend a minimal unobtainable print as don't-cares.  The result only uses
    signed formulas whose polarity occurs on the original right side."""
    if stmt.rhs in (CLOSE, NOOP):
        return stmt
    c = ctx.matrix.by_name[stmt.conn]  # type: ignore[attr-defined]
    k, w = c.arity, ctx.width
    nvars = k * w
    tuples = ctx.arg_tuples(stmt.sign, stmt.sep_index, stmt.conn)

    def minterm(xs) -> int:
        m = 0
        for x in xs:
            for cell in ctx.print_of[x]:
                m = (m << 1) | (1 if cell == T else 0)
        return m

    on = {minterm(xs) for xs in tuples}
    dc = set()
    for m in range(1 << nvars):
        if m in on:
            continue
        bits = format(m, f"0{nvars}b")
        prints = [bits[i * w : (i + 1) * w].replace("0", F).replace("1", T) for i in range(k)]
        if any(p not in ctx.obtainable for p in prints):
            dc.add(m)

    cubes = qm_minimize(nvars, on, dc)
    args = tuple(mv(i + 1) for i in range(k))
    occurring = {sf for disjunct in stmt.rhs for sf in disjunct}
    rhs = []
    for cube in cubes:
        conj = []
        for i in range(k):
            for t in range(w):
                cell = cube[i * w + t]
                if cell == 2:
                    continue
                sf = SignedFormula(T if cell == 1 else F, ctx.apply_sep(t, args[i]))
                if sf not in occurring:
                    raise SpecError(
                        f"minimized {stmt.tag} needs {sf}, absent from the original right side"
                    )
                conj.append(sf)
        rhs.append(tuple(conj))
    if not rhs:
        return stmt
    return Statement(
        stmt.kind, stmt.tag, stmt.lhs, tuple(rhs), sign=stmt.sign,
        sep_index=stmt.sep_index, conn=stmt.conn,
    )


# ---------------------------------------------------------------------------
# linear statements (cut-based system)

def vec_extends(pv: tuple, vector: tuple) -> bool:
    return all(extends(p, v) for p, v in zip(pv, vector))


def entailed_vector(ctx: RuleContext, tuples, vector: tuple) -> tuple:
    """Largest print vector forced by the head under the partial information in
    `vector`: cells already known or varying stay undefined; invariant cells
    get their common value."""
    sat = [xs for xs in tuples if vec_extends(ctx.print_vector(xs), vector)]
    if not sat:
        raise UnsatisfiedVectorError(f"no tuple in the set matches {vector}")
    k = len(vector)
    out = []
    for i in range(k):
        cells = []
        for t in range(ctx.width):
            if vector[i][t] != UNDEF:
                cells.append(UNDEF)
                continue
            seen = {ctx.print_of[xs[i]][t] for xs in sat}
            cells.append(seen.pop() if len(seen) == 1 else UNDEF)
        out.append("".join(cells))
    return tuple(out)


def _all_partial_prints(width: int):
    return ["".join(p) for p in product((F, T, UNDEF), repeat=width)]


def linear_statements(
    ctx: RuleContext, sign: str, r: int, conn_name: str, cap: int = DEFAULT_VECTOR_CAP
):
    """The full family of linear statements for one signed head: one statement
    per vector of partial argument prints."""
    c = ctx.matrix.by_name[conn_name]  # type: ignore[attr-defined]
    k, w = c.arity, ctx.width
    total = 3 ** (w * k)
    if total > cap:
        raise ResourceCapError(
            f"{total} print vectors for {conn_name}/{r} exceed the cap of {cap}"
        )
    args = tuple(mv(i + 1) for i in range(k))
    head = SignedFormula(sign, ctx.apply_sep(r, App(conn_name, args)))
    tuples = ctx.arg_tuples(sign, r, conn_name)
    cells = _all_partial_prints(w)
    out = []
    for vector in product(cells, repeat=k):
        lhs = (head,) + _v_conjuncts(ctx, args, vector)
        tag = f"linear:{sign}:{r}:{conn_name}:{','.join(vector) or '-'}"
        try:
            m = entailed_vector(ctx, tuples, vector)
        except UnsatisfiedVectorError:
            out.append(
                Statement("linear", tag, lhs, CLOSE, sign=sign, sep_index=r,
                          conn=conn_name, vector=vector)
            )
            continue
        if all(cell == UNDEF for pr in m for cell in pr):
            rhs: object = NOOP
        else:
            rhs = (_v_conjuncts(ctx, args, m),)
        out.append(
            Statement("linear", tag, lhs, rhs, sign=sign, sep_index=r,
                      conn=conn_name, vector=vector)
        )
    return out


def _generalizations(vector: tuple):
    """Proper generalizations of a print vector: every way of forgetting a
    nonempty subset of its defined cells."""
    slots = [(i, t) for i, pr in enumerate(vector) for t, c in enumerate(pr) if c != UNDEF]
    for mask in range(1, 1 << len(slots)):
        rows = [list(pr) for pr in vector]
        for b, (i, t) in enumerate(slots):
            if mask & (1 << b):
                rows[i][t] = UNDEF
        yield tuple("".join(r) for r in rows)


def _vec_incompatible(a: tuple, b: tuple) -> bool:
    return any(
        ca != UNDEF and cb != UNDEF and ca != cb
        for pa, pb in zip(a, b)
        for ca, cb in zip(pa, pb)
    )


def streamline_linear(ctx: RuleContext, family) -> list:
    """Drop redundant members of one (sign, separator, connective) family.

    A satisfied statement is redundant when a strictly less defined vector
    already entails at least as much; an unsatisfied one is redundant when a
    less defined vector entails information contradicting it, or is itself
    unsatisfied (the weaker closure covers the stronger one).  No-op
    statements are dropped.  Witnesses are drawn from the full family, which
    is equivalent to iterating the elimination to a fixpoint.
    """
    if not family:
        return []
    sign, r, conn = family[0].sign, family[0].sep_index, family[0].conn
    tuples = ctx.arg_tuples(sign, r, conn)
    m_of: dict = {}
    for st in family:
        try:
            m_of[st.vector] = entailed_vector(ctx, tuples, st.vector)
        except UnsatisfiedVectorError:
            m_of[st.vector] = None
    survivors = []
    for st in family:
        if st.rhs == NOOP:
            continue
        redundant = False
        mz = m_of[st.vector]
        for y in _generalizations(st.vector):
            if y not in m_of:
                continue
            my = m_of[y]
            if mz is not None:
                if my is not None and all(extends(a, b) for a, b in zip(my, mz)):
                    redundant = True
                    break
            else:
                if my is None or _vec_incompatible(st.vector, my):
                    redundant = True
                    break
        if not redundant:
            survivors.append(st)
    return survivors


# ---------------------------------------------------------------------------
# compiled rules

@dataclass(frozen=True)
class Rule:
    tag: str
    kind: str
    premises: tuple[SignedFormula, ...]
    branches: object  # tuple of tuples, or "close"
    sign: str | None = None
    sep_index: int | None = None
    conn: str | None = None
    vector: tuple | None = None

    @property
    def is_closure(self) -> bool:
        return self.branches == CLOSE


BRANCHING = "branching"
CUT_BASED = "cut-based"


@dataclass
class RuleSet:
    system: str
    rules: tuple[Rule, ...]
    ctx: RuleContext
    streamlined: bool

    def __post_init__(self):
        self.closure_rules = tuple(r for r in self.rules if r.is_closure)
        self.expansion_rules = tuple(
            r for r in self.rules if not r.is_closure and r.kind != "cut"
        )
        self.cut_rule = next((r for r in self.rules if r.kind == "cut"), None)
        head_map: dict = {}
        for r in self.rules:
            if r.kind in ("behavior", "linear") and r.conn is not None:
                head_map.setdefault((r.sign, r.sep_index, r.conn), []).append(r)
        self.head_map = {k: tuple(v) for k, v in head_map.items()}

    def head_rules(self, sign: str, r: int, conn: str):
        return self.head_map.get((sign, r, conn), ())

    # -- export -------------------------------------------------------------
    def to_json(self) -> dict:
        def sf(s: SignedFormula) -> str:
            return f"{s.sign}:{s.formula}"

        rules = []
        for r in self.rules:
            entry = {"tag": r.tag, "premises": [sf(p) for p in r.premises]}
            if r.branches == CLOSE:
                entry["branches"] = "close"
            else:
                entry["branches"] = [[sf(c) for c in br] for br in r.branches]
            rules.append(entry)
        return {"system": self.system, "streamlined": self.streamlined, "rules": rules}

    def to_text(self) -> str:
        lines = [f"system: {self.system} ({'streamlined' if self.streamlined else 'raw'})"]
        lines.append(f"rules: {len(self.rules)}")
        for r in self.rules:
            prem = "  &  ".join(str(p) for p in r.premises) or "(none)"
            if r.branches == CLOSE:
                concl = "*"
            else:
                concl = "  |  ".join(
                    " & ".join(str(c) for c in br) for br in r.branches
                )
            lines.append(f"  [{r.tag}]  {prem}  ==>  {concl}")
        return "\n".join(lines) + "\n"


_KIND_PRECEDENCE = {"absurd": 0, "cut": 1, "unobtainable": 2, "ground": 3,
                    "behavior": 4, "linear": 5}


def _compile(statements, system: str, ctx: RuleContext, streamlined: bool) -> RuleSet:
    # dedupe coinciding statements (e.g. a behavior closure on a ground head
    # repeating a ground closure), preferring the more fundamental kind
    seen = {}
    for st in sorted(statements, key=lambda s: (_KIND_PRECEDENCE[s.kind], s.tag)):
        if st.rhs == NOOP:
            continue
        key = (st.lhs, st.rhs if st.rhs == CLOSE else tuple(st.rhs))
        seen.setdefault(key, st)
    rules = [
        Rule(st.tag, st.kind, st.lhs, st.rhs, sign=st.sign,
             sep_index=st.sep_index, conn=st.conn, vector=st.vector)
        for st in sorted(seen.values(), key=lambda s: s.tag)
    ]
    return RuleSet(system, tuple(rules), ctx, streamlined)


def _behavior_statements(ctx: RuleContext, streamline: bool):
    out = []
    for conn in ctx.matrix.connectives:
        for r in range(ctx.width):
            for sign in (F, T):
                st = behavior_statement(ctx, sign, r, conn.name)
                if streamline and st.rhs not in (CLOSE, NOOP):
                    st = streamline_behavior(ctx, st)
                out.append(st)
    return out


def build_branching_system(
    matrix: Matrix, seq: SeparatingSequence, streamline: bool = True,
    ctx: RuleContext | None = None,
) -> RuleSet:
    """The standard system: absurdity and unobtainable-print closures, ground
    closures, and one (possibly branching) behavior rule per signed head."""
    ctx = ctx or RuleContext(matrix, seq)
    stmts = [absurd_statement()]
    stmts += unobtainable_statements(ctx)
    stmts += ground_statements(ctx)
    stmts += _behavior_statements(ctx, streamline)
    return _compile(stmts, BRANCHING, ctx, streamline)


def build_cutbased_system(
    matrix: Matrix, seq: SeparatingSequence, streamline: bool = True,
    vector_cap: int = DEFAULT_VECTOR_CAP, ctx: RuleContext | None = None,
) -> RuleSet:
    """The cut-based system: the only branching rule is the (analytic) cut;
    connective behavior is carried by linear statements."""
    ctx = ctx or RuleContext(matrix, seq)
    stmts = [absurd_statement(), cut_statement()]
    stmts += unobtainable_statements(ctx)
    stmts += ground_statements(ctx)
    for conn in ctx.matrix.connectives:
        for r in range(ctx.width):
            for sign in (F, T):
                family = linear_statements(ctx, sign, r, conn.name, cap=vector_cap)
                if streamline:
                    stmts += streamline_linear(ctx, family)
                else:
                    stmts += [st for st in family if st.rhs != NOOP]
    return _compile(stmts, CUT_BASED, ctx, streamline)


# ---------------------------------------------------------------------------
# evaluating formulas through the statements alone

def eval_via_statements(matrix: Matrix, seq: SeparatingSequence, f: Formula, basic_prints):
    """Compute the bivalent value of f from total prints assigned to its atoms,
    using only the statement machinery (no direct truth-table evaluation of f).
    """
    ctx = RuleContext(matrix, seq)
    for name, p in basic_prints.items():
        if p not in ctx.obtainable:
            raise SpecError(f"print {p!r} for atom {name!r} is unobtainable")

    def bival(g: Formula) -> str:
        for r, core in ctx.strip_all(g):
            if isinstance(core, Atom):
                try:
                    return basic_prints[core.name][r]
                except KeyError:
                    raise SpecError(f"no print supplied for atom {core.name!r}") from None
        if g in ctx.intersections:
            (r1, c1), _ = ctx.intersections[g]
            # the ground statement records the one satisfiable sign
            return T if evaluate(matrix, g, {}) in matrix.designated else F
        for r, core in ctx.strip_all(g):
            if isinstance(core, App) and not core.args:
                # a constant head: exactly one of the two behavior statements
                # is satisfiable
                return T if ctx.arg_tuples(T, r, core.head) else F
        r, conn, args = ctx.proper_decomposition(g)
        values = []
        for a in args:
            pr = "".join(bival(ctx.apply_sep(t, a)) for t in range(ctx.width))
            if pr not in ctx.value_of_print:
                raise SpecError(f"computed print {pr!r} for {a} is unobtainable")
            values.append(ctx.value_of_print[pr])
        return T if tuple(values) in set(ctx.arg_tuples(T, r, conn)) else F

    return bival(f)
