"""Finite Kripke models: validation, evidence closure, truth and random generation."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import sexpdata

from .syntax import (
    Agent,
    And,
    Bang,
    Bot,
    Eq,
    Forall,
    Formula,
    Imp,
    Just,
    K,
    Pred,
    SymbolTable,
    Term,
    Trust,
    Var,
    App,
    format_formula,
    format_term,
    free_vars_formula,
    parse_formula,
    parse_term,
    subst_quant_many,
    term_size,
)

State = Hashable
Elem = Hashable


class UnknownTerm(ValueError):
    def __init__(self, message: str, term: Term | None = None):
        super().__init__(message)
        self.term = term


class UnknownAgent(ValueError):
    pass


class UnknownState(ValueError):
    pass


class DepthExhausted(RuntimeError):
    """Evidence membership needed more term nesting than the depth bound allows."""


# ---------------------------------------------------------------------------
# Models


@dataclass
class FiniteModel:
    """A finite model with a rigid term table and seeded evidence.

    agent_rel maps each Agent to a set of (w, v) pairs; eq and pred are per
    state; evidence maps state -> term -> set of seeded formulas.  Predicates
    missing at a state are empty there.
    """

    states: tuple
    agent_rel: dict
    gamma_rel: frozenset
    domain: tuple
    term_table: dict
    eq: dict
    pred: dict
    evidence: dict
    symtab: SymbolTable | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def successors(self, rel, w) -> list:
        return [v for v in self.states if (w, v) in rel]

    def agent_successors(self, a: Agent, w) -> list:
        rel = self.agent_rel.get(a)
        if rel is None:
            raise UnknownAgent(f"agent a{a.index} has no accessibility relation in the model")
        key = ("R", a, w)
        out = self._cache.get(key)
        if out is None:
            out = self._cache[key] = self.successors(rel, w)
        return out

    def gamma_successors(self, w) -> list:
        key = ("G", w)
        out = self._cache.get(key)
        if out is None:
            out = self._cache[key] = self.successors(self.gamma_rel, w)
        return out

    def gamma_predecessors(self, w) -> list:
        return [v for v in self.states if (v, w) in self.gamma_rel]

    def interp(self, w) -> dict:
        """I_w restricted to terms: the rigid term table."""
        return self.term_table

    def pred_at(self, w, symbol: str) -> frozenset:
        return self.pred.get(w, {}).get(symbol, frozenset())

    def evidence_at(self, w) -> "StateEvidence":
        key = ("E", w)
        ev = self._cache.get(key)
        if ev is None:
            ev = self._cache[key] = StateEvidence(self, w)
        return ev

    def check_state(self, w) -> None:
        if w not in self.states:
            raise UnknownState(f"unknown state {w!r}")


def close_equivalence(pairs: Iterable, universe: Iterable) -> frozenset:
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    universe = list(universe)
    for x in universe:
        find(x)
    for a, b in pairs:
        parent[find(a)] = find(b)
    groups: dict = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)
    return frozenset((a, b) for g in groups.values() for a in g for b in g)


def close_reflexive_transitive(pairs: Iterable, universe: Iterable) -> frozenset:
    universe = list(universe)
    succ = {x: {x} for x in universe}
    for a, b in pairs:
        succ.setdefault(a, {a}).add(b)
        succ.setdefault(b, {b})
    changed = True
    while changed:
        changed = False
        for a in succ:
            new = set().union(*(succ[b] for b in succ[a]))
            if not new <= succ[a]:
                succ[a] |= new
                changed = True
    return frozenset((a, b) for a in succ for b in succ[a])


def close_uniform(tuples: Iterable[tuple], eq: frozenset) -> frozenset:
    """Close a relation under uniform replacement of eq-related elements."""
    out = set(tuples)
    partners: dict = {}
    for a, b in eq:
        partners.setdefault(a, set()).add(b)
    todo = list(out)
    while todo:
        tup = todo.pop()
        for e in set(tup):
            for d in partners.get(e, ()):
                new = tuple(d if x == e else x for x in tup)
                if new not in out:
                    out.add(new)
                    todo.append(new)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


def validate_model(m: FiniteModel) -> list[Violation]:
    """Every violated frame or model condition; empty means m is a model."""
    out: list[Violation] = []

    def bad(code, msg):
        out.append(Violation(code, msg))

    states = set(m.states)
    dom = set(m.domain)
    if not states:
        bad("no-states", "W is empty")
    if not dom:
        bad("no-domain", "U is empty")

    def check_pairs(rel, name):
        for w, v in sorted(rel, key=repr):
            if w not in states or v not in states:
                bad("unknown-state", f"{name} mentions unknown state in ({w}, {v})")

    for a, rel in sorted(m.agent_rel.items(), key=lambda kv: kv[0].index):
        name = f"R_{_agent_label(m, a)}"
        check_pairs(rel, name)
        for w in m.states:
            if (w, w) not in rel:
                bad("agent-reflexive", f"{name} not reflexive at {w}")
        for w in m.states:
            succ = [v for v in m.states if (w, v) in rel]
            for u in succ:
                for v in succ:
                    if (u, v) not in rel:
                        bad("agent-euclidean", f"{name} not Euclidean: {w}->{u}, {w}->{v} but not {u}->{v}")
    check_pairs(m.gamma_rel, "R_gamma")
    for w in m.states:
        if (w, w) not in m.gamma_rel:
            bad("gamma-reflexive", f"R_gamma not reflexive at {w}")
    for (w, v) in sorted(m.gamma_rel, key=repr):
        for (v2, u) in sorted(m.gamma_rel, key=repr):
            if v == v2 and (w, u) not in m.gamma_rel:
                bad("gamma-transitive", f"R_gamma not transitive: {w}->{v}->{u} but not {w}->{u}")

    for t, e in m.term_table.items():
        if e not in dom:
            bad("table-range", f"term {_term_label(m, t)} denotes {e}, outside U")
    denoted = set(m.term_table.values())
    for e in m.domain:
        if e not in denoted:
            bad("domain-undenoted", f"element {e} is not the value of any table term")

    for w in m.states:
        rel = m.eq.get(w, frozenset())
        for a, b in sorted(rel, key=repr):
            if a not in dom or b not in dom:
                bad("eq-range", f"eq at {w} relates {a}, {b} outside U")
        for e in m.domain:
            if (e, e) not in rel:
                bad("eq-reflexive", f"eq at {w} not reflexive at {e}")
        for a, b in sorted(rel, key=repr):
            if (b, a) not in rel:
                bad("eq-symmetric", f"eq at {w} has ({a}, {b}) but not ({b}, {a})")
        for a, b in sorted(rel, key=repr):
            for b2, c in sorted(rel, key=repr):
                if b == b2 and (a, c) not in rel:
                    bad("eq-transitive", f"eq at {w} has ({a}, {b}), ({b}, {c}) but not ({a}, {c})")
    for w in m.pred:
        if w not in states:
            bad("unknown-state", f"predicate interpretation at unknown state {w}")
    arities: dict = dict(m.symtab.predicates) if m.symtab else {}
    for w in m.states:
        rel = m.eq.get(w, frozenset())
        for p, tuples in sorted(m.pred.get(w, {}).items()):
            for tup in sorted(tuples, key=repr):
                n = arities.setdefault(p, len(tup))
                if len(tup) != n:
                    bad("pred-arity", f"{p} at {w} has tuple {tup} of arity {len(tup)}, expected {n}")
                if any(e not in dom for e in tup):
                    bad("pred-range", f"{p} at {w} has tuple {tup} outside U")
            closed = close_uniform(tuples, rel)
            for tup in sorted(closed - tuples, key=repr):
                bad("pred-uniform", f"{p} at {w} not closed under uniform replacement: missing {tup}")

    for w in m.evidence:
        if w not in states:
            bad("unknown-state", f"evidence at unknown state {w}")
    for (w, v) in sorted(m.gamma_rel, key=repr):
        if w == v:
            continue
        ew, ev = m.evidence.get(w, {}), m.evidence.get(v, {})
        for j, seeds in ew.items():
            missing = set(seeds) - set(ev.get(j, ()))
            for a in sorted(missing, key=repr):
                bad(
                    "evidence-monotone",
                    f"seed {_formula_label(m, a)} for {_term_label(m, j)} at {w} missing at gamma-successor {v}",
                )
    return out


def _agent_label(m, a):
    return m.symtab.agent_name(a) if m.symtab else f"a{a.index}"


def _term_label(m, t):
    return format_term(t, m.symtab)


def _formula_label(m, a):
    return format_formula(a, m.symtab)


# ---------------------------------------------------------------------------
# Evidence


def _positions(a: Formula, bound: frozenset = frozenset()):
    """Rewritable term positions: outside K, Just and Trust, with the binders above them."""
    if isinstance(a, Eq):
        yield (a, 0, bound)
        yield (a, 1, bound)
    elif isinstance(a, Pred):
        for i in range(a.arity):
            yield (a, i, bound)
    elif isinstance(a, (Imp, And)):
        yield from _positions(a.left, bound)
        yield from _positions(a.right, bound)
    elif isinstance(a, Forall):
        yield from _positions(a.body, bound | {a.var})


class StateEvidence:
    """Membership in the least evidence function at one state.

    Seeds are gathered from all gamma-predecessors.  Formulas are compared
    modulo rewriting with justified identities: at each argument position
    outside K, Just and Trust a term may be replaced by any term in its
    justified-identity component, provided neither is a variable bound at
    that position.
    """

    def __init__(self, model: FiniteModel, w):
        self.model = model
        self.w = w
        seeds: dict = {}
        for v in model.gamma_predecessors(w):
            for j, fs in model.evidence.get(v, {}).items():
                seeds.setdefault(j, set()).update(fs)
        self.seeds = seeds
        self._parent: dict = {}
        self._canon_cache: dict = {}
        self._member_cache: dict = {}
        self._imps_cache: dict = {}
        self._depth_errors: set = set()
        self._saturate()

    # union-find over terms linked by justified identities
    def _find(self, t):
        p = self._parent
        while p.get(t, t) != t:
            p[t] = p.get(p[t], p[t])
            t = p[t]
        return t

    def _union(self, a, b) -> bool:
        self._parent.setdefault(a, a)
        self._parent.setdefault(b, b)
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            return False
        self._parent[ra] = rb
        self._components = None
        return True

    def component(self, t) -> list:
        if self._components is None:
            groups: dict = {}
            for x in self._parent:
                groups.setdefault(self._find(x), set()).add(x)
            self._components = {x: sorted(g, key=_term_order) for g in groups.values() for x in g}
        return self._components.get(t, [t])

    def _rep(self, t, bound):
        for r in self.component(t):
            if not (isinstance(r, Var) and r in bound):
                return r
        return t

    def canon(self, a: Formula) -> Formula:
        c = self._canon_cache.get(a)
        if c is None:
            c = self._canon_cache[a] = self._canon(a, frozenset())
        return c

    def _canon(self, a, bound):
        if isinstance(a, Eq):
            return Eq(self._rep_at(a.lhs, bound), self._rep_at(a.rhs, bound))
        if isinstance(a, Pred):
            return Pred(a.symbol, tuple(self._rep_at(t, bound) for t in a.args))
        if isinstance(a, Imp):
            return Imp(self._canon(a.left, bound), self._canon(a.right, bound))
        if isinstance(a, And):
            return And(self._canon(a.left, bound), self._canon(a.right, bound))
        if isinstance(a, Forall):
            return Forall(a.var, self._canon(a.body, bound | {a.var}))
        return a

    def _rep_at(self, t, bound):
        if isinstance(t, Var) and t in bound:
            return t
        return self._rep(t, bound)

    def _saturate(self):
        """Fixpoint for the justified identities.

        A formula is justified when some term admits it.  Seeds are
        justified; so is any k:C with C admitted by k; and so is Y whenever
        X -> Y and X are justified (apply the two terms to each other).
        """
        self._components = None
        while True:
            self._canon_cache.clear()
            self._member_cache.clear()
            self._imps_cache.clear()
            justified = set()
            for fs in self.seeds.values():
                justified.update(self.canon(a) for a in fs)
            imps = [a for a in justified if isinstance(a, Imp)]
            grown = True
            while grown:
                grown = False
                for a in list(imps):
                    if self.canon(a.right) in justified:
                        continue
                    if self._justified(a.left, justified):
                        c = self.canon(a.right)
                        justified.add(c)
                        if isinstance(c, Imp):
                            imps.append(c)
                        grown = True
            changed = False
            for a in justified:
                if isinstance(a, Eq) and self._union(a.lhs, a.rhs):
                    changed = True
            if not changed:
                self._canon_cache.clear()
                self._member_cache.clear()
                self._imps_cache.clear()
                return

    def _justified(self, x: Formula, justified: set) -> bool:
        if self.canon(x) in justified:
            return True
        if isinstance(x, Just):
            try:
                return self.member(x.evidence, x.body, depth=10_000)
            except DepthExhausted:
                return False
        return False

    def imps(self, k: Term, depth: int) -> set:
        """Implications admitted by k, in canonical form."""
        key = k
        got = self._imps_cache.get(key)
        if got is not None:
            return got
        if depth < 0:
            raise DepthExhausted(f"evidence term nesting exceeds the depth bound at {self.w}")
        out = {self.canon(a) for a in self.seeds.get(k, ()) if isinstance(a, Imp)}
        if isinstance(k, App):
            for a in self.imps(k.fn, depth - 1):
                if isinstance(a.right, Imp) and self.member(k.arg, a.left, depth - 1):
                    out.add(self.canon(a.right))
        self._imps_cache[key] = out
        return out

    def member(self, j: Term, a: Formula, depth: int = 6) -> bool:
        key = (j, a)
        got = self._member_cache.get(key)
        if got is not None:
            return got
        if depth < 0:
            raise DepthExhausted(f"evidence term nesting exceeds the depth bound at {self.w}")
        ca = self.canon(a)
        result = any(self.canon(b) == ca for b in self.seeds.get(j, ()))
        if not result and isinstance(j, Bang) and isinstance(a, Just) and a.evidence == j.inner:
            result = self.member(j.inner, a.body, depth - 1)
        if not result and isinstance(j, App):
            for imp in self.imps(j.fn, depth - 1):
                if imp.right == ca and self.member(j.arg, imp.left, depth - 1):
                    result = True
                    break
        self._member_cache[key] = result
        return result

    def identity_components(self) -> list:
        groups: dict = {}
        for x in self._parent:
            groups.setdefault(self._find(x), set()).add(x)
        return [sorted(g, key=_term_order) for g in groups.values() if len(g) > 1]


def _term_order(t):
    return (term_size(t), repr(t))


def e_member(m: FiniteModel, w, j: Term, a: Formula, depth: int = 6) -> bool:
    """Is a in E_w(j)?  Raises DepthExhausted when j nests deeper than depth."""
    m.check_state(w)
    if term_size(j) > 0 and _term_depth(j) > depth:
        raise DepthExhausted(f"evidence term nesting {_term_depth(j)} exceeds depth bound {depth}")
    return m.evidence_at(w).member(j, a, depth)


def _term_depth(t: Term) -> int:
    if isinstance(t, App):
        return 1 + max(_term_depth(t.fn), _term_depth(t.arg))
    if isinstance(t, Bang):
        return 1 + _term_depth(t.inner)
    return 0


# ---------------------------------------------------------------------------
# Truth


def _value(f: Mapping, t: Term):
    try:
        return f[t]
    except KeyError:
        raise UnknownTerm(f"term {t!r} is not in the model's term table", t) from None


def eval_formula(m: FiniteModel, w, f: Mapping | None, a: Formula, depth: int = 6) -> bool:
    """Truth of a at w under the term assignment f (None means I_w).

    The predicate and identity parts of an assignment are always those of the
    state being visited, which is what I_w and the f_{w->v} combination give.
    """
    m.check_state(w)
    if f is None:
        f = m.term_table
    try:
        return _eval(m, w, f, a, depth)
    except UnknownTerm as e:
        if e.term is None:
            raise
        raise UnknownTerm(f"term {format_term(e.term, m.symtab)} is not in the model's term table", e.term) from None


def _eval(m, w, f, a, depth):
    if isinstance(a, Bot):
        return False
    if isinstance(a, Eq):
        return (_value(f, a.lhs), _value(f, a.rhs)) in m.eq.get(w, ())
    if isinstance(a, Pred):
        return tuple(_value(f, t) for t in a.args) in m.pred_at(w, a.symbol)
    if isinstance(a, Imp):
        return (not _eval(m, w, f, a.left, depth)) or _eval(m, w, f, a.right, depth)
    if isinstance(a, And):
        return _eval(m, w, f, a.left, depth) and _eval(m, w, f, a.right, depth)
    if isinstance(a, Forall):
        for e in m.domain:
            g = dict(f)
            g[a.var] = e
            if not _eval(m, w, g, a.body, depth):
                return False
        return True
    if isinstance(a, K):
        return all(_eval(m, v, f, a.body, depth) for v in m.agent_successors(a.agent, w))
    if isinstance(a, Just):
        return _eval_just(m, w, f, a.evidence, a.body, depth)
    if isinstance(a, Trust):
        # exists j in the table with K_a (j : body); the factive part does not depend on j
        succ = m.agent_successors(a.agent, w)
        for v in succ:
            if not all(_eval(m, u, f, a.body, depth) for u in m.gamma_successors(v)):
                return False
        return any(all(_admits(m, v, f, j, a.body, depth) for v in succ) for j in m.term_table)
    raise TypeError(f"not a formula: {a!r}")


def _eval_just(m, w, f, j, body, depth):
    if not all(_eval(m, v, f, body, depth) for v in m.gamma_successors(w)):
        return False
    return _admits(m, w, f, j, body, depth)


def _admits(m, w, f, j, body, depth):
    """Some co-denoting instance of body's free variables is admitted by j at w."""
    if _term_depth(j) > depth:
        raise DepthExhausted(f"evidence term nesting {_term_depth(j)} exceeds depth bound {depth}")
    ev = m.evidence_at(w)
    xs = sorted(free_vars_formula(body), key=lambda v: v.index)
    choices = []
    for x in xs:
        fx = _value(f, x)
        choices.append([t for t in f if f[t] == fx])
    for combo in itertools.product(*choices):
        mapping = {x: t for x, t in zip(xs, combo) if t != x}
        if ev.member(j, subst_quant_many(body, mapping), depth):
            return True
    return False


def consequence(m: FiniteModel, hyps: Iterable[Formula], a: Formula, depth: int = 6) -> bool:
    hyps = list(hyps)
    for w in m.states:
        if all(eval_formula(m, w, None, h, depth) for h in hyps) and not eval_formula(m, w, None, a, depth):
            return False
    return True


def valid_in(m: FiniteModel, a: Formula, depth: int = 6) -> bool:
    return consequence(m, (), a, depth)


def countermodel_states(m: FiniteModel, hyps: Iterable[Formula], a: Formula, depth: int = 6) -> list:
    hyps = list(hyps)
    return [
        w
        for w in m.states
        if all(eval_formula(m, w, None, h, depth) for h in hyps) and not eval_formula(m, w, None, a, depth)
    ]


# ---------------------------------------------------------------------------
# Construction helpers


def make_model(
    states: Sequence,
    agent_rel: Mapping,
    gamma_rel: Iterable,
    domain: Sequence,
    term_table: Mapping,
    eq: Mapping | None = None,
    pred: Mapping | None = None,
    evidence: Mapping | None = None,
    symtab: SymbolTable | None = None,
    close: bool = True,
) -> FiniteModel:
    """Build a model; with close=True the relations are closed to satisfy the frame conditions."""
    states = tuple(states)
    domain = tuple(domain)
    eq = dict(eq or {})
    pred = {w: dict(ps) for w, ps in (pred or {}).items()}
    evidence = {w: {j: frozenset(fs) for j, fs in ev.items()} for w, ev in (evidence or {}).items()}
    if close:
        agent_rel = {a: close_equivalence(rel, states) for a, rel in agent_rel.items()}
        gamma_rel = close_reflexive_transitive(gamma_rel, states)
        eq = {w: close_equivalence(eq.get(w, ()), domain) for w in states}
        pred = {w: {p: close_uniform(ts, eq[w]) for p, ts in pred.get(w, {}).items()} for w in states}
        evidence = propagate_evidence(evidence, gamma_rel)
    else:
        agent_rel = {a: frozenset(rel) for a, rel in agent_rel.items()}
        gamma_rel = frozenset(gamma_rel)
        eq = {w: frozenset(r) for w, r in eq.items()}
        pred = {w: {p: frozenset(ts) for p, ts in ps.items()} for w, ps in pred.items()}
    return FiniteModel(states, agent_rel, frozenset(gamma_rel), domain, dict(term_table), eq, pred, evidence, symtab)


def propagate_evidence(evidence: Mapping, gamma_rel: Iterable) -> dict:
    out = {w: {j: set(fs) for j, fs in ev.items()} for w, ev in evidence.items()}
    for w, v in gamma_rel:
        for j, fs in evidence.get(w, {}).items():
            out.setdefault(v, {}).setdefault(j, set()).update(fs)
    return {w: {j: frozenset(fs) for j, fs in ev.items()} for w, ev in out.items()}


def build_hyper_counterexample(symtab: SymbolTable | None = None) -> FiniteModel:
    """Two states; P(x) and Q(y) hold everywhere; j admits exactly P(x) & Q(y)."""
    st = symtab or SymbolTable()
    x, y, j = st.var("x"), st.var("y"), st.var("j")
    st.register_pred("P", 1)
    st.register_pred("Q", 1)
    states = ("w", "v")
    a = st.agent("a")
    body = And(Pred("P", (x,)), Pred("Q", (y,)))
    return make_model(
        states,
        {a: {("w", "v")}},
        {("w", "v")},
        ("d0",),
        {x: "d0", y: "d0", j: "d0"},
        pred={s: {"P": {("d0",)}, "Q": {("d0",)}} for s in states},
        evidence={s: {j: {body}} for s in states},
        symtab=st,
    )


def build_intensional_counterexample(symtab: SymbolTable | None = None) -> FiniteModel:
    """t = s at w but not at its a-successor v, where P(t) holds and P(s) fails."""
    st = symtab or SymbolTable()
    t, s = st.var("t"), st.var("s")
    st.register_pred("P", 1)
    a = st.agent("a")
    return make_model(
        ("w", "v"),
        {a: {("w", "v")}},
        (),
        ("d0", "d1"),
        {t: "d0", s: "d1"},
        eq={"w": {("d0", "d1")}},
        pred={"w": {"P": {("d0",)}}, "v": {"P": {("d0",)}}},
        symtab=st,
    )


# ---------------------------------------------------------------------------
# Random models


@dataclass
class RandomModelParams:
    terms: Sequence[Term]
    agents: Sequence[Agent]
    predicates: Mapping[str, int]
    evidence_terms: Sequence[Term] = ()
    evidence_pool: Sequence[Formula] = ()
    min_states: int = 1
    max_states: int = 3
    max_domain: int = 3
    edge_prob: float = 0.4
    gamma_prob: float = 0.3
    eq_prob: float = 0.2
    pred_prob: float = 0.5
    seed_prob: float = 0.3


def random_model(params: RandomModelParams, seed: int, symtab: SymbolTable | None = None) -> FiniteModel:
    """A random model, repaired by closure so that it validates; deterministic per seed."""
    rng = random.Random(seed)
    n = rng.randint(params.min_states, params.max_states)
    states = tuple(f"w{i}" for i in range(n))
    terms = list(dict.fromkeys(params.terms))
    size = max(1, min(rng.randint(1, params.max_domain), len(terms)))
    domain = tuple(f"d{i}" for i in range(size))
    order = terms[:]
    rng.shuffle(order)
    table = {}
    for i, t in enumerate(order):
        table[t] = domain[i] if i < size else rng.choice(domain)
    table = {t: table[t] for t in terms}

    def rand_pairs(universe, p):
        return [(a, b) for a in universe for b in universe if a != b and rng.random() < p]

    agent_rel = {a: rand_pairs(states, params.edge_prob) for a in params.agents}
    gamma = rand_pairs(states, params.gamma_prob)
    eq = {w: rand_pairs(domain, params.eq_prob) for w in states}
    pred = {}
    for w in states:
        pred[w] = {}
        for p, ar in sorted(params.predicates.items()):
            tuples = [tup for tup in itertools.product(domain, repeat=ar) if rng.random() < params.pred_prob]
            pred[w][p] = tuples
    evidence = {}
    for w in states:
        evidence[w] = {}
        for j in params.evidence_terms:
            fs = [a for a in params.evidence_pool if rng.random() < params.seed_prob]
            if fs:
                evidence[w][j] = fs
    return make_model(states, agent_rel, gamma, domain, table, eq, pred, evidence, symtab)


# ---------------------------------------------------------------------------
# Model files


class ModelFormatError(ValueError):
    pass


def _atom(x) -> str:
    if isinstance(x, sexpdata.Symbol):
        return x.value()
    if isinstance(x, (int, str)):
        return str(x)
    raise ModelFormatError(f"expected an atom, found {sexpdata.dumps(x)}")


def _term_of(x, st) -> Term:
    return parse_term(_atom(x), st)


def load_model(text: str, symtab: SymbolTable) -> FiniteModel:
    """Parse the s-expression model format; relations are taken as written (no closure)."""
    try:
        forms = sexpdata.parse(text)
    except Exception as e:  # sexpdata raises several exception types
        raise ModelFormatError(f"malformed s-expression: {e}") from None
    if len(forms) != 1 or not isinstance(forms[0], list) or not forms[0] or _atom(forms[0][0]) != "model":
        raise ModelFormatError("expected a single (model ...) form")
    states, domain = [], []
    agent_rel: dict = {}
    gamma: set = set()
    table: dict = {}
    eq: dict = {}
    pred: dict = {}
    evidence: dict = {}
    for clause in forms[0][1:]:
        if not isinstance(clause, list) or not clause:
            raise ModelFormatError("model clauses must be non-empty lists")
        head = _atom(clause[0])
        args = clause[1:]
        try:
            if head == "states":
                states.extend(_atom(s) for s in args)
            elif head == "domain":
                domain.extend(_atom(e) for e in args)
            elif head == "agent-rel":
                a = symtab.agent(_atom(args[0]))
                rel = agent_rel.setdefault(a, set())
                rel.update(_pair(p) for p in args[1:])
            elif head == "gamma-rel":
                gamma.update(_pair(p) for p in args)
            elif head == "term-table":
                for entry in args:
                    if not isinstance(entry, list) or len(entry) != 2:
                        raise ModelFormatError("term-table entries are (term value)")
                    table[_term_of(entry[0], symtab)] = _atom(entry[1])
            elif head == "eq":
                w = _atom(args[0])
                eq.setdefault(w, set()).update(_pair(p) for p in args[1:])
            elif head == "pred":
                w, p = _atom(args[0]), _atom(args[1])
                tuples = pred.setdefault(w, {}).setdefault(p, set())
                for tup in args[2:]:
                    if not isinstance(tup, list):
                        raise ModelFormatError("predicate tuples are lists")
                    tup = tuple(_atom(e) for e in tup)
                    symtab.register_pred(p, len(tup))
                    tuples.add(tup)
            elif head == "evidence":
                w = _atom(args[0])
                ev = evidence.setdefault(w, {})
                for entry in args[1:]:
                    if not isinstance(entry, list) or not entry:
                        raise ModelFormatError("evidence entries are (term formula ...)")
                    j = _term_of(entry[0], symtab)
                    ev.setdefault(j, set()).update(parse_formula(_atom(x), symtab) for x in entry[1:])
            else:
                raise ModelFormatError(f"unknown model clause {head!r}")
        except IndexError:
            raise ModelFormatError(f"clause {head!r} is missing arguments") from None
    return make_model(states, agent_rel, gamma, domain, table, eq, pred, evidence, symtab, close=False)


def _pair(p) -> tuple:
    if not isinstance(p, list) or len(p) != 2:
        raise ModelFormatError("expected a pair (x y)")
    return (_atom(p[0]), _atom(p[1]))


def dump_model(m: FiniteModel, symtab: SymbolTable) -> str:
    S = sexpdata.Symbol

    def sym(x):
        return S(str(x))

    def tstr(t):
        return format_term(t, symtab)

    lines = ["(model"]
    lines.append(" " + sexpdata.dumps([S("states")] + [sym(w) for w in m.states]))
    for a in sorted(m.agent_rel, key=lambda a: a.index):
        pairs = [[sym(x), sym(y)] for x, y in sorted(m.agent_rel[a], key=repr)]
        lines.append(" " + sexpdata.dumps([S("agent-rel"), sym(symtab.agent_name(a))] + pairs))
    lines.append(" " + sexpdata.dumps([S("gamma-rel")] + [[sym(x), sym(y)] for x, y in sorted(m.gamma_rel, key=repr)]))
    lines.append(" " + sexpdata.dumps([S("domain")] + [sym(e) for e in m.domain]))
    lines.append(" " + sexpdata.dumps([S("term-table")] + [[tstr(t), sym(e)] for t, e in m.term_table.items()]))
    for w in m.states:
        pairs = [[sym(x), sym(y)] for x, y in sorted(m.eq.get(w, ()), key=repr)]
        lines.append(" " + sexpdata.dumps([S("eq"), sym(w)] + pairs))
    for w in m.states:
        for p, tuples in sorted(m.pred.get(w, {}).items()):
            if tuples:
                rows = [[sym(e) for e in tup] for tup in sorted(tuples, key=repr)]
                lines.append(" " + sexpdata.dumps([S("pred"), sym(w), sym(p)] + rows))
    for w in m.states:
        ev = m.evidence.get(w, {})
        entries = [[tstr(j)] + sorted(format_formula(a, symtab) for a in fs) for j, fs in ev.items() if fs]
        if entries:
            lines.append(" " + sexpdata.dumps([S("evidence"), sym(w)] + entries))
    lines[-1] += ")"
    return "\n".join(lines) + "\n"
