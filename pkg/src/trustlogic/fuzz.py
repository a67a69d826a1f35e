"""Random generation and model-based checks: soundness fuzzing and the x-variant property."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import CorpusEntry
from .proof import Derivation, Sequent
from .semantics import (
    DepthExhausted,
    FiniteModel,
    RandomModelParams,
    eval_formula,
    random_model,
)
from .syntax import (
    BOT,
    Agent,
    And,
    App,
    Bang,
    Eq,
    Forall,
    Formula,
    Imp,
    Just,
    K,
    Lam,
    Pred,
    Term,
    Trust,
    Var,
    agents_of,
    all_terms,
    free_vars_formula,
    occurs_in,
    predicates_of,
    subst_quant,
    term_size,
)


# ---------------------------------------------------------------------------
# Vocabulary of a set of formulas


@dataclass
class Vocabulary:
    terms: list
    evidence_terms: list
    agents: list
    predicates: dict
    pool: list


def _subformulas(a: Formula):
    yield a
    if isinstance(a, (Imp, And)):
        yield from _subformulas(a.left)
        yield from _subformulas(a.right)
    elif isinstance(a, (Forall, K, Just, Trust)):
        yield from _subformulas(a.body)


def vocabulary(formulas: Iterable[Formula]) -> Vocabulary:
    terms, evidence, agents, preds, pool = {}, {}, {}, {}, {}
    for a in formulas:
        for t in all_terms(a):
            terms.setdefault(t, None)
        for v in free_vars_formula(a):
            terms.setdefault(v, None)
        for b in _subformulas(a):
            if isinstance(b, Forall):
                terms.setdefault(b.var, None)
            if isinstance(b, Just):
                evidence.setdefault(b.evidence, None)
                pool.setdefault(b.body, None)
            elif isinstance(b, Trust):
                pool.setdefault(b.body, None)
            elif isinstance(b, (Pred, Eq)):
                pool.setdefault(b, None)
        for g in agents_of(a):
            agents.setdefault(g, None)
        preds.update(predicates_of(a))
    for t in list(terms):
        if isinstance(t, Var):
            evidence.setdefault(t, None)
    if not agents:
        agents[Agent(0)] = None
    return Vocabulary(list(terms), list(evidence), list(agents), preds, list(pool))


def derivation_formulas(d: Derivation) -> list:
    out = {}
    for n in d.nodes():
        for a in n.conclusion.context:
            out.setdefault(a, None)
        out.setdefault(n.conclusion.conclusion, None)
    return list(out)


def params_for(vocab: Vocabulary, **overrides) -> RandomModelParams:
    base = dict(
        terms=vocab.terms,
        agents=vocab.agents,
        predicates=vocab.predicates,
        evidence_terms=vocab.evidence_terms,
        evidence_pool=vocab.pool,
        max_states=3,
        max_domain=3,
        seed_prob=0.5,
    )
    base.update(overrides)
    return RandomModelParams(**base)


# ---------------------------------------------------------------------------
# Soundness fuzzing


@dataclass
class SoundnessViolation:
    entry: str
    model_seed: int
    state: str
    sequent: Sequent


@dataclass
class FuzzReport:
    models: int = 0
    sequents_checked: int = 0
    premises_met: int = 0
    violations: list = field(default_factory=list)
    depth_errors: int = 0
    per_entry: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.depth_errors


def sequents_to_check(entry: CorpusEntry) -> list[Sequent]:
    """All node sequents, or only the root when the tree eliminates a trust formula.

    Below a t-elim the eigenvariable stands for an unknown justification, so
    those intermediate sequents are not valid on their own.
    """
    d = entry.derivation
    if entry.uses_trust_elim:
        return [d.conclusion]
    seen = {}
    for n in d.nodes():
        key = (tuple(sorted(map(repr, n.conclusion.context))), n.conclusion.conclusion)
        seen.setdefault(key, n.conclusion)
    return list(seen.values())


def sequent_holds(m: FiniteModel, w, s: Sequent, cache: dict, depth: int = 6) -> tuple[bool, bool]:
    """(context verified at w, conclusion verified at w when it is)."""

    def truth(a):
        key = (w, a)
        if key not in cache:
            cache[key] = eval_formula(m, w, None, a, depth)
        return cache[key]

    if not all(truth(a) for a in s.context):
        return False, True
    return True, truth(s.conclusion)


def fuzz_entry(entry: CorpusEntry, models: int, seed: int, report: FuzzReport, depth: int = 6) -> None:
    vocab = vocabulary(derivation_formulas(entry.derivation))
    params = params_for(vocab)
    seqs = sequents_to_check(entry)
    bad = 0
    for i in range(models):
        mseed = seed * 100_003 + i
        m = random_model(params, mseed, entry.symtab)
        report.models += 1
        cache: dict = {}
        for w in m.states:
            for s in seqs:
                report.sequents_checked += 1
                try:
                    met, holds = sequent_holds(m, w, s, cache, depth)
                except DepthExhausted:
                    report.depth_errors += 1
                    continue
                if met:
                    report.premises_met += 1
                    if not holds:
                        bad += 1
                        report.violations.append(SoundnessViolation(entry.name, mseed, w, s))
    report.per_entry[entry.name] = bad


def soundness_fuzz(entries: Sequence[CorpusEntry], models: int = 200, seed: int = 0, depth: int = 6) -> FuzzReport:
    report = FuzzReport()
    for e in entries:
        fuzz_entry(e, models, seed, report, depth)
    return report


# ---------------------------------------------------------------------------
# Random formulas and the x-variant property


def random_term(rng: random.Random, atoms: Sequence[Term], size: int) -> Term:
    if size <= 1 or rng.random() < 0.5:
        return rng.choice(atoms)
    if rng.random() < 0.3:
        return Bang(random_term(rng, atoms, size - 1))
    left = rng.randint(1, size - 2) if size > 2 else 1
    return App(random_term(rng, atoms, left), random_term(rng, atoms, max(1, size - 1 - left)))


def random_formula(
    rng: random.Random,
    terms: Sequence[Term],
    variables: Sequence[Var],
    predicates: dict,
    agents: Sequence[Agent],
    evidence: Sequence[Term],
    depth: int,
) -> Formula:
    """A random formula over the given vocabulary; quantifiers bind members of variables."""
    atoms = list(terms)
    if depth <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.1:
            return BOT
        if r < 0.35:
            return Eq(rng.choice(atoms), rng.choice(atoms))
        p = rng.choice(sorted(predicates))
        return Pred(p, tuple(rng.choice(atoms) for _ in range(predicates[p])))
    sub = lambda: random_formula(rng, terms, variables, predicates, agents, evidence, depth - 1)
    kind = rng.choice(("imp", "and", "forall", "K", "just", "trust"))
    if kind == "imp":
        return Imp(sub(), sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "forall":
        return Forall(rng.choice(variables), sub())
    if kind == "K":
        return K(rng.choice(agents), sub())
    if kind == "just":
        return Just(rng.choice(evidence), sub())
    body = sub()
    occ = [t for t in all_terms(body) if occurs_in(t, body)]
    if not occ:
        return K(rng.choice(agents), body)
    return Trust(rng.choice(agents), rng.choice(occ), body)


@dataclass
class VariantCase:
    model_seed: int
    state: str
    formula: Formula
    term: Term
    variant_value: bool
    substituted_value: bool


@dataclass
class VariantReport:
    cases: int = 0
    failures: list = field(default_factory=list)
    depth_errors: int = 0
    with_justification: int = 0
    failures_with_justification: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures and not self.depth_errors


def _mentions_justification(a: Formula) -> bool:
    return any(isinstance(b, (Just, Trust)) for b in _subformulas(a))


def variant_property(cases: int = 1000, seed: int = 0, symtab=None, formula_depth: int = 3) -> VariantReport:
    """Compare truth under the x-variant f (f(x) = g(t)) with truth of A[t/x] under g = I_w."""
    from .syntax import SymbolTable

    st = symtab or SymbolTable()
    x, y, z, s, t, j, k = st.vars("x y z s t j k")
    a, b = st.agent("a"), st.agent("b")
    preds = {"P": 1, "R": 2}
    for p, n in preds.items():
        st.register_pred(p, n)
    rng = random.Random(seed)
    report = VariantReport()
    base_terms = [x, y, z, s, t]
    evidence = [j, k, App(j, k), Bang(j)]
    pool_rng = random.Random(seed + 1)
    pool = [random_formula(pool_rng, base_terms, [x, y, z], preds, [a, b], evidence, 1) for _ in range(12)]
    pool += [Pred("P", (v,)) for v in base_terms]
    table_terms = base_terms + evidence
    params = RandomModelParams(
        terms=table_terms,
        agents=[a, b],
        predicates=preds,
        evidence_terms=evidence,
        evidence_pool=pool,
        max_states=3,
        max_domain=3,
        seed_prob=0.4,
    )
    models: dict = {}
    for i in range(cases):
        mseed = seed * 7919 + rng.randrange(50)
        m = models.get(mseed)
        if m is None:
            m = models[mseed] = random_model(params, mseed, st)
        w = rng.choice(m.states)
        A = random_formula(rng, base_terms, [x, y, z], preds, [a, b], evidence, formula_depth)
        term = rng.choice(table_terms)
        g = dict(m.term_table)
        f = dict(g)
        f[x] = g[term]
        try:
            left = eval_formula(m, w, f, A)
            right = eval_formula(m, w, g, subst_quant(A, term, x))
        except DepthExhausted:
            report.depth_errors += 1
            continue
        report.cases += 1
        mentions = _mentions_justification(A)
        report.with_justification += mentions
        if left != right:
            report.failures.append(VariantCase(mseed, w, A, term, left, right))
            report.failures_with_justification += mentions
    return report


# ---------------------------------------------------------------------------
# Random lambda terms


def random_lambda_term(rng: random.Random, size: int, variables: Sequence[Var]) -> Term:
    """A random pure lambda term with exactly size nodes."""
    if size <= 1:
        return rng.choice(variables)
    if size == 2 or rng.random() < 0.4:
        return Lam(rng.choice(variables), random_lambda_term(rng, size - 1, variables))
    left = rng.randint(1, size - 2)
    return App(random_lambda_term(rng, left, variables), random_lambda_term(rng, size - 1 - left, variables))


def random_redex_term(rng: random.Random, max_size: int, variables: Sequence[Var]) -> Term:
    """Random term of size at most max_size whose subterms are often redexes."""
    return _redex_rich(rng, rng.randint(4, max_size), variables)


def _redex_rich(rng, size, variables):
    if size <= 1:
        return rng.choice(variables)
    if size >= 4 and rng.random() < 0.5:
        b = rng.randint(1, size - 3)
        body = _redex_rich(rng, b, variables)
        return App(Lam(rng.choice(variables), body), _redex_rich(rng, size - 2 - b, variables))
    if size == 2 or rng.random() < 0.4:
        return Lam(rng.choice(variables), _redex_rich(rng, size - 1, variables))
    left = rng.randint(1, size - 2)
    return App(_redex_rich(rng, left, variables), _redex_rich(rng, size - 1 - left, variables))
