"""The acceptance cases, runnable from tests and from the command line."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import lam
from .corpus import (
    build_corpus,
    corpus_symtab,
    example_trust_transfer,
    example_trust_transfer_goal,
    example_trust_transfer_negative,
    identity_beside_knowledge,
    necessity_of_identity_attempt,
    service_case,
)
from .fuzz import random_redex_term, soundness_fuzz, variant_property
from .proof import check, derives, desugar_trust
from .semantics import (
    FiniteModel,
    build_hyper_counterexample,
    build_intensional_counterexample,
    consequence,
    eval_formula,
    make_model,
    validate_model,
)
from .syntax import App, Eq, Pred, SymbolTable, parse_formula, subst_quant


@dataclass
class CaseResult:
    case_id: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def record(self) -> str:
        return f"{self.case_id} {'pass' if self.ok else 'fail'} {self.detail}"


def _timed(case_id: str, limit: float | None, fn: Callable[[], tuple[bool, str]]) -> CaseResult:
    start = time.perf_counter()
    ok, detail = fn()
    took = time.perf_counter() - start
    if limit is not None and took >= limit:
        ok = False
        detail += f"; took {took:.2f}s, limit {limit}s"
    return CaseResult(case_id, ok, f"{detail} ({took:.2f}s)", took)


# ---------------------------------------------------------------------------
# 1. trust transfer


def case_transfer() -> CaseResult:
    def run():
        st = corpus_symtab()
        d = example_trust_transfer(st)
        report = check(d)
        hyps, goal = example_trust_transfer_goal(st)
        ok = report.ok and derives(hyps, goal, d)
        plain = desugar_trust(d)
        ok = ok and plain.report.ok
        return ok, f"check={report.describe()} derives={ok} desugared={plain.report.describe()}"

    return _timed("transfer", 1.0, run)


# ---------------------------------------------------------------------------
# 2. the underivable trust transfer


def handcrafted_separation(st: SymbolTable) -> FiniteModel:
    """w sees v; s and u co-refer everywhere, t never equals s; C holds everywhere.

    j1 justifies s = u and j2 justifies C(s) at both states; nothing justifies
    a C-fact about t or anything identical to it.
    """
    s, t, u, j1, j2 = st.vars("s t u j1 j2")
    a = st.agent("a")
    f = lambda text: parse_formula(text, st)
    states = ("w", "v")
    return make_model(
        states,
        {a: {("w", "v")}},
        (),
        ("d0", "d1", "d2"),
        {s: "d0", t: "d1", u: "d2", j1: "d0", j2: "d0"},
        eq={w: {("d0", "d2")} for w in states},
        pred={w: {"C": {("d0",), ("d1",), ("d2",)}} for w in states},
        evidence={w: {j1: {f("s = u")}, j2: {f("C(s)")}} for w in states},
        symtab=st,
    )


def random_separation(st: SymbolTable, seed: int) -> FiniteModel:
    """A random model with the separating structure built in, plus noise."""
    rng = random.Random(seed)
    s, t, u, r, j1, j2, k = st.vars("s t u r j1 j2 k")
    a = st.agent("a")
    f = lambda text: parse_formula(text, st)
    n = rng.randint(2, 4)
    states = tuple(f"w{i}" for i in range(n))
    w, v = states[0], states[1]
    size = rng.randint(2, 4)
    domain = tuple(f"d{i}" for i in range(size))
    vs, vt = "d0", "d1"
    vu = rng.choice([vs] + list(domain[2:]))
    table = {s: vs, t: vt, u: vu}
    spare = [r, k, j1, j2]
    for term, e in zip(spare, domain[2:]):
        table[term] = e
    for term in spare:
        table.setdefault(term, rng.choice(domain))
    agent_rel = {a: {(w, v)} | {(x, y) for x in states for y in states if x != y and rng.random() < 0.3}}
    gamma = {(x, y) for x in states for y in states if x != y and rng.random() < 0.2 and y != v and x != v}
    eq = {}
    for x in states:
        classes = {e: rng.randrange(size) for e in domain}
        classes[vu] = classes[vs]
        if x == v or rng.random() < 0.5:
            while classes[vt] == classes[vs]:
                classes[vt] = rng.randrange(size + 1)
        eq[x] = {(p, q) for p in domain for q in domain if classes[p] == classes[q]}
    pred = {}
    for x in states:
        cs = {(e,) for e in domain if rng.random() < 0.5} | {(vs,), (vu,)}
        pred[x] = {"C": cs, "Q": {(e,) for e in domain if rng.random() < 0.5}}
    noise = [f("C(s)"), f("C(u)"), f("s = u"), f("Q(t)"), f("Q(r)"), f("Q(s)")]
    evidence = {}
    for x in states:
        evidence[x] = {j1: {f("s = u")}, j2: {f("C(s)")}}
        extra = [b for b in noise if rng.random() < 0.3]
        if extra:
            evidence[x][k] = set(extra)
    return make_model(states, agent_rel, gamma, domain, table, eq, pred, evidence, st)


def separated_at(m: FiniteModel, v, t_term, symbol: str = "C") -> bool:
    """No table term justifies symbol(r) at v for any r identical to t there."""
    tv = m.term_table[t_term]
    same = [r for r, e in m.term_table.items() if (e, tv) in m.eq.get(v, ())]
    ev = m.evidence_at(v)
    return not any(ev.member(j, Pred(symbol, (r,))) for j in m.term_table for r in same)


def case_transfer_negative(models: int = 200, seed: int = 0) -> CaseResult:
    def run():
        st = corpus_symtab()
        hyps, goal = example_trust_transfer_negative(st)
        hand = handcrafted_separation(st)
        s, t = st.vars("s t")
        problems = []
        if validate_model(hand):
            problems.append("handcrafted model invalid")
        if not all(eval_formula(hand, "w", None, h) for h in hyps):
            problems.append("handcrafted hypotheses fail at w")
        if not separated_at(hand, "v", t):
            problems.append("handcrafted model not separated at v")
        if consequence(hand, hyps, goal):
            problems.append("handcrafted consequence true")
        bad = 0
        for i in range(models):
            m = random_separation(st, seed * 10_007 + i)
            w, v = m.states[0], m.states[1]
            if validate_model(m) or not separated_at(m, v, t):
                problems.append(f"random model {i} lost its separating structure")
                continue
            if not all(eval_formula(m, w, None, h) for h in hyps):
                problems.append(f"random model {i}: hypotheses fail at {w}")
                continue
            if eval_formula(m, w, None, goal):
                bad += 1
        if bad:
            problems.append(f"{bad} separated states verify the goal")
        detail = f"handcrafted consequence=false, {models} separation models, goal verified at {bad} separated states"
        return not problems, "; ".join(problems) or detail

    return _timed("transfer-negative", 30.0, run)


# ---------------------------------------------------------------------------
# 3. probabilistic service identity


def case_services(max_depth: int = 6) -> CaseResult:
    def run():
        svc = service_case(max_depth)
        F = Fraction
        st = svc.symtab
        u, u1, u2, o1, o2 = st.vars("u u1 u2 o1 o2")
        expected = [
            ((F(1), u),),
            ((F(3, 4), u1), (F(1, 4), u2)),
            ((F(1, 4), o1), (F(1, 2), o2), (F(1, 4), u2)),
            ((F(1, 4), o1), (F(1, 2), o2), (F(1, 4), o2)),
            ((F(1, 4), o1), (F(3, 4), o2)),
        ]
        chain_ok = svc.chain == expected
        arithmetic = F(3, 4) * F(1, 3) == F(1, 4) and F(3, 4) * F(2, 3) == F(1, 2) and F(1, 2) + F(1, 4) == F(3, 4)
        report = check(svc.derivation)
        derived = report.ok and derives(svc.hypotheses, svc.goal, svc.derivation)
        in_theory = all(Eq(h.body.lhs, h.body.rhs) in svc.closure.theory for h in svc.hypotheses)
        literal = derives(svc.hypotheses, svc.literal_goal, svc.derivation)
        ok = chain_ok and arithmetic and derived and in_theory
        return ok, (
            f"chain of {len(svc.chain)} distributions exact={chain_ok}, {len(svc.closure.identities)} identities, "
            f"list-level trust derived={derived} (bare s = u derived={literal})"
        )

    return _timed("services", 5.0, run)


# ---------------------------------------------------------------------------
# 4. hyperintensional and intensional counterexamples


def case_counterexamples() -> CaseResult:
    def run():
        st = SymbolTable()
        hyper = build_hyper_counterexample(st)
        f = lambda text: parse_formula(text, st)
        swapped = f("Q(y) & P(x)")
        problems = []
        if validate_model(hyper):
            problems.append("hyper model invalid")
        if not eval_formula(hyper, "w", None, f("j : (P(x) & Q(y))")):
            problems.append("j:(P(x)&Q(y)) false")
        from .syntax import Just

        if any(eval_formula(hyper, "w", None, Just(k, swapped)) for k in hyper.term_table):
            problems.append("some table term justifies Q(y)&P(x)")
        same = all(
            eval_formula(hyper, w, None, f("P(x) & Q(y)")) == eval_formula(hyper, w, None, swapped) for w in hyper.states
        )
        if not same:
            problems.append("conjunction orders differ in truth")
        st2 = SymbolTable()
        im = build_intensional_counterexample(st2)
        g = lambda text: parse_formula(text, st2)
        got = [eval_formula(im, "w", None, g(x)) for x in ("t = s", "K[a] P(t)", "K[a] P(s)")]
        if validate_model(im):
            problems.append("intensional model invalid")
        if got != [True, True, False]:
            problems.append(f"intensional values {got}")
        return not problems, "; ".join(problems) or "hyper and intensional models behave as stated"

    return _timed("counterexamples", None, run)


# ---------------------------------------------------------------------------
# 5. soundness fuzz


def case_soundness(models: int = 200, seed: int = 0) -> CaseResult:
    def run():
        corpus = build_corpus()
        names = {e.name for e in corpus}
        report = soundness_fuzz(corpus, models, seed)
        enough = len(corpus) >= 12 and {"barcan", "excluded-middle"} <= names
        bad_check = [e.name for e in corpus if not check(e.derivation).ok]
        ok = report.ok and enough and not bad_check
        return ok, (
            f"{len(corpus)} derivations x {models} models: {report.sequents_checked} sequent checks, "
            f"{report.premises_met} with context verified, {len(report.violations)} violations, "
            f"{report.depth_errors} depth errors, unchecked={bad_check}"
        )

    return _timed("soundness", 120.0, run)


# ---------------------------------------------------------------------------
# 6. x-variants versus substitution


def case_variant(cases: int = 1000, seed: int = 0) -> CaseResult:
    def run():
        report = variant_property(cases, seed)
        detail = (
            f"{report.cases} cases, {len(report.failures)} disagreements "
            f"({report.failures_with_justification} in formulas with justification or trust), "
            f"{report.depth_errors} depth errors"
        )
        return report.ok and report.cases >= cases, detail

    return _timed("variant", None, run)


# ---------------------------------------------------------------------------
# 7. substitution discipline


def case_substitution() -> CaseResult:
    def run():
        st = corpus_symtab()
        good = check(identity_beside_knowledge(st))
        swapped = check(identity_beside_knowledge(st, subst_quant))
        nec = check(necessity_of_identity_attempt(st))
        ok = good.ok and not swapped.ok and swapped.kind == "SubstitutionMismatch" and not nec.ok
        return ok, f"ident={good.describe()}; quant: {swapped.describe()}; necessity: {nec.describe()}"

    return _timed("substitution", None, run)


# ---------------------------------------------------------------------------
# 8. validator mutations


def validator_base(st: SymbolTable) -> dict:
    """Keyword arguments of a small valid model, left unclosed so mutations stick."""
    a = st.agent("a")
    s, t, j = st.vars("s t j")
    st.register_pred("P", 1)
    states, domain = ("w", "v", "u"), ("d0", "d1", "d2")
    ident = {(e, e) for e in domain}
    return dict(
        states=states,
        agent_rel={a: {(x, y) for x in ("w", "v") for y in ("w", "v")} | {("u", "u")}},
        gamma_rel={("w", "w"), ("v", "v"), ("u", "u"), ("w", "v")},
        domain=domain,
        term_table={s: "d0", t: "d1", j: "d2"},
        eq={x: ident | {("d0", "d1"), ("d1", "d0")} for x in states},
        pred={x: {"P": {(e,) for e in domain}} for x in states},
        evidence={x: {j: {parse_formula("P(s)", st)}} for x in ("w", "v")},
        symtab=st,
        close=False,
    )


def _mutations(st: SymbolTable):
    a = st.agent("a")
    j = st.var("j")

    def drop(rel, *pairs):
        return set(rel) - set(pairs)

    def with_eq(b, w, rel):
        return {**b, "eq": {**b["eq"], w: rel}}

    yield "agent-reflexive", lambda b: {**b, "agent_rel": {a: drop(b["agent_rel"][a], ("u", "u"))}}
    yield "agent-euclidean", lambda b: {**b, "agent_rel": {a: drop(b["agent_rel"][a], ("v", "w"))}}
    yield "gamma-reflexive", lambda b: {**b, "gamma_rel": drop(b["gamma_rel"], ("u", "u"))}
    yield "gamma-transitive", lambda b: {**b, "gamma_rel": set(b["gamma_rel"]) | {("v", "u")}}
    yield "eq-reflexive", lambda b: with_eq(b, "w", drop(b["eq"]["w"], ("d2", "d2")))
    yield "eq-symmetric", lambda b: with_eq(b, "v", drop(b["eq"]["v"], ("d1", "d0")))
    yield "eq-transitive", lambda b: with_eq(b, "u", set(b["eq"]["u"]) | {("d1", "d2"), ("d2", "d1")})
    yield "pred-uniform", lambda b: {**b, "pred": {**b["pred"], "u": {"P": {("d0",), ("d2",)}}}}
    yield "evidence-monotone", lambda b: {**b, "evidence": {"w": b["evidence"]["w"]}}
    yield "table-range", lambda b: {**b, "term_table": {**b["term_table"], j: "d9"}}
    yield "domain-undenoted", lambda b: {**b, "domain": b["domain"] + ("d3",)}
    yield "pred-arity", lambda b: {**b, "pred": {**b["pred"], "w": {"P": {("d0",), ("d0", "d1")}}}}


def validator_mutations() -> list[tuple[str, list]]:
    """(target code, violation codes reported) for each mutation of the base model."""
    out = []
    for code, mutate in _mutations(SymbolTable()):
        m = make_model(**mutate(validator_base(SymbolTable())))
        out.append((code, [v.code for v in validate_model(m)]))
    return out


def case_validator() -> CaseResult:
    def run():
        st = SymbolTable()
        clean = validate_model(make_model(**validator_base(st)))
        results = validator_mutations()
        missed = [code for code, got in results if code not in got]
        ok = not clean and len(results) >= 10 and not missed
        return ok, f"base model clean={not clean}, {len(results)} mutations, missed={missed}"

    return _timed("validator", None, run)


# ---------------------------------------------------------------------------
# 9. lambda engine


def case_lambda(terms: int = 500, max_size: int = 12, fuel: int = 50, seed: int = 0) -> CaseResult:
    def run():
        st = SymbolTable()
        t, s = st.vars("t s")
        avoid = {t, s}
        pair = App(App(lam.pair_operator(avoid), t), s)
        first = lam.reduces_to(App(pair, lam.projection(1, avoid)), t, fuel)
        second = lam.reduces_to(App(pair, lam.projection(2, avoid)), s, fuel)
        rng = random.Random(seed)
        variables = st.vars("x y z")
        fails = fuel_out = 0
        for _ in range(terms):
            term = random_redex_term(rng, max_size, variables)
            verdict = lam.local_confluence(term, fuel)
            fails += verdict == "fail"
            fuel_out += verdict == "fuel"
        ok = first and second and fails == 0 and fuel_out <= 0.05 * terms
        return ok, f"projections {first}/{second}, {terms} terms: {fails} join failures, {fuel_out} fuel-exhausted"

    return _timed("lambda", None, run)


CASES = {
    "transfer": case_transfer,
    "transfer-negative": case_transfer_negative,
    "services": case_services,
    "counterexamples": case_counterexamples,
    "soundness": case_soundness,
    "variant": case_variant,
    "substitution": case_substitution,
    "validator": case_validator,
    "lambda": case_lambda,
}

CRITERIA = {
    1: "transfer",
    2: "transfer-negative",
    3: "services",
    4: "counterexamples",
    5: "soundness",
    6: "variant",
    7: "substitution",
    8: "validator",
    9: "lambda",
}


def run_cases(selected=None, **options) -> list[CaseResult]:
    names = list(CASES) if not selected else list(selected)
    out = []
    for name in names:
        fn = CASES[name]
        kwargs = {k: v for k, v in options.items() if k in fn.__code__.co_varnames[: fn.__code__.co_argcount]}
        out.append(fn(**kwargs))
    return out
