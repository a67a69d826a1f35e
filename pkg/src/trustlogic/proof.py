"""Natural-deduction derivations: representation, checking, desugaring and file format."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import sexpdata

from .syntax import (
    BOT,
    Agent,
    And,
    App,
    Bang,
    Bot,
    Eq,
    Forall,
    Formula,
    Imp,
    Just,
    K,
    Lam,
    Pred,
    SymbolTable,
    Term,
    Trust,
    Var,
    check_trust_subjects,
    format_formula,
    format_term,
    free_vars_formula,
    occurs_in,
    parse_formula,
    parse_term,
    subst_ident,
    subst_quant,
    vars_of_formula,
    vars_of_term,
)

RULES = (
    "ax", "imp-i", "imp-e", "efq", "dne", "and-i", "and-e1", "and-e2", "all-i", "all-e",
    "eq-refl", "eq-sym", "eq-trans", "eq-subst", "k-nec", "k-dist", "k-t", "k-5",
    "j-app", "j-t", "j-bang", "j-eq-l", "j-eq-r", "t-intro", "t-elim", "nec-kt",
    "weak", "contr", "dup",
)

ARITY = {
    "ax": 0, "eq-refl": 0,
    "imp-e": 2, "and-i": 2, "eq-trans": 2, "eq-subst": 2, "k-dist": 2, "j-app": 2, "j-eq-l": 2, "j-eq-r": 2,
}


@dataclass(frozen=True)
class Sequent:
    context: tuple
    conclusion: Formula

    def same(self, other: "Sequent") -> bool:
        return self.conclusion == other.conclusion and Counter(self.context) == Counter(other.context)


@dataclass(frozen=True, eq=False)
class Derivation:
    """A rule application with its premises and concluding sequent.

    params holds what the rule cannot be matched without: the instantiating
    term of all-e, eigenvariables of all-i and t-elim, the variable and
    pattern of the substitution rules, and the agent of the K rules.
    """

    rule: str
    premises: tuple
    conclusion: Sequent
    params: dict = field(default_factory=dict)

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())


# ---------------------------------------------------------------------------
# Checking


class CheckError(Exception):
    kind = "CheckError"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class SchemaMismatch(CheckError):
    kind = "SchemaMismatch"


class SubstitutionMismatch(CheckError):
    kind = "SubstitutionMismatch"


class SideConditionViolated(CheckError):
    kind = "SideConditionViolated"

    def __init__(self, name: str, message: str = ""):
        super().__init__(message or name)
        self.name = name


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    path: tuple = ()
    rule: str = ""
    kind: str = ""
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        where = "root" if not self.path else "root." + ".".join(str(i) for i in self.path)
        return f"{self.kind} at {where} ({self.rule}): {self.message}"


def check(d: Derivation) -> CheckReport:
    """Check every node against its rule schema; report the first failing node (premises first)."""
    return _check(d, ())


def _check(d, path):
    for i, p in enumerate(d.premises):
        r = _check(p, path + (i,))
        if not r.ok:
            return r
    try:
        check_node(d)
    except CheckError as e:
        return CheckReport(False, path, d.rule, e.kind, e.message)
    return CheckReport(True)


def _need(cond: bool, msg: str):
    if not cond:
        raise SchemaMismatch(msg)


def _ctx(*parts) -> Counter:
    c = Counter()
    for p in parts:
        c.update(p)
    return c


def _side(cond: bool, name: str, msg: str = ""):
    if not cond:
        raise SideConditionViolated(name, msg or name)


def _agent_param(d, default):
    a = d.params.get("agent", default)
    return a


def check_node(d: Derivation) -> None:
    """Raise a CheckError unless d instantiates its rule (premises assumed checked)."""
    rule = d.rule
    if rule not in RULES:
        raise SchemaMismatch(f"unknown rule {rule!r}")
    n = ARITY.get(rule, 1)
    _need(len(d.premises) == n, f"{rule} takes {n} premise(s), got {len(d.premises)}")
    c = d.conclusion
    for a in list(c.context) + [c.conclusion]:
        try:
            check_trust_subjects(a)
        except ValueError as e:
            raise SchemaMismatch(str(e)) from None
    ctx = Counter(c.context)
    A = c.conclusion
    ps = [p.conclusion for p in d.premises]

    if rule == "ax":
        _need(list(c.context) == [A], "axiom must be A => A")
    elif rule == "eq-refl":
        _need(not c.context, "identity axiom has an empty context")
        _need(isinstance(A, Eq) and A.lhs == A.rhs, "identity axiom concludes t = t")
    elif rule == "imp-i":
        _need(isinstance(A, Imp), "conclusion must be an implication")
        _need(ps[0].conclusion == A.right, "premise must conclude the consequent")
        _need(Counter(ps[0].context) == ctx + Counter([A.left]), "premise context must be the conclusion context plus the antecedent")
    elif rule == "imp-e":
        major, minor = ps
        _need(isinstance(major.conclusion, Imp), "major premise must conclude an implication")
        _need(major.conclusion.left == minor.conclusion, "minor premise must conclude the antecedent")
        _need(major.conclusion.right == A, "conclusion must be the consequent")
        _need(ctx == _ctx(major.context, minor.context), "context must join the premise contexts")
    elif rule == "efq":
        _need(ps[0].conclusion == BOT, "premise must conclude bot")
        _need(isinstance(A, (Pred, Eq, Bot)), "ex falso concludes an atomic formula")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
    elif rule == "dne":
        p = ps[0].conclusion
        _need(p == Imp(Imp(A, BOT), BOT), "premise must be the double negation of the conclusion")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
    elif rule == "and-i":
        _need(isinstance(A, And), "conclusion must be a conjunction")
        _need(ps[0].conclusion == A.left and ps[1].conclusion == A.right, "premises must conclude the conjuncts")
        _need(ctx == _ctx(ps[0].context, ps[1].context), "context must join the premise contexts")
    elif rule in ("and-e1", "and-e2"):
        p = ps[0].conclusion
        _need(isinstance(p, And), "premise must conclude a conjunction")
        _need(A == (p.left if rule == "and-e1" else p.right), "conclusion must be the selected conjunct")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
    elif rule == "all-i":
        _need(isinstance(A, Forall), "conclusion must be universal")
        y = d.params.get("eigen")
        _need(isinstance(y, Var), "all-i needs an eigenvariable parameter")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
        if ps[0].conclusion != subst_quant(A.body, y, A.var):
            raise SubstitutionMismatch("premise is not the body instantiated at the eigenvariable")
        for h in c.context:
            _side(y not in free_vars_formula(h), "eigenvariable", "eigenvariable occurs free in the context")
        _side(y not in free_vars_formula(A), "eigenvariable", "eigenvariable occurs free in the conclusion")
    elif rule == "all-e":
        p = ps[0].conclusion
        t = d.params.get("term")
        _need(isinstance(p, Forall), "premise must be universal")
        _need(t is not None, "all-e needs a term parameter")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
        if A != subst_quant(p.body, t, p.var):
            raise SubstitutionMismatch("conclusion is not the instance [t/x] of the premise")
    elif rule == "eq-sym":
        p = ps[0].conclusion
        _need(isinstance(p, Eq) and isinstance(A, Eq), "eq-sym works on identities")
        _need(A.lhs == p.rhs and A.rhs == p.lhs, "conclusion must swap the sides")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
    elif rule == "eq-trans":
        p, q = ps[0].conclusion, ps[1].conclusion
        _need(all(isinstance(x, Eq) for x in (p, q, A)), "eq-trans works on identities")
        _need(p.rhs == q.lhs and A.lhs == p.lhs and A.rhs == q.rhs, "identities must chain")
        _need(ctx == _ctx(ps[0].context, ps[1].context), "context must join the premise contexts")
    elif rule == "eq-subst":
        _check_subst(d, ps, ctx, A, justified=None)
    elif rule in ("j-eq-l", "j-eq-r"):
        _check_subst(d, ps, ctx, A, justified=rule)
    elif rule in ("k-nec", "nec-kt"):
        _need(isinstance(A, K), "conclusion must be K_a A")
        a = A.agent
        _need(_agent_param(d, a) == a, "agent parameter disagrees with the conclusion")
        _need(ps[0].conclusion == A.body, "premise must conclude the body")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
        for h in c.context:
            ok = isinstance(h, K) and h.agent == a
            if rule == "nec-kt":
                ok = ok or (isinstance(h, Trust) and h.agent == a)
            _side(ok, "necessitation-context", "every context formula must be K_a (or T_a for nec-kt) for the same agent")
    elif rule == "k-dist":
        p, q = ps[0].conclusion, ps[1].conclusion
        _need(isinstance(p, K) and isinstance(p.body, Imp), "major premise must be K_a (A -> B)")
        _need(q == K(p.agent, p.body.left), "minor premise must be K_a A")
        _need(A == K(p.agent, p.body.right), "conclusion must be K_a B")
        _need(ctx == _ctx(ps[0].context, ps[1].context), "context must join the premise contexts")
    elif rule == "k-t":
        p = ps[0].conclusion
        _need(isinstance(p, K) and p.body == A, "premise must be K_a of the conclusion")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
    elif rule == "k-5":
        p = ps[0].conclusion
        _need(isinstance(p, Imp) and p.right == BOT and isinstance(p.left, K), "premise must be ~K_a A")
        _need(A == K(p.left.agent, p), "conclusion must be K_a ~K_a A")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
    elif rule == "j-app":
        p, q = ps[0].conclusion, ps[1].conclusion
        _need(isinstance(p, Just) and isinstance(p.body, Imp), "major premise must be j : (A -> B)")
        _need(isinstance(q, Just) and q.body == p.body.left, "minor premise must be k : A")
        _need(A == Just(App(p.evidence, q.evidence), p.body.right), "conclusion must be (j k) : B")
        _need(ctx == _ctx(ps[0].context, ps[1].context), "context must join the premise contexts")
    elif rule == "j-t":
        p = ps[0].conclusion
        _need(isinstance(p, Just) and p.body == A, "premise must be j : A")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
    elif rule == "j-bang":
        p = ps[0].conclusion
        _need(isinstance(p, Just), "premise must be j : A")
        _need(A == Just(Bang(p.evidence), p), "conclusion must be !j : (j : A)")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
    elif rule == "t-intro":
        p = ps[0].conclusion
        _need(isinstance(A, Trust), "conclusion must be a trust formula")
        _need(isinstance(p, K) and isinstance(p.body, Just), "premise must be K_a (j : A)")
        _need(p.agent == A.agent and p.body.body == A.body, "premise must match agent and body")
        _side(occurs_in(A.subject, A.body), "trust-subject", "trust subject does not occur in the body")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
    elif rule == "t-elim":
        p = ps[0].conclusion
        x = d.params.get("eigen")
        _need(isinstance(x, Var), "t-elim needs an eigenvariable parameter")
        _need(isinstance(p, Trust), "premise must be a trust formula")
        _need(A == K(p.agent, Just(x, p.body)), "conclusion must be K_a (x : B)")
        _need(ctx == Counter(ps[0].context), "context must be unchanged")
        _side(x not in vars_of_formula(p.body), "eigenvariable", "eigenvariable occurs in the trusted formula")
        for h in c.context:
            _side(x not in vars_of_formula(h), "eigenvariable", "eigenvariable occurs in the context")
    elif rule == "weak":
        _need(A == ps[0].conclusion, "conclusion must be unchanged")
        _need(not (Counter(ps[0].context) - ctx), "weakening may only add formulas")
    elif rule == "contr":
        _need(A == ps[0].conclusion, "conclusion must be unchanged")
        pc = Counter(ps[0].context)
        _need(set(pc) == set(ctx) and not (ctx - pc), "contraction may only merge copies")
    elif rule == "dup":
        _need(A == ps[0].conclusion, "conclusion must be unchanged")
        pc = Counter(ps[0].context)
        _need(set(pc) == set(ctx) and not (pc - ctx), "duplication may only copy formulas")


def _check_subst(d, ps, ctx, A, justified):
    x, pattern = d.params.get("var"), d.params.get("pattern")
    _need(isinstance(x, Var) and pattern is not None, f"{d.rule} needs var and pattern parameters")
    ident, target = ps[0].conclusion, ps[1].conclusion
    _need(ctx == _ctx(ps[0].context, ps[1].context), "context must join the premise contexts")
    if justified:
        _need(isinstance(ident, Just) and isinstance(ident.body, Eq), "first premise must be k : identity")
        _need(isinstance(target, Just) and isinstance(A, Just), "second premise and conclusion must be justified")
        _need(target.evidence == A.evidence, "evidence term must be kept")
        eqn = ident.body
        t, s = (eqn.lhs, eqn.rhs) if justified == "j-eq-l" else (eqn.rhs, eqn.lhs)
        target, A = target.body, A.body
    else:
        _need(isinstance(ident, Eq), "first premise must be an identity")
        t, s = ident.lhs, ident.rhs
    if target != subst_ident(pattern, t, x):
        raise SubstitutionMismatch("second premise is not the pattern with t for x")
    if A != subst_ident(pattern, s, x):
        raise SubstitutionMismatch("conclusion is not the pattern with s for x")


class UncheckedWitness(ValueError):
    pass


def derives(hyps: Iterable[Formula], goal: Formula, witness: Derivation) -> bool:
    """Is goal derivable from hyps, as witnessed by a checked derivation whose context lies in hyps?"""
    report = check(witness)
    if not report.ok:
        raise UncheckedWitness(report.describe())
    hyps = set(hyps)
    c = witness.conclusion
    return c.conclusion == goal and all(h in hyps for h in c.context)


# ---------------------------------------------------------------------------
# Builders: each computes the conclusion from its premises.


def _seq(ctx, a) -> Sequent:
    return Sequent(tuple(ctx), a)


def _minus(ctx: Sequence, a) -> tuple:
    ctx = list(ctx)
    if a not in ctx:
        raise ValueError("formula to discharge is not in the context")
    ctx.remove(a)
    return tuple(ctx)


def ax(a: Formula) -> Derivation:
    return Derivation("ax", (), _seq((a,), a))


def eq_refl(t: Term) -> Derivation:
    return Derivation("eq-refl", (), _seq((), Eq(t, t)))


def imp_i(d: Derivation, a: Formula) -> Derivation:
    c = d.conclusion
    return Derivation("imp-i", (d,), _seq(_minus(c.context, a), Imp(a, c.conclusion)))


def imp_e(major: Derivation, minor: Derivation) -> Derivation:
    b = major.conclusion.conclusion.right
    return Derivation("imp-e", (major, minor), _seq(major.conclusion.context + minor.conclusion.context, b))


def efq(d: Derivation, a: Formula) -> Derivation:
    return Derivation("efq", (d,), _seq(d.conclusion.context, a))


def dne(d: Derivation) -> Derivation:
    return Derivation("dne", (d,), _seq(d.conclusion.context, d.conclusion.conclusion.left.left))


def and_i(d1: Derivation, d2: Derivation) -> Derivation:
    c1, c2 = d1.conclusion, d2.conclusion
    return Derivation("and-i", (d1, d2), _seq(c1.context + c2.context, And(c1.conclusion, c2.conclusion)))


def and_e(d: Derivation, i: int) -> Derivation:
    a = d.conclusion.conclusion
    return Derivation(f"and-e{i}", (d,), _seq(d.conclusion.context, a.left if i == 1 else a.right))


def all_i(d: Derivation, x: Var, body: Formula, eigen: Var) -> Derivation:
    return Derivation("all-i", (d,), _seq(d.conclusion.context, Forall(x, body)), {"eigen": eigen})


def all_e(d: Derivation, t: Term) -> Derivation:
    a = d.conclusion.conclusion
    return Derivation("all-e", (d,), _seq(d.conclusion.context, subst_quant(a.body, t, a.var)), {"term": t})


def eq_sym(d: Derivation) -> Derivation:
    a = d.conclusion.conclusion
    return Derivation("eq-sym", (d,), _seq(d.conclusion.context, Eq(a.rhs, a.lhs)))


def eq_trans(d1: Derivation, d2: Derivation) -> Derivation:
    a, b = d1.conclusion.conclusion, d2.conclusion.conclusion
    return Derivation("eq-trans", (d1, d2), _seq(d1.conclusion.context + d2.conclusion.context, Eq(a.lhs, b.rhs)))


def eq_subst(ident: Derivation, d: Derivation, x: Var, pattern: Formula) -> Derivation:
    s = ident.conclusion.conclusion.rhs
    return Derivation(
        "eq-subst",
        (ident, d),
        _seq(ident.conclusion.context + d.conclusion.context, subst_ident(pattern, s, x)),
        {"var": x, "pattern": pattern},
    )


def j_eq(ident: Derivation, d: Derivation, x: Var, pattern: Formula, side: str = "l") -> Derivation:
    eqn = ident.conclusion.conclusion.body
    s = eqn.rhs if side == "l" else eqn.lhs
    j = d.conclusion.conclusion.evidence
    return Derivation(
        f"j-eq-{side}",
        (ident, d),
        _seq(ident.conclusion.context + d.conclusion.context, Just(j, subst_ident(pattern, s, x))),
        {"var": x, "pattern": pattern},
    )


def k_nec(d: Derivation, a: Agent, rule: str = "k-nec") -> Derivation:
    return Derivation(rule, (d,), _seq(d.conclusion.context, K(a, d.conclusion.conclusion)), {"agent": a})


def nec_kt(d: Derivation, a: Agent) -> Derivation:
    return k_nec(d, a, "nec-kt")


def k_dist(d1: Derivation, d2: Derivation) -> Derivation:
    a = d1.conclusion.conclusion
    return Derivation("k-dist", (d1, d2), _seq(d1.conclusion.context + d2.conclusion.context, K(a.agent, a.body.right)))


def k_t(d: Derivation) -> Derivation:
    return Derivation("k-t", (d,), _seq(d.conclusion.context, d.conclusion.conclusion.body))


def k_5(d: Derivation) -> Derivation:
    p = d.conclusion.conclusion
    return Derivation("k-5", (d,), _seq(d.conclusion.context, K(p.left.agent, p)))


def j_app(d1: Derivation, d2: Derivation) -> Derivation:
    p, q = d1.conclusion.conclusion, d2.conclusion.conclusion
    return Derivation(
        "j-app", (d1, d2), _seq(d1.conclusion.context + d2.conclusion.context, Just(App(p.evidence, q.evidence), p.body.right))
    )


def j_t(d: Derivation) -> Derivation:
    return Derivation("j-t", (d,), _seq(d.conclusion.context, d.conclusion.conclusion.body))


def j_bang(d: Derivation) -> Derivation:
    p = d.conclusion.conclusion
    return Derivation("j-bang", (d,), _seq(d.conclusion.context, Just(Bang(p.evidence), p)))


def t_intro(d: Derivation, subject: Term) -> Derivation:
    p = d.conclusion.conclusion
    return Derivation("t-intro", (d,), _seq(d.conclusion.context, Trust(p.agent, subject, p.body.body)))


def t_elim(d: Derivation, eigen: Var) -> Derivation:
    p = d.conclusion.conclusion
    return Derivation("t-elim", (d,), _seq(d.conclusion.context, K(p.agent, Just(eigen, p.body))), {"eigen": eigen})


def weak(d: Derivation, *extra: Formula) -> Derivation:
    return Derivation("weak", (d,), _seq(d.conclusion.context + tuple(extra), d.conclusion.conclusion))


def contr(d: Derivation, a: Formula) -> Derivation:
    return Derivation("contr", (d,), _seq(_minus(d.conclusion.context, a), d.conclusion.conclusion))


def dup(d: Derivation, a: Formula) -> Derivation:
    return Derivation("dup", (d,), _seq(d.conclusion.context + (a,), d.conclusion.conclusion))


# ---------------------------------------------------------------------------
# Trust desugaring


def _replace_term(t: Term, mapping: dict) -> Term:
    if t in mapping:
        return mapping[t]
    if isinstance(t, App):
        return App(_replace_term(t.fn, mapping), _replace_term(t.arg, mapping))
    if isinstance(t, Bang):
        return Bang(_replace_term(t.inner, mapping))
    if isinstance(t, Lam):
        return Lam(t.binder, _replace_term(t.body, mapping))
    return t


@dataclass
class DesugarResult:
    derivation: Derivation
    notes: list
    report: CheckReport


def desugar_trust(d: Derivation) -> DesugarResult:
    """Replace trust formulas by K_a (w : A), dropping t-intro and t-elim nodes.

    The witness w of a trust formula comes from the t-elim that eliminates it
    (its eigenvariable) or the t-intro that introduces it (its justification);
    eigenvariables of the same formula are identified with that witness.
    """
    notes: list = []
    witnesses: dict = {}
    for node in d.nodes():
        if node.rule == "t-elim":
            witnesses.setdefault(node.premises[0].conclusion.conclusion, []).append(("elim", node.params.get("eigen")))
        elif node.rule == "t-intro":
            witnesses.setdefault(node.conclusion.conclusion, []).append(("intro", node.premises[0].conclusion.conclusion.body.evidence))
    renaming: dict = {}
    chosen: dict = {}
    for tr, ws in witnesses.items():
        intros = list(dict.fromkeys(w for kind, w in ws if kind == "intro"))
        elims = list(dict.fromkeys(w for kind, w in ws if kind == "elim"))
        pick = intros[0] if intros else elims[0]
        if len(intros) > 1:
            notes.append(f"trust formula introduced with {len(intros)} different justifications; kept the first")
        chosen[tr] = pick
        for x in elims:
            if x != pick:
                if x in renaming and renaming[x] != pick:
                    notes.append("eigenvariable shared by two trust formulas; left as is")
                    continue
                renaming[x] = pick
    used = set()
    for node in d.nodes():
        for a in list(node.conclusion.context) + [node.conclusion.conclusion]:
            used |= vars_of_formula(a)
    counter = [max((v.index for v in used), default=-1) + 1]

    def witness_for(tr):
        if tr not in chosen:
            chosen[tr] = Var(counter[0])
            counter[0] += 1
            notes.append("trust formula never introduced or eliminated; given a fresh witness")
        return _replace_term(chosen[tr], renaming)

    def df(a):
        if isinstance(a, Trust):
            return K(a.agent, Just(witness_for(a), df(a.body)))
        if isinstance(a, Eq):
            return Eq(_replace_term(a.lhs, renaming), _replace_term(a.rhs, renaming))
        if isinstance(a, Pred):
            return Pred(a.symbol, tuple(_replace_term(t, renaming) for t in a.args))
        if isinstance(a, Imp):
            return Imp(df(a.left), df(a.right))
        if isinstance(a, And):
            return And(df(a.left), df(a.right))
        if isinstance(a, Forall):
            return Forall(a.var, df(a.body))
        if isinstance(a, K):
            return K(a.agent, df(a.body))
        if isinstance(a, Just):
            return Just(_replace_term(a.evidence, renaming), df(a.body))
        return a

    def dparams(p):
        out = {}
        for k, v in p.items():
            if k == "pattern":
                out[k] = df(v)
            elif k in ("term", "eigen", "var") and v is not None:
                out[k] = _replace_term(v, renaming)
            else:
                out[k] = v
        return out

    def go(node):
        prem = tuple(go(p) for p in node.premises)
        concl = Sequent(tuple(df(a) for a in node.conclusion.context), df(node.conclusion.conclusion))
        if node.rule in ("t-intro", "t-elim"):
            if not prem[0].conclusion.same(concl):
                notes.append(f"{node.rule} node does not collapse after desugaring")
                return Derivation("weak", prem, concl)
            return prem[0]
        rule = "k-nec" if node.rule == "nec-kt" else node.rule
        return Derivation(rule, prem, concl, dparams(node.params))

    out = go(d)
    return DesugarResult(out, notes, check(out))


# ---------------------------------------------------------------------------
# Proof files

_TERM_PARAMS = {"term", "eigen", "var"}


def _atom(x) -> str:
    if isinstance(x, sexpdata.Symbol):
        return x.value()
    if isinstance(x, (str, int)):
        return str(x)
    raise ValueError(f"expected an atom, found {sexpdata.dumps(x)}")


class ProofFormatError(ValueError):
    pass


def load_derivations(text: str, symtab: SymbolTable) -> list[Derivation]:
    try:
        forms = sexpdata.parse(text)
    except Exception as e:  # sexpdata raises several exception types
        raise ProofFormatError(f"malformed s-expression: {e}") from None
    if not forms:
        raise ProofFormatError("no derivation in input")
    return [_load(f, symtab) for f in forms]


def _load(form, st) -> Derivation:
    if not isinstance(form, list) or len(form) < 2:
        raise ProofFormatError("a derivation is (rule-tag (params ...) premise* (seq (hyp*) concl))")
    rule = _atom(form[0])
    if rule not in RULES:
        raise ProofFormatError(f"unknown rule tag {rule!r}")
    rest = form[1:]
    params = {}
    if rest and isinstance(rest[0], list) and rest[0] and _atom(rest[0][0]) == "params":
        for entry in rest[0][1:]:
            if not isinstance(entry, list) or len(entry) != 2:
                raise ProofFormatError("parameters are (name value) pairs")
            key, val = _atom(entry[0]), _atom(entry[1])
            if key == "agent":
                params[key] = st.agent(val)
            elif key == "pattern":
                params[key] = parse_formula(val, st)
            elif key in _TERM_PARAMS:
                t = parse_term(val, st)
                if key != "term" and not isinstance(t, Var):
                    raise ProofFormatError(f"parameter {key} must be a variable")
                params[key] = t
            else:
                raise ProofFormatError(f"unknown parameter {key!r}")
        rest = rest[1:]
    if not rest:
        raise ProofFormatError(f"{rule} node lacks its (seq ...) conclusion")
    seq = rest[-1]
    if not (isinstance(seq, list) and len(seq) == 3 and _atom(seq[0]) == "seq" and isinstance(seq[1], list)):
        raise ProofFormatError("conclusion must be (seq (hyp*) concl)")
    ctx = tuple(parse_formula(_atom(h), st) for h in seq[1])
    concl = parse_formula(_atom(seq[2]), st)
    premises = tuple(_load(p, st) for p in rest[:-1])
    return Derivation(rule, premises, Sequent(ctx, concl), params)


def dump_derivation(d: Derivation, symtab: SymbolTable, indent: int = 0) -> str:
    pad = "  " * indent
    parts = [f"{pad}({d.rule}"]
    if d.params:
        items = []
        for k, v in d.params.items():
            if isinstance(v, Agent):
                val = symtab.agent_name(v)
            elif k == "pattern":
                val = format_formula(v, symtab)
            else:
                val = format_term(v, symtab)
            items.append(f"({k} {sexpdata.dumps(val)})")
        parts[0] += " (params " + " ".join(items) + ")"
    for p in d.premises:
        parts.append(dump_derivation(p, symtab, indent + 1))
    ctx = " ".join(sexpdata.dumps(format_formula(a, symtab)) for a in d.conclusion.context)
    concl = sexpdata.dumps(format_formula(d.conclusion.conclusion, symtab))
    parts.append(f"{pad}  (seq ({ctx}) {concl}))")
    return "\n".join(parts)


def format_sequent(s: Sequent, symtab: SymbolTable) -> str:
    ctx = ", ".join(format_formula(a, symtab) for a in s.context)
    return f"{ctx} => {format_formula(s.conclusion, symtab)}"
