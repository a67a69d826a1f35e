"""Built-in derivations: the worked examples plus a spread of rule exercises."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from . import proof as P
from .proof import Derivation
from .syntax import (
    BOT,
    And,
    Eq,
    Forall,
    Formula,
    Imp,
    K,
    Not,
    Pred,
    SymbolTable,
    Trust,
    Var,
    fresh_var,
    parse_formula,
    vars_of_term,
)
from .theory import DistEncoder, ProbTheory, lift_T, parse_behaviour, sigma_prob_eq


@dataclass
class CorpusEntry:
    name: str
    derivation: Derivation
    summary: str
    symtab: SymbolTable

    @property
    def uses_trust_elim(self) -> bool:
        return any(n.rule == "t-elim" for n in self.derivation.nodes())


def data_text(name: str) -> str:
    return resources.files("trustlogic").joinpath("data").joinpath(name).read_text()


def corpus_symtab() -> SymbolTable:
    st = SymbolTable()
    st.vars("x y z s t u j k")
    st.agent("a")
    for p, n in (("P", 1), ("Q", 1), ("C", 1), ("R", 2)):
        st.register_pred(p, n)
    return st


# ---------------------------------------------------------------------------
# Individual derivations


def barcan(st: SymbolTable) -> Derivation:
    """|- forall x K_a P(x) -> K_a forall x P(x), by negative introspection."""
    f = lambda s: parse_formula(s, st)
    a = st.agent("a")
    x = st.var("x")
    A = f("P(x)")
    KA = K(a, A)
    F = Forall(x, KA)
    notF = Not(F)
    G = K(a, Not(K(a, notF)))
    notKA = Not(KA)
    KnotKA = K(a, notKA)

    n2 = P.all_e(P.ax(F), x)                        # F => K_a A
    n3 = P.k_t(P.ax(KnotKA))                        # K_a ~K_a A => ~K_a A
    n5 = P.imp_i(P.imp_e(n3, n2), F)                # K_a ~K_a A => ~F
    n6 = P.k_nec(n5, a)                             # K_a ~K_a A => K_a ~F
    n7 = P.k_t(P.ax(G))                             # G => ~K_a ~F
    n9 = P.imp_i(P.imp_e(n7, n6), KnotKA)           # G => ~K_a ~K_a A
    n10 = P.k_5(P.ax(notKA))                        # ~K_a A => K_a ~K_a A
    n12 = P.imp_i(P.imp_e(n9, n10), notKA)          # G => ~~K_a A
    n14 = P.k_t(P.dne(n12))                         # G => A
    n16 = P.k_nec(P.all_i(n14, x, A, x), a)         # G => K_a forall x A
    left = P.imp_i(n16, G)                          # => G -> K_a forall x A

    m2 = P.imp_i(P.imp_e(P.ax(notF), P.ax(F)), notF)  # F => ~~F
    m3 = P.k_t(P.ax(K(a, notF)))                      # K_a ~F => ~F
    m5 = P.imp_i(P.imp_e(m2, m3), K(a, notF))         # F => ~K_a ~F
    right = P.k_5(m5)                                 # F => G
    return P.imp_i(P.imp_e(left, right), F)


def excluded_middle(st: SymbolTable) -> Derivation:
    """|- ~(~forall x P(x) & ~~forall x P(x)); needs one contraction."""
    E = parse_formula("~(forall x. P(x)) & ~~(forall x. P(x))", st)
    d = P.imp_e(P.and_e(P.ax(E), 2), P.and_e(P.ax(E), 1))
    return P.imp_i(P.contr(d, E), E)


def example_trust_transfer(st: SymbolTable) -> Derivation:
    """T^u_a s=u, T^s_a C(s) => T^u_a C(u)."""
    f = lambda s: parse_formula(s, st)
    a = st.agent("a")
    x, y, z, u = st.vars("x y z u")
    ident = P.k_t(P.t_elim(P.ax(f("T[a,u] s = u")), y))
    claim = P.k_t(P.t_elim(P.ax(f("T[a,s] C(s)")), x))
    moved = P.j_eq(ident, claim, z, f("C(z)"), "l")
    return P.t_intro(P.nec_kt(moved, a), u)


def example_trust_transfer_goal(st: SymbolTable) -> tuple[list[Formula], Formula]:
    f = lambda s: parse_formula(s, st)
    return [f("T[a,s] C(s)"), f("T[a,u] s = u")], f("T[a,u] C(u)")


def example_trust_transfer_negative(st: SymbolTable) -> tuple[list[Formula], Formula]:
    f = lambda s: parse_formula(s, st)
    return [f("~T[a,t] s = t"), f("T[a,u] s = u"), f("T[a,s] C(s)")], f("T[a,t] C(t)")


@dataclass
class ServiceCase:
    """The probabilistic-services example: behaviour, closure, chain and derivation."""

    symtab: SymbolTable
    facts: list
    closure: ProbTheory
    chain: list
    direct: tuple
    hypotheses: list
    goal: Formula
    literal_goal: Formula
    derivation: Derivation


def service_case(max_depth: int = 6, symtab: SymbolTable | None = None) -> ServiceCase:
    st = symtab or SymbolTable()
    facts = parse_behaviour(data_text("services.beh"), st)
    s, u, o1, o2 = st.vars("s u o1 o2")
    closure = sigma_prob_eq(facts, max_depth)
    final = ((Fraction(1, 4), o1), (Fraction(3, 4), o2))
    start_u, start_s = ((Fraction(1), u),), ((Fraction(1), s),)
    chain = closure.chain(start_u, final)
    if chain is None or not closure.contains(start_s, final):
        raise ValueError("closure too shallow for the service identities")
    enc = closure.encoder
    a = st.agent("a")
    steps = [enc.identity(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
    direct = enc.identity(start_s, final)
    hyps = list(lift_T(steps + [direct], a))
    Ls, Lu, Lf = enc.dist(start_s), enc.dist(start_u), enc.dist(final)

    taken = set(enc.avoid)
    for t in (Ls, Lu, Lf):
        taken |= vars_of_term(t)

    def fresh():
        v = fresh_var(taken)
        taken.add(v)
        return v

    z = fresh()
    y = fresh()
    acc = P.k_t(P.t_elim(P.ax(hyps[-1]), y))                 # y : Ls = Lf
    for h in reversed(hyps[:-1]):
        step = P.k_t(P.t_elim(P.ax(h), fresh()))             # x_i : d_i = d_{i+1}
        acc = P.j_eq(step, acc, z, Eq(Ls, z), "r")           # y : Ls = d_i
    d = P.t_intro(P.nec_kt(acc, a), Lu)
    goal = Trust(a, Lu, Eq(Ls, Lu))
    literal = Trust(a, u, Eq(s, u))
    return ServiceCase(st, facts, closure, chain, direct, hyps, goal, literal, d)


# ---------------------------------------------------------------------------
# The corpus


def necessity_of_identity_attempt(st: SymbolTable) -> Derivation:
    """s = t => K_a s = t by k-nec over a non-K context; the kernel must reject it."""
    a = st.agent("a")
    e = parse_formula("s = t", st)
    return Derivation("k-nec", (P.ax(e),), P.Sequent((e,), K(a, e)), {"agent": a})


def identity_beside_knowledge(st: SymbolTable, subst=None) -> Derivation:
    """s = t, P(s) & K_a P(z) => P(t) & K_a P(z): eq-subst stops at the K."""
    from .syntax import subst_ident

    subst = subst or subst_ident
    f = lambda s: parse_formula(s, st)
    s, t, z = st.vars("s t z")
    pattern = f("P(z) & K[a] P(z)")
    ident = P.ax(Eq(s, t))
    before = P.ax(subst(pattern, s, z))
    return Derivation(
        "eq-subst",
        (ident, before),
        P.Sequent((Eq(s, t), subst(pattern, s, z)), subst(pattern, t, z)),
        {"var": z, "pattern": pattern},
    )


def build_corpus(st: SymbolTable | None = None, service_depth: int = 6) -> list[CorpusEntry]:
    st = st or corpus_symtab()
    f = lambda s: parse_formula(s, st)
    a = st.agent("a")
    x, y, z, s, t, u, j, k = st.vars("x y z s t u j k")
    out = []

    def add(name, d, summary, table=st):
        out.append(CorpusEntry(name, d, summary, table))

    add("axiom", P.ax(f("P(x)")), "P(x) => P(x)")
    add("self-implication", P.imp_i(P.ax(f("P(x)")), f("P(x)")), "=> P(x) -> P(x)")
    add("identity-refl", P.eq_refl(s), "=> s = s")
    add("identity-chain", P.eq_sym(P.eq_trans(P.ax(f("s = t")), P.ax(f("t = u")))), "s = t, t = u => u = s")
    add("ex-falso", P.efq(P.ax(BOT), f("P(x)")), "bot => P(x)")
    add(
        "conjunction",
        P.and_i(P.and_e(P.ax(f("P(x) & Q(y)")), 2), P.and_e(P.ax(f("P(x) & Q(y)")), 1)),
        "P(x) & Q(y), P(x) & Q(y) => Q(y) & P(x)",
    )
    all_pq = f("forall x. (P(x) & Q(x))")
    add(
        "universal",
        P.all_i(P.and_e(P.all_e(P.ax(all_pq), y), 1), x, f("P(x)"), y),
        "forall x (P(x) & Q(x)) => forall x P(x)",
    )
    add("instance", P.all_e(P.ax(f("forall x. P(x)")), s), "forall x P(x) => P(s)")
    add("barcan", barcan(st), "=> forall x K_a P(x) -> K_a forall x P(x)")
    add("excluded-middle", excluded_middle(st), "=> ~(~forall x P(x) & ~~forall x P(x))")
    add(
        "k-distribution",
        P.k_dist(P.ax(f("K[a](P(x) -> Q(x))")), P.ax(f("K[a] P(x)"))),
        "K_a (P(x) -> Q(x)), K_a P(x) => K_a Q(x)",
    )
    add("negative-introspection", P.k_5(P.ax(f("~K[a] P(x)"))), "~K_a P(x) => K_a ~K_a P(x)")
    under = P.eq_subst(P.k_t(P.ax(f("K[a] s = t"))), P.k_t(P.ax(f("K[a] P(s)"))), z, f("P(z)"))
    add("identity-under-knowledge", P.k_nec(under, a), "K_a s = t, K_a P(s) => K_a P(t)")
    add("identity-beside-knowledge", identity_beside_knowledge(st), "s = t, P(s) & K_a P(z) => P(t) & K_a P(z)")
    add(
        "application",
        P.j_t(P.j_app(P.ax(f("j:(P(x) -> Q(x))")), P.ax(f("k:P(x)")))),
        "j:(P(x) -> Q(x)), k:P(x) => Q(x)",
    )
    add("proof-checker", P.j_bang(P.ax(f("j:P(x)"))), "j:P(x) => !j:(j:P(x))")
    add("trust-intro", P.t_intro(P.ax(f("K[a](j:P(s))")), s), "K_a j:P(s) => T^s_a P(s)")
    add(
        "trust-necessitation",
        P.nec_kt(P.j_t(P.k_t(P.t_elim(P.ax(f("T[a,s] P(s)")), x))), a),
        "T^s_a P(s) => K_a P(s)",
    )
    add(
        "structural",
        P.contr(P.dup(P.weak(P.ax(f("P(x)")), f("Q(y)")), f("Q(y)")), f("Q(y)")),
        "P(x), Q(y) => P(x)",
    )
    add("trust-transfer", example_trust_transfer(st), "T^u_a s = u, T^s_a C(s) => T^u_a C(u)")
    svc = service_case(service_depth)
    add("service-identity", svc.derivation, "lifted service identities => T_a (list-level s = u)", svc.symtab)
    return out

