import pytest

from trustlogic import proof as P
from trustlogic.corpus import (
    build_corpus,
    corpus_symtab,
    data_text,
    example_trust_transfer,
    example_trust_transfer_goal,
    identity_beside_knowledge,
    necessity_of_identity_attempt,
)
from trustlogic.proof import (
    RULES,
    Derivation,
    ProofFormatError,
    Sequent,
    UncheckedWitness,
    check,
    derives,
    desugar_trust,
    dump_derivation,
    load_derivations,
)
from trustlogic.syntax import BOT, Forall, Just, K, Trust, parse_formula, subst_quant


@pytest.fixture
def st():
    return corpus_symtab()


def f(text, st):
    return parse_formula(text, st)


def test_rule_table_has_every_tag():
    assert len(RULES) == len(set(RULES)) == 29


@pytest.mark.parametrize("entry", build_corpus(), ids=lambda e: e.name)
def test_corpus_entry_checks(entry):
    assert check(entry.derivation).ok, check(entry.derivation).describe()


def test_corpus_covers_every_rule():
    used = {n.rule for e in build_corpus() for n in e.derivation.nodes()}
    assert used == set(RULES)


def test_axiom_shape(st):
    bad = Derivation("ax", (), Sequent((f("P(x)", st),), f("Q(x)", st)))
    r = check(bad)
    assert r.kind == "SchemaMismatch" and r.rule == "ax"


def test_wrong_premise_count(st):
    d = P.ax(f("P(x)", st))
    bad = Derivation("imp-e", (d,), d.conclusion)
    assert check(bad).kind == "SchemaMismatch"


def test_unknown_rule(st):
    assert check(Derivation("cut", (), Sequent((), BOT))).kind == "SchemaMismatch"


def test_failure_path_points_at_node(st):
    inner = Derivation("ax", (), Sequent((), f("P(x)", st)))
    d = P.imp_i(P.weak(inner, f("Q(y)", st)), f("Q(y)", st))
    r = check(d)
    assert not r.ok and r.path == (0, 0) and "root.0.0" in r.describe()


def test_imp_rules(st):
    pq = f("P(x) -> Q(x)", st)
    d = P.imp_e(P.ax(pq), P.ax(f("P(x)", st)))
    assert check(d).ok
    bad = P.imp_e(P.ax(pq), P.ax(f("Q(x)", st)))
    assert check(bad).kind == "SchemaMismatch"


def test_efq_only_for_atoms(st):
    assert check(P.efq(P.ax(BOT), f("s = t", st))).ok
    assert check(P.efq(P.ax(BOT), f("K[a] P(x)", st))).kind == "SchemaMismatch"


def test_dne(st):
    assert check(P.dne(P.ax(f("~~P(x)", st)))).ok


def test_all_i_eigenvariable_in_context(st):
    d = P.all_i(P.ax(f("P(y)", st)), st.var("x"), f("P(x)", st), st.var("y"))
    r = check(d)
    assert r.kind == "SideConditionViolated" and "context" in r.message


def test_all_i_eigenvariable_free_in_conclusion(st):
    # |- forall x. x = y would follow from y = y by reading y as its own eigenvariable
    x, y = st.vars("x y")
    d = P.all_i(P.eq_refl(y), x, f("x = y", st), y)
    assert check(d).kind == "SideConditionViolated"


def test_all_i_wrong_instance(st):
    x, y = st.vars("x y")
    d = P.all_i(P.eq_refl(y), x, f("P(x)", st), y)
    assert check(d).kind == "SubstitutionMismatch"


def test_corrupted_eigenvariable_is_caught(st):
    entry = next(e for e in build_corpus(st) if e.name == "universal")
    s, y = st.vars("s y")

    def rename(node):
        prem = tuple(rename(p) for p in node.premises)
        ctx = tuple(subst_quant(a, s, y) for a in node.conclusion.context)
        concl = subst_quant(node.conclusion.conclusion, s, y)
        params = {k: (s if v == y else v) for k, v in node.params.items()}
        return Derivation(node.rule, prem, Sequent(ctx, concl), params)

    renamed = rename(entry.derivation)
    assert check(renamed).ok
    # the same tree with s assumed in context under the all-i node
    hyp = f("P(s)", st)
    premise = P.weak(renamed.premises[0], hyp)
    root = renamed.conclusion
    bad = Derivation("all-i", (premise,), Sequent(root.context + (hyp,), root.conclusion), renamed.params)
    r = check(bad)
    assert r.kind == "SideConditionViolated" and r.rule == "all-i" and r.path == ()


def test_all_e(st):
    d = P.all_e(P.ax(f("forall x. P(x)", st)), st.var("s"))
    assert check(d).ok
    bad = Derivation("all-e", d.premises, Sequent(d.conclusion.context, f("P(t)", st)), d.params)
    assert check(bad).kind == "SubstitutionMismatch"


def test_identity_rules(st):
    assert check(P.eq_sym(P.ax(f("s = t", st)))).ok
    bad = P.eq_trans(P.ax(f("s = t", st)), P.ax(f("u = s", st)))
    assert check(bad).kind == "SchemaMismatch"


def test_eq_subst_stops_at_knowledge(st):
    assert check(identity_beside_knowledge(st)).ok
    from trustlogic.syntax import subst_quant as sq

    r = check(identity_beside_knowledge(st, sq))
    assert r.kind == "SubstitutionMismatch"


def test_necessitation_needs_modal_context(st):
    r = check(necessity_of_identity_attempt(st))
    assert r.kind == "SideConditionViolated"


def test_nec_kt_accepts_trust_context(st):
    d = P.nec_kt(P.j_t(P.k_t(P.t_elim(P.ax(f("T[a,s] P(s)", st)), st.var("x")))), st.agent("a"))
    assert check(d).ok
    assert check(P.k_nec(d.premises[0], st.agent("a"))).kind == "SideConditionViolated"


def test_t_elim_eigenvariable(st):
    d = P.t_elim(P.ax(f("T[a,s] P(s)", st)), st.var("s"))
    assert check(d).kind == "SideConditionViolated"


def test_t_intro_subject_must_occur(st):
    d = P.t_intro(P.ax(f("K[a] j : P(s)", st)), st.var("t"))
    assert not check(d).ok


def test_justification_rules(st):
    assert check(P.j_bang(P.ax(f("j : P(x)", st)))).ok
    bad = P.j_app(P.ax(f("j : (P(x) -> Q(x))", st)), P.ax(f("k : Q(x)", st)))
    assert check(bad).kind == "SchemaMismatch"


def test_j_eq_keeps_evidence(st):
    d = P.j_eq(P.ax(f("k : s = t", st)), P.ax(f("j : P(s)", st)), st.var("z"), f("P(z)", st), "l")
    assert check(d).ok and d.conclusion.conclusion == f("j : P(t)", st)
    r = P.j_eq(P.ax(f("k : t = s", st)), P.ax(f("j : P(s)", st)), st.var("z"), f("P(z)", st), "r")
    assert check(r).ok and r.conclusion.conclusion == f("j : P(t)", st)
    bad = Derivation("j-eq-l", d.premises, Sequent(d.conclusion.context, f("k : P(t)", st)), d.params)
    assert check(bad).kind == "SchemaMismatch"


def test_structural_rules(st):
    p, q = f("P(x)", st), f("Q(y)", st)
    assert check(P.weak(P.ax(p), q, q)).ok
    assert check(P.contr(P.weak(P.ax(p), p), p)).ok
    drop = Derivation("contr", (P.weak(P.ax(p), q),), Sequent((p,), p))
    assert check(drop).kind == "SchemaMismatch"


def test_partial_replacement_eq_subst_is_unsound(st):
    # the kernel accepts R(t, s) from s = t and R(s, s), but uniform replacement
    # in models only guarantees R(t, t)
    from trustlogic.semantics import eval_formula, make_model, validate_model

    d = P.eq_subst(P.ax(f("s = t", st)), P.ax(f("R(s, s)", st)), st.var("z"), f("R(z, s)", st))
    assert check(d).ok and d.conclusion.conclusion == f("R(t, s)", st)
    s, t = st.vars("s t")
    m = make_model(
        ("w",), {st.agent("a"): set()}, (), ("d0", "d1"), {s: "d0", t: "d1"},
        eq={"w": {("d0", "d1")}}, pred={"w": {"R": {("d0", "d0")}}}, symtab=st,
    )
    assert validate_model(m) == []
    assert all(eval_formula(m, "w", None, h) for h in d.conclusion.context)
    assert not eval_formula(m, "w", None, d.conclusion.conclusion)


def test_example_derives_goal(st):
    hyps, goal = example_trust_transfer_goal(st)
    assert derives(hyps, goal, example_trust_transfer(st))
    assert not derives(hyps[:1], goal, example_trust_transfer(st))


def test_derives_rejects_bad_witness(st):
    with pytest.raises(UncheckedWitness):
        derives([], BOT, Derivation("ax", (), Sequent((), BOT)))


def test_desugar_removes_trust(st):
    res = desugar_trust(example_trust_transfer(st))
    assert res.report.ok
    for node in res.derivation.nodes():
        assert node.rule not in ("t-intro", "t-elim", "nec-kt")
        for a in node.conclusion.context + (node.conclusion.conclusion,):
            assert not isinstance(a, Trust)


def test_proof_file_round_trip(st):
    ds = load_derivations(data_text("transfer.proof"), st)
    assert len(ds) == 1 and check(ds[0]).ok
    again = load_derivations(dump_derivation(ds[0], st), st)
    assert again[0].conclusion == ds[0].conclusion and check(again[0]).ok


@pytest.mark.parametrize(
    "text",
    [
        "",
        "(ax",
        "(cut (seq () \"P(x)\"))",
        "(ax (params (bogus \"x\")) (seq (\"P(x)\") \"P(x)\"))",
        "(all-i (params (eigen \"j k\")) (seq () \"P(x)\"))",
        "(ax)",
    ],
)
def test_proof_file_errors(text, st):
    with pytest.raises(ProofFormatError):
        load_derivations(text, st)


def test_example_file_matches_builder(st):
    ds = load_derivations(data_text("transfer.proof"), st)
    assert ds[0].conclusion.same(example_trust_transfer(st).conclusion)
    assert isinstance(ds[0].conclusion.conclusion, Trust)
    assert isinstance(ds[0].premises[0].conclusion.conclusion, K)
    assert isinstance(ds[0].premises[0].premises[0].conclusion.conclusion, Just)
    assert not isinstance(ds[0].conclusion.conclusion, Forall)
