import pytest

from trustlogic.corpus import data_text
from trustlogic.semantics import (
    DepthExhausted,
    ModelFormatError,
    RandomModelParams,
    UnknownAgent,
    UnknownState,
    UnknownTerm,
    build_hyper_counterexample,
    build_intensional_counterexample,
    consequence,
    countermodel_states,
    dump_model,
    e_member,
    eval_formula,
    load_model,
    make_model,
    random_model,
    valid_in,
    validate_model,
)
from trustlogic.syntax import App, SymbolTable, parse_formula, subst_quant


@pytest.fixture
def st():
    return SymbolTable()


def f(text, st):
    return parse_formula(text, st)


def one_state(st, table, eq=(), pred=None, evidence=None, domain=("d0", "d1")):
    a = st.agent("a")
    return make_model(
        ("w",), {a: set()}, (), domain, table, eq={"w": set(eq)}, pred={"w": pred or {}}, evidence={"w": evidence or {}}, symtab=st
    )


def test_shipped_models_validate(st):
    for name in ("hyper.model", "intensional.model"):
        assert validate_model(load_model(data_text(name), SymbolTable())) == []


def test_hyper_counterexample(st):
    m = build_hyper_counterexample(st)
    assert eval_formula(m, "w", None, f("j : (P(x) & Q(y))", st))
    assert not eval_formula(m, "w", None, f("j : P(x)", st))
    assert validate_model(m) == []


def test_intensional_counterexample(st):
    m = build_intensional_counterexample(st)
    assert eval_formula(m, "w", None, f("s = t", st))
    assert eval_formula(m, "w", None, f("K[a] P(t)", st))
    assert not eval_formula(m, "w", None, f("K[a] P(s)", st))


def test_evidence_application_and_bang(st):
    x = st.var("x")
    j, k = st.vars("j k")
    st.register_pred("P", 1)
    st.register_pred("Q", 1)
    ev = {j: {f("P(x) -> Q(x)", st)}, k: {f("P(x)", st)}}
    m = one_state(st, {x: "d0", j: "d0", k: "d0"}, pred={"P": {("d0",)}, "Q": {("d0",)}}, evidence=ev)
    assert e_member(m, "w", App(j, k), f("Q(x)", st))
    assert not e_member(m, "w", App(k, j), f("Q(x)", st))
    assert eval_formula(m, "w", None, f("!k : k : P(x)", st))


def test_justified_identities_rewrite_evidence(st):
    s, t, j, k = st.vars("s t j k")
    st.register_pred("P", 1)
    ev = {k: {f("s = t", st)}, j: {f("P(s)", st)}}
    m = one_state(st, {s: "d0", t: "d0", j: "d0", k: "d0"}, pred={"P": {("d0",)}}, evidence=ev, domain=("d0",))
    assert e_member(m, "w", j, f("P(t)", st))


def test_evidence_is_monotone_along_gamma(st):
    x, j = st.vars("x j")
    st.register_pred("P", 1)
    a = st.agent("a")
    m = make_model(
        ("w", "v"), {a: set()}, {("w", "v")}, ("d0",), {x: "d0", j: "d0"},
        pred={"w": {"P": {("d0",)}}, "v": {"P": {("d0",)}}},
        evidence={"w": {j: {f("P(x)", st)}}},
        symtab=st,
    )
    assert e_member(m, "v", j, f("P(x)", st))
    assert validate_model(m) == []


def test_justification_is_factive_over_gamma(st):
    x, j = st.vars("x j")
    st.register_pred("P", 1)
    a = st.agent("a")
    m = make_model(
        ("w", "v"), {a: set()}, {("w", "v")}, ("d0",), {x: "d0", j: "d0"},
        pred={"w": {"P": {("d0",)}}},
        evidence={"w": {j: {f("P(x)", st)}}},
        symtab=st,
    )
    assert not eval_formula(m, "w", None, f("j : P(x)", st))


def test_trust_needs_table_witness(st):
    s, j = st.vars("s j")
    st.register_pred("C", 1)
    m = one_state(st, {s: "d0", j: "d0"}, pred={"C": {("d0",)}}, evidence={j: {f("C(s)", st)}}, domain=("d0",))
    assert eval_formula(m, "w", None, f("T[a, s] C(s)", st))
    m2 = one_state(st, {s: "d0", j: "d0"}, pred={"C": {("d0",)}}, domain=("d0",))
    assert not eval_formula(m2, "w", None, f("T[a, s] C(s)", st))
    assert eval_formula(m2, "w", None, f("K[a] C(s)", st))


def test_consequence_and_validity(st):
    m = build_intensional_counterexample(st)
    assert valid_in(m, f("P(t) -> P(t)", st))
    assert not consequence(m, [f("s = t", st)], f("K[a] s = t", st))
    assert countermodel_states(m, [f("s = t", st)], f("K[a] s = t", st)) == ["w"]


def test_errors(st):
    m = build_intensional_counterexample(st)
    with pytest.raises(UnknownTerm, match="zz"):
        eval_formula(m, "w", None, f("P(zz)", st))
    with pytest.raises(UnknownState):
        eval_formula(m, "nowhere", None, f("P(t)", st))
    with pytest.raises(UnknownAgent):
        eval_formula(m, "w", None, f("K[b] P(t)", st))


def test_depth_bound(st):
    j, x = st.vars("j x")
    st.register_pred("P", 1)
    m = one_state(st, {j: "d0", x: "d0"}, pred={"P": {("d0",)}}, domain=("d0",))
    deep = f("((((j j) j) j) j) : P(x)", st)
    with pytest.raises(DepthExhausted):
        eval_formula(m, "w", None, deep, depth=2)
    assert not eval_formula(m, "w", None, deep, depth=6)


def test_random_models_are_deterministic_and_valid(st):
    x, y, j = st.vars("x y j")
    st.register_pred("P", 1)
    params = RandomModelParams([x, y, j], [st.agent("a")], {"P": 1}, [j], [f("P(x)", st)])
    for seed in range(20):
        m = random_model(params, seed, st)
        assert validate_model(m) == []
        assert dump_model(m, st) == dump_model(random_model(params, seed, st), st)


def test_model_file_round_trip():
    st = SymbolTable()
    m = load_model(data_text("hyper.model"), st)
    st2 = SymbolTable()
    again = load_model(dump_model(m, st), st2)
    assert dump_model(again, st2) == dump_model(m, st)


@pytest.mark.parametrize(
    "text",
    ["", "(model", "(world)", "(model (states w) (colour w))", "(model (states w) (eq))", "(model (gamma-rel (w)))"],
)
def test_model_format_errors(text, st):
    with pytest.raises(ModelFormatError):
        load_model(text, st)


VALID_MODEL = """(model (states w v) (agent-rel a (w w) (v v)) (gamma-rel (w w) (v v) (w v))
  (domain d0 d1) (term-table ("x" d0) ("j" d0) ("y" d1))
  (eq w (d0 d0) (d1 d1)) (eq v (d0 d0) (d1 d1))
  (pred w P (d0)) (pred v P (d0))
  (evidence w ("j" "P(x)")) (evidence v ("j" "P(x)")))"""


@pytest.mark.parametrize(
    "old, new, code",
    [
        ("(agent-rel a (w w) (v v))", "(agent-rel a (v v))", "agent-reflexive"),
        ("(gamma-rel (w w) (v v) (w v))", "(gamma-rel (w w) (w v))", "gamma-reflexive"),
        ("(eq w (d0 d0) (d1 d1))", "(eq w (d0 d0) (d1 d1) (d0 d1))", "eq-symmetric"),
        ("(eq v (d0 d0) (d1 d1))", "(eq v (d0 d0))", "eq-reflexive"),
        ("(eq w (d0 d0) (d1 d1))", "(eq w (d0 d0) (d1 d1) (d0 d1) (d1 d0))", "pred-uniform"),
        ("(evidence v (\"j\" \"P(x)\"))", "", "evidence-monotone"),
        ("(\"y\" d1)", "", "domain-undenoted"),
        ("(\"y\" d1)", "(\"y\" d7)", "table-range"),
    ],
)
def test_validator_reports(old, new, code):
    assert validate_model(load_model(VALID_MODEL, SymbolTable())) == []
    assert old in VALID_MODEL
    m = load_model(VALID_MODEL.replace(old, new), SymbolTable())
    assert code in {v.code for v in validate_model(m)}


def test_identity_evidence_rule_fails_on_co_denoting_seed(st):
    # k : s = t holds through the co-denoting s2; j : P(s) holds; j : P(t) fails
    s, s2, t, j, k = st.vars("s s2 t j k")
    st.register_pred("P", 1)
    ev = {k: {f("s2 = t", st)}, j: {f("P(s)", st)}}
    table = {s: "d0", s2: "d0", t: "d1", j: "d0", k: "d0"}
    m = one_state(st, table, eq={("d0", "d1"), ("d1", "d0"), ("d0", "d0"), ("d1", "d1")}, pred={"P": {("d0",), ("d1",)}}, evidence=ev)
    assert validate_model(m) == []
    assert eval_formula(m, "w", None, f("k : s = t", st))
    assert eval_formula(m, "w", None, f("j : P(s)", st))
    assert not eval_formula(m, "w", None, f("j : P(t)", st))


def test_variant_agreement_fails_for_justifications(st):
    # under the x-variant, x itself co-denotes s and witnesses the seed P(x)
    x, s, j = st.vars("x s j")
    st.register_pred("P", 1)
    m = one_state(st, {x: "d1", s: "d0", j: "d0"}, pred={"P": {("d0",), ("d1",)}}, evidence={j: {f("P(x)", st)}})
    A = f("j : P(x)", st)
    g = dict(m.term_table)
    variant = dict(g)
    variant[x] = g[s]
    assert eval_formula(m, "w", variant, A)
    assert not eval_formula(m, "w", g, subst_quant(A, s, x))


def test_variant_agreement_holds_without_justifications(st):
    x, s = st.vars("x s")
    st.register_pred("P", 1)
    m = one_state(st, {x: "d1", s: "d0"}, pred={"P": {("d0",)}})
    A = f("P(x) & forall y. (P(y) -> P(x))", st)
    g = dict(m.term_table)
    variant = dict(g)
    variant[x] = g[s]
    assert eval_formula(m, "w", variant, A) == eval_formula(m, "w", g, subst_quant(A, s, x))
