import random

import pytest

from trustlogic.fuzz import random_lambda_term, random_redex_term
from trustlogic.lam import (
    FuelExhausted,
    alpha_key,
    church,
    encode_list,
    encode_pair,
    joinable,
    local_confluence,
    nil,
    normal_order_trace,
    pair_operator,
    projection,
    redexes,
    reduces_to,
    reducts,
    step,
    term_subst,
)
from trustlogic.syntax import App, Lam, SymbolTable, Var, free_vars_term, parse_term


@pytest.fixture
def st():
    return SymbolTable()


def t(text, st):
    return parse_term(text, st)


def test_substitution_avoids_capture(st):
    term = t("\\y. x y", st)
    out = term_subst(term, st.var("y"), st.var("x"))
    assert isinstance(out, Lam) and out.binder != st.var("y")
    assert out.body == App(st.var("y"), out.binder)


def test_substitution_stops_at_rebinding(st):
    term = t("\\x. x", st)
    assert term_subst(term, st.var("z"), st.var("x")) == term


def test_redexes_are_leftmost_outermost_first(st):
    term = t("(\\x. x) ((\\y. y) z)", st)
    paths = redexes(term)
    assert paths[0] == ()
    assert len(paths) == 2


def test_step_contracts_at_path(st):
    term = t("(\\x. x) ((\\y. y) z)", st)
    inner = [p for p in redexes(term) if p][0]
    assert step(term, inner) == t("(\\x. x) z", st)
    assert step(term, ()) == t("(\\y. y) z", st)


def test_reducts_deduplicate(st):
    term = t("(\\x. x) ((\\x. x) z)", st)
    assert reducts(term) == [t("(\\x. x) z", st)]


def test_normal_order_finds_normal_form(st):
    term = t("(\\x. \\y. y) ((\\w. w w) (\\w. w w)) z", st)
    trace, done = normal_order_trace(term, 10)
    assert done and trace[-1] == st.var("z")


def test_normal_order_reports_fuel(st):
    omega = t("(\\w. w w) (\\w. w w)", st)
    trace, done = normal_order_trace(omega, 5)
    assert not done and len(trace) == 6


def test_reduces_to(st):
    term = t("(\\x. x) ((\\y. y) z)", st)
    assert reduces_to(term, st.var("z"), 2)
    assert not reduces_to(term, st.var("q"), 5)


def test_reduces_to_raises_on_cutoff(st):
    term = t("(\\w. w w w) (\\w. w w w)", st)
    with pytest.raises(FuelExhausted):
        reduces_to(term, st.var("z"), 3)


def test_alpha_key(st):
    assert alpha_key(t("\\x. x", st)) == alpha_key(t("\\y. y", st))
    assert alpha_key(t("\\x. y", st)) != alpha_key(t("\\x. z", st))


def test_joinable_and_confluence(st):
    term = t("(\\x. x x) ((\\y. y) z)", st)
    rs = reducts(term)
    assert len(rs) == 2 and joinable(rs[0], rs[1], 10)
    assert local_confluence(term) == "ok"
    assert not joinable(st.var("y"), st.var("z"), 5)


def test_pair_projections(st):
    a, b = st.vars("a b")
    for i, want in ((1, a), (2, b)):
        term = App(App(App(pair_operator({a, b}), a), b), projection(i, {a, b}))
        trace, done = normal_order_trace(term, 20)
        assert done and trace[-1] == want


def test_encode_pair_is_the_normal_form(st):
    a, b = st.vars("a b")
    trace, _ = normal_order_trace(App(App(pair_operator({a, b}), a), b), 10)
    assert alpha_key(trace[-1]) == alpha_key(encode_pair(a, b))


def test_encode_list_nests_pairs(st):
    a, b = st.vars("a b")
    lst = encode_list([a, b], {a, b})
    head = App(lst, projection(1, {a, b}))
    trace, done = normal_order_trace(head, 10)
    assert done and trace[-1] == a
    assert alpha_key(encode_list([])) == alpha_key(nil())


def test_church_numerals():
    f, x = Var(0), Var(1)
    assert church(0) == Lam(f, Lam(x, x))
    assert church(2) == Lam(f, Lam(x, App(f, App(f, x))))


def test_random_terms_have_requested_size():
    rng = random.Random(3)
    vs = [Var(i) for i in range(3)]
    for n in range(1, 12):
        term = random_lambda_term(rng, n, vs)
        assert _size(term) == n


def test_random_redex_terms_stay_confluent():
    rng = random.Random(5)
    vs = [Var(i) for i in range(3)]
    outcomes = [local_confluence(random_redex_term(rng, 10, vs), 20) for _ in range(100)]
    assert "fail" not in outcomes


def test_free_variables_survive_reduction(st):
    term = t("(\\x. y) z", st)
    trace, _ = normal_order_trace(term, 5)
    assert free_vars_term(trace[-1]) == {st.var("y")}


def _size(term):
    if isinstance(term, Var):
        return 1
    if isinstance(term, App):
        return 1 + _size(term.fn) + _size(term.arg)
    return 1 + _size(term.body)
