from fractions import Fraction

import pytest

from trustlogic.corpus import data_text, service_case
from trustlogic.syntax import Eq, K, Pred, SymbolTable, Trust, parse_formula, parse_term
from trustlogic.theory import (
    DistEncoder,
    MassError,
    ProbFact,
    format_theory,
    lift_K,
    lift_T,
    parse_behaviour,
    parse_theory,
    reduct_distribution,
    sigma_lambda_eq,
    sigma_prob_eq,
    sigma_star,
    sigma_step,
)


@pytest.fixture
def st():
    return SymbolTable()


def test_sigma_step_records_one_step_reducts(st):
    term = parse_term("(\\x. x) ((\\y. y) z)", st)
    th = sigma_step([term], 5)
    assert Pred("step", (term, parse_term("(\\y. y) z", st))) in th
    assert not th.exhausted


def test_sigma_step_flags_cutoff(st):
    omega = parse_term("(\\w. w w w) (\\w. w w w)", st)
    assert sigma_step([omega], 2).exhausted


def test_sigma_star_is_reflexive_and_transitive(st):
    term = parse_term("(\\x. x) ((\\y. y) z)", st)
    star = sigma_star(sigma_step([term], 5))
    z = st.var("z")
    assert Pred("star", (term, z)) in star
    assert Pred("star", (z, z)) in star


def test_sigma_lambda_eq_needs_both_directions(st):
    omega = parse_term("(\\w. w w) (\\w. w w)", st)
    eqs = sigma_lambda_eq(sigma_step([omega], 3))
    assert Eq(omega, omega) in eqs
    term = parse_term("(\\x. x) z", st)
    assert len(sigma_lambda_eq(sigma_step([term], 3))) == 0


def test_probability_bounds(st):
    with pytest.raises(ValueError):
        ProbFact(st.var("s"), Fraction(0), st.var("t"))


def test_mass_error(st):
    facts = parse_behaviour("s |>1/2 o1\ns |>1/4 o2\n", st)
    with pytest.raises(MassError):
        sigma_prob_eq(facts, 2)


def test_behaviour_parse_errors(st):
    with pytest.raises(ValueError, match="line 1"):
        parse_behaviour("s -> o1\n", st)
    with pytest.raises(ValueError, match="zero denominator"):
        parse_behaviour("s |>1/0 o1\n", st)


def test_service_chain_is_found():
    case = service_case()
    assert case.chain[0] == ((Fraction(1), case.symtab.var("u")),)
    assert len(case.chain) >= 3
    assert case.closure.contains(((Fraction(1), case.symtab.var("s")),), case.chain[-1])
    assert case.direct in case.closure.theory


def test_closure_agrees_with_direct_distribution(st):
    facts = parse_behaviour(data_text("services.beh"), st)
    s, u, o1, o2 = st.vars("s u o1 o2")
    assert reduct_distribution(s, facts) == {o1: Fraction(1, 4), o2: Fraction(3, 4)}
    assert reduct_distribution(u, facts) == {o1: Fraction(1, 4), o2: Fraction(3, 4)}
    closure = sigma_prob_eq(facts, 6)
    for lhs, rhs, _ in closure.identities:
        assert _outcomes(lhs, facts) == _outcomes(rhs, facts)


def test_shallow_closure_is_marked_exhausted(st):
    facts = parse_behaviour(data_text("services.beh"), st)
    assert sigma_prob_eq(facts, 2).exhausted


def test_encoder_distinguishes_distributions(st):
    s, t = st.vars("s t")
    enc = DistEncoder([s, t])
    half = Fraction(1, 2)
    assert enc.dist(((half, s), (half, t))) != enc.dist(((half, t), (half, s)))


def test_lifts(st):
    a = st.agent("a")
    th = parse_theory("s = t\nP(s)\n", st)
    assert all(isinstance(f, K) for f in lift_K(th, a))
    lifted = list(lift_T(th, a))
    assert all(isinstance(f, Trust) for f in lifted)
    assert lifted[0].subject == st.var("s")


def test_theory_round_trip(st):
    th = parse_theory("s = t\n;; comment\nK[a] P(s)\n", st)
    assert parse_theory(format_theory(th, st), st) == th


def test_theory_parse_error_has_line(st):
    with pytest.raises(ValueError, match="line 2"):
        parse_theory("P(s)\nP(\n", st)


def _outcomes(dist, facts):
    out = {}
    for p, t in dist:
        for o, q in reduct_distribution(t, facts).items():
            out[o] = out.get(o, 0) + p * q
    return out
