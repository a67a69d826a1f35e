import random

from trustlogic.corpus import build_corpus
from trustlogic.fuzz import (
    derivation_formulas,
    random_formula,
    sequents_to_check,
    soundness_fuzz,
    variant_property,
    vocabulary,
)
from trustlogic.syntax import Agent, Var, check_trust_subjects


def test_vocabulary_collects_terms_and_predicates():
    entry = next(e for e in build_corpus() if e.name == "application")
    vocab = vocabulary(derivation_formulas(entry.derivation))
    assert set(vocab.predicates) == {"P", "Q"}
    assert entry.symtab.var("j") in vocab.evidence_terms


def test_trust_elimination_trees_check_only_the_root():
    corpus = {e.name: e for e in build_corpus()}
    assert sequents_to_check(corpus["trust-transfer"]) == [corpus["trust-transfer"].derivation.conclusion]
    assert len(sequents_to_check(corpus["barcan"])) > 1


def test_random_formulas_respect_trust_subjects():
    rng = random.Random(1)
    vs = [Var(i) for i in range(4)]
    for _ in range(300):
        a = random_formula(rng, vs, vs[:2], {"P": 1, "R": 2}, [Agent(0)], vs[2:], 3)
        check_trust_subjects(a)


def test_small_soundness_run_is_clean():
    report = soundness_fuzz(build_corpus(), models=20, seed=7)
    assert report.ok and report.premises_met > 0


def test_variant_failures_all_involve_justification():
    for seed in range(3):
        report = variant_property(200, seed)
        assert report.failures_with_justification == len(report.failures)


def test_variant_property_is_deterministic():
    a, b = variant_property(100, 4), variant_property(100, 4)
    assert [(c.model_seed, c.state) for c in a.failures] == [(c.model_seed, c.state) for c in b.failures]
    assert a.cases == b.cases
