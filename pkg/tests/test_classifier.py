"""Classification, inference claims, and the neighbourhood cross-check.

The classifier keeps the default outcome exactly when the default
argument survives in the grounded extension. The induced claim relation
is complete and consistent. Whenever the nearest stored cases agree on
one outcome, the prediction must agree with them, and dropping cases
the query does not cover must never move a conclusion.
"""

import pytest

from aacbr import (
    AgreementCheckFailed,
    Case,
    Characterisation,
    GeneratorConfig,
    IncoherentCasebase,
    Statement,
    check_nearest_agreement,
    gen_casebase,
    geq,
    infer,
    nearest_cases,
    predict,
    validate_casebase,
)

ch = Characterisation.of
DEFAULT = Case("default", Characterisation.empty(), "-")


def build(*cases, nondefault="+"):
    return validate_casebase(cases, DEFAULT, nondefault)


def feedback_casebase():
    return build(
        Case("a", ch("a"), "+"),
        Case("c", ch("c"), "+"),
        Case("ab", ch("a", "b"), "-"),
        Case("cz", ch("c", "z"), "-"),
    )


def all_queries(universe):
    masks = range(2 ** len(universe))
    return [
        Characterisation(frozenset(f for i, f in enumerate(universe) if m >> i & 1))
        for m in masks
    ]


def seeded_casebases(count, base_seed):
    for t in range(count):
        size = 3 + t % 3
        universe = tuple(f"f{i}" for i in range(size))
        cb = gen_casebase(
            GeneratorConfig(
                feature_universe=universe,
                case_count=min(4 + t % 8, 2**size - 1),
                seed=base_seed + t,
            )
        )
        yield cb, universe


class TestPredict:
    def test_a_covered_case_overturns_the_default(self):
        cb = build(Case("c0", ch("hm"), "+"))
        p = predict(cb, ch("hm", "sd"))
        assert p.outcome == "+"
        assert not p.default_in_grounded
        assert {a.id for a in p.grounded.members} == {"c0", "new"}

    def test_a_more_specific_counterexample_restores_the_default(self):
        cb = build(Case("c0", ch("hm"), "+"), Case("c1", ch("hm", "sd"), "-"))
        p = predict(cb, ch("hm", "sd"))
        assert p.outcome == "-"
        assert p.default_in_grounded
        assert {a.id for a in p.grounded.members} == {"c1", "default", "new"}

    def test_empty_casebase_keeps_the_default(self):
        cb = validate_casebase([], DEFAULT, "+")
        assert predict(cb, ch("anything")).outcome == "-"

    def test_empty_query_keeps_the_default(self):
        assert predict(feedback_casebase(), ch()).outcome == "-"

    def test_feedback_makes_the_plain_engine_order_dependent(self):
        cb = feedback_casebase()
        n1, n2 = ch("a", "b", "c"), ch("a", "b", "c", "z")
        assert predict(cb, n1).outcome == "+"
        assert predict(cb, n2).outcome == "-"
        grown = cb.with_case(Case("abc", n1, "+"))
        assert predict(grown, n2).outcome == "+"

    def test_outcome_mirrors_default_membership(self):
        for cb, universe in seeded_casebases(20, base_seed=8100):
            for n in all_queries(universe):
                p = predict(cb, n)
                expected = cb.default_outcome if p.default_in_grounded else cb.nondefault_outcome
                assert p.outcome == expected

    def test_incoherence_is_flagged_on_the_prediction(self):
        cb = build(Case("c0", ch("a"), "+"), Case("c1", ch("a"), "-"))
        p = predict(cb, ch("a", "b"))
        assert p.incoherent
        assert predict(feedback_casebase(), ch("a")).incoherent is False

    def test_querying_a_stored_characterisation_is_allowed(self):
        cb = build(Case("c0", ch("hm"), "+"), Case("c1", ch("hm", "sd"), "-"))
        assert predict(cb, ch("hm")).outcome == "+"


class TestInfer:
    def test_plain_claim(self):
        cb = build(Case("c0", ch("hm"), "+"))
        assert infer(cb, Statement(ch("hm", "sd"), "+"))
        assert not infer(cb, Statement(ch("hm", "sd"), "-"))

    def test_negated_claim(self):
        cb = build(Case("c0", ch("hm"), "+"))
        assert infer(cb, Statement(ch("hm", "sd"), "-", negated=True))
        assert not infer(cb, Statement(ch("hm", "sd"), "+", negated=True))

    def test_exactly_one_outcome_is_inferred(self):
        for cb, universe in seeded_casebases(15, base_seed=8200):
            for n in all_queries(universe):
                holds = [infer(cb, Statement(n, y)) for y in cb.outcomes]
                assert sum(holds) == 1
                for y in cb.outcomes:
                    assert infer(cb, Statement(n, y, negated=True)) != infer(
                        cb, Statement(n, y)
                    )


class TestNearestAgreement:
    def test_unanimous_neighbourhood_confirms_the_prediction(self):
        cb = feedback_casebase()
        assert check_nearest_agreement(cb, ch("a", "b", "c", "z")) == "-"

    def test_split_neighbourhood_is_inconclusive(self):
        cb = feedback_casebase()
        assert check_nearest_agreement(cb, ch("a", "b", "c")) is None

    def test_empty_neighbourhood_is_inconclusive(self):
        cb = build(Case("c0", ch("a"), "+"))
        assert check_nearest_agreement(cb, ch("b")) is None

    def test_requires_a_coherent_casebase(self):
        cb = build(Case("c0", ch("a"), "+"), Case("c1", ch("a"), "-"))
        with pytest.raises(IncoherentCasebase):
            check_nearest_agreement(cb, ch("a"))

    def test_agreement_holds_on_seeded_casebases(self):
        unanimous = 0
        for cb, universe in seeded_casebases(60, base_seed=8300):
            for n in all_queries(universe):
                got = check_nearest_agreement(cb, n)  # AgreementCheckFailed on bugs
                if got is not None:
                    unanimous += 1
                    outcomes = {c.outcome for c in nearest_cases(cb, n)}
                    assert outcomes == {got}
        assert unanimous > 100  # the check must actually bite


class TestLocality:
    def test_cases_outside_the_query_never_matter(self):
        for cb, universe in seeded_casebases(25, base_seed=8400):
            for n in all_queries(universe):
                full = predict(cb, n).outcome
                inside = cb.restricted_to(n)
                assert predict(inside, n).outcome == full

    def test_adding_an_uncovered_case_changes_nothing(self):
        cb = feedback_casebase()
        n = ch("a", "b")
        before = predict(cb, n).outcome
        for extra, outcome in [(ch("q"), "+"), (ch("a", "z"), "-"), (ch("b", "c", "z"), "+")]:
            assert not geq(n, extra)
            grown = cb.with_case(Case("extra", extra, outcome))
            assert predict(grown, n).outcome == before
