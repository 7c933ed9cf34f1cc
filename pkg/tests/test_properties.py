"""The seeded generator and the property-audit harness.

Generation must be a pure function of the seed; the harness must flag
the plain engine's order dependence (the bundled fixture guarantees at
least one hit), stay silent on the cumulative engine, and produce
counterexamples that replay.
"""

import pytest

from aacbr import (
    Case,
    Characterisation,
    GeneratorConfig,
    SplitMix64,
    UniverseTooSmall,
    cautious_monotonicity_fixture,
    check_lemma_locality,
    check_property,
    gen_casebase,
    learn_concise,
    predict,
    predict_cumulative,
)

UNIVERSE4 = ("f0", "f1", "f2", "f3")
FIXTURE_UNIVERSE = ("a", "b", "c", "z")


class TestSplitMix64:
    def test_reference_stream_for_seed_zero(self):
        # Matches the published reference outputs of splitmix64.
        r = SplitMix64(0)
        assert [r.next() for _ in range(3)] == [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
        ]

    def test_reference_stream_for_seed_1234567(self):
        r = SplitMix64(1234567)
        assert [r.next() for _ in range(3)] == [
            0x599ED017FB08FC85,
            0x2C73F08458540FA5,
            0x883EBCE5A3F27C77,
        ]

    def test_outputs_stay_in_64_bits(self):
        r = SplitMix64(2**64 - 1)
        assert all(0 <= r.next() < 2**64 for _ in range(100))


class TestGenerator:
    def test_deterministic_in_the_seed(self):
        cfg = GeneratorConfig(UNIVERSE4, 9, seed=123)
        assert gen_casebase(cfg) == gen_casebase(cfg)

    def test_different_seeds_differ(self):
        a = gen_casebase(GeneratorConfig(UNIVERSE4, 9, seed=1))
        b = gen_casebase(GeneratorConfig(UNIVERSE4, 9, seed=2))
        assert a != b

    def test_coherent_with_distinct_characterisations(self):
        for seed in range(30):
            cb = gen_casebase(GeneratorConfig(UNIVERSE4, 10, seed=seed))
            assert cb.coherent
            chars = [c.characterisation for c in cb.cases]
            assert len(chars) == len(set(chars))

    def test_saturation_reaches_every_characterisation(self):
        cb = gen_casebase(GeneratorConfig(UNIVERSE4, 16, seed=99))
        chars = {c.characterisation for c in cb.cases}
        chars.add(cb.default_case.characterisation)
        assert len(chars) == 16
        assert cb.coherent

    def test_count_beyond_the_universe_rejected(self):
        with pytest.raises(UniverseTooSmall):
            gen_casebase(GeneratorConfig(("f0", "f1", "f2"), 9, seed=0))

    def test_tiny_universe_rejected(self):
        with pytest.raises(UniverseTooSmall):
            gen_casebase(GeneratorConfig(("f0", "f1"), 2, seed=0))

    def test_oversized_universe_rejected(self):
        with pytest.raises(ValueError):
            gen_casebase(GeneratorConfig(tuple(f"f{i}" for i in range(9)), 4, seed=0))

    def test_identical_labels_rejected(self):
        with pytest.raises(ValueError):
            gen_casebase(
                GeneratorConfig(UNIVERSE4, 4, default_outcome_label="x", other_outcome_label="x")
            )


def fixture_trial(engine, property_name, trials=0):
    cb, _, _ = cautious_monotonicity_fixture()
    cfg = GeneratorConfig(tuple(f"f{i}" for i in range(4)), 6, seed=0)
    return check_property(
        engine,
        property_name,
        cfg,
        trials,
        exhaustive=True,
        fixtures=[(cb, FIXTURE_UNIVERSE)],
    )


class TestPropertyChecks:
    def test_plain_engine_trips_on_the_fixture(self):
        report = fixture_trial("plain", "cautious_monotonicity")
        assert not report.ok
        hits = {
            (v.added.characterisation, v.query.characterisation, v.before, v.after)
            for v in report.violations
        }
        assert (
            Characterisation.of("a", "b", "c"),
            Characterisation.of("a", "b", "c", "z"),
            "-",
            "+",
        ) in hits

    def test_cut_and_rational_monotonicity_trip_alongside(self):
        cm = fixture_trial("plain", "cautious_monotonicity")
        cut = fixture_trial("plain", "cut")
        rm = fixture_trial("plain", "rational_monotonicity")
        strip = lambda rep: {
            (v.added.characterisation, v.query.characterisation) for v in rep.violations
        }
        assert strip(cm) == strip(cut) == strip(rm)

    def test_cumulative_engine_passes_the_fixture(self):
        for prop in ("cautious_monotonicity", "cut", "rational_monotonicity", "cumulativity"):
            assert fixture_trial("cumulative", prop).ok

    def test_both_engines_are_complete_and_consistent(self):
        cfg = GeneratorConfig(UNIVERSE4, 7, seed=77)
        for engine in ("plain", "cumulative"):
            for prop in ("completeness", "consistency"):
                report = check_property(engine, prop, cfg, 10, exhaustive=True)
                assert report.ok
                assert report.instances > 0

    def test_counterexamples_replay(self):
        report = fixture_trial("plain", "cautious_monotonicity")
        v = report.violations[0]
        assert predict(v.casebase, v.query.characterisation).outcome == v.before
        grown = v.casebase.with_case(
            Case("replay", v.added.characterisation, v.added.outcome)
        )
        assert predict(grown, v.query.characterisation).outcome == v.after

    def test_added_cases_are_self_inferred(self):
        report = fixture_trial("plain", "cautious_monotonicity")
        for v in report.violations:
            assert predict(v.casebase, v.added.characterisation).outcome == v.added.outcome

    def test_sampling_skips_stored_characterisations(self):
        cfg = GeneratorConfig(UNIVERSE4, 12, seed=5)
        report = check_property("plain", "consistency", cfg, 3, exhaustive=True)
        assert report.stored_skipped > 0

    def test_trial_seeds_shift_with_the_index(self):
        cfg = GeneratorConfig(UNIVERSE4, 8, seed=1000)
        shifted = GeneratorConfig(UNIVERSE4, 8, seed=1001)
        assert gen_casebase(shifted) == gen_casebase(
            GeneratorConfig(UNIVERSE4, 8, seed=cfg.seed + 1)
        )

    def test_unknown_engine_rejected(self):
        cfg = GeneratorConfig(UNIVERSE4, 4, seed=0)
        with pytest.raises(ValueError):
            check_property("psychic", "cut", cfg, 1)

    def test_unknown_property_rejected(self):
        cfg = GeneratorConfig(UNIVERSE4, 4, seed=0)
        with pytest.raises(ValueError):
            check_property("plain", "telepathy", cfg, 1)


class TestLocality:
    def test_plain_engine_is_local(self):
        cfg = GeneratorConfig(UNIVERSE4, 8, seed=31337)
        report = check_lemma_locality("plain", cfg, 20)
        assert report.ok
        assert report.instances > 20

    def test_cumulative_agreement_with_plain_on_concise_casebases(self):
        cfg = GeneratorConfig(UNIVERSE4, 6, seed=2024)
        for t in range(10):
            cb = gen_casebase(GeneratorConfig(UNIVERSE4, 6, seed=2024 + t))
            model = learn_concise(cb)
            for mask in range(16):
                n = Characterisation(
                    frozenset(f for i, f in enumerate(UNIVERSE4) if mask >> i & 1)
                )
                assert (
                    predict_cumulative(model, n).outcome
                    == predict(model.concise, n).outcome
                )
