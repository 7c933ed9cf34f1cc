"""Seeded audit harness for the inference-relation properties.

Casebases are generated deterministically from a 64-bit seed using the
splitmix64 stream (documented in the README so counterexamples replay
across implementations; draws reduce the raw 64-bit output modulo the
range size). Each checker feeds an engine's own conclusions back in as
new cases and reports every query whose conclusion moves, as replayable
counterexamples.

Engines: ``plain`` predicts straight from the casebase, ``cumulative``
retrains on the concise subset first. The plain engine is complete and
consistent but not cautiously monotonic; the cumulative engine
additionally satisfies cautious monotonicity, cut and rational
monotonicity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .core import (
    Case,
    Casebase,
    Characterisation,
    geq,
    validate_casebase,
)
from .classifier import Statement, predict
from .cumulative import learn_concise, predict_cumulative

ENGINES = ("plain", "cumulative")

PROPERTIES = (
    "cautious_monotonicity",
    "cut",
    "cumulativity",
    "rational_monotonicity",
    "completeness",
    "consistency",
)

_MASK64 = (1 << 64) - 1


class UniverseTooSmall(ValueError):
    """The feature universe cannot host the requested casebase."""


class SplitMix64:
    """The splitmix64 generator; one 64-bit output per step."""

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next() % n

    def flip(self) -> bool:
        return bool(self.next() & 1)


@dataclass(frozen=True)
class GeneratorConfig:
    """Deterministic casebase generation parameters.

    ``feature_universe`` must hold 3 to 8 distinct names and
    ``case_count`` at most ``2 ** len(feature_universe)`` distinct
    characterisations (a characterisation drawn empty merges into the
    default case).
    """

    feature_universe: tuple[str, ...]
    case_count: int
    default_outcome_label: str = "-"
    other_outcome_label: str = "+"
    seed: int = 0


@dataclass(frozen=True)
class Counterexample:
    """A replayable property violation: rerunning the engine on
    ``casebase`` (plus ``added`` when present) reproduces before/after."""

    casebase: Casebase
    added: Statement | None
    query: Statement
    before: str
    after: str
    trial: int


@dataclass
class PropertyReport:
    property: str
    engine: str
    trials: int
    exhaustive: bool
    violations: list[Counterexample] = field(default_factory=list)
    stored_skipped: int = 0
    instances: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def _universe_masks(universe: tuple[str, ...]) -> int:
    return 1 << len(universe)


def _mask_to_characterisation(mask: int, universe: tuple[str, ...]) -> Characterisation:
    return Characterisation(
        frozenset(f for i, f in enumerate(universe) if mask >> i & 1)
    )


def gen_casebase(cfg: GeneratorConfig) -> Casebase:
    """Draw a coherent casebase, deterministic in the seed.

    Characterisations are distinct subsets of the universe drawn
    uniformly; outcomes are fair coin flips, except that the empty
    characterisation is pinned to the default outcome (anything else
    would contradict the default case).
    """
    size = len(cfg.feature_universe)
    if len(set(cfg.feature_universe)) != size:
        raise ValueError("feature universe contains repeats")
    if size < 3:
        raise UniverseTooSmall(f"universe of {size} features, need at least 3")
    if size > 8:
        raise ValueError(f"universe of {size} features, at most 8 supported")
    total = _universe_masks(cfg.feature_universe)
    if cfg.case_count > total:
        raise UniverseTooSmall(
            f"{cfg.case_count} distinct characterisations do not fit in "
            f"a universe of {size} features ({total} subsets)"
        )
    if cfg.default_outcome_label == cfg.other_outcome_label:
        raise ValueError("outcome labels must differ")

    rng = SplitMix64(cfg.seed)
    chosen: list[int] = []
    seen: set[int] = set()
    while len(chosen) < cfg.case_count:
        mask = rng.below(total)
        if mask in seen:
            continue
        seen.add(mask)
        chosen.append(mask)

    cases = []
    for i, mask in enumerate(chosen):
        if mask == 0:
            outcome = cfg.default_outcome_label
        else:
            outcome = (
                cfg.other_outcome_label if rng.flip() else cfg.default_outcome_label
            )
        cases.append(
            Case(
                id=f"c{i}",
                characterisation=_mask_to_characterisation(mask, cfg.feature_universe),
                outcome=outcome,
            )
        )
    default = Case(
        id="default",
        characterisation=Characterisation.empty(),
        outcome=cfg.default_outcome_label,
    )
    return validate_casebase(cases, default, cfg.other_outcome_label)


def _trial_config(cfg: GeneratorConfig, trial: int) -> GeneratorConfig:
    return GeneratorConfig(
        feature_universe=cfg.feature_universe,
        case_count=cfg.case_count,
        default_outcome_label=cfg.default_outcome_label,
        other_outcome_label=cfg.other_outcome_label,
        seed=(cfg.seed + trial) & _MASK64,
    )


def _predictor(engine: str, cb: Casebase) -> Callable[[Characterisation], str]:
    """One classification closure per casebase, so the cumulative
    engine learns its concise subset once, not per query."""
    if engine == "plain":
        return lambda n: predict(cb, n).outcome
    if engine == "cumulative":
        model = learn_concise(cb)
        return lambda n: predict_cumulative(model, n).outcome
    raise ValueError(f"unknown engine {engine!r}")


def _query_candidates(
    cb: Casebase,
    universe: tuple[str, ...],
    exhaustive: bool,
    sample_size: int,
    rng: SplitMix64,
) -> tuple[list[Characterisation], int]:
    """Fresh query characterisations plus the count of stored ones skipped."""
    stored = cb.characterisations()
    total = _universe_masks(universe)
    if exhaustive:
        masks = range(total)
    else:
        seen: set[int] = set()
        while len(seen) < min(sample_size, total):
            seen.add(rng.below(total))
        masks = sorted(seen)
    fresh: list[Characterisation] = []
    skipped = 0
    for mask in masks:
        ch = _mask_to_characterisation(mask, universe)
        if ch in stored:
            skipped += 1
        else:
            fresh.append(ch)
    return fresh, skipped


def cautious_monotonicity_fixture() -> tuple[Casebase, Characterisation, Characterisation]:
    """The canonical four-case counterexample for the plain engine.

    Returns (casebase, n1, n2): the plain engine concludes the
    non-default outcome for n1 and the default outcome for n2, yet
    feeding the n1 conclusion back in flips the conclusion for n2.
    """
    mk = Characterisation.of
    default = Case("default", Characterisation.empty(), "-")
    cases = (
        Case("a", mk("a"), "+"),
        Case("c", mk("c"), "+"),
        Case("ab", mk("a", "b"), "-"),
        Case("cz", mk("c", "z"), "-"),
    )
    cb = validate_casebase(cases, default, "+")
    return cb, mk("a", "b", "c"), mk("a", "b", "c", "z")


def _feedback_property_trial(
    report: PropertyReport,
    engine: str,
    cb: Casebase,
    universe: tuple[str, ...],
    exhaustive: bool,
    sample_size: int,
    rng: SplitMix64,
    trial: int,
) -> None:
    """Shared schema for cautious monotonicity, cut and rational
    monotonicity: add one self-inferred case, recheck every other query.

    For a complete and consistent relation the three properties bind
    the same computations (an inferred addition, a before/after pair),
    so a flipped conclusion violates whichever is being checked; only
    the reporting direction differs.
    """
    fresh, skipped = _query_candidates(cb, universe, exhaustive, sample_size, rng)
    report.stored_skipped += skipped
    base = _predictor(engine, cb)
    before = {n: base(n) for n in fresh}
    for n1 in fresh:
        o1 = before[n1]
        extended = cb.with_case(Case("added", n1, o1))
        ext = _predictor(engine, extended)
        for n2 in fresh:
            report.instances += 1
            after = ext(n2)
            if after != before[n2]:
                report.violations.append(
                    Counterexample(
                        casebase=cb,
                        added=Statement(n1, o1),
                        query=Statement(n2, before[n2]),
                        before=before[n2],
                        after=after,
                        trial=trial,
                    )
                )


def _classicality_trial(
    report: PropertyReport,
    engine: str,
    cb: Casebase,
    universe: tuple[str, ...],
    exhaustive: bool,
    sample_size: int,
    rng: SplitMix64,
    trial: int,
) -> None:
    """Completeness and consistency: exactly one outcome per query."""
    fresh, skipped = _query_candidates(cb, universe, exhaustive, sample_size, rng)
    report.stored_skipped += skipped
    run = _predictor(engine, cb)
    labels = cb.outcomes
    for n in fresh:
        report.instances += 1
        out = run(n)
        holds = [out == y for y in labels]
        bad = (
            sum(holds) != 1
            if report.property == "completeness"
            else sum(holds) > 1
        )
        if bad:
            report.violations.append(
                Counterexample(
                    casebase=cb,
                    added=None,
                    query=Statement(n, out),
                    before=out,
                    after=out,
                    trial=trial,
                )
            )


def check_property(
    engine: str,
    property_name: str,
    cfg: GeneratorConfig,
    trials: int,
    *,
    exhaustive: bool = False,
    sample_size: int = 32,
    fixtures: Sequence[tuple[Casebase, tuple[str, ...]]] = (),
) -> PropertyReport:
    """Run one property over seeded trials (plus any fixture casebases).

    Per-trial seeds are ``cfg.seed + trial_index``. Fixtures are pairs
    of (casebase, feature universe) checked before the random trials,
    always with exhaustive queries over their own universe. Additions
    always use characterisations not stored in the casebase; stored
    ones are skipped and counted in the report.
    """
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    if property_name not in PROPERTIES:
        raise ValueError(f"unknown property {property_name!r}")

    report = PropertyReport(
        property=property_name,
        engine=engine,
        trials=trials + len(fixtures),
        exhaustive=exhaustive,
    )

    def dispatch(cb, universe, exhaustive_here, rng, trial):
        if property_name in ("completeness", "consistency"):
            runner = _classicality_trial
        else:
            # Cautious monotonicity, cut, their conjunction
            # (cumulativity) and rational monotonicity all bind the
            # same before/after pair for a complete, consistent
            # relation; the shared schema flags any moved conclusion.
            runner = _feedback_property_trial
        runner(report, engine, cb, universe, exhaustive_here, sample_size, rng, trial)

    trial = 0
    for cb, universe in fixtures:
        dispatch(cb, universe, True, SplitMix64(cfg.seed), trial)
        trial += 1
    for t in range(trials):
        tcfg = _trial_config(cfg, t)
        cb = gen_casebase(tcfg)
        rng = SplitMix64(tcfg.seed ^ 0xA5A5A5A5A5A5A5A5)
        dispatch(cb, cfg.feature_universe, exhaustive, rng, trial)
        trial += 1
    return report


def check_lemma_locality(
    engine: str,
    cfg: GeneratorConfig,
    trials: int,
    *,
    perturbations: int = 1,
) -> PropertyReport:
    """Conclusions depend only on the cases at most the query.

    Two forms per query: dropping every case not at most the query must
    not move the conclusion, and adding a fresh case not at most the
    query must not move it either (``perturbations`` additions per
    query, with seeded outcomes).
    """
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    report = PropertyReport(
        property="locality", engine=engine, trials=trials, exhaustive=True
    )
    universe = cfg.feature_universe
    total = _universe_masks(universe)
    for t in range(trials):
        tcfg = _trial_config(cfg, t)
        cb = gen_casebase(tcfg)
        rng = SplitMix64(tcfg.seed ^ 0x5A5A5A5A5A5A5A5A)
        base = _predictor(engine, cb)
        stored = cb.characterisations()
        for mask in range(total):
            n = _mask_to_characterisation(mask, universe)
            expected = base(n)
            report.instances += 1
            filtered = cb.restricted_to(n)
            got = _predictor(engine, filtered)(n)
            if got != expected:
                report.violations.append(
                    Counterexample(
                        casebase=cb,
                        added=None,
                        query=Statement(n, expected),
                        before=expected,
                        after=got,
                        trial=t,
                    )
                )
            added = 0
            attempts = 0
            while added < perturbations and attempts < 4 * total:
                attempts += 1
                pmask = rng.below(total)
                ch = _mask_to_characterisation(pmask, universe)
                if geq(n, ch) or ch in stored:
                    continue
                outcome = cb.outcomes[rng.below(2)]
                extended = cb.with_case(Case("offside", ch, outcome))
                if not extended.coherent:
                    continue
                added += 1
                report.instances += 1
                got = _predictor(engine, extended)(n)
                if got != expected:
                    report.violations.append(
                        Counterexample(
                            casebase=cb,
                            added=Statement(ch, outcome),
                            query=Statement(n, expected),
                            before=expected,
                            after=got,
                            trial=t,
                        )
                    )
    return report
