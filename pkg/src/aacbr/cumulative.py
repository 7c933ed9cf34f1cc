"""Concise-subset learning for order-independent, cumulative inference.

Predicting straight from a casebase is not cautiously monotonic:
feeding an inferred conclusion back in as a new case can flip other
conclusions. The repair implemented here retrains on the concise
subset, the unique fixed point of "keep exactly the cases that are
surprising with respect to the kept ones". The learner builds that
subset bottom-up in specificity strata, growing one attack graph
incrementally, and predictions over the concise subset are cautiously
monotonic, satisfy cut, and are rationally monotonic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Case,
    Casebase,
    Characterisation,
    IncoherentCasebase,
    NewCase,
    geq,
    gt,
    validate_casebase,
)
from .classifier import predict
from .framework import (
    KIND_PAST,
    ArgGraph,
    Argument,
    TooLarge,
    _sorted_args,
    grounded_extension,
    mine_af,
    with_probe,
)


class DuplicateCharacterisation(ValueError):
    """The entering case contradicts a stored case with the same features."""


class IncoherentSource(ValueError):
    """The graph being grown was mined from an incoherent casebase."""


@dataclass(frozen=True)
class AuditRecord:
    """One surprise test from the learner, in processing order."""

    case: Case
    kept: bool
    stratum: int
    predicted: str


@dataclass(frozen=True)
class ConciseModel:
    source: Casebase
    concise: Casebase
    graph: ArgGraph
    audit: tuple[AuditRecord, ...]


def is_surprising(cb: Casebase, case: Case) -> bool:
    """Whether the rest of the casebase fails to predict this case.

    The case is removed by its (characterisation, outcome) pair; a case
    that is not stored at all is simply tested against the whole
    casebase.
    """
    rest = cb.without(case.characterisation, case.outcome)
    return predict(rest, case.characterisation).outcome != case.outcome


def _probe_outcome(graph: ArgGraph, n: Characterisation, cb: Casebase) -> str:
    """Classify ``n`` against an already-mined labelled graph."""
    probed = with_probe(graph, NewCase("probe", n))
    grounded = grounded_extension(probed)
    if probed.default_argument() in grounded.members:
        return cb.default_outcome
    return cb.nondefault_outcome


def simple_add(g: ArgGraph, n: Case) -> ArgGraph:
    """Insert one labelled case into a mined graph without remining.

    The entering case attacks exactly the arguments of the other
    outcome that a probe at its characterisation would defend on its
    own, and nothing gains an attack on the entering case. Provided the
    graph came from a coherent casebase and cases enter in
    specificity-stratified order, the result is identical to mining the
    enlarged casebase from scratch.

    A case repeating a stored (characterisation, outcome) pair is
    merged silently; one contradicting a stored case raises
    :class:`DuplicateCharacterisation`.
    """
    if g.new_case_argument() is not None:
        raise ValueError("graph already contains a new case")
    outcomes_by_char: dict[Characterisation, str] = {}
    for a in g.arguments:
        prior = outcomes_by_char.get(a.characterisation)
        if prior is not None and prior != a.outcome:
            raise IncoherentSource(
                f"graph stores both outcomes for {a.characterisation!r}"
            )
        outcomes_by_char[a.characterisation] = a.outcome

    stored = outcomes_by_char.get(n.characterisation)
    if stored == n.outcome:
        return g
    if stored is not None:
        raise DuplicateCharacterisation(
            f"{n.characterisation!r} is stored with outcome {stored!r}, "
            f"cannot add it with {n.outcome!r}"
        )
    if any(a.id == n.id for a in g.arguments):
        raise ValueError(f"argument id {n.id!r} already in the graph")

    # Arguments the lone probe would defend: every attacker, the probe
    # itself included, must be a target of the probe.
    probe_targets = {
        b for b in g.arguments if not geq(n.characterisation, b.characterisation)
    }
    attackers = g.attackers_by_target()
    entering = Argument(KIND_PAST, n.id, n.characterisation, n.outcome)
    attacks = set(g.attacks)
    for a in g.arguments:
        if a in probe_targets:
            continue
        if a.outcome == n.outcome:
            continue
        if attackers[a] <= probe_targets:
            attacks.add((entering, a))
    return ArgGraph(
        arguments=_sorted_args(list(g.arguments) + [entering]),
        attacks=frozenset(attacks),
    )


def _strata(cases: tuple[Case, ...]) -> list[list[Case]]:
    """Layer the cases by repeatedly peeling the least specific ones."""
    remaining = list(cases)
    layers: list[list[Case]] = []
    while remaining:
        layer = [
            c
            for c in remaining
            if not any(
                gt(c.characterisation, d.characterisation) for d in remaining
            )
        ]
        layer.sort(key=lambda c: c.id)
        layers.append(layer)
        taken = set(layer)
        remaining = [c for c in remaining if c not in taken]
    return layers


def learn_concise(cb: Casebase) -> ConciseModel:
    """Reduce the casebase to its concise subset, stratum by stratum.

    Every member of a stratum is surprise-tested against the graph as
    it stood before the stratum; only then are the surprising ones
    inserted, in id order. The processing order inside a stratum cannot
    change the result. The final graph matches mining the concise
    subset from scratch.
    """
    if not cb.coherent:
        raise IncoherentCasebase("cannot learn a concise subset: casebase is incoherent")

    empty = validate_casebase((), cb.default_case, cb.nondefault_outcome)
    graph = mine_af(empty)
    kept_cases: list[Case] = []
    audit: list[AuditRecord] = []

    for stratum_index, layer in enumerate(_strata(cb.cases)):
        decisions = []
        for case in layer:
            predicted = _probe_outcome(graph, case.characterisation, cb)
            decisions.append((case, predicted))
        for case, predicted in decisions:
            keep = predicted != case.outcome
            audit.append(AuditRecord(case, keep, stratum_index, predicted))
            if keep:
                graph = simple_add(graph, case)
                kept_cases.append(case)

    concise = validate_casebase(kept_cases, cb.default_case, cb.nondefault_outcome)
    return ConciseModel(source=cb, concise=concise, graph=graph, audit=tuple(audit))


def predict_cumulative(model: ConciseModel, n: Characterisation, *, new_case_id: str = "new"):
    """Classify against the concise subset."""
    return predict(model.concise, n, new_case_id=new_case_id)


def concise_subsets_bruteforce(cb: Casebase) -> list[frozenset[Case]]:
    """Enumerate the subsets that keep exactly their own surprising cases.

    Checks the fixed-point condition directly for every subset of the
    stored cases, so it is guarded to 12 cases (:class:`TooLarge`
    beyond that). On a coherent casebase exactly one subset survives,
    the one the learner builds.
    """
    cases = cb.cases
    n = len(cases)
    if n > 12:
        raise TooLarge(f"{n} cases exceed the brute-force guard of 12")

    sub_cache: dict[int, Casebase] = {}

    def sub_casebase(mask: int) -> Casebase:
        got = sub_cache.get(mask)
        if got is None:
            got = validate_casebase(
                tuple(cases[i] for i in range(n) if mask >> i & 1),
                cb.default_case,
                cb.nondefault_outcome,
            )
            sub_cache[mask] = got
        return got

    verdict_cache: dict[tuple[int, int], bool] = {}

    def surprising(mask: int, k: int) -> bool:
        """Is case k surprising w.r.t. the subset given by mask?"""
        rest = mask & ~(1 << k)
        key = (rest, k)
        got = verdict_cache.get(key)
        if got is None:
            out = predict(sub_casebase(rest), cases[k].characterisation).outcome
            got = out != cases[k].outcome
            verdict_cache[key] = got
        return got

    fixed_points: list[frozenset[Case]] = []
    for mask in range(1 << n):
        image = 0
        for k in range(n):
            if surprising(mask, k):
                image |= 1 << k
        if image == mask:
            fixed_points.append(
                frozenset(cases[i] for i in range(n) if mask >> i & 1)
            )
    return fixed_points
