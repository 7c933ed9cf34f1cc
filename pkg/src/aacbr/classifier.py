"""Outcome prediction by grounded membership of the default argument.

A query keeps the default outcome exactly when the default argument
survives in the grounded extension of the mined graph; otherwise the
other label is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Casebase,
    Characterisation,
    IncoherentCasebase,
    NewCase,
    nearest_cases,
)
from .framework import ArgGraph, Extension, grounded_extension, mine_af


class AgreementCheckFailed(RuntimeError):
    """A unanimous neighbourhood disagreed with the prediction."""


@dataclass(frozen=True)
class Prediction:
    outcome: str
    grounded: Extension
    graph: ArgGraph
    default_in_grounded: bool
    incoherent: bool = False


@dataclass(frozen=True)
class Statement:
    """An atomic claim that a characterisation gets an outcome.

    ``negated`` flips the claim: the characterisation gets the other
    outcome.
    """

    characterisation: Characterisation
    outcome: str
    negated: bool = False


def predict(
    cb: Casebase, n: Characterisation, *, new_case_id: str = "new"
) -> Prediction:
    """Classify ``n`` against the casebase."""
    graph = mine_af(cb, NewCase(new_case_id, n))
    grounded = grounded_extension(graph)
    default_arg = graph.default_argument()
    default_in = default_arg in grounded.members
    outcome = cb.default_outcome if default_in else cb.nondefault_outcome
    return Prediction(
        outcome=outcome,
        grounded=grounded,
        graph=graph,
        default_in_grounded=default_in,
        incoherent=not cb.coherent,
    )


def infer(cb: Casebase, statement: Statement) -> bool:
    """Whether the casebase supports the statement.

    The underlying relation is complete and consistent: for every
    characterisation exactly one of the two outcome claims holds, and a
    claim holds exactly when its negation does not.
    """
    predicted = predict(cb, statement.characterisation).outcome
    if statement.negated:
        return predicted != statement.outcome
    return predicted == statement.outcome


def check_nearest_agreement(cb: Casebase, n: Characterisation) -> str | None:
    """Cross-check the prediction against the nearest stored cases.

    When the most specific cases at most ``n`` all carry one outcome,
    the prediction must agree with it; that outcome is returned. With
    no neighbours or a split neighbourhood the check is inconclusive
    and ``None`` is returned. Only defined on coherent casebases.
    """
    if not cb.coherent:
        raise IncoherentCasebase(
            "nearest-case agreement is only guaranteed for coherent casebases"
        )
    nearest = nearest_cases(cb, n)
    outcomes = {c.outcome for c in nearest}
    if len(outcomes) != 1:
        return None
    (unanimous,) = outcomes
    predicted = predict(cb, n).outcome
    if predicted != unanimous:
        raise AgreementCheckFailed(
            f"nearest cases unanimously say {unanimous!r} "
            f"but the prediction is {predicted!r}"
        )
    return unanimous
