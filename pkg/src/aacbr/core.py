"""Case vocabulary: feature-set characterisations, labelled cases, casebases.

Characterisations are compared by set inclusion: ``geq(a, b)`` holds when
``a`` carries every feature of ``b``, so more features means more specific.
The empty characterisation is the least element of the order and is
reserved for the default case of a casebase.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


class DefaultNotLeast(ValueError):
    """The default case must carry the empty characterisation."""


class DuplicateId(ValueError):
    """Two distinct cases were given the same id."""


class UnknownOutcomeLabel(ValueError):
    """A case outcome is not one of the casebase's two labels."""


class IncoherentCasebase(ValueError):
    """Raised by operations that are only defined on coherent casebases."""


@dataclass(frozen=True)
class Characterisation:
    """A finite set of opaque feature identifiers."""

    features: frozenset[str]

    def __post_init__(self) -> None:
        # Accept any iterable of strings at construction time.
        object.__setattr__(self, "features", frozenset(self.features))

    @classmethod
    def of(cls, *features: str) -> "Characterisation":
        return cls(frozenset(features))

    @classmethod
    def empty(cls) -> "Characterisation":
        return cls(frozenset())

    def __repr__(self) -> str:
        return "{%s}" % ",".join(sorted(self.features))


def geq(a: Characterisation, b: Characterisation) -> bool:
    """True when ``a`` is at least as specific as ``b`` (here: superset).

    This comparison is the single extension point for plugging in a
    different partial order; everything else in the package compares
    characterisations only through :func:`geq` and :func:`gt`.
    """
    return a.features >= b.features


def gt(a: Characterisation, b: Characterisation) -> bool:
    """Strictly more specific: ``geq(a, b)`` and ``a != b``."""
    return a.features > b.features


def irrelevant_to(n: Characterisation, b: Characterisation) -> bool:
    """``b`` is irrelevant to a query ``n`` when ``n`` is not at least ``b``."""
    return not geq(n, b)


@dataclass(frozen=True)
class Case:
    """A past case: an id, a characterisation and one of two outcome labels."""

    id: str
    characterisation: Characterisation
    outcome: str


@dataclass(frozen=True)
class NewCase:
    """An unlabelled case to be classified."""

    id: str
    characterisation: Characterisation


@dataclass(frozen=True)
class Casebase:
    """A validated collection of past cases plus the default case.

    ``coherent`` records whether any two stored cases (or a stored case
    and the default) share a characterisation while disagreeing on the
    outcome. Incoherent casebases are still representable; operations
    that require coherence raise :class:`IncoherentCasebase` themselves.
    """

    cases: tuple[Case, ...]
    default_case: Case
    nondefault_outcome: str
    coherent: bool

    @property
    def default_outcome(self) -> str:
        return self.default_case.outcome

    @property
    def outcomes(self) -> tuple[str, str]:
        return (self.default_case.outcome, self.nondefault_outcome)

    def other_outcome(self, outcome: str) -> str:
        if outcome == self.default_case.outcome:
            return self.nondefault_outcome
        return self.default_case.outcome

    def characterisations(self) -> frozenset[Characterisation]:
        return frozenset(c.characterisation for c in self.cases)

    def with_case(self, case: Case) -> "Casebase":
        """A new casebase with ``case`` added (revalidated)."""
        return validate_casebase(
            self.cases + (case,), self.default_case, self.nondefault_outcome
        )

    def without(self, characterisation: Characterisation, outcome: str) -> "Casebase":
        """A new casebase with the matching (characterisation, outcome) removed."""
        kept = tuple(
            c
            for c in self.cases
            if not (c.characterisation == characterisation and c.outcome == outcome)
        )
        return validate_casebase(kept, self.default_case, self.nondefault_outcome)

    def restricted_to(self, n: Characterisation) -> "Casebase":
        """Keep only the cases whose characterisation is at most ``n``."""
        kept = tuple(c for c in self.cases if geq(n, c.characterisation))
        return validate_casebase(kept, self.default_case, self.nondefault_outcome)


def validate_casebase(
    cases: Iterable[Case],
    default_case: Case,
    nondefault_outcome: str | None = None,
) -> Casebase:
    """Build a :class:`Casebase`, deduplicating and checking structure.

    Exact duplicates (same characterisation and outcome) are merged,
    keeping the representative with the smallest id; a stored case that
    repeats the default case exactly is merged into it. Contradictory
    duplicates are kept and only flip the ``coherent`` flag. Structural
    problems (non-empty default characterisation, reused ids, outcome
    labels beyond the casebase's two) raise.
    """
    if default_case.characterisation.features:
        raise DefaultNotLeast(
            f"default case {default_case.id!r} must have an empty characterisation, "
            f"got {default_case.characterisation!r}"
        )
    default_label = default_case.outcome

    ordered = sorted(cases, key=lambda c: c.id)

    # Settle the pair of outcome labels, inferring the second if needed.
    other = nondefault_outcome
    if other == default_label:
        raise UnknownOutcomeLabel(
            f"nondefault outcome {other!r} equals the default outcome"
        )
    for c in ordered:
        if c.outcome == default_label or c.outcome == other:
            continue
        if other is None:
            other = c.outcome
        else:
            raise UnknownOutcomeLabel(
                f"case {c.id!r} has outcome {c.outcome!r}; "
                f"expected {default_label!r} or {other!r}"
            )
    if other is None:
        raise UnknownOutcomeLabel(
            "nondefault outcome label is not inferable from the cases; "
            "pass nondefault_outcome explicitly"
        )

    # Merge exact duplicates (and any copy of the default case itself).
    seen_pairs: dict[tuple[Characterisation, str], Case] = {}
    kept: list[Case] = []
    for c in ordered:
        if c.characterisation == default_case.characterisation and c.outcome == default_label:
            continue
        key = (c.characterisation, c.outcome)
        if key in seen_pairs:
            continue
        seen_pairs[key] = c
        kept.append(c)

    ids = [default_case.id] + [c.id for c in kept]
    if len(ids) != len(set(ids)):
        clashes = sorted({i for i in ids if ids.count(i) > 1})
        raise DuplicateId(f"case ids reused: {clashes}")

    # Coherence: no characterisation (default's included) with both outcomes.
    by_char: dict[Characterisation, set[str]] = {
        default_case.characterisation: {default_label}
    }
    for c in kept:
        by_char.setdefault(c.characterisation, set()).add(c.outcome)
    coherent = all(len(outs) == 1 for outs in by_char.values())

    return Casebase(
        cases=tuple(kept),
        default_case=default_case,
        nondefault_outcome=other,
        coherent=coherent,
    )


def nearest_cases(cb: Casebase, n: Characterisation) -> frozenset[Case]:
    """The most specific stored cases that are still at most ``n``.

    The default case does not take part. The result is always an
    antichain of the specificity order.
    """
    below = [c for c in cb.cases if geq(n, c.characterisation)]
    return frozenset(
        c
        for c in below
        if not any(gt(d.characterisation, c.characterisation) for d in below)
    )
