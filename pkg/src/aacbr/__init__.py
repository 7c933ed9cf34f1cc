"""Case-based classification over mined attack graphs.

Casebases of feature-set cases are mined into attack graphs; a query is
classified by whether the default case survives in the grounded
extension. The cumulative variant first reduces the casebase to its
concise subset, which makes the induced inference relation cautiously
monotonic. A seeded harness audits these properties and renders the
graphs behind any counterexample.
"""

from .core import (
    Case,
    Casebase,
    Characterisation,
    DefaultNotLeast,
    DuplicateId,
    IncoherentCasebase,
    NewCase,
    UnknownOutcomeLabel,
    geq,
    gt,
    irrelevant_to,
    nearest_cases,
    validate_casebase,
)
from .framework import (
    ArgGraph,
    Argument,
    Extension,
    TooLarge,
    grounded_extension,
    is_acyclic,
    mine_af,
    stable_extensions_bruteforce,
    with_probe,
)
from .classifier import (
    AgreementCheckFailed,
    Prediction,
    Statement,
    check_nearest_agreement,
    infer,
    predict,
)
from .cumulative import (
    AuditRecord,
    ConciseModel,
    DuplicateCharacterisation,
    IncoherentSource,
    concise_subsets_bruteforce,
    is_surprising,
    learn_concise,
    predict_cumulative,
    simple_add,
)
from .properties import (
    Counterexample,
    GeneratorConfig,
    PropertyReport,
    SplitMix64,
    UniverseTooSmall,
    cautious_monotonicity_fixture,
    check_lemma_locality,
    check_property,
    gen_casebase,
)
from .viz import render_figure, to_dot

__all__ = [
    "AgreementCheckFailed",
    "ArgGraph",
    "Argument",
    "AuditRecord",
    "Case",
    "Casebase",
    "Characterisation",
    "ConciseModel",
    "Counterexample",
    "DefaultNotLeast",
    "DuplicateCharacterisation",
    "DuplicateId",
    "Extension",
    "GeneratorConfig",
    "IncoherentCasebase",
    "IncoherentSource",
    "NewCase",
    "Prediction",
    "PropertyReport",
    "SplitMix64",
    "Statement",
    "TooLarge",
    "UniverseTooSmall",
    "UnknownOutcomeLabel",
    "cautious_monotonicity_fixture",
    "check_lemma_locality",
    "check_nearest_agreement",
    "check_property",
    "concise_subsets_bruteforce",
    "gen_casebase",
    "geq",
    "grounded_extension",
    "gt",
    "infer",
    "irrelevant_to",
    "is_acyclic",
    "is_surprising",
    "learn_concise",
    "mine_af",
    "nearest_cases",
    "predict",
    "predict_cumulative",
    "render_figure",
    "simple_add",
    "stable_extensions_bruteforce",
    "to_dot",
    "validate_casebase",
    "with_probe",
]
