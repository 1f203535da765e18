"""Bayesian trust inference.

Conjugate Beta/Dirichlet trust, generic particle filtering, state-space trust
with neighbor voting, subjective-logic opinions, and a seeded simulator.
"""

from ._core import (
    BetaParams,
    ConfigurationError,
    DegenerateUpdate,
    DirichletParams,
    EvaluationError,
    InvalidInput,
    InvalidObservation,
    InvalidParameter,
    ModelError,
    Opinion,
    ParticleSet,
    SstmConfig,
    TraceFormatError,
    advisor_update,
    bdtm_update,
    ddtm_update,
    dirichlet_to_opinion,
    discount_evidence,
    expected_utility,
    filter_binary,
    fuse,
    infer,
    ipf_estimate,
    observe_outcomes,
    opinion_from_outcomes,
    opinion_to_dirichlet,
    predict,
    projected_trust,
    run_cli,
    sample_beta,
    sample_dirichlet,
    simulate,
    sstm_step,
)

__version__ = "0.1.0"
