"""Exact posterior computation over completed networks."""

from __future__ import annotations

from .engine import (
    Posterior,
    check_evidence,
    enumerate_posteriors,
    evidence_impact,
    posterior,
    prior_marginals,
)

__all__ = [
    "Posterior",
    "check_evidence",
    "enumerate_posteriors",
    "evidence_impact",
    "posterior",
    "prior_marginals",
]
