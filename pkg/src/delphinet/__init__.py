"""Group elicitation of causal Bayesian networks: modelling, inference,
structured Delphi-style collaboration, explanation, and reporting."""

from __future__ import annotations

__version__ = "0.1.0"
