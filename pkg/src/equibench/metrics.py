"""Pure numeric kernel: utility, demand weights, global metric, Gini, under-served scores.

No I/O and no state; every function is deterministic on immutable inputs.
All arithmetic is 64-bit floating point; rounding happens only at report
serialization, never here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from equibench.errors import DomainError


@dataclass(frozen=True)
class DemandWeights:
    """Normalized per-language demand: population^tau over its sum.

    tau=1 weights languages by speaker count (demographic), tau=0 uniformly
    (linguistic). Weights always sum to 1. The unnormalized powers and their
    sum are kept so downstream sums can divide once at the end, which keeps
    the global metric exactly 1.0 when every utility is 1.
    """

    tau: float
    weights: dict[str, float]
    raw: dict[str, float]
    denom: float


@dataclass(frozen=True)
class GlobalMetric:
    """Demand-weighted mean utility in [0, 1] for one tau."""

    tau: float
    value: float


@dataclass(frozen=True)
class ValueSummary:
    """Compact summary of the score vector a Gini value was computed from."""

    n: int
    minimum: float
    maximum: float
    mean: float
    nonzero: int


@dataclass(frozen=True)
class EquityReport:
    """Gini coefficient plus the summary of the vector it was computed over."""

    gini: float
    n: int
    values: ValueSummary


def utility(performance: float, theoretical_max: float) -> float:
    """Performance normalized by the best possible performance, in [0, 1]."""
    if theoretical_max <= 0:
        raise DomainError(f"theoretical max must be positive, got {theoretical_max}")
    if performance < 0:
        raise DomainError(f"performance must be non-negative, got {performance}")
    if performance > theoretical_max:
        raise DomainError(
            f"performance {performance} exceeds theoretical max {theoretical_max}; "
            "recompute the empirical max first"
        )
    return performance / theoretical_max


def _pow_tau(n: int, tau: float) -> float:
    # 0^0 is defined as 1 so tau=0 stays uniform even with zero-population rows.
    if tau == 0.0:
        return 1.0
    return float(n) ** tau


def demand_weights(populations: dict[str, int], tau: float) -> DemandWeights:
    """Compute d_l = n_l^tau / sum(n^tau) over the given population map."""
    if not populations:
        raise DomainError("population map is empty")
    if tau < 0:
        raise DomainError(f"tau must be non-negative, got {tau}")
    for code, n in populations.items():
        if n < 0:
            raise DomainError(f"negative population for {code!r}")
    raised = {code: _pow_tau(n, tau) for code, n in populations.items()}
    denom = math.fsum(raised.values())
    if denom == 0.0:
        raise DomainError("all populations are zero with tau > 0; weights undefined")
    weights = {code: x / denom for code, x in raised.items()}
    return DemandWeights(tau=tau, weights=weights, raw=raised, denom=denom)


def global_metric(utilities: dict[str, float], weights: DemandWeights) -> GlobalMetric:
    """M = sum of weight_l * u_l. 0 means no user benefits, 1 perfect technology for all.

    Computed as fsum(n^tau * u) / fsum(n^tau): dividing once at the end keeps
    the result exactly 1 for all-ones utilities and hard-bounded by [0, 1].
    """
    if utilities.keys() != weights.weights.keys():
        raise DomainError("utilities and weights must share the same key set")
    value = math.fsum(weights.raw[code] * u for code, u in utilities.items()) / weights.denom
    return GlobalMetric(tau=weights.tau, value=value)


def global_metric_sparse(nonzero_utilities: dict[str, float], weights: DemandWeights) -> float:
    """M over a full weight map where utilities are zero except the given entries.

    Equivalent to global_metric with the zero entries filled in; used on hot
    paths where the registry has thousands of languages but few are covered.
    """
    return (
        math.fsum(weights.raw[code] * u for code, u in nonzero_utilities.items())
        / weights.denom
    )


def gini(values: list[float]) -> EquityReport:
    """Gini coefficient of a non-negative score vector.

    The vector is sorted non-decreasing internally. 0 means all values equal;
    the maximum attainable for n values is (n-1)/n, reached when exactly one
    value is positive.
    """
    n = len(values)
    if n < 1:
        raise DomainError("need at least one value")
    for v in values:
        if v < 0:
            raise DomainError(f"negative value {v}")
    total = math.fsum(values)
    if total == 0.0:
        raise DomainError("all-zero vector: Gini is undefined (0/0)")
    summary = ValueSummary(
        n=n,
        minimum=min(values),
        maximum=max(values),
        mean=total / n,
        nonzero=sum(1 for v in values if v > 0),
    )
    if summary.minimum == summary.maximum:
        return EquityReport(gini=0.0, n=n, values=summary)
    ordered = sorted(values)
    weighted = math.fsum((n + 1 - i) * y for i, y in enumerate(ordered, start=1))
    g = (n + 1 - 2.0 * weighted / total) / n
    return EquityReport(gini=g, n=n, values=summary)


def gini_degenerate_max(n: int) -> float:
    """Upper end of the Gini range, reported for tasks with no submissions at all."""
    if n < 1:
        raise DomainError("need at least one language")
    return (n - 1) / n


def underserved_scores(
    utilities: dict[str, float], populations: dict[str, int], tau: float
) -> dict[str, float]:
    """Per-language under-served score: demand weight times utility shortfall.

    score_l = d_l^(tau) * (1 - u_l). Higher means a more populous, more poorly
    served language; a perfectly served language scores exactly 0.
    """
    if utilities.keys() != populations.keys():
        raise DomainError("utilities and populations must share the same key set")
    weights = demand_weights(populations, tau).weights
    return {code: weights[code] * (1.0 - utilities[code]) for code in utilities}


def population_coverage(covered: set[str], registry) -> float:
    """Percent of world L1 speakers whose language has at least one submission."""
    from equibench.registry import total_population

    pops = registry.populations()
    for code in covered:
        if code not in pops:
            raise DomainError(f"covered code {code!r} not in registry")
    total = total_population(registry)
    if total == 0:
        return 0.0
    covered_pop = sum(pops[code] for code in covered)
    return 100.0 * covered_pop / total
