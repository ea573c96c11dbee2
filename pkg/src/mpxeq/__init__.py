"""Competitive and Lindahl equilibria of exchange economies with multiplex network spillovers."""

__version__ = "0.1.0"

from .centrality import (LayerInfluence, ParallelVerdict, check_parallel, influence_centrality,
                         katz_centralities, leontief_inverse)
from .compstat import Perturbation, PerturbationResult, perturb, transfer_price_sign
from .economy import (AssumptionReport, GoodLayer, MultiplexEconomy, build_comparison_economy,
                      parse_economy, serialize_economy, validate_economy)
from .equilibrium import (EquilibriumSolution, SystemMatrices, exogenous_price_mu, solve_effective_endowment,
                          solve_equilibrium, verify_equilibrium)
from .lindahl import LindahlSolution, compare_lindahl, solve_lindahl
from .welfare import (ParetoSolution, construct_improvement, efficiency_loss, efficiency_verdict,
                      no_improvement_weight, pareto_allocation, resource_utilization)

__all__ = [
    "AssumptionReport", "EquilibriumSolution", "GoodLayer", "LayerInfluence", "LindahlSolution",
    "MultiplexEconomy", "ParallelVerdict", "ParetoSolution", "Perturbation", "PerturbationResult",
    "SystemMatrices", "build_comparison_economy", "check_parallel", "compare_lindahl", "construct_improvement",
    "efficiency_loss", "efficiency_verdict", "exogenous_price_mu", "influence_centrality", "katz_centralities",
    "leontief_inverse", "no_improvement_weight", "pareto_allocation", "parse_economy", "perturb",
    "resource_utilization", "serialize_economy", "solve_effective_endowment", "solve_equilibrium",
    "solve_lindahl", "transfer_price_sign", "validate_economy", "verify_equilibrium",
]
