"""Exception hierarchy shared by every module.

Input problems derive from :class:`InputError` (CLI exit status 1); numerical
failures of a solver derive from :class:`SolverError` (CLI exit status 2).
Each exception carries a short machine-readable ``code`` and an optional
``location`` (field path, offending cells, ...).
"""

from __future__ import annotations

from typing import Any


class MpxeqError(Exception):
    code = "error"

    def __init__(self, message: str, location: Any = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "location": self.location}


class InputError(MpxeqError):
    code = "input_error"


class ParseError(InputError):
    code = "parse_error"


class ValidationError(InputError):
    code = "validation_error"


class DimensionMismatch(ValidationError):
    code = "dimension_mismatch"


class DomainError(ValidationError):
    code = "domain_error"


class DegenerateNetwork(ValidationError):
    code = "degenerate_network"


class SolverError(MpxeqError):
    code = "solver_error"


class SingularLayer(SolverError):
    code = "singular_layer"


class SingularH(SolverError):
    code = "singular_h"


class SingularAggregate(SolverError):
    code = "singular_aggregate"


class NonPositiveMu(SolverError):
    code = "non_positive_mu"


class NonInteriorEquilibrium(SolverError):
    code = "non_interior_equilibrium"


class NonInteriorPareto(SolverError):
    code = "non_interior_pareto"


class NonInteriorLindahl(SolverError):
    code = "non_interior_lindahl"


class ConstructionInfeasible(SolverError):
    code = "construction_infeasible"


class ParallelNoImprovement(SolverError):
    code = "parallel_no_improvement"


class LineSearchFailed(SolverError):
    code = "line_search_failed"


class NoConvergence(SolverError):
    code = "no_convergence"


class RankDeficient(SolverError):
    code = "rank_deficient"


class AssumptionWarning(UserWarning):
    """An assumption the closed forms rely on is violated; results may be off."""


class DegenerateNetworkWarning(UserWarning):
    """A comparison row was zeroed because the consumer has no neighbours."""


class WitnessWarning(UserWarning):
    """The attaining allocation behind the CRU closed form is not feasible."""
