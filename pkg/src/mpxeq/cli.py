"""Command-line front end.

Every subcommand reads an economy file (except ``curves``) and writes a JSON
report to stdout or ``--output``.  Exit status is 0 on success, 1 for
invalid input and 2 when a solver fails; failures print a JSON error object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings

import numpy as np

from . import __version__
from .centrality import check_parallel, layer_influences
from .compstat import perturb, perturbation_from_dict, signs
from .economy import load_economy, validate_economy
from .equilibrium import solve_equilibrium, system_matrices, verify_equilibrium
from .errors import InputError, MpxeqError, ParseError, SingularLayer, SolverError
from .lindahl import compare_lindahl, lindahl_residuals, solve_lindahl
from .oracle import finite_difference_check, minimize_weighted_kl, numeric_planner, tatonnement_solve
from .oracle.curves import EXAMPLES, textbook_curves
from .oracle.generators import random_perturbation
from .serialize import dumps, economy_hash
from .welfare import (construct_improvement, efficiency_loss, efficiency_verdict, layer_shares,
                      no_improvement_weight, pareto_allocation, resource_utilization)

DEFAULT_SEED = 0


def _seed(args) -> int:
    env = os.environ.get("MPXEQ_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"MPXEQ_SEED must be an integer, got {env!r}", "MPXEQ_SEED") from None
    return args.seed if args.seed is not None else DEFAULT_SEED


def cmd_validate(e, args) -> dict:
    try:
        rank = system_matrices(e).unique
    except SingularLayer:
        rank = None
    report = validate_economy(e, rank_condition=rank)
    return {"n": e.n, "goods": e.good_names, "assumptions": report.to_dict()}


def cmd_solve(e, args) -> dict:
    sol = solve_equilibrium(e)
    out = sol.to_dict()
    out["residuals"] = verify_equilibrium(e, sol).to_dict()
    return out


def cmd_centrality(e, args) -> dict:
    infl = layer_influences(e)
    verdict = check_parallel(e, infl)
    sys_ = system_matrices(e, infl)
    layers = [{"good": g.name, "M": f.M, "tilde_b": f.tilde_b, "spectral_ok": f.spectral_ok}
              for g, f in zip(e.goods, infl)]
    try:
        H_inv_T = np.linalg.inv(sys_.H).T
        influence = {g.name: H_inv_T @ f.tilde_b for g, f in zip(e.goods, infl)}
    except np.linalg.LinAlgError:
        influence = None
    return {"layers": layers, "parallel": verdict.to_dict(), "influence_centrality": influence,
            "rank_condition": sys_.unique, "cond_H": sys_.cond_H}


def cmd_welfare(e, args) -> dict:
    eq = solve_equilibrium(e)
    infl = layer_influences(e)
    verdict = check_parallel(e, infl)
    ev = efficiency_verdict(e, eq, verdict)
    rho = layer_shares(eq.mu, verdict.tilde_b)
    cru = resource_utilization(e, eq)
    varpi = no_improvement_weight(e, eq)
    out = {
        "parallel": verdict.to_dict(),
        "rho": rho,
        "theta_star": ev.theta,
        "loss_at_varpi": efficiency_loss(e, varpi, rho),
        "cru": cru.to_dict(),
        "varpi": varpi,
        "improvement_available": not verdict.parallel,
    }
    if args.theta is not None:
        out["loss"] = efficiency_loss(e, np.array(args.theta, dtype=float), rho)
    return out


def cmd_cru(e, args) -> dict:
    return resource_utilization(e).to_dict()


def cmd_improve(e, args) -> dict:
    eq = solve_equilibrium(e)
    imp = construct_improvement(e, eq)
    out = imp.to_dict()
    out["pair"] = [e.good_names[s] for s in imp.pair]
    out["equilibrium_utilities"] = eq.utilities
    return out


def cmd_lindahl(e, args) -> dict:
    if args.compare:
        return compare_lindahl(e).to_dict()
    sol = solve_lindahl(e)
    out = sol.to_dict()
    out["residuals"] = vars(lindahl_residuals(e, sol))
    return out


def cmd_compstat(e, args) -> dict:
    if args.perturbation is None:
        raise InputError("--perturbation FILE is required", "--perturbation")
    doc = _read_json(args.perturbation)
    pert = perturbation_from_dict(e, doc)
    res = perturb(e, pert)
    out = res.to_dict()
    out["price_sign"] = signs(res.price)
    return out


def cmd_oracle(e, args) -> dict:
    seed = _seed(args)
    rng = np.random.default_rng(seed)
    eq = solve_equilibrium(e)
    tat = tatonnement_solve(e)
    theta = rng.dirichlet(np.ones(e.n))
    closed = pareto_allocation(e, theta)
    numeric = numeric_planner(e, theta)
    cru = resource_utilization(e, eq)
    kl = minimize_weighted_kl(e.alphas, layer_shares(eq.mu, check_parallel(e).tilde_b))
    fd = {kind: finite_difference_check(e, random_perturbation(rng, e, kind)).errors
          for kind in ("endowment", "preference", "network", "phi")}
    return {
        "seed": seed,
        "tatonnement": {
            "allocation_gap": float(np.abs(tat.allocation - eq.allocation).max()),
            "price_gap": float(np.abs(tat.prices - eq.prices).max()),
            "residuals": verify_equilibrium(e, tat, tol=1e-6).to_dict(),
        },
        "planner": {"theta": theta, "closed_form_value": float(closed.theta @ closed.utilities),
                    "numeric_value": numeric.value},
        "cru": {"closed_form_log": float(np.log(cru.cru)), "minimizer_log": -kl.value},
        "finite_differences": fd,
    }


COMMANDS = {
    "validate": cmd_validate,
    "solve": cmd_solve,
    "centrality": cmd_centrality,
    "welfare": cmd_welfare,
    "cru": cmd_cru,
    "improve": cmd_improve,
    "lindahl": cmd_lindahl,
    "compstat": cmd_compstat,
    "oracle": cmd_oracle,
}


def _read_json(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", str(path)) from None
    try:
        return json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}", str(path)) from None


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, (list, tuple, np.ndarray)):
        for k, v in enumerate(list(obj)):
            yield from _flatten(v, f"{prefix}[{k}]")
    else:
        yield prefix, obj


def _csv_text(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(v, ".17g") if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mpxeq", description="Equilibria of economies with multiplex network spillovers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, needs_input=True):
        p = sub.add_parser(name, help=help_text)
        if needs_input:
            p.add_argument("input", help="economy JSON file")
        p.add_argument("-o", "--output", help="write the report here instead of stdout")
        p.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
        return p

    add("validate", "check the economy and the spillover bounds")
    add("solve", "closed-form competitive equilibrium")
    add("centrality", "influence matrices, centralities and the parallel test")
    p = add("welfare", "efficiency verdict and efficiency measures")
    p.add_argument("--theta", type=float, nargs="+", help="Pareto weights at which to evaluate the loss")
    add("cru", "coefficient of resource utilization")
    add("improve", "Pareto-improving reallocation of the equilibrium")
    p = add("lindahl", "Lindahl equilibrium")
    p.add_argument("--compare", action="store_true", help="compare utilities with the competitive equilibrium")
    p = add("compstat", "analytic comparative statics")
    p.add_argument("--perturbation", metavar="FILE", help="perturbation JSON file")
    p = add("oracle", "cross-check closed forms against numeric oracles")
    p.add_argument("--seed", type=int, default=None, help=f"random seed (default {DEFAULT_SEED}; MPXEQ_SEED overrides)")
    p = add("curves", "Edgeworth-box equilibrium locus and contract curve (CSV)", needs_input=False)
    p.add_argument("--example", choices=EXAMPLES, required=True)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--points", type=int, default=201, help="grid size on [0, 2]")
    return parser


def run_command(args) -> tuple[int, str]:
    """Execute a parsed command; returns the exit status and the text to emit."""
    try:
        if args.command == "curves":
            if args.points < 2:
                raise InputError("--points must be at least 2", "--points")
            sample = textbook_curves(args.example, args.phi, np.linspace(0.0, 2.0, args.points))
            return 0, _csv_text(sample.rows(), ["x", "y_equilibrium", "y_contract"])
        try:
            economy = load_economy(args.input)
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}", str(args.input)) from None
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = COMMANDS[args.command](economy, args)
        report = {
            "tool": "mpxeq",
            "version": __version__,
            "command": args.command,
            "economy_sha256": economy_hash(economy),
            "warnings": sorted({f"{w.category.__name__}: {w.message}" for w in caught}),
            "result": result,
        }
        if args.csv:
            return 0, _csv_text(_flatten(json.loads(dumps(report))), ["key", "value"])
        return 0, dumps(report)
    except MpxeqError as exc:
        status = 2 if isinstance(exc, SolverError) else 1
        return status, dumps({"tool": "mpxeq", "version": __version__, "error": exc.to_dict()})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    status, text = run_command(args)
    if status == 0 and getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
