"""Command-line interface.

Subcommands: measure, sweep, search, re-bound, lgm-apply, verify.  All
randomized commands take --seed (default 0) and are reproducible; sweep CSV
output is byte-stable for a fixed seed and configuration.

Exit codes: 0 success, 1 property violation, 2 parse error, 3 non-physical
input, 4 domain error, 5 internal or convergence failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io, mixed, pure, re_oracle, verify
from .errors import (
    CompletenessError,
    DecompositionError,
    DomainError,
    FormatError,
    StateError,
)
from .states import ensemble_to_density, pure_state, validate_density

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_NONPHYSICAL = 3
EXIT_DOMAIN = 4
EXIT_INTERNAL = 5

_CSV_FMT = "%.12g"

SWEEP_COLUMNS = {
    "werner": ["F", "mre_closed", "ef_closed", "mre_search", "re_estimate"],
    "bell-mixture": ["b_max", "mre_closed", "ef_closed"],
    "departure": [
        "G",
        "mre_14",
        "mre_23",
        "wootters_ef_14",
        "wootters_ef_23",
        "avg_reduced_entropy_23",
    ],
}


def _emit(record, fmt, stream=None):
    stream = stream if stream is not None else sys.stdout
    if fmt == "json":
        json.dump(record, stream, indent=2, sort_keys=True)
        stream.write("\n")
    else:
        width = max(len(k) for k in record)
        for key, value in record.items():
            if isinstance(value, float):
                value = f"{value:.12g}"
            stream.write(f"{key.ljust(width)}  {value}\n")


def _is_bell_diagonal(rho, tol=1e-10):
    """Bell weights if rho is diagonal in the Bell basis, else None."""
    from .states import BELL_STATES

    basis = np.column_stack(BELL_STATES)
    in_bell = basis.conj().T @ rho @ basis
    off = in_bell - np.diag(np.diagonal(in_bell))
    if np.max(np.abs(off)) > tol:
        return None
    return np.real(np.diagonal(in_bell))


def _search_config(args):
    return mixed.SearchConfig(
        restarts=args.restarts if args.restarts is not None else 32,
        m_max=args.m_max,
        seed=args.seed,
        tol=args.tol if args.tol is not None else 1e-8,
    )


def cmd_measure(args):
    kind, value = io.load_state(args.state)
    record = {"input": args.state, "kind": kind}
    if kind == "pure":
        psi = pure_state(value)
        rho = np.outer(psi, psi.conj())
        record["xi"] = pure.xi_norm(psi)
        record["concurrence"] = pure.concurrence_pure(psi)
        record["ef"] = pure.ef_pure(psi)
        record["mre"] = pure.mre_pure(psi)
        record["mre_method"] = "pure"
        record["ppt"] = mixed.is_ppt(rho)
        _emit(record, args.format)
        return EXIT_OK

    if kind == "ensemble":
        rho = validate_density(ensemble_to_density(value))
        record["decomposition_objective"] = mixed.mre_for_decomposition(rho, value)
    else:
        rho = validate_density(value)

    from .states import polarized_vectors

    va, vb = polarized_vectors(rho)
    record["xi_a"] = float(np.linalg.norm(va))
    record["xi_b"] = float(np.linalg.norm(vb))
    record["concurrence"] = mixed.concurrence_mixed(rho)
    record["ef"] = mixed.wootters_ef(rho)
    ppt = mixed.is_ppt(rho)
    record["ppt"] = ppt

    bell_weights = _is_bell_diagonal(rho)
    if float((rho @ rho).trace().real) > 1.0 - 1e-10:
        psi = np.linalg.eigh(rho)[1][:, -1]
        record["mre"] = pure.mre_pure(psi)
        record["mre_method"] = "pure"
    elif bell_weights is not None and bell_weights.max() >= 0.5:
        record["mre"] = mixed.bell_mixture_mre_closed(float(bell_weights.max()))
        record["mre_method"] = "bell-closed"
    elif ppt:
        record["mre"] = 0.0
        record["mre_method"] = "separable"
    else:
        result = mixed.mre_search(rho, _search_config(args))
        record["mre"] = result.value
        record["mre_method"] = "search"
        record["mre_converged"] = result.converged
    _emit(record, args.format)
    return EXIT_OK


def _sweep_value(column, x, args, row_index):
    if column in ("F", "b_max", "G"):
        return x
    if column == "mre_closed":
        return (
            mixed.werner_mre_closed(x)
            if args.family == "werner"
            else mixed.bell_mixture_mre_closed(x)
        )
    if column == "ef_closed":
        return (
            mixed.werner_ef_closed(x)
            if args.family == "werner"
            else mixed.bell_mixture_ef_closed(x)
        )
    if column == "mre_search":
        cfg = mixed.SearchConfig(
            restarts=args.restarts if args.restarts is not None else 16,
            m_max=args.m_max,
            seed=args.seed + 7919 * row_index,
            tol=args.tol if args.tol is not None else 1e-8,
        )
        return mixed.mre_search(mixed.werner_state(x), cfg).value
    if column == "re_estimate":
        cfg = mixed.SearchConfig(
            restarts=args.restarts if args.restarts is not None else 16,
            m_max=args.m_max,
            seed=args.seed + 7919 * row_index,
            tol=args.tol if args.tol is not None else 1e-8,
        )
        result = mixed.mre_search(mixed.werner_state(x), cfg)
        warm = re_oracle.candidate_from_ensemble(result.best_ensemble)
        value, _ = re_oracle.re_estimate(
            mixed.werner_state(x),
            re_oracle.ReConfig(restarts=16, seed=args.seed + 7919 * row_index),
            warm_starts=(warm,),
        )
        return value
    if column == "mre_14":
        return mixed.departure_mre_closed(1, x)
    if column == "mre_23":
        return mixed.departure_mre_closed(2, x)
    if column == "wootters_ef_14":
        return mixed.wootters_ef(mixed.departure_state(1, x))
    if column == "wootters_ef_23":
        return mixed.wootters_ef(mixed.departure_state(2, x))
    if column == "avg_reduced_entropy_23":
        return mixed.departure_avg_reduced_entropy(2, x)
    raise DomainError(f"unknown column {column!r}")


def cmd_sweep(args):
    if args.family not in SWEEP_COLUMNS:
        raise DomainError(f"unknown family {args.family!r}")
    columns = SWEEP_COLUMNS[args.family]
    if args.columns:
        requested = [c.strip() for c in args.columns.split(",") if c.strip()]
        unknown = [c for c in requested if c not in columns]
        if unknown:
            raise DomainError(
                f"columns {unknown} not available for family {args.family!r}; "
                f"choose from {columns}"
            )
        columns = [columns[0]] + [c for c in requested if c != columns[0]]
    if args.steps < 2:
        raise DomainError("steps must be at least 2")
    if not args.min < args.max:
        raise DomainError("min must be strictly below max")
    lo, hi = (0.5, 1.0) if args.family in ("werner", "bell-mixture") else (0.0, 1.0)
    if args.min < lo - 1e-12 or args.max > hi + 1e-12:
        raise DomainError(
            f"family {args.family!r} is defined for parameters in [{lo}, {hi}]"
        )

    grid = np.linspace(args.min, args.max, args.steps)
    lines = [",".join(columns)]
    for i, x in enumerate(grid):
        row = [_CSV_FMT % _sweep_value(c, float(x), args, i) for c in columns]
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_search(args):
    kind, value = io.load_state(args.state)
    if kind == "pure":
        rho = np.outer(pure_state(value), pure_state(value).conj())
    elif kind == "ensemble":
        rho = validate_density(ensemble_to_density(value))
    else:
        rho = validate_density(value)
    result = mixed.mre_search(rho, _search_config(args))
    record = {
        "value": result.value,
        "restarts_used": result.restarts_used,
        "converged": result.converged,
        "members": len(result.best_ensemble),
    }
    _emit(record, args.format)
    if args.output:
        io.dump_json(io.ensemble_to_obj(result.best_ensemble), args.output)
    if not result.converged:
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_re_bound(args):
    kind, value = io.load_state(args.state)
    if kind == "pure":
        rho = np.outer(pure_state(value), pure_state(value).conj())
    elif kind == "ensemble":
        rho = validate_density(ensemble_to_density(value))
    else:
        rho = validate_density(value)
    warm = ()
    record = {}
    if args.warm_start:
        result = mixed.mre_search(rho, _search_config(args))
        warm = (re_oracle.candidate_from_ensemble(result.best_ensemble),)
        record["mre_search"] = result.value
    cfg = re_oracle.ReConfig(
        terms=args.terms,
        restarts=args.restarts if args.restarts is not None else 64,
        seed=args.seed,
        tol=args.tol if args.tol is not None else 1e-8,
    )
    value_out, candidate = re_oracle.re_estimate(rho, cfg, warm_starts=warm)
    record["re_estimate"] = value_out
    record["terms"] = candidate.terms
    _emit(record, args.format)
    if args.output:
        io.dump_json(
            {
                "weights": [float(w) for w in candidate.weights],
                "angles_a": [[float(t), float(p)] for t, p in candidate.angles_a],
                "angles_b": [[float(t), float(p)] for t, p in candidate.angles_b],
            },
            args.output,
        )
    return EXIT_OK


def cmd_lgm_apply(args):
    kset = io.load_kraus_set(args.kraus)
    kind, value = io.load_state(args.state)
    if kind == "pure":
        rho = np.outer(pure_state(value), pure_state(value).conj())
    elif kind == "ensemble":
        rho = validate_density(ensemble_to_density(value))
    else:
        rho = validate_density(value)
    from .channels import apply_mixed

    total, branches = apply_mixed(kset, rho)
    record = {
        "branches": len(branches),
        "probability_sum": float(sum(b.probability for b in branches)),
        "output_ef": mixed.wootters_ef(0.5 * (total + total.conj().T)),
        "output_ppt": mixed.is_ppt(0.5 * (total + total.conj().T)),
    }
    _emit(record, args.format)
    if args.output:
        io.dump_json(
            {
                "total": io.encode_matrix(total),
                "branches": [
                    {"q": float(b.probability), "state": io.encode_matrix(b.state)}
                    for b in branches
                ],
            },
            args.output,
        )
    return EXIT_OK


def cmd_verify(args):
    names = None
    if args.only:
        names = [n.strip() for n in args.only.split(",") if n.strip()]
    overrides = {}
    for spec in args.tol_override or []:
        if "=" not in spec:
            raise DomainError(f"--tol expects NAME=VALUE, got {spec!r}")
        key, _, raw = spec.partition("=")
        overrides[key.strip()] = float(raw)
    try:
        results = verify.run_properties(
            names=names, seed=args.seed, samples=args.samples, tol_overrides=overrides
        )
    except KeyError as exc:
        raise DomainError(str(exc)) from exc
    report = {
        "seed": args.seed,
        "properties": [r.to_dict() for r in results],
        "passed": all(r.passed for r in results),
    }
    failing = [r for r in results if not r.passed]
    if args.output:
        io.dump_json(report, args.output)
    if args.format == "json":
        _emit(report, "json")
    else:
        for r in results:
            status = "pass" if r.passed else "FAIL"
            sys.stdout.write(
                f"{status}  {r.name}  samples={r.samples}  "
                f"max_residual={r.max_residual:.3e}  tol={r.tolerance:.1e}\n"
            )
        if failing:
            sys.stdout.write("offending samples (replay with the reported seed):\n")
            for r in failing:
                sys.stdout.write(json.dumps({r.name: r.worst_sample}, sort_keys=True) + "\n")
    return EXIT_OK if not failing else EXIT_VIOLATION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="entmre",
        description="Two-qubit entanglement measures with separable reference states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_state=True):
        if needs_state:
            p.add_argument("state", help="JSON state file (pure, density, or ensemble)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=None)
        p.add_argument("--m-max", dest="m_max", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--format", choices=("json", "table"), default="table")
        p.add_argument("--output", default=None, help="write JSON/CSV artifacts here")

    p_measure = sub.add_parser("measure", help="entanglement measures of one state")
    common(p_measure)
    p_measure.set_defaults(func=cmd_measure)

    p_sweep = sub.add_parser("sweep", help="CSV parameter sweep over a state family")
    p_sweep.add_argument("family", choices=tuple(SWEEP_COLUMNS))
    p_sweep.add_argument("--min", type=float, required=True)
    p_sweep.add_argument("--max", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--columns", default=None, help="comma-separated column subset")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--restarts", type=int, default=None)
    p_sweep.add_argument("--m-max", dest="m_max", type=int, default=None)
    p_sweep.add_argument("--tol", type=float, default=None)
    p_sweep.add_argument("--output", default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_search = sub.add_parser("search", help="decomposition search for the measure")
    common(p_search)
    p_search.set_defaults(func=cmd_search)

    p_re = sub.add_parser("re-bound", help="separable-state upper estimate")
    common(p_re)
    p_re.add_argument("--terms", type=int, default=8)
    p_re.add_argument(
        "--warm-start",
        action="store_true",
        help="run the decomposition search first and start from its reference state",
    )
    p_re.set_defaults(func=cmd_re_bound)

    p_lgm = sub.add_parser("lgm-apply", help="apply a measurement set to a state")
    common(p_lgm)
    p_lgm.add_argument("--kraus", required=True, help="JSON file with [A, B] operator pairs")
    p_lgm.set_defaults(func=cmd_lgm_apply)

    p_verify = sub.add_parser("verify", help="run the randomized property suites")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--samples", type=int, default=None)
    p_verify.add_argument("--only", default=None, help="comma-separated property names")
    p_verify.add_argument(
        "--tol",
        dest="tol_override",
        action="append",
        default=None,
        metavar="NAME=VALUE",
        help="override one property's tolerance (repeatable)",
    )
    p_verify.add_argument("--format", choices=("json", "table"), default="table")
    p_verify.add_argument("--output", default=None)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (StateError, CompletenessError, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONPHYSICAL
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # internal/convergence failures
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
