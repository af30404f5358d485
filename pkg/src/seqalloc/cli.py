"""Command-line front end.

Subcommands: ``design`` (run an allocation), ``split`` (symmetric sum
partition plus orthogonal allocation), ``verify`` (recheck a result
file), and ``demo-necessity`` (the shared-sequence shortfall
demonstration). Instances and results travel as UTF-8 JSON; floats are
serialized with shortest round-trip precision. Rates cross this
boundary in bits/chip by default and are converted to nats internally.

Exit codes: 0 success, 1 I/O or schema error, 2 oversized-user refusal,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import alloc, split, verify
from .errors import OversizedUserError, SequenceDesignError

EXIT_OK = 0
EXIT_IO = 1
EXIT_OVERSIZED = 2
EXIT_VERIFY = 3

_LN2 = math.log(2.0)


def _fail(message):
    print(f"error: {message}", file=sys.stderr)
    return EXIT_IO


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _dump_json(payload, path):
    text = json.dumps(payload, indent=2)
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _parse_instance(raw):
    """Validate an InstanceFile dict; returns (instance, units)."""
    if not isinstance(raw, dict):
        raise ValueError("instance file must hold a JSON object")
    mode = raw.get("mode")
    if mode not in (alloc.MODE_RATES, alloc.MODE_POWERS):
        raise ValueError('"mode" must be "rates" or "powers"')
    n = raw.get("N")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError('"N" must be a positive integer')
    demands = raw.get("demands")
    if (
        not isinstance(demands, list)
        or not demands
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in demands)
        or not all(x > 0 for x in demands)
    ):
        raise ValueError('"demands" must be a nonempty array of positive numbers')
    units = raw.get("units", "bits")
    if units not in ("bits", "nats"):
        raise ValueError('"units" must be "bits" or "nats"')
    demands = np.asarray(demands, dtype=float)
    if mode == alloc.MODE_RATES and units == "bits":
        demands = demands * _LN2
    return alloc.ProblemInstance(n_dims=n, demands=demands, mode=mode), units


def _parse_order(choice, k, seed):
    if choice == "identity":
        return np.arange(k)
    if choice == "reverse":
        return np.arange(k)[::-1].copy()
    if choice.startswith("random:"):
        try:
            order_seed = int(choice.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad --order value {choice!r}") from None
        return np.random.default_rng(order_seed).permutation(k)
    if choice == "random":
        return np.random.default_rng(seed).permutation(k)
    raise ValueError(f"bad --order value {choice!r}")


def _rates_out(rates_nats, units):
    rates = np.asarray(rates_nats, dtype=float)
    return (rates / _LN2 if units == "bits" else rates).tolist()


def _trace_payload(trace, mode, units):
    key = "p" if mode == alloc.MODE_RATES else "r"
    convert = mode == alloc.MODE_POWERS and units == "bits"
    return [
        {
            "user": rec.user,
            "case": rec.case,
            "lam": rec.lam.tolist(),
            "c": rec.c.tolist(),
            key: rec.assigned / _LN2 if convert else rec.assigned,
        }
        for rec in trace
    ]


def cmd_design(args):
    try:
        raw = _load_json(args.input)
        inst, units = _parse_instance(raw)
        order = _parse_order(args.order, inst.n_users, args.seed)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        return _fail(exc)

    try:
        if args.peel_oversized:
            allocation, trace = alloc._allocate_full(inst, order=order, tol_fill=args.tol_fill)
        elif inst.mode == alloc.MODE_RATES:
            allocation, trace = alloc.allocate_min_power(inst, order=order, tol_fill=args.tol_fill)
        else:
            allocation, trace = alloc.allocate_max_rate(inst, order=order, tol_fill=args.tol_fill)
    except OversizedUserError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_OVERSIZED
    except SequenceDesignError as exc:
        return _fail(exc)

    policy = "exhaustive" if args.exhaustive else "auto"
    report = verify.region_membership(
        allocation.S, allocation.p, allocation.r, subset_policy=policy, order=order, seed=args.seed
    )
    result = {
        "mode": inst.mode,
        "N": inst.n_dims,
        "units": units,
        "S": allocation.S.tolist(),
        "p": allocation.p.tolist(),
        "r": _rates_out(allocation.r, units),
        "distinct_count": allocation.distinct_count,
        "trace": _trace_payload(trace, inst.mode, units),
        "verification": {
            "policy": report.policy,
            "subsets_checked": report.subsets_checked,
            "worst_slack": report.worst_slack,
            "violating_subset": list(report.violating_subset)
            if report.violating_subset is not None
            else None,
        },
        "tolerances": {"tol_fill": args.tol_fill, "tol_cluster": args.tol_cluster},
    }
    try:
        _dump_json(result, args.output)
    except OSError as exc:
        return _fail(exc)
    return EXIT_OK


def cmd_split(args):
    try:
        raw = _load_json(args.input)
        inst, units = _parse_instance(raw)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        return _fail(exc)

    plan = split.make_partition(inst.demands, inst.n_dims)
    if inst.mode == alloc.MODE_RATES:
        ortho = split.allocate_orthogonal(plan, plan.virtual_demands)
        subset_sums = [float(np.sum(ortho.powers[s])) for s in plan.subsets]
        grand = {"sum_power": float(np.sum(ortho.powers)),
                 "optimum_power": math.expm1(2.0 * plan.total)}
        per_virtual = {"powers": ortho.powers.tolist(),
                       "sequence_index": ortho.sequence_index.tolist()}
        demands_out = _rates_out(plan.virtual_demands, units)
        parts_out = lambda parts: _rates_out(list(parts), units)
    else:
        rates = split.orthogonal_capacity_allocation(plan, plan.virtual_demands)
        subset_sums = _rates_out([np.sum(rates[s]) for s in plan.subsets], units)
        grand = {"sum_rate": _rates_out([np.sum(rates)], units)[0],
                 "optimum_rate": _rates_out([0.5 * math.log1p(plan.total)], units)[0]}
        per_virtual = {"rates": _rates_out(rates, units)}
        demands_out = plan.virtual_demands.tolist()
        parts_out = list

    result = {
        "mode": inst.mode,
        "N": plan.n_subsets,
        "K": int(plan.demands.shape[0]),
        "K_prime": plan.k_prime,
        "splits": [{"user": rec.user, "parts": parts_out(rec.parts)} for rec in plan.splits],
        "subsets": [list(map(int, s)) for s in plan.subsets],
        "origin": plan.origin.tolist(),
        "virtual_demands": demands_out,
        "subset_sums": subset_sums,
        **grand,
        **per_virtual,
    }
    try:
        _dump_json(result, args.output)
    except OSError as exc:
        return _fail(exc)
    return EXIT_OK


def cmd_verify(args):
    try:
        raw = _load_json(args.result)
        s = np.asarray(raw["S"], dtype=float)
        p = np.asarray(raw["p"], dtype=float)
        r = np.asarray(raw["r"], dtype=float)
        units = raw.get("units", "bits")
        if units == "bits":
            r = r * _LN2
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        return _fail(exc)

    policy = "exhaustive" if args.exhaustive else "auto"
    report = verify.region_membership(s, p, r, subset_policy=policy, seed=args.seed)
    payload = {
        "policy": report.policy,
        "subsets_checked": report.subsets_checked,
        "worst_slack": report.worst_slack,
        "violating_subset": list(report.violating_subset)
        if report.violating_subset is not None
        else None,
        "passed": report.passed,
    }
    print(json.dumps(payload, indent=2))
    if not report.passed:
        print(
            f"verification failed: subset {payload['violating_subset']} exceeds its "
            f"rate bound by {-report.worst_slack:.3e} nats",
            file=sys.stderr,
        )
        return EXIT_VERIFY
    return EXIT_OK


def cmd_demo_necessity(args):
    if args.N < 2:
        return _fail("demo-necessity requires N >= 2")
    report = verify.necessity_demo(args.N)
    payload = {
        "N": report.n_dims,
        "K": report.n_users,
        "p_tot": report.p_tot,
        "lam_forced": report.lam_forced,
        "lam_cap": report.lam_cap,
        "sum_rate_forced": report.sum_rate_forced,
        "sum_rate_opt": report.sum_rate_opt,
        "rate_gap": report.rate_gap,
        "r_tot": report.r_tot,
        "sum_power_forced": report.sum_power_forced,
        "sum_power_opt": report.sum_power_opt,
        "power_gap": report.power_gap,
        "note": (
            "forcing two of the 2N-1 symmetric users onto one sequence creates an "
            "oversized compound user; the gap shown is for the best completion and "
            "holds for every completion"
        ),
    }
    try:
        _dump_json(payload, args.output)
    except OSError as exc:
        return _fail(exc)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="seqalloc",
        description="Spreading-sequence and power/rate allocation for synchronous CDMA.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="allocate sequences and powers/rates")
    p_design.add_argument("input", help="InstanceFile JSON path")
    p_design.add_argument("-o", "--output", default=None, help="ResultFile path (default stdout)")
    p_design.add_argument(
        "--order",
        default="identity",
        help="user processing order: identity | reverse | random[:SEED]",
    )
    p_design.add_argument("--tol-fill", type=float, default=alloc.TOL_FILL)
    p_design.add_argument("--tol-cluster", type=float, default=None)
    p_design.add_argument(
        "--peel-oversized",
        action="store_true",
        help="give oversized users private dimensions instead of refusing",
    )
    p_design.add_argument("--exhaustive", action="store_true",
                          help="force exhaustive subset verification")
    p_design.add_argument("--seed", type=int, default=0)
    p_design.set_defaults(func=cmd_design)

    p_split = sub.add_parser("split", help="symmetric sum partition and orthogonal allocation")
    p_split.add_argument("input", help="InstanceFile JSON path")
    p_split.add_argument("-o", "--output", default=None)
    p_split.set_defaults(func=cmd_split)

    p_verify = sub.add_parser("verify", help="recheck a ResultFile against the capacity region")
    p_verify.add_argument("result", help="ResultFile JSON path")
    p_verify.add_argument("--exhaustive", action="store_true")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(func=cmd_verify)

    p_demo = sub.add_parser("demo-necessity", help="shared-sequence shortfall demonstration")
    p_demo.add_argument("--N", type=int, required=True, help="processing gain (>= 2)")
    p_demo.add_argument("-o", "--output", default=None)
    p_demo.set_defaults(func=cmd_demo_necessity)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry():  # console-script shim
    sys.exit(main())


if __name__ == "__main__":
    entry()
