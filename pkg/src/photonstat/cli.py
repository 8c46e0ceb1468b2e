"""Command-line interface.

Subcommands:
  dist    -- build a state, run an operation pipeline, emit pmf/moments/MGFs
  figure  -- emit the three-curve report data for figures 3/4/5 as CSV and
             render the matching plot to an image next to it
  verify  -- run the catalog differential suite and the invariant checks
  herald  -- Monte Carlo heralded-subtraction run with TV diagnostics

Exit codes: 0 success, 2 parameter error, 3 impossible heralding event,
4 insufficient Monte Carlo statistics.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .channels import amplify, attenuate
from .errors import (
    ImpossibleEventError,
    InsufficientStatisticsError,
    ParameterError,
    PhotonStatError,
)
from .herald import HeraldConfig, exact_heralded_conditional, simulate_heralded_subtraction, tv_distance
from .mgf import mgf_M_point, mgf_N_point
from .ops import add, subtract
from .states import (
    DEFAULT_TAIL_EPS,
    Family,
    PhotonNumberDistribution,
    StateSpec,
    build_distribution,
    moments,
)
from .verify import run_checks

TAIL_EPS_ENV = "PHOTONSTAT_TAIL_EPS"
MAX_PIPELINE_OPS = 16

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_IMPOSSIBLE = 3
EXIT_NO_STATISTICS = 4


@dataclass(frozen=True)
class PipelineOp:
    kind: str  # sub | add | att | amp
    value: float


@dataclass(frozen=True)
class PipelineRequest:
    state: StateSpec
    ops: tuple
    moments_order: int | None
    mgf_grid: tuple | None
    fmt: str
    tail_eps: float


def fmt17(x):
    """Decimal with 17 significant digits: lossless for 64-bit floats."""
    return format(float(x), ".17g")


def _parse_op(text, index):
    try:
        kind, _, raw = text.partition(":")
        if kind in ("sub", "add"):
            value = int(raw)
            if value < 1:
                raise ValueError
        elif kind in ("att", "amp"):
            value = float(raw)
        else:
            raise ValueError
    except ValueError:
        raise ParameterError(f"op {index} ({text!r}): expected sub:L, add:L, att:eta or amp:G")
    return PipelineOp(kind=kind, value=value)


def _parse_mgf_grid(text):
    try:
        start, stop, steps = text.split(":")
        start, stop, steps = float(start), float(stop), int(steps)
        if steps < 1:
            raise ValueError
    except ValueError:
        raise ParameterError(f"bad --mgf-grid {text!r}: expected start:stop:steps")
    return tuple(np.linspace(start, stop, steps))


def _state_from_args(args):
    try:
        family = Family(args.state)
    except ValueError:
        raise ParameterError(f"unknown state family {args.state!r}")
    params = {
        Family.FOCK: dict(n=args.n),
        Family.COHERENT: dict(alpha2=args.a2),
        Family.THERMAL: dict(nbar=args.nbar),
        Family.SQUEEZED: dict(nbar=args.nbar),
        Family.CAT_EVEN: dict(alpha2=args.a2),
        Family.CAT_ODD: dict(alpha2=args.a2),
        Family.BINOMIAL: dict(eta=args.eta, m=args.m),
        Family.NEG_BINOMIAL: dict(eta=args.eta, m=args.m),
        Family.AGARWAL: dict(eta=args.eta, m=args.m),
    }[family]
    missing = [key for key, value in params.items() if value is None]
    if missing:
        flags = {"n": "--n", "alpha2": "--a2", "nbar": "--nbar", "eta": "--eta", "m": "--m"}
        raise ParameterError(
            f"state {family.value} requires {', '.join(flags[key] for key in missing)}")
    return StateSpec(family, **params)


def _resolve_tail_eps(args):
    if getattr(args, "tail_eps", None) is not None:
        return args.tail_eps
    env = os.environ.get(TAIL_EPS_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise ParameterError(f"bad {TAIL_EPS_ENV} value {env!r}")
    return DEFAULT_TAIL_EPS


def apply_pipeline(dist, ops, tail_eps):
    """Apply ops left to right; returns the final distribution and one record per op."""
    if len(ops) > MAX_PIPELINE_OPS:
        raise ParameterError(f"pipeline limited to {MAX_PIPELINE_OPS} ops")
    records = []
    for index, op in enumerate(ops):
        try:
            if op.kind == "sub":
                dist, record = subtract(dist, int(op.value))
                records.append({"kind": "sub", "count": record.count,
                                "success_norm": record.success_norm})
            elif op.kind == "add":
                dist, record = add(dist, int(op.value))
                records.append({"kind": "add", "count": record.count,
                                "success_norm": record.success_norm})
            elif op.kind == "att":
                dist = attenuate(dist, op.value)
                records.append({"kind": "att", "eta": op.value})
            elif op.kind == "amp":
                dist = amplify(dist, op.value, tail_eps=tail_eps)
                records.append({"kind": "amp", "gain": op.value})
            else:
                raise ParameterError(f"unknown op kind {op.kind!r}")
        except (ParameterError, ImpossibleEventError) as exc:
            raise type(exc)(f"op {index} ({op.kind}:{op.value:g}): {exc}") from exc
    return dist, records


def _json_num(x):
    return float(x) if math.isfinite(x) else None


def _mgf_payload(dist, grid):
    payload = {"grid": [float(g) for g in grid], "M": [], "M_converged": [],
               "N": [], "N_converged": []}
    for arg in grid:
        point = mgf_M_point(dist, arg)
        payload["M"].append(_json_num(point.value))
        payload["M_converged"].append(point.converged)
        try:
            npoint = mgf_N_point(dist, arg)
            payload["N"].append(_json_num(npoint.value))
            payload["N_converged"].append(npoint.converged)
        except PhotonStatError:
            payload["N"].append(None)
            payload["N_converged"].append(False)
    return payload


def _moment_payload(report):
    return {
        "mean": report.mean,
        "variance": report.variance,
        "g2": report.g2,
        "parity": report.parity,
        "factorial_moments": list(report.factorial_moments),
        "negative_factorial_moments": list(report.negative_factorial_moments),
    }


def dist_report(request):
    dist = build_distribution(request.state, tail_eps=request.tail_eps)
    dist, op_records = apply_pipeline(dist, request.ops, request.tail_eps)
    report = {
        "state": request.state.family.value,
        "params": request.state.params_dict(),
        "ops": op_records,
        "truncation": dist.truncation,
        "tail_bound": dist.tail_bound,
        "pmf": [float(p) for p in dist.probs],
        "moments": (_moment_payload(moments(dist, request.moments_order))
                    if request.moments_order is not None else None),
        "meta": {
            "tail_eps": request.tail_eps,
            "version": __version__,
            "mgf": _mgf_payload(dist, request.mgf_grid) if request.mgf_grid else None,
        },
    }
    return dist, report


def load_distribution_json(text):
    """Reload a dist report emitted as JSON; the verify loader used in tests."""
    data = json.loads(text)
    return PhotonNumberDistribution(
        probs=np.array(data["pmf"], dtype=float),
        tail_bound=float(data["tail_bound"]),
        truncation=int(data["truncation"]),
    )


def _pmf_csv(dist):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "p"])
    for n, p in enumerate(dist.probs):
        writer.writerow([n, fmt17(p)])
    return buf.getvalue()


def _write_output(text, out_path):
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_dist(args):
    request = PipelineRequest(
        state=_state_from_args(args),
        ops=tuple(_parse_op(text, i) for i, text in enumerate(args.op or [])),
        moments_order=args.moments,
        mgf_grid=_parse_mgf_grid(args.mgf_grid) if args.mgf_grid else None,
        fmt=args.format,
        tail_eps=_resolve_tail_eps(args),
    )
    dist, report = dist_report(request)
    if request.fmt == "json":
        _write_output(json.dumps(report, indent=2) + "\n", args.out)
    else:
        _write_output(_pmf_csv(dist), args.out)
    if args.plot:
        from . import plotting

        title = request.state.family.value + "".join(
            f" {op.kind}:{op.value:g}" for op in request.ops)
        plotting.render_distribution(dist, args.plot, title=title)
    return EXIT_OK


FIGURES = {
    3: {"state": StateSpec.coherent(1.0),
        "ops": (("add", 1), ("add", 2)),
        "labels": ("coherent |a|^2=1", "1 photon added", "2 photons added")},
    4: {"state": StateSpec.thermal(1.0),
        "ops": (("sub", 1), ("add", 1)),
        "labels": ("thermal nbar=1", "1 photon subtracted", "1 photon added")},
    5: {"state": StateSpec.thermal(1.0),
        "ops": (("sub", 2), ("add", 2)),
        "labels": ("thermal nbar=1", "2 photons subtracted", "2 photons added")},
}
FIGURE_MAX_N = 12


def figure_data(fig_id):
    """Rows (n, P_initial, P_first, P_second) for n = 0..12, plus curve labels."""
    if fig_id not in FIGURES:
        raise ParameterError(f"figure id must be one of {sorted(FIGURES)}")
    config = FIGURES[fig_id]
    initial = build_distribution(config["state"])
    curves = [initial]
    for kind, count in config["ops"]:
        op = subtract if kind == "sub" else add
        curves.append(op(initial, count)[0])
    rows = [
        (n, curves[0].pmf(n), curves[1].pmf(n), curves[2].pmf(n))
        for n in range(FIGURE_MAX_N + 1)
    ]
    return rows, config["labels"]


def cmd_figure(args):
    rows, labels = figure_data(args.id)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "P_initial", "P_after_first_op", "P_after_second_op"])
    for n, p0, p1, p2 in rows:
        writer.writerow([n, fmt17(p0), fmt17(p1), fmt17(p2)])
    _write_output(buf.getvalue(), args.out)

    plot_path = args.plot
    if plot_path is None and args.out and not args.no_plot:
        plot_path = os.path.splitext(args.out)[0] + ".png"
    if plot_path and not args.no_plot:
        from . import plotting

        ns = [row[0] for row in rows]
        columns = {label: [row[i + 1] for row in rows] for i, label in enumerate(labels)}
        plotting.render_curves(ns, columns, plot_path, title=f"figure {args.id}")
    return EXIT_OK


def cmd_verify(args):
    results = run_checks(args.pattern)
    if not results:
        print(f"no checks match pattern {args.pattern!r}", file=sys.stderr)
        return 1
    failed = []
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        line = (f"{status}  {result.id:32s} max_err={result.max_err:.3e} "
                f"tol={result.tol:.1e} points={result.points}")
        if not result.passed and result.worst:
            line += f" worst={result.worst}"
        print(line)
    failed = [r.id for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        print("failed: " + ", ".join(failed))
        return 1
    return EXIT_OK


def cmd_herald(args):
    spec = _state_from_args(args)
    prior = build_distribution(spec, tail_eps=_resolve_tail_eps(args))
    cfg = HeraldConfig(p=args.p, samples=args.samples, seed=args.seed)
    exact_cond, success = exact_heralded_conditional(prior, cfg.p)
    result = simulate_heralded_subtraction(prior, cfg)
    subtracted, _ = subtract(prior, 1)
    report = {
        "state": spec.family.value,
        "params": spec.params_dict(),
        "p": cfg.p,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "rng_algorithm": result.rng_algorithm,
        "accepted": result.accepted,
        "success_rate": result.success_rate,
        "exact_success_prob": success,
        "empirical_pmf": [float(p) for p in result.empirical_conditional.probs],
        "tv_to_subtracted": tv_distance(result.empirical_conditional, subtracted),
        "tv_to_exact_conditional": tv_distance(result.empirical_conditional, exact_cond),
    }
    _write_output(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK


def _add_state_flags(parser):
    parser.add_argument("--state", required=True,
                        choices=[f.value for f in Family],
                        help="state family")
    parser.add_argument("--n", type=int, help="photon number (fock)")
    parser.add_argument("--a2", type=float, help="|alpha|^2 (coherent, cat states)")
    parser.add_argument("--nbar", type=float, help="mean photon number (thermal, squeezed)")
    parser.add_argument("--eta", type=float, help="eta (binomial families)")
    parser.add_argument("--m", type=int, help="M (binomial families)")
    parser.add_argument("--tail-eps", type=float, default=None,
                        help=f"truncation tail budget (default {DEFAULT_TAIL_EPS}, "
                             f"or ${TAIL_EPS_ENV})")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="photonstat",
        description="Photon-number statistics of photon-subtracted and photon-added states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="distribution and moments after an op pipeline")
    _add_state_flags(p_dist)
    p_dist.add_argument("--op", action="append", metavar="KIND:VALUE",
                        help="pipeline op: sub:L, add:L, att:eta, amp:G (repeatable)")
    p_dist.add_argument("--moments", type=int, default=None, metavar="K",
                        help="include factorial moments up to order K")
    p_dist.add_argument("--mgf-grid", default=None, metavar="START:STOP:STEPS",
                        help="evaluate both generating functions on this grid")
    p_dist.add_argument("--format", choices=("json", "csv"), default="json")
    p_dist.add_argument("--out", default=None, help="write to file instead of stdout")
    p_dist.add_argument("--plot", default=None, metavar="PATH",
                        help="render the final pmf to an image file")
    p_dist.set_defaults(func=cmd_dist)

    p_fig = sub.add_parser("figure", help="report data for figures 3, 4 or 5")
    p_fig.add_argument("id", type=int, choices=sorted(FIGURES))
    p_fig.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_fig.add_argument("--plot", default=None, metavar="PATH",
                       help="image path (default: CSV path with .png)")
    p_fig.add_argument("--no-plot", action="store_true", help="skip rendering")
    p_fig.set_defaults(func=cmd_figure)

    p_verify = sub.add_parser("verify", help="run the differential verification suite")
    p_verify.add_argument("pattern", nargs="?", default=None,
                          help="only run check ids matching this glob")
    p_verify.set_defaults(func=cmd_verify)

    p_herald = sub.add_parser("herald", help="Monte Carlo heralded subtraction")
    _add_state_flags(p_herald)
    p_herald.add_argument("--p", type=float, required=True,
                          help="per-photon detection probability")
    p_herald.add_argument("--samples", type=int, default=100_000)
    p_herald.add_argument("--seed", type=int, default=0)
    p_herald.add_argument("--out", default=None, help="write JSON to file instead of stdout")
    p_herald.set_defaults(func=cmd_herald)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except ImpossibleEventError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IMPOSSIBLE
    except InsufficientStatisticsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_STATISTICS


if __name__ == "__main__":
    sys.exit(main())
