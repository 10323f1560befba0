"""Command-line experiment runner.

    lossybounds <task> --config experiment.toml [--seed S] [--workers W]
                       [--out PATH] [--format csv|json]

Exit status: 0 when every row passes, 2 when some bound check fails,
1 for configuration errors.
"""
import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .mc import proportion_interval, stream
from .quantizer import sandwich_report
from .rd_bounds import MultiLetterQuery, RDQuery, f_shannon, multi_letter_lower, rd_lower_explicit
from .regularity import verify_certificate
from .report import BoundReport, Report
from .spaces import build_distribution, build_space

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

TASKS = ("bounds", "rd-lower", "multi-letter", "quantize", "volume-check", "verify-cert")
EXIT_OK, EXIT_CONFIG, EXIT_VIOLATION = 0, 1, 2


class ConfigError(ValueError):
    pass


def load_config(path):
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        if path.suffix.lower() == ".json":
            return json.loads(raw.decode("utf-8"))
        return tomllib.loads(raw.decode("utf-8"))
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None


def _n_list(params):
    if "n_list" in params:
        values = [int(n) for n in params["n_list"]]
    elif "n_range" in params:
        lo, hi = (int(v) for v in params["n_range"])
        values = list(range(lo, hi + 1))
    else:
        raise ConfigError("params.n_list (or params.n_range) is required for this task")
    if not values or min(values) < 1:
        raise ConfigError("params.n_list must hold positive integers")
    return values


def _require(params, name):
    if name not in params:
        raise ConfigError(f"params.{name} is required for this task")
    return params[name]


def _num(value):
    if isinstance(value, str) and value.lower() in ("inf", "infinity"):
        return math.inf
    return float(value)


# tasks ---------------------------------------------------------------------

def task_bounds(space, model, params, seed, workers):
    p = float(params.get("p", 1.0))
    sigma_p = float(params.get("sigma_p", model.sigma_p(p)))
    alpha = float(params.get("alpha", 0.5))
    exact = getattr(space, "exact_vn", lambda n: None)
    report = BoundReport(space.space_id, meta={"p": p, "sigma_p": sigma_p, "v_hat_source": "exact when available"})
    sub, sup = space.certificates()
    ref = sup if sup is not None else sub
    exponent = ref.k / (ref.m if ref is sup else ref.m / p)
    for n in _n_list(params):
        lower, upper = space.quant_bounds(n, p=p, sigma_p=sigma_p, alpha=alpha)
        v = exact(n)
        ok = True
        if lower is not None and upper is not None:
            ok &= lower <= upper
        if v is not None:
            ok &= (lower is None or lower <= v) and (upper is None or v <= upper)
        scale = float(n) ** exponent
        report.add(
            space_id=space.space_id, n=n, L_n=lower, U_n=upper, v_hat=v, v_ci=None if v is None else 0.0,
            scaled_L=None if lower is None else scale * lower,
            scaled_U=None if upper is None else scale * upper,
            scaled_v=None if v is None else scale * v,
            **{"pass": bool(ok)},
        )
    return report


def task_quantize(space, model, params, seed, workers):
    p = float(params.get("p", 1.0))
    return sandwich_report(
        space, model, _n_list(params), int(params.get("budget", 200_000)), seed,
        p=p, sigma_p=params.get("sigma_p"), workers=workers, alpha=float(params.get("alpha", 0.5)),
    )


def task_rd_lower(space, model, params, seed, workers):
    grid = [float(D) for D in _require(params, "D_grid")]
    entropy = float(params.get("entropy", model.entropy()))
    alpha = float(params.get("alpha", 0.25))
    sub, _ = space.certificates()
    limit = space.rd_limit_constant() if hasattr(space, "rd_limit_constant") else sub
    report = Report(("D", "rate_lower", "h_plus_F", "offset", "rate_clamped", "pass"),
                    meta={"entropy": entropy, "m": limit.m, "k": limit.k, "c0": limit.constant})
    for D in grid:
        if hasattr(space, "rd_lower"):
            rate = space.rd_lower(entropy, D, alpha)
        else:
            rate = rd_lower_explicit(RDQuery(entropy, sub, D, unit_mass=True))
        ref = entropy + f_shannon(limit.m, limit.k, limit.constant, D)
        report.add(D=D, rate_lower=rate, h_plus_F=ref, offset=rate - ref,
                   rate_clamped=max(rate, 0.0), **{"pass": bool(rate <= ref + 1e-12 * max(1.0, abs(ref)))})
    return report


def task_multi_letter(space, model, params, seed, workers):
    sub, _ = space.certificates()
    p = float(params.get("p", 1.0))
    sigma_p = float(params.get("sigma_p", model.sigma_p(p)))
    m = float(params.get("m", sub.m))
    c = float(params.get("c", sub.constant))
    delta0 = _num(params.get("delta0", sub.delta0))
    k = float(params.get("k", sub.k))
    D = float(_require(params, "D"))
    ells = [int(e) for e in _require(params, "ell_list")]
    report = Report(("ell", "D", "rate", "d_max", "limit", "valid", "pass"),
                    meta={"m": m, "c": c, "delta0": delta0, "k": k, "p": p, "sigma_p": sigma_p})
    previous = None
    for ell in ells:
        res = multi_letter_lower(MultiLetterQuery(ell, p, sigma_p, m, c, delta0, k, D))
        ok = True
        if res.rate is not None:
            ok = res.rate >= res.limit - 1e-12
            if previous is not None and previous[0] < ell:
                ok &= res.rate < previous[1]
            previous = (ell, res.rate)
        report.add(ell=ell, D=D, rate=res.rate, d_max=res.d_max, limit=res.limit, valid=res.valid,
                   **{"pass": bool(ok)})
    return report


def task_volume_check(space, model, params, seed, workers):
    radii = [float(r) for r in _require(params, "radii")]
    samples = int(params.get("samples", 100_000))
    sigmas = float(params.get("sigmas", 3.0))
    center = space.sample_codewords(1, stream(seed, 0))[0]
    report = Report(("radius", "estimate", "ci", "law_lower", "law_upper", "pass"),
                    meta={"samples": samples, "sigmas": sigmas})
    for i, radius in enumerate(radii):
        pts = space.sample_reference(samples, stream(seed, 1, i))
        hits = int(np.count_nonzero(space.distance(pts, center) < radius))
        est, half = proportion_interval(hits, samples)
        lower, upper = space.ball_law(radius)
        ok = lower - sigmas * half <= est <= upper + sigmas * half
        report.add(radius=radius, estimate=est, ci=half, law_lower=lower, law_upper=upper, **{"pass": bool(ok)})
    return report


def task_verify_cert(space, model, params, seed, workers):
    radii = [float(r) for r in _require(params, "radii")]
    samples = int(params.get("samples", 100_000))
    n_centers = int(params.get("centers", 2))
    report = Report(("kind", "center", "radius", "estimate", "ci", "bound", "pass"), meta={"samples": samples})
    for tag, cert in enumerate(space.certificates()):
        if cert is None:
            continue
        draw = space.sample_codewords if cert.kind == "sub" else space.sample_reference
        centers = list(draw(n_centers, stream(seed, 50, tag)))
        usable = [r for r in radii if r < cert.delta0]
        probes = verify_certificate(cert, space, centers, usable, samples, seed + tag, workers=workers)
        for idx, probe in enumerate(probes):
            report.add(kind=cert.kind, center=idx // max(len(usable), 1), radius=probe.radius,
                       estimate=probe.estimate, ci=probe.ci_halfwidth, bound=probe.bound,
                       **{"pass": probe.passed})
    return report


RUNNERS = {
    "bounds": task_bounds,
    "quantize": task_quantize,
    "rd-lower": task_rd_lower,
    "multi-letter": task_multi_letter,
    "volume-check": task_volume_check,
    "verify-cert": task_verify_cert,
}


def run(config, task=None, seed=None, workers=1, out=None, fmt=None, stdout=None):
    """Execute one experiment; returns (exit status, Report or None)."""
    stdout = stdout or sys.stdout
    config_task = config.get("task")
    if task is None:
        task = config_task
    elif config_task is not None and config_task != task:
        raise ConfigError(f"task {task!r} does not match config task {config_task!r}")
    if task not in RUNNERS:
        raise ConfigError(f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    seed = config.get("seed") if seed is None else seed
    if seed is None:
        raise ConfigError("seed is mandatory (set 'seed' in the config or pass --seed)")
    try:
        seed = int(seed)
    except (TypeError, ValueError):
        raise ConfigError("seed must be an integer") from None
    if not (0 <= seed < 2 ** 64):
        raise ConfigError("seed must be a 64-bit unsigned integer")
    if "space" not in config:
        raise ConfigError("the [space] block is required")
    try:
        space = build_space(config["space"])
        model = build_distribution(space, config.get("distribution"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid space/distribution block: {exc}") from None
    params = config.get("params", {})
    try:
        report = RUNNERS[task](space, model, params, seed, max(1, int(workers)))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"invalid params: {exc}") from None
    report.meta.update({"task": task, "seed": seed, "space": space.describe(), "distribution": model.describe()})

    output = config.get("output", {})
    fmt = fmt or output.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("output format must be 'csv' or 'json'")
    out = out or output.get("path")
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        report.write(out, fmt)
        for line in report.summary_lines():
            print(line, file=stdout)
    else:
        stdout.write(report.to_csv() if fmt == "csv" else report.to_json())
    return (EXIT_OK if report.all_passed else EXIT_VIOLATION), report


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="TOML or JSON experiment file")
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument("--workers", type=int, default=1, help="thread count; never changes results")
    common.add_argument("--out", default=None, help="report path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    parser = argparse.ArgumentParser(prog="lossybounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="task", required=True)
    for name in TASKS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        config = load_config(args.config)
        status, _ = run(config, args.task, args.seed, args.workers, args.out, args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return status


if __name__ == "__main__":
    sys.exit(main())
