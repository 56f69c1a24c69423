"""Command-line entry point: `compx run <dataset> --target <spec> [flags]`.

Exit status: 0 on success, 2 on configuration errors (bad flags, missing
files, unknown targets), 3 when the campaign itself fails (target crash or
too little measurable data). Advisories go to stderr; the report document
is the only thing written to stdout.
"""

import argparse
import os
import sys

from .errors import CampaignError, CompxError, ConfigurationError, InsufficientDataError
from .fitting import fit_all
from .measure import CampaignConfig, ProbeMode, TargetSpec, constant_alert, run_campaign
from .paragons import PARAGON_NAMES, build_paragon
from .plotting import plot_spec_from, render_plot
from .report import build_report, serialize_report
from .sampling import ingest_dataset


def resolve_target(spec: str, seed=None) -> TargetSpec:
    """Turn 'builtin:<name>' or 'exec:<command template>' into a TargetSpec."""
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        try:
            return build_paragon(name, seed=seed).target
        except KeyError:
            raise ConfigurationError(
                f"unknown builtin target {name!r}; available: {', '.join(PARAGON_NAMES)}"
            ) from None
    if spec.startswith("exec:"):
        return TargetSpec.external(spec[len("exec:"):])
    raise ConfigurationError(
        f"target must look like 'builtin:<name>' or 'exec:<command with {{input}}>', got {spec!r}"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compx",
        description="Estimate an algorithm's empirical time and memory complexity "
        "by running it on growing samples of a dataset.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a measurement campaign and print the report")
    run.add_argument("dataset", help="path to the dataset file")
    run.add_argument("--target", required=True,
                     help="'builtin:<name>' or 'exec:<command with one {input} placeholder>'")
    run.add_argument("--format", choices=("csv", "lines", "bytes"), default="csv",
                     help="dataset file format (default: csv with header)")
    run.add_argument("--record-bytes", type=int, default=None,
                     help="record size for --format bytes")
    run.add_argument("--start-size", type=int, default=None,
                     help="first sample size (default: floor(log2(N)))")
    run.add_argument("--power-factor", type=float, default=2.0,
                     help="geometric growth ratio of sample sizes (default: 2)")
    run.add_argument("--replicates", type=int, default=4,
                     help="runs per sample size (default: 4)")
    run.add_argument("--max-time", type=float, default=30.0,
                     help="step time budget in seconds, all replicates of one size (default: 30)")
    run.add_argument("--random-sampling", action="store_true",
                     help="draw random samples instead of taking the first N rows")
    run.add_argument("--strata", default=None,
                     help="categorical column for stratified sampling (>= 1 row per category)")
    run.add_argument("--alpha", type=float, default=0.005,
                     help="risk level of the significance test (default: 0.005)")
    run.add_argument("--no-plot", action="store_true", help="do not emit plot files")
    run.add_argument("--out", default=None,
                     help="write the report here and plots to <out>.time.svg / <out>.memory.svg")
    run.add_argument("--seed", type=int, default=None,
                     help="RNG seed for sampling and synthetic targets (env: COMPX_SEED)")
    run.add_argument("--probe", choices=("alloc", "rss", "off"), default="alloc",
                     help="memory probe: allocation tracking, resident-set delta, or off "
                     "(exec targets always use the child's peak RSS)")
    run.add_argument("--simulate-time", action="store_true",
                     help="let targets report virtual cost instead of being timed (testing mode)")
    run.add_argument("--keep-samples", action="store_true",
                     help="keep the temporary sample files written for exec targets")
    return parser


def _campaign_config(args) -> CampaignConfig:
    seed = args.seed
    if seed is None and os.environ.get("COMPX_SEED"):
        try:
            seed = int(os.environ["COMPX_SEED"])
        except ValueError:
            raise ConfigurationError(
                f"COMPX_SEED must be an integer, got {os.environ['COMPX_SEED']!r}"
            ) from None
    return CampaignConfig(
        start_size=args.start_size,
        power_factor=args.power_factor,
        replicates=args.replicates,
        max_time_per_step=args.max_time,
        random_sampling=args.random_sampling,
        strata=args.strata,
        alpha=args.alpha,
        plot=not args.no_plot,
        seed=seed,
        probe=ProbeMode(args.probe),
        simulate_time=args.simulate_time,
        keep_samples=args.keep_samples,
    )


def _run(args) -> int:
    if not os.path.exists(args.dataset):
        raise ConfigurationError(f"dataset file not found: {args.dataset}")
    config = _campaign_config(args)
    dataset = ingest_dataset(args.dataset, args.format, args.record_bytes)
    target = resolve_target(args.target, seed=config.seed)

    outcome = run_campaign(dataset, target, config)

    time_result = fit_all(outcome.time_series, alpha=config.alpha)
    mem_result = None
    if outcome.memory_series is not None:
        mem_result = fit_all(outcome.memory_series, alpha=config.alpha)

    advisories = []
    if outcome.interrupted:
        advisories.append("campaign interrupted; report built from completed sizes only")
    alert = constant_alert(time_result, config)
    if alert:
        advisories.append(f"time: {alert}")
    if mem_result is not None:
        alert = constant_alert(mem_result, config)
        if alert:
            advisories.append(f"memory: {alert}")

    report = build_report(
        time_result,
        mem_result,
        outcome.n_full,
        outcome.time_series,
        outcome.memory_series,
        advisories=advisories,
    )
    document = serialize_report(report)

    for line in advisories:
        print(f"advisory: {line}", file=sys.stderr)

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(document + "\n")
        if config.plot:
            subtitle = (f"target: {target.name}", f"N = {outcome.n_full}")
            spec = plot_spec_from(time_result, outcome.time_series, subtitle)
            with open(f"{args.out}.time.svg", "w") as fh:
                fh.write(render_plot(spec, "svg"))
            if mem_result is not None:
                spec = plot_spec_from(mem_result, outcome.memory_series, subtitle)
                with open(f"{args.out}.memory.svg", "w") as fh:
                    fh.write(render_plot(spec, "svg"))
    else:
        print(document)

    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigurationError as exc:
        print(f"compx: configuration error: {exc}", file=sys.stderr)
        return 2
    except (CampaignError, InsufficientDataError) as exc:
        print(f"compx: campaign failed: {exc}", file=sys.stderr)
        return 3
    except CompxError as exc:
        print(f"compx: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
