"""Command-line front end.

Subcommands: ``outage`` (analytical vs Monte Carlo sweep over a rate
grid), ``distribution`` (paired histograms of the exact log-determinant
and its pairing-bound midpoint), and ``validate`` (oracle self-checks).

Output is CSV with ``#``-prefixed header lines that echo every parameter
of the run, including the linear power ratios derived from the dB inputs.
Numbers are written with ``repr`` so files are bit-stable for a fixed
(scenario, seed, version) triple; no timestamps or hostnames appear.
Plotting stays out of process: ``--gnuplot`` writes a companion script
next to the CSV.

Exit codes: 0 success, 1 failed validation checks, 2 unusable input
(flags or scenario), 3 numerical failure.  Errors print a single line to
stderr starting with ``relay-outage: error:``.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np
from scipy import stats

from . import __version__
from .mutual_info import HopConfig, sample_logdet_pairs
from .outage import ANALYTICAL, MONTECARLO, build_outage_curve
from .rng import (
    STREAM_DISTRIBUTION,
    STREAM_HOP_MOMENTS,
    STREAM_NETWORK_MC,
    substream,
)
from .scenario import Scenario, ScenarioError, load_preset, parse_scenario, preset_names
from .validation import run_validation

ERROR_PREFIX = "relay-outage: error:"

OUTAGE_COLUMNS = ("rate", "analytical_outage", "mc_outage", "mc_std_error")
DISTRIBUTION_COLUMNS = (
    "bin_lo",
    "bin_hi",
    "exact_frequency",
    "midpoint_frequency",
)


@dataclasses.dataclass(frozen=True)
class ResultTable:
    """Rows plus a header block that fully reproduces the run."""

    header: tuple[str, ...]
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]

    def render(self) -> str:
        lines = [f"# {entry}" for entry in self.header]
        lines.append("# columns: " + ",".join(self.columns))
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row width {len(row)} != {len(self.columns)} columns"
                )
            if not all(np.isfinite(value) for value in row):
                raise ArithmeticError(f"non-finite value in result row {row}")
            lines.append(",".join(repr(float(value)) for value in row))
        return "\n".join(lines) + "\n"


def _hop_header(index: int, hop: HopConfig) -> str:
    if hop.rsi_snr_db is None:
        rsi = "rsi_snr_db=none rho=0.0"
    else:
        rsi = (
            f"rsi_snr_db={hop.rsi_snr_db!r} rho={hop.rho!r} "
            f"rsi_tx_antennas={hop.rsi_tx_antennas}"
        )
    return (
        f"hop {index}: tx_antennas={hop.tx_antennas} "
        f"rx_antennas={hop.rx_antennas} snr_db={hop.snr_db!r} "
        f"eta={hop.eta!r} {rsi}"
    )


def _scenario_header(scenario: Scenario, command: str) -> list[str]:
    lines = [
        f"relay-outage {__version__}",
        f"command: {command}",
        f"scenario: {scenario.name}",
        f"mode: {scenario.network.mode.value}",
        f"hops: {scenario.network.n_hops}",
    ]
    lines += [
        _hop_header(k, hop) for k, hop in enumerate(scenario.network.hops, start=1)
    ]
    lines.append(f"seed: {scenario.seed}")
    return lines


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def _resolve_scenario(args: argparse.Namespace) -> Scenario:
    if args.preset is not None:
        scenario = load_preset(args.preset)
    else:
        scenario = parse_scenario(args.scenario)
    overrides: dict[str, object] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "samples", None) is not None:
        overrides["n_moment_samples"] = args.samples
        overrides["dist_samples"] = args.samples
    if getattr(args, "realizations", None) is not None:
        overrides["n_mc_realizations"] = args.realizations
    if args.out is not None:
        overrides["output_dir"] = args.out
    return dataclasses.replace(scenario, **overrides) if overrides else scenario


OUTAGE_GNUPLOT = """\
set datafile separator ','
set xlabel 'Target rate (bits/s/Hz)'
set ylabel 'Outage probability'
set logscale y
set yrange [1e-4:1]
set key left top
set grid
plot '{csv}' using 1:2 with lines title 'analytical', \\
     '{csv}' using 1:3:4 with yerrorbars pointtype 7 pointsize 0.5 \\
     title 'Monte Carlo'
"""

DISTRIBUTION_GNUPLOT = """\
set datafile separator ','
set xlabel 'log2 det (bits)'
set ylabel 'Frequency'
set key left top
set grid
plot '{csv}' using (($1+$2)/2):4 with lines title 'midpoint approximation', \\
     '{csv}' using (($1+$2)/2):3 with points pointtype 6 title 'exact'
"""


def cmd_outage(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args)
    rates = scenario.rates
    analytical = build_outage_curve(
        scenario.network,
        rates,
        ANALYTICAL,
        substream(scenario.seed, STREAM_HOP_MOMENTS),
        n_moment_samples=scenario.n_moment_samples,
    )
    montecarlo = build_outage_curve(
        scenario.network,
        rates,
        MONTECARLO,
        substream(scenario.seed, STREAM_NETWORK_MC),
        n_realizations=scenario.n_mc_realizations,
    )

    header = _scenario_header(scenario, "outage")
    header.append(f"moment_samples: {scenario.n_moment_samples}")
    header.append(f"mc_realizations: {scenario.n_mc_realizations}")
    header.append(
        f"rates: start={scenario.rate_start!r} stop={scenario.rate_stop!r} "
        f"step={scenario.rate_step!r} points={rates.size}"
    )
    rows = tuple(
        (float(rate), float(pa), float(pm), float(se))
        for rate, pa, pm, se in zip(
            rates,
            analytical.probabilities,
            montecarlo.probabilities,
            montecarlo.std_errors,
        )
    )
    table = ResultTable(header=tuple(header), columns=OUTAGE_COLUMNS, rows=rows)

    out_dir = Path(scenario.output_dir)
    csv_path = out_dir / f"{scenario.name}-outage.csv"
    _write(csv_path, table.render())
    if args.gnuplot:
        _write(
            out_dir / f"{scenario.name}-outage.gp",
            OUTAGE_GNUPLOT.format(csv=csv_path.name),
        )

    deviation = float(
        np.max(np.abs(analytical.probabilities - montecarlo.probabilities))
    )
    print(
        f"{scenario.name}: max |analytical - MC| = {deviation:.6g} "
        f"over {rates.size} rates; wrote {csv_path}"
    )
    return 0


def cmd_distribution(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args)
    if scenario.dist_hop is None:
        raise ScenarioError(
            "distribution command needs a [distribution] section naming a hop",
            scenario.name,
        )
    hop = scenario.network.hops[scenario.dist_hop - 1]
    n_samples = scenario.dist_samples or scenario.n_moment_samples
    pairs = sample_logdet_pairs(
        n_samples,
        hop.rx_antennas,
        hop.tx_antennas,
        hop.eta,
        hop.rho,
        substream(scenario.seed, STREAM_DISTRIBUTION),
        rsi_tx_antennas=hop.rsi_tx_antennas,
    )
    exact = pairs.exact
    midpoint = pairs.midpoint

    width = scenario.dist_bin_width
    lo = np.floor(min(exact.min(), midpoint.min()) / width) * width
    hi = np.ceil(max(exact.max(), midpoint.max()) / width) * width
    n_bins = max(1, int(round((hi - lo) / width)))
    edges = lo + width * np.arange(n_bins + 1)
    exact_freq = np.histogram(exact, bins=edges)[0] / n_samples
    midpoint_freq = np.histogram(midpoint, bins=edges)[0] / n_samples

    ks_distance = float(stats.ks_2samp(exact, midpoint).statistic)
    exact_skew = float(stats.skew(exact))
    midpoint_skew = float(stats.skew(midpoint))

    header = _scenario_header(scenario, "distribution")
    header.append(f"distribution_hop: {scenario.dist_hop}")
    header.append(f"samples: {n_samples}")
    header.append(f"bin_width: {width!r}")
    header.append(f"ks_distance: {ks_distance!r}")
    header.append(f"exact_skewness: {exact_skew!r}")
    header.append(f"midpoint_skewness: {midpoint_skew!r}")
    rows = tuple(
        (float(edges[i]), float(edges[i + 1]), float(exact_freq[i]), float(midpoint_freq[i]))
        for i in range(n_bins)
    )
    table = ResultTable(
        header=tuple(header), columns=DISTRIBUTION_COLUMNS, rows=rows
    )

    out_dir = Path(scenario.output_dir)
    csv_path = out_dir / f"{scenario.name}-distribution.csv"
    _write(csv_path, table.render())
    if args.gnuplot:
        _write(
            out_dir / f"{scenario.name}-distribution.gp",
            DISTRIBUTION_GNUPLOT.format(csv=csv_path.name),
        )

    print(
        f"{scenario.name}: KS distance = {ks_distance:.6g}, "
        f"exact skewness = {exact_skew:.6g}; wrote {csv_path}"
    )
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    report = run_validation(
        seed=args.seed if args.seed is not None else 12345,
        n_sandwich=args.samples,
        n_mc=args.realizations,
        n_moments=args.samples,
    )
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(
            f"{status} {check.name:<22} measured {check.measured:.6g} "
            f"vs limit {check.limit:.6g} ({check.seconds:.2f} s)  "
            f"[{check.detail}]"
        )
    print(f"{len(report.checks)} checks in {report.seconds:.1f} s")
    if not report.passed:
        print(
            f"{ERROR_PREFIX} validation failed: {', '.join(report.failures)}",
            file=sys.stderr,
        )
        return 1
    return 0


def _add_scenario_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--scenario", metavar="PATH", help="scenario file to run")
    source.add_argument(
        "--preset",
        metavar="NAME",
        help=f"shipped scenario preset ({', '.join(preset_names())})",
    )
    parser.add_argument("--seed", type=int, metavar="U64", help="override the scenario seed")
    parser.add_argument(
        "--samples",
        type=int,
        metavar="N",
        help="override per-hop moment / distribution sample count",
    )
    parser.add_argument(
        "--realizations",
        type=int,
        metavar="N",
        help="override Monte Carlo realization count",
    )
    parser.add_argument("--out", metavar="DIR", help="override the output directory")
    parser.add_argument(
        "--gnuplot",
        action="store_true",
        help="also write a gnuplot script next to the CSV",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relay-outage",
        description=(
            "Outage probability of multi-hop MIMO relay chains: Gaussian "
            "closed form versus Monte Carlo."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"relay-outage {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    outage = commands.add_parser(
        "outage", help="sweep outage probability over the rate grid"
    )
    _add_scenario_source(outage)
    outage.set_defaults(func=cmd_outage)

    distribution = commands.add_parser(
        "distribution",
        help="histogram the exact log-det against the midpoint approximation",
    )
    _add_scenario_source(distribution)
    distribution.set_defaults(func=cmd_distribution)

    validate = commands.add_parser("validate", help="run the oracle self-checks")
    validate.add_argument("--seed", type=int, metavar="U64", help="check seed")
    validate.add_argument(
        "--samples", type=int, default=100_000, metavar="N",
        help="draws for the sandwich and moment checks",
    )
    validate.add_argument(
        "--realizations", type=int, default=100_000, metavar="N",
        help="realizations for the Monte Carlo oracle checks",
    )
    validate.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"{ERROR_PREFIX} {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"{ERROR_PREFIX} {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"{ERROR_PREFIX} numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
