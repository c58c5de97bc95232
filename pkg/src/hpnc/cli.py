"""Command-line experiment runner.

Subcommands: bler-sweep, throughput-sweep, rate-table, validate,
export-codebook.  Sweep configuration comes from flags, optionally layered
over a JSON config file (flags override file values).  Output files are
byte-stable for a fixed configuration and seed: floats are serialised with
12 significant digits and nothing time- or host-dependent is written.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields

from .analysis import conv_bler_point, hpnc_bler_point
from .huffman import (
    MAX_BLOCK_LEN,
    build_codebook,
    codebook_to_table,
    compression_rate,
    length_distribution,
    theoretical_rate,
)
from .model import SystemParams, equal_factor
from .sim import SCHEME_CONVENTIONAL, SCHEME_HPNC, estimate
from . import validation

SWEEP_SCHEMA = (
    "scheme",
    "n",
    "r",
    "snr_db",
    "bler_exact",
    "bler_asym13",
    "bler_asym14",
    "bler_sim",
    "bler_sim_se",
    "thr_sim",
    "c_hpnc",
    "c_theo",
    "rounds",
    "seed",
)

RATE_SCHEMA = ("n", "r", "mean_len", "c_hpnc", "c_theo", "gap")

THROUGHPUT_NOTE = (
    "# throughput = correctly decoded blocks * n / channel uses, with n uplink "
    "uses plus the downlink payload per round; noiseless ceilings are 1.0 "
    "(conventional) and 1/c_hpnc (hpnc)"
)


@dataclass
class ExperimentConfig:
    """Sweep configuration shared by bler-sweep and throughput-sweep."""

    scheme: str = "both"
    n: int = 6
    r: tuple[float, ...] = (0.4, 0.6, 0.7, 0.8, 0.9)
    snr_db_start: float = 0.0
    snr_db_stop: float = 10.0
    snr_db_step: float = 2.0
    rounds: int = 100_000
    seed: int = 12345
    chunks: int = 8
    out: str | None = None
    format: str = "csv"

    def validate(self) -> None:
        if self.scheme not in ("hpnc", "conventional", "both"):
            raise ValueError(f"scheme: must be hpnc, conventional or both, got {self.scheme!r}")
        if not 1 <= self.n <= MAX_BLOCK_LEN:
            raise ValueError(f"n: must be in [1, {MAX_BLOCK_LEN}], got {self.n}")
        if not self.r:
            raise ValueError("r: at least one correlation factor is required")
        for value in self.r:
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"r: values must be in [0, 1], got {value}")
        if self.snr_db_step <= 0.0:
            raise ValueError(f"snr_db_step: must be > 0, got {self.snr_db_step}")
        if self.snr_db_stop < self.snr_db_start:
            raise ValueError("snr_db_stop: must be >= snr_db_start")
        if self.rounds < 1:
            raise ValueError(f"rounds: must be >= 1, got {self.rounds}")
        if self.chunks < 1:
            raise ValueError(f"chunks: must be >= 1, got {self.chunks}")
        if self.seed < 0:
            raise ValueError(f"seed: must be >= 0, got {self.seed}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format: must be csv or json, got {self.format!r}")

    @property
    def snr_grid_db(self) -> list[float]:
        count = int(math.floor((self.snr_db_stop - self.snr_db_start) / self.snr_db_step + 1e-9)) + 1
        return [self.snr_db_start + k * self.snr_db_step for k in range(count)]

    @property
    def schemes(self) -> list[str]:
        if self.scheme == "both":
            return [SCHEME_HPNC, SCHEME_CONVENTIONAL]
        return [self.scheme]


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _rows_to_csv(schema, rows) -> str:
    lines = [",".join(schema)]
    for row in rows:
        lines.append(",".join(_fmt(row[key]) for key in schema))
    return "\n".join(lines) + "\n"


def _rows_to_json(schema, rows) -> str:
    payload = []
    for row in rows:
        item = {}
        for key in schema:
            value = row[key]
            item[key] = float(f"{value:.12g}") if isinstance(value, float) else value
        payload.append(item)
    return json.dumps(payload, indent=2) + "\n"


def _write_output(cfg_format: str, out_path: str | None, schema, rows) -> None:
    if out_path is None:
        return
    text = _rows_to_csv(schema, rows) if cfg_format == "csv" else _rows_to_json(schema, rows)
    with open(out_path, "w", newline="") as fh:
        fh.write(text)


def run_sweep(cfg: ExperimentConfig) -> list[dict]:
    """One row per (scheme, r, SNR): analytical columns plus one simulation."""
    cfg.validate()
    rows = []
    sim_cache: dict = {}
    for scheme in cfg.schemes:
        for r in cfg.r:
            rho = equal_factor(r)
            if scheme == SCHEME_HPNC:
                cb = build_codebook(cfg.n, rho)
                ld = length_distribution(cb, rho)
                c_hpnc = compression_rate(cfg.n, ld.mean)
                c_theo = theoretical_rate(r)
            for snr_db in cfg.snr_grid_db:
                gamma = 10.0 ** (snr_db / 10.0)
                if scheme == SCHEME_HPNC:
                    point = hpnc_bler_point(gamma, rho, cfg.n, ld)
                else:
                    point = conv_bler_point(gamma, cfg.n)
                # the baseline ignores r, so its simulations are shared
                key = (scheme, cfg.n, r if scheme == SCHEME_HPNC else None, snr_db)
                if key not in sim_cache:
                    params = SystemParams(n=cfg.n, r=r, gamma=gamma)
                    sim_cache[key] = estimate(
                        params, scheme, cfg.rounds, cfg.seed, cfg.chunks
                    )
                est = sim_cache[key]
                rows.append(
                    {
                        "scheme": scheme,
                        "n": cfg.n,
                        "r": r,
                        "snr_db": snr_db,
                        "bler_exact": point.exact,
                        "bler_asym13": point.asym_medium,
                        "bler_asym14": point.asym_high,
                        "bler_sim": est.bler_12,
                        "bler_sim_se": est.bler_12_se,
                        "thr_sim": est.throughput,
                        "c_hpnc": c_hpnc if scheme == SCHEME_HPNC else 1.0,
                        "c_theo": c_theo if scheme == SCHEME_HPNC else 1.0,
                        "rounds": cfg.rounds,
                        "seed": cfg.seed,
                    }
                )
    return rows


def _print_sweep(rows, columns) -> None:
    print(THROUGHPUT_NOTE)
    header = ["scheme", "n", "r", "snr_db"] + list(columns)
    widths = [12, 3, 5, 7] + [18] * len(columns)
    print("  ".join(name.ljust(w) for name, w in zip(header, widths)))
    for row in rows:
        cells = [
            str(row["scheme"]).ljust(12),
            str(row["n"]).ljust(3),
            _fmt(row["r"]).ljust(5),
            _fmt(row["snr_db"]).ljust(7),
        ]
        cells += [_fmt(row[c]).ljust(18) for c in columns]
        print("  ".join(cells))


def cmd_bler_sweep(cfg: ExperimentConfig) -> int:
    rows = run_sweep(cfg)
    _print_sweep(rows, ("bler_exact", "bler_asym13", "bler_asym14", "bler_sim", "bler_sim_se"))
    _write_output(cfg.format, cfg.out, SWEEP_SCHEMA, rows)
    return 0


def cmd_throughput_sweep(cfg: ExperimentConfig) -> int:
    rows = run_sweep(cfg)
    _print_sweep(rows, ("thr_sim", "c_hpnc", "c_theo"))
    _write_output(cfg.format, cfg.out, SWEEP_SCHEMA, rows)
    return 0


def rate_table_rows(n_start: int, n_stop: int, r_grid) -> list[dict]:
    if not 1 <= n_start <= n_stop <= MAX_BLOCK_LEN:
        raise ValueError(f"n: range must satisfy 1 <= start <= stop <= {MAX_BLOCK_LEN}")
    rows = []
    for n in range(n_start, n_stop + 1):
        for r in r_grid:
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"r: values must be in [0, 1], got {r}")
            rho = equal_factor(r)
            ld = length_distribution(build_codebook(n, rho), rho)
            c_hpnc = compression_rate(n, ld.mean)
            c_theo = theoretical_rate(r)
            gap = c_hpnc - c_theo
            bound = 1.0 / (2.0 * n)
            # the gap bound is strict except in the degenerate r = 1 design,
            # where the singleton-mass code sits exactly on the bound
            strict_ok = -1e-15 <= gap < bound + 1e-15
            edge_ok = r == 1.0 and gap <= bound + 1e-15
            if not (strict_ok or edge_ok):
                raise ValueError(
                    f"rate gap out of bounds at n={n}, r={r}: gap={gap!r}, bound={bound!r}"
                )
            rows.append(
                {
                    "n": n,
                    "r": r,
                    "mean_len": ld.mean,
                    "c_hpnc": c_hpnc,
                    "c_theo": c_theo,
                    "gap": gap,
                }
            )
    return rows


def cmd_rate_table(args) -> int:
    rows = rate_table_rows(args.n_start, args.n_stop, args.r)
    header = RATE_SCHEMA
    print("  ".join(name.ljust(14) for name in header))
    for row in rows:
        print("  ".join(_fmt(row[key]).ljust(14) for key in header))
    _write_output(args.format, args.out, RATE_SCHEMA, rows)
    return 0


def cmd_validate(args) -> int:
    groups = ("thresholds", "codebooks", "formulas") if args.checks == "all" else (args.checks,)
    report = validation.run_checks(groups=groups, tau_offset=args.perturb_tau)
    text = json.dumps(report, indent=2) + "\n"
    print(text, end="")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    return 0 if report["passed"] else 1


def cmd_export_codebook(args) -> int:
    if not 0.0 <= args.r <= 1.0:
        raise ValueError(f"r: must be in [0, 1], got {args.r}")
    table = codebook_to_table(build_codebook(args.n, equal_factor(args.r)))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(table)
    else:
        print(table, end="")
    return 0


def _add_sweep_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--scheme", choices=["hpnc", "conventional", "both"])
    parser.add_argument("--n", type=int)
    parser.add_argument("--r", type=float, action="append", help="repeatable")
    parser.add_argument("--snr-db-start", type=float)
    parser.add_argument("--snr-db-stop", type=float)
    parser.add_argument("--snr-db-step", type=float)
    parser.add_argument("--rounds", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--chunks", type=int)
    parser.add_argument("--out")
    parser.add_argument("--format", choices=["csv", "json"])


def _config_from_args(args) -> ExperimentConfig:
    values: dict = {}
    if args.config:
        with open(args.config) as fh:
            file_values = json.load(fh)
        unknown = set(file_values) - {f.name for f in fields(ExperimentConfig)}
        if unknown:
            raise ValueError(f"config: unknown keys {sorted(unknown)}")
        values.update(file_values)
    for field in fields(ExperimentConfig):
        flag_value = getattr(args, field.name, None)
        if flag_value is not None:
            values[field.name] = flag_value
    if "r" in values:
        values["r"] = tuple(float(x) for x in values["r"])
    cfg = ExperimentConfig(**values)
    cfg.validate()
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hpnc",
        description="Compressed-relaying experiments for two-way relay exchange of correlated sources",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bler-sweep", help="analytical vs simulated block error rates")
    _add_sweep_arguments(p)
    p.set_defaults(run=lambda args: cmd_bler_sweep(_config_from_args(args)))

    p = sub.add_parser("throughput-sweep", help="simulated throughput with noiseless ceilings")
    _add_sweep_arguments(p)
    p.set_defaults(run=lambda args: cmd_throughput_sweep(_config_from_args(args)))

    p = sub.add_parser("rate-table", help="compression rate vs the entropy floor")
    p.add_argument("--n-start", type=int, default=1)
    p.add_argument("--n-stop", type=int, default=12)
    p.add_argument(
        "--r",
        type=float,
        action="append",
        help="repeatable; default 0.0..0.9 step 0.1",
    )
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(
        run=lambda args: cmd_rate_table(_with_default_r_grid(args)),
    )

    p = sub.add_parser("validate", help="oracle self-checks; nonzero exit on failure")
    p.add_argument(
        "--checks",
        choices=["thresholds", "codebooks", "formulas", "all"],
        default="all",
    )
    p.add_argument(
        "--perturb-tau",
        type=float,
        default=0.0,
        help="fault-injection offset added to the closed-form threshold; a "
        "nonzero value must make the threshold checks fail",
    )
    p.add_argument("--out")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("export-codebook", help="canonical codebook as a text table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(run=cmd_export_codebook)

    return parser


def _with_default_r_grid(args):
    if args.r is None:
        args.r = [round(0.1 * k, 1) for k in range(10)]
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
