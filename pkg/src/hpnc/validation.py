"""Self-check suites run by the `validate` command and the acceptance tests.

Each check returns a dict with the measured deviation and its tolerance so
reports stay machine readable.  The threshold suite accepts a deliberate
tau offset as a fault-injection hook: a nonzero offset must make the
optimality checks fail, which guards the checks themselves.
"""

from __future__ import annotations

import math

import numpy as np

from .huffman import (
    build_codebook,
    codebook_from_table,
    codebook_to_table,
    cross_check_optimality,
    decode_exact,
    encode,
)
from .model import int_to_block
from .phy import q_function
from .pnc import optimal_threshold, pnc_symbol_error_closed, pnc_symbol_error_numeric
from .analysis import bler_gain, conv_bler_asym, hpnc_bler_asym_high

DEFAULT_SNR_DB_GRID = (0.0, 2.5, 5.0, 7.5, 10.0)
DEFAULT_RHO_GRID = (0.7, 0.8, 0.85, 0.9, 0.95)
TAU_GRID_STEP = 1e-3
QUADRATURE_MATCH_TOL = 1e-9


def _check(name: str, params: dict, deviation, tolerance) -> dict:
    # keep exact ints exact (weighted totals exceed float range); unwrap numpy floats
    if isinstance(deviation, (float, np.floating)):
        deviation = float(deviation)
    else:
        deviation = int(deviation)
    return {
        "name": name,
        "params": params,
        "deviation": deviation,
        "tolerance": float(tolerance),
        "passed": bool(deviation <= tolerance),
    }


def argmin_tau_numeric(gamma: float, rho: float, step: float = TAU_GRID_STEP) -> float:
    """Grid argmin of the quadrature error over tau.

    The error is unimodal in tau on [0, inf) (the posterior-balance equation
    has a single nonnegative root), so a coarse scan refined around its
    minimum finds the global grid argmin.
    """
    coarse = np.arange(0.0, 2.0 + 1e-12, 0.02)
    vals = [pnc_symbol_error_numeric(gamma, rho, t) for t in coarse]
    centre = coarse[int(np.argmin(vals))]
    lo = max(0.0, centre - 0.025)
    fine = lo + step * np.arange(int(round(0.05 / step)) + 1)
    vals = [pnc_symbol_error_numeric(gamma, rho, t) for t in fine]
    return float(fine[int(np.argmin(vals))])


def threshold_checks(
    snr_db_grid=DEFAULT_SNR_DB_GRID,
    rho_grid=DEFAULT_RHO_GRID,
    tau_offset: float = 0.0,
) -> list[dict]:
    """Closed-form threshold vs quadrature: optimality and value agreement."""
    out = []
    for snr_db in snr_db_grid:
        gamma = 10.0 ** (snr_db / 10.0)
        for rho in rho_grid:
            if math.log((1.0 - rho) / rho) + 4.0 * gamma <= 0.0:
                continue  # degenerate zero-threshold branch, nothing to optimise
            tau = optimal_threshold(gamma, rho).tau + tau_offset
            point = {"snr_db": snr_db, "rho": rho}
            dev = abs(
                pnc_symbol_error_numeric(gamma, rho, tau)
                - pnc_symbol_error_closed(gamma, rho)
            )
            out.append(_check("quadrature_matches_closed_form", point, dev, QUADRATURE_MATCH_TOL))
            dev = abs(tau - argmin_tau_numeric(gamma, rho))
            out.append(_check("closed_form_tau_is_argmin", point, dev, TAU_GRID_STEP + 1e-12))
    return out


def _prefix_violations(cb) -> int:
    words = sorted(
        format(cb._code_values[v], f"0{int(cb.lengths[v])}b") for v in range(1 << cb.n)
    )
    return sum(
        1 for a, b in zip(words, words[1:]) if b.startswith(a)
    )


def codebook_checks(n_grid=tuple(range(1, 9)), rho_grid=(0.5, 0.6, 0.7, 0.8, 0.9, 0.95)) -> list[dict]:
    """Optimality vs the alternate tie-break, Kraft equality, prefix freedom,
    full round trips, table export round trip, fixed length at rho = 0.5."""
    out = []
    for n in n_grid:
        for rho in rho_grid:
            point = {"n": n, "rho": rho}
            cb = build_codebook(n, rho)
            total_primary, total_alt = cross_check_optimality(n, rho)
            out.append(
                _check("alt_tiebreak_total_length_equal", point, abs(total_primary - total_alt), 0)
            )
            out.append(
                _check("kraft_equality", point, abs(cb.kraft_terms() - (1 << cb.max_len)), 0)
            )
            out.append(_check("prefix_free", point, _prefix_violations(cb), 0))
            bad = 0
            for v in range(1 << n):
                block = int_to_block(v, n)
                decoded = decode_exact(cb, encode(cb, block))
                if decoded is None or not np.array_equal(decoded, block):
                    bad += 1
            out.append(_check("round_trip_all_blocks", point, bad, 0))
            rebuilt = codebook_from_table(codebook_to_table(cb))
            out.append(
                _check(
                    "table_round_trip",
                    point,
                    int(np.count_nonzero(rebuilt.lengths != cb.lengths)),
                    0,
                )
            )
            if rho == 0.5:
                out.append(
                    _check(
                        "uniform_design_is_fixed_length",
                        point,
                        int(np.count_nonzero(cb.lengths != n)),
                        0,
                    )
                )
    return out


def formula_checks(n_grid=(2, 4, 6, 8, 12), r_grid=(0.0, 0.2, 0.4, 0.6, 0.8, 0.9)) -> list[dict]:
    """Algebraic identities between the closed forms."""
    from .huffman import compression_rate, length_distribution, theoretical_rate

    out = []
    gamma = 10.0  # any fixed SNR works for ratio identities
    for n in n_grid:
        for r in r_grid:
            rho = (1.0 + r) / 2.0
            point = {"n": n, "r": r}
            ld = length_distribution(build_codebook(n, rho), rho)
            c = compression_rate(n, ld.mean)
            ratio = conv_bler_asym(gamma, n) / hpnc_bler_asym_high(gamma, rho, n, ld.mean)
            dev = abs(ratio / bler_gain(c, rho) - 1.0)
            out.append(_check("asym_ratio_equals_gain_formula", point, dev, 1e-12))
            gap = c - theoretical_rate(r)
            bound = 1.0 / (2.0 * n)
            ok_gap = 0 if (-1e-15 <= gap and gap < bound + 1e-15) else abs(gap)
            out.append(_check("rate_sandwich", point, ok_gap, 0))
    for n in (2, 4, 6):
        point = {"n": n, "rho": 0.5}
        dev = abs(hpnc_bler_asym_high(gamma, 0.5, n, float(n)) - conv_bler_asym(gamma, n))
        out.append(_check("high_snr_coefficient_identity_rho_half", point, dev, 0))
    xs = np.linspace(-6.0, 6.0, 25)
    dev = float(np.max(np.abs(q_function(xs) + q_function(-xs) - 1.0)))
    out.append(_check("q_function_symmetry", {"grid": "linspace(-6,6,25)"}, dev, 1e-12))
    dev = 0 if bool(np.all(np.diff(q_function(xs)) < 0)) else 1
    out.append(_check("q_function_strictly_decreasing", {"grid": "linspace(-6,6,25)"}, dev, 0))
    return out


def run_checks(
    groups=("thresholds", "codebooks", "formulas"),
    tau_offset: float = 0.0,
) -> dict:
    """Run the selected suites and assemble a machine-readable report."""
    checks: list[dict] = []
    if "thresholds" in groups:
        checks.extend(threshold_checks(tau_offset=tau_offset))
    if "codebooks" in groups:
        checks.extend(codebook_checks())
    if "formulas" in groups:
        checks.extend(formula_checks())
    failed = [c for c in checks if not c["passed"]]
    return {
        "checks": checks,
        "total": len(checks),
        "failed": len(failed),
        "passed": not failed,
    }
