"""Relay-side physical-layer network coding.

The relay observes the superposition of two antipodal transmissions
(amplitude levels -2, 0, +2 before noise) and decides the XOR bit directly:
|y| above a threshold tau means the sources agreed (XOR 0), otherwise they
disagreed (XOR 1).  This module provides the posterior-optimal threshold,
the per-symbol decision, the closed-form per-symbol error probability, and
an independent quadrature evaluation of the same error used as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .phy import q_function


@dataclass(frozen=True)
class PncThreshold:
    """Decision boundary tau plus its normalised form tau_bar = sqrt(2*gamma)*tau."""

    tau: float
    tau_bar: float


def _check_gamma_rho(gamma: float, rho: float) -> None:
    if not gamma > 0.0:
        raise ValueError(f"SNR gamma must be > 0, got {gamma}")
    if not 0.5 <= rho < 1.0:
        raise ValueError(
            f"equal factor rho must be in [0.5, 1) (rho = 1 makes the relay "
            f"decision deterministic and needs no threshold), got {rho}"
        )


def optimal_threshold(gamma: float, rho: float) -> PncThreshold:
    """Posterior-optimal boundary between the |sum| = 2 and sum = 0 regions.

    When the agreement prior is strong enough that the middle region vanishes,
    i.e. ((1-rho)/rho) * e^{4*gamma} <= 1, the threshold degenerates to 0 and
    every sample is declared an agreeing pair.
    """
    _check_gamma_rho(gamma, rho)
    log_odds = math.log((1.0 - rho) / rho)
    if log_odds + 4.0 * gamma <= 0.0:
        return PncThreshold(0.0, 0.0)
    # radicand = 1 - (rho/(1-rho))^2 e^{-8 gamma}, nonnegative on this branch;
    # clamp float dust at the branch boundary
    radicand = max(0.0, 1.0 - math.exp(-2.0 * log_odds - 8.0 * gamma))
    tau = 1.0 + (log_odds + math.log1p(math.sqrt(radicand))) / (4.0 * gamma)
    return PncThreshold(tau, math.sqrt(2.0 * gamma) * tau)


def pnc_decide(y: np.ndarray, thr: PncThreshold) -> np.ndarray:
    """Map received superposition samples to the estimated XOR block.

    |y| > tau declares an agreeing pair (XOR 0); |y| <= tau declares the
    middle region (XOR 1).  Boundary samples go to XOR 1 for determinism.
    """
    if thr.tau < 0.0:
        raise ValueError(f"threshold must be nonnegative, got {thr.tau}")
    return (np.abs(np.asarray(y, dtype=np.float64)) <= thr.tau).astype(np.uint8)


def pnc_symbol_error_closed(gamma: float, rho: float) -> float:
    """Per-symbol XOR decision error at the optimal threshold (closed form)."""
    _check_gamma_rho(gamma, rho)
    if math.isinf(gamma):
        return 0.0
    tau_bar = optimal_threshold(gamma, rho).tau_bar
    s = 2.0 * math.sqrt(2.0 * gamma)
    return (
        2.0 * (1.0 - rho) * q_function(tau_bar)
        + rho * q_function(s - tau_bar)
        - rho * q_function(s + tau_bar)
    )


def pnc_symbol_error_numeric(gamma: float, rho: float, tau: float) -> float:
    """Per-symbol XOR decision error by adaptive quadrature, for any threshold.

    Integrates the conditional Gaussian densities over the mis-decision
    regions: the sum-0 density over both outer tails, and the two |sum| = 2
    densities over the middle region.  Serves as the independent oracle for
    the closed form and for threshold optimality.
    """
    if not gamma > 0.0 or math.isinf(gamma):
        raise ValueError(f"SNR gamma must be finite and > 0, got {gamma}")
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"equal factor rho must be in [0, 1], got {rho}")
    if tau < 0.0:
        raise ValueError(f"threshold must be nonnegative, got {tau}")
    n0 = 1.0 / gamma
    norm = math.sqrt(1.0 / (math.pi * n0))

    def center0(y: float) -> float:
        return norm * math.exp(-y * y / n0)

    def center_pos(y: float) -> float:
        return norm * math.exp(-((y - 2.0) ** 2) / n0)

    def center_neg(y: float) -> float:
        return norm * math.exp(-((y + 2.0) ** 2) / n0)

    kw = {"epsabs": 1e-12, "epsrel": 1e-12, "limit": 200}
    upper = quad(center0, tau, math.inf, **kw)[0]
    lower = quad(center0, -math.inf, -tau, **kw)[0]
    mid_pos = quad(center_pos, -tau, tau, **kw)[0]
    mid_neg = quad(center_neg, -tau, tau, **kw)[0]
    return (1.0 - rho) * (upper + lower) + 0.5 * rho * (mid_pos + mid_neg)


def pnc_block_error(gamma: float, rho: float, n: int) -> float:
    """Relay block error over n independent symbols: 1 - (1 - P_sym)^n."""
    if n < 1:
        raise ValueError(f"block length n must be >= 1, got {n}")
    return 1.0 - (1.0 - pnc_symbol_error_closed(gamma, rho)) ** n
