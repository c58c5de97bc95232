"""Monte Carlo engine for full exchange rounds with reproducible seeding.

estimate() splits the round budget into chunks; chunk k draws from an
independent PCG64 stream seeded with SeedSequence((seed, k)), and results
are commutative sums of per-chunk counters, so estimates are bit-identical
for a fixed (seed, chunks) regardless of how chunks would be scheduled.
Within a chunk, rounds are simulated in fixed-size vectorised sub-batches
with a fixed draw order (source bits, agreement uniforms, uplink noise,
then downlink noise for each destination in turn).

run_round_hpnc / run_round_conventional execute a single round through the
same physical chain for inspection and testing; they draw per-round, so
they do not share the chunk engine's stream layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .huffman import HuffmanCodebook, build_codebook, decode_exact, encode
from .model import SystemParams, generate_correlated_pair, xor_block
from .phy import awgn, bpsk_modulate, hard_demod
from .pnc import PncThreshold, optimal_threshold, pnc_decide

SCHEME_HPNC = "hpnc"
SCHEME_CONVENTIONAL = "conventional"

_SUBBATCH = 1 << 16


@dataclass(frozen=True)
class RoundOutcome:
    """Result of one exchange round.

    t1_correct: the block recovered at T1 equals a2 (direction 2 -> 1).
    t2_correct: the block recovered at T2 equals a1 (direction 1 -> 2).
    downlink_bits: broadcast payload length for this round.
    relay_block_correct: diagnostic, relay XOR estimate equals the true XOR.
    """

    t1_correct: bool
    t2_correct: bool
    downlink_bits: int
    relay_block_correct: bool


@dataclass(frozen=True)
class SimEstimate:
    """Aggregated Monte Carlo estimate for one (scheme, params) point.

    Standard errors are binomial: sqrt(p*(1-p)/rounds).  Throughput counts
    correctly decoded blocks times n per channel use, with n uplink uses plus
    the downlink payload per round, so the noiseless baseline reaches 1.0 and
    the compressed scheme approaches 1/C as the round count grows.
    """

    scheme: str
    params: SystemParams
    rounds: int
    bler_12: float
    bler_12_se: float
    bler_21: float
    bler_21_se: float
    throughput: float
    mean_downlink_bits: float
    relay_bler: float
    seed: int
    chunks: int


def relay_threshold(params: SystemParams) -> PncThreshold:
    """Decision threshold the compressed relay uses for these parameters.

    r = 1 has a deterministic all-zero XOR block; the zero threshold then
    declares XOR 0 almost surely, which is the posterior-optimal rule.
    """
    if params.rho >= 1.0:
        return PncThreshold(0.0, 0.0)
    return optimal_threshold(params.gamma, params.rho)


def run_round_hpnc(
    params: SystemParams,
    cb: HuffmanCodebook,
    thr: PncThreshold,
    rng: np.random.Generator,
) -> RoundOutcome:
    """One compressed-relay exchange round scored against ground truth."""
    a1, a2 = generate_correlated_pair(params, rng)
    b = xor_block(a1, a2)
    y_up = awgn(bpsk_modulate(a1) + bpsk_modulate(a2), params.gamma, rng)
    b_hat = pnc_decide(y_up, thr)
    codeword = encode(cb, b_hat)
    tx = bpsk_modulate(codeword)

    correct = []
    for own, want in ((a1, a2), (a2, a1)):
        rx = hard_demod(awgn(tx, params.gamma, rng))
        decoded = decode_exact(cb, rx)
        if decoded is None:
            correct.append(False)
        else:
            correct.append(bool(np.array_equal(xor_block(own, decoded), want)))

    return RoundOutcome(
        t1_correct=correct[0],
        t2_correct=correct[1],
        downlink_bits=int(codeword.size),
        relay_block_correct=bool(np.array_equal(b_hat, b)),
    )


def run_round_conventional(
    params: SystemParams,
    thr_half: PncThreshold,
    rng: np.random.Generator,
) -> RoundOutcome:
    """One non-compressed baseline round.

    The baseline neither knows nor exploits the source correlation: the
    sources are modelled as uncorrelated and the relay thresholds for
    rho = 0.5, matching the baseline's reference BLER expression.
    """
    half = replace(params, r=0.0)
    a1, a2 = generate_correlated_pair(half, rng)
    y_up = awgn(bpsk_modulate(a1) + bpsk_modulate(a2), params.gamma, rng)
    b_hat = pnc_decide(y_up, thr_half)
    tx = bpsk_modulate(b_hat)

    correct = []
    for own, want in ((a1, a2), (a2, a1)):
        rx = hard_demod(awgn(tx, params.gamma, rng))
        correct.append(bool(np.array_equal(xor_block(own, rx), want)))

    b = xor_block(a1, a2)
    return RoundOutcome(
        t1_correct=correct[0],
        t2_correct=correct[1],
        downlink_bits=params.n,
        relay_block_correct=bool(np.array_equal(b_hat, b)),
    )


def _child_rng(seed: int, chunk_index: int) -> np.random.Generator:
    # published stream derivation: PCG64 seeded from SeedSequence((seed, k))
    return np.random.default_rng(np.random.SeedSequence((seed, chunk_index)))


def _draw_pair_bits(rng, m: int, n: int, rho: float):
    a1 = rng.integers(0, 2, size=(m, n), dtype=np.uint8)
    disagree = rng.random((m, n)) >= rho
    a2 = a1 ^ disagree.astype(np.uint8)
    return a1, a2


def _chunk_hpnc(
    n: int,
    rho: float,
    gamma: float,
    cb: HuffmanCodebook,
    tau: float,
    rounds: int,
    rng: np.random.Generator,
):
    sigma = math.sqrt(0.5 / gamma)
    lengths = cb.lengths.astype(np.int64)
    code_bits = cb._code_bits
    max_len = cb.max_len
    tables = cb.decode_tables()
    pow_n = (1 << np.arange(n - 1, -1, -1)).astype(np.int64)
    if tables is not None:
        firsts, counts, offsets, canon_blocks = tables
        pow_l = (1 << np.arange(max_len - 1, -1, -1)).astype(np.int64)

    err = [0, 0]  # [direction 2->1 at T1, direction 1->2 at T2]
    relay_err = 0
    dl_bits = 0
    remaining = rounds
    while remaining:
        m = min(_SUBBATCH, remaining)
        remaining -= m
        a1, a2 = _draw_pair_bits(rng, m, n, rho)
        y = (
            (1.0 - 2.0 * a1)
            + (1.0 - 2.0 * a2)
            + sigma * rng.standard_normal((m, n))
        )
        b_hat = (np.abs(y) <= tau).astype(np.uint8)
        v_true = (a1 ^ a2).astype(np.int64) @ pow_n
        v_hat = b_hat.astype(np.int64) @ pow_n
        relay_err += int(np.count_nonzero(v_hat != v_true))

        lens = lengths[v_hat]
        dl_bits += int(lens.sum())
        cw = code_bits[v_hat]
        tx = 1.0 - 2.0 * cw
        mask = np.arange(max_len) < lens[:, None]

        for d in range(2):
            rx = (tx + sigma * rng.standard_normal((m, max_len))) < 0
            rx &= mask
            if tables is not None:
                full = rx.astype(np.int64) @ pow_l
                value = full >> (max_len - lens)
                pos = value - firsts[lens]
                hit = (counts[lens] > 0) & (pos >= 0) & (pos < counts[lens])
                block = canon_blocks[np.where(hit, offsets[lens] + pos, 0)]
                ok = hit & (block == v_true)
            else:
                # deep codebook: exact Python-int decode per round
                ok = np.zeros(m, dtype=bool)
                for i in range(m):
                    value = 0
                    for bit in rx[i, : lens[i]]:
                        value = (value << 1) | int(bit)
                    ok[i] = cb.decode_value(int(lens[i]), value) == v_true[i]
            err[d] += m - int(np.count_nonzero(ok))

    return err[1], err[0], relay_err, dl_bits


def _chunk_conventional(
    n: int,
    gamma: float,
    tau: float,
    rounds: int,
    rng: np.random.Generator,
):
    sigma = math.sqrt(0.5 / gamma)
    err = [0, 0]
    relay_err = 0
    remaining = rounds
    while remaining:
        m = min(_SUBBATCH, remaining)
        remaining -= m
        a1, a2 = _draw_pair_bits(rng, m, n, 0.5)
        y = (
            (1.0 - 2.0 * a1)
            + (1.0 - 2.0 * a2)
            + sigma * rng.standard_normal((m, n))
        )
        b_hat = (np.abs(y) <= tau).astype(np.uint8)
        b = a1 ^ a2
        relay_err += int(np.count_nonzero(np.any(b_hat != b, axis=1)))

        tx = 1.0 - 2.0 * b_hat
        for d in range(2):
            rx = ((tx + sigma * rng.standard_normal((m, n))) < 0).astype(np.uint8)
            ok = np.all(rx == b, axis=1)
            err[d] += m - int(np.count_nonzero(ok))

    return err[1], err[0], relay_err, rounds * n


def estimate(
    params: SystemParams,
    scheme: str,
    rounds: int,
    seed: int,
    chunks: int = 8,
) -> SimEstimate:
    """Monte Carlo BLER and throughput estimate over `rounds` exchange rounds.

    Rounds are split as evenly as possible over `chunks` independent streams;
    the result depends only on (params, scheme, rounds, seed, chunks).
    """
    if scheme not in (SCHEME_HPNC, SCHEME_CONVENTIONAL):
        raise ValueError(f"scheme must be 'hpnc' or 'conventional', got {scheme!r}")
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    if chunks < 1:
        raise ValueError(f"chunks must be >= 1, got {chunks}")
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")

    if scheme == SCHEME_HPNC:
        cb = build_codebook(params.n, params.rho)
        tau = relay_threshold(params).tau
    else:
        cb = None
        tau = optimal_threshold(params.gamma, 0.5).tau

    base, extra = divmod(rounds, chunks)
    err12 = err21 = relay_err = dl_bits = 0
    for k in range(chunks):
        chunk_rounds = base + (1 if k < extra else 0)
        if chunk_rounds == 0:
            continue
        rng = _child_rng(seed, k)
        if scheme == SCHEME_HPNC:
            e12, e21, rerr, dl = _chunk_hpnc(
                params.n, params.rho, params.gamma, cb, tau, chunk_rounds, rng
            )
        else:
            e12, e21, rerr, dl = _chunk_conventional(
                params.n, params.gamma, tau, chunk_rounds, rng
            )
        err12 += e12
        err21 += e21
        relay_err += rerr
        dl_bits += dl

    p12 = err12 / rounds
    p21 = err21 / rounds
    uses = rounds * params.n + dl_bits
    correct_blocks = 2 * rounds - err12 - err21
    return SimEstimate(
        scheme=scheme,
        params=params,
        rounds=rounds,
        bler_12=p12,
        bler_12_se=math.sqrt(p12 * (1.0 - p12) / rounds),
        bler_21=p21,
        bler_21_se=math.sqrt(p21 * (1.0 - p21) / rounds),
        throughput=correct_blocks * params.n / uses,
        mean_downlink_bits=dl_bits / rounds,
        relay_bler=relay_err / rounds,
        seed=seed,
        chunks=chunks,
    )
