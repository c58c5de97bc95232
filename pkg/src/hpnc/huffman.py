"""Block Huffman code over all 2^n XOR blocks and compression-rate analysis.

The code is designed from the agreement-law block distribution and covers
the full alphabet, including blocks of zero design probability: the relay
encodes its noisy XOR estimate, which can be any block, so every block must
have a codeword.  Merge comparisons use exact integer weights (probabilities
scaled to a common denominator), so tie resolution, and hence the codebook,
is bit-identical across platforms.  Codewords are canonical: blocks sorted
by (length, block value) receive consecutive code values within each length.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .model import block_to_int, int_to_block

MAX_BLOCK_LEN = 16

# canonical code values fit an int64 only up to this depth; deeper codebooks
# fall back to exact Python-int decoding
FAST_DECODE_MAX_LEN = 62


def binary_entropy(p: float) -> float:
    """Entropy of a Bernoulli(p) bit in bits, with 0*log(0) = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def theoretical_rate(r: float) -> float:
    """Entropy-rate floor of the two-slot exchange: 1/2 + H[(1+r)/2]/2."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"correlation factor r must be in [0, 1], got {r}")
    return 0.5 + 0.5 * binary_entropy((1.0 + r) / 2.0)


def compression_rate(n: int, mean_len: float) -> float:
    """Bits sent per exchange relative to the uncompressed 2n: (n + mean)/(2n)."""
    if mean_len < 1.0:
        raise ValueError(f"mean codeword length must be >= 1, got {mean_len}")
    return (n + mean_len) / (2.0 * n)


def _integer_weights(n: int, rho: float) -> list[int]:
    """Exact block weights: rho^zeros (1-rho)^ones scaled by a common denominator."""
    frac = Fraction(rho)
    num = frac.numerator
    comp = frac.denominator - num
    return [num ** (n - bin(v).count("1")) * comp ** bin(v).count("1") for v in range(1 << n)]


def _leaf_depths(parent: list[int], leaf_count: int) -> np.ndarray:
    depth = [0] * len(parent)
    for i in range(len(parent) - 2, -1, -1):
        depth[i] = depth[parent[i]] + 1
    return np.array(depth[:leaf_count], dtype=np.int32)


def _huffman_lengths(weights: list[int]) -> np.ndarray:
    """Optimal code lengths; merge ties broken by (weight, smallest block value)."""
    count = len(weights)
    parent = [-1] * (2 * count - 1)
    heap = [(w, v, v) for v, w in enumerate(weights)]
    heapq.heapify(heap)
    next_id = count
    while len(heap) > 1:
        wa, ma, ia = heapq.heappop(heap)
        wb, mb, ib = heapq.heappop(heap)
        parent[ia] = next_id
        parent[ib] = next_id
        heapq.heappush(heap, (wa + wb, min(ma, mb), next_id))
        next_id += 1
    return _leaf_depths(parent, count)


def _huffman_lengths_alt(weights: list[int]) -> np.ndarray:
    """Independent re-implementation with a different tie-break.

    Leaves enter the queue in descending block order and ties are broken by
    insertion order, so equal-weight nodes pair differently than in the
    primary construction.  Only used as an optimality oracle.
    """
    count = len(weights)
    parent = [-1] * (2 * count - 1)
    heap = []
    tick = 0
    for v in range(count - 1, -1, -1):
        heap.append((weights[v], tick, v))
        tick += 1
    heapq.heapify(heap)
    next_id = count
    while len(heap) > 1:
        wa, _, ia = heapq.heappop(heap)
        wb, _, ib = heapq.heappop(heap)
        parent[ia] = next_id
        parent[ib] = next_id
        heapq.heappush(heap, (wa + wb, tick, next_id))
        tick += 1
        next_id += 1
    return _leaf_depths(parent, count)


def cross_check_optimality(n: int, rho: float) -> tuple[int, int]:
    """Exact weighted total lengths from the two constructions.

    Both run on the same exact integer weights, so if each tree is optimal
    the two totals are equal as integers even when codeword assignments
    differ.
    """
    weights = _integer_weights(n, rho)
    primary = _huffman_lengths(weights)
    alt = _huffman_lengths_alt(weights)
    total_primary = sum(w * int(l) for w, l in zip(weights, primary))
    total_alt = sum(w * int(l) for w, l in zip(weights, alt))
    return total_primary, total_alt


class HuffmanCodebook:
    """Canonical prefix code over all 2^n blocks.

    Blocks are identified with integers via MSB-first bit order.  The decode
    side exploits the canonical structure: codewords of one length are
    consecutive integers, so a received word is valid iff its value falls in
    that length's range.
    """

    def __init__(self, n: int, rho: float, lengths: np.ndarray):
        size = 1 << n
        lengths = np.asarray(lengths, dtype=np.int32)
        if lengths.shape != (size,):
            raise ValueError(f"expected {size} lengths, got shape {lengths.shape}")
        self.n = n
        self.rho = rho
        self.lengths = lengths
        self.max_len = int(lengths.max())

        order = sorted(range(size), key=lambda v: (int(lengths[v]), v))
        code_values: list[int] = [0] * size
        code = 0
        prev_len: int | None = None
        for v in order:
            length = int(lengths[v])
            if prev_len is not None:
                code = (code + 1) << (length - prev_len)
            code_values[v] = code
            prev_len = length
        # a Huffman code is complete, so the last canonical value must
        # exhaust its level
        if code + 1 != 1 << prev_len:
            raise ValueError("code lengths do not satisfy Kraft equality")
        self._code_values = code_values

        bits = np.zeros((size, self.max_len), dtype=np.uint8)
        for v in range(size):
            length = int(lengths[v])
            value = code_values[v]
            for j in range(length):
                bits[v, j] = (value >> (length - 1 - j)) & 1
        self._code_bits = bits

        self._decode_map = {
            (int(lengths[v]), code_values[v]): v for v in range(size)
        }

        # per-length tables over the canonical order, for vectorised decoding
        self._canon_blocks = np.array(order, dtype=np.int64)
        counts = np.bincount(lengths, minlength=self.max_len + 1).astype(np.int64)
        offsets = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)
        self._len_counts = counts
        self._len_offsets = offsets
        if self.max_len <= FAST_DECODE_MAX_LEN:
            firsts = np.zeros(self.max_len + 1, dtype=np.int64)
            for length in range(self.max_len + 1):
                if counts[length]:
                    firsts[length] = code_values[order[offsets[length]]]
            self._len_firsts = firsts
        else:
            self._len_firsts = None

    def length_of(self, block: np.ndarray) -> int:
        return int(self.lengths[block_to_int(block)])

    def codeword_bits(self, value: int) -> np.ndarray:
        """Codeword of the block with the given integer value, as a bit array."""
        return self._code_bits[value, : int(self.lengths[value])].copy()

    def kraft_terms(self) -> int:
        """Sum of 2^(max_len - length) over all blocks; equals 2^max_len iff complete."""
        return sum(1 << (self.max_len - int(l)) for l in self.lengths)

    def decode_tables(self):
        """(first_value, count, offset, canonical blocks) int64 tables, or None
        when codewords exceed 62 bits and need exact Python-int decoding."""
        if self._len_firsts is None:
            return None
        return self._len_firsts, self._len_counts, self._len_offsets, self._canon_blocks

    def decode_value(self, length: int, value: int) -> int | None:
        """Block value for an exact-length canonical code value, else None."""
        return self._decode_map.get((length, value))


@lru_cache(maxsize=256)
def build_codebook(n: int, rho: float) -> HuffmanCodebook:
    """Design the canonical block code for the agreement law (n, rho).

    rho = 1 is allowed: all mass sits on the all-zero block and the remaining
    zero-weight blocks still receive codewords, ending deepest in the tree.
    """
    if not 1 <= n <= MAX_BLOCK_LEN:
        raise ValueError(f"block length n must be in [1, {MAX_BLOCK_LEN}], got {n}")
    if not 0.5 <= rho <= 1.0:
        raise ValueError(f"equal factor rho must be in [0.5, 1], got {rho}")
    return HuffmanCodebook(n, rho, _huffman_lengths(_integer_weights(n, rho)))


def encode(cb: HuffmanCodebook, block: np.ndarray) -> np.ndarray:
    """Codeword bits for a block."""
    block = np.asarray(block)
    if block.size != cb.n:
        raise ValueError(f"expected a {cb.n}-bit block, got {block.size} bits")
    return cb.codeword_bits(block_to_int(block))


def decode_exact(cb: HuffmanCodebook, bits: np.ndarray) -> np.ndarray | None:
    """Decode a bit sequence that must be exactly one codeword.

    Returns the block, or None when the walk does not land on a leaf after
    consuming exactly all input bits (truncated, padded or empty input).
    The caller treats None as a block error.
    """
    bits = np.asarray(bits)
    length = int(bits.size)
    if length == 0 or length > cb.max_len:
        return None
    value = block_to_int(bits)
    block = cb.decode_value(length, value)
    if block is None:
        return None
    return int_to_block(block, cb.n)


@dataclass(frozen=True)
class LengthDistribution:
    """Probability mass over codeword lengths for one codebook and source law."""

    support: tuple[int, ...]
    pmf: dict[int, float]
    mean: float


def length_distribution(cb: HuffmanCodebook, rho: float) -> LengthDistribution:
    """Exact length pmf by enumerating all 2^n blocks under the given rho.

    rho may differ from the design value, which supports sensitivity checks
    of a mismatched codebook.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"equal factor rho must be in [0, 1], got {rho}")
    n = cb.n
    ones = np.array([bin(v).count("1") for v in range(1 << n)], dtype=np.float64)
    probs = rho ** (n - ones) * (1.0 - rho) ** ones
    mass = np.bincount(cb.lengths, weights=probs, minlength=cb.max_len + 1)
    support = tuple(int(k) for k in np.nonzero(cb._len_counts)[0])
    pmf = {k: float(mass[k]) for k in support}
    mean = math.fsum(k * pmf[k] for k in support)
    return LengthDistribution(support=support, pmf=pmf, mean=mean)


def average_length(ld: LengthDistribution) -> float:
    """Mean codeword length of a length distribution."""
    return ld.mean


def codebook_to_table(cb: HuffmanCodebook) -> str:
    """Text table, one line per block: block bits, length, canonical codeword."""
    lines = []
    for v in range(1 << cb.n):
        length = int(cb.lengths[v])
        lines.append(
            f"{v:0{cb.n}b} {length} {cb._code_values[v]:0{length}b}"
        )
    return "\n".join(lines) + "\n"


def codebook_from_table(text: str) -> HuffmanCodebook:
    """Rebuild a codebook from its text table, verifying the listed codewords.

    The imported codebook carries no design rho (set to NaN); pass rho
    explicitly to length_distribution when analysing it.
    """
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("empty codebook table")
    n = len(rows[0][0])
    size = 1 << n
    if len(rows) != size:
        raise ValueError(f"expected {size} rows for n = {n}, got {len(rows)}")
    lengths = np.zeros(size, dtype=np.int32)
    listed = {}
    for bits_str, len_str, code_str in rows:
        v = int(bits_str, 2)
        length = int(len_str)
        if length != len(code_str):
            raise ValueError(f"row {bits_str}: length field {length} does not match codeword")
        lengths[v] = length
        listed[v] = int(code_str, 2)
    cb = HuffmanCodebook(n, math.nan, lengths)
    for v in range(size):
        if listed[v] != cb._code_values[v]:
            raise ValueError(f"row {v:0{n}b}: codeword is not canonical")
    return cb
