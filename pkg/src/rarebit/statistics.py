"""Correlation of order 2, subword complexity and block-frequency diagnostics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import AlphabetError, PreconditionError
from .sequences import Sequence

MAX_CORRELATION_N = 1 << 31


def _binary(S) -> np.ndarray:
    if isinstance(S, Sequence):
        if S.m != 2:
            raise AlphabetError(f"this measure needs a binary sequence, got alphabet size {S.m}")
        return S.symbols
    arr = np.asarray(S, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise AlphabetError("this measure needs a binary sequence")
    return arr.astype(np.uint8)


@dataclass(frozen=True)
class CorrelationResult:
    N: int
    value: int
    M: int
    d1: int
    d2: int

    @property
    def argmax(self) -> tuple[int, int, int]:
        return (self.M, self.d1, self.d2)

    def random_ratio(self) -> float:
        """C2 / sqrt(N log(N/2)): the scale a random sequence would show."""
        if self.N <= 2:
            return math.nan
        return self.value / math.sqrt(self.N * math.log(self.N / 2))


def _best_window(P: np.ndarray) -> tuple[int, int, int]:
    """Max |P[b] - P[a]| over a < b, with the smallest a then smallest b.

    Returns (value, a, b).  P has at least two entries and consecutive
    entries differ by 1, so the value is max(P) - min(P) > 0.
    """
    lo, hi = P.min(), P.max()
    value = int(hi - lo)
    is_lo = np.flatnonzero(P == lo)
    is_hi = np.flatnonzero(P == hi)
    best = None
    for starts, ends in ((is_lo, is_hi), (is_hi, is_lo)):
        a = int(starts[0])
        later = ends[ends > a]
        if later.size:
            cand = (a, int(later[0]))
            if best is None or cand < best:
                best = cand
    a, b = best
    return value, a, b


def correlation2(S, N: int) -> CorrelationResult:
    """Correlation measure of order 2.

    For a lag l = d2 - d1 the window sums are differences of prefix sums of
    v_n = (-1)^(s_n + s_{n+l}), n < N - l, so the best window per lag is
    max - min of those prefix sums.  Ties go to the smallest l, then d1,
    then M.
    """
    s = _binary(S)
    if not 2 <= N <= len(s):
        raise PreconditionError(f"N must satisfy 2 <= N <= {len(s)}, got {N}")
    if N > MAX_CORRELATION_N:
        raise PreconditionError(f"N is capped at 2^31, got {N}")
    x = s[:N].astype(np.int64)
    best = None
    for lag in range(1, N):
        v = 1 - 2 * (x[: N - lag] ^ x[lag:])
        P = np.empty(N - lag + 1, dtype=np.int64)
        P[0] = 0
        np.cumsum(v, out=P[1:])
        value, a, b = _best_window(P)
        if best is None or value > best[0]:
            best = (value, lag, a, b)
    value, lag, a, b = best
    return CorrelationResult(N, value, M=b - a - 1, d1=a, d2=a + lag)


def correlation_profile(S, checkpoints) -> list[CorrelationResult]:
    return [correlation2(S, N) for N in checkpoints]


@dataclass(frozen=True)
class BlockStats:
    """Counts of the length-k blocks of a prefix.

    Blocks are encoded as integers with the first symbol as the most
    significant bit, so block "011" has code 3.
    """

    N: int
    k: int
    codes: np.ndarray
    counts: np.ndarray

    @property
    def windows(self) -> int:
        return self.N - self.k + 1

    @property
    def p_k(self) -> int:
        return int(self.codes.size)

    def count(self, block: str) -> int:
        if len(block) != self.k:
            raise ValueError(f"block must have length {self.k}")
        code = int(block, 2)
        i = np.searchsorted(self.codes, code)
        if i < self.codes.size and self.codes[i] == code:
            return int(self.counts[i])
        return 0

    def as_dict(self) -> dict[str, int]:
        return {format(int(c), f"0{self.k}b"): int(n) for c, n in zip(self.codes, self.counts)}

    @property
    def max_deviation(self) -> float:
        target = 2.0 ** -self.k
        dev = float(np.abs(self.counts / self.windows - target).max()) if self.counts.size else 0.0
        if self.k < 63 and self.p_k < (1 << self.k):
            # an absent block deviates by exactly 2^-k
            dev = max(dev, target)
        return dev


def _block_codes(x: np.ndarray, k: int) -> np.ndarray:
    W = x.size - k + 1
    codes = np.zeros(W, dtype=np.uint64)
    for j in range(k):
        codes = (codes << np.uint64(1)) | x[j:j + W].astype(np.uint64)
    return codes


def subword_complexity(S, k: int, N: int | None = None) -> BlockStats:
    s = _binary(S)
    N = len(s) if N is None else N
    if not 1 <= N <= len(s):
        raise PreconditionError(f"N must satisfy 1 <= N <= {len(s)}, got {N}")
    if not 1 <= k <= N:
        raise PreconditionError(f"block length must satisfy 1 <= k <= {N}, got {k}")
    x = s[:N]
    if k <= 64:
        codes, counts = np.unique(_block_codes(x, k), return_counts=True)
        return BlockStats(N, k, codes, counts)
    # wide blocks: hash the raw bytes, then encode the distinct ones
    tally: dict[bytes, int] = {}
    raw = x.tobytes()
    for i in range(N - k + 1):
        b = raw[i:i + k]
        tally[b] = tally.get(b, 0) + 1
    keys = sorted(tally, key=lambda b: int("".join(str(c) for c in b), 2))
    codes = np.array([int("".join(str(c) for c in b), 2) for b in keys], dtype=object)
    counts = np.array([tally[b] for b in keys], dtype=np.int64)
    return BlockStats(N, k, codes, counts)


def normality_deviation(S, k_max: int, N: int | None = None) -> list[BlockStats]:
    s = _binary(S)
    N = len(s) if N is None else N
    if k_max < 1 or N < 2 or k_max > math.log2(N) - 2:
        raise PreconditionError(f"k_max={k_max} is too large for N={N} (need k_max <= log2(N) - 2)")
    return [subword_complexity(s, k, N) for k in range(1, k_max + 1)]


CORRELATION_COLUMNS = ("N", "C2", "M", "d1", "d2")


def correlation_csv(results: list[CorrelationResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CORRELATION_COLUMNS)
    for r in results:
        w.writerow((r.N, r.value, r.M, r.d1, r.d2))
    return buf.getvalue()
