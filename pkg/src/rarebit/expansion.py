"""Expansion complexity over F_2.

Truncated power series are packed into Python ints: bit i holds the
coefficient of x^i.  Bivariate polynomials h(x, y) are sets of exponent
pairs (i, j) standing for x^i y^j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from .errors import AlphabetError, PreconditionError
from .sequences import Sequence

DEFAULT_DMAX = 30


@dataclass(frozen=True)
class TruncatedSeries:
    bits: int
    N: int

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("truncation order must be >= 0")
        object.__setattr__(self, "bits", self.bits & ((1 << self.N) - 1))

    @classmethod
    def one(cls, N: int) -> "TruncatedSeries":
        return cls(1, N)

    @classmethod
    def x_power(cls, i: int, N: int) -> "TruncatedSeries":
        return cls(1 << i if i < N else 0, N)

    def coefficients(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.N)]

    def is_zero(self) -> bool:
        return self.bits == 0

    def shift(self, i: int) -> "TruncatedSeries":
        """Multiply by x^i."""
        return TruncatedSeries(self.bits << i, self.N)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        _same_order(self, other)
        return TruncatedSeries(self.bits ^ other.bits, self.N)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_mul(self, other)


def _same_order(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.N != b.N:
        raise ValueError(f"truncation orders differ: {a.N} vs {b.N}")


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-packed F_2[x] polynomials."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    if b == 0:
        return 0
    table = [0] * 256
    for w in range(1, 256):
        low = w & -w
        table[w] = table[w ^ low] ^ (a << (low.bit_length() - 1))
    out = 0
    shift = 0
    while b:
        byte = b & 0xFF
        if byte:
            out ^= table[byte] << shift
        b >>= 8
        shift += 8
    return out


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _same_order(a, b)
    return TruncatedSeries(clmul(a.bits, b.bits), a.N)


def _binary_symbols(S) -> np.ndarray:
    if isinstance(S, Sequence):
        if S.m != 2:
            raise AlphabetError(f"expansion complexity needs a binary sequence, got alphabet size {S.m}")
        return S.symbols
    arr = np.asarray(S, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise AlphabetError("expansion complexity needs a binary sequence")
    return arr.astype(np.uint8)


def series_from(S, N: int) -> TruncatedSeries:
    s = _binary_symbols(S)
    if not 0 <= N <= len(s):
        raise PreconditionError(f"N must satisfy 0 <= N <= {len(s)}, got {N}")
    packed = np.packbits(s[:N], bitorder="little").tobytes()
    return TruncatedSeries(int.from_bytes(packed, "little"), N)


@dataclass(frozen=True)
class BivariatePolyF2:
    monomials: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        mons = frozenset((int(i), int(j)) for i, j in self.monomials)
        if any(i < 0 or j < 0 for i, j in mons):
            raise ValueError("exponents must be nonnegative")
        object.__setattr__(self, "monomials", mons)

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    @property
    def total_degree(self) -> int:
        if not self.monomials:
            return -1
        return max(i + j for i, j in self.monomials)

    def __add__(self, other: "BivariatePolyF2") -> "BivariatePolyF2":
        return BivariatePolyF2(self.monomials ^ other.monomials)

    def to_text(self) -> str:
        """Exchange format: one ``i,j`` pair per line, sorted."""
        return "".join(f"{i},{j}\n" for i, j in sorted(self.monomials, key=lambda m: (m[1], m[0])))

    @classmethod
    def from_text(cls, text: str) -> "BivariatePolyF2":
        mons: set = set()
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                i, j = (int(tok) for tok in line.split(","))
            except ValueError:
                raise ValueError(f"line {lineno}: expected 'i,j', got {line!r}") from None
            mons ^= {(i, j)}
        return cls(frozenset(mons))

    @classmethod
    def from_x_polys(cls, parts: dict[int, int]) -> "BivariatePolyF2":
        """Build sum_j c_j(x) y^j from bit-packed x-polynomials ``{j: c_j}``."""
        mons = set()
        for j, c in parts.items():
            i = 0
            while c:
                if c & 1:
                    mons.add((i, j))
                c >>= 1
                i += 1
        return cls(frozenset(mons))

    def __str__(self):
        if not self.monomials:
            return "0"
        terms = []
        for i, j in sorted(self.monomials, key=lambda m: (-m[1], -m[0])):
            xs = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            ys = "" if j == 0 else ("y" if j == 1 else f"y^{j}")
            terms.append((xs + ys) or "1")
        return " + ".join(terms)


def one_plus_x_power(e: int) -> int:
    """(1 + x)^e over F_2, bit-packed (Lucas: coefficient i is odd iff i & e == i)."""
    out = 0
    i = e
    # enumerate submasks of e
    while True:
        out |= 1 << i
        if i == 0:
            break
        i = (i - 1) & e
    return out


def pattern_annihilator(k: int) -> BivariatePolyF2:
    """(x+1)^(2^k+1) y^2 + (x+1)^(2^k) y + x^(2^k-1), which kills the 1^k-pattern sequence.

    k = 1 gives (x+1)^3 y^2 + (x+1)^2 y + x for Thue-Morse.
    """
    K = 1 << k
    return BivariatePolyF2.from_x_polys({2: one_plus_x_power(K + 1), 1: one_plus_x_power(K), 0: 1 << (K - 1)})


def thue_morse_annihilator() -> BivariatePolyF2:
    return pattern_annihilator(1)


def evaluate_at_series(h: BivariatePolyF2, G: TruncatedSeries) -> TruncatedSeries:
    """h(x, G(x)) mod x^N."""
    N = G.N
    by_j: dict[int, int] = {}
    for i, j in h.monomials:
        if i < N:
            by_j[j] = by_j.get(j, 0) ^ (1 << i)
    acc = 0
    power = TruncatedSeries.one(N)
    for j in range(max(by_j, default=-1) + 1):
        if j in by_j:
            acc ^= clmul(by_j[j], power.bits)
        power = series_mul(power, G)
    return TruncatedSeries(acc, N)


def verify_annihilator(h: BivariatePolyF2, S, N: int) -> bool:
    if h.is_zero:
        raise PreconditionError("annihilator candidate must be a nonzero polynomial")
    return evaluate_at_series(h, series_from(S, N)).is_zero()


@dataclass(frozen=True)
class ExpansionResult:
    N: int
    E: int
    annihilator: Optional[BivariatePolyF2] = None


@dataclass(frozen=True)
class Exceeded:
    """No annihilator of total degree <= d_max exists."""

    N: int
    d_max: int


def expansion_complexity(S, N: int, d_max: int = DEFAULT_DMAX) -> Union[ExpansionResult, Exceeded]:
    """Least total degree of a nonzero h with h(x, G(x)) = 0 mod x^N.

    Columns x^i G^j (i + j <= D) are pushed into an F_2 echelon basis in
    order of total degree; the first column that reduces to zero closes the
    search, and the recorded combination is the annihilator.
    """
    if N < 1:
        raise PreconditionError("N must be >= 1")
    if d_max < 1:
        raise PreconditionError("d_max must be >= 1")
    G = series_from(S, N)
    if G.is_zero():
        return ExpansionResult(N, 0)
    return _least_degree(G, d_max)


def _least_degree(G: TruncatedSeries, d_max: int) -> Union[ExpansionResult, Exceeded]:
    N = G.N
    mask = (1 << N) - 1
    monomials: list[tuple[int, int]] = []
    # pivot (lowest set bit) -> (vector, combination of column indices)
    basis: dict[int, tuple[int, int]] = {}
    powers = [1]

    def insert(vec: int, idx: int) -> Optional[int]:
        combo = 1 << idx
        while vec:
            low = (vec & -vec).bit_length() - 1
            hit = basis.get(low)
            if hit is None:
                basis[low] = (vec, combo)
                return None
            vec ^= hit[0]
            combo ^= hit[1]
        return combo

    for D in range(0, d_max + 1):
        if D > 0:
            powers.append(clmul(powers[-1], G.bits) & mask)
        for j in range(D + 1):
            i = D - j
            monomials.append((i, j))
            kernel = insert((powers[j] << i) & mask, len(monomials) - 1)
            if kernel is not None:
                h = BivariatePolyF2(frozenset(monomials[b] for b in range(len(monomials)) if kernel >> b & 1))
                return ExpansionResult(N, D, h)
    return Exceeded(N, d_max)


def expansion_profile(S, checkpoints: Iterable[int], d_max: int = DEFAULT_DMAX) -> list:
    s = _binary_symbols(S)
    out = []
    for N in checkpoints:
        if not 1 <= N <= len(s):
            raise PreconditionError(f"checkpoint {N} outside 1..{len(s)}")
        out.append(expansion_complexity(s, N, d_max))
    return out
