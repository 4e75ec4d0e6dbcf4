"""Thue-Morse, k-pattern and general pattern sequences, optionally rarefied
along an integer polynomial."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .digits import DigitString, count_pattern, digit_sum
from .errors import DomainError, InvalidSpecError
from .polynomials import IntPolynomial

THUE_MORSE = "thue-morse"
PATTERN_K = "pattern-k"
GENERAL = "general-pattern"

_INT64_SAFE = (1 << 62)


@dataclass(frozen=True)
class PatternSpec:
    """rho(n) = (occurrences of omega in the base-q expansion of n) mod m."""

    q: int = 2
    m: int = 2
    omega: DigitString = field(default_factory=lambda: DigitString((1,), 2))

    def __post_init__(self):
        if self.q < 2:
            raise InvalidSpecError(f"base q must be >= 2, got {self.q}")
        if self.m < 2:
            raise InvalidSpecError(f"modulus m must be >= 2, got {self.m}")
        omega = self.omega
        if not isinstance(omega, DigitString):
            omega = DigitString(tuple(omega), self.q)
            object.__setattr__(self, "omega", omega)
        if omega.base != self.q:
            raise InvalidSpecError("pattern base does not match q")
        if len(omega) == 0:
            raise InvalidSpecError("pattern must have length >= 1")
        if not any(omega.digits):
            raise InvalidSpecError("the all-zero pattern is not allowed")

    @classmethod
    def ones(cls, k: int) -> "PatternSpec":
        """The binary all-ones pattern 1^k with modulus 2 (k=1 is Thue-Morse)."""
        if k < 1:
            raise InvalidSpecError(f"pattern length must be >= 1, got {k}")
        return cls(2, 2, DigitString((1,) * k, 2))

    @property
    def k(self) -> int:
        return len(self.omega)

    @property
    def is_binary_ones(self) -> bool:
        return self.q == 2 and self.m == 2 and all(self.omega.digits)


@dataclass(frozen=True)
class GeneratorDescriptor:
    kind: str
    spec: PatternSpec
    rarefaction: Optional[IntPolynomial] = None

    def __post_init__(self):
        # the kind is derived from the spec so that equal generators compare equal
        if self.spec.is_binary_ones:
            kind = THUE_MORSE if self.spec.k == 1 else PATTERN_K
        else:
            kind = GENERAL
        object.__setattr__(self, "kind", kind)

    @classmethod
    def thue_morse(cls, poly: IntPolynomial | None = None) -> "GeneratorDescriptor":
        return cls(THUE_MORSE, PatternSpec.ones(1), poly)

    @classmethod
    def pattern(cls, k: int, poly: IntPolynomial | None = None) -> "GeneratorDescriptor":
        return cls(PATTERN_K, PatternSpec.ones(k), poly)

    @classmethod
    def general(cls, q: int, m: int, omega: str, poly: IntPolynomial | None = None) -> "GeneratorDescriptor":
        return cls(GENERAL, PatternSpec(q, m, DigitString.parse(omega, q)), poly)

    def with_rarefaction(self, poly: IntPolynomial | None) -> "GeneratorDescriptor":
        return GeneratorDescriptor(self.kind, self.spec, poly)

    def text(self) -> str:
        """Canonical descriptor text, e.g. ``tm``, ``pattern:k=2@0,0,1``."""
        if self.kind == THUE_MORSE:
            head = "tm"
        elif self.kind == PATTERN_K:
            head = f"pattern:k={self.spec.k}"
        else:
            head = f"general:q={self.spec.q},m={self.spec.m},omega={self.spec.omega}"
        if self.rarefaction is not None:
            head += "@" + self.rarefaction.literal()
        return head

    @classmethod
    def parse(cls, text: str) -> "GeneratorDescriptor":
        text = text.strip()
        head, _, poly_txt = text.partition("@")
        poly = IntPolynomial.parse(poly_txt) if poly_txt else None
        name, _, args = head.partition(":")
        params = {}
        if args:
            for item in args.split(","):
                if "=" not in item:
                    raise InvalidSpecError(f"bad descriptor parameter {item!r} in {text!r}")
                key, val = item.split("=", 1)
                params[key.strip()] = val.strip()
        name = name.strip().lower()
        try:
            if name in ("tm", "thue-morse"):
                return cls.thue_morse(poly)
            if name in ("rs", "rudin-shapiro"):
                return cls.pattern(2, poly)
            if name in ("pattern", "pattern-k"):
                return cls.pattern(int(params["k"]), poly)
            if name in ("general", "general-pattern"):
                return cls.general(int(params["q"]), int(params["m"]), params["omega"], poly)
        except KeyError as exc:
            raise InvalidSpecError(f"descriptor {text!r} is missing parameter {exc.args[0]}") from None
        raise InvalidSpecError(f"unknown generator {name!r}")

    def __str__(self):
        return self.text()


@dataclass(frozen=True, eq=False)
class Sequence:
    """A finite prefix of a generated sequence."""

    symbols: np.ndarray
    m: int = 2
    provenance: Optional[GeneratorDescriptor] = None

    def __post_init__(self):
        arr = np.asarray(self.symbols)
        dtype = np.uint8 if self.m <= 256 else np.uint32
        if arr.size and (arr.min() < 0 or arr.max() >= self.m):
            raise InvalidSpecError(f"symbols must lie in 0..{self.m - 1}")
        arr = np.array(arr, dtype=dtype, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    @classmethod
    def from_bits(cls, bits, m: int = 2) -> "Sequence":
        if isinstance(bits, str):
            bits = [int(c) for c in bits if not c.isspace()]
        return cls(np.asarray(bits, dtype=np.int64), m)

    def __len__(self):
        return int(self.symbols.size)

    def __getitem__(self, idx):
        return self.symbols[idx]

    def __eq__(self, other):
        if not isinstance(other, Sequence):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.symbols, other.symbols)

    @property
    def is_binary(self) -> bool:
        return self.m == 2

    def prefix(self, n: int) -> "Sequence":
        return Sequence(self.symbols[:n], self.m, self.provenance)

    def tolist(self) -> list[int]:
        return self.symbols.tolist()


def thue_morse(n: int) -> int:
    return digit_sum(n, 2) & 1


def pattern_value(n: int, spec: PatternSpec) -> int:
    return count_pattern(n, spec.omega) % spec.m


def _poly_values(poly: IntPolynomial | None, N: int):
    """P(0..N-1) as an int64 array when it provably fits, else a list of ints."""
    if poly is None:
        return np.arange(N, dtype=np.int64)
    bound = sum(abs(c) * (N - 1) ** i for i, c in enumerate(poly.coeffs))
    if bound < _INT64_SAFE:
        n = np.arange(N, dtype=np.int64)
        vals = np.zeros(N, dtype=np.int64)
        for c in reversed(poly.coeffs):
            vals = vals * n + c
        neg = np.flatnonzero(vals < 0)
        if neg.size:
            i = int(neg[0])
            raise DomainError(f"rarefying polynomial is negative at n={i}: P({i}) = {int(vals[i])}", n=i)
        return vals
    out = []
    for i in range(N):
        v = poly.raw_eval(i)
        if v < 0:
            raise DomainError(f"rarefying polynomial is negative at n={i}: P({i}) = {v}", n=i)
        out.append(v)
    return out


def generate_prefix(g: GeneratorDescriptor, N: int) -> Sequence:
    """symbols[n] = pattern_value(P(n)) for n < N."""
    if N < 1:
        raise ValueError(f"prefix length must be >= 1, got {N}")
    vals = _poly_values(g.rarefaction, N)
    spec = g.spec
    if isinstance(vals, np.ndarray) and spec.is_binary_ones:
        w = vals.astype(np.uint64)
        for _ in range(spec.k - 1):
            w &= w >> np.uint64(1)
        symbols = (np.bitwise_count(w) & 1).astype(np.uint8)
    else:
        symbols = np.fromiter((pattern_value(int(v), spec) for v in vals), dtype=np.int64, count=N)
    return Sequence(symbols, spec.m, g)
