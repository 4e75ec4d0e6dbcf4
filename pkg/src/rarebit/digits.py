"""Base-q digit expansions, digit sums and pattern-occurrence counts.

Natural numbers are plain Python ints. Digit strings are stored least
significant digit first; ``str()`` renders them the usual way round.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidBaseError, InvalidSpecError

MAX_BASE = 1 << 16

_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _check_base(q: int) -> None:
    if not isinstance(q, int) or q < 2:
        raise InvalidBaseError(f"base must be an integer >= 2, got {q!r}")
    if q > MAX_BASE:
        raise InvalidBaseError(f"base {q} exceeds the supported maximum {MAX_BASE}")


def _check_nat(n: int) -> None:
    if n < 0:
        raise ValueError(f"expected a natural number, got {n}")


@dataclass(frozen=True)
class DigitString:
    digits: tuple[int, ...]
    base: int = 2

    def __post_init__(self):
        _check_base(self.base)
        object.__setattr__(self, "digits", tuple(int(x) for x in self.digits))
        for x in self.digits:
            if not 0 <= x < self.base:
                raise InvalidSpecError(f"digit {x} out of range for base {self.base}")

    @classmethod
    def parse(cls, text: str, base: int = 2) -> "DigitString":
        """Parse a most-significant-first literal such as ``"110"`` or ``"12,0,3"``.

        Leading zeros are kept: the result is a raw digit block, which is
        what patterns need.
        """
        text = text.strip()
        if "," in text:
            msb_first = [int(tok) for tok in text.split(",")]
        else:
            msb_first = [_DIGIT_CHARS.index(ch) for ch in text.lower()]
        return cls(tuple(reversed(msb_first)), base)

    @property
    def value(self) -> int:
        v = 0
        for x in reversed(self.digits):
            v = v * self.base + x
        return v

    @property
    def is_canonical(self) -> bool:
        return not self.digits or self.digits[-1] != 0

    def __len__(self):
        return len(self.digits)

    def __str__(self):
        if self.base <= len(_DIGIT_CHARS):
            return "".join(_DIGIT_CHARS[x] for x in reversed(self.digits))
        return ",".join(str(x) for x in reversed(self.digits))


def to_digits(n: int, q: int = 2) -> DigitString:
    """Canonical base-q expansion of n (zero is the empty string)."""
    _check_base(q)
    _check_nat(n)
    if q == 2:
        return DigitString(tuple(int(c) for c in reversed(bin(n)[2:])) if n else (), 2)
    out = []
    while n:
        n, r = divmod(n, q)
        out.append(r)
    return DigitString(tuple(out), q)


def digit_sum(n: int, q: int = 2) -> int:
    _check_base(q)
    _check_nat(n)
    if q == 2:
        return n.bit_count()
    return sum(to_digits(n, q).digits)


def _ones_run_count(n: int, k: int) -> int:
    # bit i survives iff bits i..i+k-1 of n are all set
    m = n
    for _ in range(k - 1):
        m &= m >> 1
    return m.bit_count()


def _binary_pattern_count(n: int, pattern: Sequence[int]) -> int:
    k = len(pattern)
    width = n.bit_length()
    if width < k:
        return 0
    hits = (1 << (width - k + 1)) - 1
    full = (1 << width) - 1
    inv = ~n & full
    for j, bit in enumerate(pattern):
        hits &= (n >> j) if bit else (inv >> j)
        if not hits:
            return 0
    return hits.bit_count()


def count_pattern(n: int, pattern: DigitString | Iterable[int], q: int | None = None) -> int:
    """Number of (overlapping) occurrences of ``pattern`` in the expansion of n.

    ``pattern`` is a DigitString or a least-significant-first digit sequence;
    the expansion of n is scanned without leading zeros.
    """
    if isinstance(pattern, DigitString):
        q = pattern.base if q is None else q
        digits = pattern.digits
    else:
        digits = tuple(pattern)
        q = 2 if q is None else q
    _check_base(q)
    _check_nat(n)
    if not digits:
        raise InvalidSpecError("pattern must be non-empty")
    if any(not 0 <= x < q for x in digits):
        raise InvalidSpecError(f"pattern digits must lie in 0..{q - 1}")
    if n == 0:
        return 0
    if q == 2:
        if all(digits):
            return _ones_run_count(n, len(digits))
        return _binary_pattern_count(n, digits)
    ds = to_digits(n, q).digits
    k = len(digits)
    return sum(1 for i in range(len(ds) - k + 1) if ds[i:i + k] == digits)
