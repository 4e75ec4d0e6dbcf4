"""Integer polynomials used to rarefy sequences."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import DomainError, PreconditionError


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, stored low-to-high."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [0]
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        """``"1,2,0,1"`` is 1 + 2X + X^3."""
        try:
            return cls(tuple(int(tok) for tok in text.split(",")))
        except ValueError:
            raise ValueError(f"bad polynomial literal {text!r}; expected comma-separated integers") from None

    @classmethod
    def monomial(cls, d: int) -> "IntPolynomial":
        return cls((0,) * d + (1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    @property
    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    @property
    def alpha_max(self) -> int:
        # the leading coefficient counts, so X^2 has alpha_max 1
        return max(self.coeffs)

    def literal(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    def __str__(self):
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if mono and c == 1:
                body = mono
            elif mono and c == -1:
                body = "-" + mono
            else:
                body = f"{c}{mono}"
            terms.append(body)
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def __call__(self, n: int) -> int:
        return eval_poly(self, n)

    def raw_eval(self, n: int) -> int:
        """Horner evaluation with no sign check."""
        v = 0
        for c in reversed(self.coeffs):
            v = v * n + c
        return v


def eval_poly(P: IntPolynomial, n: int) -> int:
    v = P.raw_eval(n)
    if v < 0:
        raise DomainError(f"P({n}) = {v} is negative", n=n)
    return v


def translate(P: IntPolynomial, a: int) -> IntPolynomial:
    """Q with Q(n) = P(n + a), by binomial expansion."""
    d = P.degree
    out = []
    for i in range(d + 1):
        out.append(sum(comb(j, i) * P.coeffs[j] * a ** (j - i) for j in range(i, d + 1)))
    return IntPolynomial(tuple(out))


def normalize_nonnegative(P: IntPolynomial) -> tuple[int, IntPolynomial]:
    """Smallest shift a >= 0 for which P(X + a) has no negative coefficient."""
    if not P.is_monic or P.degree < 1:
        raise PreconditionError("normalize_nonnegative needs a monic polynomial of degree >= 1")
    a = 0
    Q = P
    while not Q.is_nonnegative:
        a += 1
        Q = translate(P, a)
    return a, Q


def z_constant(P: IntPolynomial) -> int:
    """Sum of i * alpha_i over 1 <= i <= d."""
    if P.degree < 2:
        raise PreconditionError("z is defined for degree >= 2")
    if not P.is_monic:
        raise PreconditionError(f"polynomial must be monic, leading coefficient is {P.leading}")
    if not P.is_nonnegative:
        raise PreconditionError("all coefficients must be nonnegative; apply normalize_nonnegative first")
    return sum(i * c for i, c in enumerate(P.coeffs) if i >= 1)
