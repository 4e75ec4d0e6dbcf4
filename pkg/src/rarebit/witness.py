"""Explicit witnesses and certified lower bounds for the maximum order
complexity of Thue-Morse and pattern sequences along monic polynomials.

For Thue-Morse (k = 1) the witness is closed-form: z = sum i*alpha_i,
2^lam <= z < 2^(lam+1), y = 2^lam and r = lam*(d-1).  For the 1^k pattern
sequences (k >= 2) y = f_a(2^u) with f_a(x) = a x^3 + a x^2 - x + a and
a = 2^lam', and (a, u, s) come out of a bounded search.  Either way every
claim is checked by exact big-integer evaluation, so a returned witness or
certificate does not rely on any asymptotic constant.

A certificate at exponent l rests on two verified facts about the sequence
n -> v(P(n)), where v is the parity of the number of 1^k blocks:

  (i)  v(P(n + 2^(dl))) == v(P(n + 2^(dl+r))) for 0 <= n < bound,
  (ii) v(P(1 + y 2^l + 2^(dl))) != v(P(1 + y 2^l + 2^(dl+r))),

together with 1 + y 2^l + 2^(dl+r) < N.  If M(S, N) < bound, the M-blocks
starting at 2^(dl) and 2^(dl+r) agree by (i), so everything after them
agrees as well, contradicting (ii).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .digits import count_pattern
from .errors import CertificateRefused, PreconditionError, SearchExhausted
from .polynomials import IntPolynomial, normalize_nonnegative, z_constant
from .sequences import GeneratorDescriptor

L_SEARCH = 64
MAX_LAMBDA_PRIME = 16
MAX_U = 64


def parity(v: int, k: int) -> int:
    """Parity of the number of 1^k blocks in v (k = 1 is Thue-Morse)."""
    return count_pattern(v, (1,) * k) & 1


def _longest_one_run(v: int) -> int:
    run = 0
    while v:
        v &= v >> 1
        run += 1
    return run


def _check_witness_poly(P: IntPolynomial) -> None:
    if not P.is_monic:
        raise PreconditionError(
            f"the witness construction needs a monic polynomial; leading coefficient is {P.leading}")
    if P.degree < 2:
        raise PreconditionError(f"the witness construction needs degree >= 2, got {P.degree}")
    if not P.is_nonnegative:
        raise PreconditionError("coefficients must be nonnegative; apply normalize_nonnegative first")


def denominator_factor(k: int) -> int:
    return 2 if k == 1 else 4


def ceil_bound(l: int, P: IntPolynomial, k: int) -> int:
    """ceil(2^l / (c * (2 alpha_max)^(1/d))), c = 2 for k = 1 and 4 otherwise.

    This is also the exclusive upper end of the range in property (i),
    since n < x iff n <= ceil(x) - 1.  Computed exactly: m >= x iff
    (c m)^d * 2 alpha_max >= 2^(ld).
    """
    d = P.degree
    c = denominator_factor(k)
    two_alpha = 2 * P.alpha_max
    target = 1 << (l * d)

    def ok(m):
        return (c * m) ** d * two_alpha >= target

    # float estimate, then exact correction
    try:
        m = max(0, math.ceil(2.0 ** l / (c * two_alpha ** (1.0 / d))) - 2)
    except OverflowError:
        m = 0
    if m == 0:
        lo, hi = 0, 1
        while not ok(hi):
            lo, hi = hi, hi * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                hi = mid
            else:
                lo = mid
        return hi
    while ok(m):
        m -= 1
    while not ok(m):
        m += 1
    return m


@dataclass(frozen=True)
class TMWitness:
    P: IntPolynomial
    z: int
    lam: int
    y: int
    r: int
    l0: int

    k = 1

    @property
    def shift(self) -> int:
        return self.r


@dataclass(frozen=True)
class PatternWitness:
    P: IntPolynomial
    k: int
    a: int
    u: int
    y: int
    s: int
    l0: int
    z: int = 0

    @property
    def shift(self) -> int:
        return self.s


Witness = Union[TMWitness, PatternWitness]


def _interference_pair(P: IntPolynomial, y: int, shift: int, l: int) -> tuple[int, int]:
    d = P.degree
    base = 1 + y * (1 << l)
    return P(base + (1 << (d * l))), P(base + (1 << (d * l + shift)))


def verify_property_ii(P: IntPolynomial, y: int, shift: int, l: int, k: int) -> bool:
    if l < 1:
        raise PreconditionError("l must be >= 1")
    left, right = _interference_pair(P, y, shift, l)
    return parity(left, k) != parity(right, k)


def verify_tm_witness(P: IntPolynomial, w: TMWitness, l: int) -> bool:
    return verify_property_ii(P, w.y, w.r, l, 1)


def verify_pattern_witness(P: IntPolynomial, w: PatternWitness, l: int) -> bool:
    return verify_property_ii(P, w.y, w.s, l, w.k)


def _stable_tail_start(P: IntPolynomial, y: int, shift: int, k: int, l_search: int) -> Optional[int]:
    """Smallest l such that property (ii) holds for every l' in [l, l_search]."""
    start = None
    for l in range(l_search, 0, -1):
        if verify_property_ii(P, y, shift, l, k):
            start = l
        else:
            break
    # a tail of length 1 (only l_search itself) is not evidence of stability
    if start is None or start == l_search:
        return None
    return start


def tm_witness(P: IntPolynomial, l_search: int = L_SEARCH) -> TMWitness:
    _check_witness_poly(P)
    d = P.degree
    z = z_constant(P)
    lam = z.bit_length() - 1
    y = 1 << lam
    r = lam * (d - 1)
    l0 = _stable_tail_start(P, y, r, 1, l_search)
    if l0 is None:
        raise SearchExhausted(
            f"property (ii) is not stable up to l={l_search} for {P}",
            diagnostics={"z": z, "lambda": lam, "y": y, "r": r,
                         "failing": [l for l in range(1, l_search + 1)
                                     if not verify_property_ii(P, y, r, l, 1)]})
    return TMWitness(P, z, lam, y, r, l0)


def f_a(a: int, x: int) -> int:
    return a * x ** 3 + a * x ** 2 - x + a


@dataclass
class SearchLog:
    entries: list = field(default_factory=list)

    def note(self, lam_prime, u, outcome):
        self.entries.append((lam_prime, u, outcome))


def pattern_witness(P: IntPolynomial, k: int, l_search: int = L_SEARCH,
                    max_lambda_prime: int = MAX_LAMBDA_PRIME, max_u: int = MAX_U,
                    log: SearchLog | None = None) -> PatternWitness:
    """Search (a = 2^lam', u, s) in that order of priority, smallest first.

    A grid point is accepted when y = f_a(2^u) satisfies
      v(y^d + z) == v(y^d) + v(z)          (z does not disturb y^d),
      v(y^d + 2^s z) == v(y^d) + v(z) + 1  (the shifted z flips the parity),
    mod 2, and property (ii) is then verified directly on a stable tail of l.
    Points whose y^d has no 1-run longer than max(ceil(log2 z), k) sit below
    the floor where the carry trick can work and are skipped.
    """
    if k < 2:
        raise PreconditionError("pattern witnesses need k >= 2; use tm_witness for k = 1")
    _check_witness_poly(P)
    d = P.degree
    z = z_constant(P)
    need_run = max(math.ceil(math.log2(z)), k)
    vz = parity(z, k)
    log = log if log is not None else SearchLog()
    for lam_p in range(max_lambda_prime + 1):
        a = 1 << lam_p
        for u in range(1, max_u + 1):
            y = f_a(a, 1 << u)
            Y = y ** d
            if _longest_one_run(Y) <= need_run:
                log.note(lam_p, u, "below floor: inner 1-run too short")
                continue
            vY = parity(Y, k)
            if parity(Y + z, k) != (vY + vz) & 1:
                log.note(lam_p, u, "z interferes with y^d")
                continue
            target = (vY + vz + 1) & 1
            s_hi = Y.bit_length() + 3 * u
            flips = [s for s in range(1, s_hi + 1) if parity(Y + (z << s), k) == target]
            if not flips:
                log.note(lam_p, u, "no parity flip in the alignment window")
                continue
            for s in flips:
                l0 = _stable_tail_start(P, y, s, k, l_search)
                if l0 is not None:
                    log.note(lam_p, u, f"accepted s={s}, l0={l0}")
                    return PatternWitness(P, k, a, u, y, s, l0, z)
            log.note(lam_p, u, f"flip at s in {flips[:8]} but property (ii) not stable")
    raise SearchExhausted(
        f"no pattern witness for {P}, k={k} with lam' <= {max_lambda_prime}, u <= {max_u}",
        diagnostics={"grid": log.entries})


def find_witness(P: IntPolynomial, k: int = 1) -> Witness:
    return tm_witness(P) if k == 1 else pattern_witness(P, k)


def verify_noninterference(P: IntPolynomial, l: int, n: int, r: int, k: int = 1) -> bool:
    """Property (i) at one n: v(P(n + 2^(dl))) == v(P(n + 2^(dl+r)))."""
    if n < 1 or n >= ceil_bound(l, P, k):
        raise PreconditionError(
            f"n={n} is outside the admissible range 1 <= n < 2^l/({denominator_factor(k)}(2 alpha_max)^(1/d))")
    return _same_value(P, l, n, r, k)


def _same_value(P: IntPolynomial, l: int, n: int, r: int, k: int) -> bool:
    d = P.degree
    return parity(P(n + (1 << (d * l))), k) == parity(P(n + (1 << (d * l + r))), k)


@dataclass(frozen=True)
class BoundCertificate:
    N: int
    l: int
    bound: int
    witness: Witness
    # the sequence certified is n -> v(P(n + offset)); normalized = P(X + offset)
    original: IntPolynomial
    offset: int
    checks: dict

    @property
    def k(self) -> int:
        return self.witness.k

    @property
    def normalized(self) -> IntPolynomial:
        return self.witness.P

    def to_text(self) -> str:
        return certificate_text(self)


def threshold(P: IntPolynomial, y: int, shift: int, l: int) -> int:
    return 1 + y * (1 << l) + (1 << (P.degree * l + shift))


def choose_l(P: IntPolynomial, y: int, shift: int, N: int) -> int:
    """Largest l >= 1 with 1 + y 2^l + 2^(dl+shift) < N."""
    if threshold(P, y, shift, 1) >= N:
        raise PreconditionError(
            f"N={N} is below the certificate threshold {threshold(P, y, shift, 1) + 1} for l=1")
    l = 1
    while threshold(P, y, shift, l + 1) < N:
        l += 1
    return l


def bound_certificate(g: GeneratorDescriptor, N: int, witness: Witness | None = None) -> BoundCertificate:
    if g.rarefaction is None:
        raise PreconditionError("a certificate needs a rarefying polynomial")
    if not g.spec.is_binary_ones:
        raise PreconditionError("certificates cover Thue-Morse and binary 1^k pattern sequences only")
    k = g.spec.k
    P0 = g.rarefaction
    if not P0.is_monic:
        raise PreconditionError(f"polynomial must be monic; leading coefficient is {P0.leading}")
    offset, P = normalize_nonnegative(P0)
    if witness is None:
        witness = find_witness(P, k)
    elif witness.P != P or witness.k != k:
        raise PreconditionError("witness does not belong to this generator")
    y, shift = witness.y, witness.shift
    l = choose_l(P, y, shift, N)
    bound = ceil_bound(l, P, k)

    left, right = _interference_pair(P, y, shift, l)
    vl, vr = parity(left, k), parity(right, k)
    if vl == vr:
        raise CertificateRefused(
            f"property (ii) fails at l={l} (witness verified from l0={witness.l0})", l=l, failed="ii")
    # n = 0 is included: the M-blocks compared in the argument start at offset 0
    for n in range(bound):
        if not _same_value(P, l, n, shift, k):
            raise CertificateRefused(f"property (i) fails at l={l}, n={n}", l=l, failed=("i", n))
    checks = {
        "threshold": threshold(P, y, shift, l),
        "ii_left_arg": 1 + y * (1 << l) + (1 << (P.degree * l)),
        "ii_right_arg": 1 + y * (1 << l) + (1 << (P.degree * l + shift)),
        "ii_left_value": vl,
        "ii_right_value": vr,
        "i_range": (0, bound),
        "i_checked": bound,
    }
    return BoundCertificate(N, l, bound, witness, P0, offset, checks)


def certificate_text(cert: BoundCertificate) -> str:
    """Self-contained key: value record; ``recheck_certificate`` re-verifies it."""
    w = cert.witness
    lines = [
        "rarebit-certificate: 1",
        f"polynomial: {cert.original.literal()}",
        f"offset: {cert.offset}",
        f"normalized: {cert.normalized.literal()}",
        f"degree: {cert.normalized.degree}",
        f"alpha_max: {cert.normalized.alpha_max}",
        f"k: {cert.k}",
    ]
    if isinstance(w, TMWitness):
        lines += [f"z: {w.z}", f"lambda: {w.lam}", f"y: {w.y}", f"r: {w.r}"]
    else:
        lines += [f"z: {w.z}", f"a: {w.a}", f"u: {w.u}", f"y: {w.y}", f"s: {w.s}"]
    lines += [
        f"l0: {w.l0}",
        f"l: {cert.l}",
        f"N: {cert.N}",
        f"denominator_factor: {denominator_factor(cert.k)}",
        f"bound: {cert.bound}",
        f"check.threshold: {cert.checks['threshold']} < {cert.N}",
        f"check.ii: v(P({cert.checks['ii_left_arg']})) = {cert.checks['ii_left_value']}"
        f" != v(P({cert.checks['ii_right_arg']})) = {cert.checks['ii_right_value']}",
        f"check.i: v(P(n + 2^(dl))) = v(P(n + 2^(dl+shift))) for all 0 <= n < {cert.bound}",
    ]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> dict[str, str]:
    fields = {}
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, _, val = line.partition(":")
        fields[key.strip()] = val.strip()
    return fields


def recheck_certificate(text: str) -> bool:
    """Re-verify a serialized certificate using plain integer arithmetic.

    Only Horner evaluation and ``count_pattern`` are used, so the check does
    not depend on the witness search or the sequence engines.
    """
    f = parse_certificate(text)
    coeffs = [int(c) for c in f["normalized"].split(",")]
    original = [int(c) for c in f["polynomial"].split(",")]
    offset = int(f["offset"])
    k, l, N, bound = int(f["k"]), int(f["l"]), int(f["N"]), int(f["bound"])
    y = int(f["y"])
    shift = int(f["r"] if "r" in f else f["s"])
    d = len(coeffs) - 1
    alpha_max = max(coeffs)
    c = 2 if k == 1 else 4

    def P(n):
        v = 0
        for co in reversed(coeffs):
            v = v * n + co
        return v

    def P_orig(n):
        v = 0
        for co in reversed(original):
            v = v * n + co
        return v

    def v(x):
        return count_pattern(x, (1,) * k) & 1

    # normalized really is the shifted original
    for n in range(d + 2):
        if P(n) != P_orig(n + offset):
            return False
    if coeffs[-1] != 1 or min(coeffs) < 0 or d < 2:
        return False
    if not 1 + y * 2 ** l + 2 ** (d * l + shift) < N:
        return False
    # bound = ceil(2^l / (c (2 alpha_max)^(1/d)))
    if not ((c * bound) ** d * 2 * alpha_max >= 2 ** (l * d) > (c * (bound - 1)) ** d * 2 * alpha_max):
        return False
    base = 1 + y * 2 ** l
    if v(P(base + 2 ** (d * l))) == v(P(base + 2 ** (d * l + shift))):
        return False
    return all(v(P(n + 2 ** (d * l))) == v(P(n + 2 ** (d * l + shift))) for n in range(bound))
