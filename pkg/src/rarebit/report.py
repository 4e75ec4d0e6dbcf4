"""Run reports, measure dispatch and the desk-scale reproductions of the four lower-bound claims."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__
from .errors import AlphabetError, CertificateRefused, PreconditionError
from .expansion import DEFAULT_DMAX, Exceeded, expansion_complexity
from .moc import moc_all, moc_profile
from .polynomials import IntPolynomial, normalize_nonnegative
from .sequences import GeneratorDescriptor, Sequence, generate_prefix
from .statistics import correlation2, normality_deviation, subword_complexity
from .witness import bound_certificate, find_witness

MEASURES = ("moc", "expansion", "corr2", "subword", "blocks")

COLUMNS = {
    "moc": ("N", "M", "i", "j"),
    "expansion": ("N", "E", "exceeded", "annihilator"),
    "corr2": ("N", "C2", "M", "d1", "d2"),
    "subword": ("N", "k", "p_k"),
    "blocks": ("N", "k", "p_k", "max_deviation"),
}

# largest budget each reproduction accepts, and a rough per-symbol cost
REPRODUCE_LIMITS = {1: 1 << 20, 2: 1 << 20, 3: 1 << 18, 4: 1 << 18}
SECONDS_PER_SYMBOL = 4e-6


@dataclass
class RunReport:
    command: str
    parameters: dict
    columns: tuple
    rows: list = field(default_factory=list)
    passed: Optional[bool] = None
    notes: list = field(default_factory=list)
    timing: float = 0.0
    version: str = __version__

    def values(self) -> list:
        """Everything except timing; identical parameters give identical values."""
        return [list(r) for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.rows)
        return buf.getvalue()

    def to_text(self) -> str:
        out = [f"# rarebit {self.version}: {self.command}"]
        for key, val in self.parameters.items():
            out.append(f"# {key}: {val}")
        cells = [list(map(str, self.columns))] + [[_fmt(v) for v in r] for r in self.rows]
        widths = [max(len(row[c]) for row in cells) for c in range(len(self.columns))]
        for row in cells:
            out.append("  ".join(v.rjust(w) for v, w in zip(row, widths)).rstrip())
        for note in self.notes:
            out.append(f"# {note}")
        if self.passed is not None:
            out.append(f"# result: {'PASS' if self.passed else 'FAIL'}")
        out.append(f"# elapsed: {self.timing:.3f}s")
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        d = asdict(self)
        d["columns"] = list(self.columns)
        return json.dumps(d, indent=1, default=_jsonable)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        d = json.loads(text)
        d["columns"] = tuple(d["columns"])
        d["rows"] = [tuple(r) for r in d["rows"]]
        return cls(**d)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return str(v)


def parse_checkpoints(text: str) -> list[int]:
    """``"256,512"``, ``"pow2:8..12"`` or ``"21..30"``, comma-combined; sorted, deduplicated."""
    out: set[int] = set()
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if item.startswith("pow2:"):
            lo, _, hi = item[5:].partition("..")
            out.update(1 << e for e in range(int(lo), int(hi) + 1))
        elif ".." in item:
            lo, _, hi = item.partition("..")
            out.update(range(int(lo), int(hi) + 1))
        else:
            out.add(int(item))
    if not out:
        raise ValueError("no checkpoints given")
    return sorted(out)


def measure(seq: Sequence, name: str, checkpoints: list[int], *, d_max: int = DEFAULT_DMAX,
            ks: list[int] | None = None, k_max: int = 4) -> RunReport:
    if name not in MEASURES:
        raise ValueError(f"unknown measure {name!r}; choose from {', '.join(MEASURES)}")
    if not seq.is_binary:
        raise AlphabetError(f"measure {name!r} is defined for binary sequences; this file has alphabet size {seq.m}")
    bad = [N for N in checkpoints if not 1 <= N <= len(seq)]
    if bad:
        raise PreconditionError(f"checkpoints {bad} outside 1..{len(seq)}")
    start = time.perf_counter()
    params = {"measure": name, "length": len(seq), "checkpoints": checkpoints,
              "descriptor": seq.provenance.text() if seq.provenance else ""}
    rows = []
    if name == "moc":
        for r in moc_profile(seq, checkpoints):
            i, j = r.witness if r.witness else ("", "")
            rows.append((r.N, r.M, i, j))
    elif name == "expansion":
        params["dmax"] = d_max
        for N in checkpoints:
            r = expansion_complexity(seq, N, d_max)
            if isinstance(r, Exceeded):
                rows.append((N, "", 1, ""))
            else:
                rows.append((N, r.E, 0, str(r.annihilator) if r.annihilator else ""))
    elif name == "corr2":
        for N in checkpoints:
            r = correlation2(seq, N)
            rows.append((r.N, r.value, r.M, r.d1, r.d2))
    elif name == "subword":
        ks = ks or list(range(1, 11))
        params["k"] = ks
        for N in checkpoints:
            for k in ks:
                if k <= N:
                    rows.append((N, k, subword_complexity(seq, k, N).p_k))
    else:
        params["kmax"] = k_max
        for N in checkpoints:
            for st in normality_deviation(seq, k_max, N):
                rows.append((N, st.k, st.p_k, st.max_deviation))
    rep = RunReport("measure", params, COLUMNS[name], rows)
    rep.timing = time.perf_counter() - start
    return rep


class BudgetExceeded(ValueError):
    pass


def projected_seconds(claim: int, budget: int) -> float:
    passes = {1: 1, 2: 1, 3: 4, 4: 4}[claim]
    return budget * passes * SECONDS_PER_SYMBOL


def check_budget(claim: int, budget: int) -> None:
    limit = REPRODUCE_LIMITS[claim]
    if budget > limit:
        raise BudgetExceeded(
            f"budget {budget} exceeds the limit {limit} for claim {claim} "
            f"(projected cost ~{projected_seconds(claim, budget):.0f}s of automaton work)")


def reproduce_square_bound(claim: int, budget: int, k: int = 2) -> RunReport:
    """Square-rarefied lower bounds, checked at every N.

    Claim 1: Thue-Morse along n^2 has M >= sqrt(2N/5) for N >= 21.
    Claim 2: the 1^k pattern sequence along n^2 has M >= sqrt(N/8) for N >= 2^(2k+2).
    """
    if claim not in (1, 2):
        raise ValueError("claim must be 1 or 2")
    check_budget(claim, budget)
    start = time.perf_counter()
    square = IntPolynomial((0, 0, 1))
    if claim == 1:
        g = GeneratorDescriptor.thue_morse(square)
        n_min = 21
        holds: Callable[[int, int], bool] = lambda M, N: 5 * M * M >= 2 * N
        statement = "M >= sqrt(2N/5)"
    else:
        if k < 2:
            raise PreconditionError("claim 2 needs k >= 2")
        g = GeneratorDescriptor.pattern(k, square)
        n_min = 1 << (2 * k + 2)
        holds = lambda M, N: 8 * M * M >= N
        statement = "M >= sqrt(N/8)"
    if budget < n_min:
        raise PreconditionError(f"budget must be at least {n_min}")
    seq = generate_prefix(g, budget)
    Ms = moc_all(seq, budget)
    failures = [N for N in range(n_min, budget + 1) if not holds(int(Ms[N]), N)]
    shown = sorted({n_min, budget} | {1 << e for e in range(n_min.bit_length(), budget.bit_length())
                                       if n_min <= 1 << e <= budget} | set(failures[:20]))
    rows = [(N, int(Ms[N]), "pass" if holds(int(Ms[N]), N) else "FAIL") for N in shown]
    rep = RunReport(f"reproduce {claim}", {"claim": claim, "budget": budget, "k": 1 if claim == 1 else k,
                                             "descriptor": g.text(), "statement": statement},
                    ("N", "M", "status"), rows, passed=not failures)
    rep.notes.append(f"checked every N in [{n_min}, {budget}]: {len(failures)} failures")
    rep.timing = time.perf_counter() - start
    return rep


def certificate_rows(g: GeneratorDescriptor, Ns: list[int]):
    """(N, l, bound, M, status) per N; status is 'issued', 'refused: ...' or 'below threshold'."""
    offset, Q = normalize_nonnegative(g.rarefaction)
    witness = find_witness(Q, g.spec.k)
    shifted = g.with_rarefaction(Q)
    seq = generate_prefix(shifted, max(Ns))
    measured = {r.N: r.M for r in moc_profile(seq, sorted(Ns))}
    rows = []
    certs = {}
    for N in Ns:
        try:
            cert = bound_certificate(g, N, witness)
        except CertificateRefused as exc:
            rows.append((N, exc.l, "", measured[N], f"refused: {exc}"))
            continue
        except PreconditionError:
            rows.append((N, "", "", measured[N], "below threshold"))
            continue
        certs[N] = cert
        rows.append((N, cert.l, cert.bound, measured[N], "issued"))
    return witness, offset, rows, certs


def reproduce_certificates(claim: int, budget: int, poly: IntPolynomial, k: int) -> RunReport:
    """Certified bounds along a monic polynomial (claim 3: Thue-Morse, claim 4: 1^k patterns),
    compared with the measured M at powers of two."""
    check_budget(claim, budget)
    if claim == 3 and k != 1:
        raise PreconditionError("claim 3 is the Thue-Morse case (k = 1)")
    if claim == 4 and k < 2:
        raise PreconditionError("claim 4 needs k >= 2")
    start = time.perf_counter()
    g = GeneratorDescriptor.thue_morse(poly) if k == 1 else GeneratorDescriptor.pattern(k, poly)
    Ns = [1 << e for e in range(4, budget.bit_length()) if 1 << e <= budget]
    if not Ns:
        raise PreconditionError("budget must be at least 16")
    witness, offset, rows, certs = certificate_rows(g, Ns)
    measured = {r[0]: r[3] for r in rows}
    unsound = [N for N, c in certs.items() if c.bound > measured[N]]
    out_rows = [(N, l, b, M, "pass" if st == "issued" and N not in unsound else
                 ("VIOLATION" if N in unsound else st)) for N, l, b, M, st in rows]
    rep = RunReport(f"reproduce {claim}",
                    {"claim": claim, "budget": budget, "poly": poly.literal(), "k": k,
                     "offset": offset, "witness": _witness_summary(witness)},
                    ("N", "l", "bound", "M", "status"), out_rows, passed=not unsound)
    rep.notes.append(f"{len(certs)} certificates issued, {len(unsound)} exceed the measured M")
    rep.timing = time.perf_counter() - start
    return rep


def _witness_summary(w) -> str:
    if w.k == 1:
        return f"z={w.z} lambda={w.lam} y={w.y} r={w.r} l0={w.l0}"
    return f"z={w.z} a={w.a} u={w.u} y={w.y} s={w.s} l0={w.l0}"


def reproduce(claim: int, budget: int, poly: IntPolynomial | None = None, k: int | None = None) -> RunReport:
    if claim == 1:
        return reproduce_square_bound(1, budget)
    if claim == 2:
        return reproduce_square_bound(2, budget, k or 2)
    if claim in (3, 4):
        poly = poly or IntPolynomial((0, 0, 1))
        k = k or (1 if claim == 3 else 2)
        return reproduce_certificates(claim, budget, poly, k)
    raise ValueError(f"claim must be one of 1, 2, 3, 4; got {claim}")
