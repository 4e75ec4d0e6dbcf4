"""Command-line front end.

Exit codes: 0 pass, 1 a check failed, 2 usage error, 3 internal
verification failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import __version__
from .errors import (
    AlphabetError,
    CertificateRefused,
    DomainError,
    InvalidSpecError,
    PreconditionError,
    SearchExhausted,
)
from .expansion import BivariatePolyF2, verify_annihilator
from .moc import moc_fast
from .polynomials import IntPolynomial, normalize_nonnegative
from .report import MEASURES, BudgetExceeded, measure, parse_checkpoints, reproduce
from .seqfile import SequenceCache, SequenceFileError, atomic_write, encode, read_sequence
from .sequences import GeneratorDescriptor, generate_prefix
from .witness import bound_certificate, find_witness

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


def _usage(msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_USAGE)


def _poly_option(text):
    if text is None:
        return None
    try:
        return IntPolynomial.parse(text)
    except ValueError as exc:
        _usage(str(exc))


def build_descriptor(kind: str, poly: str | None, k: int | None, base: int | None,
                     mod: int | None, pattern: str | None) -> GeneratorDescriptor:
    p = _poly_option(poly)
    if base is not None or mod is not None or pattern is not None:
        if pattern is None:
            raise InvalidSpecError("--pattern is required with --base/--mod")
        return GeneratorDescriptor.general(base or 2, mod or 2, pattern, p)
    if k is not None:
        return GeneratorDescriptor.pattern(k, p)
    g = GeneratorDescriptor.parse(kind)
    if p is not None:
        g = g.with_rarefaction(p)
    return g


def _emit(report, fmt: str, out: str | None, json_path: str | None):
    text = report.to_csv() if fmt == "csv" else report.to_text()
    if out:
        atomic_write(Path(out), text.encode())
    else:
        click.echo(text, nl=False)
    if json_path:
        atomic_write(Path(json_path), report.to_json().encode())


@click.group()
@click.version_option(__version__, prog_name="rarebit")
def main():
    """Automatic sequences along polynomials: generate, measure, certify."""


@main.command()
@click.argument("kind", default="tm")
@click.option("-N", "--length", "N", type=int, required=True, help="Prefix length.")
@click.option("-o", "--out", type=click.Path(dir_okay=False), required=True, help="Output sequence file.")
@click.option("--poly", help="Rarefying polynomial, coefficients low to high, e.g. 0,0,1 for n^2.")
@click.option("--k", type=int, help="Length of the all-ones pattern (k=2 is Rudin-Shapiro).")
@click.option("--base", type=int, help="Digit base q of a general pattern sequence.")
@click.option("--mod", type=int, help="Modulus m of a general pattern sequence.")
@click.option("--pattern", help="Pattern omega, most significant digit first.")
@click.option("--no-cache", is_flag=True, help="Skip the generation cache.")
def generate(kind, N, out, poly, k, base, mod, pattern, no_cache):
    """Write a sequence prefix to a bit-packed file.

    KIND is tm, rs, pattern:k=K, general:q=Q,m=M,omega=W or a full
    descriptor such as tm@0,0,1.  The cache lives in $RAREBIT_CACHE.
    """
    if N < 1:
        _usage("prefix length must be >= 1")
    try:
        g = build_descriptor(kind, poly, k, base, mod, pattern)
    except (InvalidSpecError, ValueError) as exc:
        _usage(str(exc))
    desc = g.text()
    cache = None if no_cache else SequenceCache()
    data = cache.get(desc, N) if cache else None
    hit = data is not None
    if data is None:
        try:
            seq = generate_prefix(g, N)
        except DomainError as exc:
            _usage(str(exc))
        data = encode(seq, desc)
        if cache:
            cache.put(desc, N, data)
    try:
        atomic_write(Path(out), data)
    except OSError as exc:
        click.echo(f"error: cannot write {out}: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    click.echo(f"{desc} N={N} -> {out}{' (cached)' if hit else ''}")


@main.command("measure")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--measure", "name", type=click.Choice(MEASURES), required=True,
              help="moc: N,M,i,j | expansion: N,E,exceeded,annihilator | corr2: N,C2,M,d1,d2 | "
                   "subword: N,k,p_k | blocks: N,k,p_k,max_deviation")
@click.option("--checkpoints", help="Comma list, a..b ranges or pow2:a..b. Default: full length.")
@click.option("--dmax", type=int, default=30, show_default=True, help="Degree cap for expansion.")
@click.option("--k", "ks", help="Block lengths for subword, e.g. 1..10.")
@click.option("--kmax", type=int, default=4, show_default=True, help="Largest block length for blocks.")
@click.option("--format", "fmt", type=click.Choice(["csv", "text"]), default="text", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Write the table here instead of stdout.")
@click.option("--report", "json_path", type=click.Path(dir_okay=False), help="Also save the full report as JSON.")
def measure_cmd(file, name, checkpoints, dmax, ks, kmax, fmt, out, json_path):
    """Compute a pseudorandomness measure at checkpoints of a sequence file."""
    try:
        seq = read_sequence(file)
    except SequenceFileError as exc:
        _usage(str(exc))
    try:
        cps = parse_checkpoints(checkpoints) if checkpoints else [len(seq)]
        klist = parse_checkpoints(ks) if ks else None
        report = measure(seq, name, cps, d_max=dmax, ks=klist, k_max=kmax)
    except (AlphabetError, PreconditionError, ValueError) as exc:
        _usage(str(exc))
    _emit(report, fmt, out, json_path)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--annihilator", "h_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Exponent pairs 'i,j', one per line, meaning x^i y^j.")
@click.option("-N", "--length", "N", type=int, help="Truncation order (default: file length).")
def verify(file, h_path, N):
    """Check h(x, G(x)) = 0 mod x^N for the sequence's generating function G."""
    seq = read_sequence(file)
    try:
        h = BivariatePolyF2.from_text(Path(h_path).read_text())
        N = len(seq) if N is None else N
        ok = verify_annihilator(h, seq, N)
    except (AlphabetError, PreconditionError, ValueError) as exc:
        _usage(str(exc))
    click.echo(f"h = {h} (total degree {h.total_degree}) {'annihilates' if ok else 'does not annihilate'} "
               f"G mod x^{N}")
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


@main.command()
@click.option("--poly", required=True, help="Monic polynomial, coefficients low to high.")
@click.option("--k", type=int, default=1, show_default=True, help="Pattern length (1 = Thue-Morse).")
@click.option("--certify", "N", type=int, help="Also issue a bound certificate at prefix length N.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the certificate text here.")
def witness(poly, k, N, out):
    """Construct a witness and, optionally, a certified lower bound on M."""
    P = _poly_option(poly)
    if not P.is_monic:
        _usage(f"polynomial must be monic: leading coefficient is {P.leading}")
    if P.degree < 2:
        _usage("polynomial must have degree >= 2")
    if k < 1:
        _usage("--k must be >= 1")
    offset, Q = normalize_nonnegative(P)
    try:
        w = find_witness(Q, k)
    except SearchExhausted as exc:
        click.echo(f"witness search exhausted: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    click.echo(f"polynomial: {P}")
    if offset:
        click.echo(f"shifted by a={offset}: {Q}")
    if k == 1:
        click.echo(f"z={w.z} lambda={w.lam} y={w.y} r={w.r} l0={w.l0}")
    else:
        click.echo(f"k={k} z={w.z} a={w.a} u={w.u} y={w.y} s={w.s} l0={w.l0}")
    if N is None:
        return
    g = GeneratorDescriptor.thue_morse(P) if k == 1 else GeneratorDescriptor.pattern(k, P)
    try:
        cert = bound_certificate(g, N, w)
    except PreconditionError as exc:
        _usage(str(exc))
    except CertificateRefused as exc:
        click.echo(f"certificate refused: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    text = cert.to_text()
    seq = generate_prefix(g.with_rarefaction(Q), N)
    measured = moc_fast(seq, N).M
    text += f"measured_M: {measured}\n"
    if out:
        atomic_write(Path(out), text.encode())
    click.echo(text, nl=False)
    if cert.bound > measured:
        click.echo("internal verification failure: certified bound exceeds measured M", err=True)
        sys.exit(EXIT_INTERNAL)


@main.command("reproduce")
@click.argument("claim", type=click.IntRange(1, 4))
@click.option("--budget", type=int, default=1 << 14, show_default=True, help="Largest prefix length N.")
@click.option("--poly", help="Polynomial for claims 3 and 4 (default 0,0,1).")
@click.option("--k", type=int, help="Pattern length (claim 2 and 4; default 2).")
@click.option("--format", "fmt", type=click.Choice(["csv", "text"]), default="text", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
@click.option("--report", "json_path", type=click.Path(dir_okay=False))
def reproduce_cmd(claim, budget, poly, k, fmt, out, json_path):
    """Desk-scale check of a maximum order complexity lower bound.

    \b
    CLAIM is one of:
    1  Thue-Morse along n^2: M >= sqrt(2N/5) for every N >= 21.
    2  1^k patterns along n^2: M >= sqrt(N/8) for every N >= 2^(2k+2).
    3  Thue-Morse along --poly: certified bounds never exceed the measured M.
    4  1^k patterns along --poly: as 3.
    """
    try:
        report = reproduce(claim, budget, _poly_option(poly), k)
    except BudgetExceeded as exc:
        _usage(f"refusing: {exc}")
    except (PreconditionError, SearchExhausted, ValueError) as exc:
        _usage(str(exc))
    _emit(report, fmt, out, json_path)
    if any(r[-1] == "VIOLATION" for r in report.rows):
        sys.exit(EXIT_INTERNAL)
    sys.exit(EXIT_OK if report.passed else EXIT_FAIL)


if __name__ == "__main__":
    main()
