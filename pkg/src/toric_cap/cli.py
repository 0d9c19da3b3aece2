"""Command-line front end.

Every subcommand reads one domain (``--domain file.json`` or ``--preset
name:a,b``) and writes CSV or JSON to stdout.  Rationals are printed as
``p/q`` strings.  Structured errors go to stderr as JSON with exit code 1;
anything unexpected exits with 2.
"""

from __future__ import annotations

import csv
import json
import sys
from fractions import Fraction
from typing import Optional

import click

from . import boundary, capacities as caps, homology
from .domain import LinearForm, ToricProfile, from_preset, load_profile
from .errors import InvalidParameterError, ToricCapError
from .sublevel import decompose, relative_homology


def q(x) -> str:
    if x == boundary.INF:
        return "inf"
    if x == -boundary.INF:
        return "-inf"
    return str(Fraction(x))


def _emit_json(data) -> None:
    click.echo(json.dumps(data, indent=2))


def _profile(domain: Optional[str], preset: Optional[str]) -> ToricProfile:
    if bool(domain) == bool(preset):
        raise InvalidParameterError("give exactly one of --domain and --preset")
    if domain:
        try:
            return load_profile(domain)
        except FileNotFoundError as exc:
            raise _FileMissing(str(exc)) from exc
    return from_preset(preset)


class _FileMissing(ToricCapError):
    code = "file-not-found"


def domain_options(fn):
    fn = click.option("--preset", help="Preset such as ellipsoid:1,2 or polydisk:1,13/8.")(fn)
    fn = click.option("--domain", type=click.Path(dir_okay=False), help="Domain JSON file.")(fn)
    return fn


def _parse_degrees(text: str) -> range:
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError as exc:
        raise InvalidParameterError(f"degrees must look like n0..n1, got {text!r}") from exc
    if lo > hi:
        raise InvalidParameterError("empty degree range")
    return range(lo, hi + 1)


@click.group()
def cli():
    """Exact capacities of star-shaped toric domains."""


@cli.command()
@domain_options
@click.option("--amax", required=True, help="Largest action to list.")
@click.option("--kmax", type=int, default=None, help="Keep entries on lines m1+m2 <= kmax+1 only.")
@click.option("--float", "as_float", is_flag=True, help="Append a decimal action column.")
def spectrum(domain, preset, amax, kmax, as_float):
    """Spectrum entries with action <= AMAX as CSV."""
    omega = _profile(domain, preset)
    entries = boundary.spectrum(omega, amax)
    if kmax is not None:
        entries = [e for e in entries if e.form is None or e.form.level <= kmax + 1]
    out = csv.writer(sys.stdout, lineterminator="\n")
    head = ["action", "kind", "m", "m1", "m2", "mu", "index", "x1", "x2"]
    out.writerow(head + (["action_float"] if as_float else []))
    for e in entries:
        f = e.form
        x1, x2 = e.point.location
        row = [q(e.action), e.kind, e.m, f.m1 if f else "", f.m2 if f else "",
               "" if e.point.mu is None else e.point.mu, e.index, q(x1), q(x2)]
        if as_float:
            row.append(f"{float(e.action):.10g}")
        out.writerow(row)


@cli.command()
@domain_options
@click.option("--form", "form_text", required=True, help="Linear form m1,m2.")
@click.option("--a", "a", required=True, help="Threshold.")
@click.option("--b", "b", default=None, help="Upper threshold; adds the relative homology.")
@click.option("--strict", is_flag=True, help="Refuse forms constant on an edge.")
def sublevel(domain, preset, form_text, a, b, strict):
    """Interval decomposition of the sublevel set {A < a} on the extended boundary."""
    omega = _profile(domain, preset)
    f = LinearForm.parse(form_text)
    dec = decompose(omega, f, homology.parse_threshold(a), strict=strict)
    data = {
        "form": [f.m1, f.m2],
        "a": q(dec.threshold),
        "intervals": [{"lo": q(iv.lo), "hi": q(iv.hi), "rep": q(iv.rep)} for iv in dec.intervals],
    }
    if b is not None:
        rel = relative_homology(omega, f, dec.threshold, homology.parse_threshold(b))
        data["b"] = q(rel.b)
        data["h0"] = [[q(x), q(y)] for x, y in rel.representatives(omega)]
        data["h1"] = len(rel.h1)
    _emit_json(data)


def _matrix_json(d: homology.DifferentialMatrix) -> dict:
    return {"level": d.level, "degree": d.degree, "sign": d.sign, "rank": d.rank,
            "rows": [[q(x) for x in row] for row in d.matrix]}


@cli.command("homology")
@domain_options
@click.option("--a", "a", default="auto", show_default=True, help="Lower threshold, or 'auto' for half the minimal action.")
@click.option("--b", "b", default="inf", show_default=True, help="Upper threshold or 'inf'.")
@click.option("--degrees", default="0..11", show_default=True, help="Degree range n0..n1.")
@click.option("--dump-e1", is_flag=True, help="Include blocks and differential matrices.")
@click.option("--truncation-margin", type=int, default=0, help="Also scan this many forms past each end of every line.")
@click.option("--no-snap", is_flag=True, help="Fail instead of moving thresholds that lie in the spectrum.")
def homology_cmd(domain, preset, a, b, degrees, dump_e1, truncation_margin, no_snap):
    """Betti numbers of the window [a, b) as JSON."""
    omega = _profile(domain, preset)
    ns = _parse_degrees(degrees)
    snapped = {}
    if a == "auto":
        a_val = homology.default_delta(omega)
    else:
        a_val = homology.parse_threshold(a)
    b_val = homology.parse_threshold(b)
    if not no_snap:
        for name, val in (("a", a_val), ("b", b_val)):
            new, moved = homology.snap_threshold(omega, val)
            if moved:
                snapped[name] = f"{q(val)} -> {q(new)}"
            if name == "a":
                a_val = new
            else:
                b_val = new
    page = homology.assemble_e1(omega, a_val, b_val, homology.level_range(ns), True, truncation_margin)
    table = homology.BettiTable(page.a, page.b, homology.betti_from_page(page, ns), snapped)
    data = table.to_json()
    if dump_e1:
        data["e1"] = page.to_json()
        levels = sorted(page.levels)
        data["differentials"] = [
            _matrix_json(homology.differential(page, p, d)) for p in levels[1:] for d in (0, 1)
        ]
    _emit_json(data)


@cli.command("capacities")
@domain_options
@click.option("--kmax", type=int, required=True)
@click.option("--method", type=click.Choice(["auto", "general", "formula"]), default="auto", show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Write the table here instead of stdout.")
@click.option("--float", "as_float", is_flag=True, help="Append a decimal value column.")
def capacities_cmd(domain, preset, kmax, method, csv_path, as_float):
    """Capacities c_1..c_KMAX as CSV."""
    omega = _profile(domain, preset)
    results = caps.capacity_sequence(omega, kmax, method)
    fh = open(csv_path, "w", newline="") if csv_path else sys.stdout
    try:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["k", "value_num", "value_den", "method", "witness"] + (["value_float"] if as_float else []))
        for r in results:
            row = [r.k, r.value.numerator, r.value.denominator, r.method, r.witness_text()]
            if as_float:
                row.append(f"{float(r.value):.10g}")
            out.writerow(row)
    finally:
        if csv_path:
            fh.close()


@cli.command()
@domain_options
@click.option("--other-domain", type=click.Path(dir_okay=False), default=None, help="Second domain for the inclusion check.")
@click.option("--other-preset", default=None)
@click.option("--c", "c", default="2", show_default=True, help="Scaling factor.")
@click.option("--kmax", type=int, default=5, show_default=True)
def verify(domain, preset, other_domain, other_preset, c, kmax):
    """Check inclusion monotonicity, scaling, spectrality and monotonicity in k."""
    omega = _profile(domain, preset)
    other = _profile(other_domain, other_preset) if (other_domain or other_preset) else omega
    report = caps.verify_properties(omega, other, c, kmax)
    _emit_json({"passed": report.passed, "checks": report.checks, "failures": report.failures})


@cli.command()
@domain_options
@click.option("--kmax", type=int, default=0, help="Also list c_k/k up to this k.")
@click.option("--method", type=click.Choice(["auto", "general", "formula"]), default="auto", show_default=True)
def asymptotics(domain, preset, kmax, method):
    """Limit of c_k/k, optionally with the computed ratios."""
    omega = _profile(domain, preset)
    data = {"limit": q(caps.asymptotic_limit(omega))}
    if kmax > 0:
        data["ratios"] = [
            {"k": r.k, "value": q(r.value), "ratio": q(r.value / r.k)} for r in caps.capacity_sequence(omega, kmax, method)
        ]
    _emit_json(data)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except ToricCapError as exc:
        click.echo(json.dumps(exc.to_dict()), err=True)
        return 1
    except Exception as exc:  # pragma: no cover - last resort
        click.echo(json.dumps({"error": "internal", "message": repr(exc)}), err=True)
        return 2
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
