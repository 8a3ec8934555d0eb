"""Command-line interface: lindiv eval | check | decompose | enumerate | gcd-growth | table."""

import json
import os
import sys
from fractions import Fraction

import click

from . import __version__
from .analysis import check_division, check_strong, gcd_growth_detect
from .decompose import decompose, enumerate_periodic
from .errors import LindivError, NoRecurrenceDetected, SchemaError
from .exactnum import AlgNum
from .factories import load_spec_document
from .lrs import ExpPoly, ProductSeq, RecurrenceSpec, minimal_order, product, recurrence_to_closed_form

DEFAULT_BOUND = 60


class Failure(Exception):
    """A property check failed; exit code 1."""


def _default_bound():
    try:
        return int(os.environ.get("LINDIV_BOUND", DEFAULT_BOUND))
    except ValueError:
        return DEFAULT_BOUND


def _load(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} at line {e.lineno}") from e
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror}") from e
    return load_spec_document(doc)


def _fmt(x):
    if isinstance(x, AlgNum):
        if x.is_rational():
            x = x.to_fraction()
        else:
            return str(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else str(x)


def _emit(obj, as_json, text):
    if as_json:
        click.echo(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        click.echo(text)


def _closed_form(seq):
    if isinstance(seq, ExpPoly):
        return seq
    if isinstance(seq, RecurrenceSpec):
        return recurrence_to_closed_form(seq)
    if hasattr(seq, "closed_form"):
        return seq.closed_form()
    if isinstance(seq, ProductSeq):
        acc = None
        for p in seq.parts:
            cf = _closed_form(p)
            acc = cf if acc is None else product(acc, cf)
        return acc
    try:
        _, rec = minimal_order([seq(n) for n in range(34)], 16)
    except NoRecurrenceDetected as e:
        raise LindivError(f"no closed form available: {e}") from e
    return recurrence_to_closed_form(rec)


def _run(fn):
    try:
        fn()
    except Failure:
        sys.exit(1)
    except (LindivError, ZeroDivisionError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)


@click.group()
@click.version_option(__version__, prog_name="lindiv")
def main():
    """Exact tools for linear division sequences."""


@main.command("eval")
@click.argument("spec", type=click.Path())
@click.option("--from", "start", type=int, default=0, show_default=True)
@click.option("--to", "stop", type=int, default=10, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_eval(spec, start, stop, as_json):
    """Print the terms u_start .. u_stop."""
    def go():
        seq, meta, _ = _load(spec)
        vals = [_fmt(seq(n)) for n in range(start, stop + 1)]
        _emit({"name": meta.get("name"), "start": start, "terms": vals}, as_json, " ".join(vals))
    _run(go)


@main.command("check")
@click.argument("spec", type=click.Path())
@click.option("--bound", type=int, default=None, help="largest index tested (env LINDIV_BOUND)")
@click.option("--strong", is_flag=True, help="also test gcd(u_m, u_n) = |u_gcd(m,n)|")
@click.option("--json", "as_json", is_flag=True)
def cmd_check(spec, bound, strong, as_json):
    """Test the division property up to a bound."""
    def go():
        seq, meta, opts = _load(spec)
        b = bound or opts.get("bound") or _default_bound()
        rep = check_strong(seq, b) if strong else check_division(seq, b)
        out = rep.to_json() | {"name": meta.get("name"), "pass": rep.ok}
        if rep.ok:
            text = f"pass: {'strong ' if strong else ''}division holds for indices <= {b}"
        elif not rep.holds:
            w = rep.witness
            text = f"fail: u_{w['m']} = {w['u_m']} does not divide u_{w['n']} = {w['u_n']}"
        else:
            w = rep.strong_witness
            text = f"fail: gcd(u_{w['m']}, u_{w['n']}) = {w['gcd']} but u_gcd = {w['u_gcd']}"
        _emit(out, as_json, text)
        if not rep.ok:
            raise Failure
    _run(go)


@main.command("decompose")
@click.argument("spec", type=click.Path())
@click.option("--bound", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
def cmd_decompose(spec, bound, as_json):
    """Recover periodic, power, exponential and polynomially generated parts."""
    def go():
        seq, meta, opts = _load(spec)
        b = bound or opts.get("bound") or _default_bound()
        rep = check_division(seq, b)
        if not rep.holds:
            _emit({"name": meta.get("name"), "pass": False, "witness": rep.witness}, as_json,
                  f"fail: not a division sequence, witness {rep.witness}")
            raise Failure
        cert = decompose(_closed_form(seq), b, opts.get("R"))
        _emit(cert.to_json() | {"name": meta.get("name")}, as_json, _cert_text(cert))
    _run(go)


def _cert_text(cert):
    lines = [f"period M = {cert.M}", "basis: " + ", ".join(str(g) for g in cert.gammas)]
    for a, c in sorted(cert.classes.items()):
        lines.append(f"  n = {a} mod {cert.M}: kappa = {c['kappa']}, eps = {c['eps']} (n/{c['d']}), tau = {c['tau']}")
    for i, f in enumerate(cert.factors, 1):
        lines.append(f"factor {i}: alpha = {f.alpha}, beta = {f.beta}, eta = {f.eta} [{f.kind}]")
        for a in sorted(f.roots):
            lines.append(f"  class {a}: table {f.table(a)}")
    if cert.partitions is not None:
        lines.append(f"partitions in I*: {len(cert.partitions)}")
    lines += [f"note: {n}" for n in cert.notes]
    lines.append(f"verified exactly for n <= {cert.bound}")
    return "\n".join(lines)


def _normalize_rows(rows):
    """Drop rows with u_2 < 0 whose (-1)^(n-1) twist is already listed."""
    keep = []
    for r in rows:
        u2 = r["values"][2] if len(r["values"]) > 2 else "0"
        if not r["symbolic"] and Fraction(u2) < 0 and any(
                s["set"] == r["twin"] for s in rows if s is not r):
            continue
        keep.append(r)
    return keep


def _table_text(rows):
    head = ("k", "M", "set", "u_0, ..., u_(M-1)")
    body = [(str(r["k"]), str(r["M"]), "{" + ", ".join(map(str, r["set"])) + "}", ", ".join(r["values"]))
            for r in rows]
    w = [max(len(x[i]) for x in [head] + body) for i in range(3)]
    out = []
    for x in [head] + body:
        out.append(f"{x[0]:>{w[0]}}  {x[1]:>{w[1]}}  {x[2]:<{w[2]}}  {x[3]}")
    return "\n".join(out)


@main.command("enumerate")
@click.option("--k", "k", type=int, required=True, help="order")
@click.option("--periodic", is_flag=True, help="periodic LDS with u_0 = 0 (the only mode)")
@click.option("--all-signs", is_flag=True, help="keep rows that are (-1)^(n-1) twists of listed rows")
@click.option("--json", "as_json", is_flag=True)
def cmd_enumerate(k, periodic, all_signs, as_json):
    """Periodic LDS of order exactly k."""
    def go():
        if not periodic:
            raise LindivError("only --periodic enumeration is available")
        rows = [r for r in enumerate_periodic(k) if r["k"] == k]
        if not all_signs:
            rows = _normalize_rows(rows)
        _emit({"k": k, "rows": rows}, as_json, _table_text(rows))
    _run(go)


@main.command("table")
@click.option("--k-max", type=int, default=4, show_default=True)
@click.option("--all-signs", is_flag=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_table(k_max, all_signs, as_json):
    """Table of periodic LDS for every order up to k-max."""
    def go():
        rows = enumerate_periodic(k_max)
        if not all_signs:
            out = []
            for k in range(2, k_max + 1):
                out += _normalize_rows([r for r in rows if r["k"] == k])
            rows = out
        _emit({"k_max": k_max, "rows": rows}, as_json, _table_text(rows))
    _run(go)


def _fraction(ctx, param, value):
    try:
        q = Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"{value!r} is not an exact fraction such as 1/10")
    if "." in value or "e" in value.lower():
        raise click.BadParameter("give eps as an exact fraction such as 1/10")
    return q


@main.command("gcd-growth")
@click.argument("spec_a", type=click.Path())
@click.argument("spec_b", type=click.Path())
@click.option("--eps", callback=_fraction, default="1/10", show_default=True)
@click.option("--n-max", type=int, default=120, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_gcd_growth(spec_a, spec_b, eps, n_max, as_json):
    """Pairs m <= n <= n-max with gcd(u_m, v_n) > exp(eps (m + n))."""
    def go():
        u, mu, _ = _load(spec_a)
        v, mv, _ = _load(spec_b)
        pairs = gcd_growth_detect(u, v, n_max, eps)
        out = {"a": mu.get("name"), "b": mv.get("name"), "eps": str(eps), "n_max": n_max,
               "pairs": [{"m": m, "n": n, "gcd": str(g)} for m, n, g in pairs], "pass": not pairs}
        text = "pass: no pairs" if not pairs else "\n".join(
            [f"{len(pairs)} pairs:"] + [f"  ({m}, {n}) gcd {g}" for m, n, g in pairs])
        _emit(out, as_json, text)
        if pairs:
            raise Failure
    _run(go)


if __name__ == "__main__":
    main()
