"""Command-line interface: graded pieces, Mackey functors, tau tables, box
products, geometric fixed points and verification suites.

Exit codes: 0 success, 2 parse error, 3 domain error, 4 verification failure
(including any MISMATCH under ``--method both``).
"""

import csv
import io
import itertools
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from . import closedforms as cf
from . import mackey as mk
from . import spheres
from .burnside import BurnsideError, CyclicGroupCtx, divisors
from .exactlin import LinAlgError, format_group
from .ro import (ParseError, RepError, ROElement, TauFunction, divisor_decompose,
                 format_grading, in_ro_zero, parse_grading, tau_of)

SCHEMA_VERSION = 1
EXIT_PARSE, EXIT_DOMAIN, EXIT_VERIFY = 2, 3, 4
WORKERS_ENV = "EQUICYCLIC_WORKERS"
DOMAIN_ERRORS = (cf.ClosedFormError, mk.MackeyError, spheres.SphereError, RepError,
                 BurnsideError, LinAlgError, ValueError)


class Failure(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _fail(message, code):
    raise Failure(message, code)


def _parse(n, text):
    try:
        return parse_grading(CyclicGroupCtx(n), text)
    except ParseError as e:
        _fail("parse error: %s\n%s" % (e, e.caret()), EXIT_PARSE)


def _coefficients(n, name):
    m = re.fullmatch(r"<Z/(\d+)>", name)
    try:
        if m:
            return mk.standard("brackZmodp", n, int(m.group(1)))
        return mk.standard(name, n)
    except mk.MackeyError as e:
        _fail(str(e), EXIT_DOMAIN)


# ---------------------------------------------------------------------------
# piece

_RANGE = re.compile(r"^\s*(t|s|L\d+)\s*=\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


def _basis(ctx, name):
    if name == "t":
        return ROElement(ctx, 1)
    if name == "s":
        if ctx.n % 2:
            _fail("sigma needs an even group order", EXIT_PARSE)
        return ROElement(ctx, 0, 1, {})
    k = int(name[1:]) % ctx.n
    if k == 0:
        return ROElement(ctx, 2)
    return ROElement(ctx, 0, 0, {min(k, ctx.n - k): 1})


def _rectangle(n, base, ranges):
    """Gradings base + sum c_i e_i over the given coefficient ranges."""
    ctx = CyclicGroupCtx(n)
    axes = []
    for spec in ranges:
        m = _RANGE.match(spec)
        if not m:
            _fail("parse error: bad range %r (expected NAME=A..B with NAME t, s or Lk)" % spec,
                  EXIT_PARSE)
        lo, hi = int(m.group(2)), int(m.group(3))
        if hi < lo:
            _fail("parse error: empty range %r" % spec, EXIT_PARSE)
        axes.append((_basis(ctx, m.group(1)), range(lo, hi + 1)))
    out = []
    for cs in itertools.product(*[r for _, r in axes]):
        a = base
        for (e, _), c in zip(axes, cs):
            for _ in range(abs(c)):
                a = a + e if c > 0 else a - e
        out.append(a)
    return out


def _piece_record(args):
    """One grading: dict with oracle / closed-form results and verdict."""
    n, text, coeff, method = args
    alpha = parse_grading(CyclicGroupCtx(n), text)
    rec = {"grading": format_grading(alpha), "n": n, "coefficients": coeff}
    if method in ("oracle", "both"):
        m = mk.standard(coeff, n) if not coeff.startswith("<Z/") else \
            mk.standard("brackZmodp", n, int(coeff[3:-1]))
        g = spheres.homotopy_group(alpha, m)
        rec["oracle"] = _piece_json(g, "oracle")
    if method in ("closedform", "both"):
        try:
            rec["closedform"] = _piece_json(cf.closedform_piece(alpha, coeff), "closedform")
        except cf.ClosedFormError as e:
            if method == "closedform":
                raise
            rec["closedform"] = {"error": str(e)}
    if method == "both":
        c = rec["closedform"]
        if "error" in c:
            rec["verdict"] = "SKIP"
        else:
            rec["verdict"] = "MATCH" if c["group"] == rec["oracle"]["group"] else "MISMATCH"
    return rec


def _piece_json(piece, method):
    r, t = piece.canonical()
    return {"method": method, "group": {"rank": r, "torsion": list(t)},
            "canonical": format_group((r, tuple(t))),
            "generators": [str(g) for g in piece.generators]}


def _map_jobs(fn, jobs):
    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, jobs))
    return [fn(j) for j in jobs]


def _render_pieces(recs, fmt, method):
    if fmt == "json":
        doc = {"schema": SCHEMA_VERSION, "results": recs}
        if len(recs) == 1:
            doc = dict(recs[0], schema=SCHEMA_VERSION)
            if method != "both":
                doc.update(doc.pop(method))
        return json.dumps(doc, indent=2, sort_keys=False)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ["grading"]
        kinds = ["oracle", "closedform"] if method == "both" else [method]
        for k in kinds:
            cols += ["%s_rank" % k, "%s_torsion" % k, "%s_group" % k]
        if method == "both":
            cols.append("verdict")
        w.writerow(cols)
        for r in recs:
            row = [r["grading"]]
            for k in kinds:
                d = r[k]
                if "error" in d:
                    row += ["", "", "error"]
                else:
                    row += [d["group"]["rank"], " ".join(map(str, d["group"]["torsion"])),
                            d["canonical"]]
            if method == "both":
                row.append(r["verdict"])
            w.writerow(row)
        return buf.getvalue().rstrip("\n")
    lines = []
    for r in recs:
        head = "C_%d  pi_{%s}(H%s)" % (r["n"], r["grading"], r["coefficients"])
        if method == "both":
            o, c = r["oracle"], r["closedform"]
            cs = c.get("canonical", "error: " + c.get("error", ""))
            lines.append("%s  %s  oracle: %s  closedform: %s" % (head, r["verdict"],
                                                                  o["canonical"], cs))
            if r["verdict"] == "MISMATCH":
                lines.append("  oracle generators: %s" % ", ".join(o["generators"]))
                lines.append("  closed-form generators: %s" % ", ".join(c["generators"]))
        else:
            d = r[method]
            lines.append("%s = %s" % (head, d["canonical"]))
            if d["generators"] and len(recs) == 1:
                lines.append("  generators: %s" % ", ".join(d["generators"]))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# mackey / box rendering

def _render_functor(m, fmt, extra=None):
    if fmt == "json":
        doc = {"schema": SCHEMA_VERSION, "functor": m.to_json(),
               "levels": {str(d): format_group(m.level(d).canonical()) for d in m.ctx.divisors}}
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=2)
    if fmt == "dot":
        return mk.lewis_dot(m)
    text = mk.lewis_ascii(m)
    if extra:
        text += "\n" + "\n".join("%s: %s" % kv for kv in extra.items())
    return text


_TAU_SPEC = re.compile(r"^A\[(.*)\]$")


def _functor_spec(n, spec):
    """A, Z, Z*, <Z>, <Z/k>, or A[d:v,d:v,...] (unspecified tau_d = 1)."""
    m = _TAU_SPEC.match(spec.strip())
    if m:
        vals = {d: 1 for d in divisors(n) if d != n}
        body = m.group(1).strip()
        if body:
            for part in body.split(","):
                try:
                    d, v = (int(x) for x in part.split(":"))
                except ValueError:
                    _fail("parse error: bad tau entry %r in %r (expected d:v)" % (part, spec),
                          EXIT_PARSE)
                if d not in vals:
                    _fail("%d is not a proper divisor of %d" % (d, n), EXIT_DOMAIN)
                vals[d] = v
        tau = TauFunction(n, vals)
        if not tau.is_invertible():
            _fail("tau %s is not invertible" % vals, EXIT_DOMAIN)
        return mk.tau_burnside(tau)
    return _coefficients(n, spec.strip())


# ---------------------------------------------------------------------------
# click commands

FORMATS = click.Choice(["text", "json", "csv"])


def _order_option(f):
    return click.option("-n", "--order", "n", type=click.IntRange(min=1), required=True,
                        help="order of the cyclic group C_n")(f)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """RO(C_n)-graded homotopy of HA and HZ: oracle and closed forms."""


@main.command()
@_order_option
@click.option("-c", "--coeff", default="Z", show_default=True,
              help="coefficients: A, Z, Z*, <Z>, <Z/k> (closed forms: A, Z)")
@click.option("--method", type=click.Choice(["oracle", "closedform", "both"]), default="oracle",
              show_default=True)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@click.option("--range", "ranges", multiple=True, metavar="NAME=A..B",
              help="add a rectangle axis (NAME is t, s or Lk); repeatable")
@click.argument("grading", required=False, default="0")
def piece(n, coeff, method, fmt, ranges, grading):
    """pi_alpha(H coeff) at G/G for a grading such as "4 - L1 - L3"."""
    base = _parse(n, grading)
    _coefficients(n, coeff)
    alphas = _rectangle(n, base, ranges) if ranges else [base]
    jobs = [(n, format_grading(a), coeff, method) for a in alphas]
    recs = _map_jobs(_piece_record, jobs)
    click.echo(_render_pieces(recs, fmt, method))
    if method == "both" and any(r["verdict"] == "MISMATCH" for r in recs):
        sys.exit(EXIT_VERIFY)


@main.command("mackey")
@_order_option
@click.option("-c", "--coeff", default="A", show_default=True)
@click.option("--method", type=click.Choice(["oracle", "closedform", "both"]), default="oracle",
              show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json", "dot"]), default="text",
              show_default=True)
@click.argument("grading")
def mackey_cmd(n, coeff, method, fmt, grading):
    """The Mackey functor pi_alpha(H coeff) as a Lewis diagram."""
    alpha = _parse(n, grading)
    extra = {"grading": format_grading(alpha)}
    if method in ("closedform", "both") and coeff != "A":
        _fail("closed-form Mackey functors exist for A coefficients only", EXIT_DOMAIN)
    if method == "closedform":
        m = cf.closedform_mackey(alpha)
        if getattr(m, "case_data", None):
            extra["case"] = "%d%s" % (m.case_data["case"], m.case_data["sub"])
        click.echo(_render_functor(m, fmt, extra))
        return
    o = spheres.homotopy_mackey(alpha, _coefficients(n, coeff))
    if method == "oracle":
        click.echo(_render_functor(o, fmt, extra))
        return
    c = cf.closedform_mackey(alpha)
    verdict = "MATCH" if mk.isomorphic(c, o) else "MISMATCH"
    extra["verdict"] = verdict
    if fmt == "json":
        doc = {"schema": SCHEMA_VERSION, "grading": extra["grading"], "verdict": verdict,
               "oracle": o.to_json(), "closedform": c.to_json()}
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo("%s\n\n%s\n%s" % (_render_functor(o, "text"), _render_functor(c, "text"),
                                     verdict) if fmt == "text" else
                   mk.lewis_dot(o) + "\n" + mk.lewis_dot(c) + "\n// " + verdict)
    if verdict == "MISMATCH":
        sys.exit(EXIT_VERIFY)


@main.command()
@_order_option
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
@click.argument("grading")
def tau(n, fmt, grading):
    """The unit function tau of alpha (of its RO_0 part in general)."""
    alpha = _parse(n, grading)
    if in_ro_zero(alpha):
        a0 = alpha
    else:
        a0, _ = divisor_decompose(alpha)
    t = tau_of(a0)
    rows = [(d, t[d], n // d) for d in divisors(n) if d != n]
    if fmt == "json":
        click.echo(json.dumps({"schema": SCHEMA_VERSION, "grading": format_grading(alpha),
                               "ro_zero_part": format_grading(a0),
                               "tau": {str(d): v for d, v, _ in rows}}, indent=2))
        return
    click.echo("tau(%s)%s" % (format_grading(a0), "" if a0 == alpha else
                              "  [RO_0 part of %s]" % format_grading(alpha)))
    for d, v, m in rows:
        click.echo("  tau_%d = %d (mod %d)" % (d, v, m))


@main.command("box")
@_order_option
@click.option("--format", "fmt", type=click.Choice(["text", "json", "dot"]), default="text",
              show_default=True)
@click.argument("specs", nargs=-1, required=True)
def box_cmd(n, fmt, specs):
    """Box product of functors given as A, Z, Z*, <Z>, <Z/k> or A[d:v,...]."""
    ms = [_functor_spec(n, s) for s in specs]
    out = ms[0]
    for m in ms[1:]:
        out = mk.box(out, m)
    extra = {"product": " box ".join(specs)}
    try:
        extra["tau"] = str(mk.iso_as_tau(out).values)
    except mk.MackeyError:
        pass
    click.echo(_render_functor(out, fmt, extra))


@main.command()
@_order_option
@click.option("--max-degree", type=click.IntRange(min=0), default=8, show_default=True)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
def geofix(n, max_degree, fmt):
    """pi_*(Phi^{C_n} HA): closed formula next to the E^2 assembly."""
    ring = cf.geometric_fixed_points(n)
    ss = cf.geo_spectral_sequence_e2(n, max(max_degree, 1))
    rows = []
    for d in range(max_degree + 1):
        a, b = ring.canonical(d), ss.assembled(d).canonical()
        rows.append({"degree": d, "formula": format_group(a), "e2": format_group(b),
                     "agree": a == b, "generators": ring.generators(d)})
    if fmt == "json":
        click.echo(json.dumps({"schema": SCHEMA_VERSION, "n": n, "degrees": rows,
                               "e2_checks": ss.checks()}, indent=2))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "formula", "e2", "agree", "generators"])
        for r in rows:
            w.writerow([r["degree"], r["formula"], r["e2"], r["agree"], " ".join(r["generators"])])
        click.echo(buf.getvalue().rstrip("\n"))
    else:
        click.echo("pi_*(Phi^{C_%d} HA)" % n)
        for r in rows:
            click.echo("  %2d  %-24s E2: %-24s %s" % (r["degree"], r["formula"], r["e2"],
                                                       "ok" if r["agree"] else "DIFFER"))
    if not all(r["agree"] for r in rows):
        sys.exit(EXIT_VERIFY)


_BOUND_KW = {"burnside": "nmax", "box": "pairs", "ro-zero": "count", "hz-cone": "max_dim",
             "ha-cone": "max_dim", "gold": None, "geofix": "max_degree",
             "negative-cone": "bound", "many-zeros": "per_case", "torsion-free": "count",
             "box-unit": None}


@main.command()
@click.argument("suite", type=click.Choice(sorted(_BOUND_KW)))
@click.option("-n", "--order", "ns", type=click.IntRange(min=1), multiple=True,
              help="group orders to run (default: the suite's standard set)")
@click.option("--bound", type=click.IntRange(min=0), default=None,
              help="size bound (grid dimension, sample count, ...)")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def verify(suite, ns, bound, fmt):
    """Run a verification suite; exit 4 on any failure."""
    from .suites import SUITES
    kw = {}
    if ns:
        if suite == "box-unit":
            kw["n"] = ns[0]
        elif suite == "burnside":
            kw["nmax"] = max(ns)
        elif suite == "ha-cone":
            kw["prime_powers"] = tuple(n for n in ns if cf.is_prime_power(n))
            kw["square_free"] = tuple(n for n in ns if not cf.is_prime_power(n))
        else:
            kw["ns"] = tuple(ns)
    if bound is not None and _BOUND_KW[suite]:
        kw[_BOUND_KW[suite]] = bound
    res = SUITES[suite](**kw)
    if fmt == "json":
        click.echo(json.dumps(res.to_json(), indent=2))
    else:
        click.echo(res.line())
        for f in res.failures[:20]:
            click.echo("  counterexample: %s" % f)
    if not res.ok:
        sys.exit(EXIT_VERIFY)


def run(argv=None):
    """Entry point with the exit-code policy applied."""
    try:
        main.main(args=argv, prog_name="equicyclic", standalone_mode=False)
    except Failure as e:
        click.echo(str(e), err=True)
        return e.code
    except click.exceptions.UsageError as e:
        e.show()
        return EXIT_PARSE
    except click.exceptions.Abort:
        return 1
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    except DOMAIN_ERRORS as e:
        click.echo("error: %s" % e, err=True)
        return EXIT_DOMAIN
    return 0


def entry():
    sys.exit(run())
