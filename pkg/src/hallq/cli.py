"""Command-line front end.

Exit codes: 0 success / audit pass, 1 audit fail, 2 input error,
3 capacity exceeded.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import auditor, hall, reps
from .config import DEFAULT_ENUMERATION_CAP, DEFAULT_SCAN_CAP, RunConfig
from .errors import CapacityError, HallError, QuiverSyntaxError, ValidationError
from .quiver import classify_shape, parse_quiver, predict
from .reps import Representation

EXIT_PASS = 0
EXIT_AUDIT_FAIL = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3


def _caps():
    env = os.environ.get("HALL_AUDIT_CAP")
    if env:
        try:
            cap = int(env)
            if cap <= 0:
                raise ValueError
        except ValueError:
            raise ValidationError(f"HALL_AUDIT_CAP must be a positive integer, "
                                  f"got {env!r}")
        return cap, cap
    return DEFAULT_ENUMERATION_CAP, DEFAULT_SCAN_CAP


def _load_quiver(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}")
    return parse_quiver(text)


def _load_module(path: str, quiver):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read module {path}: {exc}")
    return Representation.from_json(data, quiver)


def _emit(payload, text_lines, fmt: str, out: str | None):
    if fmt == "json":
        rendered = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        rendered = "\n".join(text_lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)


def _run(fn):
    try:
        sys.exit(fn())
    except QuiverSyntaxError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except ValidationError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except CapacityError as exc:
        click.echo(f"capacity exceeded: {exc}", err=True)
        sys.exit(EXIT_CAPACITY)
    except HallError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)


fmt_option = click.option("--format", "fmt", type=click.Choice(["text", "json"]),
                          default="text", show_default=True)
out_option = click.option("--out", default=None, help="write output to a file")
prime_option = click.option("--q", "-q", "p", type=int, default=2,
                            show_default=True, help="field size (prime)")


@click.group()
def main():
    """Exact Hall algebra workbench for quivers over small prime fields."""


@main.command("classify")
@click.argument("quiver_file")
@fmt_option
@out_option
def cmd_classify(quiver_file, fmt, out):
    """Classify each connected component and report closure predictions."""
    def run():
        q = _load_quiver(quiver_file)
        verdict = predict(q)
        lines = [f"quiver {q.name}"]
        for comp, shape in zip(q.connected_components(), verdict.shapes):
            lines.append(f"  component {comp.name}: {shape}")
        lines.append(f"  ideal_all_r={str(verdict.ideal_all_r).lower()}"
                     f" subring_r1={str(verdict.subring_r1).lower()}"
                     f" subring_all_r={str(verdict.subring_all_r).lower()}")
        _emit({"quiver": q.name, **verdict.to_json()}, lines, fmt, out)
        return EXIT_PASS
    _run(run)


@main.command("product")
@click.argument("quiver_file")
@click.argument("module_a")
@click.argument("module_b")
@click.option("--twisted", is_flag=True, help="scale by v to the Euler form")
@prime_option
@fmt_option
@out_option
def cmd_product(quiver_file, module_a, module_b, twisted, p, fmt, out):
    """Hall product of two modules given as JSON files."""
    def run():
        cfg = RunConfig(p=p)
        q = _load_quiver(quiver_file)
        a = _load_module(module_a, q)
        b = _load_module(module_b, q)
        if a.p != p or b.p != p:
            raise ValidationError("module field does not match --q")
        enum_cap, scan_cap = _caps()
        ctx = hall.Context(q, p, hall.IsoRegistry(scan_cap), enum_cap, scan_cap)
        elem = hall.hall_product(ctx, a, b, twist=twisted)
        lines = []
        for key, coeff in elem.sorted_terms():
            mod = ctx.registry.module(key)
            lines.append(f"{coeff} [dim {'x'.join(map(str, mod.dim_vector()))}]"
                         f" key={key}")
        if not lines:
            lines = ["0"]
        _emit(elem.to_json(), lines, fmt, out)
        return EXIT_PASS
    _run(run)


@main.command("check")
@click.argument("quiver_file")
@click.option("--mode", type=click.Choice(list(auditor.MODES)), default="subring",
              show_default=True)
@click.option("--r", "-r", "r", type=int, default=1, show_default=True)
@click.option("--max-dim", type=int, default=5, show_default=True)
@prime_option
@click.option("--nilpotent", is_flag=True, help="restrict to nilpotent modules")
@fmt_option
@out_option
def cmd_check(quiver_file, mode, r, max_dim, p, nilpotent, fmt, out):
    """Audit whether D_r stays closed under products, within a bound."""
    def run():
        q = _load_quiver(quiver_file)
        enum_cap, scan_cap = _caps()
        report = auditor.audit(q, r, p, max_dim, mode=mode,
                               nilpotent_only=nilpotent,
                               enumeration_cap=enum_cap, scan_cap=scan_cap)
        lines = [f"{report.verdict} (mode={mode}, r={r}, p={p}, "
                 f"bound={max_dim}, pairs={report.pairs_checked})"]
        if report.certificate is not None:
            c = report.certificate
            lines.append(f"  factors: {c.left.dim_vector()} * {c.right.dim_vector()}")
            lines.append(f"  violating class: dim {c.violating.dim_vector()}, "
                         f"s = {c.s_violating}, count = {c.count}")
        _emit(report.to_json(), lines, fmt, out)
        return EXIT_PASS if report.passed else EXIT_AUDIT_FAIL
    _run(run)


@main.command("decompose")
@click.argument("quiver_file")
@click.argument("module_file")
@fmt_option
@out_option
def cmd_decompose(quiver_file, module_file, fmt, out):
    """Indecomposable direct summands of a module."""
    def run():
        q = _load_quiver(quiver_file)
        m = _load_module(module_file, q)
        _, scan_cap = _caps()
        dec = reps.decompose(m, cap=scan_cap)
        lines = [f"s = {dec.s}"]
        payload = {"s": dec.s, "summands": []}
        for rep, mult in dec.summands:
            lines.append(f"  {mult} x dim {'x'.join(map(str, rep.dim_vector()))}")
            payload["summands"].append({"multiplicity": mult,
                                        "module": rep.to_json()})
        _emit(payload, lines, fmt, out)
        return EXIT_PASS
    _run(run)


@main.command("invariants")
@click.argument("quiver_file")
@click.argument("module_file")
@fmt_option
@out_option
def cmd_invariants(quiver_file, module_file, fmt, out):
    """Radical, socle, top, nilpotency and endomorphism data."""
    def run():
        q = _load_quiver(quiver_file)
        m = _load_module(module_file, q)
        nil = reps.is_nilpotent(m)
        end_dim = reps.hom_dim(m, m)
        payload = {"dims": list(m.dim_vector()), "nilpotent": nil,
                   "end_dim": end_dim}
        lines = [f"dim = {'x'.join(map(str, m.dim_vector()))}",
                 f"nilpotent = {str(nil).lower()}",
                 f"dim End = {end_dim}"]
        if q.is_acyclic() or nil:
            ld = reps.loewy_data(m)
            payload.update({
                "radical": list(ld.radical.dim_vector()),
                "socle": list(ld.socle.dim_vector()),
                "top": list(ld.top.dim_vector()),
                "uniserial": reps.is_uniserial(m),
            })
            lines.append(f"radical = {ld.radical.dim_vector()}  "
                         f"socle = {ld.socle.dim_vector()}  "
                         f"top = {ld.top.dim_vector()}")
            lines.append(f"uniserial = {str(payload['uniserial']).lower()}")
        _emit(payload, lines, fmt, out)
        return EXIT_PASS
    _run(run)


@main.command("enumerate")
@click.argument("quiver_file")
@click.option("--dim", required=True,
              help="dimension vector, comma separated (e.g. 1,2,1)")
@prime_option
@click.option("--nilpotent", is_flag=True)
@click.option("--indecomposable", is_flag=True,
              help="keep only indecomposable classes")
@fmt_option
@out_option
def cmd_enumerate(quiver_file, dim, p, nilpotent, indecomposable, fmt, out):
    """Isomorphism classes with a given dimension vector."""
    def run():
        q = _load_quiver(quiver_file)
        try:
            vec = tuple(int(x) for x in dim.split(","))
        except ValueError:
            raise ValidationError(f"bad dimension vector {dim!r}")
        if len(vec) != len(q.vertices):
            raise ValidationError(f"expected {len(q.vertices)} entries, "
                                  f"got {len(vec)}")
        enum_cap, scan_cap = _caps()
        classes = reps.enumerate_reps(q, vec, p, nilpotent_only=nilpotent,
                                      cap=enum_cap)
        if indecomposable:
            classes = [m for m in classes
                       if reps.decompose(m, cap=scan_cap).s == 1]
        lines = [f"{len(classes)} classes"]
        payload = {"count": len(classes), "classes": [m.to_json() for m in classes]}
        _emit(payload, lines, fmt, out)
        return EXIT_PASS
    _run(run)


@main.command("certify")
@click.argument("cert_id", type=click.Choice(list(auditor.CERT_IDS)))
@fmt_option
@out_option
def cmd_certify(cert_id, fmt, out):
    """Rebuild and verify one of the named counterexample certificates."""
    def run():
        cert = auditor.certify(cert_id)
        lines = [f"certificate {cert_id}: mode={cert.mode}, r={cert.r}, "
                 f"p={cert.p}",
                 f"  factors {cert.left.dim_vector()} * {cert.right.dim_vector()}"
                 f" -> violating dim {cert.violating.dim_vector()}"
                 f" (s = {cert.s_violating}, count = {cert.count})"]
        if cert_id in ("2.6", "2.7"):
            end_dim = reps.hom_dim(cert.violating, cert.violating)
            lines.append(f"  End dim = {end_dim}, local: yes")
        _emit(cert.to_json(), lines, fmt, out)
        return EXIT_PASS
    _run(run)


if __name__ == "__main__":
    main()
