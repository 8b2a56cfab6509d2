"""Command-line interface: ``greenberg <command> ...``.

Reports are JSON on stdout (or ``-o FILE``); timings go to stderr.
Exit codes: 0 pass, 1 check failure or computation error, 2 usage or parse error.
"""

from __future__ import annotations

import json
import sys
import time
from contextlib import contextmanager

import click

from . import io
from .errors import GreenbergError, ParseError
from .kernels import DEFAULT_CANDIDATE_GUARD
from .schemes import solve_over_ga, solve_over_k
from .transform import (
    change_level,
    check_cartesian_etale,
    check_surjective_lift,
    gr_transform,
    ker_change_level_count,
    rat_pts_bijection,
)


class InputError(click.ClickException):
    exit_code = 2

    def __init__(self, exc):
        code = getattr(exc, "code", "error")
        super().__init__(f"[{code}] {exc}")


class ComputeError(click.ClickException):
    exit_code = 1

    def __init__(self, exc):
        super().__init__(f"[{exc.code}] {exc}")


def _read(arg, parser, **kw):
    """Parse a file argument; an argument starting with ``{`` is inline JSON."""
    try:
        if arg.lstrip().startswith("{"):
            data, src = io.load(arg, "<inline>")
        else:
            data, src = io.load_file(arg)
        return parser(data, src, **kw)
    except OSError as exc:
        raise InputError(ParseError(f"cannot read {arg}: {exc.strerror}")) from None
    except GreenbergError as exc:
        raise InputError(exc) from None


@contextmanager
def _timed(label):
    start = time.perf_counter()
    try:
        yield
    except GreenbergError as exc:
        raise ComputeError(exc) from None
    finally:
        click.echo(f"{label}: {time.perf_counter() - start:.3f}s", err=True)


def _emit(obj, output):
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _ring_from_options(base, level):
    if base is None:
        return None
    spec = _read(base, io.parse_base)
    from .algebra import ga_build

    try:
        return ga_build(spec, level)
    except GreenbergError as exc:
        raise InputError(exc) from None


output_option = click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the report here.")
algebra_option = click.option("-a", "--algebra", "algebra", required=True, help="Algebra file (or inline JSON).")


@click.group()
@click.version_option(package_name="artifact")
@click.option(
    "--guard",
    type=click.IntRange(min=1),
    default=DEFAULT_CANDIDATE_GUARD,
    show_default=True,
    help="Largest candidate space a brute-force count may enumerate.",
)
@click.pass_context
def main(ctx, guard):
    """Greenberg algebras, the Greenberg transform and Weil restriction."""
    ctx.obj = {"guard": guard}


def _guard():
    return click.get_current_context().obj["guard"]


@main.command("structure-polys")
@click.argument("base")
@click.option("-N", "--level", type=int, required=True)
@output_option
def structure_polys(base, level, output):
    """Dump the add/mul/neg laws, one and pi of R_N."""
    ring = _ring_from_options(base, level)
    with _timed("structure-polys"):
        text = io.structure_polys_text(ring)
    _emit(text, output)


@main.command()
@click.argument("scheme")
@click.option("--base", help="Base file, for scheme files without a ring.")
@click.option("-N", "--level", type=int, default=0)
@click.option("--text", "as_text", is_flag=True, help="Readable generators instead of a scheme file.")
@output_option
def transform(scheme, base, level, as_text, output):
    """Greenberg transform of a scheme over R_N: a scheme file over k."""
    Z = _read(scheme, io.parse_scheme, ring=_ring_from_options(base, level))
    with _timed("transform"):
        T = gr_transform(Z).result
    _emit(io.scheme_text(T) if as_text else io.dump_scheme(T), output)


@main.command("change-level")
@click.argument("scheme")
@click.option("-M", "--to", "M", type=int, required=True)
@output_option
def change_level_cmd(scheme, M, output):
    """The truncation morphism Gr_N(Z) -> Gr_M(Z_M)."""
    Z = _read(scheme, io.parse_scheme)
    with _timed("change-level"):
        f = change_level(Z, M)
    _emit(
        {
            "source": io.scheme_text(f.source),
            "target": io.scheme_text(f.target),
            "images": {v: g.to_text() for v, g in f.images.items()},
        },
        output,
    )


@main.command()
@click.argument("scheme")
@algebra_option
@click.option("--list", "listing", is_flag=True, help="Also list the solutions.")
@output_option
def count(scheme, algebra, listing, output):
    """Count A-points (over k) or R_N(A)-points (over R_N)."""
    Z = _read(scheme, io.parse_scheme)
    A = _read(algebra, io.parse_algebra)
    with _timed("count"):
        if Z.level is None:
            n, sols = solve_over_k(Z, A, collect=listing, guard=_guard())
        else:
            n, sols = solve_over_ga(Z, A, collect=listing, guard=_guard())
    report = {"scheme": io.scheme_text(Z), "algebra": A.name, "count": n}
    if listing:
        report["solutions"] = [list(s) for s in sols]
    _emit(report, output)


@main.command("weil-restrict")
@click.argument("extension")
@click.argument("scheme")
@click.option("--text", "as_text", is_flag=True)
@output_option
def weil_restrict(extension, scheme, as_text, output):
    """Weil restriction of a scheme over the top ring of an extension."""
    from .weil import res_affine

    E = _read(extension, io.parse_extension)
    Z = _read(scheme, io.parse_scheme, ring=E.top)
    with _timed("weil-restrict"):
        R = res_affine(Z, E)
    report = io.scheme_text(R) if as_text else io.dump_scheme(R)
    _emit(report, output)


@main.command("wr-gr-check")
@click.argument("extension")
@click.argument("scheme")
@click.option("-a", "--algebra", "algebras", multiple=True, required=True)
@output_option
def wr_gr_check_cmd(extension, scheme, algebras, output):
    """Compare |Res(Gr(Z))(A)| with |Gr(Res(Z))(A)|."""
    from .weil import wr_gr_check

    E = _read(extension, io.parse_extension)
    Z = _read(scheme, io.parse_scheme, ring=E.top)
    algs = {}
    for a in algebras:
        A = _read(a, io.parse_algebra)
        algs[A.name] = A
    with _timed("wr-gr-check"):
        cells = wr_gr_check(Z, E, algs, "Z")
    records = [c.as_record() for c in cells]
    _emit({"cells": records, "passed": all(c.equal for c in cells)}, output)
    if not all(c.equal for c in cells):
        sys.exit(1)


@main.group()
def check():
    """Point-level checks of the transform."""


def _finish(report, passed, output):
    report["passed"] = passed
    _emit(report, output)
    if not passed:
        sys.exit(1)


@check.command("rat-pts")
@click.argument("scheme")
@algebra_option
@output_option
def check_rat_pts(scheme, algebra, output):
    """Gr_N(Z)(A) against Z(R_N(A)) through coordinate packing."""
    Z = _read(scheme, io.parse_scheme)
    A = _read(algebra, io.parse_algebra)
    with _timed("rat-pts"):
        r = rat_pts_bijection(Z, A, guard=_guard())
    _finish(
        {"transform_points": r.transform_points, "ring_points": r.ring_points, "injective": r.injective, "onto": r.onto},
        r.bijective,
        output,
    )


@check.command("surjective")
@click.argument("scheme")
@click.option("-m", type=int, required=True)
@click.option("-i", type=int, required=True)
@algebra_option
@output_option
def check_surjective(scheme, m, i, algebra, output):
    """Do all points of Gr_m(Z_m) lift to level m+i?"""
    Z = _read(scheme, io.parse_scheme)
    A = _read(algebra, io.parse_algebra)
    with _timed("surjective"):
        r = check_surjective_lift(Z, m, i, A, guard=_guard())
    _finish(
        {
            "m": m,
            "i": i,
            "lower_points": r.lower_points,
            "upper_points": r.upper_points,
            "lifted": r.lifted,
            "non_lifting": [list(x) for x in r.non_lifting],
        },
        r.surjective,
        output,
    )


@check.command("cartesian")
@click.argument("morphism")
@click.option("-m", type=int, required=True)
@click.option("-i", type=int, required=True)
@algebra_option
@output_option
def check_cartesian(morphism, m, i, algebra, output):
    """Is Gr_(m+i)(Z)(A) the fibre product for an etale map?"""
    f = _read(morphism, io.parse_morphism)
    A = _read(algebra, io.parse_algebra)
    with _timed("cartesian"):
        r = check_cartesian_etale(f, m, i, A, guard=_guard())
    _finish(
        {
            "source_points": r.source_points,
            "fiber_product_points": r.fiber_product_points,
            "injective": r.injective,
            "surjective": r.surjective,
            "witnesses": [[w[0]] + [list(x) for x in w[1:]] for w in r.witnesses],
        },
        r.bijective,
        output,
    )


@check.command("kernel")
@click.argument("group")
@click.option("-m", type=int, required=True)
@click.option("-i", type=int, required=True)
@algebra_option
@click.option("--expect-dim", type=int, help="Compare with |A|^(i*d).")
@output_option
def check_kernel(group, m, i, algebra, expect_dim, output):
    """Count the kernel of Gr_(m+i)(G)(A) -> Gr_m(G_m)(A)."""
    G = _read(group, io.parse_group)
    A = _read(algebra, io.parse_algebra)
    with _timed("kernel"):
        n = ker_change_level_count(G, m, i, A, guard=_guard())
        d = G.lie_dim if expect_dim is None else expect_dim
    expected = A.size ** (i * d)
    _finish({"count": n, "lie_dim": d, "expected": expected}, n == expected, output)


@main.command()
@click.argument("suite", type=click.Choice(["witt", "algebra", "ratpts", "levels", "groups", "weil", "all"]))
@output_option
def verify(suite, output):
    """Run an acceptance suite; exit 1 if any check fails."""
    from .verify import run_suite

    def log(name, seconds):
        click.echo(f"{name}: {seconds:.2f}s", err=True)

    report = run_suite(suite, log=log)
    _emit(report, output)
    if not report["passed"]:
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
