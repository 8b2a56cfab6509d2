"""Acceptance suites behind ``greenberg verify``.

Every suite returns a report whose content depends only on the inputs, so
two runs produce byte-identical JSON. Timings are passed to ``log`` and
never enter the report.
"""

from __future__ import annotations

import itertools
import time

import numpy as np

from . import corpus
from .algebra import BaseRingSpec, check_oracle_isomorphism, ga_build, ga_ideal_power_members, ga_points
from .errors import GradingViolation
from .fields import FiniteField, alg_build
from .schemes import morphism, presentation, scheme_reduce_level, solve_over_k
from .transform import (
    check_cartesian_etale,
    check_surjective_lift,
    gr_transform,
    ker_change_level_count,
    points,
    rat_pts_bijection,
    truncate_points,
)
from .weil import (
    ext_build_equal,
    ext_build_field,
    ext_build_mixed,
    res_affine,
    res_point_bijection,
    unramified_base_change_counts,
    wr_gr_check,
)
from .witt import WittRing, verify_ghost_identities, witt_laws_build, witt_table_ring

MAX_LISTED = 10

# oracle levels beyond the N <= 3 corpus; each runs in seconds
ORACLE_EXTENDED = {"k2[[t]]": 6, "k3[[t]]": 4, "W(F2)": 4, "W(F3)": 3, "t^2-2": 7, "t^2-3": 5, "t^3-2": 8}

LEVEL_STEPS = ((0, 1), (0, 2), (1, 1))


class Check:
    """Accumulates the cells of one named check."""

    def __init__(self, criterion, name):
        self.criterion = criterion
        self.name = name
        self.cells = 0
        self.failures = []
        self.notes = []

    def record(self, ok, label):
        self.cells += 1
        if not ok:
            self.failures.append(label)

    def as_record(self):
        out = {
            "criterion": self.criterion,
            "name": self.name,
            "cells": self.cells,
            "failed": len(self.failures),
            "failures": self.failures[:MAX_LISTED],
            "passed": not self.failures,
        }
        if self.notes:
            out["notes"] = self.notes
        return out


# -- criterion 1 ------------------------------------------------------------------


def _witt_ghost():
    c = Check(1, "ghost components are additive and multiplicative")
    for p, top in ((2, 4), (3, 3), (5, 3)):
        for n in range(1, top + 1):
            bad = verify_ghost_identities(witt_laws_build(p, n))
            c.record(not bad, f"p={p} n={n}: {bad[:2]}")
    return [c]


def _witt_integers():
    c = Check(1, "W_n(F_p) is Z/p^n")
    for p in (2, 3, 5):
        for n in range(1, 4):
            W = WittRing(p, n, alg_build("field", FiniteField(p)).ring)
            R = witt_table_ring(p, n, W.ops)
            q = p**n
            image = np.array([sum(x * p**l for l, x in enumerate(W.from_int(a))) for a in range(q)])
            a = np.arange(q)[:, None]
            b = np.arange(q)[None, :]
            ok = (
                len(set(image.tolist())) == q
                and np.array_equal(R.add_t[image[a], image[b]], image[(a + b) % q])
                and np.array_equal(R.mul_t[image[a], image[b]], image[(a * b) % q])
            )
            c.record(ok, f"p={p} n={n}")
    return [c]


def _witt_verschiebung():
    c = Check(1, "V is additive and V(x) y = V(x F(y))")
    algebras = [
        ("F2", alg_build("field", corpus.field("F2"))),
        ("F3", alg_build("field", corpus.field("F3"))),
        ("F4", alg_build("extension", corpus.field("F2"), corpus.field("F4"))),
        ("F2[e]", alg_build("dual_numbers", corpus.field("F2"), 2)),
    ]
    for (name, A), n in itertools.product(algebras, (2, 3)):
        p = A.base.p
        W = WittRing(p, n, A.ring)
        R = witt_table_ring(p, n, A.ring)
        size = A.size

        def enc(v):
            return sum(x * size**l for l, x in enumerate(v))

        vecs = [tuple((i // size**l) % size for l in range(n)) for i in range(R.size)]
        V = np.array([enc(W.verschiebung(v)) for v in vecs])
        F = np.array([enc(W.frobenius(v)) for v in vecs])
        idx = np.arange(R.size)
        additive = np.array_equal(V[R.add_t], R.add_t[V[:, None], V[None, :]])
        projection = np.array_equal(R.mul_t[V[:, None], idx[None, :]], V[R.mul_t[:, F]])
        c.record(additive and projection, f"W_{n}({name}): additive={additive} projection={projection}")
    return [c]


# -- criteria 2 to 4 --------------------------------------------------------------


def _algebra_grid():
    for bname, b in corpus.bases().items():
        for N in range(4):
            for aname, A in corpus.algebras(b.p).items():
                yield bname, b, N, aname, A


def _algebra_axioms():
    axioms = Check(2, "R_N(A) satisfies the ring axioms")
    grading = Check(2, "no grading violation while building R_N")
    for bname, b in corpus.bases().items():
        for N in range(4):
            try:
                ga_build(b, N)
                grading.record(True, "")
            except GradingViolation as exc:
                grading.record(False, f"{bname} N={N}: {exc}")
    for bname, b, N, aname, A in _algebra_grid():
        bad = ga_points(ga_build(b, N), A).ring.check_axioms()
        axioms.record(not bad, f"{bname} N={N} A={aname}: {bad[:2]}")
    return [axioms, grading]


def _algebra_oracle():
    c = Check(3, "R_N(F_p) is Z[pi]/(f, pi^(N+1)) on the corpus, N <= 3")
    ext = Check(3, "R_N(F_p) is Z[pi]/(f, pi^(N+1)) at extended levels")
    for bname, b in corpus.bases().items():
        for N in range(4):
            bad = check_oracle_isomorphism(b, N)
            c.record(not bad, f"{bname} N={N}: {bad[:2]}")
        for N in range(4, ORACLE_EXTENDED[bname] + 1):
            bad = check_oracle_isomorphism(b, N)
            ext.record(not bad, f"{bname} N={N}: {bad[:2]}")
    return [c, ext]


def _algebra_truncation():
    kernel = Check(4, "truncation R_N(A) -> R_M(A) is a ring map with kernel m^(M+1), and m^(N+1) = 0")
    pi_map = Check(4, "pi R_(N-1)(A) = m")
    for bname, b, N, aname, A in _algebra_grid():
        pts = ga_points(ga_build(b, N), A)
        R = pts.ring
        powers = {j: ga_ideal_power_members(pts, j) for j in range(1, N + 2)}
        problems = [] if powers[N + 1] == [0] else [f"|m^{N + 1}|={len(powers[N + 1])}"]
        for M in range(N):
            lower = ga_points(ga_build(b, M), A).ring
            t = pts.truncation_map(M)
            hom = np.array_equal(t[R.add_t], lower.add_t[t[:, None], t[None, :]]) and np.array_equal(
                t[R.mul_t], lower.mul_t[t[:, None], t[None, :]]
            )
            ker = np.flatnonzero(t == 0).tolist()
            if not hom:
                problems.append(f"M={M}: not a ring map")
            if ker != powers[M + 1]:
                problems.append(f"M={M}: |ker|={len(ker)} |m^{M + 1}|={len(powers[M + 1])}")
        kernel.record(not problems, f"{bname} N={N} A={aname}: {'; '.join(problems)}")
        if N >= 1:
            ga = pts.ga
            pi = pts.encode(pts.ops.coeff(ga.pi, ga))
            lower = ga_points(ga_build(b, N - 1), A)
            images = sorted({int(R.mul_t[pi, pts.encode(lower.decode(r) + (0,))]) for r in range(lower.size)})
            pi_map.record(images == powers[1], f"{bname} N={N} A={aname}: |pi R_(N-1)|={len(images)} |m|={len(powers[1])}")
    if kernel.failures:
        kernel.notes.append(
            "in mixed characteristic pi R_N(A) only reaches V(F(W(A))); the kernel of truncation is V(W(A)), "
            "so the two differ whenever Frobenius on A is not onto (A = F2[e])"
        )
    return [kernel, pi_map]


# -- criteria 5 and 6 ---------------------------------------------------------------


def _ratpts():
    c = Check(5, "Gr_N(Z)(A) = Z(R_N(A)) through coordinate packing")
    for bname, b in corpus.bases().items():
        for N in range(3):
            ga = ga_build(b, N)
            for aname, A in corpus.algebras(b.p).items():
                for name in corpus.SCHEMES:
                    r = rat_pts_bijection(corpus.scheme(name, ga), A)
                    c.record(r.bijective, f"{bname} N={N} A={aname} {name}: {r.transform_points} vs {r.ring_points}")
    return [c]


def _explicit_ideal():
    c = Check(6, "y^2 - pi x over F_3[[t]] at level 1 gives (y0^2, x0 - 2 y0 y1)")
    F3 = corpus.field("F3")
    ga = ga_build(BaseRingSpec("equal", F3), 1)
    T = gr_transform(presentation(ga, ["x", "y"], ["y^2 - pi*x"])).result
    expected = presentation(F3, T.vars, ["y0^2", "x0 - 2*y0*y1"]).gens
    got = T.gens
    ok = T.vars == ("x0", "x1", "y0", "y1") and len(got) == 2
    ok = ok and got[0] == expected[0] and got[1] in (expected[1], -expected[1])
    c.record(ok, f"transform gives {T.gens_text()}")
    E = ext_build_equal(F3, 0, 2)
    R = res_affine(presentation(E.top, ["x", "y"], ["y^2 - pi*x"]), E)
    c.record(R.vars == T.vars and R.gens == T.gens, f"restriction gives {R.gens_text()}")
    return [c]


# -- criterion 7 ----------------------------------------------------------------------


def _cartesian_maps(ga):
    src = presentation(ga, ["x", "t"], ["x*t - 1"])
    Z = corpus.scheme("x*y-pi", ga)
    maps = {
        "open immersion": morphism(src, corpus.scheme("A1", ga), {"x": "x"}),
        "identity": morphism(Z, Z, {"x": "x", "y": "y"}),
    }
    if ga.base.p != 2:
        s = presentation(ga, *corpus.ETALE["source"])
        t = presentation(ga, *corpus.ETALE["target"])
        maps["square root"] = morphism(s, t, corpus.ETALE["images"])
    return maps


def _levels():
    lands = Check(7, "truncation sends Gr_N(Z)(A) into Gr_M(Z_M)(A)")
    lift = Check(7, "smooth schemes lift through every level step")
    witness = Check(7, "x y - pi over W(F_2) does not lift from level 0 to 1")
    cart = Check(7, "etale maps give cartesian level squares")
    for bname, b in corpus.bases().items():
        ga = ga_build(b, 2)
        algebras = corpus.algebras(b.p)
        for name in corpus.SCHEMES:
            Z = corpus.scheme(name, ga)
            high = gr_transform(Z)
            for aname, A in algebras.items():
                up = points(high, A)
                for M in range(2):
                    low = gr_transform(scheme_reduce_level(Z, M))
                    ok = set(truncate_points(up, high, low)) <= set(points(low, A))
                    lands.record(ok, f"{bname} {name} A={aname} 2->{M}")
                if corpus.is_smooth(name, b.p):
                    for m, i in LEVEL_STEPS:
                        r = check_surjective_lift(Z, m, i, A)
                        lift.record(r.surjective, f"{bname} {name} A={aname} m={m} i={i}: {r.non_lifting[:3]}")
        for label, f in _cartesian_maps(ga).items():
            for aname, A in algebras.items():
                for m, i in LEVEL_STEPS:
                    r = check_cartesian_etale(f, m, i, A)
                    cart.record(r.bijective, f"{bname} {label} A={aname} m={m} i={i}")
    F2 = corpus.field("F2")
    Z = corpus.scheme("x*y-pi", ga_build(BaseRingSpec("mixed", F2), 1))
    r = check_surjective_lift(Z, 0, 1, alg_build("field", F2))
    witness.record(r.non_lifting == [(0, 0)], f"non-lifting points {r.non_lifting}")
    return [lands, lift, witness, cart]


# -- criterion 8 ----------------------------------------------------------------------


def _groups():
    units = Check(8, "|Gr_n(G_m)(F_q)| = (q-1) q^n")
    kernels = Check(8, "kernel of Gr_(m+i)(G)(A) -> Gr_m(G_m)(A) has |A|^(i d) points")
    growth = Check(8, "|Gr_n(G)(F_q)| = |G_0(F_q)| q^(n d)")
    fields = {2: ("F2", "F4"), 3: ("F3",)}
    for bname, b in corpus.bases().items():
        algebras = corpus.algebras(b.p)
        for n in range(3):
            ga = ga_build(b, n)
            for aname in fields[b.p]:
                q = algebras[aname].size
                c = len(points(gr_transform(corpus.scheme("Gm", ga)), algebras[aname]))
                units.record(c == (q - 1) * q**n, f"{bname} n={n} {aname}: {c}")
        for gname in corpus.GROUPS:
            d = corpus.group_dim(gname)
            G = corpus.group(gname, ga_build(b, 2))
            for aname, A in algebras.items():
                for m, i in LEVEL_STEPS:
                    c = ker_change_level_count(G, m, i, A)
                    kernels.record(c == A.size ** (i * d), f"{bname} {gname} A={aname} m={m} i={i}: {c}")
            for aname in fields[b.p]:
                A = algebras[aname]
                special = len(points(gr_transform(corpus.group(gname, ga_build(b, 0)).presentation), A))
                for n in range(3):
                    c = len(points(gr_transform(corpus.group(gname, ga_build(b, n)).presentation), A))
                    growth.record(c == special * A.size ** (n * d), f"{bname} {gname} n={n} {aname}: {c}")
    return [units, kernels, growth]


# -- criterion 9 ----------------------------------------------------------------------


def _bijection_extensions():
    F2, F3, F4, F9 = (corpus.field(n) for n in ("F2", "F3", "F4", "F9"))
    two = corpus.wr_algebras()
    three = {"F3": alg_build("field", F3)}
    return {
        "F4/F2": (ext_build_field(F2, F4), two),
        "F9/F3": (ext_build_field(F3, F9), three),
        "F2[t]/t^2 over F2": (ext_build_equal(F2, 0, 2), two),
        "F2[t]/t^3 over F2": (ext_build_equal(F2, 0, 3), two),
        "F2[t]/t^4 over F2[t]/t^2": (ext_build_equal(F2, 1, 2), two),
        "Z2[pi]/(pi^2-2) n=1": (ext_build_mixed(2, F2, (0, -2), 1), two),
        "W(F4) n=2": (ext_build_mixed(2, F4, (), 2), two),
        "W(F4)[pi]/(pi^2-2) n=1": (ext_build_mixed(2, F4, (0, -2), 1), two),
        "Z3[pi]/(pi^2-3) n=1": (ext_build_mixed(3, F3, (0, -3), 1), three),
    }


def _weil():
    tables = Check(9, "extension tables are commutative, associative and unital")
    bij = Check(9, "Res(Z)(A) = Z(A (x) top) through the explicit map")
    wrgr = Check(9, "|Res(Gr'(Z))(A)| = |Gr(Res Z)(A)|")
    totgr = Check(9, "totally ramified: |Gr_(n-1)(Res Z)(A)| = |Gr'_(ne-1)(Z)(A)|")
    bc = Check(9, "unramified base change counts agree")
    for ename, (E, algebras) in _bijection_extensions().items():
        bad = E.check_table()
        tables.record(not bad, f"{ename}: {bad[:2]}")
        for name in ("A1", "Gm", "x^2-1", "x^2+x+1"):
            vars, gens = corpus.SCHEMES[name]
            Z = presentation(E.top, vars, gens)
            for aname, A in algebras.items():
                r = res_point_bijection(Z, E, A)
                bij.record(r.bijective, f"{ename} {name} A={aname}: {r.base_points} vs {r.top_points}")
    for ename, (p, kp, f, n) in corpus.WR_EXTENSIONS.items():
        E = ext_build_mixed(p, corpus.field(kp), f, n)
        for name, (vars, gens) in corpus.WR_SCHEMES.items():
            Z = presentation(E.top, vars, gens)
            for cell in wr_gr_check(Z, E, corpus.wr_algebras(), name):
                wrgr.record(cell.equal, f"{ename} {name} A={cell.algebra}: {cell.lhs} vs {cell.rhs} {cell.witness}")
    for ename in corpus.TOTALLY_RAMIFIED:
        p, kp, f, n = corpus.WR_EXTENSIONS[ename]
        E = ext_build_mixed(p, corpus.field(kp), f, n)
        for name in corpus.SCHEMES:
            Z = corpus.scheme(name, E.top)
            for aname, A in corpus.wr_algebras().items():
                lhs = solve_over_k(gr_transform(Z).result, A)[0]
                rhs = solve_over_k(gr_transform(res_affine(Z, E)).result, A)[0]
                totgr.record(lhs == rhs, f"{ename} {name} A={aname}: {lhs} vs {rhs}")
    F2, F4 = corpus.field("F2"), corpus.field("F4")
    for N in range(3):
        ga = ga_build(BaseRingSpec("mixed", F2), N)
        for name in ("A1", "Gm", "x^2-1", "x^2+x+1", "x*y-pi"):
            Z = corpus.scheme(name, ga)
            for aname, A in corpus.wr_algebras().items():
                lhs, rhs = unramified_base_change_counts(Z, F4, A)
                bc.record(lhs == rhs, f"W(F2) N={N} {name} A={aname}: {lhs} vs {rhs}")
    return [tables, bij, wrgr, totgr, bc]


# -- runner ----------------------------------------------------------------------------------------------

SUITES = {
    "witt": (_witt_ghost, _witt_integers, _witt_verschiebung),
    "algebra": (_algebra_axioms, _algebra_oracle, _algebra_truncation),
    "ratpts": (_ratpts, _explicit_ideal),
    "levels": (_levels,),
    "groups": (_groups,),
    "weil": (_weil,),
}


def run_suite(name, log=lambda label, seconds: None):
    """Report for one suite (or ``all``); ``log(label, seconds)`` receives timings."""
    if name == "all":
        reports = [run_suite(s, log) for s in SUITES]
        return {"suite": "all", "suites": reports, "passed": all(r["passed"] for r in reports)}
    checks = []
    for fn in SUITES[name]:
        start = time.perf_counter()
        checks.extend(fn())
        log(f"{name}:{fn.__name__.lstrip('_')}", time.perf_counter() - start)
    records = [c.as_record() for c in checks]
    return {"suite": name, "checks": records, "passed": all(r["passed"] for r in records)}


def criterion_results(report):
    """``{criterion: passed}`` from a report of ``run_suite``."""
    out = {}
    reports = report["suites"] if report["suite"] == "all" else [report]
    for r in reports:
        for c in r["checks"]:
            out[c["criterion"]] = out.get(c["criterion"], True) and c["passed"]
    return out
