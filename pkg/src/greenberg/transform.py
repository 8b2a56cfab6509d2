"""The Greenberg transform of affine presentations, change of level, and point-level checks.

``Gr_N(Z)`` is computed by substituting, for every variable ``x`` of ``Z``,
the symbolic point ``(x0, ..., xN)`` of ``R_N(k[x0, ..., xN, ...])`` and
reading off the ``N+1`` coordinates of each generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import GAOps, GreenbergAlgebra, ga_points
from .errors import LevelMismatch, RingMismatch
from .kernels import DEFAULT_CANDIDATE_GUARD, CompiledPolys, count_zeros, eval_columns
from .poly import Poly, PolyOps
from .schemes import AffinePresentation, MorphismPresentation, scheme_reduce_level, solve_over_ga, solve_over_k


def coord_name(v, l):
    return f"{v}_{l}" if v[-1:].isdigit() else f"{v}{l}"


@dataclass(frozen=True)
class TransformResult:
    source: AffinePresentation
    result: AffinePresentation
    var_map: dict
    level: int


def _require_ga(Z):
    if not isinstance(Z.ring, GreenbergAlgebra):
        raise RingMismatch("the Greenberg transform needs a presentation over R_N")
    return Z.ring


def expand(polys, ga, var_map, out_vars):
    """Coordinates of each polynomial evaluated at the generic point."""
    carrier = PolyOps(ga.k, out_vars)
    ops = GAOps(ga, carrier)
    env = {v: tuple(carrier.var(n) for n in names) for v, names in var_map.items()}
    return [f.evaluate(env, ops) for f in polys]


def gr_transform(Z):
    """``Gr_N(Z)`` as a presentation over ``k`` with ``(N+1) * #vars`` variables."""
    ga = _require_ga(Z)
    var_map = {v: [coord_name(v, l) for l in range(ga.width)] for v in Z.vars}
    out_vars = tuple(n for v in Z.vars for n in var_map[v])
    gens = []
    for coords in expand(Z.gens, ga, var_map, out_vars):
        gens.extend(c.with_vars(out_vars) for c in coords)
    result = AffinePresentation(ga.k, out_vars, tuple(gens))
    return TransformResult(Z, result, var_map, ga.level)


def gr_transform_morphism(f, source=None, target=None):
    """``Gr_N(f)``: each target coordinate variable maps to a coordinate of its image."""
    ga = _require_ga(f.source)
    source = source or gr_transform(f.source)
    target = target or gr_transform(f.target)
    if source.level != ga.level or target.level != ga.level:
        raise LevelMismatch("transforms at different levels")
    images = {}
    values = expand([f.images[v] for v in f.target.vars], ga, source.var_map, source.result.vars)
    for v, coords in zip(f.target.vars, values):
        for name, c in zip(target.var_map[v], coords):
            images[name] = c
    return MorphismPresentation(source.result, target.result, images)


def change_level(Z, M):
    """The truncation morphism ``Gr_N(Z) -> Gr_M(Z_M)`` (same-named coordinates)."""
    ga = _require_ga(Z)
    if M > ga.level or M < 0:
        raise LevelMismatch(f"cannot change level {ga.level} to {M}")
    high = gr_transform(Z)
    low = gr_transform(scheme_reduce_level(Z, M))
    images = {n: Poly.variable(n, ga.k, high.result.vars) for n in low.result.vars}
    return MorphismPresentation(high.result, low.result, images)


# ---------------------------------------------------------------------------
# point-level checks


def points(T, A, guard=DEFAULT_CANDIDATE_GUARD):
    """Sorted ``A``-points of a transform result."""
    return solve_over_k(T.result, A, collect=True, guard=guard)[1]


def truncate_points(pts, high, low):
    """Restrict points of ``high`` to the coordinates present in ``low``."""
    index = {n: i for i, n in enumerate(high.result.vars)}
    cols = [index[n] for n in low.result.vars]
    return [tuple(p[c] for c in cols) for p in pts]


def map_points(f, pts, ring):
    """Apply a morphism over ``k`` to ``A``-points (vectorised)."""
    if not pts:
        return []
    compiled = CompiledPolys([f.images[v] for v in f.target.vars], list(f.source.vars), ring)
    cols = np.array(pts, dtype=np.int32).T
    out = eval_columns(compiled, cols)
    return [tuple(int(x) for x in row) for row in out.T]


@dataclass
class LiftReport:
    level: int
    step: int
    lower_points: int
    upper_points: int
    lifted: int
    non_lifting: list

    @property
    def surjective(self):
        return not self.non_lifting


def check_surjective_lift(Z, m, i, A, guard=DEFAULT_CANDIDATE_GUARD):
    """Does every ``A``-point of ``Gr_m(Z_m)`` lift to ``Gr_(m+i)(Z_(m+i))``?"""
    ga = _require_ga(Z)
    if m + i > ga.level:
        raise LevelMismatch(f"level {m + i} exceeds presentation level {ga.level}")
    Zh = scheme_reduce_level(Z, m + i)
    high, low = gr_transform(Zh), gr_transform(scheme_reduce_level(Z, m))
    up = points(high, A, guard)
    down = points(low, A, guard)
    image = set(truncate_points(up, high, low))
    missing = [p for p in down if p not in image]
    return LiftReport(m, i, len(down), len(up), len(down) - len(missing), missing)


@dataclass
class CartesianReport:
    source_points: int
    fiber_product_points: int
    injective: bool
    surjective: bool
    witnesses: list

    @property
    def bijective(self):
        return self.injective and self.surjective


def check_cartesian_etale(f, m, i, A, guard=DEFAULT_CANDIDATE_GUARD):
    """``Gr_(m+i)(Z)(A) -> Gr_m(Z_m)(A) x_(Gr_m(Z'_m)(A)) Gr_(m+i)(Z')(A)`` is bijective?"""
    ga = _require_ga(f.source)
    n = m + i
    if n > ga.level:
        raise LevelMismatch(f"level {n} exceeds presentation level {ga.level}")
    f_hi = reduce_morphism(f, n)
    f_lo = reduce_morphism(f, m)
    src_hi, tgt_hi = gr_transform(f_hi.source), gr_transform(f_hi.target)
    src_lo, tgt_lo = gr_transform(f_lo.source), gr_transform(f_lo.target)
    g_hi = gr_transform_morphism(f_hi, src_hi, tgt_hi)
    g_lo = gr_transform_morphism(f_lo, src_lo, tgt_lo)
    ring = A.ring
    P = points(src_hi, A, guard)
    Q = points(src_lo, A, guard)
    Qp = points(tgt_hi, A, guard)
    fq = dict(zip(Q, map_points(g_lo, Q, ring)))
    trunc_qp = truncate_points(Qp, tgt_hi, tgt_lo)
    by_image = {}
    for q, img in fq.items():
        by_image.setdefault(img, []).append(q)
    fiber = set()
    for qp, t in zip(Qp, trunc_qp):
        for q in by_image.get(t, []):
            fiber.add((q, qp))
    images = list(zip(truncate_points(P, src_hi, src_lo), map_points(g_hi, P, ring)))
    seen = {}
    witnesses = []
    for p, img in zip(P, images):
        if img in seen:
            witnesses.append(("collision", seen[img], p))
        seen[img] = p
    missing = fiber - set(images)
    witnesses.extend(("missing", w) for w in sorted(missing)[:5])
    injective = len(seen) == len(P)
    return CartesianReport(len(P), len(fiber), injective, not missing, witnesses[:10])


def reduce_morphism(f, M):
    src = scheme_reduce_level(f.source, M)
    tgt = scheme_reduce_level(f.target, M)
    low = src.ring
    images = {}
    for v, g in f.images.items():
        data = {}
        for exps, c in g.items():
            c = tuple(c[: M + 1])
            if not low.is_zero(c):
                data[exps] = c
        images[v] = Poly.from_dict(low, g.vars, data)
    return MorphismPresentation(src, tgt, images)


def ker_change_level_count(G, m, i, A, guard=DEFAULT_CANDIDATE_GUARD):
    """``|ker(Gr_(m+i)(G)(A) -> Gr_m(G_m)(A))|`` by counting the identity fibre."""
    pres = G.presentation
    ga = _require_ga(pres)
    n = m + i
    if n > ga.level:
        raise LevelMismatch(f"level {n} exceeds presentation level {ga.level}")
    T = gr_transform(scheme_reduce_level(pres, n))
    ring = A.ring
    domains = []
    ident = dict(zip(pres.vars, G.identity))
    for v in pres.vars:
        coords = ident[v]
        for l in range(n + 1):
            if l <= m:
                domains.append([ring.coeff(coords[l], ga.k) if coords[l] else 0])
            else:
                domains.append(None)
    return count_zeros(list(T.result.gens), list(T.result.vars), ring, domains=domains, guard=guard)[0]


@dataclass
class RatPtsReport:
    transform_points: int
    ring_points: int
    injective: bool
    onto: bool

    @property
    def bijective(self):
        return self.injective and self.onto and self.transform_points == self.ring_points


def rat_pts_bijection(Z, A, guard=DEFAULT_CANDIDATE_GUARD):
    """Compare ``Gr_N(Z)(A)`` with ``Z(R_N(A))`` through coordinate packing."""
    ga = _require_ga(Z)
    w = ga.width
    sols = points(gr_transform(Z), A, guard)
    pts = ga_points(ga, A)
    ring_sols = solve_over_ga(Z, A, collect=True, guard=guard)[1]
    image = {tuple(pts.encode(s[j * w : (j + 1) * w]) for j in range(len(Z.vars))) for s in sols}
    return RatPtsReport(len(sols), len(ring_sols), len(image) == len(sols), image == set(ring_sols))
