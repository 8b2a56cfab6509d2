"""Affine schemes of finite type given by explicit presentations, and their points."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import GreenbergAlgebra, ga_build, ga_const, ga_points
from .errors import CarrierMismatch, IdentityNotOnScheme, LevelMismatch, MissingVariable, RingMismatch
from .fields import ZZ, FiniteField, alg_build
from .kernels import DEFAULT_CANDIDATE_GUARD, count_zeros
from .poly import Poly, parse_poly


@dataclass(frozen=True)
class AffinePresentation:
    """``Spec ring[vars]/(gens)``; ``ring`` is a coefficient domain."""

    ring: object
    vars: tuple
    gens: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise RingMismatch(f"duplicate variables in {self.vars}")
        gens = []
        for g in self.gens:
            if g.domain != self.ring:
                raise RingMismatch(f"generator over {g.domain!r}, presentation over {self.ring!r}")
            stray = [v for v in g.support() if v not in self.vars]
            if stray:
                raise MissingVariable(f"generator mentions undeclared variables {stray}")
            gens.append(g.with_vars(self.vars))
        object.__setattr__(self, "gens", tuple(gens))

    @property
    def level(self):
        return self.ring.level if isinstance(self.ring, GreenbergAlgebra) else None

    def gens_text(self):
        return [g.to_text() for g in self.gens]


@dataclass(frozen=True)
class MorphismPresentation:
    """``source -> target`` given by target-variable images in the source variables."""

    source: AffinePresentation
    target: AffinePresentation
    images: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.source.ring != self.target.ring:
            raise RingMismatch("source and target live over different rings")
        missing = [v for v in self.target.vars if v not in self.images]
        if missing:
            raise MissingVariable(f"no image for target variables {missing}")
        images = {}
        for v in self.target.vars:
            f = self.images[v]
            if isinstance(f, int):
                f = Poly.constant(self.source.ring.from_int(f), self.source.ring, self.source.vars)
            images[v] = f.with_vars(self.source.vars)
        object.__setattr__(self, "images", images)


@dataclass(frozen=True)
class GroupSchemeSpec:
    """A group scheme: presentation, identity point (coordinates in the ring), optional law."""

    presentation: AffinePresentation
    identity: tuple
    law: MorphismPresentation | None = None

    def __post_init__(self):
        pres = self.presentation
        ring = pres.ring
        ident = tuple(ring.from_int(c) if isinstance(c, int) else tuple(c) if isinstance(c, list) else c for c in self.identity)
        if len(ident) != len(pres.vars):
            raise IdentityNotOnScheme("identity has the wrong number of coordinates")
        object.__setattr__(self, "identity", ident)
        ops = _ring_ops(ring)
        env = dict(zip(pres.vars, ident))
        for g in pres.gens:
            if not ring.is_zero(g.evaluate(env, ops)):
                raise IdentityNotOnScheme(f"identity does not satisfy {g.to_text()}")

    @property
    def lie_dim(self):
        return group_lie_dim(self)


def _ring_ops(ring):
    """Ops object whose carrier is ``ring``'s own elements."""
    if isinstance(ring, GreenbergAlgebra):
        return ring._kops
    return alg_build("field", ring).ring


# ---------------------------------------------------------------------------
# construction helpers


def poly_over(ring, text, vars=(), pi="pi"):
    """Parse ``text`` with integer coefficients; ``pi`` names the uniformiser.

    Over a :class:`GreenbergAlgebra` each ``c * pi^j`` becomes the constant
    ``ga_const``; over a field the name ``pi`` is not allowed.
    """
    if not isinstance(ring, GreenbergAlgebra):
        return parse_poly(text, ring, vars)
    f = parse_poly(text, ZZ, tuple(vars) + (pi,))
    vars = tuple(v for v in f.vars if v != pi)
    out = {}
    for exps, c in f.items():
        j = 0
        key = []
        for v, e in zip(f.vars, exps):
            if v == pi:
                j = e
            else:
                key.append(e)
        const = ga_const([0] * j + [c], ring) if j <= ring.level else ring.zero
        key = tuple(key)
        out[key] = ring.add(out[key], const) if key in out else const
    return Poly.from_dict(ring, vars, {k: v for k, v in out.items() if not ring.is_zero(v)})


def presentation(ring, vars, gens=()):
    """``AffinePresentation`` from generator strings (see :func:`poly_over`)."""
    vars = tuple(vars)
    return AffinePresentation(ring, vars, tuple(poly_over(ring, g, vars) for g in gens))


def morphism(source, target, images):
    return MorphismPresentation(
        source,
        target,
        {v: poly_over(source.ring, t, source.vars) if isinstance(t, str) else t for v, t in images.items()},
    )


# ---------------------------------------------------------------------------
# operations


def _map_coeffs(g, ring, fn):
    data = {}
    for exps, c in g.items():
        v = fn(c)
        if not ring.is_zero(v):
            data[exps] = v
    return Poly.from_dict(ring, g.vars, data)


def scheme_product(X, Y):
    """``X x Y``; variables are prefixed with ``a_``/``b_`` only when names clash."""
    if X.ring != Y.ring:
        raise RingMismatch("product of schemes over different rings")
    if set(X.vars) & set(Y.vars):
        X = rename(X, {v: f"a_{v}" for v in X.vars})
        Y = rename(Y, {v: f"b_{v}" for v in Y.vars})
    vars = X.vars + Y.vars
    return AffinePresentation(X.ring, vars, tuple(g.with_vars(vars) for g in X.gens + Y.gens))


def rename(Z, mapping):
    vars = tuple(mapping.get(v, v) for v in Z.vars)
    return AffinePresentation(Z.ring, vars, tuple(g.rename(mapping) for g in Z.gens))


def scheme_reduce_level(Z, M):
    """Coefficients truncated from ``R_N`` to ``R_M``."""
    ga = Z.ring
    if not isinstance(ga, GreenbergAlgebra):
        raise LevelMismatch("only presentations over a Greenberg algebra have a level")
    if M > ga.level or M < 0:
        raise LevelMismatch(f"cannot reduce level {ga.level} to {M}")
    if M == ga.level:
        return Z
    low = ga_build(ga.base, M)
    return AffinePresentation(low, Z.vars, tuple(_map_coeffs(g, low, lambda c: tuple(c[: M + 1])) for g in Z.gens))


def special_fiber(Z):
    """The presentation over ``k`` obtained by reducing coefficients to level 0."""
    ga = Z.ring
    if not isinstance(ga, GreenbergAlgebra):
        return Z
    return AffinePresentation(ga.k, Z.vars, tuple(_map_coeffs(g, ga.k, lambda c: c[0]) for g in Z.gens))


def solve_over_k(Z, A, collect=False, guard=DEFAULT_CANDIDATE_GUARD):
    """``Z(A)`` for ``Z`` over ``k`` and a finite ``k``-algebra ``A``.

    Returns ``(count, solutions)``; solutions are tuples of ``A``-indices.
    """
    if isinstance(Z.ring, GreenbergAlgebra):
        raise RingMismatch("use solve_over_ga for presentations over R_N")
    k = Z.ring
    if isinstance(k, FiniteField) and (A.base.p != k.p or A.base.d % k.d):
        raise CarrierMismatch(f"{A!r} is not an algebra over {Z.ring!r}")
    return count_zeros(list(Z.gens), list(Z.vars), A.ring, collect=collect, guard=guard)


def solve_over_ga(Z, A, collect=False, guard=DEFAULT_CANDIDATE_GUARD):
    """``Z(R_N(A))``; solutions are tuples of packed ``R_N(A)`` indices."""
    pts = ga_points(Z.ring, A)
    return count_zeros(list(Z.gens), list(Z.vars), pts.ring, collect=collect, guard=guard)


def group_lie_dim(G):
    """``#vars - rank`` of the Jacobian of the special fibre at the identity."""
    pres = special_fiber(G.presentation)
    k = pres.ring
    ident = [c[0] if isinstance(c, tuple) else c for c in G.identity]
    env = dict(zip(pres.vars, ident))
    ops = alg_build("field", k).ring
    rows = []
    for g in pres.gens:
        rows.append([g.diff(v).evaluate(env, ops) if v in g.vars else 0 for v in pres.vars])
    return len(pres.vars) - matrix_rank(rows, k)


def matrix_rank(rows, k):
    """Rank over the finite field ``k`` by Gaussian elimination."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = k.inv(rows[rank][col])
        rows[rank] = [k.mul(inv, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [k.add(x, k.neg(k.mul(f, y))) for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def evaluate_morphism(f, point, ops):
    """Image of a source point (tuple in ``ops``' carrier) under ``f``."""
    env = dict(zip(f.source.vars, point))
    return tuple(f.images[v].evaluate(env, ops) for v in f.target.vars)
