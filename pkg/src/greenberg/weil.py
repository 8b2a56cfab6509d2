"""Weil restriction along finite free ring extensions with an explicit basis.

Three kinds of extension are built:

* ``k'/k`` for finite fields (power basis);
* ``R'_(ne-1) / R_(n-1)`` with ``R = W(F_p)`` and ``R' = W(k')[pi]/(f)``,
  ``f`` Eisenstein of degree ``e`` (basis ``[u^a] pi^b``);
* ``R'_N / R_M`` in equal characteristic with ``N+1 = (M+1) e`` (basis ``pi'^b``).

Base and top rings are coefficient domains: a :class:`FiniteField` or a
:class:`GreenbergAlgebra` (``Z/p^n`` appears as ``R_(n-1)`` of ``W(F_p)``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import BaseRingSpec, GreenbergAlgebra, ga_build, ga_points
from .errors import (
    CoefficientNotInBasisSpan,
    DecompositionFailure,
    NotAnExtension,
    NotPrimeFieldBase,
    PatternMismatch,
)
from .fields import FiniteField, alg_extend_scalars, extension_algebra
from .poly import Poly, PolyOps
from .schemes import AffinePresentation, solve_over_ga, solve_over_k
from .transform import coord_name, gr_transform


@dataclass
class ExtensionData:
    """A free extension ``top / base`` of rank ``t`` with basis ``basis``.

    ``table[a][b]`` holds the base coordinates of ``basis[a] * basis[b]``;
    ``decompose`` maps a top element to its base coordinates and ``embed``
    maps a base element into the top ring.
    """

    kind: str
    base: object
    top: object
    basis: tuple
    labels: tuple
    table: tuple
    decompose: object
    embed: object
    gamma: int
    residue_top: FiniteField | None = None

    @property
    def rank(self):
        return len(self.basis)

    def unit_coords(self):
        return self.decompose(self.top.one if isinstance(self.top, GreenbergAlgebra) else 1)

    def check_table(self):
        """Commutativity, associativity and unit of the table; returns failures."""
        B = self.base
        t = self.rank
        failures = []

        def mul(x, y):
            out = [B.zero] * t
            for a, b in itertools.product(range(t), repeat=2):
                s = B.mul(x[a], y[b])
                if B.is_zero(s):
                    continue
                for c in range(t):
                    out[c] = B.add(out[c], B.mul(s, self.table[a][b][c]))
            return tuple(out)

        unit = tuple(self.unit_coords())
        basis = [tuple(B.one if c == a else B.zero for c in range(t)) for a in range(t)]
        for a in range(t):
            if mul(unit, basis[a]) != basis[a]:
                failures.append(f"unit fails on {self.labels[a]}")
            for b in range(t):
                if self.table[a][b] != self.table[b][a]:
                    failures.append(f"not commutative on {self.labels[a]},{self.labels[b]}")
                for c in range(t):
                    if mul(mul(basis[a], basis[b]), basis[c]) != mul(basis[a], mul(basis[b], basis[c])):
                        failures.append(f"not associative on {a},{b},{c}")
        return failures


@dataclass(frozen=True)
class GammaReport:
    extension: ExtensionData
    gamma: int


def gamma_report(ext):
    return GammaReport(ext, ext.gamma)


# ---------------------------------------------------------------------------
# builders


def ext_build_field(k, kp):
    """``k'/k`` with the power basis of a generator."""
    if kp.p != k.p or kp.d % k.d or k.embedding_into(kp) is None:
        raise NotAnExtension(f"{kp!r} is not an extension of {k!r}")
    alg = extension_algebra(k, kp)
    span = {v: alg.decode(i) for i, v in enumerate(alg.to_field)}
    emb = k.embedding_into(kp)
    labels = tuple(["1"] + [f"u^{a}" for a in range(1, alg.dim)])
    return ExtensionData(
        kind="field",
        base=k,
        top=kp,
        basis=alg.basis,
        labels=labels,
        table=alg.table,
        decompose=lambda x: span[x],
        embed=lambda c: emb[c],
        gamma=alg.dim,
        residue_top=kp,
    )


def ext_build_mixed(p, residue_top, eisenstein, n):
    """``R'_(ne-1)`` over ``R_(n-1) = W_n(F_p) = Z/p^n`` for ``R' = W(k')[pi]/(f)``."""
    if residue_top.p != p:
        raise NotPrimeFieldBase(f"top residue field {residue_top!r} has characteristic {residue_top.p}, not {p}")
    if n < 1:
        raise PatternMismatch("n must be >= 1")
    Fp = FiniteField(p)
    base_spec = BaseRingSpec("mixed", Fp)
    top_spec = BaseRingSpec("mixed", residue_top, eisenstein)
    e = top_spec.rho
    base = ga_build(base_spec, n - 1)
    top = ga_build(top_spec, n * e - 1)
    # [u^a] pi^b is the point with u^a in coordinate b (valuation b < e)
    fdeg = residue_top.d
    gen = residue_top.gen() if fdeg > 1 else 1
    basis, labels = [], []
    for b in range(e):
        for a in range(fdeg):
            coords = [0] * top.width
            if b < top.width:
                coords[b] = residue_top.pow(gen, a)
            basis.append(tuple(coords))
            labels.append(("[u^%d]" % a if fdeg > 1 else "") + (f"pi^{b}" if b else ("" if fdeg > 1 else "1")))
    t = len(basis)
    q = p**n
    ints = [base.from_int(c) for c in range(q)]
    top_ints = [top.from_int(c) for c in range(q)]
    scaled = [[top.mul(top_ints[c], b) for c in range(q)] for b in basis]
    span = {}
    for coeffs in itertools.product(range(q), repeat=t):
        v = top.zero
        for a, c in enumerate(coeffs):
            if c:
                v = top.add(v, scaled[a][c])
        if v in span:
            raise DecompositionFailure(f"{v} has two coordinate vectors; basis is not free over Z/{q}")
        span[v] = tuple(ints[c] for c in coeffs)
    if len(span) != top.k.q**top.width:
        raise DecompositionFailure(f"basis spans {len(span)} of {top.k.q ** top.width} elements")
    table = tuple(tuple(span[top.mul(x, y)] for y in basis) for x in basis)
    index = {v: c for c, v in enumerate(ints)}

    def decompose(x):
        try:
            return span[tuple(x)]
        except KeyError:
            raise CoefficientNotInBasisSpan(f"{x} is not an element of {top!r}") from None

    return ExtensionData(
        kind="mixed",
        base=base,
        top=top,
        basis=tuple(basis),
        labels=tuple(labels),
        table=table,
        decompose=decompose,
        embed=lambda c: top_ints[index[tuple(c)]],
        gamma=fdeg,
        residue_top=residue_top,
    )


def ext_build_equal(k, M, e):
    """``R'_N / R_M`` in equal characteristic, ``N + 1 = (M+1) e``, basis ``pi'^b``.

    ``M = 0`` gives ``R_(e-1) / k``; the base is then ``k`` itself.
    """
    if e < 1 or M < 0:
        raise PatternMismatch(f"need e >= 1 and M >= 0, got e={e}, M={M}")
    N = (M + 1) * e - 1
    top = ga_build(BaseRingSpec("equal", k), N)
    if M == 0:
        base = k

        def to_base(coords):
            return coords[0]

        def from_base(c):
            return (c,)

    else:
        base = ga_build(BaseRingSpec("equal", k), M)

        def to_base(coords):
            return tuple(coords)

        def from_base(c):
            return tuple(c)

    basis = tuple(tuple(1 if l == b else 0 for l in range(N + 1)) for b in range(e))
    labels = tuple("1" if b == 0 else f"pi^{b}" for b in range(e))

    def decompose(x):
        x = tuple(x)
        if len(x) != N + 1:
            raise CoefficientNotInBasisSpan(f"{x} is not an element of {top!r}")
        return tuple(to_base(tuple(x[e * s + b] for s in range(M + 1))) for b in range(e))

    def embed(c):
        c = from_base(c)
        out = [0] * (N + 1)
        for s in range(M + 1):
            out[e * s] = c[s]
        return tuple(out)

    table = tuple(tuple(decompose(top.mul(x, y)) for y in basis) for x in basis)
    return ExtensionData(
        kind="equal",
        base=base,
        top=top,
        basis=basis,
        labels=labels,
        table=table,
        decompose=decompose,
        embed=embed,
        gamma=1,
        residue_top=k,
    )


# ---------------------------------------------------------------------------
# restriction


class ExtOps:
    """Top-ring arithmetic on ``t``-tuples over a base-ring carrier."""

    def __init__(self, ext, carrier):
        self.ext = ext
        self.carrier = carrier
        base = ext.base
        self.t = ext.rank
        self.zero = tuple(carrier.zero for _ in range(self.t))
        self.one = tuple(carrier.coeff(c, base) for c in ext.unit_coords())

    def add(self, a, b):
        return tuple(self.carrier.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.carrier.neg(x) for x in a)

    def mul(self, a, b):
        C = self.carrier
        base = self.ext.base
        out = list(self.zero)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                s = C.mul(x, y)
                row = self.ext.table[i][j]
                for c in range(self.t):
                    if not base.is_zero(row[c]):
                        out[c] = C.add(out[c], C.mul(C.coeff(row[c], base), s))
        return tuple(out)

    def coeff(self, c, domain):
        ext = self.ext
        if domain == ext.top:
            return tuple(self.carrier.coeff(x, ext.base) for x in ext.decompose(c))
        if domain.mod == 0:
            top = ext.top
            value = top.from_int(c)
            return tuple(self.carrier.coeff(x, ext.base) for x in ext.decompose(value))
        raise CoefficientNotInBasisSpan(f"no image of {domain!r} in {ext.top!r}")


def res_affine(Z, ext):
    """``Res_(top/base)(Z)``: each top variable ``x`` becomes ``x0..x(t-1)``."""
    if Z.ring != ext.top:
        raise NotAnExtension(f"presentation over {Z.ring!r}, extension top {ext.top!r}")
    t = ext.rank
    var_map = {v: [coord_name(v, a) for a in range(t)] for v in Z.vars}
    out_vars = tuple(n for v in Z.vars for n in var_map[v])
    carrier = PolyOps(ext.base, out_vars)
    ops = ExtOps(ext, carrier)
    env = {v: tuple(carrier.var(n) for n in names) for v, names in var_map.items()}
    gens = []
    for g in Z.gens:
        gens.extend(c.with_vars(out_vars) for c in g.evaluate(env, ops))
    return AffinePresentation(ext.base, out_vars, tuple(gens))


def base_change_presentation(Z, ring, coeff_map):
    """The same generators over another ring, coefficients mapped by ``coeff_map``."""
    gens = []
    for g in Z.gens:
        data = {}
        for exps, c in g.items():
            v = coeff_map(c)
            if not ring.is_zero(v):
                data[exps] = v
        gens.append(Poly.from_dict(ring, g.vars, data))
    return AffinePresentation(ring, Z.vars, tuple(gens))


# ---------------------------------------------------------------------------
# the comparison Res(Gr) = Gr(Res)


@dataclass
class WrGrCell:
    scheme: str
    algebra: str
    lhs: int
    rhs: int
    witness: list | None = None

    @property
    def equal(self):
        return self.lhs == self.rhs

    def as_record(self):
        out = {"scheme": self.scheme, "algebra": self.algebra, "lhs": self.lhs, "rhs": self.rhs, "equal": self.equal}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def wr_gr_sides(Z, ext):
    """``(LHS, RHS)`` presentations over ``F_p`` for ``Z`` over ``R'_(ne-1)``.

    LHS = Res_(k'/F_p)(Gr'_(ne-1)(Z)); RHS = Gr_(n-1)(Res_(R'/R)(Z)).
    """
    if ext.kind == "mixed":
        k = ext.base.k
    elif ext.kind == "equal":
        k = ext.top.k
    else:
        raise NotAnExtension("wr_gr_check needs a ring extension")
    gr_top = gr_transform(Z).result
    kp = ext.top.k
    if kp.key != k.key:
        lhs = res_affine(gr_top, ext_build_field(k, kp))
    else:
        lhs = gr_top
    res = res_affine(Z, ext)
    rhs = gr_transform(res).result if isinstance(res.ring, GreenbergAlgebra) else res
    return lhs, rhs


def wr_gr_check(Z, ext, algebras, name="Z"):
    """Point counts of both sides over each test algebra (``name -> FiniteAlgebra``)."""
    lhs, rhs = wr_gr_sides(Z, ext)
    cells = []
    for aname, A in algebras.items():
        nl, nr = solve_over_k(lhs, A)[0], solve_over_k(rhs, A)[0]
        witness = None
        if nl != nr:
            # a few points of the larger side, as A-indices
            side = lhs if nl > nr else rhs
            witness = [list(p) for p in solve_over_k(side, A, collect=True)[1][:3]]
        cells.append(WrGrCell(name, aname, nl, nr, witness))
    return cells


@dataclass
class ResBijection:
    base_points: int
    top_points: int
    images_on_scheme: bool
    injective: bool

    @property
    def bijective(self):
        return self.images_on_scheme and self.injective and self.base_points == self.top_points


def _scalar_extension(A, field):
    """``(A (x)_k field, index map A -> A (x) field)``."""
    if field.key == A.base.key:
        return A, lambda i: i
    Ap = alg_extend_scalars(A, field)
    emb = A.base.embedding_into(field)
    return Ap, lambda i: Ap.encode(tuple(emb[c] for c in A.decode(i)))


def res_point_bijection(Z, ext, A, guard=None):
    """Send each ``A``-point of ``Res(Z)`` to ``x = sum_a x_a b_a`` and check it is a bijection.

    The targets are points of ``Z`` over ``A (x) k'`` (field case) or over
    ``R'(A (x) k')`` (ring cases); base ring elements enter the top ring as
    the ``pi^0`` component, the image of ``R -> R'``.
    """
    kw = {} if guard is None else {"guard": guard}
    res = res_affine(Z, ext)
    if ext.kind == "field":
        Ap, to_top = _scalar_extension(A, ext.top)
        top_ring = Ap.ring
        basis = [top_ring.coeff(b, ext.top) for b in ext.basis]

        def lift(x):
            return to_top(x)

        base_pts = solve_over_k(res, A, collect=True, **kw)[1]
        top_count, top_pts = solve_over_k(Z, Ap, collect=True, **kw)
    else:
        top = ext.top
        Ap, to_top = _scalar_extension(A, top.k)
        tp = ga_points(top, Ap)
        top_ring = tp.ring
        basis = [tp.encode(tuple(Ap.ring.coeff(c, top.k) for c in b)) for b in ext.basis]
        step = top.width // (ext.base.width if isinstance(ext.base, GreenbergAlgebra) else 1)
        if isinstance(ext.base, GreenbergAlgebra):
            bp = ga_points(ext.base, A)
            base_pts = solve_over_ga(res, A, collect=True, **kw)[1]

            def lift(x):
                coords = [0] * top.width
                for s, c in enumerate(bp.decode(x)):
                    coords[step * s] = to_top(c)
                return tp.encode(tuple(coords))

        else:
            base_pts = solve_over_k(res, A, collect=True, **kw)[1]

            def lift(x):
                return tp.encode((to_top(x),) + (0,) * (top.width - 1))

        top_count, top_pts = solve_over_ga(Z, Ap, collect=True, **kw)
    t = ext.rank
    top_set = set(top_pts)
    images = set()
    on_scheme = True
    for pt in base_pts:
        img = []
        for j in range(len(Z.vars)):
            acc = top_ring.zero
            for a in range(t):
                acc = top_ring.add(acc, top_ring.mul(lift(pt[j * t + a]), basis[a]))
            img.append(acc)
        img = tuple(img)
        on_scheme &= img in top_set
        images.add(img)
    return ResBijection(len(base_pts), top_count, on_scheme, len(images) == len(base_pts))


def unramified_base_change_counts(Z, residue_top, A):
    """``|Gr_N(Z)(A (x) k')|`` against ``|Gr'_N(Z x S')(A (x) k')|`` for ``R' = W(k')``.

    ``Z`` is over ``R_N`` with ``R = W(F_p)``; its coefficients are integers
    and so carry over unchanged.
    """
    ga = Z.ring
    top = ga_build(BaseRingSpec("mixed", residue_top), ga.level)
    emb = ga.k.embedding_into(residue_top)
    Zp = base_change_presentation(Z, top, lambda c: tuple(emb[x] for x in c))
    Ap = alg_extend_scalars(A, residue_top)
    lhs = solve_over_k(gr_transform(Z).result, Ap)[0]
    rhs = solve_over_k(gr_transform(Zp).result, Ap)[0]
    return lhs, rhs


__all__ = [
    "ExtensionData",
    "GammaReport",
    "base_change_presentation",
    "ext_build_equal",
    "ext_build_field",
    "ext_build_mixed",
    "gamma_report",
    "res_affine",
    "ResBijection",
    "res_point_bijection",
    "unramified_base_change_counts",
    "wr_gr_check",
    "wr_gr_sides",
]
