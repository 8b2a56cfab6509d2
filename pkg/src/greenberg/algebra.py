"""Greenberg algebras: the truncated rings ``R_N = R / m^(N+1)`` as ring schemes over ``k``.

``R`` is either ``k[[t]]`` (equal characteristic) or ``W(k)[pi]/(f)`` for an
Eisenstein polynomial ``f = t^rho + a_1 t^(rho-1) + ... + a_rho`` with integer
coefficients (mixed characteristic; the empty list stands for ``R = W(k)``).

An element of ``R_N(A)`` is a tuple of ``N+1`` elements of ``A``.  Coordinate
``l`` is the Witt slot ``s`` of the ``pi^i`` component with ``l = s*rho + i``,
so it carries valuation ``l`` and truncating to level ``M`` keeps the first
``M+1`` coordinates.  The laws are computed at the master level
``m*rho - 1`` where ``R_(m rho - 1)(A) = W_m(A)[pi]/(f)`` and then cut down;
the cut is only legitimate if retained outputs never read dropped inputs,
which :func:`ga_build` asserts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    CarrierMismatch,
    CoefficientLiftUndefined,
    DegreeTooHigh,
    GradingViolation,
    LevelMismatch,
    NotEisenstein,
    NotPrimeField,
    SizeGuard,
)
from .fields import DEFAULT_SIZE_GUARD, Domain, FiniteField, FiniteRing, alg_build
from .kernels import table_ring_products
from .poly import PolyOps
from .witt import WittRing

TABLE_GUARD = 4096


@dataclass(frozen=True)
class BaseRingSpec:
    """The complete discrete valuation ring ``R`` with residue field ``k``."""

    case: str
    residue: FiniteField
    eisenstein: tuple = ()

    def __post_init__(self):
        if self.case not in ("equal", "mixed"):
            raise ValueError(f"case must be 'equal' or 'mixed', not {self.case!r}")
        object.__setattr__(self, "eisenstein", tuple(int(a) for a in self.eisenstein))
        if self.case == "equal" and self.eisenstein:
            raise NotEisenstein("equal-characteristic bases take no Eisenstein data")
        if self.case == "mixed":
            p = self.p
            for a in self.coefficients:
                if a % p:
                    raise NotEisenstein(f"coefficient {a} not divisible by {p}", coefficients=list(self.eisenstein))
            if self.coefficients[-1] % (p * p) == 0:
                raise NotEisenstein(
                    f"constant term {self.coefficients[-1]} divisible by {p * p}",
                    coefficients=list(self.eisenstein),
                )

    @property
    def p(self):
        return self.residue.p

    @property
    def rho(self):
        """Degree of the Eisenstein polynomial (1 for ``W(k)`` and for ``k[[t]]``)."""
        return len(self.eisenstein) if self.eisenstein else 1

    @property
    def coefficients(self):
        """``(a_1, ..., a_rho)``; ``R = W(k)`` is ``pi = p``, i.e. ``f = t - p``."""
        return self.eisenstein if self.eisenstein else (-self.p,)

    @property
    def key(self):
        return (self.case, self.residue.key, self.eisenstein)

    def to_config(self):
        out = {"case": self.case, "p": self.p, "residue": {"modulus": self.residue.to_config()["modulus"]}}
        if self.case == "mixed":
            out["eisenstein"] = list(self.eisenstein)
        return out

    def __repr__(self):
        if self.case == "equal":
            return f"{self.residue!r}[[t]]"
        if not self.eisenstein:
            return f"W({self.residue!r})"
        return f"W({self.residue!r})[pi]/f{list(self.eisenstein)}"


@dataclass(frozen=True)
class RamificationData:
    level: int
    m: int
    r: int
    lengths: tuple


def ram_data(base, N):
    if N < 0:
        raise LevelMismatch(f"level must be >= 0, got {N}")
    if base.case == "equal":
        return RamificationData(N, 1, N, (1,) * (N + 1))
    rho = base.rho
    m = -(-(N + 1) // rho)
    r = min(rho - 1, N)
    lengths = tuple(-(-(N + 1 - i) // rho) for i in range(r + 1))
    assert sum(lengths) == N + 1
    return RamificationData(N, m, r, lengths)


def _names(prefix, count):
    return [f"{prefix}{l}" for l in range(count)]


def _master_laws_equal(p, N):
    F = FiniteField(p)
    xs, ys = _names("x", N + 1), _names("y", N + 1)
    ops = PolyOps(F, xs + ys)
    X = [ops.var(v) for v in xs]
    Y = [ops.var(v) for v in ys]
    add = [X[l] + Y[l] for l in range(N + 1)]
    neg = [-X[l] for l in range(N + 1)]
    mul = []
    for l in range(N + 1):
        acc = ops.zero
        for i in range(l + 1):
            acc = acc + X[i] * Y[l - i]
        mul.append(acc)
    return add, mul, neg


def _master_laws_mixed(base, m):
    p, rho, a = base.p, base.rho, base.coefficients
    F = FiniteField(p)
    top = m * rho
    xs, ys = _names("x", top), _names("y", top)
    ops = PolyOps(F, xs + ys)
    W = WittRing(p, m, ops)

    def components(names):
        return [tuple(ops.var(names[s * rho + i]) for s in range(m)) for i in range(rho)]

    X, Y = components(xs), components(ys)
    add = [W.add(X[i], Y[i]) for i in range(rho)]
    neg = [W.neg(X[i]) for i in range(rho)]
    z = [None] * (2 * rho - 1)
    for i, j in itertools.product(range(rho), repeat=2):
        t = W.mul(X[i], Y[j])
        z[i + j] = t if z[i + j] is None else W.add(z[i + j], t)
    # pi^rho = -(a_1 pi^(rho-1) + ... + a_rho); multiplying by a_j uses V F for its p-part
    for l in range(2 * rho - 2, rho - 1, -1):
        for j in range(1, rho + 1):
            if a[j - 1]:
                z[l - j] = W.add(z[l - j], W.mul_int(-a[j - 1], z[l]))
        z[l] = None

    def flatten(comps):
        out = [None] * top
        for i, w in enumerate(comps):
            for s in range(m):
                out[s * rho + i] = w[s]
        return out

    return flatten(add), flatten(z[:rho]), flatten(neg)


class GreenbergAlgebra(Domain):
    """``R_N`` as a polynomial ring scheme on ``N+1`` coordinates over ``k``.

    Structure polynomials have ``F_p`` coefficients in ``x0..xN, y0..yN``.
    The object is also a coefficient :class:`~greenberg.fields.Domain`
    whose elements are the points ``R_N(k)`` as tuples of ``k``-elements.
    """

    mod = None

    def __init__(self, base, N, add_polys, mul_polys, neg_polys, master_level):
        self.base = base
        self.level = N
        self.ram = ram_data(base, N)
        self.k = base.residue
        self.p = base.p
        self.prime_field = FiniteField(self.p)
        self.width = N + 1
        self.master_level = master_level
        self.xvars = tuple(_names("x", N + 1))
        self.yvars = tuple(_names("y", N + 1))
        self.add_polys = tuple(add_polys)
        self.mul_polys = tuple(mul_polys)
        self.neg_polys = tuple(neg_polys)
        self.char = self.p ** self.ram.m if base.case == "mixed" else self.p
        self.zero = (0,) * self.width
        self.one = (1,) + (0,) * N
        self.pi = tuple(1 if l == 1 else 0 for l in range(self.width))
        self._kring = alg_build("field", self.k).ring
        self._kops = GAOps(self, self._kring)

    # -- layout ------------------------------------------------------------
    def layout(self):
        """``(component i, Witt slot s)`` for each coordinate ``l``."""
        if self.base.case == "equal":
            return [(l, 0) for l in range(self.width)]
        rho = self.base.rho
        return [(l % rho, l // rho) for l in range(self.width)]

    # -- Domain interface (elements are tuples over k) -----------------------
    def add(self, a, b):
        return self._kops.add(a, b)

    def mul(self, a, b):
        return self._kops.mul(a, b)

    def neg(self, a):
        return self._kops.neg(a)

    def from_int(self, n):
        return self._kops.from_int(n)

    def from_coords(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.width:
            raise LevelMismatch(f"expected {self.width} coordinates, got {len(coords)}")
        for c in coords:
            if not 0 <= c < self.k.q:
                raise ValueError(f"coordinate {c} is not an element of {self.k!r}")
        return coords

    def is_zero(self, a):
        return a == self.zero

    def fmt(self, a):
        return "[" + ",".join(str(c) for c in a) + "]"

    @property
    def key(self):
        return ("GA", self.base.key, self.level)

    def lift_into(self, c, ops):
        """Image of the constant ``c`` in a carrier that knows this algebra."""
        encode = getattr(ops, "ga_encode", None)
        if encode is not None and getattr(ops, "ga", None) is self:
            return encode(c)
        raise CoefficientLiftUndefined(f"no image of {self!r} in {ops!r}")

    def __repr__(self):
        return f"R_{self.level}({self.base!r})"

    # -- convenience -----------------------------------------------------------
    def ops(self, carrier):
        return GAOps(self, carrier)

    def element(self, coords, carrier=None):
        return GAElement(self, tuple(coords), carrier or self._kring)


class GAOps:
    """Ring operations on ``N+1``-tuples over ``carrier`` through the structure laws.

    ``carrier`` is a finite ring (points ``R_N(A)``) or a
    :class:`~greenberg.poly.PolyOps` (symbolic points, used by the transform).
    """

    def __init__(self, ga, carrier):
        self.ga = ga
        self.carrier = carrier
        Fp = ga.prime_field
        self.zero = tuple(carrier.zero for _ in range(ga.width))
        self.one = tuple(carrier.coeff(c, Fp) if c else carrier.zero for c in ga.one)

    def _env(self, a, b=None):
        env = dict(zip(self.ga.xvars, a))
        if b is not None:
            env.update(zip(self.ga.yvars, b))
        return env

    def add(self, a, b):
        env = self._env(a, b)
        return tuple(f.evaluate(env, self.carrier) for f in self.ga.add_polys)

    def mul(self, a, b):
        env = self._env(a, b)
        return tuple(f.evaluate(env, self.carrier) for f in self.ga.mul_polys)

    def neg(self, a):
        env = self._env(a)
        return tuple(f.evaluate(env, self.carrier) for f in self.ga.neg_polys)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, e):
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def from_int(self, n):
        neg = n < 0
        n = -n if neg else n
        result, base = self.zero, self.one
        while n:
            if n & 1:
                result = self.add(result, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return self.neg(result) if neg else result

    def coeff(self, c, domain):
        """Constants: points of ``R_N(k)``, integers, or ``k``-elements (Teichmueller)."""
        ga = self.ga
        if domain is ga or getattr(domain, "key", None) == ga.key:
            return tuple(self.carrier.coeff(x, ga.k) if x else self.carrier.zero for x in c)
        if domain.mod == 0 or (domain.mod and domain.mod % ga.char == 0):
            return self.from_int(c)
        if isinstance(domain, FiniteField) and domain.key == ga.k.key:
            return (self.carrier.coeff(c, domain),) + self.zero[1:]
        raise CoefficientLiftUndefined(f"no image of {domain!r} in {ga!r}")


@dataclass(frozen=True)
class GAElement:
    algebra: GreenbergAlgebra
    coords: tuple
    carrier: object

    def _peer(self, other):
        if not isinstance(other, GAElement) or other.algebra is not self.algebra:
            raise CarrierMismatch("elements of different Greenberg algebras")
        if other.carrier is not self.carrier:
            raise CarrierMismatch("elements over different carriers")
        return other.coords

    def __add__(self, other):
        return ga_op("add", self, other)

    def __mul__(self, other):
        return ga_op("mul", self, other)

    def __neg__(self):
        return ga_op("neg", self)

    def __sub__(self, other):
        return self + (-other)


def ga_op(op, a, b=None):
    ops = GAOps(a.algebra, a.carrier)
    if op == "neg":
        return GAElement(a.algebra, ops.neg(a.coords), a.carrier)
    other = a._peer(b)
    if op == "add":
        return GAElement(a.algebra, ops.add(a.coords, other), a.carrier)
    if op == "mul":
        return GAElement(a.algebra, ops.mul(a.coords, other), a.carrier)
    raise ValueError(f"unknown op {op!r}")


@lru_cache(maxsize=None)
def ga_build(base, N):
    """Structure polynomials of ``R_N`` (grading check included)."""
    ram = ram_data(base, N)
    if base.case == "equal":
        add, mul, neg = _master_laws_equal(base.p, N)
        master = N
    else:
        add, mul, neg = _master_laws_mixed(base, ram.m)
        master = ram.m * base.rho - 1
    keep = set(_names("x", N + 1)) | set(_names("y", N + 1))
    for tag, polys in (("add", add), ("mul", mul), ("neg", neg)):
        for l in range(N + 1):
            bad = [v for v in polys[l].support() if v not in keep]
            if bad:
                raise GradingViolation(
                    f"{tag} coordinate {l} at level {N} reads dropped coordinates {bad}",
                    level=N,
                    coordinate=l,
                )
    xs, ys = _names("x", N + 1), _names("y", N + 1)

    def cut(polys, names):
        return [polys[l].with_vars(names) for l in range(N + 1)]

    return GreenbergAlgebra(base, N, cut(add, xs + ys), cut(mul, xs + ys), cut(neg, xs), master)


def ga_const(spec, ga):
    """The constant ``sum spec[j] pi^j`` (integer coefficients, constant first)."""
    spec = list(spec)
    while spec and spec[-1] == 0:
        spec.pop()
    if len(spec) - 1 > ga.level:
        raise DegreeTooHigh(f"pi-degree {len(spec) - 1} exceeds level {ga.level}")
    acc = ga.zero
    for c in reversed(spec):
        acc = ga.add(ga.mul(acc, ga.pi), ga.from_int(c))
    return acc


def ga_truncate(a, M):
    """Restrict an element to level ``M``: keep the first ``M+1`` coordinates."""
    ga = a.algebra
    if M > ga.level or M < 0:
        raise LevelMismatch(f"cannot truncate level {ga.level} to {M}")
    return GAElement(ga_build(ga.base, M), a.coords[: M + 1], a.carrier)


# ---------------------------------------------------------------------------
# finite point rings


class GAPoints:
    """``R_N(A)`` for a finite ``k``-algebra ``A``.

    Elements are coordinate tuples of ``A``-indices, or packed indices
    ``sum c_l |A|^l`` in the table ring :attr:`ring` (materialised lazily and
    only up to :data:`TABLE_GUARD` elements).
    """

    def __init__(self, ga, A, size_guard=DEFAULT_SIZE_GUARD):
        if A.base.key != ga.k.key:
            raise CarrierMismatch(f"{A!r} is not an algebra over {ga.k!r}")
        self.ga = ga
        self.A = A
        self.base_size = A.size
        self.size = A.size**ga.width
        if self.size > size_guard**2:
            raise SizeGuard(f"|R_N(A)| = {self.size} exceeds guard {size_guard}^2", size=self.size)
        self.ops = GAOps(ga, A.ring)
        self._ring = None

    def encode(self, coords):
        v = 0
        for c in reversed(coords):
            v = v * self.base_size + int(c)
        return v

    def decode(self, a):
        out = []
        for _ in range(self.ga.width):
            a, r = divmod(a, self.base_size)
            out.append(r)
        return tuple(out)

    def elements(self):
        return (self.decode(a) for a in range(self.size))

    def coord_matrix(self):
        idx = np.arange(self.size, dtype=np.int64)
        b = self.base_size
        return np.stack([(idx // b**l) % b for l in range(self.ga.width)]).astype(np.int32)

    @property
    def ring(self):
        if self._ring is None:
            if self.size > TABLE_GUARD:
                raise SizeGuard(f"|R_N(A)| = {self.size} too large for tables", size=self.size)
            ga, A = self.ga, self.A
            add, mul, neg = table_ring_products(ga.add_polys, ga.mul_polys, ga.neg_polys, ga.width, A.ring)
            ring = FiniteRing(add, mul, neg, self.encode(self.ops.one), name=f"{ga!r}({A.name})", labels=self.fmt)
            lift = A.ring.field_lifts[ga.k.key]
            ring.register_field(ga.k, [self.encode((lift[c],) + (0,) * (ga.width - 1)) for c in range(ga.k.q)])
            ring.ga = ga
            ring.ga_encode = lambda c: self.encode(tuple(lift[x] for x in c))
            ring.points = self
            self._ring = ring
        return self._ring

    def fmt(self, a):
        return "(" + ",".join(self.A.ring.fmt(c) for c in self.decode(a)) + ")"

    def truncation_map(self, M):
        """Index array for ``R_N(A) -> R_M(A)``."""
        if M > self.ga.level:
            raise LevelMismatch(f"cannot truncate level {self.ga.level} to {M}")
        return (np.arange(self.size, dtype=np.int64) % self.base_size ** (M + 1)).astype(np.int32)


def ga_points(ga, A, size_guard=DEFAULT_SIZE_GUARD):
    return GAPoints(ga, A, size_guard)


def ga_ideal_power_members(points, j):
    """``M_N(A)^j`` as a sorted list of indices, by brute-force closure."""
    R = points.ring
    pi = points.encode(points.ops.coeff(points.ga.pi, points.ga))
    all_idx = np.arange(R.size)
    if j == 0:
        return all_idx.tolist()
    maximal = _additive_closure(R, np.unique(R.mul_t[pi, all_idx]))
    current = maximal
    for _ in range(j - 1):
        products = np.unique(R.mul_t[np.ix_(current, maximal)])
        current = _additive_closure(R, products)
    return current.tolist()


def _additive_closure(R, gens):
    members = np.zeros(R.size, dtype=bool)
    members[0] = True
    frontier = np.array([0])
    gens = np.asarray(gens)
    while frontier.size:
        new = np.unique(R.add_t[np.ix_(frontier, gens)])
        new = new[~members[new]]
        members[new] = True
        frontier = new
    return np.flatnonzero(members)


# ---------------------------------------------------------------------------
# integer oracle for k = F_p


class GAOracle:
    """``Z[pi]/(f, pi^(N+1))`` as tuples ``c_i mod p^(n_i)`` of ``sum c_i pi^i``."""

    def __init__(self, base, N):
        if base.residue.d != 1:
            raise NotPrimeField(f"oracle needs k = F_p, not {base.residue!r}")
        self.base = base
        self.level = N
        self.ram = ram_data(base, N)
        p = base.p
        if base.case == "equal":
            self.mods = (p,) * (N + 1)
        else:
            self.mods = tuple(p**n for n in self.ram.lengths)
        self.size = int(np.prod(self.mods))

    def elements(self):
        return [tuple(reversed(e)) for e in itertools.product(*[range(q) for q in reversed(self.mods)])]

    def normalize(self, coeffs):
        """Reduce an integer ``pi``-polynomial (any length) to normal form."""
        c = list(coeffs)
        if self.base.case == "equal":
            c = c[: self.level + 1]
        else:
            rho, a = self.base.rho, self.base.coefficients
            for l in range(len(c) - 1, rho - 1, -1):
                top = c[l]
                if top:
                    for j in range(1, rho + 1):
                        c[l - j] -= a[j - 1] * top
                c[l] = 0
        c = c + [0] * max(0, len(self.mods) - len(c))
        return tuple(c[i] % q for i, q in enumerate(self.mods))

    def add(self, x, y):
        return self.normalize([a + b for a, b in zip(x, y)])

    def mul(self, x, y):
        out = [0] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                out[i + j] += a * b
        return self.normalize(out)

    def to_ga(self, x, ga):
        """The claimed bijection: Witt coordinates of each ``c_i`` placed at ``l = s rho + i``."""
        coords = [0] * ga.width
        if self.base.case == "equal":
            return tuple(x)
        rho = self.base.rho
        for i, (c, n) in enumerate(zip(x, self.ram.lengths)):
            for s, a in enumerate(teichmueller_digits(c, self.base.p, n)):
                coords[s * rho + i] = a
        return tuple(coords)


def teichmueller_digits(c, p, n):
    """``(a_0, ..., a_(n-1))`` with ``c = sum [a_s] p^s`` in ``Z/p^n``.

    These are the Witt coordinates of ``c`` in ``W_n(F_p)``, computed without
    the Witt laws: Frobenius is the identity on ``F_p``, so ``V = p``.
    """
    q = p**n
    c %= q
    digits = []
    for s in range(n):
        a = c % p
        digits.append(a)
        # Teichmueller lift of a modulo p^n
        lift = pow(a, p ** (n - 1), q) if a else 0
        c = ((c - lift) % q) // p
    return tuple(digits)


def ga_oracle(base, N):
    return GAOracle(base, N)


def check_oracle_isomorphism(base, N, chunk=256):
    """Exhaustive comparison of the oracle with ``R_N(F_p)``; returns failure strings.

    Both full tables are compared, in row blocks of ``chunk`` elements.
    """
    oracle = GAOracle(base, N)
    ga = ga_build(base, N)
    pts = GAPoints(ga, alg_build("field", base.residue))
    R = pts.ring
    elems = oracle.elements()
    phi = np.array([pts.encode(oracle.to_ga(x, ga)) for x in elems], dtype=np.int64)
    if sorted(phi.tolist()) != list(range(R.size)):
        return ["coordinate map is not a bijection"]
    mods = np.array(oracle.mods, dtype=np.int64)
    weights = np.concatenate(([1], np.cumprod(mods)[:-1]))
    C = np.array(elems, dtype=np.int64)
    k = len(oracle.mods)
    coeffs = () if base.case == "equal" else base.coefficients
    rho = base.rho

    def index(c):
        return ((c % mods) * weights).sum(axis=-1)

    failures = []
    for start in range(0, len(elems), chunk):
        a = C[start : start + chunk][:, None, :]
        b = C[None, :, :]
        lhs = phi[start : start + chunk][:, None]
        rhs = phi[None, :]
        if not np.array_equal(phi[index(a + b)], R.add_t[lhs, rhs]):
            failures.append(f"add differs in rows {start}..{start + chunk - 1}")
        prod = np.zeros(a.shape[:1] + b.shape[1:2] + (2 * k - 1,), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prod[..., i + j] += a[..., i] * b[..., j]
        if base.case == "equal":
            prod = prod[..., :k]
        else:
            for l in range(2 * k - 2, rho - 1, -1):
                for j in range(1, rho + 1):
                    prod[..., l - j] -= coeffs[j - 1] * prod[..., l]
            prod = prod[..., :k]
        if not np.array_equal(phi[index(prod)], R.mul_t[lhs, rhs]):
            failures.append(f"mul differs in rows {start}..{start + chunk - 1}")
        if len(failures) > 10:
            break
    return failures
