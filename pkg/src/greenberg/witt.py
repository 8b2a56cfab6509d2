"""p-typical Witt vectors of finite length.

The universal sum, product and negation polynomials are built by the ghost
recursion ``S_j = (w_j(X) + w_j(Y) - sum_{i<j} p^i S_i^{p^(j-i)}) / p^j``
over the integers.  For use over ``F_p``-algebras only their reductions mod
``p`` matter, and those are computed by a second, cheaper route that works in
``Z/p^(j+1)`` and uses ``f = g (mod p)  =>  f^(p^k) = g^(p^k) (mod p^(k+1))``.
Tests check that both routes agree.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .errors import LengthMismatch, NotDivisible, SizeGuard
from .fields import ZZ, FiniteField, IntegersMod
from .poly import Poly, PolyOps, parse_poly

DEFAULT_TERM_GUARD = 10**6


def cache_dir():
    return Path(os.environ.get("GREENBERG_CACHE", "./.cache"))


def _xy(n):
    return [f"x{i}" for i in range(n)], [f"y{i}" for i in range(n)]


def ghost(p, j, names, domain=ZZ, vars=()):
    """``w_j = sum_{i<=j} p^i X_i^(p^(j-i))`` in the variables ``names``."""
    vars = tuple(vars) or tuple(names[: j + 1])
    out = Poly.zero(domain, vars)
    for i in range(j + 1):
        out = out + Poly.variable(names[i], domain, vars) ** (p ** (j - i)) * (p**i)
    return out


@dataclass(frozen=True)
class WittLaws:
    p: int
    length: int
    sum_polys: tuple
    prod_polys: tuple
    neg_polys: tuple

    @property
    def domain(self):
        return self.sum_polys[0].domain

    def reduce(self, field):
        """The laws with coefficients mapped into ``field`` (char ``p``)."""
        return WittLaws(
            self.p,
            self.length,
            tuple(f.map_coeffs(field) for f in self.sum_polys),
            tuple(f.map_coeffs(field) for f in self.prod_polys),
            tuple(f.map_coeffs(field) for f in self.neg_polys),
        )

    def truncate(self, n):
        return WittLaws(self.p, n, self.sum_polys[:n], self.prod_polys[:n], self.neg_polys[:n])

    def to_text(self):
        lines = [f"# witt laws p={self.p} n={self.length} domain={self.domain!r}"]
        for tag, polys in (("S", self.sum_polys), ("P", self.prod_polys), ("N", self.neg_polys)):
            for j, f in enumerate(polys):
                lines.append(f"[{tag}{j}]")
                lines.append(f.to_text())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, p, n, domain):
        blocks = {}
        key = None
        for line in text.splitlines():
            if line.startswith("#") or not line.strip():
                continue
            if line.startswith("["):
                key = line.strip()[1:-1]
            else:
                blocks[key] = line
        xs, ys = _xy(n)
        vars = tuple(xs + ys)
        get = lambda tag, j: parse_poly(blocks[f"{tag}{j}"], domain, vars)  # noqa: E731
        return cls(
            p,
            n,
            tuple(get("S", j) for j in range(n)),
            tuple(get("P", j) for j in range(n)),
            tuple(get("N", j) for j in range(n)),
        )


def _build_integral(p, n, guard):
    xs, ys = _xy(n)
    vars = tuple(xs + ys)
    S, P, N = [], [], []
    for j in range(n):
        wx = ghost(p, j, xs, ZZ, vars)
        wy = ghost(p, j, ys, ZZ, vars)
        num_s, num_p, num_n = wx + wy, wx * wy, -wx
        for i in range(j):
            e = p ** (j - i)
            num_s = num_s - (S[i] ** e) * (p**i)
            num_p = num_p - (P[i] ** e) * (p**i)
            num_n = num_n - (N[i] ** e) * (p**i)
        for f in (num_s, num_p, num_n):
            if len(f) > guard:
                raise SizeGuard(f"Witt law term count {len(f)} exceeds guard {guard}")
        S.append(num_s.div_exact_int(p**j))
        P.append(num_p.div_exact_int(p**j))
        N.append(num_n.div_exact_int(p**j))
    return WittLaws(p, n, tuple(S), tuple(P), tuple(N))


def _build_mod_p(p, n, guard):
    xs, ys = _xy(n)
    vars = tuple(xs + ys)
    Fp = FiniteField(p)
    laws = {"S": [], "P": [], "N": []}
    for j in range(n):
        R = IntegersMod(p ** (j + 1)) if j else None
        for tag in ("S", "P", "N"):
            if j == 0:
                base = {"S": "x0 + y0", "P": "x0*y0", "N": f"{p - 1}*x0"}[tag]
                laws[tag].append(parse_poly(base, Fp, vars))
                continue
            wx = ghost(p, j, xs, R, vars)
            wy = ghost(p, j, ys, R, vars)
            num = {"S": wx + wy, "P": wx * wy, "N": -wx}[tag]
            for i in range(j):
                k = j - i
                Rk = IntegersMod(p ** (k + 1))
                h = Poly(Rk, vars, dict(laws[tag][i].terms))
                for _ in range(k):
                    h = h**p
                mod = R.mod
                scaled = {m: (c * p**i) % mod for m, c in h.terms.items()}
                num = num - Poly(R, vars, {m: c for m, c in scaled.items() if c})
            if len(num) > guard:
                raise SizeGuard(f"Witt law term count {len(num)} exceeds guard {guard}")
            out = {}
            pj = p**j
            for m, c in num.terms.items():
                q, r = divmod(c, pj)
                if r:
                    raise NotDivisible(f"coefficient {c} not divisible by {pj}")
                if q % p:
                    out[m] = q % p
            laws[tag].append(Poly(Fp, vars, out))
    return WittLaws(p, n, tuple(laws["S"]), tuple(laws["P"]), tuple(laws["N"]))


def _cached(kind, p, n, build, domain):
    path = cache_dir() / f"witt_{kind}_p{p}_n{n}.txt"
    if path.exists():
        try:
            return WittLaws.from_text(path.read_text(), p, n, domain)
        except Exception:
            pass
    laws = build()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(laws.to_text())
        os.replace(tmp, path)
    except OSError:
        pass
    return laws


@lru_cache(maxsize=None)
def witt_laws_build(p, n, guard=DEFAULT_TERM_GUARD, use_cache=True):
    """Integral Witt laws of length ``n`` (verified against the ghost map)."""
    if n < 1:
        raise ValueError("length must be >= 1")

    def build():
        laws = _build_integral(p, n, guard)
        bad = verify_ghost_identities(laws)
        if bad:
            raise NotDivisible(f"ghost identities fail for p={p}, n={n}: {bad}")
        return laws

    if not use_cache:
        return build()
    return _cached("ZZ", p, n, build, ZZ)


@lru_cache(maxsize=None)
def witt_laws_mod_p(p, n, guard=DEFAULT_TERM_GUARD, use_cache=True):
    """The laws reduced mod ``p`` (coefficients in ``F_p``)."""
    Fp = FiniteField(p)
    if not use_cache:
        return _build_mod_p(p, n, guard)
    return _cached("Fp", p, n, lambda: _build_mod_p(p, n, guard), Fp)


def verify_ghost_identities(laws):
    """Symbolic ghost identities over ``Z``; returns a list of failures."""
    p, n = laws.p, laws.length
    xs, ys = _xy(n)
    vars = tuple(xs + ys)
    s_names = [f"s{i}" for i in range(n)]
    bad = []
    for j in range(n):
        wx = ghost(p, j, xs, ZZ, vars)
        wy = ghost(p, j, ys, ZZ, vars)
        w = ghost(p, j, s_names, ZZ, s_names[: j + 1])
        for tag, polys, rhs in (("S", laws.sum_polys, wx + wy), ("P", laws.prod_polys, wx * wy), ("N", laws.neg_polys, -wx)):
            lhs = w.substitute({s_names[i]: polys[i] for i in range(j + 1)})
            if lhs != rhs:
                bad.append(f"{tag}{j}")
        for tag, polys in (("S", laws.sum_polys), ("P", laws.prod_polys), ("N", laws.neg_polys)):
            used = polys[j].support()
            if any(int(v[1:]) > j for v in used):
                bad.append(f"{tag}{j} uses higher index")
    return bad


# ---------------------------------------------------------------------------
# Witt vectors over a carrier


def _pow(ops, a, e):
    if hasattr(ops, "pow"):
        return ops.pow(a, e)
    result = ops.one
    while e:
        if e & 1:
            result = ops.mul(result, a)
        a = ops.mul(a, a)
        e >>= 1
    return result


class WittRing:
    """``W_n(A)`` for an ``F_p``-algebra carrier ``ops``.

    ``ops`` is anything with ``zero, one, add, mul, coeff`` -- a
    :class:`~greenberg.fields.FiniteRing` or a
    :class:`~greenberg.poly.PolyOps` for symbolic entries.
    """

    def __init__(self, p, n, ops):
        self.p = p
        self.n = n
        self.ops = ops
        self.laws = witt_laws_mod_p(p, n)
        xs, ys = _xy(n)
        self._xs, self._ys = xs, ys

    def _check(self, *vs):
        for v in vs:
            if len(v) != self.n:
                raise LengthMismatch(f"expected length {self.n}, got {len(v)}")

    def _apply(self, polys, a, b=None):
        env = dict(zip(self._xs, a))
        if b is not None:
            env.update(zip(self._ys, b))
        return tuple(f.evaluate(env, self.ops) for f in polys)

    @property
    def zero(self):
        return (self.ops.zero,) * self.n

    @property
    def one(self):
        return (self.ops.one,) + (self.ops.zero,) * (self.n - 1)

    def add(self, a, b):
        self._check(a, b)
        return self._apply(self.laws.sum_polys, a, b)

    def mul(self, a, b):
        self._check(a, b)
        return self._apply(self.laws.prod_polys, a, b)

    def neg(self, a):
        self._check(a)
        return self._apply(self.laws.neg_polys, a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def verschiebung(self, a):
        self._check(a)
        return (self.ops.zero,) + tuple(a[:-1])

    def frobenius(self, a):
        self._check(a)
        return tuple(_pow(self.ops, c, self.p) for c in a)

    def teichmueller(self, x):
        return (x,) + (self.ops.zero,) * (self.n - 1)

    def times_p(self, a):
        """``p * a`` computed as ``V(F(a))``."""
        return self.verschiebung(self.frobenius(a))

    def from_int(self, m):
        """Image of ``m`` under ``Z -> W_n(A)`` by double-and-add."""
        neg = m < 0
        m = -m if neg else m
        result, base = self.zero, self.one
        while m:
            if m & 1:
                result = self.add(result, base)
            m >>= 1
            if m:
                base = self.add(base, base)
        return self.neg(result) if neg else result

    def mul_int(self, m, a):
        """``m * a``; the ``p``-part of ``m`` is applied as ``(V F)^k``."""
        if m == 0:
            return self.zero
        k = 0
        while m % self.p == 0:
            m //= self.p
            k += 1
        out = a if m == 1 else self.mul(self.from_int(m), a)
        for _ in range(min(k, self.n)):
            out = self.times_p(out)
        return out if k < self.n else self.zero

    def map(self, phi, a):
        return tuple(phi(c) for c in a)

    def vector(self, coords):
        return WittVector(self, tuple(coords))


@dataclass(frozen=True)
class WittVector:
    ring: WittRing
    coords: tuple

    def _other(self, other):
        if isinstance(other, WittVector):
            if other.ring.n != self.ring.n:
                raise LengthMismatch("Witt vectors of different lengths")
            return other.coords
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return WittVector(self.ring, self.ring.add(self.coords, self._other(other)))

    __radd__ = __add__

    def __mul__(self, other):
        return WittVector(self.ring, self.ring.mul(self.coords, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return WittVector(self.ring, self.ring.neg(self.coords))

    def __sub__(self, other):
        return self + (-WittVector(self.ring, self._other(other)))

    def V(self):
        return WittVector(self.ring, self.ring.verschiebung(self.coords))

    def F(self):
        return WittVector(self.ring, self.ring.frobenius(self.coords))

    def __eq__(self, other):
        return isinstance(other, WittVector) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)


def witt_add(a, b):
    return a + b


def witt_mul(a, b):
    return a * b


def witt_neg(a):
    return -a


def verschiebung(a):
    return a.V()


def frobenius(a):
    return a.F()


def teichmueller(x, n, ring_ops, p):
    R = WittRing(p, n, ring_ops)
    return R.vector(R.teichmueller(x))


def witt_from_int(m, n, A):
    """``m`` in ``W_n(A)`` for a finite algebra ``A`` (coordinates as indices)."""
    ring = A.ring if hasattr(A, "ring") else A
    return WittRing(A.base.p if hasattr(A, "base") else ring.char, n, ring).from_int(m)


def witt_map(phi, a):
    return WittVector(a.ring, a.ring.map(phi, a.coords))


def witt_table_ring(p, n, ring):
    """``W_n(A)`` as a :class:`~greenberg.fields.FiniteRing` (tables via the kernels)."""
    from .fields import FiniteRing
    from .kernels import table_ring_products

    laws = witt_laws_mod_p(p, n)
    add, mul, neg = table_ring_products(laws.sum_polys, laws.prod_polys, laws.neg_polys, n, ring)
    return FiniteRing(add, mul, neg, 1, name=f"W_{n}({ring.name})")


def symbolic_witt_ring(p, n, domain, names):
    """A Witt ring whose carrier is polynomials over ``domain`` in ``names``."""
    return WittRing(p, n, PolyOps(domain, names))
