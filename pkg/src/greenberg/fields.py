"""Exact arithmetic foundations: integer domains, finite fields, finite algebras.

Elements of ``F_q`` are plain ints: the coordinates of ``c_0 + c_1 u + ...``
in the power basis of the modulus, packed as ``sum(c_i * p**i)``.  Elements
of a finite ``F_q``-algebra of dimension ``t`` are packed the same way with
radix ``q``.  The packing makes enumeration order colexicographic on
coordinates, so ``F_4`` enumerates as ``0, 1, u, 1+u``.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from .errors import (
    BaseMismatch,
    CoefficientLiftUndefined,
    DegreeTooLarge,
    GreenbergError,
    NotPrime,
    Reducible,
    SizeGuard,
)

DEFAULT_SIZE_GUARD = 4096
DEFAULT_MAX_DEGREE = 4
_LIST_TABLE_LIMIT = 1024


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Domain:
    """Coefficient domain interface used by :class:`~greenberg.poly.Poly`.

    ``mod`` selects a fast path in polynomial arithmetic: ``0`` means plain
    integers, ``n > 0`` means integers reduced mod ``n`` and ``None`` means
    every operation goes through the methods below.
    """

    mod = None
    char = 0
    zero = 0
    one = 1

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def from_int(self, n):
        raise NotImplementedError

    def is_zero(self, a):
        return a == self.zero

    def fmt(self, a):
        return str(a)

    @property
    def key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Domain) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


class Integers(Domain):
    mod = 0
    char = 0

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def from_int(self, n):
        return n

    @property
    def key(self):
        return ("ZZ",)

    def __repr__(self):
        return "ZZ"


ZZ = Integers()


class IntegersMod(Domain):
    """``Z/nZ`` with representatives ``0..n-1``."""

    def __init__(self, n):
        if n < 2:
            raise GreenbergError(f"modulus must be >= 2, got {n}")
        self.mod = n
        self.n = n
        p = 2
        while n % p:
            p += 1
        # char of Z/p^k is p^k; `char` is the additive order of 1
        self.char = n
        self.prime = p

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def from_int(self, n):
        return n % self.n

    def elements(self):
        return range(self.n)

    @property
    def key(self):
        return ("Zmod", self.n)

    def __repr__(self):
        return f"Z/{self.n}"


class FiniteField(Domain):
    """``F_q`` for ``q = p**d`` presented as ``F_p[u]/(modulus)``."""

    def __init__(self, p, modulus=(1,), max_degree=DEFAULT_MAX_DEGREE):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime", p=p)
        modulus = tuple(int(c) % p for c in modulus)
        if not modulus or modulus[-1] != 1:
            raise GreenbergError(f"modulus {list(modulus)} is not monic")
        if len(modulus) <= 2:
            # [1] is the identity modulus; any degree-1 modulus also gives F_p
            self.d = 1
            self.modulus = (0, 1) if len(modulus) == 1 else modulus
        else:
            self.d = len(modulus) - 1
            self.modulus = modulus
        if self.d > max_degree:
            raise DegreeTooLarge(f"degree {self.d} exceeds bound {max_degree}", degree=self.d)
        self.p = p
        self.q = p**self.d
        self.char = p
        self.mod = p if self.d == 1 else None
        if self.d > 1:
            factor = _find_factor(p, self.modulus)
            if factor is not None:
                raise Reducible(
                    f"modulus {list(self.modulus)} has factor {list(factor)} over F_{p}",
                    factor=list(factor),
                )
        self._mul_table = None
        if self.d > 1 and self.q <= _LIST_TABLE_LIMIT:
            self._mul_table = [[self._mul_slow(a, b) for b in range(self.q)] for a in range(self.q)]
            self._add_table = [[self._add_slow(a, b) for b in range(self.q)] for a in range(self.q)]

    # -- coordinates -------------------------------------------------------
    def to_coords(self, a):
        out = []
        for _ in range(self.d):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_coords(self, coords):
        coords = list(coords) + [0] * (self.d - len(coords))
        v = 0
        for c in reversed(coords[: self.d]):
            v = v * self.p + (c % self.p)
        return v

    # -- arithmetic --------------------------------------------------------
    def _add_slow(self, a, b):
        p = self.p
        return self.from_coords([(x + y) % p for x, y in zip(self.to_coords(a), self.to_coords(b))])

    def _mul_slow(self, a, b):
        p, d = self.p, self.d
        x, y = self.to_coords(a), self.to_coords(b)
        prod = [0] * (2 * d - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        mod = self.modulus
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(d):
                    prod[k - d + j] -= c * mod[j]
            prod[k] = 0
        return self.from_coords([c % p for c in prod[:d]])

    def add(self, a, b):
        if self.d == 1:
            return (a + b) % self.p
        if self._mul_table is not None:
            return self._add_table[a][b]
        return self._add_slow(a, b)

    def mul(self, a, b):
        if self.d == 1:
            return (a * b) % self.p
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_slow(a, b)

    def neg(self, a):
        if self.d == 1:
            return (-a) % self.p
        return self.from_coords([(-c) % self.p for c in self.to_coords(a)])

    def from_int(self, n):
        return n % self.p

    def pow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.pow(a, self.q - 2)

    def frob(self, a):
        return self.pow(a, self.p)

    def elements(self):
        return range(self.q)

    def gen(self):
        """The class of ``u`` (equal to 0 for the prime field)."""
        return self.p if self.d > 1 else (self.p - self.modulus[0]) % self.p

    def fmt(self, a):
        if self.d == 1:
            return str(a)
        return "[" + ",".join(str(c) for c in self.to_coords(a)) + "]"

    def in_prime_field(self, a):
        return a < self.p

    @property
    def key(self):
        return ("F", self.p, self.modulus)

    def __repr__(self):
        if self.d == 1:
            return f"F_{self.p}"
        return f"F_{self.q}[{','.join(map(str, self.modulus))}]"

    def to_config(self):
        return {"p": self.p, "modulus": [1] if self.d == 1 else list(self.modulus)}

    # -- embeddings --------------------------------------------------------
    def embeddings_into(self, other):
        """All field embeddings ``self -> other`` (as lists of images)."""
        if other.p != self.p or other.d % self.d:
            return []
        if self.d == 1:
            return [list(range(self.p))]
        out = []
        for r in other.elements():
            val = 0
            for c in reversed(self.modulus):
                val = other.add(other.mul(val, r), c)
            if val == 0:
                images = []
                for a in self.elements():
                    acc = 0
                    for c in reversed(self.to_coords(a)):
                        acc = other.add(other.mul(acc, r), c)
                    images.append(acc)
                out.append(images)
        return out

    def embedding_into(self, other):
        embs = self.embeddings_into(other)
        return embs[0] if embs else None


def _poly_rem(p, a, b):
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    for k in range(len(a) - 1, db - 1, -1):
        c = (a[k] * inv_lead) % p
        if c:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    return a[:db]


def _find_factor(p, modulus):
    """A monic factor of degree ``1..d//2`` found by exhaustive trial division."""
    d = len(modulus) - 1
    for deg in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            cand = list(low) + [1]
            if not any(_poly_rem(p, modulus, cand)):
                return tuple(cand)
    return None


def ff_build(p, modulus=(1,), max_degree=DEFAULT_MAX_DEGREE):
    return FiniteField(p, modulus, max_degree=max_degree)


# ---------------------------------------------------------------------------
# table rings


class FiniteRing:
    """A finite commutative ring with elements ``0..size-1`` and full tables.

    ``coeff(c, domain)`` lifts a coefficient from a polynomial domain: plain
    integers (and ``Z/n`` with ``char | n``) map through ``Z -> ring``; finite
    fields map through a registered embedding.
    """

    def __init__(self, add, mul, neg, one, name="ring", labels=None):
        self.add_t = np.ascontiguousarray(add, dtype=np.int32)
        self.mul_t = np.ascontiguousarray(mul, dtype=np.int32)
        self.neg_t = np.ascontiguousarray(neg, dtype=np.int32)
        self.size = len(self.neg_t)
        self.zero = 0
        self.one = int(one)
        self.name = name
        self.labels = labels
        self.field_lifts = {}
        self.char = self._additive_order(self.one)
        self._int_images = [0]
        x = 0
        for _ in range(self.char - 1):
            x = int(self.add_t[x, self.one])
            self._int_images.append(x)
        if self.size <= _LIST_TABLE_LIMIT:
            self._addl = self.add_t.tolist()
            self._mull = self.mul_t.tolist()
        else:
            self._addl = self._mull = None

    def _additive_order(self, x):
        n, acc = 1, x
        while acc != 0:
            acc = int(self.add_t[acc, x])
            n += 1
            if n > self.size + 1:
                raise GreenbergError("additive order overflow; tables are not a ring")
        return n

    # -- scalar ops --------------------------------------------------------
    def add(self, a, b):
        if self._addl is not None:
            return self._addl[a][b]
        return int(self.add_t[a, b])

    def mul(self, a, b):
        if self._mull is not None:
            return self._mull[a][b]
        return int(self.mul_t[a, b])

    def neg(self, a):
        return int(self.neg_t[a])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, e):
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def from_int(self, n):
        return self._int_images[n % self.char]

    def register_field(self, field, images):
        self.field_lifts[field.key] = list(images)

    def coeff(self, c, domain):
        mod = domain.mod
        if mod == 0 or (mod and mod % self.char == 0):
            return self.from_int(c)
        lift = self.field_lifts.get(domain.key)
        if lift is not None:
            return lift[c]
        lifter = getattr(domain, "lift_into", None)
        if lifter is not None:
            return lifter(c, self)
        raise CoefficientLiftUndefined(f"no image of {domain!r} in {self.name}")

    def elements(self):
        return range(self.size)

    def fmt(self, a):
        if self.labels is not None:
            return self.labels(a)
        return str(a)

    def __repr__(self):
        return f"FiniteRing({self.name}, size={self.size})"

    # -- exhaustive checks -------------------------------------------------
    def check_axioms(self, chunk=256):
        """Commutative-ring axioms on all pairs/triples; returns a list of failures."""
        n = self.size
        A, M = self.add_t, self.mul_t
        failures = []
        idx = np.arange(n, dtype=np.int32)
        if not np.array_equal(A, A.T):
            failures.append("add not commutative")
        if not np.array_equal(M, M.T):
            failures.append("mul not commutative")
        if not np.array_equal(A[0], idx):
            failures.append("0 not additive identity")
        if not np.array_equal(M[self.one], idx):
            failures.append("1 not multiplicative identity")
        if not np.all(A[idx, self.neg_t] == 0):
            failures.append("negation not additive inverse")
        for start in range(0, n, chunk):
            a = idx[start : start + chunk][:, None, None]
            b = idx[None, :, None]
            c = idx[None, None, :]
            if not np.array_equal(A[A[a, b], c], A[a, A[b, c]]):
                failures.append("add not associative")
                break
            if not np.array_equal(M[M[a, b], c], M[a, M[b, c]]):
                failures.append("mul not associative")
                break
            if not np.array_equal(M[a, A[b, c]], A[M[a, b], M[a, c]]):
                failures.append("not distributive")
                break
        return failures


class FiniteAlgebra:
    """A commutative unital ``F_q``-algebra given by structure constants.

    ``table[i][j]`` holds the coordinates of ``e_i * e_j``.
    """

    def __init__(self, base, table, unit, name=None, size_guard=DEFAULT_SIZE_GUARD):
        self.base = base
        self.dim = len(unit)
        self.table = tuple(tuple(tuple(c) for c in row) for row in table)
        self.unit = tuple(unit)
        self.size = base.q**self.dim
        self.name = name or f"alg(dim={self.dim})"
        if self.size > size_guard:
            raise SizeGuard(
                f"algebra {self.name} has {self.size} elements > guard {size_guard}",
                size=self.size,
            )
        self._check_axioms()

    def _basis_mul(self, i, j):
        return self.table[i][j]

    def mul_coords(self, x, y):
        F = self.base
        t = self.dim
        out = [0] * t
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                s = F.mul(xi, yj)
                row = self.table[i][j]
                for c in range(t):
                    if row[c]:
                        out[c] = F.add(out[c], F.mul(s, row[c]))
        return tuple(out)

    def add_coords(self, x, y):
        F = self.base
        return tuple(F.add(a, b) for a, b in zip(x, y))

    def _check_axioms(self):
        t = self.dim
        basis = [tuple(1 if k == i else 0 for k in range(t)) for i in range(t)]
        for i in range(t):
            if self.mul_coords(self.unit, basis[i]) != basis[i]:
                raise GreenbergError(f"{self.name}: unit law fails on basis element {i}")
            for j in range(t):
                if self._basis_mul(i, j) != self._basis_mul(j, i):
                    raise GreenbergError(f"{self.name}: not commutative on ({i},{j})")
                for k in range(t):
                    lhs = self.mul_coords(self._basis_mul(i, j), basis[k])
                    rhs = self.mul_coords(basis[i], self._basis_mul(j, k))
                    if lhs != rhs:
                        raise GreenbergError(f"{self.name}: not associative on ({i},{j},{k})")

    # -- encoding ------------------------------------------------------------
    def encode(self, coords):
        v = 0
        for c in reversed(coords):
            v = v * self.base.q + c
        return v

    def decode(self, a):
        q = self.base.q
        out = []
        for _ in range(self.dim):
            a, r = divmod(a, q)
            out.append(r)
        return tuple(out)

    def elements(self):
        """All elements as coordinate tuples, colexicographic order."""
        return [self.decode(a) for a in range(self.size)]

    def fmt(self, a):
        coords = self.decode(a)
        if self.dim == 1:
            return self.base.fmt(coords[0])
        return "(" + ",".join(self.base.fmt(c) for c in coords) + ")"

    def scalar(self, c):
        """The image of a base-field element ``c`` as a coordinate tuple."""
        F = self.base
        return tuple(F.mul(c, u) for u in self.unit)

    @cached_property
    def ring(self):
        n = self.size
        q = self.base.q
        coords = np.array([self.decode(a) for a in range(n)], dtype=np.int64).reshape(n, self.dim)
        F = self.base
        fadd = np.array([[F.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        fmul = np.array([[F.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        fneg = np.array([F.neg(a) for a in range(q)], dtype=np.int64)
        weights = q ** np.arange(self.dim, dtype=np.int64)
        xa = coords[:, None, :]
        xb = coords[None, :, :]
        add = (fadd[xa, xb] * weights).sum(axis=-1)
        prod = np.zeros((n, n, self.dim), dtype=np.int64)
        for i in range(self.dim):
            for j in range(self.dim):
                s = fmul[coords[:, i][:, None], coords[:, j][None, :]]
                row = self.table[i][j]
                for c in range(self.dim):
                    if row[c]:
                        prod[:, :, c] = fadd[prod[:, :, c], fmul[s, row[c]]]
        mul = (prod * weights).sum(axis=-1)
        neg = (fneg[coords] * weights).sum(axis=-1)
        ring = FiniteRing(add, mul, neg, self.encode(self.unit), name=self.name, labels=self.fmt)
        ring.register_field(F, [self.encode(self.scalar(c)) for c in range(q)])
        ring.algebra = self
        return ring

    def frobenius_image(self):
        """The set of ``p``-th powers (as element indices)."""
        R = self.ring
        return sorted({R.pow(a, self.base.p) for a in range(self.size)})

    def __repr__(self):
        return f"FiniteAlgebra({self.name}, {self.size} elements)"


def alg_build(kind, *params, size_guard=DEFAULT_SIZE_GUARD):
    """Build a test algebra.

    ``alg_build("field", F)``, ``alg_build("dual_numbers", F, m)`` for
    ``F[eps]/(eps^m)``, ``alg_build("extension", F, K)`` for a field
    ``K`` containing ``F`` (power basis of ``K`` over ``F``) and
    ``alg_build("product", A, B)``.
    """
    if kind == "field":
        (F,) = params
        return FiniteAlgebra(F, [[(1,)]], (1,), name=repr(F), size_guard=size_guard)
    if kind == "dual_numbers":
        F, m = params
        if m < 2:
            raise GreenbergError("dual_numbers needs m >= 2")
        table = [
            [tuple(1 if (i + j < m and c == i + j) else 0 for c in range(m)) for j in range(m)]
            for i in range(m)
        ]
        name = f"{F!r}[e]/(e^{m})"
        return FiniteAlgebra(F, table, tuple(1 if c == 0 else 0 for c in range(m)), name=name, size_guard=size_guard)
    if kind == "extension":
        F, K = params
        return extension_algebra(F, K, size_guard=size_guard)
    if kind == "product":
        A, B = params
        if A.base != B.base:
            raise BaseMismatch(f"product of algebras over {A.base!r} and {B.base!r}")
        s, t = A.dim, B.dim
        n = s + t
        zero = (0,) * n
        table = [[zero] * n for _ in range(n)]
        for i in range(s):
            for j in range(s):
                table[i][j] = tuple(A.table[i][j]) + (0,) * t
        for i in range(t):
            for j in range(t):
                table[s + i][s + j] = (0,) * s + tuple(B.table[i][j])
        return FiniteAlgebra(A.base, table, A.unit + B.unit, name=f"{A.name}x{B.name}", size_guard=size_guard)
    raise GreenbergError(f"unknown algebra kind {kind!r}")


def extension_algebra(F, K, size_guard=DEFAULT_SIZE_GUARD):
    """``K`` as an ``F``-algebra with basis ``1, g, ..., g^(t-1)``.

    ``g`` is a generator of ``K`` over ``F`` found by search; the result has
    ``.basis`` (elements of ``K``) and ``.to_field`` mapping indices to ``K``.
    """
    if K.p != F.p or K.d % F.d:
        raise BaseMismatch(f"{K!r} does not contain {F!r}")
    emb = F.embedding_into(K)
    t = K.d // F.d
    for g in K.elements():
        basis = [K.pow(g, i) for i in range(t)]
        span = {}
        for coords in itertools.product(range(F.q), repeat=t):
            v = 0
            for c, b in zip(coords, basis):
                v = K.add(v, K.mul(emb[c], b))
            span.setdefault(v, coords)
        if len(span) == K.q:
            break
    else:  # pragma: no cover - a primitive element always exists
        raise GreenbergError("no generator found")
    table = [[span[K.mul(basis[i], basis[j])] for j in range(t)] for i in range(t)]
    unit = span[1]
    A = FiniteAlgebra(F, table, unit, name=f"{K!r}/{F!r}", size_guard=size_guard)
    A.basis = tuple(basis)
    to_field = [0] * A.size
    for v, coords in span.items():
        to_field[A.encode(coords)] = v
    A.to_field = tuple(to_field)
    return A


def alg_extend_scalars(A, field, size_guard=DEFAULT_SIZE_GUARD):
    """``A (x)_k k'`` as a ``k'``-algebra (same basis, embedded constants).

    The result also carries the original base field as a registered lift, so
    polynomials over ``k`` evaluate in it directly.
    """
    emb = A.base.embedding_into(field)
    if emb is None:
        raise BaseMismatch(f"{A.base!r} does not embed into {field!r}")
    table = [[tuple(emb[c] for c in A.table[i][j]) for j in range(A.dim)] for i in range(A.dim)]
    out = FiniteAlgebra(field, table, tuple(emb[c] for c in A.unit), name=f"{A.name}(x){field!r}", size_guard=size_guard)
    out.ring.register_field(A.base, [out.ring.field_lifts[field.key][emb[c]] for c in A.base.elements()])
    return out


def alg_enumerate(A, size_guard=DEFAULT_SIZE_GUARD):
    if A.size > size_guard:
        raise SizeGuard(f"{A.size} elements > guard {size_guard}", size=A.size)
    return A.elements()
