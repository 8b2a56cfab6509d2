"""Sparse multivariate polynomials with exact coefficients.

A monomial is packed into one Python int, 16 bits per variable, variable
``j`` of the (naturally sorted) variable tuple occupying bits ``16j..16j+15``.
Multiplying monomials is then integer addition, which keeps the symbolic
Witt-law construction and the coordinate expansions cheap.
"""

from __future__ import annotations

import re

from .errors import (
    CoefficientLiftUndefined,
    GreenbergError,
    ExponentOverflow,
    MissingVariable,
    NotDivisible,
    ParseError,
    RingMismatch,
)
from .fields import ZZ, Domain, FiniteField, IntegersMod

BITS = 16
MASK = (1 << BITS) - 1
MAX_EXP = MASK

_NUM_RE = re.compile(r"(\d+)")


def natural_key(name):
    return tuple((1, int(s)) if s.isdigit() else (0, s) for s in _NUM_RE.split(name) if s)


def _sorted_vars(names):
    return tuple(sorted(set(names), key=natural_key))


def _unpack(m, n):
    out = []
    for _ in range(n):
        out.append(m & MASK)
        m >>= BITS
    return tuple(out)


def _pack(exps):
    m = 0
    for e in reversed(exps):
        if e < 0 or e > MAX_EXP:
            raise ExponentOverflow(f"exponent {e} outside [0, {MAX_EXP}]")
        m = (m << BITS) | e
    return m


def _max_field(m):
    best = 0
    while m:
        f = m & MASK
        if f > best:
            best = f
        m >>= BITS
    return best


def _degree(m):
    d = 0
    while m:
        d += m & MASK
        m >>= BITS
    return d


def _is_prime_mod(domain):
    mod = domain.mod
    if not mod:
        return False
    if isinstance(domain, FiniteField):
        return True
    if isinstance(domain, IntegersMod):
        return domain.prime == mod
    return False


class Poly:
    """Immutable sparse polynomial over a :class:`~greenberg.fields.Domain`."""

    __slots__ = ("domain", "vars", "terms", "_maxexp")

    def __init__(self, domain, vars, terms):
        self.domain = domain
        self.vars = vars
        self.terms = terms
        self._maxexp = None

    # -- construction ------------------------------------------------------
    @classmethod
    def from_dict(cls, domain, vars, data):
        """Build from ``{exponent tuple: coefficient}`` over ``vars``."""
        vars = tuple(vars)
        order = _sorted_vars(vars)
        if len(order) != len(vars):
            raise RingMismatch(f"duplicate variable names in {vars}")
        pos = [order.index(v) for v in vars]
        terms = {}
        zero = domain.zero
        for exps, c in data.items():
            if len(exps) != len(vars):
                raise RingMismatch(f"exponent tuple {exps} has wrong arity for {vars}")
            placed = [0] * len(order)
            for i, e in enumerate(exps):
                placed[pos[i]] = e
            m = _pack(placed)
            if m in terms:
                c = domain.add(terms[m], c)
            if domain.mod:
                c %= domain.mod
            terms[m] = c
        return cls(domain, order, {m: c for m, c in terms.items() if c != zero})

    @classmethod
    def variable(cls, name, domain=ZZ, vars=()):
        vars = _sorted_vars(tuple(vars) + (name,))
        return cls(domain, vars, {1 << (BITS * vars.index(name)): domain.one})

    @classmethod
    def constant(cls, c, domain=ZZ, vars=()):
        """Constant polynomial; ``c`` is a domain element (ints reduced for ``Z/n``)."""
        vars = _sorted_vars(vars)
        if domain.mod:
            c %= domain.mod
        if domain.is_zero(c):
            return cls(domain, vars, {})
        return cls(domain, vars, {0: c})

    @classmethod
    def zero(cls, domain=ZZ, vars=()):
        return cls(domain, _sorted_vars(vars), {})

    # -- inspection --------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """``(exponent tuple, coefficient)`` pairs over ``self.vars``."""
        n = len(self.vars)
        return [(_unpack(m, n), c) for m, c in self.terms.items()]

    def as_dict(self):
        return dict(self.items())

    def maxexp(self):
        if self._maxexp is None:
            self._maxexp = max((_max_field(m) for m in self.terms), default=0)
        return self._maxexp

    def degree(self):
        return max((_degree(m) for m in self.terms), default=-1)

    def support(self):
        """Names of variables that actually occur."""
        used = 0
        for m in self.terms:
            used |= m
        out = []
        for i, v in enumerate(self.vars):
            if (used >> (BITS * i)) & MASK:
                out.append(v)
        return out

    def constant_term(self):
        return self.terms.get(0, self.domain.zero)

    def coefficient(self, exps_by_name):
        idx = {v: i for i, v in enumerate(self.vars)}
        e = [0] * len(self.vars)
        for name, k in exps_by_name.items():
            if name not in idx:
                if k:
                    return self.domain.zero
                continue
            e[idx[name]] = k
        return self.terms.get(_pack(e), self.domain.zero)

    # -- alignment ---------------------------------------------------------
    def with_vars(self, vars):
        """Re-express over a superset ``vars`` (naturally sorted)."""
        vars = _sorted_vars(vars)
        if vars == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vars)}
        missing = [v for v in self.vars if v not in pos]
        if missing and any(v in self.support() for v in missing):
            raise RingMismatch(f"variables {missing} not in target list")
        shifts = [(i, pos.get(v)) for i, v in enumerate(self.vars)]
        terms = {}
        for m, c in self.terms.items():
            nm = 0
            for i, j in shifts:
                e = (m >> (BITS * i)) & MASK
                if e:
                    nm |= e << (BITS * j)
            terms[nm] = c
        return Poly(self.domain, vars, terms)

    def _check_domain(self, other):
        if self.domain != other.domain:
            raise RingMismatch(f"coefficient rings differ: {self.domain!r} vs {other.domain!r}")

    def _align(self, other):
        self._check_domain(other)
        if self.vars == other.vars:
            return self, other
        vars = _sorted_vars(self.vars + other.vars)
        return self.with_vars(vars), other.with_vars(vars)

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.constant(self.domain.from_int(other), self.domain, self.vars)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        a, b = self._align(self._coerce(other))
        dom = a.domain
        terms = dict(a.terms)
        mod = dom.mod
        zero = dom.zero
        if mod is not None:
            for m, c in b.terms.items():
                v = terms.get(m, 0) + c
                if mod:
                    v %= mod
                if v:
                    terms[m] = v
                else:
                    terms.pop(m, None)
        else:
            for m, c in b.terms.items():
                if m in terms:
                    v = dom.add(terms[m], c)
                    if v == zero:
                        del terms[m]
                    else:
                        terms[m] = v
                else:
                    terms[m] = c
        return Poly(dom, a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        dom = self.domain
        if dom.mod == 0:
            return Poly(dom, self.vars, {m: -c for m, c in self.terms.items()})
        if dom.mod:
            mod = dom.mod
            return Poly(dom, self.vars, {m: (-c) % mod for m, c in self.terms.items()})
        return Poly(dom, self.vars, {m: dom.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(self.domain.from_int(other))
        a, b = self._align(self._coerce(other))
        if not a.terms or not b.terms:
            return Poly(a.domain, a.vars, {})
        if a.maxexp() + b.maxexp() > MAX_EXP:
            raise ExponentOverflow("product exponent exceeds 2^16 - 1")
        dom = a.domain
        mod = dom.mod
        out = {}
        get = out.get
        if len(a.terms) > len(b.terms):
            a, b = b, a
        bt = list(b.terms.items())
        if mod is not None:
            for m1, c1 in a.terms.items():
                for m2, c2 in bt:
                    m = m1 + m2
                    out[m] = get(m, 0) + c1 * c2
            if mod:
                out = {m: c % mod for m, c in out.items()}
            out = {m: c for m, c in out.items() if c}
        else:
            add, mul, zero = dom.add, dom.mul, dom.zero
            for m1, c1 in a.terms.items():
                for m2, c2 in bt:
                    m = m1 + m2
                    v = mul(c1, c2)
                    out[m] = add(out[m], v) if m in out else v
            out = {m: c for m, c in out.items() if c != zero}
        return Poly(dom, a.vars, out)

    __rmul__ = __mul__

    def scale(self, c):
        dom = self.domain
        if dom.mod is not None:
            mod = dom.mod
            out = {m: v * c for m, v in self.terms.items()}
            if mod:
                out = {m: v % mod for m, v in out.items()}
            return Poly(dom, self.vars, {m: v for m, v in out.items() if v})
        out = {m: dom.mul(v, c) for m, v in self.terms.items()}
        return Poly(dom, self.vars, {m: v for m, v in out.items() if v != dom.zero})

    def _frobenius_power(self, p):
        """``self ** p`` in characteristic ``p`` (freshman's dream)."""
        if self.maxexp() * p > MAX_EXP:
            raise ExponentOverflow("power exponent exceeds 2^16 - 1")
        dom = self.domain
        if isinstance(dom, FiniteField) and dom.d > 1:
            return Poly(dom, self.vars, {m * p: dom.frob(c) for m, c in self.terms.items()})
        return Poly(dom, self.vars, {m * p: c for m, c in self.terms.items()})

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative int")
        if e == 0:
            return Poly.constant(self.domain.one, self.domain, self.vars)
        if self.maxexp() * e > MAX_EXP:
            raise ExponentOverflow("power exponent exceeds 2^16 - 1")
        if len(self.terms) == 1:
            ((m, c),) = self.terms.items()
            dom = self.domain
            if dom.mod == 0:
                cc = c**e
            elif dom.mod:
                cc = pow(c, e, dom.mod)
            else:
                cc = dom.one
                for _ in range(e):
                    cc = dom.mul(cc, c)
            return Poly(dom, self.vars, {m * e: cc} if cc != dom.zero else {})
        if _is_prime_mod(self.domain):
            p = self.domain.char
            if e % p == 0:
                return (self**(e // p))._frobenius_power(p)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.constant(self.domain.from_int(other), self.domain, self.vars)
        if not isinstance(other, Poly):
            return NotImplemented
        if self.domain != other.domain:
            return False
        a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self):
        return hash(self.to_text())

    # -- exact division ----------------------------------------------------
    def div_exact_int(self, c):
        """Divide every coefficient by the integer ``c``; never truncates."""
        if self.domain.mod != 0:
            raise RingMismatch("exact integer division needs integer coefficients")
        if c == 0:
            raise ZeroDivisionError("division by zero")
        out = {}
        for m, v in self.terms.items():
            qt, r = divmod(v, c)
            if r:
                raise NotDivisible(f"coefficient {v} not divisible by {c}")
            out[m] = qt
        return Poly(ZZ, self.vars, out)

    def map_coeffs(self, target):
        """Reduce integer (or prime-field) coefficients into ``target``."""
        src = self.domain
        if src.mod is None:
            raise RingMismatch(f"cannot map coefficients of {src!r}")
        out = {}
        for m, c in self.terms.items():
            v = target.from_int(c)
            if not target.is_zero(v):
                out[m] = v
        return Poly(target, self.vars, out)

    # -- calculus / renaming -----------------------------------------------
    def diff(self, name):
        if name not in self.vars:
            return Poly(self.domain, self.vars, {})
        i = self.vars.index(name)
        shift = BITS * i
        unit = 1 << shift
        dom = self.domain
        out = {}
        for m, c in self.terms.items():
            e = (m >> shift) & MASK
            if e:
                v = dom.mul(c, dom.from_int(e)) if dom.mod is None else c * e
                if dom.mod:
                    v %= dom.mod
                if v != dom.zero:
                    out[m - unit] = v
        return Poly(dom, self.vars, out)

    def rename(self, mapping):
        names = [mapping.get(v, v) for v in self.vars]
        data = {}
        for exps, c in self.items():
            data[exps] = c
        return Poly.from_dict(self.domain, names, data)

    # -- evaluation --------------------------------------------------------
    def evaluate(self, assignment, ops):
        """Value under ``assignment`` (name -> carrier element) in ``ops``.

        ``ops`` supplies ``zero, one, add, mul`` and ``coeff(c, domain)``;
        finite rings and :class:`PolyOps` both qualify.
        """
        n = len(self.vars)
        used = self.support()
        for v in used:
            if v not in assignment:
                raise MissingVariable(f"no value for variable {v!r}")
        values = [assignment.get(v) for v in self.vars]
        cache = {}

        def power(i, e):
            key = (i, e)
            r = cache.get(key)
            if r is None:
                if e == 1:
                    r = values[i]
                elif e % 2 == 0:
                    h = power(i, e // 2)
                    r = ops.mul(h, h)
                else:
                    r = ops.mul(power(i, e - 1), values[i])
                cache[key] = r
            return r

        acc = ops.zero
        dom = self.domain
        for m, c in self.terms.items():
            t = ops.coeff(c, dom)
            i = 0
            while m:
                e = m & MASK
                if e:
                    t = ops.mul(t, power(i, e))
                m >>= BITS
                i += 1
            acc = ops.add(acc, t)
        return acc

    def substitute(self, mapping):
        """Compose: replace variables by polynomials (others kept)."""
        if not mapping:
            return self
        sample = next(iter(mapping.values()))
        for g in mapping.values():
            if g.domain != self.domain:
                raise RingMismatch("substituted polynomials must share the coefficient ring")
        vars = set(sample.vars)
        for g in mapping.values():
            vars.update(g.vars)
        keep = [v for v in self.vars if v not in mapping]
        vars.update(keep)
        ops = PolyOps(self.domain, vars)
        assignment = {v: ops.var(v) for v in keep}
        for v, g in mapping.items():
            assignment[v] = g.with_vars(ops.vars)
        return self.evaluate(assignment, ops)

    # -- text --------------------------------------------------------------
    def _sorted_terms(self):
        n = len(self.vars)
        items = [(_unpack(m, n), c) for m, c in self.terms.items()]
        items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return items

    def to_text(self):
        """Canonical text: graded-lex descending, e.g. ``x0*y0 + x1 + y1``."""
        if not self.terms:
            return "0"
        dom = self.domain
        parts = []
        for exps, c in self._sorted_terms():
            neg = False
            if dom.mod == 0 and c < 0:
                neg, c = True, -c
            factors = []
            for v, e in zip(self.vars, exps):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            cs = dom.fmt(c)
            if c == dom.one and factors:
                body = "*".join(factors)
            else:
                if (" " in cs or "+" in cs) and not cs.startswith("("):
                    cs = f"({cs})"
                body = "*".join([cs] + factors)
            parts.append(("-" if neg else "+", body))
        text = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    __str__ = to_text

    def __repr__(self):
        return f"Poly({self.to_text()!r}, {self.domain!r})"

    @classmethod
    def parse(cls, text, domain=ZZ, vars=()):
        return parse_poly(text, domain, vars)


class PolyOps:
    """Ring-operation interface whose carrier is :class:`Poly` over ``domain``."""

    def __init__(self, domain, vars=()):
        self.domain = domain
        self.vars = _sorted_vars(vars)
        self.zero = Poly(domain, self.vars, {})
        self.one = Poly.constant(domain.one, domain, self.vars)

    def var(self, name):
        return Poly.variable(name, self.domain, self.vars)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def coeff(self, c, domain):
        if domain == self.domain:
            return Poly(self.domain, self.vars, {0: c} if not self.domain.is_zero(c) else {})
        mod = domain.mod
        if mod == 0 or (mod and self.domain.char and mod % self.domain.char == 0):
            return Poly.constant(self.domain.from_int(c), self.domain, self.vars)
        lifter = getattr(domain, "lift_into", None)
        if lifter is not None:
            return lifter(c, self)
        raise CoefficientLiftUndefined(f"no image of {domain!r} in polynomials over {self.domain!r}")

    def const(self, c):
        return Poly.constant(c, self.domain, self.vars)


# -- arithmetic entry points -------------------------------------------------


def poly_arith(op, a, b):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a**b
    raise ValueError(f"unknown op {op!r}")


def poly_div_exact_int(a, c):
    return a.div_exact_int(c)


def poly_eval(a, assignment, ops):
    return a.evaluate(assignment, ops)


def poly_substitute(a, mapping):
    return a.substitute(mapping)


def poly_map_coeffs(a, target):
    return a.map_coeffs(target)


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\[[0-9,\s]*\])|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, bracket, other = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("num", int(num), start))
        elif name is not None:
            tokens.append(("name", name, start))
        elif bracket is not None:
            coords = [int(s) for s in bracket[1:-1].replace(" ", "").split(",") if s]
            tokens.append(("coords", coords, start))
        elif other is not None and not other.isspace():
            tokens.append(("op", other, start))
        pos = m.end()
    return tokens


def parse_poly(text, domain=ZZ, vars=()):
    """Parse the canonical text form (``+ - * ^``, parentheses, ``[c0,c1]``)."""
    tokens = _tokenize(text)
    pos = [0]
    names = set(vars)
    for kind, val, _ in tokens:
        if kind == "name":
            names.add(val)
    ops = PolyOps(domain, names)

    def err(msg):
        at = tokens[pos[0]][2] if pos[0] < len(tokens) else len(text)
        raise ParseError(msg, line=1, column=at + 1)

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else (None, None, None)

    def take():
        tok = peek()
        pos[0] += 1
        return tok

    def atom():
        kind, val, _ = take()
        if kind == "num":
            return ops.const(domain.from_int(val))
        if kind == "name":
            return ops.var(val)
        if kind == "coords":
            from_coords = getattr(domain, "from_coords", None)
            if from_coords is None:
                err("coordinate literal needs a finite-field or Greenberg-algebra domain")
            try:
                return ops.const(from_coords(val))
            except (ValueError, GreenbergError) as exc:
                err(str(exc))
        if kind == "op" and val == "(":
            v = expr()
            if take()[1] != ")":
                err("expected ')'")
            return v
        if kind == "op" and val == "-":
            return -factor()
        pos[0] -= 1
        err("unexpected token")

    def factor():
        base = atom()
        if peek()[1] == "^":
            take()
            kind, val, _ = take()
            if kind != "num":
                err("exponent must be an integer")
            return base**val
        return base

    def term():
        v = factor()
        while peek()[1] == "*":
            take()
            v = v * factor()
        return v

    def expr():
        if peek()[1] == "-":
            take()
            v = -term()
        else:
            v = term()
        while peek()[1] in ("+", "-"):
            op = take()[1]
            t = term()
            v = v + t if op == "+" else v - t
        return v

    if not tokens:
        err("empty polynomial")
    result = expr()
    if pos[0] != len(tokens):
        err("trailing input")
    if vars:
        result = result.with_vars(_sorted_vars(tuple(vars) + tuple(result.vars)))
    return result


__all__ = [
    "Poly",
    "PolyOps",
    "Domain",
    "natural_key",
    "parse_poly",
    "poly_arith",
    "poly_div_exact_int",
    "poly_eval",
    "poly_substitute",
    "poly_map_coeffs",
]
