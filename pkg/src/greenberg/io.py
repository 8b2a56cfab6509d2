"""Structured-text (JSON) input files and canonical dumps.

Formats
-------
field      ``{"p": 2, "modulus": [1, 1, 1]}``; ``[1]`` (or no modulus) is ``F_p``.
algebra    ``{"kind": "field", "base": FIELD}``,
           ``{"kind": "dual_numbers", "base": FIELD, "m": 2}``,
           ``{"kind": "extension", "base": FIELD, "field": FIELD}``,
           ``{"kind": "product", "left": ALGEBRA, "right": ALGEBRA}``.
base       ``{"case": "mixed", "p": 2, "residue": {"modulus": [1]}, "eisenstein": [0, -2]}``
           (``eisenstein`` lists ``a_1..a_e`` of ``t^e + a_1 t^(e-1) + ... + a_e``;
           omit it for ``W(k)``) or ``{"case": "equal", "p": 3, "residue": {...}}``.
ring       ``{"level": N, "base": BASE}`` for ``R_N`` or ``{"field": FIELD}``.
scheme     ``{"ring": RING, "vars": [...], "gens": [GEN, ...]}`` where ``GEN`` is
           either a string such as ``"y^2 - pi*x"`` or a list of terms
           ``{"c": [ITEM, ...], "e": [exponents], "sign": -1}``; ``sign`` is
           optional and the coefficient is the sum of its items:
           ``["int", m]``, ``["pi", j]`` or ``["pi", j, m]`` for ``m * pi^j``,
           and ``["coords", [...]]`` for explicit coordinates (an element of
           ``R_N`` given by its ``N+1`` coordinates, or of ``F_q`` by its
           coordinates over ``F_p``).
extension  ``{"type": "mixed", "p": 2, "residue_top": {"modulus": [1, 1, 1]},
           "eisenstein": [0, -2], "n": 1}``, ``{"type": "field", "base": FIELD,
           "top": FIELD}`` or ``{"type": "equal", "p": 2, "residue": {...},
           "M": 0, "e": 2}``.
morphism   ``{"source": SCHEME, "target": SCHEME, "images": {"x": GEN, ...}}``.
group      ``{"scheme": SCHEME, "identity": [...]}``; identity entries are
           integers or coordinate lists.

Unknown keys are rejected with the line and column of the key.
"""

from __future__ import annotations

import json
import re

from .algebra import BaseRingSpec, GreenbergAlgebra, ga_build, ga_const
from .errors import GreenbergError, ParseError
from .fields import FiniteField, alg_build
from .poly import Poly
from .schemes import AffinePresentation, GroupSchemeSpec, MorphismPresentation, poly_over


class Source:
    """Raw text of an input file, kept for error positions."""

    def __init__(self, text, name="<input>"):
        self.text = text
        self.name = name

    def position(self, needle):
        i = self.text.find(needle)
        if i < 0:
            return None, None
        line = self.text.count("\n", 0, i) + 1
        col = i - (self.text.rfind("\n", 0, i) + 1) + 1
        return line, col

    def error(self, message, key=None):
        line, col = self.position(json.dumps(key)) if key is not None else (None, None)
        return ParseError(f"{self.name}: {message}", line, col)


def load(text, name="<input>"):
    """``(data, source)`` from JSON text; syntax errors carry line/column."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{name}: {exc.msg}", exc.lineno, exc.colno) from None
    return data, Source(text, name)


def load_file(path):
    with open(path, encoding="utf-8") as fh:
        return load(fh.read(), str(path))


def _obj(data, src, what, required=(), optional=()):
    if not isinstance(data, dict):
        raise src.error(f"{what} must be an object")
    for key in data:
        if key not in required and key not in optional:
            raise src.error(f"unknown key {key!r} in {what}", key)
    for key in required:
        if key not in data:
            raise src.error(f"{what} needs key {key!r}")
    return data


def _int(value, src, what):
    if not isinstance(value, int) or isinstance(value, bool):
        raise src.error(f"{what} must be an integer, got {value!r}")
    return value


def _int_list(value, src, what):
    if not isinstance(value, list):
        raise src.error(f"{what} must be a list of integers")
    return [_int(v, src, what) for v in value]


def _wrap(src, fn, *args):
    """Re-raise validation errors from constructors as parse errors."""
    try:
        return fn(*args)
    except ParseError:
        raise
    except (GreenbergError, ValueError) as exc:
        raise src.error(str(exc)) from None


# -- fields and algebras -----------------------------------------------------------


def parse_field(data, src, p=None):
    d = _obj(data, src, "field", optional=("p", "modulus"))
    q = d.get("p", p)
    if q is None:
        raise src.error("field needs key 'p'")
    q = _int(q, src, "p")
    if p is not None and q != p:
        raise src.error(f"field characteristic {q} differs from {p}", "p")
    modulus = _int_list(d.get("modulus", [1]), src, "modulus")
    return _wrap(src, FiniteField, q, tuple(modulus))


def dump_field(F):
    return F.to_config()


def parse_algebra(data, src):
    d = _obj(data, src, "algebra", required=("kind",), optional=("base", "m", "field", "left", "right"))
    kind = d["kind"]
    if kind == "field":
        _obj(d, src, "field algebra", required=("kind", "base"))
        return _wrap(src, alg_build, "field", parse_field(d["base"], src))
    if kind == "dual_numbers":
        _obj(d, src, "dual-number algebra", required=("kind", "base"), optional=("m",))
        return _wrap(src, alg_build, "dual_numbers", parse_field(d["base"], src), _int(d.get("m", 2), src, "m"))
    if kind == "extension":
        _obj(d, src, "extension algebra", required=("kind", "base", "field"))
        return _wrap(src, alg_build, "extension", parse_field(d["base"], src), parse_field(d["field"], src))
    if kind == "product":
        _obj(d, src, "product algebra", required=("kind", "left", "right"))
        return _wrap(src, alg_build, "product", parse_algebra(d["left"], src), parse_algebra(d["right"], src))
    raise src.error(f"unknown algebra kind {kind!r}", "kind")


# -- bases and rings ----------------------------------------------------------------


def parse_base(data, src):
    d = _obj(data, src, "base", required=("case", "p"), optional=("residue", "eisenstein"))
    p = _int(d["p"], src, "p")
    residue = parse_field(d.get("residue", {}), src, p)
    eisenstein = tuple(_int_list(d.get("eisenstein", []), src, "eisenstein"))
    if d["case"] not in ("equal", "mixed"):
        raise src.error(f"case must be 'equal' or 'mixed', not {d['case']!r}", "case")
    return _wrap(src, BaseRingSpec, d["case"], residue, eisenstein)


def parse_ring(data, src):
    if isinstance(data, dict) and "field" in data:
        d = _obj(data, src, "ring", required=("field",))
        return parse_field(d["field"], src)
    d = _obj(data, src, "ring", required=("level", "base"))
    level = _int(d["level"], src, "level")
    base = parse_base(d["base"], src)
    return _wrap(src, ga_build, base, level)


def dump_ring(ring):
    if isinstance(ring, GreenbergAlgebra):
        return {"level": ring.level, "base": ring.base.to_config()}
    return {"field": dump_field(ring)}


# -- coefficients and polynomials ------------------------------------------------------


def _coeff(items, ring, src):
    if not isinstance(items, list):
        raise src.error("coefficient 'c' must be a list of items")
    total = ring.zero
    for item in items:
        if not isinstance(item, list) or not item or not isinstance(item[0], str):
            raise src.error(f"bad coefficient item {item!r}")
        tag, args = item[0], item[1:]
        if tag == "int" and len(args) == 1:
            value = ring.from_int(_int(args[0], src, "int coefficient"))
        elif tag == "pi" and len(args) in (1, 2):
            if not isinstance(ring, GreenbergAlgebra):
                raise src.error("pi coefficients need a ring R_N")
            j = _int(args[0], src, "pi exponent")
            m = _int(args[1], src, "pi multiplier") if len(args) == 2 else 1
            value = _wrap(src, ga_const, [0] * j + [m], ring) if j <= ring.level else ring.zero
        elif tag == "coords" and len(args) == 1:
            coords = _int_list(args[0], src, "coords")
            value = _wrap(src, ring.from_coords, coords)
        else:
            raise src.error(f"unknown coefficient item {item!r}")
        total = ring.add(total, value)
    return total


def _generator(gen, ring, vars, src):
    if isinstance(gen, str):
        return _wrap(src, poly_over, ring, gen, vars)
    if not isinstance(gen, list):
        raise src.error("a generator is a string or a list of terms")
    data = {}
    for term in gen:
        t = _obj(term, src, "term", required=("c", "e"), optional=("sign",))
        exps = tuple(_int_list(t["e"], src, "exponents"))
        if len(exps) != len(vars) or min(exps, default=0) < 0:
            raise src.error(f"exponent vector {list(exps)} does not fit variables {list(vars)}")
        c = _coeff(t["c"], ring, src)
        sign = _int(t.get("sign", 1), src, "sign")
        if sign not in (1, -1):
            raise src.error("sign must be 1 or -1")
        if sign < 0:
            c = ring.neg(c)
        data[exps] = ring.add(data[exps], c) if exps in data else c
    return Poly.from_dict(ring, tuple(vars), {e: c for e, c in data.items() if not ring.is_zero(c)})


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def parse_scheme(data, src, ring=None):
    d = _obj(data, src, "scheme", required=("vars",), optional=("ring", "gens"))
    if "ring" in d:
        ring = parse_ring(d["ring"], src)
    elif ring is None:
        raise src.error("scheme needs key 'ring'")
    vars = d["vars"]
    if not isinstance(vars, list) or not all(isinstance(v, str) and _NAME.match(v) for v in vars):
        raise src.error("vars must be a list of identifiers", "vars")
    if "pi" in vars:
        raise src.error("'pi' is reserved for the uniformiser", "vars")
    gens = d.get("gens", [])
    if not isinstance(gens, list):
        raise src.error("gens must be a list", "gens")
    polys = tuple(_generator(g, ring, vars, src) for g in gens)
    return _wrap(src, AffinePresentation, ring, tuple(vars), polys)


def _dump_coeff(c, ring):
    if isinstance(ring, GreenbergAlgebra):
        return [["coords", list(c)]]
    if ring.d == 1:
        return [["int", int(c)]]
    return [["coords", list(ring.to_coords(c))]]


def dump_poly(f, ring):
    terms = []
    for exps, c in sorted(f.items(), reverse=True):
        terms.append({"c": _dump_coeff(c, ring), "e": list(exps)})
    return terms


def dump_scheme(Z):
    """A scheme file (parses back to the same presentation)."""
    return {"ring": dump_ring(Z.ring), "vars": list(Z.vars), "gens": [dump_poly(g, Z.ring) for g in Z.gens]}


def scheme_text(Z):
    return {"ring": repr(Z.ring), "vars": list(Z.vars), "gens": Z.gens_text()}


def parse_morphism(data, src):
    d = _obj(data, src, "morphism", required=("source", "target", "images"))
    source = parse_scheme(d["source"], src)
    target = parse_scheme(d["target"], src, source.ring)
    images = d["images"]
    if not isinstance(images, dict):
        raise src.error("images must be an object", "images")
    unknown = [v for v in images if v not in target.vars]
    if unknown:
        raise src.error(f"images for undeclared target variables {unknown}", unknown[0])
    polys = {v: _generator(g, source.ring, source.vars, src) for v, g in images.items()}
    return _wrap(src, MorphismPresentation, source, target, polys)


def dump_morphism(f):
    return {
        "source": dump_scheme(f.source),
        "target": dump_scheme(f.target),
        "images": {v: dump_poly(g, f.source.ring) for v, g in f.images.items()},
    }


def parse_group(data, src):
    d = _obj(data, src, "group", required=("scheme", "identity"))
    Z = parse_scheme(d["scheme"], src)
    ident = d["identity"]
    if not isinstance(ident, list):
        raise src.error("identity must be a list", "identity")
    return _wrap(src, GroupSchemeSpec, Z, tuple(ident))


def parse_extension(data, src):
    from . import weil

    d = _obj(data, src, "extension", required=("type",), optional=("p", "residue", "residue_top", "eisenstein", "n", "base", "top", "M", "e"))
    kind = d["type"]
    if kind == "mixed":
        _obj(d, src, "mixed extension", required=("type", "p", "n"), optional=("residue_top", "eisenstein"))
        p = _int(d["p"], src, "p")
        top = parse_field(d.get("residue_top", {}), src, p)
        f = tuple(_int_list(d.get("eisenstein", []), src, "eisenstein"))
        return _wrap(src, weil.ext_build_mixed, p, top, f, _int(d["n"], src, "n"))
    if kind == "field":
        _obj(d, src, "field extension", required=("type", "base", "top"))
        return _wrap(src, weil.ext_build_field, parse_field(d["base"], src), parse_field(d["top"], src))
    if kind == "equal":
        _obj(d, src, "equal extension", required=("type", "p", "e"), optional=("residue", "M"))
        p = _int(d["p"], src, "p")
        k = parse_field(d.get("residue", {}), src, p)
        return _wrap(src, weil.ext_build_equal, k, _int(d.get("M", 0), src, "M"), _int(d["e"], src, "e"))
    raise src.error(f"unknown extension type {kind!r}", "type")


# -- structure polynomials ----------------------------------------------------------------


def structure_polys_text(ga):
    """Canonical dump of the laws of ``R_N``: one labelled block per operation."""
    lines = [f"# {ga!r}", f"# base {json.dumps(ga.base.to_config(), sort_keys=True)}", f"# level {ga.level}"]
    for label, polys in (("add", ga.add_polys), ("mul", ga.mul_polys), ("neg", ga.neg_polys)):
        lines.append(f"[{label}]")
        lines.extend(f"{label}[{l}] = {f.to_text()}" for l, f in enumerate(polys))
    lines.append("[one]")
    lines.append("one = " + " ".join(str(c) for c in ga.one))
    lines.append("[pi]")
    lines.append("pi = " + " ".join(str(c) for c in ga.pi))
    return "\n".join(lines) + "\n"


def structure_block(text, label):
    """The lines of one block of a :func:`structure_polys_text` dump."""
    out, inside = [], False
    for line in text.splitlines():
        if line.startswith("["):
            inside = line == f"[{label}]"
            continue
        if inside:
            out.append(line)
    return out
