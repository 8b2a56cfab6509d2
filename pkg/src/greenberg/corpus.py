"""The fixed test corpus shared by ``verify`` and the test suite."""

from __future__ import annotations

from functools import lru_cache

from .algebra import BaseRingSpec
from .fields import FiniteField, alg_build
from .schemes import GroupSchemeSpec, presentation


@lru_cache(maxsize=None)
def field(name):
    return {
        "F2": FiniteField(2),
        "F3": FiniteField(3),
        "F4": FiniteField(2, (1, 1, 1)),
        "F9": FiniteField(3, (1, 0, 1)),
    }[name]


def bases():
    F2, F3 = field("F2"), field("F3")
    return {
        "k2[[t]]": BaseRingSpec("equal", F2),
        "k3[[t]]": BaseRingSpec("equal", F3),
        "W(F2)": BaseRingSpec("mixed", F2),
        "W(F3)": BaseRingSpec("mixed", F3),
        "t^2-2": BaseRingSpec("mixed", F2, (0, -2)),
        "t^2-3": BaseRingSpec("mixed", F3, (0, -3)),
        "t^3-2": BaseRingSpec("mixed", F2, (0, 0, -2)),
    }


@lru_cache(maxsize=None)
def _algebras(p):
    F2, F3, F4 = field("F2"), field("F3"), field("F4")
    if p == 2:
        return (
            ("F2", alg_build("field", F2)),
            ("F4", alg_build("extension", F2, F4)),
            ("F2[e]", alg_build("dual_numbers", F2, 2)),
        )
    if p == 3:
        return (("F3", alg_build("field", F3)),)
    raise KeyError(p)


def algebras(p):
    """Test algebras over ``F_p`` from {F_2, F_3, F_4, F_2[e]}."""
    return dict(_algebras(p))


# name -> (variables, generators); ``pi`` is the uniformiser
SCHEMES = {
    "A1": (("x",), ()),
    "A2": (("x", "y"), ()),
    "Gm": (("x", "y"), ("x*y - 1",)),
    "x^2-1": (("x",), ("x^2 - 1",)),
    "y^2-pi*x": (("x", "y"), ("y^2 - pi*x",)),
    "x*y-pi": (("x", "y"), ("x*y - pi",)),
    "x^2+x+1": (("x",), ("x^2 + x + 1",)),
}


def is_smooth(name, p):
    """Smoothness flag for a corpus scheme over a base of residue characteristic ``p``."""
    if name in ("A1", "A2", "Gm"):
        return True
    if name == "x^2-1":
        return p != 2
    if name == "x^2+x+1":
        # discriminant -3
        return p != 3
    return False


# name -> (variables, generators, identity, dimension)
GROUPS = {
    "Ga": (("x",), (), (0,), 1),
    "Gm": (("x", "y"), ("x*y - 1",), (1, 1), 1),
    "Gm^2": (("a", "b", "c", "d"), ("a*b - 1", "c*d - 1"), (1, 1, 1, 1), 2),
}

# the etale map (y^2 - x, 2yt - 1) -> A1, x -> x
ETALE = {
    "source": (("x", "y", "t"), ("y^2 - x", "2*y*t - 1")),
    "target": (("x",), ()),
    "images": {"x": "x"},
}


def scheme(name, ring):
    vars, gens = SCHEMES[name]
    return presentation(ring, vars, gens)


def group(name, ring):
    vars, gens, identity, _ = GROUPS[name]
    return GroupSchemeSpec(presentation(ring, vars, gens), identity)


def group_dim(name):
    return GROUPS[name][3]


# Weil-restriction grid: name -> (p, top residue field, eisenstein, n)
WR_EXTENSIONS = {
    "Z2[pi]/(pi^2-2) n=1": (2, "F2", (0, -2), 1),
    "Z2[pi]/(pi^2-2) n=2": (2, "F2", (0, -2), 2),
    "W(F4) n=1": (2, "F4", (), 1),
    "W(F4) n=2": (2, "F4", (), 2),
    "W(F4)[pi]/(pi^2-2) n=1": (2, "F4", (0, -2), 1),
}
TOTALLY_RAMIFIED = ("Z2[pi]/(pi^2-2) n=1", "Z2[pi]/(pi^2-2) n=2")

WR_SCHEMES = {
    "A1": (("x",), ()),
    "Gm": (("x", "y"), ("x*y - 1",)),
    "x^2-pi*x": (("x",), ("x^2 - pi*x",)),
}


def wr_algebras():
    F2 = field("F2")
    return {"F2": alg_build("field", F2), "F2[e]": alg_build("dual_numbers", F2, 2)}
