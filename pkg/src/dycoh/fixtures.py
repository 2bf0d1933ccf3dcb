"""Small named presentations used by the test suite, the acceptance gate and the CLI."""

from __future__ import annotations

from .linalg import FieldSpec
from .hochschild import build_algebra, build_bimodule, regular_bimodule, unitalize_pair
from .presentations import (build_category, cyclic_group_table, make_group_category,
                            product_group_table)

QQ = FieldSpec.rationals()
F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)


def vec_z2(field=F2):
    return make_group_category(cyclic_group_table(2), field, names=("e", "g"), name="vec_z2")


def vec_z3(field=F3):
    return make_group_category(cyclic_group_table(3), field, names=("e", "g", "g2"), name="vec_z3")


def vec_z2xz2(field=F2):
    table = product_group_table(cyclic_group_table(2), cyclic_group_table(2))
    return make_group_category(table, field, names=("e", "a", "b", "ab"), name="vec_z2xz2")


def null_semigroup(field=QQ):
    """Objects a, b with every product equal to b; scalar endomorphisms only."""
    one = (1,)
    return build_category(field, ("a", "b"), [[1, 1], [1, 1]], [[1, 0], [0, 1]], [one, one],
                          compose={(0, 0, 0): ((one,),), (1, 1, 1): ((one,),)},
                          tensor_mor={(x, x, y, y): ((one,),) for x in range(2) for y in range(2)},
                          name="null", hom_names={(0, 0): ("id_a",), (1, 1): ("id_b",)})


def null_arrow(field=QQ):
    """Null semigroup a, b (all products b) with an extra arrow t: a -> b.

    Every morphism is sent to 1 by a character, and f (x) g is the product of
    the characters times id_b, which makes the tensor a bifunctor.
    """
    one = (1,)
    hom_dim = [[1, 1], [0, 1]]
    compose = {(0, 0, 0): ((one,),), (1, 1, 1): ((one,),),
               (0, 0, 1): ((one,),), (0, 1, 1): ((one,),)}
    pairs = [(0, 0), (0, 1), (1, 1)]
    tensor_mor = {(x, x2, y, y2): ((one,),) for (x, x2) in pairs for (y, y2) in pairs}
    return build_category(field, ("a", "b"), [[1, 1], [1, 1]], hom_dim, [one, one], compose, tensor_mor,
                          name="null_arrow",
                          hom_names={(0, 0): ("id_a",), (0, 1): ("t",), (1, 1): ("id_b",)})


def eps_category(field=QQ):
    """One object X with X (x) X = X and End(X) = k[eps]/(eps^2); f (x) g = fg."""
    # basis (id, eps); product table of the dual numbers
    prod = (((1, 0), (0, 1)), ((0, 1), (0, 0)))
    return build_category(field, ("X",), [[0]], [[2]], [(1, 0)], compose={(0, 0, 0): prod},
                          tensor_mor={(0, 0, 0, 0): prod}, name="eps",
                          hom_names={(0, 0): ("id", "eps")})


def bad_associativity(field=QQ):
    """a.a = b, a.b = a, b.a = b, b.b = b: (a.a).a = b but a.(a.a) = a."""
    one = (1,)
    return build_category(field, ("a", "b"), [[1, 0], [1, 1]], [[1, 0], [0, 1]], [one, one],
                          compose={(0, 0, 0): ((one,),), (1, 1, 1): ((one,),)},
                          tensor_mor={(x, x, y, y): ((one,),) for x in range(2) for y in range(2)},
                          name="bad_assoc")


def broken_interchange(field=QQ):
    """The eps category with eps (x) eps = eps instead of 0."""
    prod = (((1, 0), (0, 1)), ((0, 1), (0, 0)))
    bad = (((1, 0), (0, 1)), ((0, 1), (0, 1)))
    return build_category(field, ("X",), [[0]], [[2]], [(1, 0)], compose={(0, 0, 0): prod},
                          tensor_mor={(0, 0, 0, 0): bad}, name="broken_interchange",
                          hom_names={(0, 0): ("id", "eps")})


#: name -> (builder, natural prime field)
CATEGORY_FIXTURES = {
    "vec_z2": (vec_z2, F2),
    "vec_z3": (vec_z3, F3),
    "vec_z2xz2": (vec_z2xz2, F2),
    "null": (null_semigroup, F2),
    "eps": (eps_category, F3),
}


def strict_skeletal_fixtures(include_extra=False):
    """``(label, category)`` pairs over Q and each fixture's natural prime field."""
    out = []
    builders = dict(CATEGORY_FIXTURES)
    if include_extra:
        builders["null_arrow"] = (null_arrow, F2)
    for name, (build, p) in builders.items():
        for field in (QQ, p):
            out.append((f"{name}/{field}", build(field)))
    return out


# -- algebras and bimodules -----------------------------------------------------


def k_algebra(field=QQ):
    """The ground field as a one-dimensional unital algebra with basis 'e'."""
    return build_algebra(field, ("e",), {(0, 0): (1,)}, unit=(1,), name="k")


def k_bimodule(field=QQ, left=1, right=1):
    """k as a bimodule over k where the unit acts by the scalars ``left`` and ``right``."""
    a = k_algebra(field)
    return build_bimodule(a, ("m",), {(0, 0): (left,)}, {(0, 0): (right,)}, name=f"k[{left},{right}]")


def dual_numbers(field=QQ):
    """k[eps]/(eps^2) with basis (1, eps)."""
    mul = {(0, 0): (1, 0), (0, 1): (0, 1), (1, 0): (0, 1)}
    return build_algebra(field, ("1", "eps"), mul, unit=(1, 0), name="dual")


def zero_algebra(field=QQ, dim=1):
    """Non-unital algebra with all products zero."""
    names = ("x",) if dim == 1 else tuple(f"x{i + 1}" for i in range(dim))
    return build_algebra(field, names, {}, name=f"zero{dim}")


def zero_algebra_bimodules(a):
    """Bimodules over a zero-multiplication algebra, including non-trivial nilpotent actions."""
    d = a.dim
    out = [build_bimodule(a, ("m",), {}, {}, name="trivial"),
           build_bimodule(a, a.names, {}, {}, name="self")]
    left = {(i, 0): (0, 1) for i in range(d)}
    right = {(0, i): (0, 1) for i in range(d)}
    out.append(build_bimodule(a, ("m1", "m2"), left, {}, name="nil_left"))
    out.append(build_bimodule(a, ("m1", "m2"), {}, right, name="nil_right"))
    out.append(build_bimodule(a, ("m1", "m2"), left, right, name="nil_both"))
    return out


def non_unital_fixtures():
    """``(label, bimodule)`` pairs over zero algebras of dimension 1 and 2, over Q, F2 and F3."""
    out = []
    for field in (QQ, F2, F3):
        for dim in (1, 2):
            a = zero_algebra(field, dim)
            for m in zero_algebra_bimodules(a):
                out.append((f"{a.name}/{m.name}/{field}", m))
    return out


def unital_fixtures():
    """``(label, bimodule)`` pairs over unital algebras, including units that do not act as identity."""
    out = []
    for field in (QQ, F2, F3):
        for l, r in ((1, 1), (1, 0), (0, 1), (0, 0)):
            m = k_bimodule(field, l, r)
            out.append((f"k/{m.name}/{field}", m))
        d = dual_numbers(field)
        out.append((f"dual/regular/{field}", regular_bimodule(d)))
        # eps acts by zero on the right, 1 acts as identity on the left only
        out.append((f"dual/half/{field}", build_bimodule(
            d, ("m1", "m2"), {(0, 0): (1, 0), (0, 1): (0, 1), (1, 0): (0, 1)}, {}, name="half")))
        for m in zero_algebra_bimodules(zero_algebra(field, 1))[2:] + zero_algebra_bimodules(zero_algebra(field, 2))[4:]:
            au, mu = unitalize_pair(m)
            out.append((f"{au.name}/{mu.name}/{field}", mu))
    return out
