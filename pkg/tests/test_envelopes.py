import itertools

import pytest

from dycoh import envelopes as env
from dycoh import fixtures as fx
from dycoh.dycomplex import DYCochain, get_complex
from dycoh.envelopes import (AdditiveObject, KaroubiObject, default_samples, extend_to_additive,
                             extend_to_karoubi, idempotents, karoubi_object, karoubi_tensor,
                             verify_envelope_invariance)
from dycoh.errors import BudgetError, DimensionError, PreconditionError
from dycoh.presentations import build_category, validate_category

CATEGORIES = fx.strict_skeletal_fixtures(include_extra=True)
IDS = [lab for lab, _ in CATEGORIES]


def split_category(field=fx.QQ):
    """One object X = X (x) X with End(X) = k x k (orthogonal idempotents p1, p2)."""
    prod = (((1, 0), (0, 0)), ((0, 0), (0, 1)))
    return build_category(field, ("X",), [[0]], [[2]], [(1, 1)], compose={(0, 0, 0): prod},
                          tensor_mor={(0, 0, 0, 0): prod}, name="split",
                          hom_names={(0, 0): ("p1", "p2")})


def ident_obj(c, x):
    return KaroubiObject(x, c.identity(x))


# -- Karoubi objects ---------------------------------------------------------


def test_split_category_is_valid():
    assert validate_category(split_category()).ok


def test_tensor_of_identity_idempotents():
    c = fx.vec_z3()
    for x, y in itertools.product(range(3), repeat=2):
        assert karoubi_tensor(c, ident_obj(c, x), ident_obj(c, y)) == ident_obj(c, c.tensor(x, y))


def test_tensor_with_one_idempotent():
    c = split_category()
    p1 = karoubi_object(c, 0, (1, 0))
    out = karoubi_tensor(c, p1, ident_obj(c, 0))
    assert out.idem == c.tensor_morphisms(0, 0, 0, 0, (1, 0), (1, 1)) == (1, 0)


def test_eps_zero_idempotent_tensor():
    c = fx.eps_category()
    z = karoubi_object(c, 0, (0, 0))
    assert c.tensor_morphisms(0, 0, 0, 0, (0, 0), (0, 0)) == (0, 0)
    assert karoubi_tensor(c, z, z) == KaroubiObject(0, (0, 0))


def test_non_idempotent_is_rejected():
    c = fx.eps_category()
    with pytest.raises(PreconditionError):
        karoubi_object(c, 0, (0, 1))
    with pytest.raises(DimensionError):
        karoubi_object(c, 0, (1,))


@pytest.mark.parametrize("field", [fx.QQ, fx.F3], ids=str)
def test_dual_numbers_have_only_trivial_idempotents(field):
    # (a + b eps)^2 = a^2 + 2ab eps forces a in {0, 1} and b = 0
    assert sorted(idempotents(fx.eps_category(field), 0)) == [(0, 0), (1, 0)]


def test_split_idempotents_in_closed_form():
    assert sorted(idempotents(split_category(), 0)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_brute_force_idempotents_match_closed_form():
    assert sorted(idempotents(split_category(fx.F3), 0)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


# -- Karoubi extension ---------------------------------------------------------


def test_karoubi_identity_and_zero_idempotents():
    c = fx.eps_category()
    for eta in get_complex(c.identity_functor).basis(2):
        assert extend_to_karoubi(eta, (ident_obj(c, 0), ident_obj(c, 0))) == eta.table[(0, 0)]
        z = KaroubiObject(0, (0, 0))
        assert extend_to_karoubi(eta, (z, z)) == (0, 0)


def test_karoubi_mixed_idempotents():
    c = split_category()
    p1 = karoubi_object(c, 0, (1, 0))
    for eta in get_complex(c.identity_functor).basis(2):
        a, b = eta.table[(0, 0)]
        # (id (x) p1) eta (id (x) p1) = eta o p1 = (a, 0) in the (p1, p2) basis
        assert extend_to_karoubi(eta, (ident_obj(c, 0), p1)) == (a, 0)


def test_karoubi_degree_mismatch():
    c = fx.vec_z2()
    eta = get_complex(c.identity_functor).basis(1)[0]
    with pytest.raises(DimensionError):
        extend_to_karoubi(eta, (ident_obj(c, 0), ident_obj(c, 0)))


# -- additive extension --------------------------------------------------------


def test_additive_singletons_give_eta():
    c = fx.vec_z2()
    for eta in get_complex(c.identity_functor).basis(2):
        for t in itertools.product(range(2), repeat=2):
            got = extend_to_additive(eta, tuple(AdditiveObject((x,)) for x in t)).block_dict()
            assert got.get((0, 0), (0,)) == eta.table[t]


def test_additive_repeated_summand():
    c = fx.vec_z2(fx.QQ)
    eta = DYCochain(c.identity_functor, 2, {t: (k + 2,) for k, t in enumerate(itertools.product(range(2), repeat=2))})
    for x, y in itertools.product(range(2), repeat=2):
        m = extend_to_additive(eta, (AdditiveObject((x, x)), AdditiveObject((y,))))
        assert m.block_dict() == {(0, 0): eta.table[(x, y)], (1, 1): eta.table[(x, y)]}


def test_additive_mixed_summands_block_form():
    c = fx.vec_z2(fx.QQ)
    eta = DYCochain(c.identity_functor, 2, {(0, 0): (2,), (0, 1): (3,), (1, 0): (5,), (1, 1): (7,)})
    m = extend_to_additive(eta, (AdditiveObject((0, 1)), AdditiveObject((1,))))
    summands = (c.tensor(0, 1), c.tensor(1, 1))
    assert m.src == m.tgt == summands
    # oracle: off-diagonal blocks live in Hom(g, e) = Hom(e, g) = 0; the injection of
    # summand (p, g) forces the diagonal block to be eta_{p, g}
    assert c.dim(summands[0], summands[1]) == c.dim(summands[1], summands[0]) == 0
    assert m.block_dict() == {(0, 0): eta.table[(0, 1)], (1, 1): eta.table[(1, 1)]}


def test_additive_degree_mismatch():
    c = fx.vec_z2()
    eta = get_complex(c.identity_functor).basis(2)[0]
    with pytest.raises(DimensionError):
        extend_to_additive(eta, (AdditiveObject((0,)),))


def test_empty_additive_object():
    with pytest.raises(DimensionError):
        AdditiveObject(())


# -- section property ----------------------------------------------------------


@pytest.mark.parametrize("label,c", CATEGORIES, ids=IDS)
def test_restriction_after_extension_is_identity(label, c):
    cx = get_complex(c.identity_functor)
    for n in (1, 2, 3):
        for eta in cx.basis(n):
            for t in cx.tuples(n):
                assert extend_to_karoubi(eta, tuple(ident_obj(c, x) for x in t)) == eta.table[t]
                p = c.tensor_all(t)
                blocks = extend_to_additive(eta, tuple(AdditiveObject((x,)) for x in t)).block_dict()
                assert blocks.get((0, 0), c.zero(p, p)) == eta.table[t]


# -- the invariance check --------------------------------------------------


def test_vec_z2_karoubi_degree_one():
    rep = verify_envelope_invariance(fx.vec_z2(), "karoubi", 1)
    assert rep.passed
    assert rep.entries[0]["samples"] == 4


def test_vec_z2_additive_degree_two():
    rep = verify_envelope_invariance(fx.vec_z2(), "additive", 2)
    assert rep.passed
    entry = rep.entries[0]
    assert entry["section"] and entry["naturality"] and entry["uniqueness"] and entry["differential"]


def test_eps_karoubi_with_zero_idempotent():
    c = fx.eps_category()
    z = KaroubiObject(0, (0, 0))
    rep = verify_envelope_invariance(c, "karoubi", 1, samples=[(z,)])
    assert rep.passed
    for eta in get_complex(c.identity_functor).basis(1):
        assert extend_to_karoubi(eta, (z,)) == (0, 0)


@pytest.mark.parametrize("kind", ["karoubi", "additive"])
@pytest.mark.parametrize("label,c", CATEGORIES + [("split", split_category())], ids=IDS + ["split"])
def test_invariance_in_degree_one(kind, label, c):
    assert verify_envelope_invariance(c, kind, 1).passed


def test_unknown_kind_and_budget():
    c = fx.vec_z2()
    with pytest.raises(PreconditionError):
        verify_envelope_invariance(c, "presheaf", 1)
    with pytest.raises(BudgetError):
        verify_envelope_invariance(c, "karoubi", 4)


def test_sample_length_is_checked():
    c = fx.vec_z2()
    with pytest.raises(DimensionError):
        verify_envelope_invariance(c, "karoubi", 2, samples=[(ident_obj(c, 0),)])


def test_default_samples_exhaustive_then_cyclic():
    assert len(default_samples(list(range(4)), 3)) == 64
    big = default_samples(list(range(5)), 3)
    assert len(big) < 125
    # every element shows up in every slot
    for slot in range(3):
        assert {t[slot] for t in big} == set(range(5))


# -- negative controls -------------------------------------------------------


def test_non_natural_table_is_caught():
    c = fx.null_arrow()
    # eta_a = id, eta_b = 0 does not commute with t: a -> b
    eta = DYCochain(c.identity_functor, 1, {(0,): (1,), (1,): (0,)})
    assert not get_complex(c.identity_functor).is_natural(eta)
    pool = env.additive_pool(c, max_len=1)
    issues = env._additive_checks(eta, [(AdditiveObject((0,)),)], pool)
    assert ("naturality", (AdditiveObject((0,)),), 0) in issues


def test_tampered_additive_extension_fails(monkeypatch):
    real = env.extend_to_additive

    def doubled(eta, tup):
        out = real(eta, tup)
        if len(tup[0].summands) == 2:
            return env.AddMor.make(out.src, out.tgt, {k: tuple(2 * x for x in v) for k, v in out.blocks})
        return out

    monkeypatch.setattr(env, "extend_to_additive", doubled)
    rep = verify_envelope_invariance(fx.vec_z2(fx.QQ), "additive", 1)
    assert not rep.passed
    entry = rep.entries[0]
    assert not entry["uniqueness"] and entry["witnesses"]


def test_tampered_karoubi_extension_fails(monkeypatch):
    def always_identity(eta, tup):
        c = eta.functor.source
        return c.identity(c.tensor_all([k.base for k in tup]))

    monkeypatch.setattr(env, "extend_to_karoubi", always_identity)
    rep = verify_envelope_invariance(fx.vec_z2(fx.QQ), "karoubi", 1)
    assert not rep.passed
    assert not rep.entries[0]["section"]
