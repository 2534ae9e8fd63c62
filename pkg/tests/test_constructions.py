import pytest

from vdclab.core import Bounds, LoosePath, validate_avdc, validate_functor
from vdclab.constructions import (EnrichedCategory, classifier_bijection,
                                  classifier_category, diminish,
                                  diminish_inclusion, embed,
                                  enriched_to_monoid, full_sub, mat,
                                  monoid_to_enriched, nerve, prof,
                                  singleton_colored_set, slice_avdc)
from vdclab.density import is_equivalence
from tests.conftest import preorder_cat


@pytest.fixture(scope="module")
def mat2(q2):
    return mat(q2, [singleton_colored_set("*")])


@pytest.fixture(scope="module")
def prof2(q2):
    cls = classifier_category(q2, q2.objects()[0])
    pre = preorder_cat("p", 2, [(0, 0), (1, 1), (0, 1)])
    return prof(q2, [cls, pre])


class TestMat:
    def test_objects(self, mat2):
        assert len(mat2.objects()) == 1
        assert len(mat2.objects()[0].key) == 1

    def test_matrix_counts(self, mat2):
        o = mat2.objects()[0]
        # one q2-value per entry of a 1 x 1 matrix
        assert len(mat2.loose(o, o)) == 2

    def test_validate(self, mat2):
        assert validate_avdc(mat2, Bounds(K=2, max_loose_per_hom=3)).ok

    def test_bigger_universe(self, prof2):
        one = [o for o in prof2.matrices.objects() if len(o.key) == 1][0]
        two = [o for o in prof2.matrices.objects() if len(o.key) == 2][0]
        assert len(prof2.matrices.loose(one, two)) == 4


class TestMod:
    def test_objects(self, prof2):
        assert len(prof2.modules.objects()) == 2

    def test_loose_unit(self, prof2, bounds):
        for cat in (classifier_category(prof2.base,
                                        prof2.base.objects()[0]),):
            m = prof2.monoid_of(cat)
            u = prof2.modules.loose_unit_of(m)
            assert u is not None

    def test_validate(self, prof2):
        assert validate_avdc(prof2.modules,
                             Bounds(K=2, max_loose_per_hom=3)).ok


class TestProf:
    def test_enriched_round_trip(self, prof2):
        pre = preorder_cat("p", 2, [(0, 0), (1, 1), (0, 1)])
        m = enriched_to_monoid(prof2.matrices, pre)
        back = enriched_to_monoid(prof2.matrices, monoid_to_enriched(
            prof2.matrices, m))
        assert m.loose_key == back.loose_key

    def test_object_lookup(self, prof2):
        pre = preorder_cat("p", 2, [(0, 0), (1, 1), (0, 1)])
        o = prof2.object_of(pre)
        assert o in prof2.modules.objects()

    def test_monotone_map_count(self, prof2, q2):
        """Tight arrows between enriched preorders are the monotone maps."""
        cls = classifier_category(q2, q2.objects()[0])
        pre = preorder_cat("p", 2, [(0, 0), (1, 1), (0, 1)])
        zc = prof2.object_of(cls)
        a = prof2.object_of(pre)
        assert len(prof2.modules.tight(zc, a)) == 2
        assert len(prof2.modules.tight(a, a)) == 3
        assert len(prof2.modules.tight(a, zc)) == 1


class TestDiminish:
    def test_strips_nullary_cells(self, q2):
        dim = diminish(q2)
        o = dim.objects()[0]
        one = [u for u in dim.loose(o, o) if u.key == 1][0]
        ident = dim.identity(o)
        assert not dim.has_cell(ident, ident, LoosePath.of(one),
                                LoosePath.empty(o))
        assert dim.has_cell(ident, ident, LoosePath.of(one, one),
                            LoosePath.of(one))

    def test_inclusion_validates(self, q2, bounds):
        inc = diminish_inclusion(diminish(q2))
        assert validate_functor(inc, bounds).ok


class TestEmbeddings:
    def test_yoneda_embeds(self, q2, mat2, bounds):
        Y = embed(q2, "Y", mat2, bounds)
        assert validate_functor(Y, bounds).ok

    def test_full_embedding_counts(self, q2, bounds):
        Z = embed(q2, "Z", bounds=bounds)
        tgt = getattr(Z.target, "modules", None) or Z.target
        for a in q2.objects():
            for b in q2.objects():
                assert len(q2.tight(a, b)) == len(
                    tgt.tight(Z.obj_map(a), Z.obj_map(b)))


class TestClassifier:
    def test_bijection_q2(self, q2, prof2, bounds):
        pre = preorder_cat("p", 2, [(0, 0), (1, 1), (0, 1)])
        res = classifier_bijection(prof2, pre, q2.objects()[0], bounds)
        assert res["bijective"] and len(res["preobjects"]) == 2


class TestSubAndSlice:
    def test_full_sub(self, rel2, bounds):
        small = [o for o in rel2.objects() if len(o.key) <= 1]
        sub = full_sub(rel2, small)
        assert len(sub.objects()) == len(small)
        assert validate_avdc(sub, bounds).ok

    def test_slice(self, rel2, bounds):
        two = [o for o in rel2.objects() if len(o.key) == 2][0]
        sl = slice_avdc(rel2, two)
        assert len(sl.objects()) == 7
        assert validate_avdc(sl, bounds).ok
        assert validate_functor(sl.projection, bounds).ok


class TestNerve:
    def test_nerve_equivalence(self, prof2, q2, bounds):
        cls = classifier_category(q2, q2.objects()[0])
        mods = prof2.modules
        zstar = prof2.object_of(cls)
        X = full_sub(mods, [zstar])
        n_functor, script_n = nerve(mods, X, bounds=bounds)
        assert validate_functor(n_functor, bounds).ok
        assert is_equivalence(script_n, bounds).ok
