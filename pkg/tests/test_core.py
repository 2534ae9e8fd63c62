import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vdclab.core import (BoundaryError, Bounds, CellRecord, LooseArrow,
                         LoosePath, ObjectRef, Prober, TightArrow,
                         ValidationError, skey, validate_avdc,
                         validate_functor)
from vdclab.presented import (discrete_category, shape_avdc)


def _obj(key, avdc="t"):
    return ObjectRef(avdc, key)


class TestRecords:
    def test_loose_path_concat(self):
        a, b, c = _obj("a"), _obj("b"), _obj("c")
        u = LooseArrow(a, b, "u")
        v = LooseArrow(b, c, "v")
        p = LoosePath.of(u) + LoosePath.of(v)
        assert len(p) == 2
        assert p.src == a and p.dst == c

    def test_loose_path_concat_mismatch(self):
        a, b, c = _obj("a"), _obj("b"), _obj("c")
        u = LooseArrow(a, b, "u")
        v = LooseArrow(c, c, "v")
        with pytest.raises(BoundaryError):
            LoosePath.of(u) + LoosePath.of(v)

    def test_empty_path(self):
        a = _obj("a")
        p = LoosePath.empty(a)
        assert len(p) == 0 and p.src == a and p.dst == a

    def test_cell_bottom_length(self):
        a, b = _obj("a"), _obj("b")
        u = LooseArrow(a, b, "u")
        f = TightArrow(a, a, "f")
        g = TightArrow(b, b, "g")
        long = LoosePath.of(u) + LoosePath.of(LooseArrow(b, a, "v")) + \
            LoosePath.of(u)
        with pytest.raises(BoundaryError):
            CellRecord(f, g, LoosePath.of(u), long, payload=None)

    @given(st.lists(st.integers(), max_size=6))
    @settings(max_examples=50, deadline=None)
    def test_skey_total_order(self, xs):
        keys = [skey(x) for x in xs]
        assert sorted(keys) == sorted(keys)  # comparable without error
        assert all(skey(x) == skey(x) for x in xs)


class TestValidation:
    def test_validate_shape(self, bounds):
        h = shape_avdc("indiscrete", discrete_category(("a", "b")))
        assert validate_avdc(h, bounds).ok

    def test_validate_rel(self, rel2, bounds):
        rep = validate_avdc(rel2, Bounds(K=2, max_loose_per_hom=3))
        assert rep.ok

    def test_validate_q2(self, q2, bounds):
        assert validate_avdc(q2, bounds).ok

    def test_identity_functor(self, q2, bounds):
        from vdclab.core import thin_functor
        f = thin_functor(q2, q2, lambda a: a, lambda t: t, lambda u: u,
                         name="id")
        assert validate_functor(f, bounds).ok


class TestProber:
    def test_budget_exhaustion(self, q2):
        from vdclab.core import BudgetExceeded
        p = Prober(q2, Bounds(K=1, budget=3))
        with pytest.raises(BudgetExceeded):
            for _ in range(10):
                p.tick()

    def test_paths_respect_bound(self, q2):
        p = Prober(q2, Bounds(K=2))
        o = q2.objects()[0]
        assert all(len(path) <= 2 for path in p.paths(o, o))

    def test_loose_truncation(self, rel2):
        p = Prober(rel2, Bounds(K=1, max_loose_per_hom=2))
        a = rel2.objects()[-1]
        assert len(p.loose(a, a)) <= 2
