from vdclab.core import Bounds, LoosePath
from vdclab.presented import discrete_category, shape_avdc
from vdclab.universal import (find_extension, find_loose_composite,
                              find_restriction, is_cartesian, is_cocartesian,
                              is_split)


class TestRestrictions:
    def test_restriction_in_rel(self, rel2, bounds):
        """u(f, g) is the preimage relation."""
        one = [o for o in rel2.objects() if len(o.key) == 1][0]
        two = [o for o in rel2.objects() if len(o.key) == 2][0]
        f = rel2.tight_for(two, one, ((0, 0), (1, 0)))
        u = rel2.loose_for(one, one, [(0, 0)])
        w = find_restriction(LoosePath.of(u), f, f, bounds)
        assert w is not None
        # the preimage of the full singleton relation is the full relation
        assert w.loose.key == tuple(sorted([(0, 0), (0, 1), (1, 0), (1, 1)]))

    def test_companion_in_rel(self, rel2, bounds):
        one = [o for o in rel2.objects() if len(o.key) == 1][0]
        two = [o for o in rel2.objects() if len(o.key) == 2][0]
        f = rel2.tight_for(two, one, ((0, 0), (1, 0)))
        unit = rel2.loose_for(one, one, [(0, 0)])
        w = find_restriction(LoosePath.of(unit), f, rel2.identity(one),
                             bounds)
        assert w is not None  # the graph of f

    def test_loose_unit_q2(self, q2, bounds):
        o = q2.objects()[0]
        ident = q2.identity(o)
        w = find_restriction(LoosePath.empty(o), ident, ident, bounds)
        assert w is not None and w.loose.key == 1

    def test_no_unit_in_vd_indiscrete(self, bounds):
        h = shape_avdc("vd-indiscrete", discrete_category(("*",)))
        o = h.objects()[0]
        w = find_restriction(LoosePath.empty(o), h.identity(o),
                             h.identity(o), bounds)
        assert w is None


class TestComposites:
    def test_relational_composite(self, rel2, bounds):
        two = [o for o in rel2.objects() if len(o.key) == 2][0]
        r = rel2.loose_for(two, two, [(0, 1)])
        s = rel2.loose_for(two, two, [(1, 0)])
        w = find_loose_composite(LoosePath.of(r, s), bounds=bounds)
        assert w is not None and w.loose.key == ((0, 0),)

    def test_quantale_composite(self, q2, bounds):
        o = q2.objects()[0]
        one = [u for u in q2.loose(o, o) if u.key == 1][0]
        zero = [u for u in q2.loose(o, o) if u.key == 0][0]
        w = find_loose_composite(LoosePath.of(one, zero), bounds=bounds)
        assert w is not None and w.loose.key == 0


class TestExtensions:
    def test_residual_in_q2(self, q2, bounds):
        # <0>1 in the Boolean quantale is 1 (0 -> 1 residual)
        o = q2.objects()[0]
        one = [u for u in q2.loose(o, o) if u.key == 1][0]
        zero = [u for u in q2.loose(o, o) if u.key == 0][0]
        w = find_extension(LoosePath.of(zero), q2.identity(o),
                           LoosePath.of(one), bounds=bounds)
        assert w is not None


class TestCellProperties:
    def test_identity_cell_cartesian(self, q2, bounds):
        o = q2.objects()[0]
        one = [u for u in q2.loose(o, o) if u.key == 1][0]
        cell = q2.loose_identity_cell(one)
        assert is_cartesian(cell, bounds).ok

    def test_split_in_indiscrete(self, bounds):
        h = shape_avdc("indiscrete", discrete_category(("a", "b")))
        a, b = h.objects()
        u = h.loose(a, b)[0]
        cell = h.cells(h.identity(a), h.identity(b), LoosePath.of(u),
                       LoosePath.of(u))[0]
        assert is_split(cell, bounds).ok

    def test_cocartesian_unit_q2(self, q2, bounds):
        o = q2.objects()[0]
        ident = q2.identity(o)
        one = [u for u in q2.loose(o, o) if u.key == 1][0]
        cell = q2.cells(ident, ident, LoosePath.empty(o),
                        LoosePath.of(one))[0]
        assert is_cocartesian(cell, "full", bounds).ok
