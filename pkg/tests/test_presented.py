import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vdclab.core import Bounds, LoosePath, ValidationError
from vdclab.presented import (ClosureError, FiniteCategory, PresentationError,
                              UnsupportedError, discrete_category,
                              dump_presentation, load_presentation,
                              parse_presentation, preorder_category,
                              quantale_avdc, rel_avdc, shape_avdc,
                              small_rel_universe, two_element_quantale)
from vdclab.constructions import diminish


class TestFiniteCategory:
    def test_discrete(self):
        c = discrete_category(("a", "b"))
        c.validate()
        assert len(c.arrows()) == 2

    def test_preorder_not_transitive(self):
        with pytest.raises(ValidationError):
            preorder_category((0, 1, 2),
                              [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)])

    def test_preorder(self):
        c = preorder_category((0, 1), [(0, 0), (1, 1), (0, 1)])
        c.validate()
        assert len(c.hom(0, 1)) == 1 and len(c.hom(1, 0)) == 0


class TestRel:
    def test_tight_count(self, rel2):
        one = [o for o in rel2.objects() if len(o.key) == 1][0]
        two = [o for o in rel2.objects() if len(o.key) == 2][0]
        assert len(rel2.tight(one, two)) == 2

    def test_cell_rule(self, rel2):
        two = [o for o in rel2.objects() if len(o.key) == 2][0]
        one = [o for o in rel2.objects() if len(o.key) == 1][0]
        f = rel2.tight_for(two, one, ((0, 0), (1, 0)))
        r1 = rel2.loose_for(two, two, [(0, 1)])
        s = rel2.loose_for(one, one, [(0, 0)])
        assert rel2.has_cell(f, f, LoosePath.of(r1), LoosePath.of(s))

    def test_zero_coary_rule(self, rel2):
        two = [o for o in rel2.objects() if len(o.key) == 2][0]
        ident = rel2.identity(two)
        r = rel2.loose_for(two, two, [(0, 1)])
        # a 0-coary cell under R = {(0,1)} would force 0 = 1
        assert not rel2.has_cell(ident, ident, LoosePath.of(r),
                                 LoosePath.empty(two))

    @given(st.sets(st.tuples(st.integers(0, 1), st.integers(0, 1))),
           st.sets(st.tuples(st.integers(0, 1), st.integers(0, 1))),
           st.sets(st.tuples(st.integers(0, 1), st.integers(0, 1))))
    @settings(max_examples=60, deadline=None)
    def test_cell_oracle(self, R, S, T):
        """Cell existence agrees with the direct relational implication."""
        rel = rel_avdc(small_rel_universe(2))
        two = [o for o in rel.objects() if len(o.key) == 2][0]
        lr = rel.loose_for(two, two, sorted(R))
        ls = rel.loose_for(two, two, sorted(S))
        lt = rel.loose_for(two, two, sorted(T))
        ident = rel.identity(two)
        got = rel.has_cell(ident, ident, LoosePath.of(lr, ls),
                           LoosePath.of(lt))
        want = all((x, z) in T
                   for (x, y) in R for (y2, z) in S if y == y2)
        assert got == want


class TestQuantale:
    def test_loose_hom_size(self, q2):
        o = q2.objects()[0]
        assert len(q2.loose(o, o)) == 2

    def test_cell_11_to_1(self, q2):
        o = q2.objects()[0]
        one = [u for u in q2.loose(o, o) if u.key == 1][0]
        ident = q2.identity(o)
        assert q2.has_cell(ident, ident, LoosePath.of(one, one),
                           LoosePath.of(one))

    def test_unit_zero_coary(self, q2):
        o = q2.objects()[0]
        one = [u for u in q2.loose(o, o) if u.key == 1][0]
        zero = [u for u in q2.loose(o, o) if u.key == 0][0]
        ident = q2.identity(o)
        assert q2.has_cell(ident, ident, LoosePath.of(one),
                           LoosePath.empty(o))
        # the empty path composes to the unit, which is not below 0
        assert not q2.has_cell(ident, ident, LoosePath.empty(o),
                               LoosePath.of(zero))


class TestShapes:
    def test_dim_indiscrete_singleton(self):
        h = shape_avdc("vd-indiscrete", discrete_category(("*",)))
        o = h.objects()[0]
        u = h.loose(o, o)[0]
        ident = h.identity(o)
        assert len(h.objects()) == 1 and len(h.loose(o, o)) == 1
        assert h.has_cell(ident, ident, LoosePath.of(u), LoosePath.of(u))
        assert not h.has_cell(ident, ident, LoosePath.of(u),
                              LoosePath.empty(o))

    def test_indiscrete_singleton_unit(self):
        h = shape_avdc("indiscrete", discrete_category(("*",)))
        o = h.objects()[0]
        ident = h.identity(o)
        u = h.loose(o, o)[0]
        assert h.has_cell(ident, ident, LoosePath.of(u), LoosePath.empty(o))

    def test_discrete_no_loose(self):
        h = shape_avdc("discrete", discrete_category(("a", "b")))
        a, b = h.objects()
        assert h.loose(a, b) == [] and h.loose(a, a) == []

    def test_diminish_indiscrete_matches_vd(self):
        cat = discrete_category(("a", "b"))
        dim = diminish(shape_avdc("indiscrete", cat))
        vd = shape_avdc("vd-indiscrete", cat)
        for a in dim.objects():
            for b in dim.objects():
                va = vd.object(a.key)
                vb = vd.object(b.key)
                assert len(dim.loose(a, b)) == len(vd.loose(va, vb))
                u = dim.loose(a, b)[0]
                vu = vd.loose(va, vb)[0]
                assert len(dim.cells(dim.identity(a), dim.identity(b),
                                     LoosePath.of(u), LoosePath.of(u))) == \
                    len(vd.cells(vd.identity(va), vd.identity(vb),
                                 LoosePath.of(vu), LoosePath.of(vu)))
                # no 0-coary cells under a loose arrow on either side
                if a == b:
                    assert not dim.cells(dim.identity(a), dim.identity(a),
                                         LoosePath.of(u),
                                         LoosePath.empty(a))


PRES = """
[objects]
A
B
[tight]
f : A -> B
[loose]
u : A -> B
[cells arity=1]
id_A id_B | u | u -> yes
[flags]
diminished = yes
"""


class TestPresentations:
    def test_load(self):
        h = load_presentation(PRES)
        assert len(h.objects()) == 2

    def test_round_trip(self):
        pf = parse_presentation(PRES)
        text = dump_presentation(pf)
        assert dump_presentation(parse_presentation(text)) == text

    def test_parse_error(self):
        with pytest.raises(PresentationError):
            parse_presentation("stray content")

    def test_non_thin_rejected(self):
        with pytest.raises(UnsupportedError):
            parse_presentation(PRES.replace("-> yes", "-> alpha"))

    def test_bad_compose_closure(self):
        text = """
[objects]
A
B
C
[tight]
f : A -> B
g : B -> C
[flags]
"""
        with pytest.raises(ClosureError):
            load_presentation(text)
