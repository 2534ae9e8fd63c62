"""Matrix, module and enriched-profunctor constructions over a base AVDC.

* ``diminish``         -- forget all non-identity cells with empty bottom
* ``mat``              -- colored sets, family maps, matrices of loose arrows
* ``mod_construction`` -- monoids, monoid maps, bimodules
* ``prof``             -- enriched categories = modules over matrices
* ``embed``            -- the canonical inclusions Y, U, Z
* ``transpose_mod``    -- diagrams into modules vs diminished diagrams
* ``classifier_bijection`` -- functors out of a one-object classifier vs
                              preobjects
* ``slice_avdc``, ``nerve`` -- slices and the nerve construction

Handles built here are lazy: enumerations are computed per hom-set on
demand and cached, and the caller supplies the universe of objects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from .core import (AvdcHandle, AvdFunctor, BoundaryError, CellRecord,
                   CompositionError, LooseArrow, LoosePath, ObjectRef,
                   TightArrow, ValidationError, cells_equal, skey,
                   thin_functor)


def _pk(cell: CellRecord) -> Any:
    """Payload key of a cell for building structural arrow keys."""
    return cell.payload


# --------------------------------------------------------------------------- #
# diminish
# --------------------------------------------------------------------------- #

class DiminishedAvdc(AvdcHandle):
    """The same AVDC with every cell of empty bottom removed, except the
    tight identity cells."""

    diminished = True

    def __init__(self, base: AvdcHandle):
        super().__init__(f"dim-{base.name}")
        self.base = base
        self.thin = base.thin

    # translation ----------------------------------------------------------- #

    def from_base_obj(self, a: ObjectRef) -> ObjectRef:
        return ObjectRef(self.avdc_id, a.key)

    def to_base_obj(self, a: ObjectRef) -> ObjectRef:
        return ObjectRef(self.base.avdc_id, a.key)

    def from_base_tight(self, f: TightArrow) -> TightArrow:
        return TightArrow(self.from_base_obj(f.src), self.from_base_obj(f.dst),
                          f.key)

    def to_base_tight(self, f: TightArrow) -> TightArrow:
        return TightArrow(self.to_base_obj(f.src), self.to_base_obj(f.dst),
                          f.key)

    def from_base_loose(self, u: LooseArrow) -> LooseArrow:
        return LooseArrow(self.from_base_obj(u.src), self.from_base_obj(u.dst),
                          u.key)

    def to_base_path(self, p: LoosePath) -> LoosePath:
        return LoosePath(self.to_base_obj(p.src), self.to_base_obj(p.dst),
                         tuple(LooseArrow(self.to_base_obj(u.src),
                                          self.to_base_obj(u.dst), u.key)
                               for u in p.arrows))

    def from_base_cell(self, c: CellRecord) -> CellRecord:
        return CellRecord(self.from_base_tight(c.left),
                          self.from_base_tight(c.right),
                          LoosePath(self.from_base_obj(c.top.src),
                                    self.from_base_obj(c.top.dst),
                                    tuple(self.from_base_loose(u)
                                          for u in c.top.arrows)),
                          LoosePath(self.from_base_obj(c.bottom.src),
                                    self.from_base_obj(c.bottom.dst),
                                    tuple(self.from_base_loose(u)
                                          for u in c.bottom.arrows)),
                          c.payload)

    # handle interface ------------------------------------------------------ #

    def objects(self):
        return [self.from_base_obj(a) for a in self.base.objects()]

    def tight(self, a, b):
        return [self.from_base_tight(f)
                for f in self.base.tight(self.to_base_obj(a),
                                         self.to_base_obj(b))]

    def identity(self, a):
        return self.from_base_tight(self.base.identity(self.to_base_obj(a)))

    def compose(self, f, g):
        return self.from_base_tight(
            self.base.compose(self.to_base_tight(f), self.to_base_tight(g)))

    def loose(self, a, b):
        return [self.from_base_loose(u)
                for u in self.base.loose(self.to_base_obj(a),
                                         self.to_base_obj(b))]

    def _cells(self, left, right, top, bottom):
        if len(bottom) == 0:
            if len(top) == 0 and left == right:
                base = self.base.tight_identity_cell(self.to_base_tight(left))
                return [self.from_base_cell(base)]
            return []
        bs = self.base.cells(self.to_base_tight(left),
                             self.to_base_tight(right),
                             self.to_base_path(top), self.to_base_path(bottom))
        return [self.from_base_cell(c) for c in bs]

    def multicompose(self, alphas, beta):
        from .core import paste_boundary
        left, right, top, bottom = paste_boundary(alphas, beta)
        if not alphas:
            return beta
        if len(bottom) == 0:
            # the composite must again be a tight identity cell
            if len(top) != 0 or left != right:
                raise CompositionError("no such cell after diminishing")
            return self.tight_identity_cell(left)
        if self.thin:
            cs = self.cells(left, right, top, bottom)
            if not cs:
                raise CompositionError("multicomposite missing")
            return cs[0]
        raise NotImplementedError


def diminish(base: AvdcHandle) -> DiminishedAvdc:
    return DiminishedAvdc(base)


def diminish_inclusion(dim_handle: DiminishedAvdc) -> AvdFunctor:
    """The identity-on-structure inclusion dim(X) -> X."""
    d = dim_handle
    base = d.base

    def cell_map(c):
        if len(c.bottom) == 0:
            return base.tight_identity_cell(d.to_base_tight(c.left))
        got = base.cells(d.to_base_tight(c.left), d.to_base_tight(c.right),
                         d.to_base_path(c.top), d.to_base_path(c.bottom))
        for g in got:
            if g.payload == c.payload:
                return g
        raise CompositionError("cell has no image")

    return AvdFunctor(d, base, d.to_base_obj, d.to_base_tight,
                      lambda u: LooseArrow(d.to_base_obj(u.src),
                                           d.to_base_obj(u.dst), u.key),
                      cell_map, name="dim-inclusion")


# --------------------------------------------------------------------------- #
# colored sets and matrices
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class ColoredSet:
    """A finite set whose elements carry colors (object keys of the base)."""
    items: tuple              # sorted pairs (element, color key)

    @staticmethod
    def of(pairs) -> "ColoredSet":
        return ColoredSet(tuple(sorted(pairs, key=skey)))

    @property
    def elements(self) -> tuple:
        try:
            return self._elements
        except AttributeError:
            object.__setattr__(self, "_elements",
                               tuple(e for e, _ in self.items))
            return self._elements

    def color(self, element) -> Any:
        try:
            cm = self._color_map
        except AttributeError:
            cm = dict(self.items)
            object.__setattr__(self, "_color_map", cm)
        return cm[element]

    @property
    def key(self):
        return self.items


@dataclass(frozen=True)
class MatrixRecord:
    """A matrix of base loose-arrow keys, indexed by element pairs."""
    src: tuple                # ColoredSet key
    dst: tuple
    entries: tuple            # sorted pairs ((x, y), loose key)

    def entry(self, x, y) -> Any:
        for (a, b), k in self.entries:
            if a == x and b == y:
                return k
        raise KeyError((x, y))

    @property
    def key(self):
        return ("matrix", self.entries)


class MatAvdc(AvdcHandle):
    """Matrices over a base AVDC: objects are colored sets, tight arrows
    are family maps, loose arrows are matrices, and 1-coary cells are
    families of base cells indexed by element tuples.  Diminished."""

    diminished = True

    def __init__(self, base: AvdcHandle, universe):
        super().__init__(f"mat-{base.name}")
        self.base = base
        self.thin = base.thin
        self._sets: Dict[Any, ColoredSet] = {}
        for cs in universe:
            self._sets[cs.key] = cs
        self._loose_cache: Dict[tuple, list] = {}
        self._tight_cache: Dict[tuple, list] = {}
        self._base_restrictions: Dict[tuple, Any] = {}
        self._entry_maps: Dict[Any, dict] = {}
        self._base_arrow_memo: Dict[tuple, Any] = {}
        self._paste_memo: Dict[tuple, tuple] = {}

    # base lookups ---------------------------------------------------------- #

    def colored_set(self, ref: ObjectRef) -> ColoredSet:
        return self._sets[ref.key]

    def base_obj(self, color_key) -> ObjectRef:
        return ObjectRef(self.base.avdc_id, color_key)

    def base_tight_by_key(self, a, b, key) -> TightArrow:
        memo = self._base_arrow_memo
        mk = ("t", a, b, key)
        arrow = memo.get(mk)
        if arrow is None:
            arrow = TightArrow(self.base_obj(a), self.base_obj(b), key)
            memo[mk] = arrow
        return arrow

    def base_loose_by_key(self, a, b, key) -> LooseArrow:
        memo = self._base_arrow_memo
        mk = ("l", a, b, key)
        arrow = memo.get(mk)
        if arrow is None:
            arrow = LooseArrow(self.base_obj(a), self.base_obj(b), key)
            memo[mk] = arrow
        return arrow

    def _entry_map(self, u: LooseArrow) -> dict:
        m = self._entry_maps.get(u.key)
        if m is None:
            m = dict(u.key[1])
            self._entry_maps[u.key] = m
        return m

    def object_of(self, cs: ColoredSet) -> ObjectRef:
        if cs.key not in self._sets:
            raise KeyError("colored set outside the declared universe")
        return ObjectRef(self.avdc_id, cs.key)

    # handle interface ------------------------------------------------------ #

    def objects(self):
        return [ObjectRef(self.avdc_id, k)
                for k in sorted(self._sets, key=skey)]

    def tight(self, a, b):
        got = self._tight_cache.get((a, b))
        if got is not None:
            return got
        A, B = self._sets[a.key], self._sets[b.key]
        out = []
        if not A.elements:
            out.append(TightArrow(a, b, ()))
        else:
            per_element = []
            for x in A.elements:
                choices = []
                for y in B.elements:
                    for f in self.base.tight(self.base_obj(A.color(x)),
                                             self.base_obj(B.color(y))):
                        choices.append((x, (y, f.key)))
                per_element.append(choices)
            for combo in itertools.product(*per_element):
                out.append(TightArrow(a, b, tuple(sorted(combo, key=skey))))
        out.sort(key=lambda f: skey(f.key))
        self._tight_cache[(a, b)] = out
        return out

    def map_of(self, f: TightArrow) -> dict:
        return dict(f.key)

    def identity(self, a):
        memo = self._base_arrow_memo
        mk = ("id", a)
        arrow = memo.get(mk)
        if arrow is None:
            A = self._sets[a.key]
            key = tuple(sorted(
                ((x, (x, self.base.identity(self.base_obj(A.color(x))).key))
                 for x in A.elements), key=skey))
            arrow = TightArrow(a, a, key)
            memo[mk] = arrow
        return arrow

    def compose(self, f, g):
        if f.dst != g.src:
            raise BoundaryError("tight arrows not composable")
        memo = self._base_arrow_memo
        mk = ("c", f, g)
        arrow = memo.get(mk)
        if arrow is not None:
            return arrow
        A = self._sets[f.src.key]
        B = self._sets[f.dst.key]
        C = self._sets[g.dst.key]
        fm, gm = dict(f.key), dict(g.key)
        combo = []
        for x in A.elements:
            y, fk = fm[x]
            z, gk = gm[y]
            bf = self.base_tight_by_key(A.color(x), B.color(y), fk)
            bg = self.base_tight_by_key(B.color(y), C.color(z), gk)
            combo.append((x, (z, self.base.compose(bf, bg).key)))
        arrow = TightArrow(f.src, g.dst, tuple(sorted(combo, key=skey)))
        memo[mk] = arrow
        return arrow

    def loose(self, a, b):
        got = self._loose_cache.get((a, b))
        if got is not None:
            return got
        A, B = self._sets[a.key], self._sets[b.key]
        cells_idx = []
        for x in A.elements:
            for y in B.elements:
                opts = [((x, y), u.key)
                        for u in self.base.loose(self.base_obj(A.color(x)),
                                                 self.base_obj(B.color(y)))]
                cells_idx.append(opts)
        out = []
        for combo in itertools.product(*cells_idx):
            m = MatrixRecord(a.key, b.key, tuple(sorted(combo, key=skey)))
            out.append(LooseArrow(a, b, m.key))
        out.sort(key=lambda u: skey(u.key))
        self._loose_cache[(a, b)] = out
        return out

    def matrix_of(self, u: LooseArrow) -> MatrixRecord:
        return MatrixRecord(u.src.key, u.dst.key, u.key[1])

    def loose_of(self, matrix: MatrixRecord) -> LooseArrow:
        return LooseArrow(ObjectRef(self.avdc_id, matrix.src),
                          ObjectRef(self.avdc_id, matrix.dst), matrix.key)

    def add_colored_set(self, cs: ColoredSet) -> ObjectRef:
        """Extend the universe with a further colored set."""
        self._sets.setdefault(cs.key, cs)
        return ObjectRef(self.avdc_id, cs.key)

    def restrict_loose(self, f: TightArrow, g: TightArrow, u: LooseArrow):
        """The restriction u(f, g), computed entrywise in the base.

        Returns the cartesian witness cell (f, g; (r) => (u)), or None when
        some entry has no restriction in the base.  Thin bases only."""
        if not self.thin:
            raise NotImplementedError("only thin bases are supported")
        from .universal import find_restriction
        from .core import Bounds
        A = self._sets[f.src.key]
        B = self._sets[g.src.key]
        umat = self.matrix_of(u)
        fm, gm = dict(f.key), dict(g.key)
        entries = []
        for x in A.elements:
            fx, fk = fm[x]
            for y in B.elements:
                gy, gk = gm[y]
                entry = self.base_loose_by_key(
                    self._sets[u.src.key].color(fx),
                    self._sets[u.dst.key].color(gy), umat.entry(fx, gy))
                bf = self.base_tight_by_key(A.color(x),
                                            self._sets[u.src.key].color(fx),
                                            fk)
                bg = self.base_tight_by_key(B.color(y),
                                            self._sets[u.dst.key].color(gy),
                                            gk)
                ckey = (entry, bf, bg)
                if ckey in self._base_restrictions:
                    got = self._base_restrictions[ckey]
                elif hasattr(self.base, "restrict_loose"):
                    cell = self.base.restrict_loose(bf, bg, entry)
                    got = None if cell is None else cell.top.arrows[0]
                    self._base_restrictions[ckey] = got
                else:
                    w = find_restriction(LoosePath.of(entry), bf, bg,
                                         Bounds())
                    got = None if w is None else w.loose
                    self._base_restrictions[ckey] = got
                if got is None:
                    return None
                entries.append(((x, y), got.key))
        rec = MatrixRecord(f.src.key, g.src.key,
                           tuple(sorted(entries, key=skey)))
        r = self.loose_of(rec)
        cs = self.cells(f, g, LoosePath.of(r), LoosePath.of(u))
        return cs[0] if cs else None

    # cells ----------------------------------------------------------------- #

    def _component_boundaries(self, left, right, top, bottom):
        """Yield (index tuple, base boundary) for each component."""
        sets = [self._sets[o.key] for o in top.objects()]
        fm, gm = dict(left.key), dict(right.key)
        n = len(top)
        bentries = self._entry_map(bottom.arrows[0]) if len(bottom) else None
        tentries = [self._entry_map(u) for u in top.arrows]
        bset_l = self._sets[bottom.src.key]
        bset_r = self._sets[bottom.dst.key]
        for tup in itertools.product(*(s.elements for s in sets)):
            x0, xn = tup[0], tup[-1]
            fy, fk = fm[x0]
            gy, gk = gm[xn]
            bl = self.base_tight_by_key(sets[0].color(x0),
                                        bset_l.color(fy), fk)
            br = self.base_tight_by_key(sets[-1].color(xn),
                                        bset_r.color(gy), gk)
            arrows = [self.base_loose_by_key(
                sets[i].color(tup[i]), sets[i + 1].color(tup[i + 1]),
                tentries[i][(tup[i], tup[i + 1])]) for i in range(n)]
            btop = (LoosePath.of(*arrows) if arrows
                    else LoosePath.empty(bl.src))
            bbot = LoosePath.of(self.base_loose_by_key(
                bset_l.color(fy), bset_r.color(gy), bentries[(fy, gy)]))
            yield tup, (bl, br, btop, bbot)

    def _cells(self, left, right, top, bottom):
        if len(bottom) == 0:
            if len(top) == 0 and left == right:
                return [self.tight_identity_cell(left)]
            return []
        fast = getattr(self.base, "has_cell_by_keys", None)
        if self.thin and fast is not None:
            sets = [self._sets[o.key] for o in top.objects()]
            fm, gm = dict(left.key), dict(right.key)
            bentries = self._entry_map(bottom.arrows[0])
            tentries = [self._entry_map(u) for u in top.arrows]
            n = len(top)
            for tup in itertools.product(*(s.elements for s in sets)):
                fy, fk = fm[tup[0]]
                gy, gk = gm[tup[-1]]
                tops = tuple(tentries[i][(tup[i], tup[i + 1])]
                             for i in range(n))
                if not fast(fk, gk, tops, bentries[(fy, gy)]):
                    return []
            return [CellRecord(left, right, top, bottom, payload=None)]
        per_component = []
        index = []
        for tup, (bl, br, bt, bb) in self._component_boundaries(
                left, right, top, bottom):
            found = self.base.cells(bl, br, bt, bb)
            if not found:
                return []
            per_component.append(found)
            index.append(tup)
        if self.thin:
            return [CellRecord(left, right, top, bottom, payload=None)]
        out = []
        for combo in itertools.product(*per_component):
            payload = tuple(zip(index, (c.payload for c in combo)))
            out.append(CellRecord(left, right, top, bottom, payload=payload))
        out.sort(key=lambda c: skey(c.payload))
        return out

    def tight_identity_cell(self, f):
        if self.thin:
            return CellRecord(f, f, LoosePath.empty(f.src),
                              LoosePath.empty(f.dst), payload=None)
        A = self._sets[f.src.key]
        fm = dict(f.key)
        payload = []
        for x in A.elements:
            y, fk = fm[x]
            bf = self.base_tight_by_key(A.color(x),
                                        self._sets[f.dst.key].color(y), fk)
            payload.append(((x,), self.base.tight_identity_cell(bf).payload))
        return CellRecord(f, f, LoosePath.empty(f.src),
                          LoosePath.empty(f.dst),
                          payload=tuple(payload))

    def loose_identity_cell(self, u):
        if self.thin:
            p = LoosePath.of(u)
            return CellRecord(self.identity(u.src), self.identity(u.dst),
                              p, p, payload=None)
        A, B = self._sets[u.src.key], self._sets[u.dst.key]
        mat = self.matrix_of(u)
        payload = []
        for x in A.elements:
            for y in B.elements:
                bu = self.base_loose_by_key(A.color(x), B.color(y),
                                            mat.entry(x, y))
                payload.append(((x, y),
                                self.base.loose_identity_cell(bu).payload))
        p = LoosePath.of(u)
        return CellRecord(self.identity(u.src), self.identity(u.dst), p, p,
                          payload=tuple(sorted(payload, key=skey)))

    def multicompose(self, alphas, beta):
        from .core import paste_boundary
        if self.thin:
            mk = (tuple(alphas), beta)
            got = self._paste_memo.get(mk)
            if got is None:
                got = paste_boundary(alphas, beta)
                self._paste_memo[mk] = got
            left, right, top, bottom = got
        else:
            left, right, top, bottom = paste_boundary(alphas, beta)
        if not alphas:
            return beta
        if len(bottom) == 0:
            if len(top) != 0 or left != right:
                raise CompositionError("no 0-coary cells besides identities")
            return self.tight_identity_cell(left)
        if self.thin:
            cs = self.cells(left, right, top, bottom)
            if not cs:
                raise CompositionError("multicomposite missing")
            return cs[0]
        return self._compose_componentwise(alphas, beta, left, right, top,
                                           bottom)

    def _base_cell(self, boundary, payload) -> CellRecord:
        for c in self.base.cells(*boundary):
            if c.payload == payload:
                return c
        raise CompositionError("component cell not found")

    def _component_lookup(self, cell: CellRecord) -> dict:
        if len(cell.bottom) == 0:
            # tight identity cell: indexed by single elements
            return dict(cell.payload)
        return dict(cell.payload)

    def _compose_componentwise(self, alphas, beta, left, right, top, bottom):
        spans = []
        pos = 0
        for a in alphas:
            spans.append((pos, pos + len(a.top)))
            pos += len(a.top)
        sets = [self._sets[o.key] for o in top.objects()]
        payload = []
        for tup, (bl, br, bt, bb) in self._component_boundaries(
                left, right, top, bottom):
            row = []
            interface = []
            for a, (s, e) in zip(alphas, spans):
                sub = tup[s:e + 1]
                comp_map = self._component_lookup(a)
                if len(a.bottom) == 0:
                    idx = (sub[0],)
                else:
                    idx = sub
                base_pay = comp_map[idx]
                # reconstruct the base component cell
                fm = dict(a.left.key)
                gm = dict(a.right.key)
                la = self._sets[a.left.src.key]
                ra = self._sets[a.right.src.key]
                lb = self._sets[a.left.dst.key]
                rb = self._sets[a.right.dst.key]
                x0, xn = sub[0], sub[-1]
                fy, fk = fm[x0]
                gy, gk = gm[xn]
                cl = self.base_tight_by_key(la.color(x0), lb.color(fy), fk)
                cr = self.base_tight_by_key(ra.color(xn), rb.color(gy), gk)
                arrows = []
                tsets = [self._sets[o.key] for o in a.top.objects()]
                for i in range(len(a.top)):
                    m = self.matrix_of(a.top.arrows[i])
                    arrows.append(self.base_loose_by_key(
                        tsets[i].color(sub[i]), tsets[i + 1].color(sub[i + 1]),
                        m.entry(sub[i], sub[i + 1])))
                ctop = (LoosePath.of(*arrows) if arrows
                        else LoosePath.empty(cl.src))
                if len(a.bottom):
                    m = self.matrix_of(a.bottom.arrows[0])
                    cbot = LoosePath.of(self.base_loose_by_key(
                        lb.color(fy), rb.color(gy), m.entry(fy, gy)))
                else:
                    cbot = LoosePath.empty(cl.dst)
                row.append(self._base_cell((cl, cr, ctop, cbot), base_pay))
                interface.append(fy)
            # beta's component index: images of the interface elements
            bmap = dict(alphas[-1].right.key)
            last = bmap[tup[-1]][0]
            beta_idx = tuple(interface) + (last,)
            if len(beta.top) == 0:
                beta_idx = (interface[0] if interface else
                            dict(beta.left.key).get(tup[0], (tup[0],))[0],)
            comp_map = self._component_lookup(beta)
            if len(beta.bottom) == 0:
                bidx = (beta_idx[0],)
            else:
                bidx = beta_idx
            # reconstruct beta's component
            fm = dict(beta.left.key)
            gm = dict(beta.right.key)
            la = self._sets[beta.left.src.key]
            lb = self._sets[beta.left.dst.key]
            ra = self._sets[beta.right.src.key]
            rb = self._sets[beta.right.dst.key]
            x0, xn = beta_idx[0], beta_idx[-1]
            fy, fk = fm[x0]
            gy, gk = gm[xn]
            cl = self.base_tight_by_key(la.color(x0), lb.color(fy), fk)
            cr = self.base_tight_by_key(ra.color(xn), rb.color(gy), gk)
            tsets = [self._sets[o.key] for o in beta.top.objects()]
            arrows = []
            for i in range(len(beta.top)):
                m = self.matrix_of(beta.top.arrows[i])
                arrows.append(self.base_loose_by_key(
                    tsets[i].color(beta_idx[i]),
                    tsets[i + 1].color(beta_idx[i + 1]),
                    m.entry(beta_idx[i], beta_idx[i + 1])))
            ctop = (LoosePath.of(*arrows) if arrows
                    else LoosePath.empty(cl.src))
            m = self.matrix_of(beta.bottom.arrows[0])
            cbot = LoosePath.of(self.base_loose_by_key(
                lb.color(fy), rb.color(gy), m.entry(fy, gy)))
            bcell = self._base_cell((cl, cr, ctop, cbot), comp_map[bidx])
            got = self.base.multicompose(tuple(row), bcell)
            payload.append((tup, got.payload))
        return CellRecord(left, right, top, bottom,
                          payload=tuple(sorted(payload, key=skey)))


def mat(base: AvdcHandle, universe) -> MatAvdc:
    return MatAvdc(base, list(universe))


# --------------------------------------------------------------------------- #
# monoids and bimodules
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class MonoidRecord:
    """A monoid in an AVDC: an object carrying a loose arrow with unit and
    multiplication cells.  Cells are identified by their payloads."""
    obj_key: Any              # underlying object
    loose_key: Any            # endo loose arrow
    unit_payload: Any         # payload of the unit cell () => A1
    mult_payload: Any         # payload of the multiplication cell

    @property
    def key(self):
        return ("monoid", self.obj_key, self.loose_key,
                self.unit_payload, self.mult_payload)


@dataclass(frozen=True)
class BimoduleRecord:
    """A bimodule between monoids: a loose arrow with two action cells."""
    src_monoid: Any           # MonoidRecord key
    dst_monoid: Any
    loose_key: Any
    left_payload: Any
    right_payload: Any

    @property
    def key(self):
        return ("bimodule", self.loose_key, self.left_payload,
                self.right_payload)


class ModAvdc(AvdcHandle):
    """Monoids, monoid maps and bimodules in a base AVDC.

    A cell is identified with its underlying base cell, subject to the
    condition that inserting the hom loose arrow of any boundary monoid in
    any position yields the same composite along either action."""

    diminished = False

    def __init__(self, base: AvdcHandle, universe):
        super().__init__(f"mod-{base.name}")
        self.base = base
        self.thin = base.thin
        self._tight_cache: Dict[tuple, list] = {}
        self._loose_cache: Dict[tuple, list] = {}
        self._hom_data: Dict[Any, tuple] = {}
        self._bimod_data: Dict[Any, BimoduleRecord] = {}
        self._monoid_parts_memo: Dict[Any, tuple] = {}
        self._bimod_parts_memo: Dict[LooseArrow, tuple] = {}
        self._monoids: Dict[Any, MonoidRecord] = {}
        for m in universe:
            self.validate_monoid(m)
            self._monoids[m.key] = m

    # base lookup ----------------------------------------------------------- #

    def base_obj(self, key) -> ObjectRef:
        return ObjectRef(self.base.avdc_id, key)

    def base_loose_by_key(self, a, b, key) -> LooseArrow:
        return LooseArrow(self.base_obj(a), self.base_obj(b), key)

    def base_cell(self, left, right, top, bottom, payload) -> CellRecord:
        for c in self.base.cells(left, right, top, bottom):
            if c.payload == payload:
                return c
        raise CompositionError("referenced base cell not found")

    def monoid(self, ref: ObjectRef) -> MonoidRecord:
        return self._monoids[ref.key]

    def monoid_parts(self, m: MonoidRecord):
        got = self._monoid_parts_memo.get(m.key)
        if got is not None:
            return got
        a0 = self.base_obj(m.obj_key)
        a1 = self.base_loose_by_key(m.obj_key, m.obj_key, m.loose_key)
        ida = self.base.identity(a0)
        ae = self.base_cell(ida, ida, LoosePath.empty(a0), LoosePath.of(a1),
                            m.unit_payload)
        am = self.base_cell(ida, ida, LoosePath.of(a1, a1), LoosePath.of(a1),
                            m.mult_payload)
        self._monoid_parts_memo[m.key] = (a0, a1, ae, am)
        return a0, a1, ae, am

    def validate_monoid(self, m: MonoidRecord) -> None:
        a0, a1, ae, am = self.monoid_parts(m)
        eq = self.base.loose_identity_cell(a1)
        if not cells_equal(self.base.multicompose((ae, eq), am), eq):
            raise ValidationError("monoid left unit law fails")
        if not cells_equal(self.base.multicompose((eq, ae), am), eq):
            raise ValidationError("monoid right unit law fails")
        if not cells_equal(self.base.multicompose((am, eq), am),
                           self.base.multicompose((eq, am), am)):
            raise ValidationError("monoid associativity fails")

    def object_of(self, m: MonoidRecord) -> ObjectRef:
        if m.key not in self._monoids:
            raise KeyError("monoid outside the declared universe")
        return ObjectRef(self.avdc_id, m.key)

    # handle interface ------------------------------------------------------ #

    def objects(self):
        return [ObjectRef(self.avdc_id, k)
                for k in sorted(self._monoids, key=skey)]

    def tight(self, a, b):
        got = self._tight_cache.get((a, b))
        if got is not None:
            return got
        A = self._monoids[a.key]
        B = self._monoids[b.key]
        a0, a1, ae, am = self.monoid_parts(A)
        b0, b1, be, bm = self.monoid_parts(B)
        out = []
        eq_a1 = self.base.loose_identity_cell(a1)
        thin_base = self.base.thin
        for f0 in self.base.tight(a0, b0):
            tid = self.base.tight_identity_cell(f0)
            for f1 in self.base.cells(f0, f0, LoosePath.of(a1),
                                      LoosePath.of(b1)):
                # both compatibility laws compare parallel cells, so they
                # hold automatically over a thin base
                if not thin_base and not cells_equal(
                        self.base.multicompose((ae,), f1),
                        self.base.multicompose((tid,), be)):
                    continue
                if not thin_base and not cells_equal(
                        self.base.multicompose((am,), f1),
                        self.base.multicompose((f1, f1), bm)):
                    continue
                key = ("hom", f0.key, f1.payload)
                arrow = TightArrow(a, b, key)
                self._hom_data[(a, b, key)] = (f0, f1)
                out.append(arrow)
        out.sort(key=lambda f: skey(f.key))
        self._tight_cache[(a, b)] = out
        return got or out

    def hom_parts(self, f: TightArrow):
        got = self._hom_data.get((f.src, f.dst, f.key))
        if got is None:
            self.tight(f.src, f.dst)
            got = self._hom_data[(f.src, f.dst, f.key)]
        return got

    def identity(self, a):
        A = self._monoids[a.key]
        a0, a1, _, _ = self.monoid_parts(A)
        f0 = self.base.identity(a0)
        f1 = self.base.loose_identity_cell(a1)
        key = ("hom", f0.key, f1.payload)
        self._hom_data[(a, a, key)] = (f0, f1)
        return TightArrow(a, a, key)

    def compose(self, f, g):
        if f.dst != g.src:
            raise BoundaryError("tight arrows not composable")
        f0, f1 = self.hom_parts(f)
        g0, g1 = self.hom_parts(g)
        h0 = self.base.compose(f0, g0)
        h1 = self.base.multicompose((f1,), g1)
        key = ("hom", h0.key, h1.payload)
        self._hom_data[(f.src, g.dst, key)] = (h0, h1)
        return TightArrow(f.src, g.dst, key)

    def loose(self, a, b):
        got = self._loose_cache.get((a, b))
        if got is not None:
            return got
        A = self._monoids[a.key]
        B = self._monoids[b.key]
        a0, a1, ae, am = self.monoid_parts(A)
        b0, b1, be, bm = self.monoid_parts(B)
        out = []
        thin_base = self.base.thin
        for m1 in self.base.loose(a0, b0):
            eq = self.base.loose_identity_cell(m1)
            ida = self.base.identity(a0)
            idb = self.base.identity(b0)
            for ml in self.base.cells(ida, idb, LoosePath.of(a1, m1),
                                      LoosePath.of(m1)):
                # all bimodule laws compare parallel cells, so they hold
                # automatically over a thin base
                if not thin_base and not cells_equal(
                        self.base.multicompose((ae, eq), ml), eq):
                    continue
                if not thin_base and not cells_equal(
                        self.base.multicompose((am, eq), ml),
                        self.base.multicompose(
                            (self.base.loose_identity_cell(a1), ml), ml)):
                    continue
                for mr in self.base.cells(ida, idb, LoosePath.of(m1, b1),
                                          LoosePath.of(m1)):
                    if not thin_base and not cells_equal(
                            self.base.multicompose((eq, be), mr), eq):
                        continue
                    if not thin_base and not cells_equal(
                            self.base.multicompose((eq, bm), mr),
                            self.base.multicompose(
                                (mr, self.base.loose_identity_cell(b1)), mr)):
                        continue
                    # the two actions commute
                    if not thin_base and not cells_equal(
                            self.base.multicompose(
                                (self.base.loose_identity_cell(a1), mr), ml),
                            self.base.multicompose(
                                (ml, self.base.loose_identity_cell(b1)), mr)):
                        continue
                    rec = BimoduleRecord(a.key, b.key, m1.key,
                                         ml.payload, mr.payload)
                    self._bimod_data[rec.key] = rec
                    out.append(LooseArrow(a, b, rec.key))
        out.sort(key=lambda u: skey(u.key))
        self._loose_cache[(a, b)] = out
        return out

    def bimodule(self, u: LooseArrow) -> BimoduleRecord:
        rec = self._bimod_data.get(u.key)
        if rec is None:
            self.loose(u.src, u.dst)
            rec = self._bimod_data[u.key]
        return rec

    def bimodule_parts(self, u: LooseArrow):
        got = self._bimod_parts_memo.get(u)
        if got is not None:
            return got
        rec = self.bimodule(u)
        A = self._monoids[u.src.key]
        B = self._monoids[u.dst.key]
        a0, a1, _, _ = self.monoid_parts(A)
        b0, b1, _, _ = self.monoid_parts(B)
        m1 = self.base_loose_by_key(A.obj_key, B.obj_key, rec.loose_key)
        ida = self.base.identity(a0)
        idb = self.base.identity(b0)
        ml = self.base_cell(ida, idb, LoosePath.of(a1, m1), LoosePath.of(m1),
                            rec.left_payload)
        mr = self.base_cell(ida, idb, LoosePath.of(m1, b1), LoosePath.of(m1),
                            rec.right_payload)
        self._bimod_parts_memo[u] = (m1, ml, mr)
        return m1, ml, mr

    def loose_unit_of(self, m: MonoidRecord) -> LooseArrow:
        """The hom bimodule of a monoid, acting on itself both ways."""
        rec = BimoduleRecord(m.key, m.key, m.loose_key,
                             m.mult_payload, m.mult_payload)
        self._bimod_data[rec.key] = rec
        ref = ObjectRef(self.avdc_id, m.key)
        return LooseArrow(ref, ref, rec.key)

    def add_monoid(self, m: MonoidRecord) -> ObjectRef:
        """Extend the universe with a further monoid."""
        if m.key not in self._monoids:
            self.validate_monoid(m)
            self._monoids[m.key] = m
        return ObjectRef(self.avdc_id, m.key)

    def restrict_loose(self, f: TightArrow, g: TightArrow, u: LooseArrow):
        """The restriction u(f, g) of a bimodule along monoid maps.

        Computed on the underlying loose arrow, with the action cells the
        induced ones; returns the cartesian witness cell or None.  Thin
        bases only."""
        if not self.thin:
            raise NotImplementedError("only thin bases are supported")
        f0, _ = self.hom_parts(f)
        g0, _ = self.hom_parts(g)
        u1, _, _ = self.bimodule_parts(u)
        if hasattr(self.base, "restrict_loose"):
            w = self.base.restrict_loose(f0, g0, u1)
            r1 = None if w is None else w.top.arrows[0]
        else:
            from .universal import find_restriction
            from .core import Bounds
            w = find_restriction(LoosePath.of(u1), f0, g0, Bounds())
            r1 = None if w is None else w.loose
        if r1 is None:
            return None
        A = self._monoids[f.src.key]
        B = self._monoids[g.src.key]
        _, a1, _, _ = self.monoid_parts(A)
        _, b1, _, _ = self.monoid_parts(B)
        ida = self.base.identity(r1.src)
        idb = self.base.identity(r1.dst)
        rl = self.base.cells(ida, idb, LoosePath.of(a1, r1),
                             LoosePath.of(r1))
        rr = self.base.cells(ida, idb, LoosePath.of(r1, b1),
                             LoosePath.of(r1))
        if not (rl and rr):
            return None
        rec = BimoduleRecord(A.key, B.key, r1.key, rl[0].payload,
                             rr[0].payload)
        self._bimod_data[rec.key] = rec
        r = LooseArrow(f.src, g.src, rec.key)
        cs = self.cells(f, g, LoosePath.of(r), LoosePath.of(u))
        return cs[0] if cs else None

    def restrict_nullary(self, f: TightArrow, g: TightArrow):
        """The restriction of the empty path along (f, g): the hom
        bimodule of the common target restricted along both maps.

        Returns the cartesian 0-coary witness cell or None.  Thin bases
        only."""
        if not self.thin:
            raise NotImplementedError("only thin bases are supported")
        if f.dst != g.dst:
            return None
        C = self._monoids[f.dst.key]
        c1 = self.base_loose_by_key(C.obj_key, C.obj_key, C.loose_key)
        f0, _ = self.hom_parts(f)
        g0, _ = self.hom_parts(g)
        if hasattr(self.base, "restrict_loose"):
            w = self.base.restrict_loose(f0, g0, c1)
            r1 = None if w is None else w.top.arrows[0]
        else:
            from .universal import find_restriction
            from .core import Bounds
            w = find_restriction(LoosePath.of(c1), f0, g0, Bounds())
            r1 = None if w is None else w.loose
        if r1 is None:
            return None
        A = self._monoids[f.src.key]
        B = self._monoids[g.src.key]
        _, a1, _, _ = self.monoid_parts(A)
        _, b1, _, _ = self.monoid_parts(B)
        ida = self.base.identity(r1.src)
        idb = self.base.identity(r1.dst)
        rl = self.base.cells(ida, idb, LoosePath.of(a1, r1),
                             LoosePath.of(r1))
        rr = self.base.cells(ida, idb, LoosePath.of(r1, b1),
                             LoosePath.of(r1))
        if not (rl and rr):
            return None
        rec = BimoduleRecord(A.key, B.key, r1.key, rl[0].payload,
                             rr[0].payload)
        self._bimod_data[rec.key] = rec
        r = LooseArrow(f.src, g.src, rec.key)
        cs = self.cells(f, g, LoosePath.of(r), LoosePath.empty(f.dst))
        return cs[0] if cs else None

    # cells ----------------------------------------------------------------- #

    def _underlying_boundary(self, left, right, top, bottom):
        f0, f1 = self.hom_parts(left)
        g0, g1 = self.hom_parts(right)
        tops = [self.bimodule_parts(u)[0] for u in top.arrows]
        btop = LoosePath.of(*tops) if tops else LoosePath.empty(f0.src)
        if len(bottom):
            n1 = self.bimodule_parts(bottom.arrows[0])[0]
            bbot = LoosePath.of(n1)
        else:
            B = self._monoids[left.dst.key]
            _, b1, _, _ = self.monoid_parts(B)
            bbot = LoosePath.of(b1)
        return f0, g0, btop, bbot

    def _insertion_ok(self, cell_base, left, right, top, bottom) -> bool:
        """The hom-insertion conditions making a base cell a module cell."""
        f0, f1 = self.hom_parts(left)
        g0, g1 = self.hom_parts(right)
        n = len(top)
        tops = [self.bimodule_parts(u) for u in top.arrows]
        eqs = [self.base.loose_identity_cell(t[0]) for t in tops]
        if len(bottom):
            n1, nl, nr = self.bimodule_parts(bottom.arrows[0])
        else:
            B = self._monoids[left.dst.key]
            _, b1, _, bm = self.monoid_parts(B)
            n1, nl, nr = b1, bm, bm
        # position 0: act through the left side or through the first module
        if n == 0:
            lhs = self.base.multicompose((f1, cell_base), nl)
            rhs = self.base.multicompose((cell_base, g1), nr)
            return cells_equal(lhs, rhs)
        lhs = self.base.multicompose((tops[0][1],) + tuple(eqs[1:]), cell_base)
        rhs = self.base.multicompose((f1, cell_base), nl)
        if not cells_equal(lhs, rhs):
            return False
        # position n
        lhs = self.base.multicompose(tuple(eqs[:-1]) + (tops[-1][2],),
                                     cell_base)
        rhs = self.base.multicompose((cell_base, g1), nr)
        if not cells_equal(lhs, rhs):
            return False
        # internal positions: right action of the i-th vs left action of the
        # (i+1)-th module
        for i in range(1, n):
            lhs = self.base.multicompose(
                tuple(eqs[:i - 1]) + (tops[i - 1][2],) + tuple(eqs[i:]),
                cell_base)
            rhs = self.base.multicompose(
                tuple(eqs[:i]) + (tops[i][1],) + tuple(eqs[i + 1:]),
                cell_base)
            if not cells_equal(lhs, rhs):
                return False
        return True

    def _cells(self, left, right, top, bottom):
        if len(bottom) == 0 and left.dst != right.dst:
            return []
        f0, g0, btop, bbot = self._underlying_boundary(left, right, top,
                                                       bottom)
        out = []
        for cand in self.base.cells(f0, g0, btop, bbot):
            # over a thin base the insertion conditions compare parallel
            # cells, which are equal whenever they exist; and composites
            # of valid pastings always exist, so the check is vacuous
            if self.base.thin or self._insertion_ok(cand, left, right,
                                                    top, bottom):
                out.append(CellRecord(left, right, top, bottom,
                                      payload=cand.payload))
        out.sort(key=lambda c: skey(c.payload))
        return out

    def tight_identity_cell(self, f):
        if self.thin:
            cs = self.cells(f, f, LoosePath.empty(f.src),
                            LoosePath.empty(f.dst))
            if not cs:
                raise CompositionError("missing tight identity cell")
            return cs[0]
        raise NotImplementedError

    def loose_identity_cell(self, u):
        if self.thin:
            p = LoosePath.of(u)
            cs = self.cells(self.identity(u.src), self.identity(u.dst), p, p)
            if not cs:
                raise CompositionError("missing loose identity cell")
            return cs[0]
        raise NotImplementedError


def mod_construction(base: AvdcHandle, universe) -> ModAvdc:
    return ModAvdc(base, list(universe))


# --------------------------------------------------------------------------- #
# enriched categories and profunctors
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class EnrichedCategory:
    """A category enriched in a base AVDC: colored objects plus a matrix of
    hom loose arrows; over a thin base the composition and identity cells
    are the unique fillers and existence is the only condition."""
    objects: tuple            # sorted pairs (element, color key)
    homs: tuple               # sorted pairs ((x, y), base loose key)

    @staticmethod
    def of(objects, homs) -> "EnrichedCategory":
        return EnrichedCategory(tuple(sorted(objects, key=skey)),
                                tuple(sorted(homs, key=skey)))

    @property
    def colored_set(self) -> ColoredSet:
        return ColoredSet(self.objects)

    def hom(self, x, y):
        for (a, b), k in self.homs:
            if a == x and b == y:
                return k
        raise KeyError((x, y))


@dataclass
class ProfAvdc:
    """The AVDC of enriched categories: a module handle over a matrix
    handle, with conversion helpers."""
    base: AvdcHandle
    matrices: MatAvdc
    modules: ModAvdc
    cats: Dict[Any, EnrichedCategory]

    @property
    def handle(self) -> ModAvdc:
        return self.modules

    def object_of(self, cat: EnrichedCategory) -> ObjectRef:
        return self.modules.object_of(self.monoid_of(cat))

    def monoid_of(self, cat: EnrichedCategory) -> MonoidRecord:
        return enriched_to_monoid(self.matrices, cat)

    def add_category(self, cat: EnrichedCategory) -> ObjectRef:
        """Extend the universe with a further enriched category."""
        self.matrices.add_colored_set(cat.colored_set)
        m = enriched_to_monoid(self.matrices, cat)
        ref = self.modules.add_monoid(m)
        self.cats[m.key] = cat
        return ref


def enriched_to_monoid(matrices: MatAvdc, cat: EnrichedCategory) -> MonoidRecord:
    """Present an enriched category as a monoid in the matrix AVDC.

    Requires a thin base: unit and composition cells are the unique
    fillers, and their existence is checked here."""
    if not matrices.thin:
        raise NotImplementedError("only thin bases are supported")
    cs = cat.colored_set
    a = matrices.object_of(cs)
    hom_matrix = MatrixRecord(cs.key, cs.key,
                              tuple(sorted(cat.homs, key=skey)))
    a1 = matrices.loose_of(hom_matrix)
    ida = matrices.identity(a)
    ae = matrices.cells(ida, ida, LoosePath.empty(a), LoosePath.of(a1))
    if not ae:
        raise ValidationError("identity cells do not exist for this category")
    am = matrices.cells(ida, ida, LoosePath.of(a1, a1), LoosePath.of(a1))
    if not am:
        raise ValidationError(
            "composition cells do not exist for this category")
    return MonoidRecord(a.key, a1.key, ae[0].payload, am[0].payload)


def monoid_to_enriched(matrices: MatAvdc, m: MonoidRecord) -> EnrichedCategory:
    cs = matrices._sets[m.obj_key]
    mat_rec = MatrixRecord(m.obj_key, m.obj_key, m.loose_key[1])
    return EnrichedCategory(cs.items, mat_rec.entries)


def prof(base: AvdcHandle, universe, extra_colored_sets=()) -> ProfAvdc:
    """Build the AVDC of categories enriched in ``base`` over the given
    universe of ``EnrichedCategory`` records."""
    cats = list(universe)
    colored = {c.colored_set.key: c.colored_set for c in cats}
    for cs in extra_colored_sets:
        colored[cs.key] = cs
    matrices = mat(base, colored.values())
    monoids = []
    index = {}
    for c in cats:
        m = enriched_to_monoid(matrices, c)
        monoids.append(m)
        index[m.key] = c
    modules = mod_construction(matrices, monoids)
    return ProfAvdc(base, matrices, modules, index)


# --------------------------------------------------------------------------- #
# canonical embeddings
# --------------------------------------------------------------------------- #

def singleton_colored_set(color_key) -> ColoredSet:
    return ColoredSet.of([("*", color_key)])


def classifier_category(base: AvdcHandle, c: ObjectRef,
                        bounds=None) -> EnrichedCategory:
    """The one-object category on the loose unit of ``c``."""
    from .universal import find_restriction
    from .core import Bounds
    w = find_restriction(LoosePath.empty(c), base.identity(c),
                         base.identity(c), bounds or Bounds())
    if w is None:
        raise ValidationError(f"object {c!r} has no loose unit within bounds")
    return EnrichedCategory.of([("*", c.key)],
                               [(("*", "*"), w.loose.key)])


def embed(base: AvdcHandle, kind: str, target=None, bounds=None):
    """The canonical inclusion of ``base`` into a construction over it.

    ``kind`` is ``"Y"`` (diminished base into matrices), ``"U"`` (base into
    modules via trivial monoids; needs loose units) or ``"Z"`` (base into
    enriched categories via one-object classifiers; needs loose units).
    ``target`` may supply a prebuilt handle whose universe contains the
    canonical image objects; otherwise a minimal one is constructed.
    Returns the functor; the target handle is reachable as its ``target``.
    """
    if not base.thin:
        raise NotImplementedError("only thin bases are supported")
    if kind == "Y":
        dim = diminish(base)
        if target is None:
            target = mat(base, [singleton_colored_set(o.key)
                                for o in base.objects()])

        def obj_map(a):
            return target.object_of(singleton_colored_set(a.key))

        def tight_map(f):
            return TightArrow(obj_map(f.src), obj_map(f.dst),
                              ((("*", ("*", f.key))),))

        def loose_map(u):
            rec = MatrixRecord(singleton_colored_set(u.src.key).key,
                               singleton_colored_set(u.dst.key).key,
                               ((("*", "*"), u.key),))
            return target.loose_of(rec)

        return thin_functor(dim, target, obj_map, tight_map, loose_map,
                            name="Y")

    if kind == "Z":
        cls = {o.key: classifier_category(base, o, bounds)
               for o in base.objects()}
        if target is None:
            target = prof(base, list(cls.values()))
        mats = target.matrices
        mods = target.modules

        def obj_map(a):
            return mods.object_of(enriched_to_monoid(mats, cls[a.key]))

        def tight_map(f):
            a = obj_map(f.src)
            b = obj_map(f.dst)
            mat_f = TightArrow(
                ObjectRef(mats.avdc_id, cls[f.src.key].colored_set.key),
                ObjectRef(mats.avdc_id, cls[f.dst.key].colored_set.key),
                ((("*", ("*", f.key))),))
            for cand in mods.tight(a, b):
                if mods.hom_parts(cand)[0] == mat_f:
                    return cand
            raise CompositionError("classifier functor image missing")

        def loose_map(u):
            a = obj_map(u.src)
            b = obj_map(u.dst)
            rec = MatrixRecord(cls[u.src.key].colored_set.key,
                               cls[u.dst.key].colored_set.key,
                               ((("*", "*"), u.key),))
            mat_u = mats.loose_of(rec)
            for cand in mods.loose(a, b):
                if mods.bimodule(cand).loose_key == mat_u.key:
                    return cand
            raise CompositionError("classifier profunctor image missing")

        return thin_functor(base, target, obj_map, tight_map, loose_map,
                            name="Z")

    if kind == "U":
        from .universal import find_restriction
        from .core import Bounds
        units = {}
        for o in base.objects():
            w = find_restriction(LoosePath.empty(o), base.identity(o),
                                 base.identity(o), bounds or Bounds())
            if w is None:
                raise ValidationError("base lacks loose units")
            units[o.key] = w.loose
        monoids = {}
        for o in base.objects():
            u = units[o.key]
            ido = base.identity(o)
            ae = base.cells(ido, ido, LoosePath.empty(o), LoosePath.of(u))
            am = base.cells(ido, ido, LoosePath.of(u, u), LoosePath.of(u))
            if not (ae and am):
                raise ValidationError("unit monoid cells missing")
            monoids[o.key] = MonoidRecord(o.key, u.key, ae[0].payload,
                                          am[0].payload)
        if target is None:
            target = mod_construction(base, list(monoids.values()))
        mods = target

        def obj_map(a):
            return mods.object_of(monoids[a.key])

        def tight_map(f):
            a, b = obj_map(f.src), obj_map(f.dst)
            for cand in mods.tight(a, b):
                if mods.hom_parts(cand)[0].key == f.key:
                    return cand
            raise CompositionError("unit monoid map image missing")

        def loose_map(u):
            a, b = obj_map(u.src), obj_map(u.dst)
            for cand in mods.loose(a, b):
                if mods.bimodule(cand).loose_key == u.key:
                    return cand
            raise CompositionError("unit bimodule image missing")

        return thin_functor(base, mods, obj_map, tight_map, loose_map,
                            name="U")

    raise ValueError(f"unknown embedding kind {kind!r}")


# --------------------------------------------------------------------------- #
# transposition
# --------------------------------------------------------------------------- #

def transpose_mod(functor: AvdFunctor, mod_handle: ModAvdc,
                  bounds=None) -> AvdFunctor:
    """Turn a diagram into the base of a module handle into a diagram into
    the module handle itself.

    ``functor`` maps a diminished shape into ``mod_handle.base``; the
    source of the result is the corresponding shape with loose units
    (restrictions of empty paths), and each object is sent to the monoid
    on its image of the unit.  Requires thin handles; unit choices are
    enumeration-least."""
    from .universal import find_restriction
    from .core import Bounds
    bounds = bounds or Bounds()
    shape = functor.source
    if not (shape.thin and mod_handle.thin):
        raise NotImplementedError("only thin handles are supported")
    base = mod_handle.base
    units = {}
    monoids = {}
    for o in shape.objects():
        w = find_restriction(LoosePath.empty(o), shape.identity(o),
                             shape.identity(o), bounds)
        if w is None:
            raise ValidationError("shape lacks loose units")
        u = w.loose
        units[o.key] = u
        ido = shape.identity(o)
        eta = shape.cells(ido, ido, LoosePath.empty(o), LoosePath.of(u))
        mu = shape.cells(ido, ido, LoosePath.of(u, u), LoosePath.of(u))
        if not (eta and mu):
            raise ValidationError("unit monoid cells missing in shape")
        monoids[o.key] = MonoidRecord(
            functor.obj_map(o).key, functor.loose_map(u).key,
            functor.cell_map(eta[0]).payload, functor.cell_map(mu[0]).payload)

    def obj_map(a):
        return mod_handle.object_of(monoids[a.key])

    def tight_map(f):
        a, b = obj_map(f.src), obj_map(f.dst)
        ff = functor.tight_map(f)
        for cand in mod_handle.tight(a, b):
            if mod_handle.hom_parts(cand)[0].key == ff.key:
                return cand
        raise CompositionError("transposed tight image missing")

    def loose_map(u):
        a, b = obj_map(u.src), obj_map(u.dst)
        uu = functor.loose_map(u)
        for cand in mod_handle.loose(a, b):
            if mod_handle.bimodule(cand).loose_key == uu.key:
                return cand
        raise CompositionError("transposed loose image missing")

    def cell_map(c):
        left = tight_map(c.left)
        right = tight_map(c.right)
        top = LoosePath(obj_map(c.top.src), obj_map(c.top.dst),
                        tuple(loose_map(u) for u in c.top.arrows))
        if len(c.bottom):
            bottom = LoosePath(obj_map(c.bottom.src), obj_map(c.bottom.dst),
                               tuple(loose_map(u) for u in c.bottom.arrows))
        else:
            bottom = LoosePath.empty(obj_map(c.bottom.src))
        cs = mod_handle.cells(left, right, top, bottom)
        if not cs:
            raise CompositionError("transposed cell missing")
        return cs[0]

    return AvdFunctor(shape, mod_handle, obj_map, tight_map, loose_map,
                      cell_map, name=f"transpose-{functor.name}")


# --------------------------------------------------------------------------- #
# preobjects and the classifier bijection
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class Preobject:
    """An object of an enriched category together with a recoloring tight
    arrow from a chosen color into the object's color."""
    x0: Any                   # element of the category's colored set
    x1: Any                   # base tight-arrow key c -> |x0|


def preobjects(p: ProfAvdc, cat: EnrichedCategory, c: ObjectRef) -> list:
    out = []
    for x0, color in cat.objects:
        for t in p.base.tight(c, ObjectRef(p.base.avdc_id, color)):
            out.append(Preobject(x0, t.key))
    return sorted(out, key=skey)


def classifier_bijection(p: ProfAvdc, cat: EnrichedCategory, c: ObjectRef,
                         bounds=None) -> dict:
    """Count functors out of the one-object classifier of ``c`` against
    preobjects of ``cat`` colored with ``c``."""
    cls = classifier_category(p.base, c, bounds)
    zc = p.object_of(cls)
    a = p.object_of(cat)
    functors = p.modules.tight(zc, a)
    pres = preobjects(p, cat, c)
    return {"functors": functors, "preobjects": pres,
            "bijective": len(functors) == len(pres)}


# --------------------------------------------------------------------------- #
# full sub-AVDCs
# --------------------------------------------------------------------------- #

class FullSubAvdc(AvdcHandle):
    """The full sub-AVDC of ``base`` spanned by ``objs``.

    All records (objects, arrows, cells) are shared with the base handle,
    so anything computed here interoperates with base-level search."""

    def __init__(self, base: AvdcHandle, objs):
        super().__init__(f"sub({base.name})")
        self.base = base
        self.thin = base.thin
        self.diminished = base.diminished
        self._objs = sorted(objs, key=lambda o: skey(o.key))

    def objects(self):
        return list(self._objs)

    def tight(self, a, b):
        return self.base.tight(a, b)

    def identity(self, a):
        return self.base.identity(a)

    def compose(self, f, g):
        return self.base.compose(f, g)

    def loose(self, a, b):
        return self.base.loose(a, b)

    def _cells(self, left, right, top, bottom):
        return self.base.cells(left, right, top, bottom)

    def multicompose(self, alphas, beta):
        return self.base.multicompose(alphas, beta)

    def tight_identity_cell(self, f):
        return self.base.tight_identity_cell(f)

    def loose_identity_cell(self, u):
        return self.base.loose_identity_cell(u)

    def __getattr__(self, name):
        if name in ("restrict_loose", "restrict_nullary", "has_cell",
                    "has_cell_by_keys"):
            base = self.__dict__.get("base")
            if base is not None:
                return getattr(base, name)
        raise AttributeError(name)


def full_sub(base: AvdcHandle, objs) -> FullSubAvdc:
    return FullSubAvdc(base, objs)


# --------------------------------------------------------------------------- #
# slices
# --------------------------------------------------------------------------- #

class SliceAvdc(AvdcHandle):
    """The slice AVDC of a thin handle over one of its objects.

    Objects are tight arrows into ``over``; tight arrows are commuting
    base tight arrows; a loose arrow x -> y is a pair of a base loose
    arrow between the domains and a 0-coary cell (x, y; (u) => ()); a
    cell is a base cell whose pasting onto the bottom anchor data equals
    the pasting of the top anchor data."""

    def __init__(self, base: AvdcHandle, over: ObjectRef):
        if not base.thin:
            raise NotImplementedError("only thin bases are supported")
        super().__init__(f"{base.name}/{skey(over.key)}")
        self.thin = True
        self.base = base
        self.over = over
        self._anchor = {}
        objs = []
        for src in base.objects():
            for t in base.tight(src, over):
                ref = ObjectRef(self.avdc_id, (src.key, t.key))
                self._anchor[ref] = t
                objs.append(ref)
        self._objs = sorted(objs, key=lambda o: skey(o.key))
        self._loose_data: Dict[LooseArrow, tuple] = {}
        self._loose_cache: Dict[tuple, list] = {}

    # translation ----------------------------------------------------------- #

    def anchor(self, a: ObjectRef) -> TightArrow:
        """The base tight arrow into ``over`` that the object stands for."""
        return self._anchor[a]

    def to_base_tight(self, f: TightArrow) -> TightArrow:
        return TightArrow(self._anchor[f.src].src, self._anchor[f.dst].src,
                          f.key)

    def to_base_loose(self, u: LooseArrow) -> LooseArrow:
        return self.loose_witness(u)[0]

    def loose_witness(self, u: LooseArrow) -> tuple:
        """The pair (base loose arrow, 0-coary anchor cell) behind ``u``."""
        got = self._loose_data.get(u)
        if got is None:
            self.loose(u.src, u.dst)
            got = self._loose_data[u]
        return got

    # handle interface ------------------------------------------------------ #

    def objects(self):
        return list(self._objs)

    def tight(self, a, b):
        ta, tb = self._anchor[a], self._anchor[b]
        out = []
        for f in self.base.tight(ta.src, tb.src):
            if self.base.compose(f, tb) == ta:
                out.append(TightArrow(a, b, f.key))
        return out

    def identity(self, a):
        return TightArrow(a, a, self.base.identity(self._anchor[a].src).key)

    def compose(self, f, g):
        if f.dst != g.src:
            raise BoundaryError("tight arrows not composable")
        h = self.base.compose(self.to_base_tight(f), self.to_base_tight(g))
        return TightArrow(f.src, g.dst, h.key)

    def loose(self, a, b):
        got = self._loose_cache.get((a, b))
        if got is not None:
            return got
        ta, tb = self._anchor[a], self._anchor[b]
        out = []
        for u in self.base.loose(ta.src, tb.src):
            for c in self.base.cells(ta, tb, LoosePath.of(u),
                                     LoosePath.empty(self.over)):
                lu = LooseArrow(a, b, (u.key, skey(c.payload)))
                self._loose_data[lu] = (u, c)
                out.append(lu)
        out.sort(key=lambda x: skey(x.key))
        self._loose_cache[(a, b)] = out
        return out

    def _cells(self, left, right, top, bottom):
        base = self.base
        bl = self.to_base_tight(left)
        br = self.to_base_tight(right)
        top_data = [self.loose_witness(u) for u in top]
        btop = LoosePath(self._anchor[top.src].src,
                         self._anchor[top.dst].src,
                         tuple(u for u, _ in top_data))
        if len(bottom) == 1:
            bv, vcell = self.loose_witness(bottom.arrows[0])
            bbot = LoosePath.of(bv)
            under = vcell
        else:
            ay = self._anchor[bottom.src]
            bbot = LoosePath.empty(ay.src)
            under = base.tight_identity_cell(ay)
        if len(top):
            try:
                rhs = base.multicompose(
                    tuple(c for _, c in top_data),
                    base.tight_identity_cell(base.identity(self.over)))
            except CompositionError:
                return []
        else:
            rhs = base.tight_identity_cell(self._anchor[top.src])
        out = []
        for cand in base.cells(bl, br, btop, bbot):
            try:
                lhs = base.multicompose((cand,), under)
            except CompositionError:
                continue
            if cells_equal(lhs, rhs):
                out.append(CellRecord(left, right, top, bottom,
                                      payload=cand.payload))
        return out


def slice_avdc(base: AvdcHandle, over: ObjectRef) -> SliceAvdc:
    """The slice of ``base`` over one of its objects, with the canonical
    projection attached as ``.projection``."""
    h = SliceAvdc(base, over)
    h.projection = thin_functor(
        h, base,
        lambda a: h.anchor(a).src,
        h.to_base_tight,
        h.to_base_loose,
        name=f"D-{skey(over.key)}")
    return h


# --------------------------------------------------------------------------- #
# the nerve
# --------------------------------------------------------------------------- #

def nerve(L: AvdcHandle, X: AvdcHandle, skeletons=None, bounds=None,
          objects=None):
    """The nerve of ``L`` relative to a full sub handle ``X``.

    Returns a pair ``(N, script_N)``: a functor from the diminished
    ambient handle into matrices over ``X`` whose object images are the
    chosen skeletons of maximal factorizations, and the corresponding
    functor from the ambient handle into modules over those matrices.

    ``skeletons`` optionally maps ambient object keys to explicit
    skeleton choices (lists of tight arrows into the object); otherwise
    the enumeration-least representative per isomorphism class of
    maximal objects is chosen.  ``objects`` restricts the ambient
    objects covered."""
    from .core import Bounds
    from .universal import find_restriction
    from .density import maximal_objects, pulling_sides, under_category
    if not L.thin:
        raise NotImplementedError("only thin handles are supported")
    bounds = bounds or Bounds()
    probe = list(objects) if objects is not None else L.objects()
    skel = {}
    for a in probe:
        if skeletons is not None and a.key in skeletons:
            sk = list(skeletons[a.key])
        else:
            cat = under_category(L, a, X.objects())
            _, rep = maximal_objects(cat)
            if not rep.ok:
                raise ValidationError(f"slice-not-c-discrete({skey(a.key)})")
            sk = list(rep.details["skeleton"])
        for t in sk:
            sides = pulling_sides(t, bounds)
            if not (sides["left"] and sides["right"]):
                raise ValidationError(
                    f"skeleton-element-not-pulling({skey(t.key)})")
        skel[a.key] = sorted(sk, key=lambda t: skey(t.key))
    colored = {a.key: ColoredSet.of([(t.key, t.src.key)
                                     for t in skel[a.key]])
               for a in probe}
    mat_x = mat(X, list(colored.values()))

    def obj_map(a):
        return mat_x.object_of(colored[a.key])

    def tight_map(f):
        entries = []
        for t in skel[f.src.key]:
            tf = L.compose(t, f)
            found = []
            for s in skel[f.dst.key]:
                for h in L.tight(t.src, s.src):
                    if L.compose(h, s) == tf:
                        found.append((s, h))
            if len(found) != 1:
                raise ValidationError(
                    f"slice-not-c-discrete({skey(f.dst.key)})")
            s, h = found[0]
            entries.append((t.key, (s.key, h.key)))
        return TightArrow(obj_map(f.src), obj_map(f.dst),
                          tuple(sorted(entries, key=skey)))

    def loose_map(u):
        entries = []
        for t in skel[u.src.key]:
            for s in skel[u.dst.key]:
                if hasattr(L, "restrict_loose"):
                    c = L.restrict_loose(t, s, u)
                    r = None if c is None else c.top.arrows[0]
                else:
                    w = find_restriction(LoosePath.of(u), t, s, bounds)
                    r = None if w is None else w.loose
                if r is None:
                    raise ValidationError(
                        f"skeleton-element-not-pulling({skey(t.key)})")
                entries.append(((t.key, s.key), r.key))
        rec = MatrixRecord(colored[u.src.key].key, colored[u.dst.key].key,
                           tuple(sorted(entries, key=skey)))
        return mat_x.loose_of(rec)

    dim_l = diminish(L)
    n_functor = thin_functor(
        dim_l, mat_x,
        lambda a: obj_map(dim_l.to_base_obj(a)),
        lambda f: tight_map(dim_l.to_base_tight(f)),
        lambda u: loose_map(dim_l.to_base_path(LoosePath.of(u)).arrows[0]),
        name="N")
    flat = thin_functor(L, mat_x, obj_map, tight_map, loose_map,
                        name="N-flat")
    monoids = []
    for o in probe:
        ido = L.identity(o)
        w = find_restriction(LoosePath.empty(o), ido, ido, bounds)
        if w is None:
            raise ValidationError(f"missing-restriction({skey(o.key)})")
        unit = w.loose
        eta = L.cells(ido, ido, LoosePath.empty(o), LoosePath.of(unit))
        mu = L.cells(ido, ido, LoosePath.of(unit, unit), LoosePath.of(unit))
        if not (eta and mu):
            raise ValidationError(f"missing-restriction({skey(o.key)})")
        monoids.append(MonoidRecord(
            obj_map(o).key, loose_map(unit).key,
            flat.cell_map(eta[0]).payload, flat.cell_map(mu[0]).payload))
    mod_handle = mod_construction(mat_x, monoids)
    script_n = transpose_mod(flat, mod_handle, bounds)
    return n_functor, script_n
