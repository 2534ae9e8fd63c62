"""Ready-made finite AVDCs and a plain-text presentation format.

Builders:

* ``rel_avdc``       -- sets, functions, relations, with implication cells
* ``quantale_avdc``  -- one object over a quantale table
* ``vw_avdc``        -- one object over a strict monoidal category table
* ``shape_avdc``     -- discrete / indiscrete / vd-indiscrete shapes over a
                        finite category

plus ``load_presentation`` / ``dump_presentation`` for a section-based text
format describing thin AVDCs by explicit tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .core import (AvdcHandle, BoundaryError, CellRecord, CompositionError,
                   LooseArrow, LoosePath, ObjectRef, ThinAvdc, TightArrow,
                   ValidationError, skey, sorted_by_key)


# --------------------------------------------------------------------------- #
# finite categories (used as shapes and as plain categories elsewhere)
# --------------------------------------------------------------------------- #

@dataclass
class FiniteCategory:
    """A finite category given by explicit tables.

    ``homs[(a, b)]`` lists arrow keys a -> b; ``identity[a]`` names the
    identity; ``compose[(f, g)]`` is the composite in diagrammatic order.
    """
    objects: tuple
    homs: Dict[tuple, tuple]
    identity: Dict[Any, Any]
    compose: Dict[tuple, Any]

    def __post_init__(self):
        self.objects = tuple(sorted(self.objects, key=skey))
        self._dom: Dict[Any, Any] = {}
        self._cod: Dict[Any, Any] = {}
        for (a, b), fs in self.homs.items():
            for f in fs:
                self._dom[f] = a
                self._cod[f] = b

    def hom(self, a, b) -> tuple:
        return tuple(sorted(self.homs.get((a, b), ()), key=skey))

    def dom(self, f):
        return self._dom[f]

    def cod(self, f):
        return self._cod[f]

    def arrows(self) -> list:
        return sorted(self._dom, key=skey)

    def comp(self, f, g):
        if self.cod(f) != self.dom(g):
            raise ValidationError(f"arrows {f!r}, {g!r} not composable")
        if f == self.identity[self.dom(f)]:
            return g
        if g == self.identity[self.dom(g)]:
            return f
        try:
            return self.compose[(f, g)]
        except KeyError:
            raise ValidationError(f"composite of {f!r}, {g!r} not declared")

    def validate(self) -> None:
        for a in self.objects:
            i = self.identity[a]
            if i not in self.homs.get((a, a), ()):
                raise ValidationError(f"identity of {a!r} not in hom set")
        for f in self.arrows():
            for g in self.arrows():
                if self.cod(f) != self.dom(g):
                    continue
                h = self.comp(f, g)
                if self._dom.get(h) != self.dom(f) or \
                        self._cod.get(h) != self.cod(g):
                    raise ValidationError(f"bad composite {f!r};{g!r}")
        for f in self.arrows():
            for g in self.arrows():
                for h in self.arrows():
                    if self.cod(f) != self.dom(g) or self.cod(g) != self.dom(h):
                        continue
                    if self.comp(self.comp(f, g), h) != \
                            self.comp(f, self.comp(g, h)):
                        raise ValidationError("composition not associative")


def discrete_category(keys) -> FiniteCategory:
    keys = tuple(sorted(keys, key=skey))
    return FiniteCategory(
        objects=keys,
        homs={(a, a): ((("id", a)),) for a in keys},
        identity={a: ("id", a) for a in keys},
        compose={})


def preorder_category(elements, leq) -> FiniteCategory:
    """Category of a preorder: at most one arrow x -> y, present iff x <= y."""
    elements = tuple(sorted(elements, key=skey))
    pairs = set(leq)
    homs = {}
    for a in elements:
        for b in elements:
            if (a, b) in pairs:
                homs[(a, b)] = ((("le", a, b)),)
    compose = {}
    for a in elements:
        for b in elements:
            for c in elements:
                if (a, b) in pairs and (b, c) in pairs:
                    if (a, c) not in pairs:
                        raise ValidationError("order not transitive")
                    compose[(("le", a, b), ("le", b, c))] = ("le", a, c)
    for a in elements:
        if (a, a) not in pairs:
            raise ValidationError("order not reflexive")
    return FiniteCategory(objects=elements, homs=homs,
                          identity={a: ("le", a, a) for a in elements},
                          compose=compose)


# --------------------------------------------------------------------------- #
# a common base for table-driven thin handles
# --------------------------------------------------------------------------- #

class TableAvdc(ThinAvdc):
    """Thin AVDC with explicitly stored object/arrow tables."""

    def __init__(self, name: str):
        super().__init__(name)
        self._objects: List[ObjectRef] = []
        self._tight: Dict[tuple, list] = {}
        self._identity: Dict[ObjectRef, TightArrow] = {}
        self._compose: Dict[tuple, TightArrow] = {}
        self._loose: Dict[tuple, list] = {}

    # table construction helpers ------------------------------------------- #

    def add_object(self, key) -> ObjectRef:
        ref = ObjectRef(self.avdc_id, key)
        self._objects.append(ref)
        self._objects.sort(key=lambda o: skey(o.key))
        return ref

    def add_tight(self, src, dst, key) -> TightArrow:
        f = TightArrow(src, dst, key)
        self._tight.setdefault((src, dst), []).append(f)
        self._tight[(src, dst)].sort(key=lambda t: skey(t.key))
        return f

    def add_loose(self, src, dst, key) -> LooseArrow:
        u = LooseArrow(src, dst, key)
        self._loose.setdefault((src, dst), []).append(u)
        self._loose[(src, dst)].sort(key=lambda t: skey(t.key))
        return u

    def set_identity(self, obj, f) -> None:
        self._identity[obj] = f

    def set_compose(self, f, g, h) -> None:
        self._compose[(f, g)] = h

    # handle interface ------------------------------------------------------ #

    def objects(self):
        return list(self._objects)

    def tight(self, a, b):
        return list(self._tight.get((a, b), []))

    def identity(self, a):
        return self._identity[a]

    def compose(self, f, g):
        if f.dst != g.src:
            raise BoundaryError("tight arrows not composable")
        if f == self._identity[f.src]:
            return g
        if g == self._identity[g.src]:
            return f
        try:
            return self._compose[(f, g)]
        except KeyError:
            raise CompositionError(f"composite of {f!r};{g!r} not declared")

    def loose(self, a, b):
        return list(self._loose.get((a, b), []))

    def object(self, key) -> ObjectRef:
        for o in self._objects:
            if o.key == key:
                return o
        raise KeyError(key)

    def tight_by_key(self, key) -> TightArrow:
        for fs in self._tight.values():
            for f in fs:
                if f.key == key:
                    return f
        raise KeyError(key)

    def loose_by_key(self, key) -> LooseArrow:
        for us in self._loose.values():
            for u in us:
                if u.key == key:
                    return u
        raise KeyError(key)


# --------------------------------------------------------------------------- #
# relations
# --------------------------------------------------------------------------- #

class RelAvdc(TableAvdc):
    """Sets and functions tightly, relations loosely.

    A cell (f, g; R1 .. Rn => S) exists iff the composite relation
    R1;..;Rn is carried into S by (f, g); a cell with empty bottom exists
    iff f and g agree on all endpoints of the composite.
    """

    diminished = False

    def __init__(self, universe):
        super().__init__("rel")
        sets = sorted({frozenset(s) for s in universe},
                      key=lambda s: (len(s), skey(tuple(sorted(s, key=skey)))))
        for s in sets:
            key = tuple(sorted(s, key=skey))
            ref = self.add_object(key)
            for_all = None  # placeholder to keep loop simple
        for a in self._objects:
            for b in self._objects:
                for graph in itertools.product(b.key, repeat=len(a.key)):
                    fkey = tuple(zip(a.key, graph))
                    f = self.add_tight(a, b, fkey)
                    if a == b and all(x == y for x, y in fkey):
                        self.set_identity(a, f)
                for bits in itertools.product([0, 1],
                                              repeat=len(a.key) * len(b.key)):
                    pairs = []
                    i = 0
                    for x in sorted(a.key, key=skey):
                        for y in sorted(b.key, key=skey):
                            if bits[i]:
                                pairs.append((x, y))
                            i += 1
                    self.add_loose(a, b, tuple(sorted(pairs, key=skey)))
        # function composition
        for (a, b), fs in list(self._tight.items()):
            for (b2, c), gs in list(self._tight.items()):
                if b != b2:
                    continue
                for f in fs:
                    fd = dict(f.key)
                    for g in gs:
                        gd = dict(g.key)
                        hkey = tuple(sorted(((x, gd[fd[x]]) for x in fd),
                                            key=skey))
                        self.set_compose(f, g, self.tight_for(a, c, hkey))

    def tight_for(self, a, b, key):
        for f in self._tight.get((a, b), []):
            if f.key == key:
                return f
        raise KeyError(key)

    def loose_for(self, a, b, pairs) -> LooseArrow:
        key = tuple(sorted(pairs, key=skey))
        for u in self._loose.get((a, b), []):
            if u.key == key:
                return u
        raise KeyError(key)

    def restrict_loose(self, f: TightArrow, g: TightArrow,
                       u: LooseArrow) -> CellRecord:
        """The restriction u(f, g): the preimage relation, which always
        exists; returns its cartesian witness cell."""
        fm, gm = dict(f.key), dict(g.key)
        s = set(u.key)
        pairs = [(x, y) for x in f.src.key for y in g.src.key
                 if (fm[x], gm[y]) in s]
        r = self.loose_for(f.src, g.src, pairs)
        return self.cells(f, g, LoosePath.of(r), LoosePath.of(u))[0]

    def restrict_nullary(self, f: TightArrow, g: TightArrow):
        """The restriction of the empty path along (f, g): the pullback
        relation; returns its cartesian 0-coary witness cell."""
        if f.dst != g.dst:
            return None
        fm, gm = dict(f.key), dict(g.key)
        pairs = [(x, y) for x in f.src.key for y in g.src.key
                 if fm[x] == gm[y]]
        r = self.loose_for(f.src, g.src, pairs)
        return self.cells(f, g, LoosePath.of(r), LoosePath.empty(f.dst))[0]

    @staticmethod
    def _composite(top: LoosePath) -> set:
        pairs = {(x, x) for x in top.src.key}
        for u in top.arrows:
            rel = set(u.key)
            pairs = {(x, z) for (x, y) in pairs for (y2, z) in rel if y == y2}
        return pairs

    def has_cell(self, left, right, top, bottom) -> bool:
        comp = self._composite(top)
        f = dict(left.key)
        g = dict(right.key)
        if len(bottom) == 0:
            return all(f[x] == g[y] for (x, y) in comp)
        s = set(bottom.arrows[0].key)
        return all((f[x], g[y]) in s for (x, y) in comp)


def rel_avdc(universe) -> RelAvdc:
    """The AVDC of the given finite sets, functions between them, and
    relations between them."""
    return RelAvdc(universe)


def small_rel_universe(max_size: int = 2) -> list:
    """The canonical nested sets 0, {0}, {0,1}, ... up to ``max_size``."""
    return [frozenset(range(n)) for n in range(max_size + 1)]


# --------------------------------------------------------------------------- #
# quantales
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class QuantaleTable:
    """A finite (unital) quantale: ordered monoid with a top-down table."""
    carrier: tuple
    leq: frozenset            # pairs (x, y) with x <= y
    tensor: tuple             # pairs ((x, y), z) with x*y = z
    unit: Any

    def tensor_map(self) -> dict:
        return dict(self.tensor)

    def le(self, x, y) -> bool:
        return (x, y) in self.leq

    def prod(self, xs) -> Any:
        t = self.tensor_map()
        out = self.unit
        for x in xs:
            out = t[(out, x)]
        return out

    def validate(self) -> None:
        t = self.tensor_map()
        for x in self.carrier:
            if not self.le(x, x):
                raise ValidationError("order not reflexive")
            if t[(self.unit, x)] != x or t[(x, self.unit)] != x:
                raise ValidationError("unit law fails")
        for x in self.carrier:
            for y in self.carrier:
                for z in self.carrier:
                    if t[(t[(x, y)], z)] != t[(x, t[(y, z)])]:
                        raise ValidationError("tensor not associative")
                    if self.le(x, y) and self.le(y, z) and not self.le(x, z):
                        raise ValidationError("order not transitive")


def two_element_quantale() -> QuantaleTable:
    """Truth values: 0 <= 1, conjunction, unit 1."""
    return QuantaleTable(
        carrier=(0, 1),
        leq=frozenset({(0, 0), (0, 1), (1, 1)}),
        tensor=(((0, 0), 0), ((0, 1), 0), ((1, 0), 0), ((1, 1), 1)),
        unit=1)


class QuantaleAvdc(TableAvdc):
    """One object; loose arrows are quantale elements; a cell on top
    elements x1..xn over y exists iff x1*..*xn <= y, and over the empty
    bottom iff x1*..*xn <= unit."""

    def __init__(self, q: QuantaleTable):
        q.validate()
        super().__init__("quantale")
        self.q = q
        self._hck_memo = {}
        star = self.add_object("*")
        self.set_identity(star, self.add_tight(star, star, "id"))
        for x in sorted(q.carrier, key=skey):
            self.add_loose(star, star, x)
        self.star = star

    def has_cell(self, left, right, top, bottom) -> bool:
        prod = self.q.prod([u.key for u in top.arrows])
        target = bottom.arrows[0].key if len(bottom) else self.q.unit
        return self.q.le(prod, target)

    def has_cell_by_keys(self, left_key, right_key, top_keys,
                         bottom_key) -> bool:
        """Key-level existence check used by the matrix construction."""
        memo = self._hck_memo
        mk = (top_keys, bottom_key)
        got = memo.get(mk)
        if got is None:
            prod = self.q.prod(list(top_keys))
            target = self.q.unit if bottom_key is None else bottom_key
            got = self.q.le(prod, target)
            memo[mk] = got
        return got

    def restrict_loose(self, f: TightArrow, g: TightArrow,
                       u: LooseArrow) -> CellRecord:
        """Restrictions along the only tight arrows (identities) are
        trivial."""
        return self.loose_identity_cell(u)

    def restrict_nullary(self, f: TightArrow, g: TightArrow) -> CellRecord:
        """The restriction of the empty path: the unit element."""
        u = LooseArrow(self.star, self.star, self.q.unit)
        return self.cells(f, g, LoosePath.of(u),
                          LoosePath.empty(self.star))[0]


def quantale_avdc(q: QuantaleTable) -> QuantaleAvdc:
    return QuantaleAvdc(q)


# --------------------------------------------------------------------------- #
# strict monoidal categories
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class MonoidalCategoryTable:
    """A strict monoidal category by tables.

    ``morphisms[m] = (dom, cod)``; ``tensor_obj``, ``tensor_mor``,
    ``compose`` and ``identity`` are explicit finite tables.
    """
    objects: tuple
    unit_obj: Any
    tensor_obj: tuple          # pairs ((a, b), c)
    morphisms: tuple           # pairs (m, (dom, cod))
    identity: tuple            # pairs (a, m)
    compose: tuple             # pairs ((m1, m2), m)
    tensor_mor: tuple          # pairs ((m1, m2), m)

    def maps(self):
        return (dict(self.tensor_obj), dict(self.morphisms),
                dict(self.identity), dict(self.compose), dict(self.tensor_mor))

    def validate(self) -> None:
        t_obj, mor, ident, comp, t_mor = self.maps()
        for a in self.objects:
            if mor[ident[a]] != (a, a):
                raise ValidationError("identity endpoints wrong")
            if t_obj[(self.unit_obj, a)] != a or t_obj[(a, self.unit_obj)] != a:
                raise ValidationError("object tensor not strictly unital")
        for (m1, m2), m in comp.items():
            if mor[m1][1] != mor[m2][0]:
                raise ValidationError("composition table off endpoints")
            if mor[m] != (mor[m1][0], mor[m2][1]):
                raise ValidationError("composition table off endpoints")


class MonoidalAvdc(AvdcHandle):
    """One-object AVDC of a strict monoidal category.

    Loose arrows are the objects; a cell on top x1..xn over y is a
    morphism x1*..*xn -> y; cells with empty bottom exist only as tight
    identities.
    """

    thin = False
    diminished = True

    def __init__(self, w: MonoidalCategoryTable):
        w.validate()
        super().__init__("monoidal")
        self.w = w
        (self._t_obj, self._mor, self._ident,
         self._comp, self._t_mor) = w.maps()
        self.star = ObjectRef(self.avdc_id, "*")
        self._id = TightArrow(self.star, self.star, "id")

    def objects(self):
        return [self.star]

    def tight(self, a, b):
        return [self._id]

    def identity(self, a):
        return self._id

    def compose(self, f, g):
        return self._id

    def loose(self, a, b):
        return [LooseArrow(self.star, self.star, x)
                for x in sorted(self.w.objects, key=skey)]

    def _tensor_objs(self, keys) -> Any:
        out = self.w.unit_obj
        for k in keys:
            out = self._t_obj[(out, k)]
        return out

    def _cells(self, left, right, top, bottom):
        if len(bottom) == 0:
            if len(top) == 0:
                return [CellRecord(left, right, top, bottom,
                                   payload=self._ident[self.w.unit_obj])]
            return []
        src = self._tensor_objs([u.key for u in top.arrows])
        dst = bottom.arrows[0].key
        out = [CellRecord(left, right, top, bottom, payload=m)
               for m, (d, c) in sorted(self._mor.items(),
                                       key=lambda kv: skey(kv[0]))
               if d == src and c == dst]
        return out

    def tight_identity_cell(self, f):
        return CellRecord(f, f, LoosePath.empty(f.src), LoosePath.empty(f.dst),
                          payload=self._ident[self.w.unit_obj])

    def loose_identity_cell(self, u):
        p = LoosePath.of(u)
        return CellRecord(self._id, self._id, p, p,
                          payload=self._ident[u.key])

    def multicompose(self, alphas, beta):
        from .core import paste_boundary
        left, right, top, bottom = paste_boundary(alphas, beta)
        if not alphas:
            return beta
        tensored = self._ident[self.w.unit_obj]
        for a in alphas:
            tensored = self._t_mor[(tensored, a.payload)]
        payload = self._comp[(tensored, beta.payload)]
        return CellRecord(left, right, top, bottom, payload=payload)


def vw_avdc(w: MonoidalCategoryTable) -> MonoidalAvdc:
    return MonoidalAvdc(w)


# --------------------------------------------------------------------------- #
# shapes
# --------------------------------------------------------------------------- #

class ShapeAvdc(TableAvdc):
    """Shape AVDCs over a finite category.

    * ``discrete``: no loose arrows; only tight identity cells.
    * ``indiscrete``: one loose arrow per ordered pair; exactly one cell
      per well-formed boundary.
    * ``vd-indiscrete``: as indiscrete, but cells with empty bottom exist
      only as tight identities.
    """

    def __init__(self, kind: str, cat: FiniteCategory):
        if kind not in ("discrete", "indiscrete", "vd-indiscrete"):
            raise ValidationError(f"unknown shape kind {kind!r}")
        cat.validate()
        super().__init__(f"shape-{kind}")
        self.kind = kind
        self.cat = cat
        self.diminished = kind != "indiscrete"
        refs = {}
        for o in cat.objects:
            refs[o] = self.add_object(o)
        for (a, b), fs in cat.homs.items():
            for fk in fs:
                f = self.add_tight(refs[a], refs[b], fk)
                if fk == cat.identity[a] and a == b:
                    self.set_identity(refs[a], f)
        for (fk, gk), hk in cat.compose.items():
            f = self.tight_by_key(fk)
            g = self.tight_by_key(gk)
            self.set_compose(f, g, self.tight_by_key(hk))
        if kind != "discrete":
            for a in cat.objects:
                for b in cat.objects:
                    self.add_loose(refs[a], refs[b], ("!", a, b))

    def has_cell(self, left, right, top, bottom) -> bool:
        if self.kind == "discrete":
            return left == right and len(top) == 0 and len(bottom) == 0
        if len(bottom) == 0 and self.diminished:
            return left == right and len(top) == 0
        return True  # boundary well-formedness was checked by construction


def shape_avdc(kind: str, cat: FiniteCategory) -> ShapeAvdc:
    return ShapeAvdc(kind, cat)


# --------------------------------------------------------------------------- #
# the presentation file format
# --------------------------------------------------------------------------- #

class PresentationError(ValidationError):
    """Parse error; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ClosureError(ValidationError):
    """The declared cells are not closed under multicomposition."""


class UnsupportedError(ValidationError):
    """The file declares structure beyond thin AVDCs."""


@dataclass
class PresentationFile:
    """Parsed form of a presentation file; see ``parse_presentation``."""
    objects: List[str] = field(default_factory=list)
    tights: List[tuple] = field(default_factory=list)       # (name, src, dst)
    compose: Dict[tuple, str] = field(default_factory=dict)
    looses: List[tuple] = field(default_factory=list)       # (name, src, dst)
    cells: List[tuple] = field(default_factory=list)
    # each cell row: (left, right, (tops...), bottom-or-None, top_src, yes)
    flags: Dict[str, str] = field(default_factory=dict)


def parse_presentation(text: str) -> PresentationFile:
    """Parse the section-based presentation format.

    Sections: ``[objects]``, ``[tight]``, ``[compose]``, ``[loose]``,
    ``[cells arity=N]``, ``[flags]``.  Rows in ``[cells]`` read
    ``left right | u1 u2 | v -> yes`` with an empty third segment for an
    empty bottom.  Identity arrows are implicit and named ``id_<object>``.
    """
    pf = PresentationFile()
    section = None
    arity = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise PresentationError(lineno, "unterminated section header")
            header = line[1:-1].strip()
            if header.startswith("cells"):
                rest = header[len("cells"):].strip()
                if not rest.startswith("arity="):
                    raise PresentationError(lineno, "cells section needs arity=N")
                try:
                    arity = int(rest[len("arity="):])
                except ValueError:
                    raise PresentationError(lineno, "bad arity")
                section = "cells"
            elif header in ("objects", "tight", "compose", "loose", "flags"):
                section = header
            else:
                raise PresentationError(lineno, f"unknown section {header!r}")
            continue
        if section == "objects":
            pf.objects.append(line)
        elif section == "tight":
            try:
                name, rest = (s.strip() for s in line.split(":", 1))
                src, dst = (s.strip() for s in rest.split("->", 1))
            except ValueError:
                raise PresentationError(lineno, "expected 'name : src -> dst'")
            pf.tights.append((name, src, dst))
        elif section == "compose":
            try:
                lhs, rhs = (s.strip() for s in line.split("=", 1))
                f, g = (s.strip() for s in lhs.split(".", 1))
            except ValueError:
                raise PresentationError(lineno, "expected 'f . g = h'")
            pf.compose[(f, g)] = rhs
        elif section == "loose":
            try:
                name, rest = (s.strip() for s in line.split(":", 1))
                src, dst = (s.strip() for s in rest.split("->", 1))
            except ValueError:
                raise PresentationError(lineno, "expected 'name : src -> dst'")
            pf.looses.append((name, src, dst))
        elif section == "cells":
            try:
                body, verdict = (s.strip() for s in line.rsplit("->", 1))
            except ValueError:
                raise PresentationError(lineno, "cell row needs '-> yes|no'")
            if verdict not in ("yes", "no"):
                raise UnsupportedError(
                    f"line {lineno}: cell payloads beyond yes/no are not "
                    "supported (only thin AVDCs can be presented)")
            parts = [s.strip() for s in body.split("|")]
            if len(parts) != 3:
                raise PresentationError(
                    lineno, "cell row needs 'left right | tops | bottom'")
            sides = parts[0].split()
            if len(sides) != 2:
                raise PresentationError(lineno, "need exactly two side arrows")
            tops = tuple(parts[1].split())
            if len(tops) != arity:
                raise PresentationError(
                    lineno, f"top has {len(tops)} arrows, section arity {arity}")
            bots = parts[2].split()
            if len(bots) > 1:
                raise PresentationError(lineno, "bottom has length at most one")
            bottom = bots[0] if bots else None
            if verdict == "yes":
                pf.cells.append((sides[0], sides[1], tops, bottom))
        elif section == "flags":
            try:
                k, v = (s.strip() for s in line.split("=", 1))
            except ValueError:
                raise PresentationError(lineno, "expected 'flag = value'")
            pf.flags[k] = v
        else:
            raise PresentationError(lineno, "content before first section")
    return pf


def dump_presentation(pf: PresentationFile) -> str:
    """Serialize in canonical order so that dump(parse(dump(x))) == dump(x)."""
    out: List[str] = []
    out.append("[objects]")
    out.extend(sorted(pf.objects))
    out.append("")
    out.append("[tight]")
    for name, src, dst in sorted(pf.tights):
        out.append(f"{name} : {src} -> {dst}")
    out.append("")
    out.append("[compose]")
    for (f, g), h in sorted(pf.compose.items()):
        out.append(f"{f} . {g} = {h}")
    out.append("")
    out.append("[loose]")
    for name, src, dst in sorted(pf.looses):
        out.append(f"{name} : {src} -> {dst}")
    out.append("")
    by_arity: Dict[int, list] = {}
    for row in pf.cells:
        by_arity.setdefault(len(row[2]), []).append(row)
    for arity in sorted(by_arity):
        out.append(f"[cells arity={arity}]")
        for left, right, tops, bottom in sorted(by_arity[arity]):
            bot = bottom if bottom is not None else ""
            out.append(f"{left} {right} | {' '.join(tops)} | {bot} -> yes")
        out.append("")
    out.append("[flags]")
    for k, v in sorted(pf.flags.items()):
        out.append(f"{k} = {v}")
    out.append("")
    return "\n".join(out)


class PresentedAvdc(TableAvdc):
    """Thin AVDC built from a parsed presentation.

    Cells are those declared plus the forced identity cells; boundaries
    with tops longer than the declared maximum arity are reported empty,
    so checks against this handle should keep their path bound within the
    declared arity.
    """

    def __init__(self, pf: PresentationFile):
        super().__init__("presented")
        self.pf = pf
        self.max_arity = max([len(r[2]) for r in pf.cells], default=1)
        self.diminished = pf.flags.get("diminished", "no") == "yes"
        refs = {}
        for o in pf.objects:
            refs[o] = self.add_object(o)
        for name, src, dst in pf.tights:
            if src not in refs or dst not in refs:
                raise ValidationError(f"tight arrow {name!r} uses unknown object")
            self.add_tight(refs[src], refs[dst], name)
        for o in pf.objects:
            f = self.add_tight(refs[o], refs[o], f"id_{o}")
            self.set_identity(refs[o], f)
        for (fk, gk), hk in pf.compose.items():
            self.set_compose(self.tight_by_key(fk), self.tight_by_key(gk),
                             self.tight_by_key(hk))
        for name, src, dst in pf.looses:
            self.add_loose(refs[src], refs[dst], name)
        self._declared = set()
        for left, right, tops, bottom in pf.cells:
            lf = self.tight_by_key(left)
            rf = self.tight_by_key(right)
            self._declared.add((left, right, tops, bottom))
        self._check_closure()

    def _check_closure(self) -> None:
        # composition must be total on declared composable non-identity pairs
        for (a, b), fs in self._tight.items():
            for f in fs:
                for (b2, c), gs in self._tight.items():
                    if b2 != b:
                        continue
                    for g in gs:
                        try:
                            self.compose(f, g)
                        except CompositionError as exc:
                            raise ClosureError(str(exc))
        # every unit pasting of a declared cell must be declared
        for (left, right, tops, bottom) in list(self._declared):
            lf = self.tight_by_key(left)
            rf = self.tight_by_key(right)
            for uk in tops:
                u = self.loose_by_key(uk)
                if not self.has_cell(self.identity(u.src), self.identity(u.dst),
                                     LoosePath.of(u), LoosePath.of(u)):
                    # identity cells are forced, so this cannot fail; keep for
                    # symmetry with future explicit identity declarations
                    raise ClosureError(f"missing identity cell on {uk!r}")

    def has_cell(self, left, right, top, bottom) -> bool:
        tops = tuple(u.key for u in top.arrows)
        bot = bottom.arrows[0].key if len(bottom) else None
        if (left.key, right.key, tops, bot) in self._declared:
            return True
        # forced identity cells
        if len(top) == 0 and len(bottom) == 0 and left == right:
            return True
        if len(top) == 1 and len(bottom) == 1 and \
                top.arrows[0] == bottom.arrows[0] and \
                left == self.identity(top.src) and right == self.identity(top.dst):
            return True
        return False


def load_presentation(text: str) -> PresentedAvdc:
    """Parse a presentation and build the thin AVDC it declares."""
    return PresentedAvdc(parse_presentation(text))
