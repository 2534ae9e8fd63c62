"""Core data model for finite augmented virtual double categories.

An augmented virtual double category (AVDC) has objects, tight arrows
(forming a category), loose arrows (no composition required), and cells.
A cell has a tight arrow on each side, a path of loose arrows on top, and
a path of length at most one on the bottom.  Cells compose by
multicomposition: a row of cells whose bottoms concatenate to the top of a
further cell pastes to a single cell.

Handles expose finite enumerations of all of this; every search in the
library iterates handles in a deterministic sorted order.
"""

from __future__ import annotations

import itertools
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional, Sequence


# --------------------------------------------------------------------------- #
# errors
# --------------------------------------------------------------------------- #

class VdcError(Exception):
    """Base class for all library errors."""


class BoundaryError(VdcError):
    """Cells offered for pasting do not have matching boundaries."""


class ForeignCellError(VdcError):
    """A cell from a different AVDC was offered to an operation."""


class CompositionError(VdcError):
    """A required composite cell does not exist in the handle."""


class ValidationError(VdcError):
    """Structural validation of a handle, functor or transformation failed."""


# --------------------------------------------------------------------------- #
# deterministic ordering
# --------------------------------------------------------------------------- #

def skey(value: Any) -> str:
    """Total order key for heterogeneous hashable payloads.

    All enumerations in the library are sorted by this key, so searches
    return deterministic (enumeration-least) witnesses.
    """
    return repr(value)


def sorted_by_key(items: Iterable[Any]) -> list:
    return sorted(items, key=skey)


# --------------------------------------------------------------------------- #
# data model
# --------------------------------------------------------------------------- #

class _CachedHash:
    """Mixin caching the hash of deeply nested frozen records."""

    def __hash__(self):
        try:
            return self._cached_hash
        except AttributeError:
            h = hash(tuple(getattr(self, f) for f in self.__match_args__))
            object.__setattr__(self, "_cached_hash", h)
            return h


@dataclass(frozen=True, order=False)
class ObjectRef(_CachedHash):
    """Reference to an object of a specific AVDC handle."""
    avdc_id: str
    key: Any

    def __repr__(self) -> str:
        return f"Ob({self.key!r})"


@dataclass(frozen=True, order=False)
class TightArrow(_CachedHash):
    src: ObjectRef
    dst: ObjectRef
    key: Any

    def __repr__(self) -> str:
        return f"Tight({self.key!r}: {self.src.key!r}->{self.dst.key!r})"


@dataclass(frozen=True, order=False)
class LooseArrow(_CachedHash):
    src: ObjectRef
    dst: ObjectRef
    key: Any

    def __repr__(self) -> str:
        return f"Loose({self.key!r}: {self.src.key!r}-/->{self.dst.key!r})"


@dataclass(frozen=True, order=False)
class LoosePath(_CachedHash):
    """A composable path of loose arrows; may be empty (then src == dst)."""
    src: ObjectRef
    dst: ObjectRef
    arrows: tuple

    def __post_init__(self):
        at = self.src
        for u in self.arrows:
            if u.src != at:
                raise BoundaryError(f"path arrows not composable at {at!r}")
            at = u.dst
        if at != self.dst:
            raise BoundaryError("path does not end at its declared target")

    def __len__(self) -> int:
        return len(self.arrows)

    def __iter__(self):
        return iter(self.arrows)

    def __add__(self, other: "LoosePath") -> "LoosePath":
        if self.dst != other.src:
            raise BoundaryError("cannot concatenate non-adjacent paths")
        return LoosePath(self.src, other.dst, self.arrows + other.arrows)

    @staticmethod
    def empty(obj: ObjectRef) -> "LoosePath":
        return LoosePath(obj, obj, ())

    @staticmethod
    def of(*arrows: LooseArrow) -> "LoosePath":
        if not arrows:
            raise ValueError("use LoosePath.empty for the empty path")
        return LoosePath(arrows[0].src, arrows[-1].dst, tuple(arrows))

    def objects(self) -> tuple:
        return (self.src,) + tuple(u.dst for u in self.arrows)

    def __repr__(self) -> str:
        return f"Path({[u.key for u in self.arrows]!r})"


@dataclass(frozen=True, order=False)
class CellRecord(_CachedHash):
    """A cell: tight arrows on the sides, loose paths on top and bottom.

    The bottom path has length at most one.  A bottom of length zero forces
    the two side arrows to share their target.
    """
    left: TightArrow
    right: TightArrow
    top: LoosePath
    bottom: LoosePath
    payload: Any = None

    def __post_init__(self):
        if len(self.bottom) > 1:
            raise BoundaryError("cell bottoms have length at most one")
        if self.top.src != self.left.src or self.top.dst != self.right.src:
            raise BoundaryError("cell top does not match its side arrows")
        if self.bottom.src != self.left.dst or self.bottom.dst != self.right.dst:
            raise BoundaryError("cell bottom does not match its side arrows")

    @property
    def boundary(self):
        return (self.left, self.right, self.top, self.bottom)

    def __repr__(self) -> str:
        return (f"Cell({self.left.key!r},{self.right.key!r};"
                f"{[u.key for u in self.top.arrows]!r}=>"
                f"{[u.key for u in self.bottom.arrows]!r};{self.payload!r})")


for _record_cls in (ObjectRef, TightArrow, LooseArrow, LoosePath, CellRecord):
    _record_cls.__hash__ = _CachedHash.__hash__


# --------------------------------------------------------------------------- #
# handle registry
# --------------------------------------------------------------------------- #

_REGISTRY: dict = {}
_COUNTER = itertools.count()


def _register(handle: "AvdcHandle") -> None:
    _REGISTRY[handle.avdc_id] = handle


def handle_for(ref_or_cell) -> "AvdcHandle":
    """Resolve the handle owning an object, arrow, or cell."""
    if isinstance(ref_or_cell, CellRecord):
        avdc_id = ref_or_cell.left.src.avdc_id
    elif isinstance(ref_or_cell, (TightArrow, LooseArrow, LoosePath)):
        avdc_id = ref_or_cell.src.avdc_id
    else:
        avdc_id = ref_or_cell.avdc_id
    try:
        return _REGISTRY[avdc_id]
    except KeyError:
        raise ForeignCellError(f"no registered handle with id {avdc_id!r}")


# --------------------------------------------------------------------------- #
# pasting arithmetic
# --------------------------------------------------------------------------- #

def paste_boundary(alphas: Sequence[CellRecord], beta: CellRecord):
    """Compute the boundary of a multicomposite, validating adjacency.

    The bottoms of ``alphas`` must concatenate to the top of ``beta``;
    adjacent cells in the row must share their side tight arrows.  Returns
    ``(left, right, top, bottom)`` of the composite.
    """
    avdc_id = beta.left.src.avdc_id
    for a in alphas:
        if a.left.src.avdc_id != avdc_id:
            raise ForeignCellError("cells from different AVDCs in one pasting")
    if not alphas:
        if len(beta.top) != 0:
            raise BoundaryError("empty row pastes only onto an empty top")
        return beta.boundary
    concat = alphas[0].bottom
    for prev, nxt in zip(alphas, alphas[1:]):
        if prev.right != nxt.left:
            raise BoundaryError("adjacent cells do not share a side arrow")
        concat = concat + nxt.bottom
    if concat.arrows != beta.top.arrows or concat.src != beta.top.src:
        raise BoundaryError("row bottoms do not concatenate to the base top")
    top = alphas[0].top
    for a in alphas[1:]:
        top = top + a.top
    left = compose_tight(alphas[0].left, beta.left)
    right = compose_tight(alphas[-1].right, beta.right)
    return (left, right, top, beta.bottom)


def compose_tight(f: TightArrow, g: TightArrow) -> TightArrow:
    """Compose two tight arrows (diagrammatic order) via their handle."""
    return handle_for(f).compose(f, g)


def paste_cells(alphas: Sequence[CellRecord], beta: CellRecord) -> CellRecord:
    """Multicompose a row of cells over a base cell."""
    handle = handle_for(beta)
    return handle.multicompose(tuple(alphas), beta)


# --------------------------------------------------------------------------- #
# handle
# --------------------------------------------------------------------------- #

class AvdcHandle(ABC):
    """A finite AVDC exposed through deterministic enumerators.

    ``thin`` handles have at most one cell per boundary; their
    multicomposition is boundary arithmetic plus lookup of the unique
    filling cell.  ``diminished`` handles have no cells with empty bottom
    other than the tight identity cells.
    """

    #: at most one cell per boundary
    thin: bool = False
    #: the only cells with empty bottom are tight identity cells
    diminished: bool = False

    def __init__(self, name: str):
        self.avdc_id = f"{name}#{next(_COUNTER)}"
        self.name = name
        self._cell_cache: dict = {}
        _register(self)

    # -- enumeration ------------------------------------------------------- #

    @abstractmethod
    def objects(self) -> list:
        """All objects, sorted."""

    @abstractmethod
    def tight(self, a: ObjectRef, b: ObjectRef) -> list:
        """All tight arrows a -> b, sorted."""

    @abstractmethod
    def identity(self, a: ObjectRef) -> TightArrow:
        """The identity tight arrow on ``a``."""

    @abstractmethod
    def compose(self, f: TightArrow, g: TightArrow) -> TightArrow:
        """Composite of tight arrows in diagrammatic order."""

    @abstractmethod
    def loose(self, a: ObjectRef, b: ObjectRef) -> list:
        """All loose arrows a -/-> b, sorted."""

    def cells(self, left: TightArrow, right: TightArrow,
              top: LoosePath, bottom: LoosePath) -> list:
        boundary = (left, right, top, bottom)
        cached = self._cell_cache.get(boundary)
        if cached is None:
            cached = self._cells(left, right, top, bottom)
            self._cell_cache[boundary] = cached
        return cached

    @abstractmethod
    def _cells(self, left, right, top, bottom) -> list:
        """All cells with the given boundary, sorted by payload."""

    # -- identities -------------------------------------------------------- #

    def tight_identity_cell(self, f: TightArrow) -> CellRecord:
        """The cell with ``f`` on both sides and empty top and bottom."""
        cs = self.cells(f, f, LoosePath.empty(f.src), LoosePath.empty(f.dst))
        if self.thin:
            if not cs:
                raise CompositionError(f"missing tight identity cell on {f!r}")
            return cs[0]
        raise NotImplementedError

    def loose_identity_cell(self, u: LooseArrow) -> CellRecord:
        """The cell with identity sides and ``u`` on top and bottom."""
        p = LoosePath.of(u)
        cs = self.cells(self.identity(u.src), self.identity(u.dst), p, p)
        if self.thin:
            if not cs:
                raise CompositionError(f"missing loose identity cell on {u!r}")
            return cs[0]
        raise NotImplementedError

    def path_identity_cells(self, path: LoosePath) -> tuple:
        return tuple(self.loose_identity_cell(u) for u in path)

    # -- composition ------------------------------------------------------- #

    def multicompose(self, alphas: tuple, beta: CellRecord) -> CellRecord:
        left, right, top, bottom = paste_boundary(alphas, beta)
        if not alphas:
            return beta
        if self.thin:
            cs = self.cells(left, right, top, bottom)
            if not cs:
                raise CompositionError(
                    "multicomposite boundary has no filling cell")
            return cs[0]
        raise NotImplementedError

    # -- convenience ------------------------------------------------------- #

    def all_tight(self) -> list:
        out = []
        for a in self.objects():
            for b in self.objects():
                out.extend(self.tight(a, b))
        return out

    def all_loose(self) -> list:
        out = []
        for a in self.objects():
            for b in self.objects():
                out.extend(self.loose(a, b))
        return out

    def loose_paths(self, a: ObjectRef, b: ObjectRef, max_len: int,
                    loose_pool: Optional[dict] = None) -> list:
        """All loose paths a -> b of length at most ``max_len``.

        ``loose_pool`` optionally restricts the arrows used, as a mapping
        ``(src, dst) -> list of loose arrows``.
        """
        def pool(x, y):
            if loose_pool is not None:
                return loose_pool.get((x, y), [])
            return self.loose(x, y)

        paths = []
        frontier = [LoosePath.empty(a)]
        for _ in range(max_len + 1):
            paths.extend(p for p in frontier if p.dst == b)
            nxt = []
            for p in frontier:
                for mid in self.objects():
                    for u in pool(p.dst, mid):
                        nxt.append(LoosePath(a, mid, p.arrows + (u,)))
            frontier = nxt
        return paths

    def __repr__(self) -> str:
        return f"<AVDC {self.avdc_id}>"


# --------------------------------------------------------------------------- #
# thin handles from predicates
# --------------------------------------------------------------------------- #

class ThinAvdc(AvdcHandle):
    """A thin AVDC given by a cell-existence predicate.

    Subclasses implement ``has_cell``; cells carry no payload.
    """

    thin = True

    @abstractmethod
    def has_cell(self, left, right, top, bottom) -> bool:
        """Whether the unique cell with this boundary exists."""

    def _cells(self, left, right, top, bottom) -> list:
        if self.has_cell(left, right, top, bottom):
            return [CellRecord(left, right, top, bottom, payload=None)]
        return []


# --------------------------------------------------------------------------- #
# functors and transformations
# --------------------------------------------------------------------------- #

@dataclass
class AvdFunctor:
    """A structure-preserving map between AVDC handles.

    The component maps are callables; ``cell_map`` takes and returns whole
    cell records.
    """
    source: AvdcHandle
    target: AvdcHandle
    obj_map: Callable[[ObjectRef], ObjectRef]
    tight_map: Callable[[TightArrow], TightArrow]
    loose_map: Callable[[LooseArrow], LooseArrow]
    cell_map: Callable[[CellRecord], CellRecord]
    name: str = "functor"

    def path_map(self, path: LoosePath) -> LoosePath:
        arrows = tuple(self.loose_map(u) for u in path.arrows)
        return LoosePath(self.obj_map(path.src), self.obj_map(path.dst), arrows)

    def then(self, other: "AvdFunctor") -> "AvdFunctor":
        if self.target is not other.source:
            raise ValidationError("functors not composable")
        return AvdFunctor(
            source=self.source, target=other.target,
            obj_map=lambda a: other.obj_map(self.obj_map(a)),
            tight_map=lambda f: other.tight_map(self.tight_map(f)),
            loose_map=lambda u: other.loose_map(self.loose_map(u)),
            cell_map=lambda c: other.cell_map(self.cell_map(c)),
            name=f"{self.name};{other.name}")


def thin_functor(source: AvdcHandle, target: AvdcHandle,
                 obj_map, tight_map, loose_map, name="functor") -> AvdFunctor:
    """Build a functor into a thin handle; cells map by boundary lookup."""
    def cell_map(c: CellRecord) -> CellRecord:
        left = tight_map(c.left)
        right = tight_map(c.right)
        top = LoosePath(obj_map(c.top.src), obj_map(c.top.dst),
                        tuple(loose_map(u) for u in c.top.arrows))
        bottom = LoosePath(obj_map(c.bottom.src), obj_map(c.bottom.dst),
                           tuple(loose_map(u) for u in c.bottom.arrows))
        cs = target.cells(left, right, top, bottom)
        if not cs:
            raise CompositionError("functor image cell does not exist")
        return cs[0]
    return AvdFunctor(source, target, obj_map, tight_map, loose_map,
                      cell_map, name)


@dataclass
class TightTransformation:
    """A tight transformation between parallel functors.

    ``obj_component(A)`` is a tight arrow FA -> GA; ``loose_component(u)``
    is a cell (obj_component(src u), obj_component(dst u); (Fu) => (Gu)).
    """
    source: AvdFunctor
    target: AvdFunctor
    obj_component: Callable[[ObjectRef], TightArrow]
    loose_component: Callable[[LooseArrow], CellRecord]
    name: str = "transformation"


# --------------------------------------------------------------------------- #
# bounds and reports
# --------------------------------------------------------------------------- #

class BudgetExceeded(VdcError):
    """Raised internally when a bounded search runs out of budget."""


@dataclass
class Bounds:
    """Search bounds for every universal-property check.

    ``K`` bounds the length of quantified loose paths; ``probe_objects``
    and ``probe_loose`` restrict the quantified objects and loose arrows
    (``None`` means all declared); ``budget`` caps the number of elementary
    checks before a verdict degrades to inconclusive.
    ``max_loose_per_hom`` optionally truncates each probed hom-set of loose
    arrows to its enumeration-least members, for verdicts that must stay
    within a time budget; the truncation is part of the reported bounds.
    """
    K: int = 2
    probe_objects: Optional[Sequence[ObjectRef]] = None
    probe_loose: Optional[Sequence[LooseArrow]] = None
    budget: int = 10 ** 6
    max_loose_per_hom: Optional[int] = None

    def describe(self) -> dict:
        return {
            "K": self.K,
            "probe_objects": (None if self.probe_objects is None
                              else [skey(o.key) for o in self.probe_objects]),
            "probe_loose": (None if self.probe_loose is None
                            else [skey(u.key) for u in self.probe_loose]),
            "budget": self.budget,
            "max_loose_per_hom": self.max_loose_per_hom,
        }


class Prober:
    """Resolved probe sets plus the running budget for one check."""

    def __init__(self, handle: AvdcHandle, bounds: Bounds):
        self.handle = handle
        self.bounds = bounds
        self.spent = 0
        if bounds.probe_objects is None:
            self.objects = handle.objects()
        else:
            self.objects = list(bounds.probe_objects)
        self._loose_cache: dict = {}
        self._tight_cache: dict = {}

    def tick(self, n: int = 1) -> None:
        self.spent += n
        if self.spent > self.bounds.budget:
            raise BudgetExceeded(f"budget {self.bounds.budget} exhausted")

    def loose(self, a: ObjectRef, b: ObjectRef) -> list:
        got = self._loose_cache.get((a, b))
        if got is None:
            got = self.handle.loose(a, b)
            if self.bounds.probe_loose is not None:
                allowed = set(self.bounds.probe_loose)
                got = [u for u in got if u in allowed]
            if self.bounds.max_loose_per_hom is not None:
                got = got[:self.bounds.max_loose_per_hom]
            self._loose_cache[(a, b)] = got
        return got

    def tight(self, a: ObjectRef, b: ObjectRef) -> list:
        got = self._tight_cache.get((a, b))
        if got is None:
            got = self.handle.tight(a, b)
            self._tight_cache[(a, b)] = got
        return got

    def paths(self, a: ObjectRef, b: ObjectRef, max_len=None) -> list:
        if max_len is None:
            max_len = self.bounds.K
        paths = []
        frontier = [LoosePath.empty(a)]
        for _ in range(max_len + 1):
            paths.extend(p for p in frontier if p.dst == b)
            nxt = []
            for p in frontier:
                for mid in self.objects:
                    for u in self.loose(p.dst, mid):
                        nxt.append(LoosePath(a, mid, p.arrows + (u,)))
            frontier = nxt
        return paths

    def paths_from(self, a: ObjectRef, max_len=None) -> list:
        out = []
        for b in self.objects:
            out.extend(self.paths(a, b, max_len))
        return out


@dataclass
class CheckReport:
    """Outcome of one named check."""
    name: str
    verdict: str                      # "pass" | "fail" | "inconclusive"
    bounds: dict = field(default_factory=dict)
    witness: Any = None
    details: dict = field(default_factory=dict)
    timing: float = 0.0

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"


def run_check(name: str, bounds: Bounds, body: Callable[[], tuple]) -> CheckReport:
    """Run ``body`` (returning (verdict, witness, details)) into a report."""
    start = time.perf_counter()
    try:
        verdict, witness, details = body()
    except BudgetExceeded as exc:
        verdict, witness, details = "inconclusive", None, {"reason": str(exc)}
    elapsed = time.perf_counter() - start
    return CheckReport(name=name, verdict=verdict, bounds=bounds.describe(),
                       witness=witness, details=details, timing=elapsed)


def cells_equal(c1: CellRecord, c2: CellRecord) -> bool:
    return c1.boundary == c2.boundary and c1.payload == c2.payload


# --------------------------------------------------------------------------- #
# structural validation
# --------------------------------------------------------------------------- #

def validate_avdc(handle: AvdcHandle, bounds: Bounds) -> CheckReport:
    """Check category laws, identity cells, and pasting closure up to bounds."""

    def body():
        prober = Prober(handle, bounds)
        objs = prober.objects
        # tight category laws
        for a in objs:
            ida = handle.identity(a)
            if ida.src != a or ida.dst != a:
                return "fail", {"law": "identity-endpoints", "at": skey(a.key)}, {}
            for b in objs:
                for f in prober.tight(a, b):
                    prober.tick()
                    if handle.compose(ida, f) != f or \
                            handle.compose(f, handle.identity(b)) != f:
                        return "fail", {"law": "tight-unit", "at": skey(f.key)}, {}
        for a in objs:
            for b in objs:
                for c in objs:
                    for d in objs:
                        for f in prober.tight(a, b):
                            for g in prober.tight(b, c):
                                fg = handle.compose(f, g)
                                for h in prober.tight(c, d):
                                    prober.tick()
                                    if handle.compose(fg, h) != \
                                            handle.compose(f, handle.compose(g, h)):
                                        return "fail", {"law": "tight-assoc"}, {}
        # identity cells
        for a in objs:
            for b in objs:
                for f in prober.tight(a, b):
                    prober.tick()
                    handle.tight_identity_cell(f)
                for u in prober.loose(a, b):
                    prober.tick()
                    handle.loose_identity_cell(u)
        # unit laws of multicomposition on sampled cells
        for a in objs:
            for b in objs:
                for x in objs:
                    for y in objs:
                        for f in prober.tight(a, x):
                            for g in prober.tight(b, y):
                                for top in prober.paths(a, b):
                                    bottoms = [LoosePath.of(v)
                                               for v in prober.loose(x, y)]
                                    if x == y:
                                        bottoms.append(LoosePath.empty(x))
                                    for bot in bottoms:
                                        for cell in handle.cells(f, g, top, bot):
                                            prober.tick()
                                            row = handle.path_identity_cells(top)
                                            got = handle.multicompose(row, cell)
                                            if not cells_equal(got, cell):
                                                return ("fail",
                                                        {"law": "paste-unit-top"}, {})
                                            if len(bot) == 1:
                                                idc = handle.loose_identity_cell(
                                                    bot.arrows[0])
                                                got = handle.multicompose(
                                                    (cell,), idc)
                                                if not cells_equal(got, cell):
                                                    return ("fail",
                                                            {"law": "paste-unit-bottom"},
                                                            {})
        return "pass", None, {"checks": prober.spent}

    return run_check(f"validate-avdc:{handle.name}", bounds, body)


def validate_functor(functor: AvdFunctor, bounds: Bounds) -> CheckReport:
    """Check a functor preserves structure up to bounds."""

    def body():
        K, L = functor.source, functor.target
        prober = Prober(K, bounds)
        objs = prober.objects
        for a in objs:
            prober.tick()
            fa = functor.obj_map(a)
            if functor.tight_map(K.identity(a)) != L.identity(fa):
                return "fail", {"law": "identity", "at": skey(a.key)}, {}
        for a in objs:
            for b in objs:
                for c in objs:
                    for f in prober.tight(a, b):
                        for g in prober.tight(b, c):
                            prober.tick()
                            if functor.tight_map(K.compose(f, g)) != \
                                    L.compose(functor.tight_map(f),
                                              functor.tight_map(g)):
                                return "fail", {"law": "compose"}, {}
        # cell images paste compatibly on sampled multicompositions
        for a in objs:
            for b in objs:
                for x in objs:
                    for y in objs:
                        for f in prober.tight(a, x):
                            for g in prober.tight(b, y):
                                for top in prober.paths(a, b):
                                    bottoms = [LoosePath.of(v)
                                               for v in prober.loose(x, y)]
                                    if x == y:
                                        bottoms.append(LoosePath.empty(x))
                                    for bot in bottoms:
                                        for cell in K.cells(f, g, top, bot):
                                            prober.tick()
                                            row = K.path_identity_cells(top)
                                            lhs = functor.cell_map(
                                                K.multicompose(row, cell))
                                            rhs = L.multicompose(
                                                tuple(functor.cell_map(r)
                                                      for r in row),
                                                functor.cell_map(cell))
                                            if not cells_equal(lhs, rhs):
                                                return ("fail",
                                                        {"law": "paste-image"}, {})
        return "pass", None, {"checks": prober.spent}

    return run_check(f"validate-functor:{functor.name}", bounds, body)


def validate_transformation(rho: TightTransformation, bounds: Bounds) -> CheckReport:
    """Check naturality of a tight transformation up to bounds."""

    def body():
        F, G = rho.source, rho.target
        K, L = F.source, F.target
        prober = Prober(K, bounds)
        objs = prober.objects
        for a in objs:
            for b in objs:
                for f in prober.tight(a, b):
                    prober.tick()
                    lhs = L.compose(F.tight_map(f), rho.obj_component(b))
                    rhs = L.compose(rho.obj_component(a), G.tight_map(f))
                    if lhs != rhs:
                        return "fail", {"law": "naturality", "at": skey(f.key)}, {}
                for u in prober.loose(a, b):
                    prober.tick()
                    comp = rho.loose_component(u)
                    want_top = LoosePath.of(F.loose_map(u))
                    want_bot = LoosePath.of(G.loose_map(u))
                    if comp.left != rho.obj_component(a) or \
                            comp.right != rho.obj_component(b) or \
                            comp.top != want_top or comp.bottom != want_bot:
                        return "fail", {"law": "component-boundary",
                                        "at": skey(u.key)}, {}
        return "pass", None, {"checks": prober.spent}

    return run_check(f"validate-transformation:{rho.name}", bounds, body)
