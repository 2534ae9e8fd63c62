"""Tight cocones, diagram modules, modulations, colimit condition checks,
colimit builders and canonical presentations.

A diagram is an :class:`AvdFunctor` out of a finite shape handle (see
``shape_avdc``).  A tight cocone under a diagram consists of tight legs
into a vertex plus a 0-coary cell per loose arrow of the shape; the
familiar colimit notions (coproducts, collapses, collages) are cocones
whose induced comparison maps are bijective, which is checked condition
by condition by :func:`check_condition` and aggregated by
:func:`is_versatile_colimit`.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from .core import (AvdcHandle, AvdFunctor, Bounds, BudgetExceeded, CellRecord,
                   CheckReport, CompositionError, LooseArrow, LoosePath,
                   ObjectRef, Prober, TightArrow, ValidationError, cells_equal,
                   run_check, skey)
from .universal import _is_cartesian, find_restriction

__all__ = [
    "TightCocone", "DiagramModule", "Modulation", "ConditionVerdict",
    "CONDITION_TAGS", "PRESETS", "enumerate_cocones", "enumerate_modules",
    "induced_cocone", "restrict_module", "validate_cocone",
    "check_condition",
    "is_versatile_colimit", "check_strong_unital", "build_colimit",
    "canonical_presentation",
]

CONDITION_TAGS = ("T", "L-l", "L-r", "M0-l", "M0-r", "M1-l", "M1-r",
                  "M2", "M3")

#: Named reductions of the full condition list that are equivalent to it
#: when the ambient AVDC has the corresponding structure.
PRESETS = {
    None: ("T", "L-l", "L-r", "M1-l", "M1-r", "M2", "M3"),
    "full": ("T", "L-l", "L-r", "M1-l", "M1-r", "M2", "M3"),
    "companions-conjoints-unit": ("T", "L-l", "L-r", "M3"),
    "extensions-conjoints": ("T", "L-l", "L-r", "M0-l"),
}


# --------------------------------------------------------------------------- #
# data
# --------------------------------------------------------------------------- #

@dataclass
class TightCocone:
    """A tight cocone under ``diagram`` with the given ``vertex``.

    ``legs`` maps shape object keys to tight arrows F(A) -> vertex and
    ``cells`` maps shape loose-arrow keys to the 0-coary cocone cells
    (legs[A], legs[B]; (F(u),) => ())."""
    diagram: AvdFunctor
    vertex: ObjectRef
    legs: Dict[Any, TightArrow]
    cells: Dict[Any, CellRecord] = field(default_factory=dict)

    def leg(self, a: ObjectRef) -> TightArrow:
        return self.legs[a.key]

    def key(self):
        return (tuple(sorted(((skey(k), skey(f.key))
                              for k, f in self.legs.items()))),
                tuple(sorted(((skey(k), skey(c.payload))
                              for k, c in self.cells.items()))))


@dataclass
class DiagramModule:
    """A one-sided module under a diagram.

    For ``side == "left"`` the components are loose arrows F(A) -> vertex
    with action cells (id, id; (F(u), m_B) => m_A) per shape loose arrow
    u: A -> B and cartesian tight cells (F(f), id; m_A => m_B); for
    ``side == "right"`` everything is mirrored."""
    side: str
    diagram: AvdFunctor
    vertex: ObjectRef
    comps: Dict[Any, LooseArrow]
    tight_cells: Dict[Any, CellRecord] = field(default_factory=dict)
    action_cells: Dict[Any, CellRecord] = field(default_factory=dict)

    def comp(self, a: ObjectRef) -> LooseArrow:
        return self.comps[a.key]

    def key(self):
        return (self.side,
                tuple(sorted(((skey(k), skey(u.key))
                              for k, u in self.comps.items()))),
                tuple(sorted(((skey(k), skey(c.payload))
                              for k, c in self.action_cells.items()))))


@dataclass
class Modulation:
    """A family of cells indexed by shape objects, of one of the kinds
    "0", "1-left", "1-right", "2" or "3", with the framing data (paths
    and tight arrows) recorded in ``data``."""
    kind: str
    comps: Dict[Any, CellRecord]
    data: dict = field(default_factory=dict)


@dataclass
class ConditionVerdict:
    """Outcome of a single colimit condition check."""
    tag: str
    verdict: str                       # "pass" | "fail" | "inconclusive"
    witness: Any = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"


# --------------------------------------------------------------------------- #
# small helpers
# --------------------------------------------------------------------------- #

def _shape_kind(shape: AvdcHandle) -> str:
    kind = getattr(shape, "kind", None)
    if kind in ("discrete", "indiscrete", "vd-indiscrete"):
        return kind
    return "other"


def _shape_tights(shape: AvdcHandle) -> list:
    out = []
    for a in shape.objects():
        for b in shape.objects():
            out.extend(shape.tight(a, b))
    return out


def _shape_looses(shape: AvdcHandle) -> list:
    out = []
    for a in shape.objects():
        for b in shape.objects():
            out.extend(shape.loose(a, b))
    return out


def _id_beta(handle: AvdcHandle, bottom: LoosePath) -> CellRecord:
    if len(bottom) == 0:
        return handle.tight_identity_cell(handle.identity(bottom.src))
    if len(bottom) == 1:
        return handle.loose_identity_cell(bottom.arrows[0])
    raise CompositionError("identity pasting needs a phan bottom")


def _row(handle: AvdcHandle, cells: tuple) -> CellRecord:
    """Paste a row of cells against the identity on their common bottom."""
    bottom = cells[0].bottom
    for c in cells[1:]:
        bottom = bottom + c.bottom
    return handle.multicompose(tuple(cells), _id_beta(handle, bottom))


def _try_eq(handle, row, beta, rhs) -> bool:
    try:
        got = handle.multicompose(tuple(row), beta)
    except (CompositionError, KeyError):
        return False
    return cells_equal(got, rhs)


def _path_ids(handle: AvdcHandle, path: LoosePath) -> tuple:
    return tuple(handle.loose_identity_cell(u) for u in path.arrows)


def _phans(prober: Prober, a: ObjectRef, b: ObjectRef) -> list:
    """Loose paths of length at most one from a to b."""
    out = []
    if a == b:
        out.append(LoosePath.empty(a))
    out.extend(LoosePath.of(u) for u in prober.loose(a, b))
    return out


def _no_trunc(bounds: Bounds) -> Bounds:
    return dataclasses.replace(bounds, max_loose_per_hom=None)


def _restrict(handle: AvdcHandle, prober: Prober, u: LooseArrow,
              f: TightArrow, g: TightArrow) -> Optional[CellRecord]:
    """A chosen cartesian restriction cell (f, g; (r,) => (u,)) or None."""
    cache = prober.__dict__.setdefault("_restriction_cache", {})
    key = (u, f, g)
    if key in cache:
        return cache[key]
    prober.tick()
    if hasattr(handle, "restrict_loose"):
        cell = handle.restrict_loose(f, g, u)
    else:
        w = find_restriction(LoosePath.of(u), f, g, _no_trunc(prober.bounds))
        cell = None if w is None else w.cell
    cache[key] = cell
    return cell


# --------------------------------------------------------------------------- #
# cocones
# --------------------------------------------------------------------------- #

def _cocone_paste(xi: TightCocone, ubar: LoosePath) -> CellRecord:
    """The pasted 0-coary cell of a cocone over a shape loose path."""
    handle = xi.diagram.target
    if len(ubar) == 0:
        return handle.tight_identity_cell(xi.legs[ubar.src.key])
    row = tuple(xi.cells[u.key] for u in ubar.arrows)
    beta = handle.tight_identity_cell(handle.identity(xi.vertex))
    return handle.multicompose(row, beta)


def _shape_cells_sample(shape: AvdcHandle, prober_k: int):
    """All shape cells with top length <= max(2, K) and phan bottom."""
    max_top = max(2, prober_k)
    objs = shape.objects()
    for a in objs:
        for b in objs:
            tops = shape.loose_paths(a, b, max_top)
            for a2 in objs:
                for b2 in objs:
                    for f in shape.tight(a, a2):
                        for g in shape.tight(b, b2):
                            bots = [LoosePath.empty(a2)] if a2 == b2 else []
                            bots += [LoosePath.of(v)
                                     for v in shape.loose(a2, b2)]
                            for top in tops:
                                for bot in bots:
                                    yield from shape.cells(f, g, top, bot)


def _cocone_conditions_ok(xi: TightCocone, prober: Prober) -> bool:
    F = xi.diagram
    handle = F.target
    shape = F.source
    for f in _shape_tights(shape):
        if handle.compose(F.tight_map(f), xi.legs[f.dst.key]) \
                != xi.legs[f.src.key]:
            return False
    if handle.thin:
        return True
    for alpha in _shape_cells_sample(shape, prober.bounds.K):
        prober.tick()
        if len(alpha.bottom):
            below = xi.cells[alpha.bottom.arrows[0].key]
        else:
            below = handle.tight_identity_cell(
                xi.legs[alpha.bottom.src.key])
        lhs_ok = _try_eq(handle, (F.cell_map(alpha),), below,
                         _cocone_paste(xi, alpha.top))
        if not lhs_ok:
            return False
    return True


def _enumerate_cocones(diagram: AvdFunctor, vertex: ObjectRef,
                       prober: Prober) -> list:
    F = diagram
    handle = F.target
    shape = F.source
    objs = shape.objects()
    leg_choices = []
    for a in objs:
        leg_choices.append([(a, f)
                            for f in prober.tight(F.obj_map(a), vertex)])
    looses = _shape_looses(shape)
    out = []
    for combo in itertools.product(*leg_choices):
        prober.tick()
        legs = {a.key: f for a, f in combo}
        ok = True
        for f in _shape_tights(shape):
            if handle.compose(F.tight_map(f), legs[f.dst.key]) \
                    != legs[f.src.key]:
                ok = False
                break
        if not ok:
            continue
        cell_choices = []
        for u in looses:
            cands = handle.cells(legs[u.src.key], legs[u.dst.key],
                                 LoosePath.of(F.loose_map(u)),
                                 LoosePath.empty(vertex))
            if not cands:
                ok = False
                break
            cell_choices.append([(u, c) for c in cands])
        if not ok:
            continue
        for cells_combo in itertools.product(*cell_choices):
            prober.tick()
            xi = TightCocone(F, vertex, legs,
                             {u.key: c for u, c in cells_combo})
            if handle.thin or _cocone_conditions_ok(xi, prober):
                out.append(xi)
    return out


def enumerate_cocones(diagram: AvdFunctor, vertex: ObjectRef,
                      bounds: Bounds = None) -> list:
    """All tight cocones under ``diagram`` with the given vertex."""
    bounds = bounds or Bounds()
    prober = Prober(diagram.target, bounds)
    return _enumerate_cocones(diagram, vertex, prober)


def validate_cocone(xi: TightCocone, bounds: Bounds = None) -> CheckReport:
    bounds = bounds or Bounds()

    def body():
        prober = Prober(xi.diagram.target, bounds)
        handle = xi.diagram.target
        shape = xi.diagram.source
        for u in _shape_looses(shape):
            c = xi.cells.get(u.key)
            want = (xi.legs[u.src.key], xi.legs[u.dst.key],
                    LoosePath.of(xi.diagram.loose_map(u)),
                    LoosePath.empty(xi.vertex))
            if c is None or c.boundary != want:
                return "fail", skey(u.key), {"reason": "bad cocone cell"}
        if not _cocone_conditions_ok(xi, prober):
            return "fail", None, {"reason": "cocone equations fail"}
        return "pass", None, {}

    return run_check("validate-cocone", bounds, body)


def induced_cocone(xi: TightCocone, k: TightArrow) -> TightCocone:
    """The cocone obtained by following a cocone with a tight arrow."""
    handle = xi.diagram.target
    if k.src != xi.vertex:
        raise ValidationError("tight arrow does not start at the vertex")
    legs = {a: handle.compose(f, k) for a, f in xi.legs.items()}
    tid_k = handle.tight_identity_cell(k)
    cells = {u: handle.multicompose((c,), tid_k)
             for u, c in xi.cells.items()}
    return TightCocone(xi.diagram, k.dst, legs, cells)


# --------------------------------------------------------------------------- #
# diagram modules
# --------------------------------------------------------------------------- #

def _module_tight_cell(F: AvdFunctor, side: str, comps: dict,
                       actions: dict, f) -> CellRecord:
    """Reconstruct the cartesian tight cell of a module along a shape
    tight arrow from the action data."""
    handle = F.target
    shape = F.source
    a, b = f.src, f.dst
    if f == shape.identity(a):
        return handle.loose_identity_cell(comps[a.key])
    if side == "left":
        uba = shape.loose(b, a)[0]
        chi = shape.cells(f, shape.identity(a), LoosePath.empty(a),
                          LoosePath.of(uba))[0]
        return handle.multicompose(
            (F.cell_map(chi), handle.loose_identity_cell(comps[a.key])),
            actions[uba.key])
    uab = shape.loose(a, b)[0]
    chi = shape.cells(shape.identity(a), f, LoosePath.empty(a),
                      LoosePath.of(uab))[0]
    return handle.multicompose(
        (handle.loose_identity_cell(comps[a.key]), F.cell_map(chi)),
        actions[uab.key])


def _module_conditions_ok(F: AvdFunctor, module: DiagramModule,
                          prober: Prober) -> bool:
    """The generic module equations, indexed by shape cells."""
    handle = F.target
    if handle.thin:
        return True
    shape = F.source
    m = module
    for alpha in _shape_cells_sample(shape, prober.bounds.K):
        prober.tick()
        f, g, ubar, vbar = alpha.left, alpha.right, alpha.top, alpha.bottom
        if m.side == "left":
            nested = handle.loose_identity_cell(m.comps[ubar.dst.key])
            for u in reversed(ubar.arrows):
                nested = handle.multicompose(
                    (handle.loose_identity_cell(F.loose_map(u)), nested),
                    m.action_cells[u.key])
            rhs = handle.multicompose((nested,), m.tight_cells[f.key])
            if len(vbar):
                below = m.action_cells[vbar.arrows[0].key]
            else:
                below = handle.loose_identity_cell(m.comps[vbar.src.key])
            if not _try_eq(handle,
                           (F.cell_map(alpha), m.tight_cells[g.key]),
                           below, rhs):
                return False
        else:
            nested = handle.loose_identity_cell(m.comps[ubar.src.key])
            for u in ubar.arrows:
                nested = handle.multicompose(
                    (nested, handle.loose_identity_cell(F.loose_map(u))),
                    m.action_cells[u.key])
            rhs = handle.multicompose((nested,), m.tight_cells[g.key])
            if len(vbar):
                below = m.action_cells[vbar.arrows[0].key]
            else:
                below = handle.loose_identity_cell(m.comps[vbar.src.key])
            if not _try_eq(handle,
                           (m.tight_cells[f.key], F.cell_map(alpha)),
                           below, rhs):
                return False
    return True


def _indiscrete_module_laws_ok(F: AvdFunctor, side: str, comps: dict,
                               actions: dict, prober: Prober) -> bool:
    """Unit and associativity of the action data over an indiscrete-like
    shape (automatic over thin handles)."""
    handle = F.target
    if handle.thin:
        return True
    shape = F.source
    objs = shape.objects()
    for a in objs:
        uaa = shape.loose(a, a)[0]
        eta = shape.cells(shape.identity(a), shape.identity(a),
                          LoosePath.empty(a), LoosePath.of(uaa))[0]
        eq = handle.loose_identity_cell(comps[a.key])
        if side == "left":
            if not _try_eq(handle, (F.cell_map(eta), eq),
                           actions[uaa.key], eq):
                return False
        else:
            if not _try_eq(handle, (eq, F.cell_map(eta)),
                           actions[uaa.key], eq):
                return False
    for a in objs:
        for b in objs:
            for c in objs:
                prober.tick()
                uab = shape.loose(a, b)[0]
                ubc = shape.loose(b, c)[0]
                uac = shape.loose(a, c)[0]
                psi = shape.cells(shape.identity(a), shape.identity(c),
                                  LoosePath.of(uab, ubc),
                                  LoosePath.of(uac))[0]
                if side == "left":
                    lhs = handle.multicompose(
                        (F.cell_map(psi),
                         handle.loose_identity_cell(comps[c.key])),
                        actions[uac.key])
                    rhs = handle.multicompose(
                        (handle.loose_identity_cell(F.loose_map(uab)),
                         actions[ubc.key]), actions[uab.key])
                else:
                    lhs = handle.multicompose(
                        (handle.loose_identity_cell(comps[a.key]),
                         F.cell_map(psi)), actions[uac.key])
                    rhs = handle.multicompose(
                        (actions[uab.key],
                         handle.loose_identity_cell(F.loose_map(ubc))),
                        actions[ubc.key])
                if not cells_equal(lhs, rhs):
                    return False
    return True


def _enumerate_modules(F: AvdFunctor, vertex: ObjectRef, side: str,
                       prober: Prober, verify: bool = False) -> list:
    handle = F.target
    shape = F.source
    objs = shape.objects()
    comp_choices = []
    for a in objs:
        fa = F.obj_map(a)
        homs = (prober.loose(fa, vertex) if side == "left"
                else prober.loose(vertex, fa))
        comp_choices.append([(a, u) for u in homs])
    looses = _shape_looses(shape)
    out = []
    for combo in itertools.product(*comp_choices):
        prober.tick()
        comps = {a.key: u for a, u in combo}
        action_choices = []
        ok = True
        for u in looses:
            fu = F.loose_map(u)
            if side == "left":
                cands = handle.cells(
                    handle.identity(fu.src), handle.identity(vertex),
                    LoosePath.of(fu, comps[u.dst.key]),
                    LoosePath.of(comps[u.src.key]))
            else:
                cands = handle.cells(
                    handle.identity(vertex), handle.identity(fu.dst),
                    LoosePath.of(comps[u.src.key], fu),
                    LoosePath.of(comps[u.dst.key]))
            if not cands:
                ok = False
                break
            action_choices.append([(u, c) for c in cands])
        if not ok:
            continue
        for action_combo in itertools.product(*action_choices):
            prober.tick()
            actions = {u.key: c for u, c in action_combo}
            if not _indiscrete_module_laws_ok(F, side, comps, actions,
                                              prober):
                continue
            tight_cells = {}
            try:
                for f in _shape_tights(shape):
                    tight_cells[f.key] = _module_tight_cell(
                        F, side, comps, actions, f)
            except (CompositionError, IndexError):
                continue
            module = DiagramModule(side, F, vertex, comps, tight_cells,
                                   actions)
            if not handle.thin and _shape_kind(shape) == "indiscrete":
                if not _module_conditions_ok(F, module, prober):
                    continue
            if verify:
                from .universal import is_split
                good = True
                for f in _shape_tights(shape):
                    if f == shape.identity(f.src):
                        continue
                    if not is_split(tight_cells[f.key],
                                    prober.bounds).ok:
                        good = False
                        break
                if not good:
                    continue
            out.append(module)
    return out


def enumerate_modules(diagram: AvdFunctor, vertex: ObjectRef,
                      side: str = "left", bounds: Bounds = None,
                      verify: bool = False) -> list:
    """All one-sided modules under ``diagram`` with the given vertex.

    The cartesian tight cells are reconstructed from the action data;
    ``verify=True`` additionally confirms each is split."""
    if side not in ("left", "right"):
        raise ValidationError("side must be 'left' or 'right'")
    bounds = bounds or Bounds()
    prober = Prober(diagram.target, bounds)
    return _enumerate_modules(diagram, vertex, side, prober, verify=verify)


# --------------------------------------------------------------------------- #
# restricted modules
# --------------------------------------------------------------------------- #

def _restrict_module(xi: TightCocone, p: LooseArrow, side: str,
                     prober: Prober):
    handle = xi.diagram.target
    F = xi.diagram
    shape = F.source
    cache = prober.__dict__.setdefault("_restr_module_cache", {})
    if (p, side) in cache:
        return cache[(p, side)]
    carts: Dict[Any, CellRecord] = {}
    comps: Dict[Any, LooseArrow] = {}
    for a in shape.objects():
        la = xi.legs[a.key]
        if side == "left":
            cart = _restrict(handle, prober, p, la,
                             handle.identity(p.dst))
        else:
            cart = _restrict(handle, prober, p, handle.identity(p.src), la)
        if cart is None:
            raise ValidationError(
                f"not-pulling: leg at {skey(a.key)} has no restriction "
                f"of {skey(p.key)}")
        carts[a.key] = cart
        comps[a.key] = cart.top.arrows[0]
    vertex = p.dst if side == "left" else p.src
    tight_cells = {}
    for f in _shape_tights(shape):
        a, b = f.src, f.dst
        ff = F.tight_map(f)
        if side == "left":
            cands = handle.cells(ff, handle.identity(vertex),
                                 LoosePath.of(comps[a.key]),
                                 LoosePath.of(comps[b.key]))
        else:
            cands = handle.cells(handle.identity(vertex), ff,
                                 LoosePath.of(comps[a.key]),
                                 LoosePath.of(comps[b.key]))
        got = None
        for c in cands:
            if _try_eq(handle, (c,), carts[b.key], carts[a.key]):
                got = c
                break
        if got is None:
            raise CompositionError("restricted module tight cell missing")
        tight_cells[f.key] = got
    actions = {}
    for u in _shape_looses(shape):
        fu = F.loose_map(u)
        a, b = u.src, u.dst
        if side == "left":
            cands = handle.cells(handle.identity(fu.src),
                                 handle.identity(vertex),
                                 LoosePath.of(fu, comps[b.key]),
                                 LoosePath.of(comps[a.key]))
            rhs = _row(handle, (xi.cells[u.key], carts[b.key]))
            got = None
            for c in cands:
                if _try_eq(handle, (c,), carts[a.key], rhs):
                    got = c
                    break
        else:
            cands = handle.cells(handle.identity(vertex),
                                 handle.identity(fu.dst),
                                 LoosePath.of(comps[a.key], fu),
                                 LoosePath.of(comps[b.key]))
            rhs = _row(handle, (carts[a.key], xi.cells[u.key]))
            got = None
            for c in cands:
                if _try_eq(handle, (c,), carts[b.key], rhs):
                    got = c
                    break
        if got is None:
            raise CompositionError("restricted module action cell missing")
        actions[u.key] = got
    module = DiagramModule(side, F, vertex, comps, tight_cells, actions)
    modulation = Modulation(f"1-{side}", dict(carts), {"loose": p})
    cache[(p, side)] = (module, modulation)
    return module, modulation


def restrict_module(xi: TightCocone, p: LooseArrow, side: str = "left",
                    bounds: Bounds = None):
    """Restrict a loose arrow at the vertex to a module under the diagram.

    Returns the module together with the cartesian cell family connecting
    it to ``p`` (a modulation of kind ``1-left``/``1-right``); raises
    ``ValidationError`` ("not-pulling") when a leg lacks the required
    restriction."""
    bounds = bounds or Bounds()
    prober = Prober(xi.diagram.target, bounds)
    return _restrict_module(xi, p, side, prober)


# --------------------------------------------------------------------------- #
# modulation axioms
# --------------------------------------------------------------------------- #

def _type1_axioms_ok(handle, F, xk: TightCocone, module: DiagramModule,
                     frame: LoosePath, comps: dict) -> bool:
    if handle.thin:
        return True
    shape = F.source
    ids = _path_ids(handle, frame)
    left = module.side == "left"
    for f in _shape_tights(shape):
        mf = module.tight_cells[f.key]
        if left:
            if not _try_eq(handle, (mf,) + ids, comps[f.dst.key],
                           comps[f.src.key]):
                return False
        else:
            if not _try_eq(handle, ids + (mf,), comps[f.dst.key],
                           comps[f.src.key]):
                return False
    for u in _shape_looses(shape):
        mu = module.action_cells[u.key]
        if left:
            lhs_ok = _try_eq(
                handle, (mu,) + ids, comps[u.src.key],
                _row(handle, (xk.cells[u.key], comps[u.dst.key])))
        else:
            lhs_ok = _try_eq(
                handle, ids + (mu,), comps[u.dst.key],
                _row(handle, (comps[u.src.key], xk.cells[u.key])))
        if not lhs_ok:
            return False
    return True


def _type0_axioms_ok(handle, F, m, m2, frame: LoosePath,
                     comps: dict) -> bool:
    if handle.thin:
        return True
    shape = F.source
    ids = _path_ids(handle, frame)
    left = m.side == "left"
    try:
        for f in _shape_tights(shape):
            mf = m.tight_cells[f.key]
            row = (mf,) + ids if left else ids + (mf,)
            if not _try_eq(handle, (comps[f.src.key],),
                           m2.tight_cells[f.key],
                           handle.multicompose(row, comps[f.dst.key])):
                return False
        for u in _shape_looses(shape):
            fu = F.loose_map(u)
            mu = m.action_cells[u.key]
            if left:
                lhs = handle.multicompose((mu,) + ids, comps[u.src.key])
                ok = _try_eq(handle,
                             (handle.loose_identity_cell(fu),
                              comps[u.dst.key]),
                             m2.action_cells[u.key], lhs)
            else:
                lhs = handle.multicompose(ids + (mu,), comps[u.dst.key])
                ok = _try_eq(handle,
                             (comps[u.src.key],
                              handle.loose_identity_cell(fu)),
                             m2.action_cells[u.key], lhs)
            if not ok:
                return False
    except CompositionError:
        return False
    return True


def _type2_axioms_ok(handle, F, xk, xk2, comps: dict) -> bool:
    if handle.thin:
        return True
    shape = F.source
    for f in _shape_tights(shape):
        tid = handle.tight_identity_cell(F.tight_map(f))
        if not _try_eq(handle, (tid,), comps[f.dst.key],
                       comps[f.src.key]):
            return False
    for u in _shape_looses(shape):
        lhs = _row(handle, (xk.cells[u.key], comps[u.dst.key]))
        rhs = _row(handle, (comps[u.src.key], xk2.cells[u.key]))
        if not cells_equal(lhs, rhs):
            return False
    return True


def _type3_axioms_ok(handle, F, n, m, qframe, pframe, comps: dict) -> bool:
    if handle.thin:
        return True
    shape = F.source
    qids = _path_ids(handle, qframe)
    pids = _path_ids(handle, pframe)
    for f in _shape_tights(shape):
        if not _try_eq(handle,
                       qids + (n.tight_cells[f.key],
                               m.tight_cells[f.key]) + pids,
                       comps[f.dst.key], comps[f.src.key]):
            return False
    for u in _shape_looses(shape):
        lhs = handle.multicompose(
            qids + (n.action_cells[u.key],
                    handle.loose_identity_cell(m.comps[u.dst.key])) + pids,
            comps[u.dst.key])
        rhs = handle.multicompose(
            qids + (handle.loose_identity_cell(n.comps[u.src.key]),
                    m.action_cells[u.key]) + pids,
            comps[u.src.key])
        if not cells_equal(lhs, rhs):
            return False
    return True


# --------------------------------------------------------------------------- #
# the conditions
# --------------------------------------------------------------------------- #

def _check_T(xi: TightCocone, prober: Prober, framed: bool):
    handle = xi.diagram.target
    for L in prober.objects:
        cocones = {c.key() for c in
                   _enumerate_cocones(xi.diagram, L, prober)}
        seen = {}
        for k in prober.tight(xi.vertex, L):
            prober.tick()
            key = induced_cocone(xi, k).key()
            if key in seen:
                return ("fail", {"vertex": skey(L.key),
                                 "arrows": [skey(seen[key].key),
                                            skey(k.key)]},
                        {"reason": "not injective"})
            seen[key] = k
        missing = cocones - set(seen)
        if missing:
            return ("fail", {"vertex": skey(L.key)},
                    {"reason": "not surjective",
                     "count": len(missing)})
        extra = set(seen) - cocones
        if extra:
            return ("fail", {"vertex": skey(L.key)},
                    {"reason": "image is not a cocone"})
    return "pass", None, {}


def _pulling_ok(xi: TightCocone, prober: Prober, side: str):
    handle = xi.diagram.target
    shape = xi.diagram.source
    for M in prober.objects:
        homs = (prober.loose(xi.vertex, M) if side == "left"
                else prober.loose(M, xi.vertex))
        for p in homs:
            for a in shape.objects():
                la = xi.legs[a.key]
                if side == "left":
                    cart = _restrict(handle, prober, p, la,
                                     handle.identity(M))
                else:
                    cart = _restrict(handle, prober, p,
                                     handle.identity(M), la)
                if cart is None:
                    return {"leg": skey(a.key), "loose": skey(p.key)}
    return None


def _check_L(xi: TightCocone, prober: Prober, side: str, framed: bool):
    handle = xi.diagram.target
    shape = xi.diagram.source
    bad = _pulling_ok(xi, prober, side)
    if bad is not None:
        return "fail", bad, {"reason": "not-pulling"}
    for M in prober.objects:
        for m in _enumerate_modules(xi.diagram, M, side, prober):
            found = False
            homs = (handle.loose(xi.vertex, M) if side == "left"
                    else handle.loose(M, xi.vertex))
            for p in homs:
                prober.tick()
                carts = {}
                ok = True
                for a in shape.objects():
                    la = xi.legs[a.key]
                    if side == "left":
                        cart = _restrict(handle, prober, p, la,
                                         handle.identity(M))
                    else:
                        cart = _restrict(handle, prober, p,
                                         handle.identity(M), la)
                    if cart is None or \
                            cart.top.arrows[0] != m.comps[a.key]:
                        ok = False
                        break
                    carts[a.key] = cart
                if not ok:
                    continue
                if not _type1_axioms_ok(handle, xi.diagram, xi, m,
                                        LoosePath.empty(M), carts):
                    continue
                found = True
                break
            if not found:
                return ("fail",
                        {"vertex": skey(M.key),
                         "module": [skey(u.key)
                                    for u in m.comps.values()]},
                        {"reason": "module is not a restriction",
                         "form": "L-prime"})
    return "pass", None, {"form": "L-prime"}


def _suffix_framings(prober: Prober, M: ObjectRef, framed: bool):
    if not framed:
        yield LoosePath.empty(M)
        return
    yield from prober.paths_from(M)


def _prefix_framings(prober: Prober, N: ObjectRef, framed: bool):
    if not framed:
        yield LoosePath.empty(N)
        return
    for q in prober.objects:
        yield from prober.paths(q, N)


def _check_M0(xi: TightCocone, prober: Prober, side: str, framed: bool):
    handle = xi.diagram.target
    shape = xi.diagram.source
    vertex = xi.vertex
    objs = shape.objects()
    for M in prober.objects:
        homs = (prober.loose(vertex, M) if side == "left"
                else prober.loose(M, vertex))
        for p in homs:
            try:
                m, md = _restrict_module(xi, p, side, prober)
            except ValidationError as exc:
                return "fail", str(exc), {"precondition-failed": True}
            frames = (_suffix_framings(prober, M, framed)
                      if side == "left"
                      else _prefix_framings(prober, M, framed))
            for qbar in frames:
                Q = qbar.dst if side == "left" else qbar.src
                ends = [Q] if not framed else prober.objects
                for X in ends:
                    js = ([handle.identity(Q)] if not framed
                          else prober.tight(Q, X))
                    homs2 = (prober.loose(vertex, X) if side == "left"
                             else prober.loose(X, vertex))
                    for j in js:
                        for p2 in homs2:
                            try:
                                m2, md2 = _restrict_module(xi, p2, side,
                                                           prober)
                            except ValidationError as exc:
                                return ("fail", str(exc),
                                        {"precondition-failed": True})
                            verdict = _m0_instance(
                                xi, prober, side, m, md, m2, md2,
                                qbar, j, p, p2)
                            if verdict is not None:
                                return verdict
    return "pass", None, {"framing": "full" if framed else "reduced"}


def _m0_instance(xi, prober, side, m, md, m2, md2, qbar, j, p, p2):
    handle = xi.diagram.target
    shape = xi.diagram.source
    objs = shape.objects()
    comp_cands = []
    for a in objs:
        fa = xi.diagram.obj_map(a)
        if side == "left":
            cs = handle.cells(handle.identity(fa), j,
                              LoosePath.of(m.comps[a.key]) + qbar,
                              LoosePath.of(m2.comps[a.key]))
        else:
            cs = handle.cells(j, handle.identity(fa),
                              qbar + LoosePath.of(m.comps[a.key]),
                              LoosePath.of(m2.comps[a.key]))
        if not cs:
            return None
        comp_cands.append([(a, c) for c in cs])
    ids_q = _path_ids(handle, qbar)
    if side == "left":
        hats = handle.cells(handle.identity(xi.vertex), j,
                            LoosePath.of(p) + qbar, LoosePath.of(p2))
    else:
        hats = handle.cells(j, handle.identity(xi.vertex),
                            qbar + LoosePath.of(p), LoosePath.of(p2))
    if handle.thin:
        prober.tick()
        if len(hats) == 1:
            return None
        return ("fail",
                {"loose": [skey(p.key), skey(p2.key)],
                 "factorizations": len(hats)},
                {"reason": "no unique factorization"})
    for combo in itertools.product(*comp_cands):
        prober.tick()
        comps = {a.key: c for a, c in combo}
        if not _type0_axioms_ok(handle, xi.diagram, m, m2, qbar, comps):
            continue
        good = []
        for h in hats:
            ok = True
            for a in objs:
                if side == "left":
                    lhs = handle.multicompose((comps[a.key],),
                                              md2.comps[a.key])
                    ok = _try_eq(handle,
                                 (md.comps[a.key],) + ids_q, h, lhs)
                else:
                    lhs = handle.multicompose((comps[a.key],),
                                              md2.comps[a.key])
                    ok = _try_eq(handle,
                                 ids_q + (md.comps[a.key],), h, lhs)
                if not ok:
                    break
            if ok:
                good.append(h)
        if len(good) != 1:
            return ("fail",
                    {"loose": [skey(p.key), skey(p2.key)],
                     "factorizations": len(good)},
                    {"reason": "no unique factorization"})
    return None


def _check_M1(xi: TightCocone, prober: Prober, side: str, framed: bool):
    handle = xi.diagram.target
    shape = xi.diagram.source
    vertex = xi.vertex
    objs = shape.objects()
    for L in prober.objects:
        for k in prober.tight(vertex, L):
            xk = induced_cocone(xi, k)
            for M in prober.objects:
                homs = (prober.loose(vertex, M) if side == "left"
                        else prober.loose(M, vertex))
                for p in homs:
                    try:
                        m, md = _restrict_module(xi, p, side, prober)
                    except ValidationError as exc:
                        return "fail", str(exc), {"precondition-failed": True}
                    frames = (_suffix_framings(prober, M, framed)
                              if side == "left"
                              else _prefix_framings(prober, M, framed))
                    for frame in frames:
                        Q = frame.dst if side == "left" else frame.src
                        for r in (_phans(prober, L, Q) if side == "left"
                                  else _phans(prober, Q, L)):
                            verdict = _m1_instance(xi, prober, side, xk, k,
                                                   m, md, p, frame, r)
                            if verdict is not None:
                                return verdict
    return "pass", None, {"framing": "full" if framed else "reduced"}


def _m1_instance(xi, prober, side, xk, k, m, md, p, frame, r):
    handle = xi.diagram.target
    shape = xi.diagram.source
    objs = shape.objects()
    jQ = handle.identity(frame.dst if side == "left" else frame.src)
    comp_cands = []
    for a in objs:
        lka = xk.legs[a.key]
        if side == "left":
            cs = handle.cells(lka, jQ,
                              LoosePath.of(m.comps[a.key]) + frame, r)
        else:
            cs = handle.cells(jQ, lka,
                              frame + LoosePath.of(m.comps[a.key]), r)
        if not cs:
            return None
        comp_cands.append([(a, c) for c in cs])
    ids = _path_ids(handle, frame)
    if side == "left":
        hats = handle.cells(k, jQ, LoosePath.of(p) + frame, r)
    else:
        hats = handle.cells(jQ, k, frame + LoosePath.of(p), r)
    if handle.thin:
        prober.tick()
        if len(hats) == 1:
            return None
        return ("fail",
                {"tight": skey(k.key), "loose": skey(p.key),
                 "factorizations": len(hats)},
                {"reason": "no unique factorization"})
    for combo in itertools.product(*comp_cands):
        prober.tick()
        comps = {a.key: c for a, c in combo}
        if not _type1_axioms_ok(handle, xi.diagram, xk, m, frame, comps):
            continue
        good = []
        for h in hats:
            ok = True
            for a in objs:
                if side == "left":
                    ok = _try_eq(handle, (md.comps[a.key],) + ids, h,
                                 comps[a.key])
                else:
                    ok = _try_eq(handle, ids + (md.comps[a.key],), h,
                                 comps[a.key])
                if not ok:
                    break
            if ok:
                good.append(h)
        if len(good) != 1:
            return ("fail",
                    {"tight": skey(k.key), "loose": skey(p.key),
                     "factorizations": len(good)},
                    {"reason": "no unique factorization"})
    return None


def _check_M2(xi: TightCocone, prober: Prober, framed: bool):
    handle = xi.diagram.target
    shape = xi.diagram.source
    vertex = xi.vertex
    objs = shape.objects()
    for L in prober.objects:
        for L2 in prober.objects:
            for k in prober.tight(vertex, L):
                xk = induced_cocone(xi, k)
                for k2 in prober.tight(vertex, L2):
                    xk2 = induced_cocone(xi, k2)
                    for q in _phans(prober, L, L2):
                        verdict = _m2_instance(xi, prober, xk, xk2,
                                               k, k2, q)
                        if verdict is not None:
                            return verdict
    return "pass", None, {}


def _m2_instance(xi, prober, xk, xk2, k, k2, q):
    handle = xi.diagram.target
    shape = xi.diagram.source
    objs = shape.objects()
    comp_cands = []
    for a in objs:
        cs = handle.cells(xk.legs[a.key], xk2.legs[a.key],
                          LoosePath.empty(xi.diagram.obj_map(a)), q)
        if not cs:
            return None
        comp_cands.append([(a, c) for c in cs])
    hats = handle.cells(k, k2, LoosePath.empty(xi.vertex), q)
    if handle.thin:
        prober.tick()
        if len(hats) == 1:
            return None
        return ("fail",
                {"tight": [skey(k.key), skey(k2.key)],
                 "factorizations": len(hats)},
                {"reason": "no unique factorization"})
    for combo in itertools.product(*comp_cands):
        prober.tick()
        comps = {a.key: c for a, c in combo}
        if not _type2_axioms_ok(handle, xi.diagram, xk, xk2, comps):
            continue
        good = []
        for h in hats:
            ok = True
            for a in objs:
                tid = handle.tight_identity_cell(xi.legs[a.key])
                if not _try_eq(handle, (tid,), h, comps[a.key]):
                    ok = False
                    break
            if ok:
                good.append(h)
        if len(good) != 1:
            return ("fail",
                    {"tight": [skey(k.key), skey(k2.key)],
                     "factorizations": len(good)},
                    {"reason": "no unique factorization"})
    return None


def _check_M3(xi: TightCocone, prober: Prober, framed: bool):
    handle = xi.diagram.target
    shape = xi.diagram.source
    vertex = xi.vertex
    for N in prober.objects:
        for M in prober.objects:
            for t in prober.loose(N, vertex):
                try:
                    n, nd = _restrict_module(xi, t, "right", prober)
                except ValidationError as exc:
                    return "fail", str(exc), {"precondition-failed": True}
                for s in prober.loose(vertex, M):
                    try:
                        m, md = _restrict_module(xi, s, "left", prober)
                    except ValidationError as exc:
                        return ("fail", str(exc),
                                {"precondition-failed": True})
                    for qbar in _prefix_framings(prober, N, framed):
                        for pbar in _suffix_framings(prober, M, framed):
                            for r in _phans(prober, qbar.src, pbar.dst):
                                verdict = _m3_instance(
                                    xi, prober, n, nd, m, md, t, s,
                                    qbar, pbar, r)
                                if verdict is not None:
                                    return verdict
    return "pass", None, {"framing": "full" if framed else "reduced"}


def _m3_instance(xi, prober, n, nd, m, md, t, s, qbar, pbar, r):
    handle = xi.diagram.target
    shape = xi.diagram.source
    objs = shape.objects()
    j = handle.identity(qbar.src)
    i = handle.identity(pbar.dst)
    comp_cands = []
    for a in objs:
        top = (qbar + LoosePath.of(n.comps[a.key], m.comps[a.key])
               + pbar)
        cs = handle.cells(j, i, top, r)
        if not cs:
            return None
        comp_cands.append([(a, c) for c in cs])
    qids = _path_ids(handle, qbar)
    pids = _path_ids(handle, pbar)
    hats = handle.cells(j, i, qbar + LoosePath.of(t, s) + pbar, r)
    if handle.thin:
        prober.tick()
        if len(hats) == 1:
            return None
        return ("fail",
                {"loose": [skey(t.key), skey(s.key)],
                 "factorizations": len(hats)},
                {"reason": "no unique factorization"})
    for combo in itertools.product(*comp_cands):
        prober.tick()
        comps = {a.key: c for a, c in combo}
        if not _type3_axioms_ok(handle, xi.diagram, n, m, qbar, pbar,
                                comps):
            continue
        good = []
        for h in hats:
            ok = True
            for a in objs:
                if not _try_eq(handle,
                               qids + (nd.comps[a.key],
                                       md.comps[a.key]) + pids,
                               h, comps[a.key]):
                    ok = False
                    break
            if ok:
                good.append(h)
        if len(good) != 1:
            return ("fail",
                    {"loose": [skey(t.key), skey(s.key)],
                     "factorizations": len(good)},
                    {"reason": "no unique factorization"})
    return None


_CHECKS = {
    "T": lambda xi, prober, framed: _check_T(xi, prober, framed),
    "L-l": lambda xi, prober, framed: _check_L(xi, prober, "left", framed),
    "L-r": lambda xi, prober, framed: _check_L(xi, prober, "right", framed),
    "M0-l": lambda xi, prober, framed: _check_M0(xi, prober, "left", framed),
    "M0-r": lambda xi, prober, framed: _check_M0(xi, prober, "right", framed),
    "M1-l": lambda xi, prober, framed: _check_M1(xi, prober, "left", framed),
    "M1-r": lambda xi, prober, framed: _check_M1(xi, prober, "right", framed),
    "M2": lambda xi, prober, framed: _check_M2(xi, prober, framed),
    "M3": lambda xi, prober, framed: _check_M3(xi, prober, framed),
}


def check_condition(xi: TightCocone, tag: str, bounds: Bounds = None,
                    framed: bool = False,
                    _prober: Prober = None) -> ConditionVerdict:
    """Check a single colimit condition for a tight cocone.

    By default the quantified modulations carry no framing paths (their
    framed variants reduce to the unframed ones whenever the ambient AVDC
    has restrictions, which holds in all built-in constructions);
    ``framed=True`` quantifies framings up to the path bound."""
    if tag not in _CHECKS:
        raise ValidationError(f"unknown condition tag {tag!r}")
    bounds = bounds or Bounds()
    prober = _prober or Prober(xi.diagram.target, bounds)
    try:
        verdict, witness, details = _CHECKS[tag](xi, prober, framed)
    except BudgetExceeded as exc:
        verdict, witness, details = "inconclusive", None, {"reason": str(exc)}
    details = dict(details)
    details.setdefault("checks", prober.spent)
    return ConditionVerdict(tag, verdict, witness, details)


def is_versatile_colimit(xi: TightCocone, bounds: Bounds = None,
                         preset: str = None,
                         framed: bool = False) -> CheckReport:
    """Check all colimit conditions for a cocone and aggregate.

    ``preset`` selects a reduced but equivalent condition list for
    ambient AVDCs with extra structure (see :data:`PRESETS`)."""
    bounds = bounds or Bounds()
    tags = PRESETS.get(preset)
    if tags is None:
        raise ValidationError(f"unknown preset {preset!r}")

    def body():
        results = {}
        verdict = "pass"
        witness = None
        shared = Prober(xi.diagram.target, bounds)
        for tag in tags:
            v = check_condition(xi, tag, bounds, framed=framed,
                                _prober=shared)
            results[tag] = {"verdict": v.verdict, "witness": v.witness,
                            "details": v.details}
            if v.verdict == "fail" and verdict != "fail":
                verdict = "fail"
                witness = {"condition": tag, "witness": v.witness}
            elif v.verdict == "inconclusive" and verdict == "pass":
                verdict = "inconclusive"
        return verdict, witness, {"conditions": results,
                                  "preset": preset or "full"}

    return run_check("versatile-colimit", bounds, body)


def check_strong_unital(xi: TightCocone, bounds: Bounds = None) -> CheckReport:
    """Whether a cocone is strong (all cocone cells cartesian) and its
    vertex carries a loose unit."""
    bounds = bounds or Bounds()
    handle = xi.diagram.target

    def body():
        prober = Prober(handle, bounds)
        exact = handle.thin and hasattr(handle, "restrict_nullary")
        strong = True
        bad = None
        for ukey, c in sorted(xi.cells.items(), key=lambda kv: skey(kv[0])):
            prober.tick()
            if exact:
                w = handle.restrict_nullary(c.left, c.right)
                ok = (w is not None and len(c.top) == 1
                      and w.top.arrows == c.top.arrows)
            else:
                ok, _ = _is_cartesian(handle, c, prober)
            if not ok:
                strong = False
                bad = skey(ukey)
                break
        unit = None
        idv = handle.identity(xi.vertex)
        if exact:
            w = handle.restrict_nullary(idv, idv)
            unit = None if w is None else w.top.arrows[0]
        else:
            w = find_restriction(LoosePath.empty(xi.vertex), idv, idv,
                                 _no_trunc(bounds))
            unit = None if w is None else w.loose
        verdict = "pass" if (strong and unit is not None) else "fail"
        details = {"strong": strong, "unital": unit is not None,
                   "loose_unit": None if unit is None else skey(unit.key)}
        if bad is not None:
            details["non_cartesian_cell"] = bad
        return verdict, None if verdict == "pass" else details, details

    return run_check("strong-unital", bounds, body)


# --------------------------------------------------------------------------- #
# builders
# --------------------------------------------------------------------------- #

def _require(cond: bool, message: str):
    if not cond:
        raise ValidationError(message)


def _find_mod_tight(mod, a, b, f0):
    for cand in mod.tight(a, b):
        if mod.hom_parts(cand)[0].key == f0.key:
            return cand
    raise ValidationError(
        f"missing-restriction: no monoid map over {skey(f0.key)}")


def build_colimit(diagram: AvdFunctor, kind: str = None,
                  bounds: Bounds = None) -> TightCocone:
    """Construct the canonical colimit cocone of a diagram.

    Supported kinds: ``coproduct`` (discrete shape into a matrix handle),
    ``collapse`` (one-object indiscrete shape into a module handle) and
    ``collage`` (indiscrete shape over a set into a module handle over a
    matrix handle).  Raises ``ValidationError`` with a ``shape-mismatch``
    or ``missing-restriction`` message on bad input."""
    from .constructions import (ColoredSet, MatAvdc, MatrixRecord, ModAvdc,
                                MonoidRecord)
    handle = diagram.target
    shape = diagram.source
    skind = _shape_kind(shape)
    if kind is None:
        if isinstance(handle, MatAvdc):
            kind = "coproduct"
        elif isinstance(handle, ModAvdc):
            kind = ("collage" if isinstance(handle.base, MatAvdc)
                    else "collapse")
        else:
            raise ValidationError("shape-mismatch: unsupported handle")

    if kind == "coproduct":
        _require(isinstance(handle, MatAvdc),
                 "shape-mismatch: coproducts live in a matrix handle")
        _require(skind == "discrete",
                 "shape-mismatch: coproducts are over discrete shapes")
        pieces = [(a, handle.colored_set(diagram.obj_map(a)))
                  for a in shape.objects()]
        elements = []
        for a, cs in pieces:
            for x in cs.elements:
                elements.append(((skey(a.key), x), cs.color(x)))
        union = ColoredSet.of(elements)
        vertex = handle.add_colored_set(union)
        legs = {}
        for a, cs in pieces:
            combo = []
            for x in cs.elements:
                idk = handle.base.identity(
                    handle.base_obj(cs.color(x))).key
                combo.append((x, ((skey(a.key), x), idk)))
            legs[a.key] = TightArrow(diagram.obj_map(a), vertex,
                                     tuple(sorted(combo, key=skey)))
        return TightCocone(diagram, vertex, legs, {})

    _require(isinstance(handle, ModAvdc),
             "shape-mismatch: collapses and collages live in a module "
             "handle")
    _require(skind in ("indiscrete", "vd-indiscrete"),
             "shape-mismatch: collapses and collages are over "
             "indiscrete shapes")
    base = handle.base

    if kind == "collapse":
        _require(len(shape.objects()) == 1,
                 "shape-mismatch: collapses are over one-object shapes")
        o = shape.objects()[0]
        uoo = shape.loose(o, o)[0]
        B = handle.monoid(diagram.obj_map(o))
        m1, ml, mr = handle.bimodule_parts(diagram.loose_map(uoo))
        ido = shape.identity(o)
        eta = shape.cells(ido, ido, LoosePath.empty(o),
                          LoosePath.of(uoo))
        mu = shape.cells(ido, ido, LoosePath.of(uoo, uoo),
                         LoosePath.of(uoo))
        _require(bool(eta and mu),
                 "shape-mismatch: shape lacks unit or composition cells")
        feta = diagram.cell_map(eta[0])
        fmu = diagram.cell_map(mu[0])
        vertex_monoid = MonoidRecord(B.obj_key, m1.key, feta.payload,
                                     fmu.payload)
        try:
            vertex = handle.add_monoid(vertex_monoid)
        except ValidationError as exc:
            raise ValidationError(f"missing-restriction: {exc}")
        b0 = handle.base_obj(B.obj_key)
        b1 = handle.base_loose_by_key(B.obj_key, B.obj_key, B.loose_key)
        idb0 = base.identity(b0)
        e_cell = handle.base_cell(idb0, idb0, LoosePath.empty(b0),
                                  LoosePath.of(m1), feta.payload)
        f1 = base.multicompose(
            (base.loose_identity_cell(b1), e_cell), ml)
        leg = _find_mod_tight(handle, diagram.obj_map(o), vertex, idb0)
        _require(handle.hom_parts(leg)[1].payload == f1.payload
                 or base.thin,
                 "missing-restriction: leg cell mismatch")
        cs = handle.cells(leg, leg, LoosePath.of(diagram.loose_map(uoo)),
                          LoosePath.empty(vertex))
        _require(bool(cs), "missing-restriction: collapse cocone cell")
        return TightCocone(diagram, vertex, {o.key: leg},
                           {uoo.key: cs[0]})

    # collage
    _require(isinstance(base, MatAvdc),
             "shape-mismatch: collages live over a matrix handle")
    for f in _shape_tights(shape):
        _require(f == shape.identity(f.src),
                 "shape-mismatch: collages are over shapes on a set")
    from .constructions import EnrichedCategory, enriched_to_monoid
    objs = shape.objects()
    sets = {}
    for a in objs:
        A = handle.monoid(diagram.obj_map(a))
        sets[a.key] = (A, base.colored_set(handle.base_obj(A.obj_key)))
    elements = []
    homs = []
    for a in objs:
        A, cs_a = sets[a.key]
        for x in cs_a.elements:
            elements.append(((skey(a.key), x), cs_a.color(x)))
        for b in objs:
            _, cs_b = sets[b.key]
            if a == b:
                mat_rec = MatrixRecord(A.obj_key, A.obj_key,
                                       A.loose_key[1])
                for x in cs_a.elements:
                    for y in cs_a.elements:
                        homs.append((((skey(a.key), x), (skey(a.key), y)),
                                     mat_rec.entry(x, y)))
            else:
                uab = shape.loose(a, b)[0]
                m1 = handle.bimodule_parts(diagram.loose_map(uab))[0]
                mat_rec = base.matrix_of(m1)
                for x in cs_a.elements:
                    for y in cs_b.elements:
                        homs.append((((skey(a.key), x), (skey(b.key), y)),
                                     mat_rec.entry(x, y)))
    cat = EnrichedCategory.of(elements, homs)
    base.add_colored_set(cat.colored_set)
    try:
        vertex_monoid = enriched_to_monoid(base, cat)
    except ValidationError as exc:
        raise ValidationError(f"missing-restriction: {exc}")
    vertex = handle.add_monoid(vertex_monoid)
    legs = {}
    for a in objs:
        A, cs_a = sets[a.key]
        combo = []
        for x in cs_a.elements:
            idk = base.base.identity(
                base.base_obj(cs_a.color(x))).key
            combo.append((x, ((skey(a.key), x), idk)))
        f0 = TightArrow(handle.base_obj(A.obj_key),
                        base.add_colored_set(cat.colored_set),
                        tuple(sorted(combo, key=skey)))
        legs[a.key] = _find_mod_tight(handle, diagram.obj_map(a),
                                      vertex, f0)
    cells = {}
    for u in _shape_looses(shape):
        cs = handle.cells(legs[u.src.key], legs[u.dst.key],
                          LoosePath.of(diagram.loose_map(u)),
                          LoosePath.empty(vertex))
        _require(bool(cs),
                 f"missing-restriction: collage cell at {skey(u.key)}")
        cells[u.key] = cs[0]
    return TightCocone(diagram, vertex, legs, cells)


# --------------------------------------------------------------------------- #
# canonical presentations
# --------------------------------------------------------------------------- #

def _identity_only_functor(shape, target, obj_map, name):
    """A functor out of a discrete shape (identity tights, no looses)."""

    def tight_map(f):
        return target.identity(obj_map(f.src))

    def loose_map(u):
        raise ValidationError("discrete shapes have no loose arrows")

    def cell_map(c):
        return target.tight_identity_cell(tight_map(c.left))

    return AvdFunctor(shape, target, obj_map, tight_map, loose_map,
                      cell_map, name=name)


def canonical_presentation(handle, obj, bounds: Bounds = None) -> TightCocone:
    """The canonical colimit presentation of an object of a built-in
    construction: a coproduct of singletons for a colored set, a collapse
    of a trivial monoid for a monoid, and a collage of one-object
    classifiers for an enriched category."""
    from .constructions import (BimoduleRecord, MatAvdc, MatrixRecord,
                                ModAvdc, MonoidRecord, ProfAvdc,
                                classifier_category, enriched_to_monoid,
                                monoid_to_enriched, singleton_colored_set)
    from .presented import discrete_category, shape_avdc
    from .core import thin_functor
    bounds = bounds or Bounds()

    if isinstance(handle, ProfAvdc):
        prof_wrapper = handle
        handle = prof_wrapper.modules
    if isinstance(handle, MatAvdc):
        if isinstance(obj, ObjectRef):
            cs = handle.colored_set(obj)
        else:
            cs = obj
            obj = handle.add_colored_set(cs)
        shape = shape_avdc("discrete",
                           discrete_category([("el", x)
                                              for x in cs.elements]))
        singles = {}
        for x in cs.elements:
            s = singleton_colored_set(cs.color(x))
            singles[("el", x)] = handle.add_colored_set(s)
        F = _identity_only_functor(
            shape, handle, lambda a: singles[a.key], "canonical-coproduct")
        legs = {}
        for x in cs.elements:
            idk = handle.base.identity(handle.base_obj(cs.color(x))).key
            legs[("el", x)] = TightArrow(singles[("el", x)], obj,
                                        (("*", (x, idk)),))
        return TightCocone(F, obj, legs, {})

    if not isinstance(handle, ModAvdc):
        raise ValidationError("shape-mismatch: unsupported handle")
    base = handle.base

    if isinstance(base, MatAvdc):
        # collage of one-object classifiers
        if isinstance(obj, ObjectRef):
            cat = monoid_to_enriched(base, handle.monoid(obj))
        else:
            cat = obj
            base.add_colored_set(cat.colored_set)
            obj = handle.add_monoid(enriched_to_monoid(base, cat))
        inner = base.base
        shape = shape_avdc(
            "vd-indiscrete",
            discrete_category([("el", x) for x, _ in cat.objects]))
        cls_refs = {}
        cls_cats = {}
        for x, c in cat.objects:
            zc = classifier_category(inner, ObjectRef(inner.avdc_id, c),
                                     bounds)
            base.add_colored_set(zc.colored_set)
            cls_cats[("el", x)] = zc
            cls_refs[("el", x)] = handle.add_monoid(
                enriched_to_monoid(base, zc))

        def obj_map(a):
            return cls_refs[a.key]

        def loose_map(u):
            (_, x), (_, y) = u.src.key, u.dst.key
            zx = cls_cats[("el", x)]
            zy = cls_cats[("el", y)]
            m1 = base.loose_of(MatrixRecord(
                zx.colored_set.key, zy.colored_set.key,
                ((("*", "*"), cat.hom(x, y)),)))
            zx_m = handle.monoid(cls_refs[("el", x)])
            zy_m = handle.monoid(cls_refs[("el", y)])
            ida = base.identity(m1.src)
            idb = base.identity(m1.dst)
            a1 = handle.base_loose_by_key(zx_m.obj_key, zx_m.obj_key,
                                         zx_m.loose_key)
            b1 = handle.base_loose_by_key(zy_m.obj_key, zy_m.obj_key,
                                         zy_m.loose_key)
            ml = base.cells(ida, idb, LoosePath.of(a1, m1),
                            LoosePath.of(m1))
            mr = base.cells(ida, idb, LoosePath.of(m1, b1),
                            LoosePath.of(m1))
            _require(bool(ml and mr),
                     "missing-restriction: classifier bimodule actions")
            rec = BimoduleRecord(zx_m.key, zy_m.key, m1.key,
                                 ml[0].payload, mr[0].payload)
            handle._bimod_data[rec.key] = rec
            return LooseArrow(cls_refs[("el", x)], cls_refs[("el", y)],
                              rec.key)

        def tight_map(f):
            _require(f == shape.identity(f.src),
                     "shape-mismatch: collage shapes are over a set")
            return handle.identity(obj_map(f.src))

        F = thin_functor(shape, handle, obj_map, tight_map, loose_map,
                         name="canonical-collage")
        legs = {}
        for x, c in cat.objects:
            zx = cls_cats[("el", x)]
            combo = (("*", (x, inner.identity(
                ObjectRef(inner.avdc_id, c)).key)),)
            f0 = TightArrow(base.add_colored_set(zx.colored_set),
                            base.add_colored_set(cat.colored_set), combo)
            legs[("el", x)] = _find_mod_tight(handle,
                                              cls_refs[("el", x)],
                                              obj, f0)
        cells = {}
        for u in _shape_looses(shape):
            cs = handle.cells(legs[u.src.key], legs[u.dst.key],
                              LoosePath.of(F.loose_map(u)),
                              LoosePath.empty(obj))
            _require(bool(cs), "missing-restriction: canonical collage "
                               f"cell at {skey(u.key)}")
            cells[u.key] = cs[0]
        xi = TightCocone(F, obj, legs, cells)
        return xi

    # collapse of the trivial monoid on the underlying object
    if not isinstance(obj, ObjectRef):
        obj = handle.object_of(obj)
    M = handle.monoid(obj)
    b0 = handle.base_obj(M.obj_key)
    w = find_restriction(LoosePath.empty(b0), base.identity(b0),
                         base.identity(b0), bounds)
    _require(w is not None,
             "missing-restriction: base object lacks a loose unit")
    u = w.loose
    idb0 = base.identity(b0)
    ae = base.cells(idb0, idb0, LoosePath.empty(b0), LoosePath.of(u))
    am = base.cells(idb0, idb0, LoosePath.of(u, u), LoosePath.of(u))
    _require(bool(ae and am), "missing-restriction: unit monoid cells")
    trivial = MonoidRecord(M.obj_key, u.key, ae[0].payload, am[0].payload)
    tref = handle.add_monoid(trivial)
    m1 = handle.base_loose_by_key(M.obj_key, M.obj_key, M.loose_key)
    ml = base.cells(idb0, idb0, LoosePath.of(u, m1), LoosePath.of(m1))
    mr = base.cells(idb0, idb0, LoosePath.of(m1, u), LoosePath.of(m1))
    _require(bool(ml and mr),
             "missing-restriction: unit actions on the hom")
    rec = BimoduleRecord(trivial.key, trivial.key, M.loose_key,
                         ml[0].payload, mr[0].payload)
    handle._bimod_data[rec.key] = rec
    bim = LooseArrow(tref, tref, rec.key)
    shape = shape_avdc("vd-indiscrete", discrete_category(["*"]))

    def obj_map(a):
        return tref

    def tight_map(f):
        return handle.identity(tref)

    def loose_map(v):
        return bim

    F = thin_functor(shape, handle, obj_map, tight_map, loose_map,
                     name="canonical-collapse")
    leg = _find_mod_tight(handle, tref, obj, idb0)
    o = shape.objects()[0]
    uoo = shape.loose(o, o)[0]
    cs = handle.cells(leg, leg, LoosePath.of(bim), LoosePath.empty(obj))
    _require(bool(cs), "missing-restriction: canonical collapse cell")
    return TightCocone(F, obj, {o.key: leg}, {uoo.key: cs[0]})
