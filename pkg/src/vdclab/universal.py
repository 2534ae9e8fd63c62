"""Bounded brute-force verification of universal properties of cells.

Every check quantifies over a probe universe described by ``Bounds``:
objects, tight arrows between them, and loose paths of length at most
``K`` built from probed loose arrows.  A "pass" therefore means
"holds within the bounds"; a failed search for a witness means
"absent within the bounds".  All searches run in sorted enumeration
order, so returned witnesses are deterministic (enumeration-least).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .core import (AvdcHandle, Bounds, BudgetExceeded, CellRecord,
                   CheckReport, CompositionError, LooseArrow, LoosePath,
                   Prober, TightArrow, cells_equal, handle_for, run_check,
                   skey)


@dataclass
class UniversalWitness:
    """A found universal cell together with how it was recognized."""
    kind: str
    cell: CellRecord
    loose: Optional[LooseArrow] = None
    flags: dict = field(default_factory=dict)
    checks: int = 0


# --------------------------------------------------------------------------- #
# cartesian cells
# --------------------------------------------------------------------------- #

def _factor_count(handle, gammas, alpha, beta, prober, prefix=(), suffix=()):
    """Count cells gamma with paste(prefix+(gamma,)+suffix, alpha) == beta."""
    count = 0
    for gamma in gammas:
        prober.tick()
        try:
            got = handle.multicompose(prefix + (gamma,) + suffix, alpha)
        except CompositionError:
            continue
        if cells_equal(got, beta):
            count += 1
    return count


def _is_cartesian(handle: AvdcHandle, alpha: CellRecord, prober: Prober):
    """Return (ok, counterexample-or-None)."""
    if len(alpha.top) > 1:
        return False, {"reason": "top longer than one"}
    x0, x1 = alpha.top.src, alpha.top.dst
    for a in prober.objects:
        for f in prober.tight(a, x0):
            fa = handle.compose(f, alpha.left)
            for b in prober.objects:
                for g in prober.tight(b, x1):
                    gb = handle.compose(g, alpha.right)
                    for ubar in prober.paths(a, b):
                        prober.tick()
                        betas = handle.cells(fa, gb, ubar, alpha.bottom)
                        gammas = handle.cells(f, g, ubar, alpha.top)
                        if handle.thin:
                            if betas and not gammas:
                                return False, {
                                    "f": skey(f.key), "g": skey(g.key),
                                    "ubar": [skey(u.key) for u in ubar],
                                    "reason": "no factorization"}
                            continue
                        for beta in betas:
                            n = _factor_count(handle, gammas, alpha, beta,
                                              prober)
                            if n != 1:
                                return False, {
                                    "f": skey(f.key), "g": skey(g.key),
                                    "ubar": [skey(u.key) for u in ubar],
                                    "factorizations": n}
    return True, None


def is_cartesian(alpha: CellRecord, bounds: Bounds) -> CheckReport:
    handle = handle_for(alpha)

    def body():
        prober = Prober(handle, bounds)
        ok, why = _is_cartesian(handle, alpha, prober)
        if ok:
            return "pass", None, {"checks": prober.spent}
        return "fail", why, {"checks": prober.spent}

    return run_check("is-cartesian", bounds, body)


# --------------------------------------------------------------------------- #
# cocartesian cells
# --------------------------------------------------------------------------- #

def _is_cocartesian(handle: AvdcHandle, alpha: CellRecord, mode: str,
                    prober: Prober):
    a, b = alpha.top.src, alpha.top.dst
    if alpha.left != handle.identity(a) or alpha.right != handle.identity(b):
        return False, {"reason": "sides are not identities"}
    for c in prober.objects:
        for pbar in prober.paths(c, a):
            for d in prober.objects:
                for qbar in prober.paths(b, d):
                    row = (handle.path_identity_cells(pbar) + (alpha,) +
                           handle.path_identity_cells(qbar))
                    for x in prober.objects:
                        for f in prober.tight(c, x):
                            for y in prober.objects:
                                for g in prober.tight(d, y):
                                    bots = [LoosePath.of(w)
                                            for w in prober.loose(x, y)]
                                    if mode == "full" and x == y:
                                        bots.append(LoosePath.empty(x))
                                    top_hi = pbar + alpha.bottom + qbar
                                    top_lo = pbar + alpha.top + qbar
                                    for w in bots:
                                        prober.tick()
                                        upper = handle.cells(f, g, top_hi, w)
                                        lower = handle.cells(f, g, top_lo, w)
                                        if handle.thin:
                                            if len(upper) != len(lower):
                                                return False, {
                                                    "pbar": [skey(u.key)
                                                             for u in pbar],
                                                    "qbar": [skey(u.key)
                                                             for u in qbar],
                                                    "f": skey(f.key),
                                                    "g": skey(g.key),
                                                    "w": [skey(u.key)
                                                          for u in w]}
                                            continue
                                        images = []
                                        for beta in upper:
                                            prober.tick()
                                            images.append(
                                                handle.multicompose(row, beta))
                                        distinct = all(
                                            not cells_equal(c1, c2)
                                            for i, c1 in enumerate(images)
                                            for c2 in images[i + 1:])
                                        onto = all(
                                            any(cells_equal(i1, c2)
                                                for i1 in images)
                                            for c2 in lower)
                                        if not (distinct and onto and
                                                len(images) == len(lower)):
                                            return False, {
                                                "f": skey(f.key),
                                                "g": skey(g.key),
                                                "reason": "not a bijection"}
    return True, None


def is_cocartesian(alpha: CellRecord, mode: str = "full",
                   bounds: Bounds = None) -> CheckReport:
    if mode not in ("full", "vd"):
        raise ValueError("mode must be 'full' or 'vd'")
    bounds = bounds or Bounds()
    handle = handle_for(alpha)

    def body():
        prober = Prober(handle, bounds)
        ok, why = _is_cocartesian(handle, alpha, mode, prober)
        if ok:
            return "pass", None, {"checks": prober.spent}
        return "fail", why, {"checks": prober.spent}

    return run_check("is-cocartesian", bounds, body)


# --------------------------------------------------------------------------- #
# restrictions (companions, conjoints, loose units)
# --------------------------------------------------------------------------- #

def find_restriction(u: LoosePath, f: TightArrow, g: TightArrow,
                     bounds: Bounds = None) -> Optional[UniversalWitness]:
    """Search for a cartesian cell (f, g; (p) => u) with ``p`` a loose arrow.

    ``u`` is a loose path of length at most one from dst(f) to dst(g).
    Flags mark the special shapes: companion (empty ``u``, ``g`` an
    identity), conjoint (empty ``u``, ``f`` an identity), and loose unit
    (both).
    """
    bounds = bounds or Bounds()
    handle = handle_for(f)
    prober = Prober(handle, bounds)
    if len(u) > 1:
        raise ValueError("restrictions are taken along paths of length <= 1")
    for p in handle.loose(f.src, g.src):
        for cell in handle.cells(f, g, LoosePath.of(p), u):
            ok, _ = _is_cartesian(handle, cell, prober)
            if ok:
                flags = {
                    "companion": len(u) == 0 and g == handle.identity(g.src),
                    "conjoint": len(u) == 0 and f == handle.identity(f.src),
                    "unit": (len(u) == 0 and f == handle.identity(f.src)
                             and g == handle.identity(g.src)),
                }
                return UniversalWitness("restriction", cell, loose=p,
                                        flags=flags, checks=prober.spent)
    return None


def find_loose_composite(ubar: LoosePath, mode: str = "full",
                         bounds: Bounds = None) -> Optional[UniversalWitness]:
    """Search for a cocartesian cell (id, id; ubar => (p))."""
    bounds = bounds or Bounds()
    handle = handle_for(ubar)
    prober = Prober(handle, bounds)
    ida = handle.identity(ubar.src)
    idb = handle.identity(ubar.dst)
    for p in handle.loose(ubar.src, ubar.dst):
        for cell in handle.cells(ida, idb, ubar, LoosePath.of(p)):
            ok, _ = _is_cocartesian(handle, cell, mode, prober)
            if ok:
                return UniversalWitness("loose-composite", cell, loose=p,
                                        flags={"unit": len(ubar) == 0},
                                        checks=prober.spent)
    return None


# --------------------------------------------------------------------------- #
# extensions and lifts
# --------------------------------------------------------------------------- #

def _is_extending(handle, eps, n_top, mode, prober):
    """Check the factorization property of a candidate extending/lifting
    cell whose top splits as (base path of length n_top, found arrow)."""
    if mode == "extension":
        ubar = LoosePath(eps.top.src, eps.top.arrows[n_top - 1].dst
                         if n_top else eps.top.src,
                         eps.top.arrows[:n_top])
        p = eps.top.arrows[n_top]
        cobj = eps.right.src           # right side is an identity at C
        ids = handle.path_identity_cells(ubar)
        for y in prober.objects:
            for g in prober.tight(y, cobj):
                for qbar in prober.paths(ubar.dst, y):
                    prober.tick()
                    deltas = handle.cells(eps.left,
                                          handle.compose(g, eps.right),
                                          ubar + qbar, eps.bottom)
                    gammas = handle.cells(handle.identity(ubar.dst), g,
                                          qbar, LoosePath.of(p))
                    if handle.thin:
                        if deltas and not gammas:
                            return False
                        continue
                    for delta in deltas:
                        n = _factor_count(handle, gammas, eps, delta, prober,
                                          prefix=ids)
                        if n != 1:
                            return False
        return True
    # lift: top splits as (found arrow, base path)
    p = eps.top.arrows[0]
    ubar = LoosePath(p.dst, eps.top.dst, eps.top.arrows[1:])
    cobj = eps.left.src
    ids = handle.path_identity_cells(ubar)
    for y in prober.objects:
        for f in prober.tight(y, cobj):
            for qbar in prober.paths(y, ubar.src):
                prober.tick()
                deltas = handle.cells(handle.compose(f, eps.left), eps.right,
                                      qbar + ubar, eps.bottom)
                gammas = handle.cells(f, handle.identity(ubar.src),
                                      qbar, LoosePath.of(p))
                if handle.thin:
                    if deltas and not gammas:
                        return False
                    continue
                for delta in deltas:
                    n = _factor_count(handle, gammas, eps, delta, prober,
                                      suffix=ids)
                    if n != 1:
                        return False
    return True


def find_extension(ubar: LoosePath, tight: TightArrow, v: LoosePath,
                   mode: str = "extension",
                   bounds: Bounds = None) -> Optional[UniversalWitness]:
    """Search for an extension or lift of ``v`` along ``ubar``.

    In ``extension`` mode ``tight`` is the left side f: src(ubar) -> src(v)
    and the result is a loose arrow p with an extending cell
    (f, id; (ubar, p) => v).  In ``lift`` mode ``tight`` is the right side
    g: dst(ubar) -> dst(v) and the cell is (id, g; (p, ubar) => v).
    """
    if mode not in ("extension", "lift"):
        raise ValueError("mode must be 'extension' or 'lift'")
    bounds = bounds or Bounds()
    handle = handle_for(ubar)
    prober = Prober(handle, bounds)
    if mode == "extension":
        cobj = v.dst
        for p in handle.loose(ubar.dst, cobj):
            top = ubar + LoosePath.of(p)
            for eps in handle.cells(tight, handle.identity(cobj), top, v):
                if _is_extending(handle, eps, len(ubar), mode, prober):
                    return UniversalWitness("extension", eps, loose=p,
                                            checks=prober.spent)
        return None
    cobj = v.src
    for p in handle.loose(cobj, ubar.src):
        top = LoosePath.of(p) + ubar
        for eps in handle.cells(handle.identity(cobj), tight, top, v):
            if _is_extending(handle, eps, len(ubar), mode, prober):
                return UniversalWitness("lift", eps, loose=p,
                                        checks=prober.spent)
    return None


# --------------------------------------------------------------------------- #
# split cells
# --------------------------------------------------------------------------- #

def _eq(handle, lhs_row, lhs_base, rhs) -> bool:
    """Whether the multicomposite of the left side equals the right cell."""
    try:
        got = handle.multicompose(lhs_row, lhs_base)
    except CompositionError:
        return False
    return cells_equal(got, rhs)


def is_split(alpha: CellRecord, bounds: Bounds = None) -> CheckReport:
    """Search for splitting data for a cell (f0, f1; u => v), both paths of
    length at most one.

    Splitting data consists of auxiliary loose arrows p0, p1, q0, q1 and
    cells (beta0, beta1, gamma, delta0, delta1, sigma, eta0, eta1)
    satisfying five pasting equations; its existence makes the cell
    cartesian.
    """
    bounds = bounds or Bounds()
    handle = handle_for(alpha)

    def body():
        prober = Prober(handle, bounds)
        f0, f1 = alpha.left, alpha.right
        a0, b0 = f0.src, f0.dst
        a1, b1 = f1.src, f1.dst
        u, v = alpha.top, alpha.bottom
        ids_v = handle.path_identity_cells(v)
        if len(u):
            rhs1 = handle.loose_identity_cell(u.arrows[0])
        else:
            rhs1 = handle.tight_identity_cell(handle.identity(a0))
        if len(v):
            rhs5 = handle.loose_identity_cell(v.arrows[0])
        else:
            rhs5 = handle.tight_identity_cell(handle.identity(b0))
        tid_f0 = handle.tight_identity_cell(f0)
        tid_f1 = handle.tight_identity_cell(f1)
        for p0 in handle.loose(a0, b0):
            pp0 = LoosePath.of(p0)
            betas0 = handle.cells(handle.identity(a0), f0,
                                  LoosePath.empty(a0), pp0)
            if not betas0:
                continue
            for p1 in handle.loose(b1, a1):
                pp1 = LoosePath.of(p1)
                betas1 = handle.cells(f1, handle.identity(a1),
                                      LoosePath.empty(a1), pp1)
                gammas = handle.cells(handle.identity(a0),
                                      handle.identity(a1),
                                      pp0 + v + pp1, u)
                if not (betas1 and gammas):
                    continue
                for q0 in handle.loose(b0, b0):
                    qq0 = LoosePath.of(q0)
                    deltas0 = handle.cells(f0, handle.identity(b0), pp0, qq0)
                    etas0 = handle.cells(handle.identity(b0),
                                         handle.identity(b0),
                                         LoosePath.empty(b0), qq0)
                    if not (deltas0 and etas0):
                        continue
                    for q1 in handle.loose(b1, b1):
                        qq1 = LoosePath.of(q1)
                        deltas1 = handle.cells(handle.identity(b1), f1,
                                               pp1, qq1)
                        etas1 = handle.cells(handle.identity(b1),
                                             handle.identity(b1),
                                             LoosePath.empty(b1), qq1)
                        sigmas = handle.cells(handle.identity(b0),
                                              handle.identity(b1),
                                              qq0 + v + qq1, v)
                        if not (deltas1 and etas1 and sigmas):
                            continue
                        for b0c in betas0:
                            for b1c in betas1:
                                for g in gammas:
                                    prober.tick()
                                    if not _eq(handle, (b0c, alpha, b1c),
                                               g, rhs1):
                                        continue
                                    for d0 in deltas0:
                                        for d1 in deltas1:
                                            for s in sigmas:
                                                for e0 in etas0:
                                                    for e1 in etas1:
                                                        prober.tick()
                                                        ok = (
                                                            _eq(handle,
                                                                (d0,) + ids_v
                                                                + (d1,), s,
                                                                handle.multicompose(
                                                                    (g,), alpha))
                                                            and _eq(handle,
                                                                    (b0c,), d0,
                                                                    handle.multicompose(
                                                                        (tid_f0,),
                                                                        e0))
                                                            and _eq(handle,
                                                                    (b1c,), d1,
                                                                    handle.multicompose(
                                                                        (tid_f1,),
                                                                        e1))
                                                            and _eq(handle,
                                                                    (e0,) + ids_v
                                                                    + (e1,), s,
                                                                    rhs5))
                                                        if ok:
                                                            witness = {
                                                                "p0": skey(p0.key),
                                                                "p1": skey(p1.key),
                                                                "q0": skey(q0.key),
                                                                "q1": skey(q1.key),
                                                            }
                                                            return ("pass",
                                                                    witness,
                                                                    {"checks":
                                                                     prober.spent})
        return "fail", None, {"checks": prober.spent,
                              "reason": "no splitting data found"}

    return run_check("is-split", bounds, body)
