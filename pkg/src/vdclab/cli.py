"""Batch runner and report emitter.

Suite files reuse the line-oriented section dialect of the presentation
loader.  A suite consists of:

* ``[inputs]`` rows ``name = builder args...`` declaring handles.
  Builders: ``rel N`` (relations over the nested sets up to size N),
  ``quantale q2`` (the Boolean quantale), ``mat-q2 N`` (matrices over
  q2 on one-color sets up to size N), ``prof-q2 e1 e2 ...`` (enriched
  categories over q2 from declared ``[enriched]`` entries),
  ``shape KIND o1 o2 ...`` (a shape over the discrete category) and
  ``presentation PATH`` (a presentation file on disk).
* data sections ``[colored-set NAME]``, ``[monoid NAME]`` and
  ``[enriched NAME]`` declaring serializable records (rows
  ``element : color``; ``object|loose|unit|mult = value``; and
  ``object element : color`` / ``hom x y = loose-key`` respectively).
* ``[checks]`` rows ``name = check key=value ...`` executed in declared
  order.  Known checks: ``validate-avdc handle=H``,
  ``iso-fibrant handle=H``, ``loose-unit handle=H object=KEY``,
  ``canonical-collage handle=H object=KEY`` and
  ``strong-unital handle=H object=KEY``.

``vdclab run SUITE`` runs a suite; ``--bound``/``--budget`` override the
defaults (path bound 2, one million enumerated boundaries), ``--format``
selects ``structured`` (a canonical JSON document, byte-identical for
identical inputs; timing excluded) or ``human`` (a table).  Exit codes:
0 all pass, 1 any fail, 2 configuration error, 3 inconclusive outcomes
present (and no failures) under ``--strict-inconclusive``.  The
``VDCLAB_PARALLEL`` environment variable sets the worker count;
reports always appear in declared order.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .core import (Bounds, CheckReport, LoosePath, ValidationError, skey,
                   validate_avdc)
from .presented import (PresentationError, load_presentation,
                        discrete_category, quantale_avdc, rel_avdc,
                        shape_avdc, small_rel_universe, two_element_quantale)
from .constructions import ColoredSet, EnrichedCategory, MonoidRecord, mat, prof
from .universal import find_restriction
from .colimits import canonical_presentation, check_strong_unital, \
    is_versatile_colimit
from .density import iso_fibrant


class SuiteError(ValidationError):
    """Configuration or input error; maps to exit code 2."""


# --------------------------------------------------------------------------- #
# serializable data sections
# --------------------------------------------------------------------------- #

def _fmt(value: Any) -> str:
    return json.dumps(value, sort_keys=True) if not isinstance(value, str) \
        else value


def _val(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def dump_colored_set(name: str, cs: ColoredSet) -> str:
    lines = [f"[colored-set {name}]"]
    lines += [f"{_fmt(e)} : {_fmt(c)}" for e, c in cs.items]
    return "\n".join(lines) + "\n"


def dump_monoid(name: str, m: MonoidRecord) -> str:
    lines = [f"[monoid {name}]",
             f"object = {_fmt(m.obj_key)}",
             f"loose = {_fmt(m.loose_key)}",
             f"unit = {_fmt(m.unit_payload)}",
             f"mult = {_fmt(m.mult_payload)}"]
    return "\n".join(lines) + "\n"


def dump_enriched(name: str, cat: EnrichedCategory) -> str:
    lines = [f"[enriched {name}]"]
    lines += [f"object {_fmt(e)} : {_fmt(c)}" for e, c in cat.objects]
    lines += [f"hom {_fmt(x)} {_fmt(y)} = {_fmt(k)}"
              for (x, y), k in cat.homs]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------- #
# suite parsing
# --------------------------------------------------------------------------- #

@dataclass
class SuiteConfig:
    """Parsed suite: declared inputs, data records and named checks."""
    inputs: Dict[str, tuple] = field(default_factory=dict)
    colored_sets: Dict[str, ColoredSet] = field(default_factory=dict)
    monoids: Dict[str, MonoidRecord] = field(default_factory=dict)
    enriched: Dict[str, EnrichedCategory] = field(default_factory=dict)
    checks: List[tuple] = field(default_factory=list)  # (name, check, params)


def parse_suite(text: str) -> SuiteConfig:
    cfg = SuiteConfig()
    section = None
    pending: Dict[str, Any] = {}

    def flush():
        if section is None:
            return
        kind, name = section
        if kind == "colored-set":
            cfg.colored_sets[name] = ColoredSet.of(pending["rows"])
        elif kind == "monoid":
            try:
                cfg.monoids[name] = MonoidRecord(
                    pending["object"], pending["loose"],
                    pending["unit"], pending["mult"])
            except KeyError as exc:
                raise SuiteError(f"monoid {name!r} missing field {exc}")
        elif kind == "enriched":
            cfg.enriched[name] = EnrichedCategory.of(
                pending.get("objects", []), pending.get("homs", []))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise SuiteError(f"line {lineno}: unterminated header")
            flush()
            pending = {}
            header = line[1:-1].strip().split()
            if header[0] in ("inputs", "checks") and len(header) == 1:
                section = (header[0], None)
            elif header[0] in ("colored-set", "monoid", "enriched") and \
                    len(header) == 2:
                section = (header[0], header[1])
            else:
                raise SuiteError(f"line {lineno}: unknown section "
                                 f"{line!r}")
            continue
        if section is None:
            raise SuiteError(f"line {lineno}: content before first section")
        kind = section[0]
        if kind == "inputs":
            try:
                name, rest = (s.strip() for s in line.split("=", 1))
            except ValueError:
                raise SuiteError(f"line {lineno}: expected 'name = builder'")
            parts = rest.split()
            if not parts:
                raise SuiteError(f"line {lineno}: empty builder")
            cfg.inputs[name] = (parts[0], tuple(parts[1:]))
        elif kind == "checks":
            try:
                name, rest = (s.strip() for s in line.split("=", 1))
            except ValueError:
                raise SuiteError(f"line {lineno}: expected 'name = check'")
            parts = rest.split()
            if not parts:
                raise SuiteError(f"line {lineno}: empty check")
            params = {}
            for p in parts[1:]:
                if "=" not in p:
                    raise SuiteError(f"line {lineno}: bad parameter {p!r}")
                k, v = p.split("=", 1)
                params[k] = v
            cfg.checks.append((name, parts[0], params))
        elif kind == "colored-set":
            try:
                e, c = (s.strip() for s in line.split(":", 1))
            except ValueError:
                raise SuiteError(f"line {lineno}: expected 'element : color'")
            pending.setdefault("rows", []).append((_val(e), _val(c)))
        elif kind == "monoid":
            try:
                k, v = (s.strip() for s in line.split("=", 1))
            except ValueError:
                raise SuiteError(f"line {lineno}: expected 'field = value'")
            pending[k] = _val(v)
        elif kind == "enriched":
            if line.startswith("object "):
                try:
                    e, c = (s.strip() for s in line[len("object "):]
                            .split(":", 1))
                except ValueError:
                    raise SuiteError(
                        f"line {lineno}: expected 'object element : color'")
                pending.setdefault("objects", []).append((_val(e), _val(c)))
            elif line.startswith("hom "):
                try:
                    lhs, v = (s.strip() for s in line[len("hom "):]
                              .split("=", 1))
                    x, y = lhs.split()
                except ValueError:
                    raise SuiteError(
                        f"line {lineno}: expected 'hom x y = loose-key'")
                pending.setdefault("homs", []).append(
                    ((_val(x), _val(y)), _val(v)))
            else:
                raise SuiteError(f"line {lineno}: unknown enriched row")
    flush()
    return cfg


# --------------------------------------------------------------------------- #
# input builders
# --------------------------------------------------------------------------- #

def _build_input(cfg: SuiteConfig, name: str, spec: tuple):
    builder, args = spec
    if builder == "rel":
        n = int(args[0]) if args else 2
        return rel_avdc(small_rel_universe(n))
    if builder == "quantale":
        if args and args[0] != "q2":
            raise SuiteError(f"input {name!r}: unknown quantale {args[0]!r}")
        return quantale_avdc(two_element_quantale())
    if builder == "mat-q2":
        n = int(args[0]) if args else 2
        q = quantale_avdc(two_element_quantale())
        color = q.objects()[0].key
        sets = [ColoredSet.of([(i, color) for i in range(k)])
                for k in range(n + 1)]
        return mat(q, sets)
    if builder == "prof-q2":
        q = quantale_avdc(two_element_quantale())
        cats = []
        for a in args:
            if a not in cfg.enriched:
                raise SuiteError(f"input {name!r}: unknown enriched "
                                 f"entry {a!r}")
            cats.append(cfg.enriched[a])
        return prof(q, cats)
    if builder == "shape":
        if len(args) < 1:
            raise SuiteError(f"input {name!r}: shape needs a kind")
        return shape_avdc(args[0], discrete_category(args[1:]))
    if builder == "presentation":
        if len(args) != 1:
            raise SuiteError(f"input {name!r}: presentation needs a path")
        try:
            with open(args[0], "r", encoding="utf-8") as fh:
                return load_presentation(fh.read())
        except (OSError, ValidationError) as exc:
            raise SuiteError(f"input-load-failure({args[0]}): {exc}")
    raise SuiteError(f"input {name!r}: unknown builder {builder!r}")


def _resolve_handle(h):
    return getattr(h, "modules", None) or h


def _find_object(cfg: SuiteConfig, raw, key_text: str):
    """Resolve an ``object=`` parameter: the name of a declared enriched
    entry (for prof handles) or the textual form of an object key."""
    if key_text in cfg.enriched and hasattr(raw, "object_of"):
        return raw.object_of(cfg.enriched[key_text])
    handle = _resolve_handle(raw)
    for o in handle.objects():
        if skey(o.key) == key_text or str(o.key) == key_text or \
                (isinstance(o.key, str) and o.key == key_text):
            return o
    raise SuiteError(f"no object with key {key_text!r}")


# --------------------------------------------------------------------------- #
# check registry
# --------------------------------------------------------------------------- #

@dataclass
class _Context:
    cfg: SuiteConfig
    env: Dict[str, Any]

def _check_validate_avdc(ctx, params, bounds):
    return validate_avdc(_resolve_handle(ctx.env[params["handle"]]), bounds)


def _check_iso_fibrant(ctx, params, bounds):
    return iso_fibrant(_resolve_handle(ctx.env[params["handle"]]), bounds)


def _check_loose_unit(ctx, params, bounds):
    raw = ctx.env[params["handle"]]
    handle = _resolve_handle(raw)
    obj = _find_object(ctx.cfg, raw, params["object"])

    def body():
        w = find_restriction(LoosePath.empty(obj), handle.identity(obj),
                             handle.identity(obj), bounds)
        if w is None:
            return "fail", {"object": skey(obj.key)}, {}
        return "pass", None, {"loose": skey(w.loose.key)}

    from .core import run_check
    return run_check("loose-unit", bounds, body)


def _canonical(ctx, params, bounds):
    raw = ctx.env[params["handle"]]
    obj = _find_object(ctx.cfg, raw, params["object"])
    return canonical_presentation(raw, obj, bounds)


def _check_canonical_collage(ctx, params, bounds):
    xi = _canonical(ctx, params, bounds)
    return is_versatile_colimit(xi, bounds)


def _check_strong_unital(ctx, params, bounds):
    xi = _canonical(ctx, params, bounds)
    return check_strong_unital(xi, bounds)


CHECKS = {
    "validate-avdc": _check_validate_avdc,
    "iso-fibrant": _check_iso_fibrant,
    "loose-unit": _check_loose_unit,
    "canonical-collage": _check_canonical_collage,
    "strong-unital": _check_strong_unital,
}


# --------------------------------------------------------------------------- #
# execution and reporting
# --------------------------------------------------------------------------- #

def _plain(value: Any) -> Any:
    """A JSON-serializable shadow of any witness/details value."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(_plain(k)): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return skey(value)


def run_suite(cfg: SuiteConfig, bounds: Bounds = None) -> List[CheckReport]:
    """Execute all checks of a suite; reports come back in declared
    order.  Raises :class:`SuiteError` for unknown checks or unloadable
    inputs."""
    bounds = bounds or Bounds()
    env = {}
    for name, spec in cfg.inputs.items():
        env[name] = _build_input(cfg, name, spec)
    for name, check, params in cfg.checks:
        if check not in CHECKS:
            raise SuiteError(f"unknown-check({check})")
    ctx = _Context(cfg, env)

    def run_one(entry):
        name, check, params = entry
        try:
            rep = CHECKS[check](ctx, params, bounds)
        except KeyError as exc:
            raise SuiteError(f"check {name!r}: missing parameter {exc}")
        rep.name = name
        return rep

    workers = int(os.environ.get("VDCLAB_PARALLEL", "1"))
    if workers > 1 and len(cfg.checks) > 1:
        with concurrent.futures.ThreadPoolExecutor(workers) as pool:
            return list(pool.map(run_one, cfg.checks))
    return [run_one(e) for e in cfg.checks]


def emit_report(reports: List[CheckReport], format: str = "structured") -> str:
    """Serialize reports.  ``structured`` is a canonical JSON array (one
    object per check, sorted keys, timing excluded) that is
    byte-identical across runs on identical inputs; ``human`` is a
    table."""
    if format == "structured":
        doc = [{"check": r.name, "verdict": r.verdict,
                "bounds": _plain(r.bounds), "witness": _plain(r.witness),
                "details": _plain(r.details)} for r in reports]
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if format == "human":
        if not reports:
            return ""
        w = max(len(r.name) for r in reports)
        lines = [f"{r.name.ljust(w)}  {r.verdict.upper():13}"
                 f"{'' if r.witness is None else '  ' + str(_plain(r.witness))}"
                 for r in reports]
        return "\n".join(lines) + "\n"
    raise SuiteError(f"unknown format {format!r}")


def exit_code(reports: List[CheckReport],
              strict_inconclusive: bool = False) -> int:
    if any(r.verdict == "fail" for r in reports):
        return 1
    if strict_inconclusive and any(r.verdict == "inconclusive"
                                   for r in reports):
        return 3
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="vdclab",
        description="run bounded checks on finite AVDC suites")
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run a suite file")
    runp.add_argument("suite", help="path to a suite file")
    runp.add_argument("--bound", type=int, default=2, metavar="K",
                      help="maximum loose-path length (default 2)")
    runp.add_argument("--budget", type=int, default=10 ** 6, metavar="N",
                      help="maximum enumerated boundaries (default 1000000)")
    runp.add_argument("--format", choices=("structured", "human"),
                      default="structured")
    runp.add_argument("--strict-inconclusive", action="store_true",
                      help="exit 3 when inconclusive outcomes remain")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        with open(args.suite, "r", encoding="utf-8") as fh:
            cfg = parse_suite(fh.read())
        bounds = Bounds(K=args.bound, budget=args.budget)
        reports = run_suite(cfg, bounds)
    except OSError as exc:
        print(f"error: input-load-failure({args.suite}): {exc}",
              file=sys.stderr)
        return 2
    except SuiteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(reports, args.format))
    return exit_code(reports, args.strict_inconclusive)


if __name__ == "__main__":
    sys.exit(main())
