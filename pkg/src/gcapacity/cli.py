"""``gcapacity`` command line.

Exit codes: 0 success, 1 invalid polytope or other domain violation,
2 usage or parse error, 3 undecided at the tolerance under ``--strict``.
"""
from __future__ import annotations

import argparse
import csv
import io as _stdio
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .delzant import (
    DelzantError, check_delzant, chop_all_corners, corner_chop, d_P, validate_delzant,
)
from .geometry import GeometryError, HalfSpace, polytope_from_halfspaces
from .io import ParseError, load_document, parse_config
from .metrics import (
    AdmissibleDensity, WeightSequence, d_ingredients, d_st_polygon, d_taylor,
)
from .packing import (
    capacity_cB, capacity_Er, capacity_T, continuity_certificate, pack_toric,
)
from .semitoric import (
    SemitoricError, canonical_orbit, check_primitive, smooth_angles_near,
    st_corner_chop, st_hidden_corner_chop,
)
from .stpacking import capacity_ST, capacity_ST_rad, pack_semitoric
from .symbolic import Radical, RadicalInterval, decimal_str, fmt_rat, parse_rat

DEFAULTS = {
    "tol": "1/1000",
    "weights": "geometric",
    "degree": "6",
    "density_breaks": "",
    "density_values": "1",
    "decimal": "",
}


class UsageError(Exception):
    pass


class Undecided(Exception):
    pass


class Context:
    """Resolved settings: flags over config file over built-in defaults."""

    def __init__(self, args):
        conf = dict(DEFAULTS)
        if getattr(args, "config", None):
            try:
                conf.update(parse_config(Path(args.config).read_text()))
            except OSError as exc:
                raise ParseError(f"{args.config}: {exc.strerror}") from None
        for key in DEFAULTS:
            val = getattr(args, key, None)
            if val is not None:
                conf[key] = str(val)
        self.conf = conf
        self.tol = parse_rat(conf["tol"], "tol")
        if self.tol <= 0:
            raise UsageError("tol must be positive")
        self.weights = WeightSequence(conf["weights"])
        self.degree = int(conf["degree"])
        breaks = tuple(parse_rat(x, "density_breaks") for x in _split(conf["density_breaks"]))
        values = tuple(parse_rat(x, "density_values") for x in _split(conf["density_values"]))
        self.density = AdmissibleDensity(breaks, values)
        self.decimal = int(conf["decimal"]) if conf["decimal"] else None
        self.strict = bool(getattr(args, "strict", False))

    def show(self, value) -> str:
        """Exact rendering plus an optional rounded column."""
        text = str(value)
        if self.decimal is None:
            return text
        return f"{text}\t~{_decimal(value, self.decimal)}"


def _split(text):
    return [x.strip() for x in str(text).split(",") if x.strip()]


def _decimal(value, digits):
    if isinstance(value, Radical):
        return value.decimal(digits)
    if isinstance(value, RadicalInterval):
        return f"[{value.lower.decimal(digits)}, {value.upper.decimal(digits)}]"
    if hasattr(value, "bounds"):
        lo, _ = value.bounds(3)
        return "+inf" if lo == float("inf") else _signed_decimal(lo, digits)
    return _signed_decimal(Fraction(value), digits)


def _signed_decimal(x, digits):
    return ("-" if x < 0 else "") + decimal_str(abs(Fraction(x)), digits)


def _metadata(command, args):
    return [f"# gcapacity {__version__}", f"# command: {command} {' '.join(args)}".rstrip()]


def _write_table(path, header, rows, meta):
    buf = _stdio.StringIO()
    for line in meta:
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    Path(path).write_text(buf.getvalue())


def _toric(doc):
    if doc.kind != "polytope":
        raise UsageError("this command needs a Delzant polytope file")
    return validate_delzant(doc.polytope)


# -- commands -----------------------------------------------------------------

def cmd_validate(args, ctx, out):
    doc = load_document(args.file)
    if doc.kind == "polytope":
        rep = check_delzant(doc.polytope)
        out.write(rep.message + "\n")
        return 0 if rep.ok else 1
    prim, exc = check_primitive(doc.polytope, doc.cuts)
    if exc is not None:
        out.write(f"semitoric: {type(exc).__name__}: {exc}\n")
        return 1
    fake = sum(1 for v in prim.vertices if prim.kind(v) == "fake")
    out.write(f"semitoric: ok, cuts: {prim.mf}, vertices: {len(prim.vertices)}, fake: {fake}\n")
    if doc.heights is not None:
        doc.semitoric_heights()
        out.write(f"heights: {', '.join(fmt_rat(h) for h in doc.heights)}\n")
    return 0


def cmd_pack(args, ctx, out):
    doc = load_document(args.file)
    exclude = tuple(args.exclude or ())
    if doc.kind == "polytope":
        delta = validate_delzant(doc.polytope)
        cert = pack_toric(delta, ctx.tol, exclude=exclude)
        verts = delta.vertices
    else:
        prim = doc.primitive()
        cert = pack_semitoric(prim, doc.semitoric_heights(), ctx.tol, exclude=exclude)
        verts = prim.non_fake
    out.write(str(cert) + "\n")
    if ctx.decimal is not None and not cert.is_infinite:
        out.write(f"decimal: [{_decimal(cert.lower, ctx.decimal)}, {_decimal(cert.upper, ctx.decimal)}]\n")
    if cert.best_config is not None and not cert.is_infinite:
        for i, (v, r) in enumerate(zip(verts, cert.best_config.radii)):
            tag = " (excluded)" if i in exclude else ""
            out.write(f"  v{i} {_pt(v)} rho={fmt_rat(r)}{tag}\n")
    if args.csv:
        rows = [[Path(args.file).name, fmt_rat(ctx.tol), " ".join(map(str, exclude)),
                 fmt_rat(cert.lower), fmt_rat(cert.upper), int(cert.converged)]]
        _write_table(args.csv, ["subject", "tol", "exclude", "pack_lower", "pack_upper", "converged"],
                     rows, _metadata("pack", [args.file]))
    if not cert.converged and ctx.strict:
        raise Undecided("packing interval wider than the tolerance")
    return 0


def _pt(v):
    return "(" + ", ".join(fmt_rat(c) for c in v) + ")"


def cmd_capacity(args, ctx, out):
    doc = load_document(args.file)
    which = args.which
    if which in ("T", "cB", "Er"):
        delta = _toric(doc)
        if which == "T":
            val = capacity_T(delta, ctx.tol)
        elif which == "cB":
            val = capacity_cB(delta)
        else:
            if args.r is None:
                raise UsageError("--which Er needs --r")
            val = capacity_Er(delta, parse_rat(args.r, "r"))
    else:
        prim = doc.primitive()
        heights = doc.semitoric_heights()
        val = capacity_ST(prim, heights, ctx.tol) if which == "ST" else capacity_ST_rad(prim, heights)
    out.write(ctx.show(val) + "\n")
    return 0


def _schedule(text):
    vals = [parse_rat(x, "schedule") for x in _split(text or "")]
    if not vals:
        raise UsageError("schedule is empty")
    return vals


def _chop_rows(doc, schedule, vertex, ctx):
    """One row per parameter: (eps, distance to base, pack lower, pack upper, capacity)."""
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise UsageError("chop schedule must be strictly decreasing")
    rows = []
    if doc.kind == "polytope":
        base = validate_delzant(doc.polytope)
        for eps in schedule:
            chopped = chop_all_corners(base, eps) if vertex is None else corner_chop(base, vertex, eps)
            cert = pack_toric(chopped, ctx.tol)
            cap = capacity_T(chopped, ctx.tol, cert)
            rows.append((eps, d_P(base, chopped), cert.lower, cert.upper, cap))
        return rows
    if vertex is None:
        raise UsageError("semitoric chop sequences need --vertex")
    prim = doc.primitive()
    heights = doc.semitoric_heights()
    v = prim.vertices[vertex] if isinstance(vertex, int) else vertex
    for eps in schedule:
        if prim.kind(v) == "hidden":
            chopped = st_hidden_corner_chop(prim, v, eps)
        else:
            chopped = st_corner_chop(prim, v, eps)
        cert = pack_semitoric(chopped, heights, ctx.tol)
        cap = capacity_ST(chopped, heights, ctx.tol, cert)
        rows.append((eps, d_st_polygon(prim, chopped, ctx.density), cert.lower, cert.upper, cap))
    return rows


def _strictly_decreasing(xs):
    return all(b < a for a, b in zip(xs, xs[1:]))


def _emit_rows(args, ctx, out, command, header, rows):
    for row in rows:
        out.write("  ".join(_cell(x) for x in row) + "\n")
    meta = _metadata(command, [args.file] if hasattr(args, "file") else [])
    if getattr(args, "csv", None):
        _write_table(args.csv, header, [[_cell(x) for x in r] for r in rows], meta)
    if getattr(args, "plot_data", None):
        pts = [["pack_lower", _cell(r[0]), _cell(r[2])] for r in rows]
        pts += [["d", _cell(r[0]), _cell(r[1])] for r in rows]
        _write_table(args.plot_data, ["series", "x", "y"], pts, meta)


def _cell(x):
    if isinstance(x, (int, Fraction)):
        return fmt_rat(x)
    return str(x)


CHOP_HEADER = ["parameter", "d_to_base", "pack_lower", "pack_upper", "capacity"]


def cmd_chop_sequence(args, ctx, out):
    doc = load_document(args.file)
    rows = _chop_rows(doc, _schedule(args.schedule), args.vertex, ctx)
    out.write("\t".join(CHOP_HEADER) + "\n")
    _emit_rows(args, ctx, out, "chop-sequence", CHOP_HEADER, rows)
    if doc.kind == "polytope" and args.vertex is None:
        # a full chop must drive both columns to zero
        if not (_strictly_decreasing([r[1] for r in rows]) and _strictly_decreasing([r[3] for r in rows])):
            out.write("trend check: FAIL\n")
            return 1
        out.write("trend check: ok\n")
    return 0


def _parallel_rows(doc, schedule, facet, ctx):
    base = validate_delzant(doc.polytope)
    facets = list(base.body.facets)
    if not 0 <= facet < len(facets):
        raise UsageError(f"facet index {facet} out of range 0..{len(facets) - 1}")
    rows = []
    for t in schedule:
        moved = [HalfSpace(h.normal, h.offset - t) if i == facet else h for i, h in enumerate(facets)]
        delta = validate_delzant(polytope_from_halfspaces(moved, base.dim))
        cert = pack_toric(delta, ctx.tol)
        rows.append((t, d_P(base, delta), cert.lower, cert.upper, capacity_T(delta, ctx.tol, cert)))
    return rows


def _scan(doc, ctx):
    """(full certificate, [(index, vertex, excluded certificate, verdict)], summary)."""
    if doc.kind == "polytope":
        rep = continuity_certificate(validate_delzant(doc.polytope), ctx.tol)
        rows = [(r.index, r.vertex, r.excluded, r.verdict) for r in rep.vertices]
        return rep.pack, rows, rep.is_largest_nbhd
    prim = doc.primitive()
    heights = doc.semitoric_heights()
    full = pack_semitoric(prim, heights, ctx.tol)
    rows = []
    for i, v in enumerate(prim.non_fake):
        ex = pack_semitoric(prim, heights, ctx.tol, exclude=(v,))
        if ex.upper < full.lower:
            verdict = "strict"
        elif ex.lower == full.upper:
            verdict = "equal"
        else:
            verdict = "undecided"
        rows.append((i, v, ex, verdict))
    verdicts = [r[3] for r in rows]
    if verdicts and all(x == "strict" for x in verdicts):
        summary = "yes"
    elif "equal" in verdicts:
        summary = "no"
    else:
        summary = "undecided"
    return full, rows, summary


def cmd_continuity_scan(args, ctx, out):
    doc = load_document(args.file)
    full, rows, summary = _scan(doc, ctx)
    out.write(f"{full}\n")
    for i, v, ex, verdict in rows:
        out.write(f"  v{i} {_pt(v)}: without it {ex}: {verdict}\n")
    out.write(f"largest-neighborhood: {summary}\n")
    if args.csv:
        table = [[i, _pt(v), fmt_rat(ex.lower), fmt_rat(ex.upper), verdict] for i, v, ex, verdict in rows]
        _write_table(args.csv, ["vertex", "coords", "pack_lower", "pack_upper", "verdict"], table,
                     _metadata("continuity-scan", [args.file]))
    if summary == "undecided" and ctx.strict:
        raise Undecided("largest-neighborhood test undecided at this tolerance")
    return 0


def cmd_metric(args, ctx, out):
    a, b = load_document(args.a), load_document(args.b)
    kind = args.kind
    if kind == "dP":
        val = d_P(validate_delzant(a.polytope), validate_delzant(b.polytope))
    elif kind == "dST":
        pa, pb = canonical_orbit(a.primitive()), canonical_orbit(b.primitive())
        if pa.mf != pb.mf or pa.twisting != pb.twisting:
            raise UsageError("polygon distance needs matching cuts and twisting indices; use dIngredients")
        val = d_st_polygon(pa, pb, ctx.density)
    elif kind == "dTaylor":
        if len(a.taylor) != len(b.taylor) or not a.taylor:
            raise UsageError("both files need the same number of Taylor blocks")
        val = None
        for s1, s2 in zip(a.taylor, b.taylor):
            t = d_taylor(s1, s2, ctx.weights, min(ctx.degree, s1.degree))
            val = t if val is None else type(t)(val.value + t.value, val.tail + t.tail)
    else:
        val = d_ingredients(a.ingredients(), b.ingredients(), ctx.weights, ctx.density,
                            min([ctx.degree] + [t.degree for t in a.taylor]))
    out.write(ctx.show(val if not isinstance(val, float) else "+inf") + "\n")
    return 0


def cmd_angles(args, ctx, out):
    for ang in smooth_angles_near(args.bound):
        extra = "" if ctx.decimal is None else f"\tcot={ang.cot}\tsin^2={fmt_rat(ang.sin2)}"
        out.write(f"{ang}{extra}\n")
    return 0


def cmd_experiment(args, ctx, out):
    import yaml

    try:
        spec = yaml.safe_load(Path(args.spec).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ParseError(f"{args.spec}: {exc}") from None
    if not isinstance(spec, dict) or "kind" not in spec or "subject" not in spec:
        raise ParseError(f"{args.spec}: need kind and subject")
    if "tolerance" in spec and args.tol is None:
        ctx.tol = parse_rat(spec["tolerance"], "tolerance")
    subject = Path(args.spec).parent / str(spec["subject"])
    args.file = str(subject)
    kind = spec["kind"]
    sched = spec.get("schedule", [])
    sched_text = ",".join(str(x) for x in sched) if isinstance(sched, list) else str(sched)
    if kind == "chop-sequence":
        args.schedule = sched_text
        args.vertex = spec.get("vertex")
        return cmd_chop_sequence(args, ctx, out)
    if kind == "parallel-family":
        rows = _parallel_rows(load_document(subject), _schedule(sched_text), int(spec.get("facet", 0)), ctx)
        out.write("\t".join(CHOP_HEADER) + "\n")
        _emit_rows(args, ctx, out, "parallel-family", CHOP_HEADER, rows)
        return 0
    if kind == "continuity-scan":
        return cmd_continuity_scan(args, ctx, out)
    if kind == "metric-table":
        others = [Path(args.spec).parent / str(o) for o in spec.get("others", [])]
        base = validate_delzant(load_document(subject).polytope)
        for o in others:
            out.write(f"{o.name}\t{fmt_rat(d_P(base, validate_delzant(load_document(o).polytope)))}\n")
        return 0
    raise ParseError(f"{args.spec}: unknown experiment kind {kind!r}")


# -- entry point --------------------------------------------------------------

def _vertex_arg(text):
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--tol", help="packing tolerance (default 1/1000)")
    common.add_argument("--decimal", type=int, help="add a rounded decimal rendering")
    common.add_argument("--strict", action="store_true", help="exit 3 when undecided")
    common.add_argument("--weights", choices=["geometric", "quartic"], help="Taylor weights b_n")
    common.add_argument("--degree", type=int, help="Taylor truncation degree (default 6)")
    common.add_argument("--density-breaks", dest="density_breaks", help="x breakpoints of g, comma separated")
    common.add_argument("--density-values", dest="density_values", help="values of g per slab")

    p = argparse.ArgumentParser(prog="gcapacity", description="Exact toric and semitoric capacities.")
    p.add_argument("--version", action="version", version=f"gcapacity {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check Delzant or semitoric conditions")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("pack", parents=[common], help="certified optimal packing")
    s.add_argument("file")
    s.add_argument("--exclude", type=_vertex_arg, action="append", help="vertex index to leave empty")
    s.add_argument("--csv")
    s.set_defaults(func=cmd_pack)

    s = sub.add_parser("capacity", parents=[common], help="capacity value or enclosure")
    s.add_argument("file")
    s.add_argument("--which", choices=["T", "cB", "ST", "STrad", "Er"], required=True)
    s.add_argument("--r")
    s.set_defaults(func=cmd_capacity)

    s = sub.add_parser("chop-sequence", parents=[common], help="corner-chop convergence table")
    s.add_argument("file")
    s.add_argument("--schedule", required=True, help="decreasing eps values, comma separated")
    s.add_argument("--vertex", type=_vertex_arg, help="chop only this vertex")
    s.add_argument("--csv")
    s.add_argument("--plot-data", dest="plot_data")
    s.set_defaults(func=cmd_chop_sequence)

    s = sub.add_parser("continuity-scan", parents=[common], help="largest-neighborhood test")
    s.add_argument("file")
    s.add_argument("--csv")
    s.set_defaults(func=cmd_continuity_scan)

    s = sub.add_parser("metric", parents=[common], help="distance between two files")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--kind", choices=["dP", "dST", "dTaylor", "dIngredients"], required=True)
    s.set_defaults(func=cmd_metric)

    s = sub.add_parser("angles", parents=[common], help="smooth angles with edge vectors of norm up to a bound")
    s.add_argument("--bound", type=int, required=True)
    s.set_defaults(func=cmd_angles)

    s = sub.add_parser("experiment", parents=[common], help="run an experiment spec file")
    s.add_argument("spec")
    s.add_argument("--csv")
    s.add_argument("--plot-data", dest="plot_data")
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        ctx = Context(args)
        return args.func(args, ctx, out)
    except (ParseError, UsageError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        if isinstance(exc, (DelzantError, SemitoricError, GeometryError)):
            sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
            return 1
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Undecided as exc:
        sys.stderr.write(f"undecided: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
