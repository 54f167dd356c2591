"""Command-line front end.

    ypflow minimize --poly "x^4+0.2114x^3-2.6841x^2-0.1110x+1.2406" --json -
    ypflow zones --coeffs 1,0,-0.3726,0.0574,0.0306,-0.0084,0 --svg zones.svg
    ypflow evolve --coeffs 1,0,0,0,0 --t 1

Coefficients are given highest power first.  Exit status is 0 on success,
2 for inputs outside a method's domain, 64 for bad flags and 70 when two
independent computations disagree.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import flow, quartic, sextic
from .errors import ConsistencyViolation, DomainError, NonConvergence, WrongDegree
from .fingerprint import default_t_max, fingerprint, fp1_merge_points, fp2_fp3_intersections
from .heat import convexification_time, evolve_at
from .oracle import MATCH_TOL, brute_force_min, verify_method
from .parse import format_poly, parse, parse_coeffs
from .plotting import render_fingerprint_svg
from .polynomial import Polynomial

EXIT_DOMAIN = 2
EXIT_USAGE = 64
EXIT_SOFTWARE = 70
COMMANDS = ("evolve", "fingerprint", "minimize", "zones", "quartic", "sextic", "trace", "verify")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    poly: str | None = None
    coeffs: str | None = None
    t: float = 0.0
    t_max: float | None = None
    grid: int = flow.DEFAULT_GRID
    n_steps: int = 2000
    k: list[int] = field(default_factory=lambda: [1, 2, 3])
    method: str | None = None
    zone_method: str = "shooting"
    x0: float | None = None
    t0: float = 0.0
    t1: float | None = None
    candidate: float | None = None
    json_out: str | None = None
    csv_out: str | None = None
    svg_out: str | None = None
    threads: int = 1
    tol_match: float = MATCH_TOL
    tol_boundary: float = flow.BOUNDARY_TOL
    tol_rtol: float = flow.RTOL


def _num(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def _fmt12(v: float) -> str:
    return f"{v:.12g}"


def _emit(dest: str | None, text: str, stdout) -> None:
    if dest is None:
        return
    if dest == "-":
        stdout.write(text)
        if not text.endswith("\n"):
            stdout.write("\n")
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt12(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _polynomial(cfg: RunConfig) -> Polynomial:
    if (cfg.poly is None) == (cfg.coeffs is None):
        raise UsageError("give exactly one of --poly or --coeffs")
    return parse(cfg.poly) if cfg.poly is not None else parse_coeffs(cfg.coeffs)


def _merge_json(mps):
    return [{"x": _num(m.x), "t": _num(m.t), "kind": m.kind} for m in mps]


def _cmd_evolve(cfg, p, out):
    q = evolve_at(p, cfg.t)
    _emit(cfg.json_out, _json({"t": cfg.t, "coeffs": [_num(c) for c in q.descending()], "poly": format_poly(q)}), out)
    if cfg.json_out is None:
        out.write(format_poly(q) + "\n")


def _fingerprint_rows(branches):
    rows = []
    ids: dict[int, int] = {}
    for br in sorted(branches, key=lambda b: (b.k, b.born_at, float(b.x[0]))):
        j = ids.get(br.k, 0)
        ids[br.k] = j + 1
        rows += [(br.k, j, float(t), float(x)) for t, x in zip(br.t, br.x)]
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return rows


def _cmd_fingerprint(cfg, p, out):
    t_max = cfg.t_max or default_t_max(p)
    branches = []
    for k in cfg.k:
        branches += fingerprint(p, k, t_max, cfg.n_steps)
    merges = []
    if p.degree >= 4:
        if 1 in cfg.k:
            merges += fp1_merge_points(p)
        if 2 in cfg.k or 3 in cfg.k:
            merges += fp2_fp3_intersections(p)
    text = _csv(["k", "branch_id", "t", "x"], _fingerprint_rows(branches))
    _emit(cfg.csv_out if cfg.csv_out or cfg.svg_out or cfg.json_out else "-", text, out)
    _emit(cfg.svg_out, render_fingerprint_svg(branches, None, merges), out)
    _emit(cfg.json_out, _json({"t_max": t_max, "merge_points": _merge_json(merges)}), out)


def _zones_json(z):
    return [[_num(lo), _num(hi)] for lo, hi in z.confinement]


def _cmd_minimize(cfg, p, out):
    method = cfg.method or "backward-flow"
    t0 = None
    orc = brute_force_min(p)
    if method != "backward-flow":
        zones = flow.classify_zones(
            p, cfg.grid, method=cfg.zone_method, boundary_tol=cfg.tol_boundary, threads=cfg.threads
        )
    if method == "backward-flow":
        att = flow.attainability(p, cfg.grid, cfg.zone_method, cfg.tol_match, cfg.threads)
        x, t0 = att.flow.minimizer, att.flow.t0
        attainable = att.attainable
        zones = att.zones
    elif method in ("quartic-direct", "fixed-start"):
        if p.degree != 4:
            raise WrongDegree(f"--method {method} needs a quartic, got degree {p.degree}")
        a, b, c, d = quartic.monic_coeffs(p)
        if method == "fixed-start":
            x = quartic.fixed_start_descent(a, b, c, d)[0]
        else:
            x = quartic.backward_iteration(a, b, c, d)
        attainable = bool(verify_method(p, x, cfg.tol_match))
    elif method == "oracle":
        x = orc.minimizers[0]
        attainable = True
    else:
        raise UsageError(f"unknown method {method!r}")
    oracle = min(orc.minimizers, key=lambda m: abs(m - x))
    res = {
        "minimizer": _num(x),
        "value": _num(p(x)),
        "attainable": bool(attainable),
        "oracle": _num(oracle),
        "zones": _zones_json(zones),
        "t0": _num(t0),
    }
    _emit(cfg.json_out or "-", _json(res), out)


def _cmd_zones(cfg, p, out):
    z = flow.classify_zones(
        p, cfg.grid, method=cfg.zone_method, boundary_tol=cfg.tol_boundary, t_max=cfg.t_max, threads=cfg.threads
    )
    res = {
        "zones": _zones_json(z),
        "merge_points": _merge_json(z.merge_points),
        "boundary_tol": z.boundary_tol,
        "method": z.method,
        "t_max": _num(z.t_max),
    }
    _emit(cfg.json_out or ("-" if cfg.svg_out is None and cfg.csv_out is None else None), _json(res), out)
    if cfg.csv_out:
        _emit(cfg.csv_out, _csv(["zone", "lo", "hi"], [(i, lo, hi) for i, (lo, hi) in enumerate(z.confinement)]), out)
    if cfg.svg_out:
        branches = fingerprint(p, 1, z.t_max or default_t_max(p), cfg.n_steps)
        _emit(cfg.svg_out, render_fingerprint_svg(branches, z, z.merge_points), out)


def _quartic_coeffs(cfg) -> tuple[float, float, float, float, Polynomial]:
    if cfg.coeffs is not None and cfg.poly is None:
        vals = [float(v) for v in cfg.coeffs.split(",") if v.strip()]
        if len(vals) == 4:
            a, b, c, d = vals
            return a, b, c, d, Polynomial([d, c, b, a, 1.0])
    p = _polynomial(cfg)
    a, b, c, d = quartic.monic_coeffs(p)
    return a, b, c, d, p


def _cmd_quartic(cfg, _p, out):
    a, b, c, d, p = _quartic_coeffs(cfg)
    rep = quartic.analyze(a, b, c, d)
    res = {k: (_num(v) if isinstance(v, float) else v) for k, v in rep.as_dict().items()}
    if rep.confinement:
        res["confinement"] = [_num(v) for v in rep.confinement]
    mono = Polynomial([d, c, b, a, 1.0])
    orc = brute_force_min(mono)
    res["critical_points"] = [_num(x) for x in quartic.critical_points(a, b, c)]
    res["oracle"] = [_num(x) for x in orc.minimizers]
    res["fixed_start"] = [_num(x) for x in quartic.fixed_start_descent(a, b, c, d)]
    _emit(cfg.json_out or "-", _json(res), out)
    if cfg.csv_out:
        t_end = max(rep.t_star, 0.0) * 1.2 + 1e-9 if rep.t_star > 0 else 1.0
        ts = np.linspace(0.0, t_end, 25)
        rows = quartic.triangle_vertices(a, b, c, d, ts)
        _emit(cfg.csv_out, _csv(["t", "x", "value"], rows), out)


def _cmd_sextic(cfg, p, out):
    rep = sextic.analyze_sextic(p)
    f = rep.form
    res = {
        "depressed": {"b": f.b, "c": f.c, "d": f.d, "e": f.e, "f": f.f, "shift": f.shift + 0.0},
        "delta_t": [_num(v) for v in rep.delta.descending()],
        "merge_times": [_num(t) for t in rep.merge_times],
        "merge_points": _merge_json(rep.merge_points),
        "cases": [c.value for c in rep.cases],
        "negative_roots": [_num(t) for t in rep.negative_roots],
        "degenerate": rep.degenerate,
    }
    _emit(cfg.json_out or "-", _json(res), out)


def _cmd_trace(cfg, p, out):
    if cfg.x0 is None:
        raise UsageError("trace needs --x0")
    t1 = cfg.t1 if cfg.t1 is not None else (cfg.t_max or default_t_max(p))
    tr = flow.integrate_yp(p, cfg.x0, cfg.t0, t1, rtol=cfg.tol_rtol)
    res = {
        "termination": tr.termination,
        "direction": tr.direction,
        "end": {"t": _num(tr.t[-1]), "x": _num(tr.x[-1])},
        "merge": None if tr.merge is None else {"x": _num(tr.merge[0]), "t": _num(tr.merge[1])},
        "samples": int(len(tr.t)),
    }
    _emit(cfg.json_out or ("-" if cfg.csv_out is None and cfg.svg_out is None else None), _json(res), out)
    _emit(cfg.csv_out, _csv(["t", "x"], [(float(t), float(x)) for t, x in zip(tr.t, tr.x)]), out)
    if cfg.svg_out:
        branches = fingerprint(p, 1, max(t1, cfg.t0), cfg.n_steps)
        _emit(cfg.svg_out, render_fingerprint_svg(branches, None, [], [tr]), out)


def _cmd_verify(cfg, p, out):
    if cfg.candidate is None:
        raise UsageError("verify needs --candidate")
    v = verify_method(p, cfg.candidate, cfg.tol_match)
    _emit(cfg.json_out or "-", _json({"verdict": "Match" if v.match else "Mismatch", "distance": _num(v.distance)}), out)


_DISPATCH = {
    "evolve": _cmd_evolve,
    "fingerprint": _cmd_fingerprint,
    "minimize": _cmd_minimize,
    "zones": _cmd_zones,
    "quartic": _cmd_quartic,
    "sextic": _cmd_sextic,
    "trace": _cmd_trace,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        p = None if cfg.command == "quartic" else _polynomial(cfg)
        _DISPATCH[cfg.command](cfg, p, stdout)
    except UsageError as exc:
        stderr.write(f"ypflow: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        stderr.write(f"ypflow: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    except ConsistencyViolation as exc:
        stderr.write(f"ypflow: internal consistency check failed: {exc}\n")
        return EXIT_SOFTWARE
    except NonConvergence as exc:
        stderr.write(f"ypflow: {exc}\n")
        return 1
    return 0


def _positive_int(v):
    n = int(v)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _positive_float(v):
    x = float(v)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ypflow", description="Heat-evolution global minimisation of univariate polynomials.")
    ap.add_argument("command", choices=COMMANDS)
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--poly", help='expression such as "x^4-8x^3-18x^2+56x"')
    src.add_argument("--coeffs", help="comma-separated coefficients, highest power first")
    ap.add_argument("--t", type=float, default=0.0, help="evolution time for evolve")
    ap.add_argument("--t-max", type=_positive_float, default=None)
    ap.add_argument("--grid", type=_positive_int, default=flow.DEFAULT_GRID)
    ap.add_argument("--steps", type=_positive_int, default=2000, help="t slices for fingerprint tracing")
    ap.add_argument("--k", default="1,2,3", help="fingerprint orders, e.g. 1,2")
    ap.add_argument("--method", choices=("backward-flow", "quartic-direct", "fixed-start", "oracle"))
    ap.add_argument("--zone-method", choices=("shooting", "saddles"), default="shooting")
    ap.add_argument("--x0", type=float)
    ap.add_argument("--t0", type=float, default=0.0)
    ap.add_argument("--t1", type=float)
    ap.add_argument("--candidate", type=float)
    ap.add_argument("--json", dest="json_out", metavar="PATH")
    ap.add_argument("--csv", dest="csv_out", metavar="PATH")
    ap.add_argument("--svg", dest="svg_out", metavar="PATH")
    ap.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    ap.add_argument("--tol-match", type=_positive_float, default=MATCH_TOL)
    ap.add_argument("--tol-boundary", type=_positive_float, default=flow.BOUNDARY_TOL)
    ap.add_argument("--tol-rtol", type=_positive_float, default=flow.RTOL)
    return ap


def _glue_values(argv: list[str]) -> list[str]:
    # "--coeffs -8,-18,56,0" would otherwise read the list as a flag
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--coeffs", "--poly", "--x0", "--t0", "--t1", "--t", "--candidate") and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(_glue_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        ks = [int(v) for v in ns.k.split(",") if v.strip()]
    except ValueError:
        ap.error(f"bad --k value {ns.k!r}")
    if not ks or any(k < 1 for k in ks):
        ap.error("--k needs positive orders")
    if ns.poly is None and ns.coeffs is None:
        ap.error("one of --poly or --coeffs is required")
    cfg = RunConfig(
        command=ns.command, poly=ns.poly, coeffs=ns.coeffs, t=ns.t, t_max=ns.t_max, grid=ns.grid,
        n_steps=ns.steps, k=ks, method=ns.method, zone_method=ns.zone_method, x0=ns.x0, t0=ns.t0,
        t1=ns.t1, candidate=ns.candidate, json_out=ns.json_out, csv_out=ns.csv_out, svg_out=ns.svg_out,
        threads=ns.threads, tol_match=ns.tol_match, tol_boundary=ns.tol_boundary, tol_rtol=ns.tol_rtol,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
