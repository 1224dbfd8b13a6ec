"""Command-line front end.

    floquet-baxter [--config FILE] verify | spectrum-sweep | alpha-curve |
                   roots-census | styb  [options]

Exit codes: 0 success (all checks pass), 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np

from . import acceptance, settheoretic, spectral
from .floquet import brick_wall_open_from_gates, staggered_floquet_from_gates
from .six_vertex import AnisotropyParams, Regime, alpha_of_T, reduce_alpha
from .tensor_core import Boundary, ChainGeometry, GeometryError, eig
from .yang_baxter import DEFAULT_SEED

CSV_SCHEMA = "floquet-baxter-csv/1"
SWEEP_COLUMNS = ("T", "regime", "k", "re_mu", "im_mu", "abs_mu", "re_E", "im_E", "jordan_risk")
ALPHA_COLUMNS = ("beta_T", "T", "re_alpha", "im_alpha", "diverges")

_NUM = r"(?:(?:\d+(?:\.\d*)?|\.\d+)(?:e[+-]?\d+)?(?:pi)?|pi)(?:/\d+(?:\.\d*)?)?"
_COMPLEX = re.compile(rf"^(?P<re>[+-]?{_NUM})?(?:(?P<im>[+-]?(?:{_NUM})?)i)?$")
_IMAG = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")


def _number(tok: str) -> float:
    sign = -1.0 if tok.startswith("-") else 1.0
    tok = tok.lstrip("+-")
    if not tok:
        return sign
    num, _, den = tok.partition("/")
    val = float(num[:-2] or 1) * math.pi if num.endswith("pi") else float(num)
    return sign * val / (float(den) if den else 1.0)


def parse_complex(text) -> complex:
    """``a+bi`` / ``a-bi`` / ``bi`` / ``a`` with no spaces; a number may carry a
    ``pi`` factor and a ``/d`` divisor, e.g. ``5pi/9i``."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).strip().lower()
    # try the bare imaginary form first, else "0.5i" reads as 0.5 + 1i
    m = _IMAG.match(s) or _COMPLEX.match(s)
    if not s or " " in s or m is None or (m.groupdict().get("re") is None and m.group("im") is None):
        raise argparse.ArgumentTypeError(f"invalid complex number {text!r} (expected a+bi)")
    re_part = _number(m.group("re")) if m.groupdict().get("re") else 0.0
    im_part = _number(m.group("im")) if m.group("im") is not None else 0.0
    return complex(re_part, im_part)


def parse_grid(text) -> list:
    """``a:b:steps`` (inclusive, steps points) or a comma-separated list."""
    s = str(text).strip()
    if ":" in s:
        try:
            a, b, n = s.split(":")
            a, b, n = float(a), float(b), int(n)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid grid {text!r} (expected a:b:steps)")
        if n < 1:
            raise argparse.ArgumentTypeError("T-grid is empty")
        return list(np.linspace(a, b, n)) if n > 1 else [a]
    vals = [float(x) for x in s.split(",") if x.strip()]
    if not vals:
        raise argparse.ArgumentTypeError("T-grid is empty")
    return vals


OPTIONS = {
    # key: (type, default)
    "eta": (parse_complex, 0.5j),
    "L": (int, 6),
    "n": (int, 2),
    "T": (float, None),
    "T_grid": (parse_grid, None),
    "branch_m": (int, 0),
    "boundary": (str, "periodic"),
    "tol": (float, None),
    "seed": (int, DEFAULT_SEED),
    "out": (str, None),
    "sign": (int, 1),
    "bound": (int, 3),
    "steps": (int, 200),
}


def _add_common(p: argparse.ArgumentParser):
    S = argparse.SUPPRESS
    p.add_argument("--eta", type=parse_complex, default=S, help="anisotropy, a+bi (default 0+0.5i)")
    p.add_argument("--L", type=int, default=S, help="chain length")
    p.add_argument("--n", type=int, default=S, help="circuit depth")
    p.add_argument("--T", type=float, default=S, help="single driving period")
    p.add_argument("--T-grid", dest="T_grid", type=parse_grid, default=S, help="a:b:steps or list")
    p.add_argument("--branch-m", dest="branch_m", type=int, default=S)
    p.add_argument("--boundary", choices=["periodic", "open"], default=S)
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--out", default=S, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="floquet-baxter", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON file with the same keys as the flags")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run the acceptance suite")
    _add_common(v)
    v.add_argument("--perturb-gate", dest="perturb_gate", type=float, default=0.0,
                   help=argparse.SUPPRESS)
    s = sub.add_parser("spectrum-sweep", help="U_F and H_F spectra over a T grid (CSV)")
    _add_common(s)
    a = sub.add_parser("alpha-curve", help="α(T) over one period (CSV)")
    _add_common(a)
    a.add_argument("--steps", type=int, default=argparse.SUPPRESS)
    r = sub.add_parser("roots-census", help="limit-operator spectrum vs roots of unity (JSON)")
    _add_common(r)
    r.add_argument("--sign", type=int, choices=[1, -1], default=argparse.SUPPRESS)
    t = sub.add_parser("styb", help="set-theoretic Yang-Baxter scan (text)")
    _add_common(t)
    t.add_argument("--bound", type=int, default=argparse.SUPPRESS)
    return ap


def resolve_config(ns: argparse.Namespace, ap: argparse.ArgumentParser) -> dict:
    """Defaults, overridden by the config file, overridden by flags."""
    cfg = {k: d for k, (_, d) in OPTIONS.items()}
    if ns.config:
        try:
            with open(ns.config) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            ap.error(f"cannot read config {ns.config}: {exc}")
        for key, val in raw.items():
            key = key.replace("-", "_")
            if key not in OPTIONS:
                ap.error(f"unknown config key {key!r}")
            conv = OPTIONS[key][0]
            try:
                cfg[key] = conv(val) if not isinstance(val, list) else [float(x) for x in val]
            except (argparse.ArgumentTypeError, ValueError, TypeError) as exc:
                ap.error(f"config key {key!r}: {exc}")
    for key in OPTIONS:
        if hasattr(ns, key):
            cfg[key] = getattr(ns, key)
    cfg["command"] = ns.command
    cfg["perturb_gate"] = getattr(ns, "perturb_gate", 0.0)
    return cfg


def _emit(text: str, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return "nan" if not math.isfinite(x) else f"{x:.12e}"


# -- commands ----------------------------------------------------------------

def cmd_verify(cfg) -> int:
    checks = acceptance.run_all(perturb_gate=cfg["perturb_gate"], seed=cfg["seed"])
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    if cfg["out"]:
        rep = [{"name": c.name, "passed": c.passed, "value": c.value, "tol": c.tol,
                "kind": c.kind} for c in checks]
        _emit(json.dumps(rep, indent=2) + "\n", cfg["out"])
    if failed:
        print(f"first failing check: {failed[0].name}")
        return 1
    print(f"all {len(checks)} checks passed")
    return 0


def _grid(cfg) -> list:
    if cfg["T_grid"] is not None:
        return sorted(cfg["T_grid"])
    if cfg["T"] is not None:
        return [cfg["T"]]
    raise GeometryError("spectrum-sweep needs --T or --T-grid")


def sweep_rows(cfg) -> list:
    p = AnisotropyParams.from_eta(cfg["eta"])
    if p.regime not in (Regime.EASY_PLANE, Regime.EASY_AXIS):
        raise ValueError("spectrum-sweep supports easy-plane and easy-axis η")
    if cfg["n"] != 2:
        raise ValueError("spectrum-sweep builds the depth-2 staggered circuit (n = 2)")
    bnd = Boundary(cfg["boundary"])
    geo = ChainGeometry(L=cfg["L"], boundary=bnd)
    rows = []
    for T in _grid(cfg):
        if bnd is Boundary.PERIODIC:
            U = staggered_floquet_from_gates(p, T, geo)
        else:
            U = brick_wall_open_from_gates(p, T, geo)
        res = eig(U)
        E = spectral.hf_from_uf(res.values, T) if T > 0 else np.full(len(res.values), np.nan + 0j)
        reg = spectral.classify_regime(p, T).value
        for k, (mu, e) in enumerate(zip(res.values, E)):
            rows.append((T, reg, k, mu.real, mu.imag, abs(mu), e.real, e.imag, int(res.jordan_risk)))
    return rows


def cmd_spectrum_sweep(cfg) -> int:
    rows = sweep_rows(cfg)
    buf = io.StringIO()
    buf.write(f"# {CSV_SCHEMA} spectrum-sweep eta={cfg['eta']} L={cfg['L']} boundary={cfg['boundary']}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[0]), r[1], r[2], *map(_fmt, r[3:8]), r[8]])
    _emit(buf.getvalue(), cfg["out"])
    return 0


def alpha_rows(cfg) -> list:
    p = AnisotropyParams.from_eta(cfg["eta"])
    if p.regime is not Regime.EASY_PLANE:
        raise ValueError("alpha-curve needs easy-plane η")
    beta = p.beta.real
    t1, t2, period = spectral.regime_boundaries(p)
    grid = [t for t in np.linspace(0.0, period, cfg["steps"]).tolist()
            if min(abs(t - t1), abs(t - t2)) > 1e-12]
    ts = set(grid) | {t1, t2}
    rows = []
    for T in sorted(ts):
        try:
            a = reduce_alpha(alpha_of_T(p, T, cfg["branch_m"]))
            rows.append((beta * T, T, a.real, a.imag, 0))
        except ValueError:
            rows.append((beta * T, T, float("nan"), float("nan"), 1))
    return rows


def cmd_alpha_curve(cfg) -> int:
    buf = io.StringIO()
    buf.write(f"# {CSV_SCHEMA} alpha-curve eta={cfg['eta']}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ALPHA_COLUMNS)
    for r in alpha_rows(cfg):
        w.writerow([*map(_fmt, r[:4]), r[4]])
    _emit(buf.getvalue(), cfg["out"])
    return 0


def census_report(cfg) -> dict:
    p = AnisotropyParams.from_eta(cfg["eta"])
    if p.root_of_unity is None:
        raise ValueError(f"η = {cfg['eta']} is not at a root of unity")
    geo = ChainGeometry(L=cfg["L"])
    tol = cfg["tol"] if cfg["tol"] is not None else 1e-8
    r = spectral.limit_census(p, cfg["sign"], geo, tol)
    return {
        "eta_over_ipi": [p.root_of_unity.l1, p.root_of_unity.l2], "L": geo.L, "sign": cfg["sign"],
        "order": r.order, "tol": tol, "passed": r.passed, "max_distance": r.max_distance,
        "occupied": {str(k): v for k, v in r.census.items()}, "occupied_count": len(r.census),
        "all_occupied": r.all_occupied, "strict_subset": r.strict_subset,
        "mirror_axes": r.mirror_axes, "symmetric_under_negation": r.symmetric_under_negation,
    }


def cmd_roots_census(cfg) -> int:
    rep = census_report(cfg)
    _emit(json.dumps(rep, indent=2) + "\n", cfg["out"])
    return 0 if rep["passed"] else 1


def styb_report(cfg) -> str:
    sc = settheoretic.scan(cfg["bound"], 100, cfg["seed"])
    lines = [f"bound {sc.bound}: {(2 * sc.bound + 1) ** 4} maps analyzed, {len(sc.survivors)} solutions"]
    for mp in sc.survivors:
        fam = ",".join(settheoretic.families_of(mp)) or "OUTLIER"
        lines.append(f"  {mp.as_tuple()}  {fam}")
    lines.append(f"outliers: {len(sc.outliers)}")
    lines.append(f"equation/YBE mismatches: {len(sc.mismatches)}")
    lines.append(f"mirror (n<->q, m<->p) failures: {len(sc.mirror_failures)}")
    return "\n".join(lines) + "\n"


def cmd_styb(cfg) -> int:
    if cfg["bound"] < 0:
        raise ValueError("bound must be >= 0")
    _emit(styb_report(cfg), cfg["out"])
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "spectrum-sweep": cmd_spectrum_sweep,
    "alpha-curve": cmd_alpha_curve,
    "roots-census": cmd_roots_census,
    "styb": cmd_styb,
}


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    cfg = resolve_config(ns, ap)
    try:
        return COMMANDS[cfg["command"]](cfg)
    except (ValueError, GeometryError) as exc:
        print(f"floquet-baxter: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
