"""Command-line front end: evaluate, verify, and sweep.

eval   one quantity at given points -> CSV or JSON rows
verify a named suite -> JSON report bundle, exit 0 iff all checks pass
sweep  a quantity over a 1- or 2-parameter grid -> plot-ready CSV

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
Numbers are serialized with 17 significant digits and fixed iteration
order, so identical configs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import boundary_measure, geodesics_metrics, kernels
from ._suites import SUITES, run_suite
from .domain_core import make_domain
from .errors import ConvergenceError, DomainError, PluripotError, UnsupportedDomainError

_QUANTITIES = ("green", "poisson", "horofunction", "distance", "density")

_CONFIG_KEYS = {"command", "quantity", "suite", "domain", "xi", "z", "w", "p",
                "r", "m", "tol", "resolution", "out", "format", "seed", "u",
                "grid_t", "grid_s"}


# ---------------------------------------------------------------------------
# Serialization: floats at 17 significant digits, deterministic layout.
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def _dumps(obj, indent=0) -> str:
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(str(k))}: {_dumps(v, indent + 2)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{inner}{_dumps(v, indent + 2)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, complex):
        return json.dumps(_point_str(np.array([obj])))
    return json.dumps(str(obj))


def _point_str(pt) -> str:
    parts = []
    for c in np.atleast_1d(np.asarray(pt, dtype=complex)):
        parts.append(f"{_fmt_float(c.real)}{'+' if c.imag >= 0 else '-'}{_fmt_float(abs(c.imag))}j")
    return ";".join(parts)


def _write_csv(rows, columns, out):
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            v = row.get(col, "")
            if isinstance(v, (float, np.floating)):
                cells.append(_fmt_float(float(v)))
            elif isinstance(v, (int, np.integer, bool, np.bool_)):
                cells.append(str(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    out.write("\n".join(lines) + "\n")


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Parsing.
# ---------------------------------------------------------------------------

_SAFE_ENV = {"cos": math.cos, "sin": math.sin, "tan": math.tan,
             "exp": math.exp, "sqrt": math.sqrt, "log": math.log,
             "pi": math.pi, "abs": abs, "j": 1j}


def _parse_point(text, n=None, env=None):
    """Parse a comma-separated complex vector, e.g. '0.5,0' or 'e1'.

    With env, components may be expressions in the grid parameters
    (sweep templates), evaluated in a restricted namespace.
    """
    text = text.strip()
    if text.startswith("e") and text[1:].isdigit():
        k = int(text[1:])
        size = n if n is not None else k
        if k < 1 or k > size:
            raise DomainError(f"unit vector {text!r} out of range for dimension {size}")
        v = np.zeros(size, dtype=complex)
        v[k - 1] = 1.0
        return v
    comps = []
    for tok in text.split(","):
        tok = tok.strip()
        if env is not None:
            try:
                comps.append(complex(eval(tok, {"__builtins__": {}}, dict(_SAFE_ENV, **env))))
            except Exception as exc:
                raise DomainError(f"cannot evaluate component {tok!r}: {exc}")
        else:
            try:
                comps.append(complex(tok))
            except ValueError:
                raise DomainError(f"cannot parse component {tok!r} as a complex number")
    return np.array(comps, dtype=complex)


def _parse_grid(text):
    """start:stop:count -> linspace."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid spec must be start:stop:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"cannot parse grid spec {text!r}")
    if count < 1:
        raise DomainError("grid count must be positive")
    return np.linspace(lo, hi, count)


def _parse_m(text):
    if text is None:
        return None
    return tuple(int(tok) for tok in str(text).split(","))


def _build_domain(config):
    spec = config.get("domain")
    if not spec:
        raise DomainError("a --domain is required")
    if isinstance(spec, str):
        return make_domain(spec, m=_parse_m(config.get("m")),
                           r=float(config["r"]) if config.get("r") is not None else None)
    return make_domain(spec)


def _load_config(args) -> dict:
    config = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise DomainError("config file must hold a JSON object")
        unknown = set(loaded) - _CONFIG_KEYS
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        config.update(loaded)
    for key in _CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    if config.get("tol") is not None and not float(config["tol"]) > 0:
        raise DomainError("tolerance must be positive")
    return config


# ---------------------------------------------------------------------------
# Commands.
# ---------------------------------------------------------------------------

def _evaluate(quantity, dom, config, env=None):
    """One (value, method, uncertainty) evaluation; raises on bad input."""
    n = dom.n

    def point(key):
        raw = config.get(key)
        if raw is None:
            raise DomainError(f"quantity {quantity!r} requires --{key}")
        if isinstance(raw, str):
            return _parse_point(raw, n=n, env=env)
        return np.asarray(raw, dtype=complex)

    if quantity == "poisson":
        kv = kernels.poisson_kernel(dom, point("xi"), point("z"))
        return kv.value, kv.method, kv.uncertainty
    if quantity == "green":
        kv = kernels.green_function(dom, point("w"), point("z"))
        return kv.value, kv.method, kv.uncertainty
    if quantity == "horofunction":
        kv = kernels.horofunction(dom, point("xi"), point("p"), point("z"))
        return kv.value, kv.method, kv.uncertainty
    if quantity == "distance":
        bound = geodesics_metrics.kobayashi_distance(dom, point("z"), point("w"))
        method = "closed_form" if bound.exact else "sandwich_bounds"
        return bound.value, method, 0.5 * bound.width
    if quantity == "density":
        val = boundary_measure.boundary_form_density(dom, point("xi"))
        return val, "levi_form", 0.0
    raise DomainError(f"unknown quantity {quantity!r}; expected one of {_QUANTITIES}")


def cmd_eval(config) -> int:
    dom = _build_domain(config)
    quantity = config.get("quantity")
    value, method, unc = _evaluate(quantity, dom, config)
    row = {"quantity": quantity, "domain": dom.label}
    for key in ("xi", "z", "w", "p"):
        if config.get(key) is not None:
            raw = config[key]
            pt = _parse_point(raw, n=dom.n) if isinstance(raw, str) else np.asarray(raw, dtype=complex)
            row[key] = _point_str(pt)
    row.update({"value": value, "method": method, "uncertainty": unc})

    fmt = config.get("format") or "json"
    if fmt == "json":
        _emit(_dumps({"schema": 1, "rows": [row]}) + "\n", config.get("out"))
    else:
        _write_csv_to(config, [row], list(row.keys()))
    return 0


def _write_csv_to(config, rows, columns):
    import io
    buf = io.StringIO()
    _write_csv(rows, columns, buf)
    _emit(buf.getvalue(), config.get("out"))


def cmd_verify(config) -> int:
    name = config.get("suite")
    if not name or name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    reports = run_suite(name, config)
    bundle = {"schema": 1, "suite": name,
              "reports": [dict(r.to_json(), details=r.details) for r in reports]}
    for r in reports:
        sys.stderr.write(f"{r.check}: {r.verdict}\n")
    _emit(_dumps(bundle) + "\n", config.get("out"))
    return 0 if all(r.verdict == "pass" for r in reports) else 3


def cmd_sweep(config) -> int:
    dom = _build_domain(config)
    quantity = config.get("quantity")
    if quantity not in _QUANTITIES:
        raise DomainError(f"unknown quantity {quantity!r}; expected one of {_QUANTITIES}")
    if not config.get("grid_t"):
        raise DomainError("sweep requires --grid-t start:stop:count")
    ts = _parse_grid(config["grid_t"])
    ss = _parse_grid(config["grid_s"]) if config.get("grid_s") else [None]

    rows = []
    for t in ts:
        for s in ss:
            env = {"t": float(t)}
            if s is not None:
                env["s"] = float(s)
            row = {"t": float(t)}
            if s is not None:
                row["s"] = float(s)
            try:
                value, method, unc = _evaluate(quantity, dom, config, env=env)
                row.update({"value": value, "method": method,
                            "uncertainty": unc, "status": "ok"})
            except (DomainError, UnsupportedDomainError):
                row.update({"value": float("nan"), "method": "",
                            "uncertainty": float("nan"), "status": "outside"})
            except ConvergenceError:
                row.update({"value": float("nan"), "method": "",
                            "uncertainty": float("nan"), "status": "error"})
            rows.append(row)

    columns = ["t"] + (["s"] if config.get("grid_s") else []) + \
              ["value", "method", "uncertainty", "status"]
    fmt = config.get("format") or "csv"
    if fmt == "json":
        _emit(_dumps({"schema": 1, "rows": rows}) + "\n", config.get("out"))
    else:
        _write_csv_to(config, rows, columns)
    return 0


# ---------------------------------------------------------------------------
# Entry point.
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pluripot",
        description="Boundary kernels, invariant distances, and theorem verification "
                    "for convex domains.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_points=True):
        p.add_argument("--domain", help="disc | ballN | eggM | ellipsoid | annulus | half_plane")
        p.add_argument("--r", type=float, help="annulus inner radius")
        p.add_argument("--m", help="ellipsoid exponents, comma separated")
        p.add_argument("--tol", type=float, help="tolerance override")
        p.add_argument("--resolution", type=int, help="quadrature resolution")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--config", help="JSON config file; flags override its keys")
        p.add_argument("--seed", type=int, help="sampling seed override")
        if with_points:
            p.add_argument("--xi", help="boundary point, e.g. e1 or 1,0")
            p.add_argument("--z", help="interior point")
            p.add_argument("--w", help="interior point")
            p.add_argument("--p", help="interior base point")

    pe = sub.add_parser("eval", help="evaluate one quantity")
    pe.add_argument("quantity", choices=_QUANTITIES)
    common(pe)

    pv = sub.add_parser("verify", help="run a named verification suite")
    pv.add_argument("suite", nargs="?", help=f"one of {sorted(SUITES)}")
    pv.add_argument("--suite", dest="suite_flag", help=argparse.SUPPRESS)
    pv.add_argument("--u", help="test function name (monge_ampere suite)")
    common(pv, with_points=False)

    ps = sub.add_parser("sweep", help="sweep a quantity over a parameter grid")
    ps.add_argument("quantity", choices=_QUANTITIES)
    ps.add_argument("--grid-t", dest="grid_t", help="t grid as start:stop:count")
    ps.add_argument("--grid-s", dest="grid_s", help="optional s grid as start:stop:count")
    common(ps)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "verify" and getattr(args, "suite_flag", None):
            config["suite"] = args.suite_flag
        if args.command == "eval":
            return cmd_eval(config)
        if args.command == "verify":
            return cmd_verify(config)
        return cmd_sweep(config)
    except (DomainError, UnsupportedDomainError) as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2
    except ConvergenceError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3
    except PluripotError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
