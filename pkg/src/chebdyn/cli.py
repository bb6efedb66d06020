"""Command-line front end: analysis reports, basin images and checks."""
from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .basins import (NONCONV, GridSpec, compute_basins, connectivity, default_grid,
                     unbounded_components)
from .fixpoints import (attractors, fixed_points, multiplier_at_infinity,
                        postcritical_classify)
from .method import MethodKind, build_method, map_degree
from .poly import (FactoredPolynomial, Polynomial, PolynomialError, RootFindingError,
                   UnreducedMapError, is_infinite, roots)
from .render import default_palette, render_ppm
from .scaling import AffineMap, centroid, conjugacy_residual, normalize
from .symmetry import is_line, poly_symmetry_group, rotation_mismatch, symmetry_report

SCHEMA_VERSION = 1
SCALING_PASS = 1e-8

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class ParseError(ValueError):
    """Malformed input with the offending column."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.message, self.text, self.pos = message, text, pos
        super().__init__(self.__str__())

    def __str__(self):
        if not self.text:
            return self.message
        return f"{self.message} at column {self.pos + 1}\n  {self.text}\n  {' ' * self.pos}^"


# --------------------------------------------------------------------------
# input grammar

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"[+-]?{_NUM}")
_IMAG = re.compile(rf"([+-]?)({_NUM})?[ij]")
_FULL = re.compile(rf"([+-]?{_NUM})([+-])({_NUM})?[ij]")


def parse_complex(token: str, text: str | None = None, offset: int = 0) -> complex:
    """``R``, ``Ri``, ``R+Si`` or ``R-Si`` (``j`` also accepted for ``i``)."""
    text = token if text is None else text
    lead = len(token) - len(token.lstrip())
    s = token.strip()
    if not s:
        raise ParseError("empty number", text, offset)
    s_nospace = s.replace(" ", "")
    if _REAL.fullmatch(s_nospace):
        return complex(float(s_nospace), 0.0)
    m = _IMAG.fullmatch(s_nospace)
    if m:
        mag = float(m.group(2)) if m.group(2) else 1.0
        return complex(0.0, -mag if m.group(1) == "-" else mag)
    m = _FULL.fullmatch(s_nospace)
    if m:
        im = float(m.group(3)) if m.group(3) else 1.0
        return complex(float(m.group(1)), -im if m.group(2) == "-" else im)
    # point at the first character that cannot continue a literal
    bad = lead
    for k in range(len(s), 0, -1):
        head = s[:k].replace(" ", "")
        if _REAL.fullmatch(head) or _FULL.fullmatch(head + "i") or _IMAG.fullmatch(head):
            bad = lead + k
            break
    raise ParseError(f"malformed complex literal {s!r}", text, offset + bad)


def _split(text: str, sep: str, offset: int = 0):
    pos = offset
    for part in text.split(sep):
        yield part, pos
        pos += len(part) + 1


_FACTOR = re.compile(r"\s*\(([^()]*)\)\s*")


def parse_polynomial(text: str):
    """Coefficients ``a0,a1,...,ad`` or factors ``(root,mult);(root,mult)...``."""
    if text is None or not text.strip():
        raise ParseError("empty polynomial")
    if text.lstrip().startswith("("):
        return _parse_factored(text)
    coeffs = [parse_complex(part, text, pos) for part, pos in _split(text, ",")]
    p = Polynomial(coeffs)
    if p.is_zero:
        raise ParseError("the zero polynomial has no iteration map", text, 0)
    return p


def _parse_factored(text: str) -> FactoredPolynomial:
    factors = []
    for part, pos in _split(text, ";"):
        if not part.strip():
            raise ParseError("empty factor", text, pos)
        m = _FACTOR.fullmatch(part)
        if not m:
            raise ParseError("expected '(root,multiplicity)'", text, pos + len(part) - len(part.lstrip()))
        inner, inner_pos = m.group(1), pos + m.start(1)
        if inner.count(",") != 1:
            raise ParseError("expected exactly one ',' inside a factor", text, inner_pos)
        root_txt, mult_txt = inner.split(",")
        root = parse_complex(root_txt, text, inner_pos)
        mpos = inner_pos + len(root_txt) + 1
        if not re.fullmatch(r"\s*\d+\s*", mult_txt) or int(mult_txt) < 1:
            raise ParseError("multiplicity must be a positive integer", text,
                             mpos + len(mult_txt) - len(mult_txt.lstrip()))
        factors.append((root, int(mult_txt)))
    return FactoredPolynomial(1.0, tuple(factors))


def parse_size(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", text)
    if not m:
        raise ParseError("size must look like WIDTHxHEIGHT", text, 0)
    return int(m.group(1)), int(m.group(2))


def parse_affine(text: str) -> AffineMap:
    """``a,b`` for ``z -> a z + b``."""
    parts = list(_split(text, ","))
    if len(parts) != 2:
        raise ParseError("affine map must be 'a,b'", text, 0)
    a = parse_complex(parts[0][0], text, parts[0][1])
    b = parse_complex(parts[1][0], text, parts[1][1])
    if a == 0:
        raise ParseError("affine map needs a nonzero linear coefficient", text, parts[0][1])
    return AffineMap(a, b)


# --------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class JobConfig:
    coeffs: str | None = None
    roots: str | None = None
    method: str = "chebyshev"
    center: str | None = None
    half_extent: float | None = None
    size: str = "600x600"
    max_iter: int = 200
    tol: float = 1e-8
    out: str | None = None
    json: str | None = None
    seed: int = 0
    jobs: int = 1
    affine: str | None = None
    lam: str | None = None
    max_order: int = 12

    def polynomial(self):
        if (self.coeffs is None) == (self.roots is None):
            raise ParseError("give exactly one of --coeffs or --roots")
        if self.coeffs is not None:
            if self.coeffs.lstrip().startswith("("):
                raise ParseError("--coeffs expects 'a0,a1,...'; use --roots for factors", self.coeffs, 0)
            return parse_polynomial(self.coeffs)
        if not self.roots.lstrip().startswith("("):
            raise ParseError("--roots expects '(root,mult);...'", self.roots, 0)
        return parse_polynomial(self.roots)

    def validate(self) -> "JobConfig":
        if self.method not in (MethodKind.CHEBYSHEV.value, MethodKind.NEWTON.value):
            raise ParseError(f"unknown method {self.method!r}")
        for name in ("max_iter", "tol", "jobs", "max_order"):
            if not getattr(self, name) > 0:
                raise ParseError(f"{name.replace('_', '-')} must be positive")
        if self.half_extent is not None and not self.half_extent > 0:
            raise ParseError("half-extent must be positive")
        w, h = parse_size(self.size)
        if w < 16 or h < 16:
            raise ParseError("size must be at least 16x16", self.size, 0)
        self.polynomial()
        return self


_FIELD_TYPES = {f.name: f.type for f in fields(JobConfig)}
_CONVERT = {"int": int, "float": float, "float | None": float}


def _coerce(key: str, value: str):
    kind = _FIELD_TYPES[key]
    conv = _CONVERT.get(kind, str)
    try:
        return conv(value)
    except ValueError:
        raise ParseError(f"bad value for {key}: {value!r}") from None


def read_config_file(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read config file {path}: {exc.strerror}") from None
    out = {}
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{n}: expected 'key = value'", raw, 0)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise ParseError(f"{path}:{n}: unknown key {key!r}", raw, 0)
        out[key] = _coerce(key, value)
    return out


def make_config(args: argparse.Namespace) -> JobConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for name in _FIELD_TYPES:
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    return JobConfig(**values).validate()


# --------------------------------------------------------------------------
# JSON output

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == 0:
        return "0"
    return format(x, ".17g")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        if is_infinite(z):
            return '"inf"'
        return f"[{_fmt_float(z.real)}, {_fmt_float(z.imag)}]"
    if isinstance(obj, str):
        import json
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        import json
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON: insertion-ordered keys, floats to 17 significant
    digits, complex numbers as ``[re, im]``."""
    return _encode(obj, indent, 0) + "\n"


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# --------------------------------------------------------------------------
# analysis

def _grid_for(cfg: JobConfig, bundle) -> GridSpec:
    w, h = parse_size(cfg.size)
    grid = default_grid(bundle, w, h)
    center = grid.center if cfg.center is None else parse_complex(cfg.center)
    half = grid.half_extent if cfg.half_extent is None else cfg.half_extent
    return GridSpec(center, half, w, h)


def _input_echo(cfg: JobConfig, p: Polynomial) -> dict:
    return {
        "text": cfg.coeffs if cfg.coeffs is not None else cfg.roots,
        "form": "coefficients" if cfg.coeffs is not None else "factored",
        "coefficients": [complex(c) for c in p.coeffs],
        "degree": p.degree,
        "method": cfg.method,
    }


def _fixed_point_table(records) -> list:
    return [{
        "location": r.location,
        "at_infinity": r.at_infinity,
        "multiplier": r.multiplier,
        "abs_multiplier": abs(r.multiplier),
        "kind": r.kind,
        "extraneous": r.extraneous,
        "source": r.source,
        "multiplicity": r.multiplicity,
    } for r in records]


def seeded_affine(seed: int) -> tuple[AffineMap, complex]:
    rng = np.random.default_rng(seed)
    u = rng.uniform(-1, 1, 6)
    a = complex(0.5 + abs(u[0]), u[1])
    b = complex(u[2], u[3])
    lam = complex(0.5 + abs(u[4]), u[5])
    return AffineMap(a, b), lam


def _raster(cfg: JobConfig, bundle, att):
    grid = _grid_for(cfg, bundle)
    return compute_basins(bundle, att, grid, cfg.max_iter, cfg.tol, n_jobs=cfg.jobs)


def _raster_stats(raster) -> dict:
    lab = raster.labels
    counts = [int(np.count_nonzero(lab == k)) for k in range(len(raster.attractors))]
    conv = lab != NONCONV
    return {
        "attractors": list(raster.attractors),
        "pixels_per_attractor": counts,
        "nonconverged_fraction": float(np.count_nonzero(~conv)) / lab.size,
        "mean_iterations": float(raster.iters[conv].mean()) if conv.any() else None,
        "max_iter": raster.max_iter,
        "tol": raster.tol,
    }


def _grid_dict(grid: GridSpec) -> dict:
    return {"center": complex(grid.center), "half_extent": float(grid.half_extent),
            "width": grid.width, "height": grid.height}


def _symmetry_dict(p, raster, max_order) -> dict:
    rep = symmetry_report(p, raster, max_order)
    return {
        "poly_group_order": rep.poly_group.order,
        "poly_group_center": complex(rep.poly_group.center),
        "julia_group_order": rep.julia_group_order,
        "julia_mismatch_rate": rep.julia_mismatch_rate,
        "julia_order_multiple_of_poly_order": rep.julia_group_order % rep.poly_group.order == 0,
        "exploratory": rep.exploratory,
        "line_residual": rep.line_residual,
        "is_line": is_line(rep.line_residual),
        "translation_suspected": rep.translation_suspected,
        "rotation_scan": [{
            "order": m,
            "band_mismatch": band_mis,
            "label_mismatch": label_mis,
        } for m, (band_mis, label_mis) in
            ((m, rotation_mismatch(raster, rep.poly_group.center, m)) for m in range(2, max_order + 1))],
    }


def _connectivity_dict(bundle, raster) -> dict:
    rep = connectivity(raster, [w for w, _ in bundle.map.poles])
    return {
        "julia_component_count": rep.julia_component_count,
        "raw_component_count": rep.raw_component_count,
        "unbounded_component_exists": rep.unbounded_component_exists,
        "poles_in_unbounded": rep.poles_in_unbounded,
        "connected": rep.julia_component_count == 1 and rep.poles_in_unbounded,
        "immediate_basins_unbounded": list(rep.immediate_basins_unbounded),
        "unbounded_fatou_components": len(unbounded_components(raster)),
        "noise_threshold_pixels": rep.noise_threshold_pixels,
        "resolution": list(rep.resolution),
    }


def build_analysis(cfg: JobConfig) -> dict:
    p_in = cfg.polynomial()
    p = p_in.expand() if isinstance(p_in, FactoredPolynomial) else p_in
    bundle = build_method(p, cfg.method)
    records = fixed_points(bundle)
    att = attractors(records)
    crit = postcritical_classify(bundle, att, max_iter=500, tol=cfg.tol)
    norm = normalize(p)
    T, lam = seeded_affine(cfg.seed)
    raster = _raster(cfg, bundle, att)
    report = {
        "schema": SCHEMA_VERSION,
        "input": _input_echo(cfg, p),
        "map_degree": map_degree(bundle),
        "map_numerator": [complex(c) for c in bundle.map.num.coeffs],
        "map_denominator": [complex(c) for c in bundle.map.den.coeffs],
        "centroid": centroid(p),
        "normalization": {
            "g": [complex(c) for c in norm.g.coeffs],
            "T": {"a": complex(norm.T.a), "b": complex(norm.T.b)},
            "lambda": complex(norm.lam),
        },
        "roots": [{"location": r, "multiplicity": m} for r, m in roots(p)],
        "fixed_points": _fixed_point_table(records),
        "multiplier_at_infinity": multiplier_at_infinity(bundle),
        "critical_points": [{
            "location": c.critical_point,
            "multiplicity": c.multiplicity,
            "verdict": c.verdict,
            "attractor": None if c.attractor is None else att[c.attractor],
            "steps": c.steps,
        } for c in crit],
        "grid": _grid_dict(raster.grid),
        "symmetry": _symmetry_dict(p, raster, cfg.max_order),
        "connectivity": _connectivity_dict(bundle, raster),
        "scaling": {
            "T": {"a": complex(T.a), "b": complex(T.b)},
            "lambda": lam,
            "residual": conjugacy_residual(p, T, lam, 100, cfg.method, cfg.seed),
        },
    }
    return report


def build_basins(cfg: JobConfig) -> tuple[bytes, dict]:
    p_in = cfg.polynomial()
    p = p_in.expand() if isinstance(p_in, FactoredPolynomial) else p_in
    bundle = build_method(p, cfg.method)
    att = attractors(fixed_points(bundle))
    raster = _raster(cfg, bundle, att)
    image = render_ppm(raster, default_palette(len(att)))
    sidecar = {
        "schema": SCHEMA_VERSION,
        "input": _input_echo(cfg, p),
        "grid": _grid_dict(raster.grid),
        "raster": _raster_stats(raster),
        "connectivity": _connectivity_dict(bundle, raster),
        "symmetry": _symmetry_dict(p, raster, cfg.max_order),
    }
    return image, sidecar


def build_symmetry(cfg: JobConfig) -> dict:
    p_in = cfg.polynomial()
    p = p_in.expand() if isinstance(p_in, FactoredPolynomial) else p_in
    bundle = build_method(p, cfg.method)
    att = attractors(fixed_points(bundle))
    raster = _raster(cfg, bundle, att)
    S = poly_symmetry_group(p)
    return {
        "schema": SCHEMA_VERSION,
        "input": _input_echo(cfg, p),
        "grid": _grid_dict(raster.grid),
        "symmetry": _symmetry_dict(p, raster, cfg.max_order),
        "poly_group_elements": [complex(g.a) for g in S.elements()],
    }


def build_scaling(cfg: JobConfig) -> dict:
    p_in = cfg.polynomial()
    p = p_in.expand() if isinstance(p_in, FactoredPolynomial) else p_in
    if cfg.affine is None and cfg.lam is None:
        T, lam = seeded_affine(cfg.seed)
    else:
        T = parse_affine(cfg.affine) if cfg.affine is not None else AffineMap(1.0, 0.0)
        lam = parse_complex(cfg.lam) if cfg.lam is not None else 1.0
    if lam == 0:
        raise ParseError("lambda must be nonzero", cfg.lam or "", 0)
    residual = conjugacy_residual(p, T, lam, 100, cfg.method, cfg.seed)
    return {
        "schema": SCHEMA_VERSION,
        "input": _input_echo(cfg, p),
        "T": {"a": complex(T.a), "b": complex(T.b)},
        "lambda": complex(lam),
        "samples": 100,
        "residual": residual,
        "threshold": SCALING_PASS,
        "pass": residual < SCALING_PASS,
    }


def _c(z: complex) -> str:
    z = complex(z)
    if is_infinite(z):
        return "inf"
    z = complex(z.real + 0.0, z.imag + 0.0)  # no "-0"
    if abs(z.imag) <= 1e-14 * max(1.0, abs(z)):
        return f"{z.real:.10g}"
    return f"{z.real:.10g}{z.imag:+.10g}i"


def format_text_report(rep: dict) -> str:
    """Short human-readable summary of an analysis report."""
    lines = [f"polynomial degree {rep['input']['degree']}, method {rep['input']['method']}",
             f"map degree {rep['map_degree']}, centroid {_c(rep['centroid'])}",
             "fixed points:"]
    for f in rep["fixed_points"]:
        tag = "extraneous" if f["extraneous"] else ("infinity" if f["at_infinity"] else "root")
        lines.append(f"  {_c(f['location']):>28}  multiplier {_c(f['multiplier']):>28}  "
                     f"{f['kind']:<15} {tag}")
    lines.append("critical points:")
    for c in rep["critical_points"]:
        lines.append(f"  {_c(c['location']):>28}  x{c['multiplicity']}  {c['verdict']}")
    s = rep["symmetry"]
    lines.append(f"polynomial symmetry order {s['poly_group_order']}, "
                 f"detected Julia order {s['julia_group_order']} "
                 f"(mismatch {s['julia_mismatch_rate']:.4f})")
    lines.append(f"line residual {s['line_residual']:.4f}, "
                 f"translation suspected {s['translation_suspected']}")
    k = rep["connectivity"]
    lines.append(f"Julia components {k['julia_component_count']} "
                 f"(raw {k['raw_component_count']}), poles in unbounded component "
                 f"{k['poles_in_unbounded']}, resolution {k['resolution'][0]}x{k['resolution'][1]}")
    lines.append(f"scaling residual {rep['scaling']['residual']:.3e}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# commands

def cmd_analyze(cfg: JobConfig) -> int:
    _write_text(cfg.json or cfg.out, dumps(build_analysis(cfg)))
    return EXIT_OK


def cmd_basins(cfg: JobConfig) -> int:
    image, sidecar = build_basins(cfg)
    out = cfg.out or "basins.ppm"
    Path(out).write_bytes(image)
    _write_text(cfg.json or out + ".json", dumps(sidecar))
    return EXIT_OK


def cmd_symmetry(cfg: JobConfig) -> int:
    _write_text(cfg.json or cfg.out, dumps(build_symmetry(cfg)))
    return EXIT_OK


def cmd_scaling_check(cfg: JobConfig) -> int:
    rep = build_scaling(cfg)
    if cfg.json:
        _write_text(cfg.json, dumps(rep))
    verdict = "pass" if rep["pass"] else "FAIL"
    print(f"scaling residual {rep['residual']:.3e} ({verdict}, threshold {SCALING_PASS:g})")
    return EXIT_OK if rep["pass"] else EXIT_NUMERIC


def cmd_report(cfg: JobConfig) -> int:
    rep = build_analysis(cfg)
    if cfg.json:
        _write_text(cfg.json, dumps(rep))
    _write_text(cfg.out, format_text_report(rep))
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "basins": cmd_basins,
    "scaling-check": cmd_scaling_check,
    "symmetry": cmd_symmetry,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chebdyn", description="Dynamics of the Chebyshev root-finding iteration.")
    common = argparse.ArgumentParser(add_help=False)
    poly = common.add_argument_group("polynomial")
    poly.add_argument("--coeffs", help="coefficients a0,a1,...,ad (e.g. '-1,0,1')")
    poly.add_argument("--roots", help="factors (root,mult);... (e.g. '(1,3);(-1,3)')")
    common.add_argument("--method", choices=[m.value for m in MethodKind])
    common.add_argument("--center", help="viewport centre (complex literal)")
    common.add_argument("--half-extent", dest="half_extent", type=float)
    common.add_argument("--size", help="raster size WIDTHxHEIGHT (default 600x600)")
    common.add_argument("--max-iter", dest="max_iter", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--out", help="output path")
    common.add_argument("--json", help="JSON report path")
    common.add_argument("--config", help="key = value config file; flags take precedence")
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int, help="worker threads for raster tiles")
    common.add_argument("--max-order", dest="max_order", type=int)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="JSON analysis report")
    sub.add_parser("basins", parents=[common], help="PPM basin image plus JSON sidecar")
    sc = sub.add_parser("scaling-check", parents=[common], help="affine conjugacy residual")
    sc.add_argument("--affine", "--T", dest="affine", help="affine map 'a,b' for z -> a z + b")
    sc.add_argument("--lam", "--lambda", dest="lam", help="scale factor (complex literal)")
    sub.add_parser("symmetry", parents=[common], help="symmetry group evidence")
    sub.add_parser("report", parents=[common], help="plain-text summary")
    return parser


_VALUE_FLAGS = ("--coeffs", "--roots", "--center", "--affine", "--T", "--lam", "--lambda")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--coeffs -1,0,1`` into ``--coeffs=-1,0,1`` so argparse does not
    read the value as an option."""
    out, k = [], 0
    while k < len(argv):
        tok = argv[k]
        if tok in _VALUE_FLAGS and k + 1 < len(argv) and argv[k + 1].startswith("-") \
                and argv[k + 1][1:2] not in ("-", ""):
            out.append(f"{tok}={argv[k + 1]}")
            k += 2
            continue
        out.append(tok)
        k += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(args)
        return COMMANDS[args.command](cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PolynomialError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RootFindingError, UnreducedMapError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
