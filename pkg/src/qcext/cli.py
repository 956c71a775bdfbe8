"""Command-line front end: ``qcext <subcommand> ...``.

Exit codes: 0 success, 2 usage or bad input, 3 numerical failure,
4 verification failure.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import bounds as B
from . import verify as V
from .errors import InvalidInputError, InvalidParameterError, NumericalError, ParseError
from .extensions import (
    PolarGrid,
    builtin_circle_map,
    circle_map_from_csv,
    distortion_field,
    exact_beltrami,
    numerical_beltrami,
    power_extend,
    radial_extend,
)
from .geometry import JordanCurve
from .modulus import RingDomain, read_pgm, ring_modulus, write_pgm
from .roundness import roundness
from .sharp_examples import EllipticGerm, WedgeMap, g3_inverse_linear
from .svg import curve_svg, curves_svg, heatmap_svg

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4

DEFAULTS = {"grid_n": 512, "N": 1024, "out": ".", "format": None, "tol": None}
SVG_LIMIT = 2 * 1024 * 1024


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration


def _pow2(n):
    return n > 0 and n & (n - 1) == 0


def read_config(path):
    """Flat key=value file; blank lines and lines starting with # are ignored."""
    conf = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e}") from None
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, eq, val = line.partition("=")
        if not eq or not key.strip():
            raise ParseError(f"expected key=value, got {line!r}", lineno)
        conf[key.strip()] = val.strip()
    return conf


def resolve_config(args):
    """Flags win over the config file, which wins over the defaults."""
    conf = read_config(args.config) if getattr(args, "config", None) else {}
    out = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            out[key] = flag
        elif key in conf:
            out[key] = conf[key]
        else:
            out[key] = default
    try:
        out["grid_n"] = int(out["grid_n"])
        out["N"] = int(out["N"])
        if out["tol"] is not None:
            out["tol"] = float(out["tol"])
    except ValueError as e:
        raise UsageError(f"bad numeric setting: {e}") from None
    if not (_pow2(out["grid_n"]) and 64 <= out["grid_n"] <= 4096):
        raise UsageError("grid_n must be a power of two in [64, 4096]")
    if not (_pow2(out["N"]) and 256 <= out["N"] <= 16384):
        raise UsageError("N must be a power of two in [256, 16384]")
    if isinstance(out["format"], str):
        out["format"] = [f.strip() for f in out["format"].split(",") if f.strip()]
        bad = set(out["format"]) - {"json", "csv", "svg"}
        if bad:
            raise UsageError(f"unknown format(s): {', '.join(sorted(bad))}")
    return out


def _thread_limit():
    raw = os.environ.get("QCG_THREADS")
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"QCG_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("QCG_THREADS must be >= 1")
    return n


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_default)


def _default(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(type(x).__name__)


def _outdir(conf):
    d = Path(conf["out"])
    d.mkdir(parents=True, exist_ok=True)
    return d


def _want(conf, fmt, default):
    formats = conf["format"] if conf["format"] is not None else default
    return fmt in formats


def _write_svg(path, text):
    if len(text.encode()) > SVG_LIMIT:
        raise NumericalError(f"SVG {path} would exceed 2 MB")
    path.write_text(text)


# ---------------------------------------------------------------------------
# subcommands


def _load_map(spec, n):
    p = Path(spec)
    if spec.endswith(".csv") or p.is_file():
        try:
            text = p.read_text()
        except OSError as e:
            raise InvalidInputError(f"cannot read {spec}: {e}") from None
        return circle_map_from_csv(text)
    return builtin_circle_map(spec, n)


def cmd_extend(args, conf):
    f = _load_map(args.map, conf["N"])
    G = radial_extend(f) if args.kind == "radial" else power_extend(f)
    grid = PolarGrid(args.rmin, args.rmax, args.nr, args.ntheta)
    measured = distortion_field(numerical_beltrami(G, grid))
    # files carry the closed-form coefficient; the FD measurement is reported next to it
    field = exact_beltrami(G, grid)
    dist = distortion_field(field)
    d = _outdir(conf)
    files = []
    if _want(conf, "csv", ["csv", "svg"]):
        with open(d / "beltrami.csv", "w", newline="") as fh:
            field.to_csv(fh)
        with open(d / "distortion.csv", "w", newline="") as fh:
            fh.write("r,theta,K\r\n")
            R, T = grid.mesh()
            for r, t, k in zip(R.ravel(), T.ravel(), dist.values.ravel()):
                fh.write(f"{r!r},{t!r},{float(k)!r}\r\n")
        files += ["beltrami.csv", "distortion.csv"]
    if _want(conf, "svg", ["csv", "svg"]):
        _write_svg(d / "distortion.svg",
                   heatmap_svg(grid.radii, grid.thetas, dist.values, f"K, {args.kind} {args.map}"))
        files.append("distortion.svg")
    report = {
        "kind": args.kind,
        "map": args.map,
        "sup_K": dist.sup,
        "measured_sup_K": measured.sup,
        "argmax": dist.argmax,
        "radial_predicted": max(f.L, 1 / f.ell),
        "files": files,
    }
    try:
        report["lf_bound"] = B.thmLf_bound(*B.thmLf_inputs(f))
    except InvalidParameterError as e:
        report["lf_bound"] = None
        report["lf_note"] = str(e)
    print(_dump(report))
    return EXIT_OK


def _load_curve(spec, n):
    name, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        vals = [float(a) for a in args]
    except ValueError:
        vals = None
    if name == "circle" and vals and len(vals) == 1:
        return JordanCurve.circle(0j, vals[0], n)
    if name == "offset-circle" and vals and len(vals) == 2:
        return JordanCurve.circle(complex(vals[0]), vals[1], n)
    if name == "elliptic" and vals and len(vals) == 2:
        return EllipticGerm(vals[0]).level_curve(vals[1], n)
    p = Path(spec)
    if not p.is_file():
        raise InvalidInputError(f"curve spec {spec!r}: use circle:r, offset-circle:c:t, "
                                "elliptic:a:r or a JSON polyline file")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"bad JSON: {e.msg}", e.lineno) from None
    pts = data.get("points", data) if isinstance(data, dict) else data
    try:
        z = np.array([complex(x, y) for x, y in pts])
    except (TypeError, ValueError):
        raise ParseError("polyline must be a list of [x, y] pairs") from None
    return JordanCurve(z).require_simple()


def cmd_roundness(args, conf):
    gamma = _load_curve(args.curve, conf["N"])
    gamma.require_simple()
    rep = roundness(gamma, grid_n=conf["grid_n"])
    d = _outdir(conf)
    out = rep.to_dict()
    out["curve"] = args.curve
    if _want(conf, "json", ["json", "svg"]):
        (d / "roundness.json").write_text(_dump(out) + "\n")
    if _want(conf, "svg", ["json", "svg"]):
        _write_svg(d / "roundness.svg", curve_svg(gamma, rep.center, rep.ell, rep.L, f"nu = {rep.nu:.6g}"))
    print(_dump(out))
    return EXIT_OK


def _load_domain(args):
    if args.mask:
        mask = read_pgm(args.mask)
        if args.extent is None:
            raise InvalidInputError("--mask needs --extent x0,x1,y0,y1")
        try:
            ext = tuple(float(v) for v in args.extent.split(","))
        except ValueError:
            raise InvalidInputError("--extent must be four numbers") from None
        if len(ext) != 4:
            raise InvalidInputError("--extent must be four numbers")
        return RingDomain(None, mask=mask, extent=ext)
    name, _, rest = args.domain.partition(":")
    try:
        vals = [float(v) for v in rest.split(":")] if rest else []
    except ValueError:
        raise InvalidInputError(f"bad domain spec {args.domain!r}") from None
    if name == "annulus" and len(vals) in (1, 2):
        return RingDomain.annulus(*vals)
    if name == "grotzsch" and len(vals) == 1:
        return RingDomain.grotzsch(vals[0])
    if name == "disk-minus-disk" and len(vals) == 2:
        return RingDomain.disk_minus_disk(vals[0], vals[1])
    if name == "curve":
        return RingDomain.from_curve(_load_curve(rest, 1024))
    raise InvalidInputError(f"unknown domain {args.domain!r}: use annulus:r[:R], grotzsch:r, "
                            "disk-minus-disk:c:t or curve:<curve spec>")


def cmd_modulus(args, conf):
    dom = _load_domain(args)
    est = ring_modulus(dom, grid_n=conf["grid_n"], refine=not args.no_refine)
    out = est.to_dict()
    out["domain"] = args.domain if not args.mask else args.mask
    d = _outdir(conf)
    if args.pgm:
        write_pgm(d / args.pgm, dom.mask_at(conf["grid_n"]))
    if _want(conf, "json", ["json"]):
        (d / "modulus.json").write_text(_dump(out) + "\n")
    print(_dump(out))
    return EXIT_OK


def _parse_params(extra):
    params = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--"):
            raise UsageError(f"unexpected argument {tok!r}")
        key, eq, val = tok[2:].partition("=")
        if not eq:
            if i + 1 >= len(extra):
                raise UsageError(f"--{key} needs a value")
            val = extra[i + 1]
            i += 1
        try:
            params[key] = float(val)
        except ValueError:
            raise UsageError(f"--{key} expects a number, got {val!r}") from None
        i += 1
    return params


def cmd_bounds(args, conf, extra):
    if args.formula not in B.FORMULAS:
        raise UsageError(f"unknown formula {args.formula!r}; choose from {', '.join(B.FORMULAS)}")
    params = _parse_params(extra)
    if args.batch:
        try:
            text = Path(args.batch).read_text()
        except OSError as e:
            raise InvalidInputError(f"cannot read {args.batch}: {e}") from None
        sys.stdout.write(B.evaluate_batch(args.formula, text))
        return EXIT_OK
    if args.sweep:
        parts = args.sweep.split(":")
        try:
            name, lo, hi, num = parts[0], float(parts[1]), float(parts[2]), int(parts[3])
        except (IndexError, ValueError):
            raise UsageError("--sweep expects name:start:stop:count") from None
        if lo > 0 and hi > 0:
            values = np.geomspace(lo, hi, num)
        else:
            values = np.linspace(lo, hi, num)
        text = B.sweep(args.formula, params, name, values)
        if _want(conf, "csv", []):
            (_outdir(conf) / f"sweep_{args.formula}.csv").write_text(text)
        sys.stdout.write(text)
        return EXIT_OK
    value = B.evaluate(args.formula, params)
    print(_dump({"formula": args.formula, "params": params, "bound": value}))
    return EXIT_OK


def cmd_glue(args, conf):
    G = V.standard_glue(args.K0, args.inner, args.outer, args.beta)
    grid = PolarGrid(0.05, 0.95, 256, 256)
    dist = distortion_field(numerical_beltrami(G, grid))
    seam = G.report["seams"][0]
    out = {
        "K0": args.K0,
        "annulus": [args.inner, args.outer],
        "patch_exponent": args.beta,
        "max_jump": G.report["max_jump"],
        "Q": seam["Q"],
        "Q_prime": seam["Q_prime"],
        "measured_sup_K": dist.sup,
        "sepinmod_bound": B.sepinmod_bound(args.K0, seam["Q"]),
        "lemma56_bound": B.lemma56_bound(args.K0, seam["Q"], seam["Q_prime"]),
    }
    d = _outdir(conf)
    if _want(conf, "json", ["json", "svg"]):
        (d / "glue.json").write_text(_dump(out) + "\n")
    if _want(conf, "svg", ["json", "svg"]):
        _write_svg(d / "glue.svg", heatmap_svg(grid.radii, grid.thetas, dist.values, "K of glued map"))
    print(_dump(out))
    return EXIT_OK


def cmd_example(args, conf):
    d = _outdir(conf)
    if args.name == "elliptic":
        g = EllipticGerm(args.a)
        radii = [g.r0 + (1 - g.r0) * s for s in (0.1, 0.3, 0.5, 0.7, 0.9)]
        (d / "elliptic_levels.json").write_text(g.level_curves_json(radii) + "\n")
        if _want(conf, "svg", ["json", "svg"]):
            curves = [g.level_curve(r, 512) for r in radii]
            _write_svg(d / "elliptic_levels.svg", curves_svg(curves, f"level curves, a = {args.a:g}"))
        out = {"a": g.a, "r0": g.r0, "r0_over_a": g.r0 / g.a, "levels": radii,
               "linear_K": g3_inverse_linear(g.r0).bound}
    elif args.name == "wedge":
        W = WedgeMap(args.epsilon)
        ts = [10.0, 100.0, 1000.0]
        out = {"epsilon": W.epsilon, "ratios": {repr(t): W.quasisymmetry_ratio(t) for t in ts}}
    else:
        raise UsageError(f"unknown example {args.name!r}")
    print(_dump(out))
    return EXIT_OK


def cmd_verify(args, conf):
    if args.suite not in V.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(V.SUITES)}")
    checks = V.run_suite(args.suite)
    out = {"suite": args.suite, "passed": all(c.passed for c in checks),
           "checks": [c.to_dict() for c in checks]}
    if conf["format"] and "json" in conf["format"]:
        (_outdir(conf) / f"verify_{args.suite}.json").write_text(_dump(out) + "\n")
    print(_dump(out))
    return EXIT_OK if out["passed"] else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file")
    common.add_argument("--grid-n", dest="grid_n", type=int, help="FD grid size (default 512)")
    common.add_argument("--N", dest="N", type=int, help="circle samples (default 1024)")
    common.add_argument("--out", help="output directory (default .)")
    common.add_argument("--format", help="comma list of json, csv, svg")
    common.add_argument("--tol", type=float, help="tolerance override")

    p = argparse.ArgumentParser(prog="qcext", description="Quasiconformal extension toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("extend", parents=[common], help="extend a circle map and measure distortion")
    e.add_argument("kind", choices=["radial", "power"])
    e.add_argument("--map", required=True, help="identity | sine:c | mobius:c | samples.csv")
    e.add_argument("--rmin", type=float, default=0.05)
    e.add_argument("--rmax", type=float, default=0.95)
    e.add_argument("--nr", type=int, default=128)
    e.add_argument("--ntheta", type=int, default=256)

    r = sub.add_parser("roundness", parents=[common], help="roundness of a Jordan curve")
    r.add_argument("--curve", required=True,
                   help="circle:r | offset-circle:c:t | elliptic:a:r | polyline.json")

    m = sub.add_parser("modulus", parents=[common], help="conformal modulus of a ring domain")
    m.add_argument("--domain", default="annulus:0.5",
                   help="annulus:r[:R] | grotzsch:r | disk-minus-disk:c:t | curve:<spec>")
    m.add_argument("--mask", help="PGM mask of the ring (white = ring)")
    m.add_argument("--extent", help="x0,x1,y0,y1 of the mask")
    m.add_argument("--pgm", help="also write the rasterized ring to this PGM file")
    m.add_argument("--no-refine", action="store_true", help="skip Richardson refinement")

    b = sub.add_parser("bounds", parents=[common], help="evaluate a distortion bound",
                       epilog="formula parameters are passed as --NAME VALUE")
    b.add_argument("formula", help=", ".join(B.FORMULAS))
    b.add_argument("--batch", help="CSV file of parameter rows")
    b.add_argument("--sweep", help="name:start:stop:count")

    g = sub.add_parser("glue", parents=[common], help="glue a core patch into f_K0")
    g.add_argument("--K0", type=float, default=2.0)
    g.add_argument("--inner", type=float, default=0.3)
    g.add_argument("--outer", type=float, default=0.9)
    g.add_argument("--beta", type=float, default=3.0)

    x = sub.add_parser("example", parents=[common], help="closed-form examples")
    x.add_argument("name", choices=["elliptic", "wedge"])
    x.add_argument("--a", type=float, default=0.5)
    x.add_argument("--epsilon", type=float, default=0.2)

    v = sub.add_parser("verify", parents=[common], help="run acceptance checks")
    v.add_argument("suite", nargs="?", default="all", help=", ".join(V.SUITES))
    return p


def main(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args, extra = parser.parse_known_args(argv)
    if extra and args.command != "bounds":
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        conf = resolve_config(args)
        threads = _thread_limit()
        handlers = {
            "extend": cmd_extend,
            "roundness": cmd_roundness,
            "modulus": cmd_modulus,
            "glue": cmd_glue,
            "example": cmd_example,
            "verify": cmd_verify,
        }
        with threadpool_limits(limits=threads):
            if args.command == "bounds":
                return cmd_bounds(args, conf, extra)
            return handlers[args.command](args, conf)
    except (UsageError, InvalidParameterError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
