"""Command-line interface.

Subcommands: metric, distance, indicatrix, scale audit, boxlemma stress,
dominate, squeeze {cert,sweep}, verify-all.  Every flag can also be supplied
through an ``INVMET_``-prefixed environment variable (``INVMET_SEED``,
``INVMET_TOL``, ``INVMET_CONVENTION``, ``INVMET_OUT``, ``INVMET_WORKERS``,
``INVMET_DOMAIN``); an explicit flag always wins over the environment.

Exit codes: 0 on success, 1 when a verified property fails (a witness is
dumped to stderr as JSON), 2 on malformed input (the message names the
offending location).  Artifacts record the seed; CSV bodies contain no
timestamps, so reruns with the same seed are byte-identical.  Wall-clock time
appears only in the ``verify-all`` manifest.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import config
from .circularity import asymptotics_sweep, circularity_lower_bound, squeeze_lower_bound
from .core import cvector
from .domains import (
    AutomorphismFamily,
    ConvexPolyhedron,
    Domain,
    HalfPlaneProduct,
    Polydisc,
    UnitBall,
    _load_cvector,
)
from .errors import (
    CertificateError,
    EvaluationError,
    InvmetError,
    LemmaViolationError,
    ScheduleError,
    SpecLoadError,
)
from .metrics import indicatrix, kobayashi_distance, kobayashi_metric, write_indicatrix_csv
from .metrics import CONVENTIONS
from .sampling import SampleStream
from .scaling import default_schedule, equivalence_audit
from .domination import verify_convex_domination, verify_halfplane_domination
from .suites import box_stress_rows, verify_all
from .zoo import resolve_domain, zoo_names

_ENV_PREFIX = "INVMET_"


def _env(name: str, fallback=None):
    return os.environ.get(_ENV_PREFIX + name.upper(), fallback)


def _parse_vector(text: str, flag: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecLoadError(f"invalid JSON ({exc.msg})",
                            f"{flag} offset {exc.pos}")
    return _load_cvector(obj, flag)


def _parse_points(text: str, flag: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecLoadError(f"invalid JSON ({exc.msg})",
                            f"{flag} offset {exc.pos}")
    if not isinstance(obj, list) or not obj:
        raise SpecLoadError("expected a list of points", flag)
    return [_load_cvector(p, f"{flag}[{i}]") for i, p in enumerate(obj)]


def _radii_list(text: str, flag: str):
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise SpecLoadError("expected comma-separated numbers", flag)
    if not vals or any(r <= 0 for r in vals):
        raise SpecLoadError("radii must be positive", flag)
    return vals


def _meta_line(args, **extra) -> str:
    fields = {"seed": args.seed, "convention": args.convention,
              "version": config.VERSION, **extra}
    return "# " + " ".join(f"{k}={v}" for k, v in fields.items()) + "\n"


def _open_out(path):
    return open(path, "w") if path else sys.stdout


def _witness(message: str, payload) -> int:
    json.dump({"error": message, "witness": payload}, sys.stderr,
              default=str, sort_keys=True)
    sys.stderr.write("\n")
    return 1


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def cmd_metric(args) -> int:
    d = resolve_domain(args.domain)
    x = _parse_vector(args.at, "--at")
    v = _parse_vector(args.dir, "--dir")
    bound = kobayashi_metric(d, x, v, seed=args.seed)
    print(repr(bound.value))
    print(f"# bracket [{bound.lower!r}, {bound.upper!r}]"
          f" methods {bound.lower_method}|{bound.upper_method}"
          f" seed {args.seed}")
    tol = args.tol if args.tol is not None else config.MODEL_BRACKET_TOL
    if bound.width > tol and not bound.is_exact:
        print(f"# bracket width {bound.width!r} exceeds tol {tol!r}")
    return 0


def cmd_distance(args) -> int:
    d = resolve_domain(args.domain)
    x = _parse_vector(args.frm, "--from")
    y = _parse_vector(args.to, "--to")
    kw = {}
    if args.tol is not None:
        kw["tol"] = args.tol
    bound = kobayashi_distance(d, x, y, convention=args.convention,
                               seed=args.seed, **kw)
    print(repr(bound.value))
    print(f"# bracket [{bound.lower!r}, {bound.upper!r}]"
          f" methods {bound.lower_method}|{bound.upper_method}"
          f" convention {args.convention} seed {args.seed}")
    return 0


def cmd_indicatrix(args) -> int:
    d = resolve_domain(args.domain)
    x = _parse_vector(args.at, "--at")
    sample = indicatrix(d, x, directions=args.directions,
                        convexify=args.convexify, seed=args.seed)
    fh = _open_out(args.out)
    try:
        fh.write(_meta_line(args, directions=args.directions,
                            method="bracket-radial"))
        write_indicatrix_csv(sample, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    lo = float(np.min(sample.radius_lower))
    hi = float(np.max(sample.radius_upper))
    print(f"# {args.directions} directions, radius range"
          f" [{lo!r}, {hi!r}] seed {args.seed}")
    return 0


_FAMILY_KINDS = {"ball": UnitBall, "polydisc": Polydisc,
                 "halfplane": HalfPlaneProduct}


def cmd_scale_audit(args) -> int:
    d = resolve_domain(args.domain)
    kind = _FAMILY_KINDS[args.family]
    if not isinstance(d, kind):
        raise SpecLoadError(
            f"{args.family} needs a {kind.__name__} domain, "
            f"got {type(d).__name__}", "--family")
    target = _parse_vector(args.target, "--target")
    fam = AutomorphismFamily(d, target)
    report = equivalence_audit(d, fam, d.basepoint,
                               default_schedule(args.steps), seed=args.seed,
                               grid_size=args.grid)
    tol = args.tol if args.tol is not None else config.GRID_EQUIVALENCE_TOL
    for rec in report.records:
        print(f"step {rec.index}: parameter={rec.parameter!r}"
              f" margin={rec.boundary_margin!r} det={rec.det_abs!r}"
              f" c2/c1={(rec.c2 / rec.c1)!r} sup_diff={rec.sup_grid_diff!r}"
              f" [frame|svd]")
    if args.out:
        Path(args.out).write_text(report.to_json(indent=2) + "\n")
    ok = report.bounded and report.max_sup_diff <= tol
    print(f"max det={report.max_det_abs!r}"
          f" max distortion={report.max_distortion_ratio!r}"
          f" max sup_diff={report.max_sup_diff!r} -> "
          + ("PASS" if ok else "FAIL"))
    if not ok:
        worst = max(report.records, key=lambda r: r.sup_grid_diff)
        return _witness("scaling equivalence audit failed",
                        {"step": worst.index, "sup_diff": worst.sup_grid_diff,
                         "det_abs": worst.det_abs})
    return 0


def cmd_boxlemma_stress(args) -> int:
    rows, failures, slope_excess = box_stress_rows(args.dim, args.instances,
                                                   args.seed)
    fh = _open_out(args.out)
    try:
        fh.write(_meta_line(args, dim=args.dim, instances=args.instances,
                            method="cascade-exact-vertices"))
        fh.write("instance,r_1,slack\n")
        for inst, r1, slack in rows:
            fh.write(f"{inst},{r1!r},{slack!r}\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.dim == 2 and slope_excess > config.SLOPE_BOUND_TOL:
        failures.append({"dim": 2, "slope_excess": slope_excess})
    if failures:
        return _witness("box containment violated", failures)
    print(f"# {args.instances} instances in dimension {args.dim}: "
          f"zero violations (seed {args.seed})")
    return 0


def cmd_dominate(args) -> int:
    d = resolve_domain(args.domain)
    radii = _radii_list(args.radii, "--radii")
    if isinstance(d, HalfPlaneProduct):
        profile = verify_halfplane_domination((0.1, 1.0, 10.0), radii,
                                              args.samples, seed=args.seed,
                                              convention=args.convention)
        method = "apollonius-exact"
    else:
        if args.points == "auto":
            stream = SampleStream(args.seed).fork(555)
            xs = [d.basepoint] + list(d.interior_samples(2, stream))
        else:
            xs = _parse_points(args.points, "--points")
        tol = args.tol if args.tol is not None else config.DOMINATION_TOL
        profile = verify_convex_domination(d, xs, radii, args.samples,
                                           seed=args.seed,
                                           convention=args.convention, tol=tol)
        method = "certified-sampling"
    payload = {"seed": args.seed, "version": config.VERSION, "method": method,
               "profile": profile.to_dict()}
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"# worst gauge/claimed ratio {profile.worst_ratio!r} -> "
          + ("PASS" if profile.passed else "FAIL"))
    if not profile.passed:
        bad = [c for c in profile.cells
               if c.worst_gauge > c.claimed_bound * (1 + profile.tolerance)]
        return _witness("domination bound violated", [
            {"radius": c.radius, "worst_gauge": c.worst_gauge,
             "claimed": c.claimed_bound} for c in bad])
    return 0


def cmd_squeeze_cert(args) -> int:
    d = resolve_domain(args.domain)
    x = _parse_vector(args.at, "--at")
    if args.model == "ball":
        model = UnitBall(d.dim)
    else:
        model = Polydisc(np.ones(d.dim))
    cert = squeeze_lower_bound(d, x, model, seed=args.seed)
    check = cert.validate(args.samples, seed=args.seed + 1)
    cb = circularity_lower_bound(d, x, [cert])
    payload = {"seed": args.seed, "version": config.VERSION,
               "embedding": cert.description, "r": cert.inner_r,
               "R": cert.outer_R, "ratio": cert.ratio, "c_bound": cb.bound,
               "c_provenance": cb.provenance, "validated": check.passed,
               "worst_outer_gauge": check.worst_outer_gauge,
               "worst_inner_margin": check.worst_inner_margin,
               "notes": {k: str(v) for k, v in cert.notes.items()}}
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if not check.passed:
        return _witness("squeeze certificate failed validation", payload)
    return 0


def cmd_squeeze_sweep(args) -> int:
    d = resolve_domain(args.domain)
    if not isinstance(d, ConvexPolyhedron):
        raise SpecLoadError("squeeze sweep needs a polyhedral domain, got "
                            + type(d).__name__, "--domain")
    corner = _parse_vector(args.corner, "--corner")
    report = asymptotics_sweep(d, corner, args.steps,
                               threshold=args.threshold)
    fh = _open_out(args.out)
    try:
        fh.write(_meta_line(args, steps=args.steps,
                            method="pipeline-bisection"))
        report.to_csv(fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    print(f"# final ratio {report.final_ratio!r} after {args.steps} steps"
          f" (c >= {report.rows[-1].c_bound!r})")
    if args.threshold is not None and not report.threshold_met:
        return _witness("sweep final ratio below threshold",
                        {"final_ratio": report.final_ratio,
                         "threshold": args.threshold})
    return 0


def cmd_verify_all(args) -> int:
    out_dir = args.out if args.out else "invmet-verify"
    rep = verify_all(args.seed, out_dir, args.workers,
                     convention=args.convention)
    for name, res in rep.results.items():
        print(f"{name}: {'PASS' if res.passed else 'FAIL'}"
              f" ({len(res.rows)} rows)")
    print(f"manifest: {rep.out_dir / 'manifest.json'}"
          f" (wall {rep.manifest['wall_time']:.2f}s, seed {args.seed})")
    if not rep.passed:
        fails = {name: res.failures for name, res in rep.results.items()
                 if not res.passed}
        return _witness("verification suite failed", fails)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, domain: bool = True):
    if domain:
        p.add_argument("--domain", default=_env("domain"), required=_env("domain") is None,
                       help="zoo name, JSON file path, or inline JSON")
    p.add_argument("--seed", type=int, default=int(_env("seed", 0)))
    p.add_argument("--tol", type=float,
                   default=(float(_env("tol")) if _env("tol") else None))
    p.add_argument("--convention", choices=list(CONVENTIONS),
                   default=_env("convention", "standard"))
    p.add_argument("--out", default=_env("out"))
    p.add_argument("--workers", type=int, default=int(_env("workers", 1)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invmet",
        description="Certified invariant-metric computations on convex domains.",
        epilog="Environment defaults: INVMET_SEED, INVMET_TOL, "
               "INVMET_CONVENTION, INVMET_OUT, INVMET_WORKERS, INVMET_DOMAIN "
               "(explicit flags win).  Bundled domains: "
               + ", ".join(zoo_names()) + ".")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="metric bracket at a point/direction")
    _add_common(p)
    p.add_argument("--at", required=True)
    p.add_argument("--dir", required=True)
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("distance", help="distance bracket between two points")
    _add_common(p)
    p.add_argument("--from", dest="frm", required=True)
    p.add_argument("--to", required=True)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("indicatrix", help="radial indicatrix profile as CSV")
    _add_common(p)
    p.add_argument("--at", required=True)
    p.add_argument("--directions", type=int, default=256)
    p.add_argument("--convexify", action="store_true")
    p.set_defaults(func=cmd_indicatrix)

    p = sub.add_parser("scale", help="rescaling audits")
    scale_sub = p.add_subparsers(dest="subcommand", required=True)
    pa = scale_sub.add_parser("audit", help="tau vs A^-1 sigma along a schedule")
    _add_common(pa)
    pa.add_argument("--family", choices=sorted(_FAMILY_KINDS), required=True)
    pa.add_argument("--target", required=True)
    pa.add_argument("--steps", type=int, default=20)
    pa.add_argument("--grid", type=int, default=100)
    pa.set_defaults(func=cmd_scale_audit)

    p = sub.add_parser("boxlemma", help="symmetric box bounds")
    box_sub = p.add_subparsers(dest="subcommand", required=True)
    pb = box_sub.add_parser("stress", help="random polytope stress battery")
    _add_common(pb, domain=False)
    pb.add_argument("--dim", type=int, required=True)
    pb.add_argument("--instances", type=int, default=500)
    pb.set_defaults(func=cmd_boxlemma_stress)

    p = sub.add_parser("dominate", help="distance-ball domination profile")
    _add_common(p)
    p.add_argument("--radii", required=True,
                   help="comma-separated list, e.g. 0.25,0.5,1")
    p.add_argument("--points", default="auto",
                   help="'auto' or JSON list of points")
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(func=cmd_dominate)

    p = sub.add_parser("squeeze", help="squeeze certificates")
    sq_sub = p.add_subparsers(dest="subcommand", required=True)
    pc = sq_sub.add_parser("cert", help="identity-translate certificate")
    _add_common(pc)
    pc.add_argument("--at", required=True)
    pc.add_argument("--model", choices=("polydisc", "ball"),
                    default="polydisc")
    pc.add_argument("--samples", type=int, default=10_000)
    pc.set_defaults(func=cmd_squeeze_cert)
    ps = sq_sub.add_parser("sweep", help="corner asymptotics sweep")
    _add_common(ps)
    ps.add_argument("--corner", required=True)
    ps.add_argument("--steps", type=int, default=12)
    ps.add_argument("--threshold", type=float, default=None)
    ps.set_defaults(func=cmd_squeeze_sweep)

    p = sub.add_parser("verify-all", help="run every suite, write CSVs + manifest")
    _add_common(p, domain=False)
    p.set_defaults(func=cmd_verify_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LemmaViolationError, ScheduleError, CertificateError,
            EvaluationError) as exc:
        payload = getattr(exc, "witness", None)
        if payload is None:
            payload = {"index": getattr(exc, "index", None)}
        return _witness(str(exc), payload)
    except SpecLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvmetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
