"""Command-line interface.

Subcommands: harmonic, exit-moments, matrix, transform, verify, simulate,
alt-eliminate, self-test.  Output is canonical JSON (or a short pretty
form) so repeated runs are byte-identical.  Exit codes: 0 success,
2 validation/input failure, 3 check or assertion failure.  The CONE_LOG
environment variable (error, warn, info, debug) sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from fractions import Fraction

from .alt import eliminate_monomial
from .cones import ConeSpec, cone_from_slope, make_cone
from .diagnostics import self_test
from .drift import one_step_residual
from .errors import ConewalkError, ValidationError
from .exits import exit_position_moments, tau_moment_poly
from .harmonic import construct_harmonic
from .jsonio import (
    canonical_dumps,
    matrix_to_obj,
    moments_from_obj,
    poly_to_obj,
    walk_from_obj,
    walk_to_obj,
)
from .linsys import build_matrix
from .scalars import Backend, FloatBackend, backend_from_name, format_scalar, scalar_to_float
from .sim import SimConfig, sample_exit
from .walks import MomentTable, WalkSpec, builtin_walks, push_moments

log = logging.getLogger("conewalk")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CHECK = 3


def _setup_logging():
    level = {
        "error": logging.ERROR,
        "warn": logging.WARNING,
        "info": logging.INFO,
        "debug": logging.DEBUG,
    }.get(os.environ.get("CONE_LOG", "warn").lower(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}:{e.lineno}: invalid JSON: {e.msg}")


def _load_walk(name_or_path: str) -> WalkSpec:
    table = builtin_walks()
    if name_or_path in table:
        return table[name_or_path]
    return walk_from_obj(_load_json(name_or_path))


def _resolve_moments(args, order: int) -> MomentTable:
    if getattr(args, "moments", None):
        backend = backend_from_name(args.backend) if args.backend else None
        obj = _load_json(args.moments)
        if backend is None:
            from .scalars import RATIONAL

            backend = RATIONAL
        return moments_from_obj(obj, backend)
    if getattr(args, "walk", None):
        w = _load_walk(args.walk)
        mu = push_moments(w, order)
        if args.backend:
            backend = backend_from_name(args.backend)
            if isinstance(backend, FloatBackend):
                mu = MomentTable(
                    order=mu.order,
                    mu={k: backend.convert(v) for k, v in mu.mu.items()},
                    backend=backend,
                )
        return mu
    raise ValidationError("one of --moments or --walk is required")


def _resolve_cone(args) -> ConeSpec:
    backend = backend_from_name(args.backend) if getattr(args, "backend", None) else None
    if getattr(args, "m", None) is not None:
        return make_cone(args.m, backend)
    if getattr(args, "b", None) is not None:
        bk = backend or backend_from_name("rational")
        return cone_from_slope(bk.parse(args.b), bk)
    raise ValidationError("one of --m or --b is required")


def _emit(args, obj) -> None:
    if args.format == "pretty":
        text = _pretty(obj)
    else:
        text = canonical_dumps(obj)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pretty(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        return "".join(f"{pad}{k}:\n{_pretty(v, indent + 1)}" if isinstance(v, (dict, list))
                       else f"{pad}{k}: {v}\n" for k, v in obj.items())
    if isinstance(obj, list):
        return "".join(
            _pretty(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}\n" for v in obj
        )
    return f"{pad}{obj}\n"


def cmd_harmonic(args) -> int:
    mu = _resolve_moments(args, max(args.m, 2))
    res = construct_harmonic(args.m, mu)
    obj = {
        "m": res.m,
        "h": poly_to_obj(res.h),
        "correction": poly_to_obj(res.correction),
        "residual_max": res.residual.max_abs_float(),
        "boundary_ok": res.boundary_ok,
    }
    _emit(args, obj)
    return EXIT_OK


def cmd_exit_moments(args) -> int:
    cone = _resolve_cone(args)
    mu = _resolve_moments(args, max(2 * args.k, 2))
    if isinstance(cone.backend, FloatBackend) and not isinstance(mu.backend, FloatBackend):
        mu = MomentTable(
            order=mu.order,
            mu={k: cone.backend.convert(v) for k, v in mu.mu.items()},
            backend=cone.backend,
        )
    res = tau_moment_poly(args.k, cone, mu)
    obj = {"k": args.k, "G": poly_to_obj(res.G), "residual_max": res.residual.max_abs_float()}
    if args.at:
        x1s, x2s = args.at.split(",")
        backend = cone.backend
        with backend.workprec():
            x1, x2 = backend.parse(x1s), backend.parse(x2s)
            obj["value_at"] = format_scalar(res.G.evaluate(x1, x2))
            ep = exit_position_moments(cone, (x1, x2))
            obj["exit_position"] = {
                "mean1": format_scalar(ep.mean1),
                "mean2": format_scalar(ep.mean2),
                "second1": format_scalar(ep.second1),
                "second2": format_scalar(ep.second2),
            }
    _emit(args, obj)
    return EXIT_OK


def cmd_matrix(args) -> int:
    cone = _resolve_cone(args)
    mat = build_matrix(args.n, cone)
    _emit(args, {"n": args.n, "rows": matrix_to_obj(mat.rows)})
    return EXIT_OK


def cmd_transform(args) -> int:
    w = _load_walk(args.walk)
    tr = w.transform
    obj = {
        "walk": walk_to_obj(w),
        "t11": format_scalar(tr.t11),
        "t12": format_scalar(tr.t12),
        "t22": format_scalar(tr.t22),
        "rho": tr.rho_float(),
        "alpha_geometric": tr.alpha_geometric,
        "alpha_formula": tr.alpha_formula,
        "m": w.cone.m,
        "p_alpha": w.cone.p_alpha_float(),
    }
    _emit(args, obj)
    return EXIT_OK


def cmd_verify(args) -> int:
    w = _load_walk(args.walk)
    m = args.m if args.m is not None else w.cone.m
    if m is None:
        raise ValidationError("walk opening is not pi/m; pass --m explicitly")
    mu = push_moments(w, max(m, 2))
    res = construct_harmonic(m, mu)
    rng = random.Random(args.seed)
    worst = 0.0
    failures = 0
    for _ in range(args.points):
        y = (rng.randint(1, 50), rng.randint(1, 50))
        r = one_step_residual(res.h, w, y)
        rf = abs(scalar_to_float(r))
        worst = max(worst, rf)
        exact = not isinstance(w.backend, FloatBackend)
        if (exact and not (r == 0)) or (not exact and rf > 1e-20):
            failures += 1
    obj = {
        "m": m,
        "points": args.points,
        "failures": failures,
        "worst_residual": worst,
        "boundary_ok": res.boundary_ok,
    }
    _emit(args, obj)
    return EXIT_OK if failures == 0 and res.boundary_ok else EXIT_CHECK


def cmd_simulate(args) -> int:
    w = _load_walk(args.walk)
    start = tuple(int(v) for v in args.start.split(","))
    checks = tuple(args.check.split(",")) if args.check else ("tau-mean",)
    cfg = SimConfig(
        walk=w,
        start=start,
        paths=args.paths,
        seed=args.seed,
        max_steps=args.max_steps,
        checks=checks,
    )
    rep = sample_exit(cfg)
    obj = {
        "paths": rep.paths,
        "seed": rep.seed,
        "truncated": rep.truncated,
        "checks": [
            {
                "name": c.name,
                "estimate": c.estimate,
                "std_error": c.std_error,
                "target": c.target,
                "z": c.z,
                "passed": c.passed,
                "note": c.note,
            }
            for c in rep.checks
        ],
    }
    _emit(args, obj)
    return EXIT_OK if rep.all_passed() else EXIT_CHECK


def cmd_alt_eliminate(args) -> int:
    f, g, F = eliminate_monomial(args.j, args.k, args.m)
    _emit(
        args,
        {
            "j": args.j,
            "k": args.k,
            "m": args.m,
            "f": poly_to_obj(f),
            "g": poly_to_obj(g),
            "F": poly_to_obj(F),
        },
    )
    return EXIT_OK


def cmd_self_test(args) -> int:
    results = self_test(seed=args.seed, float_bits=args.float_bits)
    all_ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}: {r.detail}")
        all_ok = all_ok and r.passed
    return EXIT_OK if all_ok else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="conewalk",
        description="Exact harmonic polynomials and exit-time moments for "
        "lattice walks killed at leaving a wedge.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--backend", help="rational, quad:d, or float:bits")
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.add_argument("--format", choices=("json", "pretty"), default="json")

    sp = sub.add_parser("harmonic", help="build the harmonic polynomial for opening pi/m")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--moments", help="moment-table JSON file")
    sp.add_argument("--walk", help="built-in walk name or walk JSON file")
    common(sp)
    sp.set_defaults(fn=cmd_harmonic)

    sp = sub.add_parser("exit-moments", help="exit-time moment polynomial G_k")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--b", help="boundary slope when the opening is not pi/m")
    sp.add_argument("--moments")
    sp.add_argument("--walk")
    sp.add_argument("--at", help="evaluate at x1,x2")
    common(sp)
    sp.set_defaults(fn=cmd_exit_moments)

    sp = sub.add_parser("matrix", help="dump the degree-n boundary system matrix")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--b")
    common(sp)
    sp.set_defaults(fn=cmd_matrix)

    sp = sub.add_parser("transform", help="normalizing transform and wedge of a walk")
    sp.add_argument("--walk", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_transform)

    sp = sub.add_parser("verify", help="one-step harmonicity spot check at lattice points")
    sp.add_argument("--walk", required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--points", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("simulate", help="Monte Carlo checks against exact targets")
    sp.add_argument("--walk", required=True)
    sp.add_argument("--start", default="1,1")
    sp.add_argument("--paths", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--max-steps", type=int, default=10_000_000)
    sp.add_argument("--check", help="comma list: tau-mean,tau-second,exit-position,harmonicity,tail")
    common(sp)
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("alt-eliminate", help="monomial-elimination triple (f, g, F)")
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    common(sp)
    sp.set_defaults(fn=cmd_alt_eliminate)

    sp = sub.add_parser("self-test", help="run the full property suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--float-bits", type=int, default=256)
    sp.set_defaults(fn=cmd_self_test)

    return p


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConewalkError as e:
        log.error("%s: %s", e.code, e)
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as e:
        print(f"error [invalid-value]: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
