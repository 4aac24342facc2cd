"""Monte Carlo validation of the exact machinery.

Paths are simulated in integer quadrant coordinates (exit = any coordinate
<= 0, which is exact for lattice walks), in fixed-size chunks with one
counter-based RNG stream per chunk, so reports are bit-identical for a
given config regardless of how the chunks are scheduled.  Exact targets are
computed by the symbolic modules and pulled back through the normalizing
transform once, outside the hot loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .drift import drift_expansion
from .errors import (
    InsufficientSurvivors,
    MomentCheckInvalid,
    StartNotInterior,
    ValidationError,
)
from .exits import tau_moment_poly
from .harmonic import construct_harmonic
from .poly import Poly
from .scalars import scalar_to_float
from .walks import WalkSpec, push_moments

KNOWN_CHECKS = ("tau-mean", "tau-second", "exit-position", "harmonicity", "tail")

#: paths per RNG stream; fixed so chunking never depends on worker count
CHUNK = 65536

#: acceptance band around -p_alpha/2 for the tail-slope fit
TAIL_BAND = 0.15

#: smallest dyadic time entering the tail fit (below this the power law
#: has not set in yet)
TAIL_FIT_MIN = 16

#: minimum surviving paths for a dyadic point to be usable
TAIL_MIN_SURVIVORS = 100


@dataclass(frozen=True)
class SimConfig:
    walk: WalkSpec
    start: tuple
    paths: int
    seed: int
    max_steps: int = 10_000_000
    checks: tuple = ("tau-mean",)

    def __post_init__(self):
        y1, y2 = self.start
        if int(y1) != y1 or int(y2) != y2 or y1 < 1 or y2 < 1:
            raise StartNotInterior(f"start {self.start} must be an interior lattice point")
        if self.paths < 1 or self.max_steps < 1:
            raise ValidationError("paths and max_steps must be >= 1")
        for c in self.checks:
            if c not in KNOWN_CHECKS:
                raise ValidationError(f"unknown check {c!r}; known: {KNOWN_CHECKS}")


@dataclass(frozen=True)
class CheckResult:
    name: str
    estimate: float
    std_error: float
    target: float
    z: float
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class SimReport:
    paths: int
    seed: int
    truncated: int
    checks: tuple  # CheckResult entries, in a fixed order
    tau_mean_bracket: tuple | None = None  # (completed-only mean, truncated-at-cap mean)

    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _chunk_rng(seed: int, chunk_index: int, substream: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index, substream))
    return np.random.Generator(np.random.Philox(ss))


def _simulate_exits(cfg: SimConfig):
    """Exit time and exit point for every path.

    Returns (tau, exit_y, truncated_mask): truncated paths carry
    tau = max_steps and their last position instead of an exit point."""
    atoms = cfg.walk.atoms
    jumps = np.array([[a, b] for a, b, _ in atoms], dtype=np.int64)
    cum = np.cumsum(np.array([float(p) for _, _, p in atoms]))
    cum[-1] = 1.0
    tau = np.empty(cfg.paths, dtype=np.int64)
    exit_y = np.empty((cfg.paths, 2), dtype=np.int64)
    truncated = np.zeros(cfg.paths, dtype=bool)
    n_chunks = (cfg.paths + CHUNK - 1) // CHUNK
    for ci in range(n_chunks):
        lo, hi = ci * CHUNK, min((ci + 1) * CHUNK, cfg.paths)
        count = hi - lo
        rng = _chunk_rng(cfg.seed, ci)
        pos = np.empty((count, 2), dtype=np.int64)
        pos[:, 0] = cfg.start[0]
        pos[:, 1] = cfg.start[1]
        idx = np.arange(lo, hi)
        step = 0
        while idx.size and step < cfg.max_steps:
            step += 1
            draws = rng.random(idx.size)
            pos += jumps[np.searchsorted(cum, draws, side="right")]
            out = (pos[:, 0] <= 0) | (pos[:, 1] <= 0)
            if out.any():
                done = idx[out]
                tau[done] = step
                exit_y[done] = pos[out]
                keep = ~out
                idx = idx[keep]
                pos = pos[keep]
        if idx.size:
            tau[idx] = cfg.max_steps
            exit_y[idx] = pos
            truncated[idx] = True
    return tau, exit_y, truncated


def _transform_floats(w: WalkSpec):
    tr = w.transform
    return (
        scalar_to_float(tr.t11),
        scalar_to_float(tr.t12),
        scalar_to_float(tr.t22),
    )


def _pullback_value(poly: Poly, w: WalkSpec, y: tuple) -> float:
    """Evaluate a wedge-coordinate polynomial at a quadrant lattice point,
    exactly where the backend allows, then convert to float."""
    tr = w.transform
    with tr.backend.workprec():
        x1, x2 = tr.apply(y[0], y[1])
        return scalar_to_float(poly.evaluate(x1, x2))


def _mean_se(values: np.ndarray):
    est = float(np.mean(values))
    if values.size > 1:
        se = float(np.std(values, ddof=1) / math.sqrt(values.size))
    else:
        se = 0.0
    return est, se


def _zpass(est: float, se: float, target: float):
    z = (est - target) / se if se > 0 else (0.0 if est == target else math.inf)
    return z, abs(z) <= 3.0


def sample_exit(cfg: SimConfig) -> SimReport:
    """Run the configured checks and compare against the exact targets.

    The expected-exit-time check reports a bracket: the mean over completed
    paths and the mean with truncated paths counted at the step cap; it
    passes when the exact value lies within 3 standard errors of the
    bracket.  Exit-position estimates use completed paths only.
    """
    w = cfg.walk
    cone = w.cone
    p_alpha = cone.p_alpha_float()
    need_sim = any(c in cfg.checks for c in ("tau-mean", "tau-second", "exit-position", "tail"))
    # validate moment finiteness before paying for the simulation
    if "tau-mean" in cfg.checks and not p_alpha > 2:
        raise MomentCheckInvalid(f"E[tau] infinite at p_alpha = {p_alpha:g}")
    if "tau-second" in cfg.checks and not p_alpha > 4:
        raise MomentCheckInvalid(f"E[tau^2] infinite at p_alpha = {p_alpha:g}")
    if "exit-position" in cfg.checks and not p_alpha > 2:
        raise MomentCheckInvalid("exit-position second moments require opening < pi/2")
    tau = exit_y = truncated = None
    if need_sim:
        tau, exit_y, truncated = _simulate_exits(cfg)
    results = []
    bracket = None
    n_trunc = int(truncated.sum()) if truncated is not None else 0

    if "tau-mean" in cfg.checks:
        mu = push_moments(w, 2)
        g1 = tau_moment_poly(1, cone, mu).G
        target = _pullback_value(g1, w, cfg.start)
        done = tau[~truncated]
        capped = tau.astype(np.float64)
        est_hi, se_hi = _mean_se(capped)
        if done.size:
            est_lo, se_lo = _mean_se(done.astype(np.float64))
        else:
            est_lo, se_lo = 0.0, 0.0
        bracket = (est_lo, est_hi)
        passed = est_lo - 3 * se_lo <= target <= est_hi + 3 * se_hi
        z, _ = _zpass(est_hi, se_hi, target)
        results.append(
            CheckResult(
                name="tau-mean",
                estimate=est_hi,
                std_error=se_hi,
                target=target,
                z=z,
                passed=passed,
                note=f"bracket=({est_lo:.6g},{est_hi:.6g}), truncated={n_trunc}",
            )
        )

    if "tau-second" in cfg.checks:
        mu = push_moments(w, 4)
        g2 = tau_moment_poly(2, cone, mu).G
        target = _pullback_value(g2, w, cfg.start)
        sq = tau.astype(np.float64) ** 2
        est, se = _mean_se(sq)
        z, ok = _zpass(est, se, target)
        results.append(
            CheckResult(
                name="tau-second", estimate=est, std_error=se, target=target, z=z, passed=ok
            )
        )

    if "exit-position" in cfg.checks:
        from .exits import exit_position_moments

        tr = w.transform
        with tr.backend.workprec():
            x0 = tr.apply(cfg.start[0], cfg.start[1])
            ep = exit_position_moments(cone, x0)
        t11, t12, t22 = _transform_floats(w)
        y = exit_y[~truncated]
        x1 = t11 * y[:, 0] + t12 * y[:, 1]
        x2 = t22 * y[:, 1].astype(np.float64)
        for name, sample, target in (
            ("exit-mean-x1", x1, scalar_to_float(ep.mean1)),
            ("exit-mean-x2", x2, scalar_to_float(ep.mean2)),
            ("exit-second-x1", x1**2, scalar_to_float(ep.second1)),
            ("exit-second-x2", x2**2, scalar_to_float(ep.second2)),
        ):
            est, se = _mean_se(sample)
            z, ok = _zpass(est, se, target)
            results.append(
                CheckResult(
                    name=name,
                    estimate=est,
                    std_error=se,
                    target=target,
                    z=z,
                    passed=ok,
                    note=f"completed paths only ({y.shape[0]})",
                )
            )

    if "harmonicity" in cfg.checks:
        results.append(_harmonicity_check(cfg))

    if "tail" in cfg.checks:
        results.append(_tail_check(cfg, tau))

    return SimReport(
        paths=cfg.paths,
        seed=cfg.seed,
        truncated=n_trunc,
        checks=tuple(results),
        tau_mean_bracket=bracket,
    )


def _harmonicity_check(cfg: SimConfig) -> CheckResult:
    """One-step martingale check: the sample mean of h at the position after
    a single jump (zero on the boundary by construction) against h at the
    start.  The per-atom h values are computed exactly; sampling only
    chooses atoms, so the estimator is a multinomial average of exact
    numbers."""
    w = cfg.walk
    m = w.cone.m
    if m is None:
        raise MomentCheckInvalid("harmonicity check needs an integer-m wedge")
    mu = push_moments(w, max(m, 2))
    h = construct_harmonic(m, mu).h
    target = _pullback_value(h, w, cfg.start)
    vals = np.array(
        [_pullback_value(h, w, (cfg.start[0] + a, cfg.start[1] + b)) for a, b, _ in w.atoms]
    )
    probs = np.array([float(p) for _, _, p in w.atoms])
    counts = np.zeros(len(w.atoms), dtype=np.int64)
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    n_chunks = (cfg.paths + CHUNK - 1) // CHUNK
    for ci in range(n_chunks):
        count = min((ci + 1) * CHUNK, cfg.paths) - ci * CHUNK
        rng = _chunk_rng(cfg.seed, ci, substream=1)
        picks = np.searchsorted(cum, rng.random(count), side="right")
        counts += np.bincount(picks, minlength=len(w.atoms))
    n = counts.sum()
    est = float(np.dot(counts, vals) / n)
    var = float(np.dot(counts, (vals - est) ** 2) / max(n - 1, 1))
    se = math.sqrt(var / n)
    z, ok = _zpass(est, se, target)
    return CheckResult(
        name="harmonicity", estimate=est, std_error=se, target=target, z=z, passed=ok
    )


def _tail_check(cfg: SimConfig, tau: np.ndarray) -> CheckResult:
    slope, se, npts = _fit_tail(tau, cfg.max_steps)
    target = -cfg.walk.cone.p_alpha_float() / 2
    ok = abs(slope - target) <= TAIL_BAND
    z = (slope - target) / se if se > 0 else 0.0
    return CheckResult(
        name="tail",
        estimate=slope,
        std_error=se,
        target=target,
        z=z,
        passed=ok,
        note=f"band +/-{TAIL_BAND}, {npts} dyadic points",
    )


def _fit_tail(tau: np.ndarray, max_steps: int):
    """Least-squares slope of log survival probability against log time over
    dyadic times; truncated paths (tau = cap) legitimately count as
    survivors at every fitted time below the cap."""
    ns = []
    n = TAIL_FIT_MIN
    while n < max_steps:
        surv = int((tau > n).sum())
        if surv < TAIL_MIN_SURVIVORS:
            break
        ns.append((n, surv))
        n *= 2
    if len(ns) < 3 or not any(n > 64 for n, _ in ns):
        raise InsufficientSurvivors(
            f"only {len(ns)} usable dyadic points (need >= 3 reaching past 64 steps)"
        )
    xs = np.log([n for n, _ in ns])
    ys = np.log([s / tau.size for _, s in ns])
    slope, _intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + _intercept)
    denom = float(np.sum((xs - xs.mean()) ** 2))
    dof = max(len(ns) - 2, 1)
    se = math.sqrt(float(np.sum(resid**2)) / dof / denom) if denom > 0 else 0.0
    return float(slope), se, len(ns)


def tail_exponent(cfg: SimConfig) -> CheckResult:
    """Simulate and fit the exit-time tail exponent (see _fit_tail)."""
    tau, _, _ = _simulate_exits(cfg)
    return _tail_check(cfg, tau)
