"""Geodesics, path lengths, boundary probes, the splitting isometry and
pullback isometry checks.

The geodesic equation of the cone metric is gamma'' + Gamma(gamma', gamma') = 0
with Gamma from the connection module; radial rays t |-> e^{t/n} omega solve it
exactly.  Path lengths obey

    L(gamma) >= (1/sqrt n) |log Vol(end) - log Vol(start)|,

with equality on radial rays, because d_u log Vol = <u, omega> and
|omega| = sqrt n.  The stricter constant sqrt(2/n) sometimes quoted for this
bound fails on radial rays; length_bound_check reports both.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, log, sqrt
from typing import NamedTuple, Sequence

import numpy as np

from .errors import IndefiniteMetric, KConeError, LeftCone, NonPositiveVolume
from .intersection import CohClass, IntersectionForm
from .metric import POSDEF_TOL, ConePoint

__all__ = [
    "GeodesicPath",
    "integrate_geodesic",
    "path_length",
    "LengthBound",
    "length_bound_check",
    "ProbeReport",
    "boundary_probe",
    "split",
    "unsplit",
    "SplitReport",
    "split_report",
    "PullbackReport",
    "pullback_isometry_check",
]


def _acceleration(form: IntersectionForm, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """-Gamma_x(v, v) = Lam(v) v - 1/2 Lam(v cup v).

    Hot path of the integrator: checks only that the volume stays positive
    and the Gram matrix solvable; recorded samples get the full admission.
    """
    n = form.dim_n
    t = form._dense
    for _ in range(n - 3):
        t = t @ x
    if n >= 3:
        t3 = t
        t2 = t3 @ x
    else:
        t3 = None
        t2 = t if n == 2 else None
    t1 = t2 @ x if t2 is not None else t
    top = float(t1 @ x)
    vol = top / factorial(n)
    if not vol > 0.0:
        raise NonPositiveVolume(f"volume {vol!r} is not positive")
    lam = t1 / (factorial(n - 1) * vol)
    lam_v = float(lam @ v)
    if t2 is not None:
        lam2 = t2 / (factorial(n - 2) * vol)
        rhs = float(v @ lam2 @ v) * lam
        gram = np.outer(lam, lam) - lam2
    else:
        rhs = 0.0 * lam
        gram = np.outer(lam, lam)
    if t3 is not None:
        rhs = rhs - (v @ (t3 @ v)) / (factorial(n - 3) * vol)
    lvv = np.linalg.solve(gram, rhs)
    return lam_v * v - 0.5 * lvv


def _admissible_grams(form: IntersectionForm, pts: np.ndarray, what: str = "sample"):
    """Vectorized admission check; returns (volumes, Gram matrices).

    Same criteria as ConePoint: positive volume and eigenvalue ratio above
    POSDEF_TOL.  Raises on the first inadmissible point.
    """
    pts = np.asarray(pts, dtype=float)
    n, m = form.dim_n, form.rank_m
    cur = np.broadcast_to(form._dense, (len(pts),) + form._dense.shape)
    stages = [cur]
    for _ in range(n):
        cur = np.einsum("b...k,bk->b...", cur, pts)
        stages.append(cur)
    vols = stages[n] / factorial(n)
    if not np.all(vols > 0.0):
        bad = int(np.argmax(vols <= 0.0))
        raise NonPositiveVolume(
            f"inadmissible {what} {pts[bad].tolist()}: volume {vols[bad]!r}"
        )
    lam = stages[n - 1] / (factorial(n - 1) * vols[:, None])
    if n >= 2:
        lam2 = stages[n - 2] / (factorial(n - 2) * vols[:, None, None])
    else:
        lam2 = np.zeros((len(pts), m, m))
    grams = np.einsum("bi,bj->bij", lam, lam) - lam2
    eig = np.linalg.eigvalsh(grams)
    ok = (eig[:, -1] > 0.0) & (eig[:, 0] > POSDEF_TOL * eig[:, -1])
    if not np.all(ok):
        bad = int(np.argmax(~ok))
        raise IndefiniteMetric(
            f"inadmissible {what} {pts[bad].tolist()}: Gram not positive definite"
        )
    return vols, grams


@dataclass
class GeodesicPath:
    """Discretized geodesic with tangent data and per-step diagnostics."""

    ts: np.ndarray
    points: np.ndarray      # shape (steps+1, m)
    velocities: np.ndarray  # shape (steps+1, m)
    speeds: np.ndarray      # g(gamma', gamma') at each sample
    speed_drift: float      # max |speed - speed at t=0|

    @property
    def samples(self):
        """Iterate (t, point, velocity) triples."""
        return zip(self.ts, self.points, self.velocities)


def integrate_geodesic(
    P0: ConePoint, v0: CohClass, T: float, steps: int
) -> GeodesicPath:
    """Classic fixed-step RK4 on (gamma, gamma').

    Every recorded sample passes the full cone admission checks; if a step
    leaves the admissible cone, LeftCone is raised with the parameter at
    which admission failed.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    v0 = np.asarray(v0, dtype=float)
    if not np.any(v0):
        raise ValueError("initial velocity must be nonzero")
    form = P0.form
    h = float(T) / steps
    x = P0.omega.copy()
    v = v0.copy()
    ts = np.linspace(0.0, float(T), steps + 1)
    points = np.empty((steps + 1, P0.rank_m))
    velocities = np.empty_like(points)
    speeds = np.empty(steps + 1)
    points[0], velocities[0], speeds[0] = x, v, P0.inner(v0, v0)
    for i in range(steps):
        try:
            k1x, k1v = v, _acceleration(form, x, v)
            k2x = v + 0.5 * h * k1v
            k2v = _acceleration(form, x + 0.5 * h * k1x, k2x)
            k3x = v + 0.5 * h * k2v
            k3v = _acceleration(form, x + 0.5 * h * k2x, k3x)
            k4x = v + h * k3v
            k4v = _acceleration(form, x + h * k3x, k4x)
        except (NonPositiveVolume, IndefiniteMetric, np.linalg.LinAlgError) as exc:
            raise LeftCone(ts[i], f"step from t={ts[i]!r} failed: {exc}") from exc
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        try:
            P = ConePoint(form, x)
        except (NonPositiveVolume, IndefiniteMetric) as exc:
            raise LeftCone(ts[i + 1], str(exc)) from exc
        points[i + 1], velocities[i + 1] = x, v
        speeds[i + 1] = P.inner(v, v)
    drift = float(np.abs(speeds - speeds[0]).max())
    return GeodesicPath(
        ts=ts, points=points, velocities=velocities, speeds=speeds, speed_drift=drift
    )


def path_length(form: IntersectionForm, samples: Sequence[CohClass]) -> float:
    """Trapezoidal length: sum of sqrt(g_mid(delta, delta)) over segments.

    Every sample and every segment midpoint must be admissible.  The sum
    converges to the true length at second order in the sample spacing and
    approaches it from below on smooth curves, so paths that are nearly
    tight against a bound need fine sampling.
    """
    pts = np.asarray([np.asarray(p, dtype=float) for p in samples])
    if pts.ndim != 2 or len(pts) < 2:
        raise ValueError("need at least two samples")
    _admissible_grams(form, pts, what="sample")
    mids = 0.5 * (pts[:-1] + pts[1:])
    _, grams = _admissible_grams(form, mids, what="segment midpoint")
    deltas = pts[1:] - pts[:-1]
    sq = np.einsum("bi,bij,bj->b", deltas, grams, deltas)
    return float(np.sqrt(np.maximum(sq, 0.0)).sum())


class LengthBound(NamedTuple):
    length: float
    lower_bound: float       # (1/sqrt n) |delta log Vol|, always satisfied
    sqrt2_bound: float       # (sqrt 2/sqrt n) |delta log Vol|, fails on radial rays
    delta_log_vol: float


def length_bound_check(
    form: IntersectionForm, samples: Sequence[CohClass]
) -> LengthBound:
    """Length of the sampled path against the log-volume lower bound.

    Raises KConeError if the (1/sqrt n) bound is violated beyond 1e-9,
    which would indicate an inconsistency in the metric computation
    (or sampling too coarse for a near-tight path).
    """
    length = path_length(form, samples)
    n = form.dim_n
    dlv = abs(
        log(form.volume(np.asarray(samples[-1], float)))
        - log(form.volume(np.asarray(samples[0], float)))
    )
    lower = dlv / sqrt(n)
    if length < lower - 1e-9:
        raise KConeError(f"length {length!r} violates the lower bound {lower!r}")
    return LengthBound(
        length=length,
        lower_bound=lower,
        sqrt2_bound=sqrt(2.0) * dlv / sqrt(n),
        delta_log_vol=dlv,
    )


@dataclass
class ProbeReport:
    """Lengths accumulated along gamma(t) = alpha + t omega as t decreases."""

    ts: np.ndarray
    vols: np.ndarray
    cumulative_lengths: np.ndarray  # length from t_max down to each t
    increments: np.ndarray          # length of each schedule interval
    classification: str             # DIVERGENT | CONVERGENT | INCONCLUSIVE
    growth_threshold: float
    conv_tol: float


def boundary_probe(
    form: IntersectionForm,
    alpha: CohClass,
    omega: CohClass,
    t_schedule: Sequence[float],
    substeps: int = 64,
    conv_tol: float = 1e-3,
) -> ProbeReport:
    """Probe the path alpha + t omega along a decreasing schedule of t.

    Classification assumes a halving schedule, tracking the proved
    lower-bound mechanism: DIVERGENT when the last five increments each
    reach 0.9 (1/sqrt n) log 2 (the growth a vanishing volume forces per
    halving), CONVERGENT when the final increment (the successive tail
    difference) is below conv_tol.
    """
    alpha = np.asarray(alpha, dtype=float)
    omega = np.asarray(omega, dtype=float)
    ts = np.asarray(list(t_schedule), dtype=float)
    if ts.ndim != 1 or len(ts) < 2:
        raise ValueError("schedule needs at least two points")
    if np.any(ts <= 0) or np.any(np.diff(ts) >= 0):
        raise ValueError("schedule must be strictly decreasing and positive")
    ConePoint(form, omega)
    vols = np.array([form.volume(alpha + t * omega) for t in ts])
    increments = np.empty(len(ts) - 1)
    for j, (t_hi, t_lo) in enumerate(zip(ts[:-1], ts[1:])):
        sub = np.linspace(t_hi, t_lo, substeps + 1)
        increments[j] = path_length(form, alpha[None, :] + sub[:, None] * omega[None, :])
    cumulative = np.concatenate([[0.0], np.cumsum(increments)])
    threshold = 0.9 * log(2.0) / sqrt(form.dim_n)
    if len(increments) >= 5 and np.all(increments[-5:] >= threshold):
        classification = "DIVERGENT"
    elif increments[-1] < conv_tol:
        classification = "CONVERGENT"
    else:
        classification = "INCONCLUSIVE"
    return ProbeReport(
        ts=ts,
        vols=vols,
        cumulative_lengths=cumulative,
        increments=increments,
        classification=classification,
        growth_threshold=threshold,
        conv_tol=conv_tol,
    )


def split(P: ConePoint):
    """(t, omega_1) with t = log Vol(omega) and Vol(omega_1) = 1."""
    t = log(P.vol)
    omega1 = P.omega / P.vol ** (1.0 / P.dim_n)
    return t, omega1


def unsplit(form: IntersectionForm, t: float, omega1: CohClass) -> CohClass:
    """Inverse of split: e^{t/n} omega_1 for a unit-volume omega_1."""
    omega1 = np.asarray(omega1, dtype=float)
    vol1 = form.volume(omega1)
    if abs(vol1 - 1.0) > 1e-10:
        raise ValueError(f"normalization failure: Vol(omega1) = {vol1!r} != 1")
    return np.exp(float(t) / form.dim_n) * omega1


@dataclass
class SplitReport:
    """Measured block structure of the metric in (t, primitive) coordinates.

    The radial coordinate field pushes forward to omega/n, so the measured
    dt^2 coefficient is 1/n (not 1); the mixed entries vanish because
    primitive directions are g-orthogonal to omega.
    """

    t: float
    omega1: np.ndarray
    dt2_coefficient: float
    expected_dt2: float
    max_mixed_entry: float
    primitive_block: np.ndarray


def split_report(P: ConePoint) -> SplitReport:
    t, omega1 = split(P)
    n, m = P.dim_n, P.rank_m
    radial = P.omega / n
    # primitive directions push forward with the homothety factor e^{t/n}
    scale = float(np.exp(t / n))
    prim = np.array([P.primitive_part(np.eye(m)[i]) for i in range(m)])
    u, s, _ = np.linalg.svd(prim.T, full_matrices=False)
    # projections of unit vectors: anything below 1e-10 is roundoff residue,
    # not a primitive direction (the primitive space has dimension m - 1)
    rank = int(np.sum(s > 1e-10))
    basis = u[:, :rank] * scale
    mixed = np.array([P.inner(radial, basis[:, a]) for a in range(rank)])
    block = np.array(
        [[P.inner(basis[:, a], basis[:, b]) for b in range(rank)] for a in range(rank)]
    )
    return SplitReport(
        t=t,
        omega1=omega1,
        dt2_coefficient=P.inner(radial, radial),
        expected_dt2=1.0 / n,
        max_mixed_entry=float(np.abs(mixed).max()) if rank else 0.0,
        primitive_block=block,
    )


@dataclass
class PullbackReport:
    max_vol_deviation: float
    max_gram_deviation: float
    points_checked: int
    degree: float


def pullback_isometry_check(
    form_y: IntersectionForm,
    form_x: IntersectionForm,
    matrix,
    degree: float,
    base_point: CohClass,
    n_samples: int = 4,
    scale: float = 0.1,
    seed: int = 7,
) -> PullbackReport:
    """Check that M embeds the cone of form_y isometrically into form_x's.

    At sampled admissible points omega of the source cone this verifies
    Vol_X(M omega) = degree * Vol_Y(omega) and M^T Gram_X M = Gram_Y; both
    hold because the Lefschetz contractions are volume-normalized ratios.
    """
    mat = np.asarray(matrix, dtype=float)
    if mat.shape != (form_x.rank_m, form_y.rank_m):
        raise ValueError(
            f"matrix shape {mat.shape} does not map rank {form_y.rank_m} "
            f"into rank {form_x.rank_m}"
        )
    base = np.asarray(base_point, dtype=float)
    rng = np.random.default_rng(seed)
    points = [base]
    while len(points) < n_samples:
        cand = base + scale * np.linalg.norm(base) * rng.standard_normal(form_y.rank_m)
        try:
            ConePoint(form_y, cand)
        except (NonPositiveVolume, IndefiniteMetric):
            continue
        points.append(cand)
    max_vol = 0.0
    max_gram = 0.0
    for w in points:
        py = ConePoint(form_y, w)
        px = ConePoint(form_x, mat @ w)
        vol_dev = abs(px.vol - degree * py.vol) / abs(degree * py.vol)
        pulled = mat.T @ px.gram @ mat
        gram_dev = float(np.abs(pulled - py.gram).max() / np.abs(py.gram).max())
        max_vol = max(max_vol, vol_dev)
        max_gram = max(max_gram, gram_dev)
    return PullbackReport(
        max_vol_deviation=max_vol,
        max_gram_deviation=max_gram,
        points_checked=len(points),
        degree=float(degree),
    )
