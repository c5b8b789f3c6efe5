"""Independent finite-difference verification of the analytic formulas.

Every closed-form object in the library (metric, connection, curvature,
derivative rules for the Lefschetz contractions) is re-derived here by
central differences with one level of Richardson extrapolation, and the
two are compared.  Reports carry raw maxima rather than booleans only, so
tolerances stay data-driven.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product
from math import log

import numpy as np

from .curvature import VectorField, christoffel, riemann_tensor
from .intersection import IntersectionForm
from .metric import ConePoint

__all__ = [
    "FDConfig",
    "FDReport",
    "fd_directional",
    "fd_hessian",
    "with_fd_jacobian",
    "check_hessian_metric",
    "check_lambda_derivative",
    "check_connection",
    "check_curvature",
    "check_primitive_field",
]


@dataclass(frozen=True)
class FDConfig:
    """Step sizes (relative to |omega|) and tolerances for the checks."""

    step_scale: float = 1e-4
    hessian_step_scale: float = 1e-3
    richardson: bool = True
    tol_hessian: float = 1e-6
    tol_lambda_derivative: float = 1e-6
    tol_compatibility: float = 1e-6
    tol_curvature: float = 1e-5
    tol_primitive: float = 1e-8

    def __post_init__(self):
        if not 0.0 < self.step_scale < 1e-1:
            raise ValueError("step_scale must lie in (0, 0.1)")
        if not 0.0 < self.hessian_step_scale < 1e-1:
            raise ValueError("hessian_step_scale must lie in (0, 0.1)")


@dataclass
class FDReport:
    name: str
    max_dev: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_dev <= self.tol

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "max_dev": float(self.max_dev),
            "tol": float(self.tol),
            "pass": bool(self.passed),
        }


def fd_directional(f, omega, z, cfg: FDConfig = None):
    """Central difference of f at omega in direction z, Richardson-refined.

    f may return a scalar or an array; evaluation points omega +- h z must
    be admissible for f.
    """
    cfg = cfg or FDConfig()
    omega = np.asarray(omega, dtype=float)
    z = np.asarray(z, dtype=float)
    h = cfg.step_scale * max(np.linalg.norm(omega), 1e-12)

    def central(step):
        return (f(omega + step * z) - f(omega - step * z)) / (2.0 * step)

    d = central(h)
    if cfg.richardson:
        d = (4.0 * central(h / 2.0) - d) / 3.0
    return d


def fd_hessian(f, omega, cfg: FDConfig = None) -> np.ndarray:
    """Full Hessian of a scalar function by 4-point central differences."""
    cfg = cfg or FDConfig()
    omega = np.asarray(omega, dtype=float)
    m = omega.shape[0]
    h = cfg.hessian_step_scale * max(np.linalg.norm(omega), 1e-12)
    eye = np.eye(m)

    def hess(step):
        out = np.empty((m, m))
        for i in range(m):
            for j in range(i, m):
                ei, ej = step * eye[i], step * eye[j]
                val = (
                    f(omega + ei + ej)
                    - f(omega + ei - ej)
                    - f(omega - ei + ej)
                    + f(omega - ei - ej)
                ) / (4.0 * step * step)
                out[i, j] = out[j, i] = val
        return out

    out = hess(h)
    if cfg.richardson:
        out = (4.0 * hess(h / 2.0) - out) / 3.0
    return out


def with_fd_jacobian(field: VectorField, form: IntersectionForm, cfg: FDConfig = None) -> VectorField:
    """Equip a field with a finite-difference directional jacobian."""
    cfg = cfg or FDConfig()

    def jacobian(P: ConePoint, z):
        return fd_directional(
            lambda w: field.value_at(ConePoint(form, w)), P.omega, z, cfg
        )

    return VectorField(value_at=field.value_at, jacobian_at=jacobian)


def check_hessian_metric(P: ConePoint, cfg: FDConfig = None) -> FDReport:
    """FD Hessian of -log Vol against the analytic Gram matrix."""
    cfg = cfg or FDConfig()
    hess = fd_hessian(lambda w: -log(P.form.volume(w)), P.omega, cfg)
    dev = float(np.abs(hess - P.gram).max() / np.abs(P.gram).max())
    return FDReport("hessian_vs_gram", dev, cfg.tol_hessian)


def check_lambda_derivative(
    P: ConePoint, classes, v, cfg: FDConfig = None
) -> FDReport:
    """Derivative rule for the scalar contraction of constant classes:

        d_v Lam^k(u_1 .. u_k) = -Lam(v) Lam^k(u_1 .. u_k)
                                + Lam^{k+1}(u_1 .. u_k cup v).
    """
    cfg = cfg or FDConfig()
    classes = [np.asarray(a, dtype=float) for a in classes]
    v = np.asarray(v, dtype=float)
    form = P.form
    fd = fd_directional(
        lambda w: ConePoint(form, w).lambda_scalar(classes), P.omega, v, cfg
    )
    analytic = -P.lambda_scalar([v]) * P.lambda_scalar(classes) + P.lambda_scalar(
        classes + [v]
    )
    dev = abs(fd - analytic) / max(1.0, abs(analytic))
    return FDReport("lambda_derivative_rule", dev, cfg.tol_lambda_derivative)


def check_connection(P: ConePoint, cfg: FDConfig = None) -> FDReport:
    """Metric compatibility over all basis triples:

        d_z g(u, v) = g(Gamma(z,u), v) + g(u, Gamma(z,v));

    torsion is identically zero by construction of Gamma.
    """
    cfg = cfg or FDConfig()
    form, m = P.form, P.rank_m
    eye = np.eye(m)
    max_dev = 0.0
    for iz, iu, iv in iter_product(range(m), repeat=3):
        if iu > iv:
            continue  # g is symmetric in (u, v)
        z, u, v = eye[iz], eye[iu], eye[iv]
        fd = fd_directional(
            lambda w: ConePoint(form, w).inner(u, v), P.omega, z, cfg
        )
        analytic = P.inner(christoffel(P, z, u), v) + P.inner(u, christoffel(P, z, v))
        max_dev = max(max_dev, abs(fd - analytic) / max(1.0, abs(analytic)))
    return FDReport("metric_compatibility", max_dev, cfg.tol_compatibility)


def check_curvature(P: ConePoint, cfg: FDConfig = None) -> FDReport:
    """Curvature commutator of the connection against the closed form.

    For constant basis fields (vanishing bracket)

        R(u,v)z = d_u Gamma(v,z) - d_v Gamma(u,z)
                  + Gamma(u, Gamma(v,z)) - Gamma(v, Gamma(u,z)),

    lowered with the Gram matrix and compared entrywise with the tensor.
    """
    cfg = cfg or FDConfig()
    form, m = P.form, P.rank_m
    tensor = riemann_tensor(P).entries
    scale = max(1.0, float(np.abs(tensor).max()))
    eye = np.eye(m)
    max_dev = 0.0
    for iu in range(m):
        for iv in range(iu + 1, m):
            for iz in range(m):
                u, v, z = eye[iu], eye[iv], eye[iz]
                d_u = fd_directional(
                    lambda w: christoffel(ConePoint(form, w), v, z), P.omega, u, cfg
                )
                d_v = fd_directional(
                    lambda w: christoffel(ConePoint(form, w), u, z), P.omega, v, cfg
                )
                vec = (
                    d_u
                    - d_v
                    + christoffel(P, u, christoffel(P, v, z))
                    - christoffel(P, v, christoffel(P, u, z))
                )
                lowered = P.gram @ vec
                dev = float(np.abs(lowered - tensor[iu, iv, iz, :]).max())
                max_dev = max(max_dev, dev / scale)
    return FDReport("curvature_vs_fd", max_dev, cfg.tol_curvature)


def check_primitive_field(P: ConePoint, cfg: FDConfig = None) -> FDReport:
    """Covariant derivatives of primitive projection fields stay primitive.

    Uses finite-difference jacobians, so the check is independent of the
    analytic jacobian of the field.
    """
    from .curvature import covariant_derivative, primitive_projection_field

    cfg = cfg or FDConfig()
    m = P.rank_m
    eye = np.eye(m)
    max_dev = 0.0
    for i in range(m):
        field = with_fd_jacobian(primitive_projection_field(eye[i]), P.form, cfg)
        for j in range(m):
            nabla = covariant_derivative(P, field, eye[j])
            max_dev = max(max_dev, abs(P.lambda_scalar([nabla])))
    return FDReport("primitive_field_stays_primitive", max_dev, cfg.tol_primitive)
