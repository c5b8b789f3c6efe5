"""Cone points, Lefschetz contractions and the Riemannian metric.

At an admissible class omega the metric on (1,1)-classes is

    g(u, v) = Lam(u) Lam(v) - Lam2(u cup v),

where Lam^k denotes the divided-power contraction

    Lam^k(u_1 cup .. cup u_k) = int(u_1 .. u_k omega^{n-k}) / ((n-k)! Vol)

and Vol = int(omega^n)/n!.  The same quadratic form is the Hessian of
-log Vol, which is what the finite-difference oracle checks.
"""

from __future__ import annotations

from math import factorial
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import IndefiniteMetric, NonPositiveVolume
from .intersection import CohClass, IntersectionForm

__all__ = ["POSDEF_TOL", "ConePoint", "cone_point"]

# Relative eigenvalue floor separating genuine degeneracy from roundoff.
POSDEF_TOL = 1e-10


class _LefschetzData(NamedTuple):
    vol: float
    lam: np.ndarray          # Lam(e_i)
    lam2: np.ndarray         # Lam2(e_i cup e_j)
    lam3: Optional[np.ndarray]  # Lam3(e_i cup e_j cup e_k), None for n < 3


def _lefschetz_data(form: IntersectionForm, omega: np.ndarray) -> _LefschetzData:
    """Contract the dense form with omega and normalize by divided powers.

    Raises NonPositiveVolume when omega lies outside the volume cone.
    """
    n, m = form.dim_n, form.rank_m
    stages = [form._dense]
    for _ in range(n):
        t = stages[-1]
        stages.append(np.tensordot(t, omega, axes=([t.ndim - 1], [0])))
    vol = float(stages[n]) / factorial(n)
    if not vol > 0.0:
        raise NonPositiveVolume(f"volume {vol!r} at {omega.tolist()} is not positive")
    lam = stages[n - 1] / (factorial(n - 1) * vol)
    lam2 = stages[n - 2] / (factorial(n - 2) * vol) if n >= 2 else np.zeros((m, m))
    lam3 = stages[n - 3] / (factorial(n - 3) * vol) if n >= 3 else None
    return _LefschetzData(vol, lam, lam2, lam3)


class ConePoint:
    """A validated cone point with cached volume, Gram matrix and inverse.

    Admission enforces the necessary conditions for a Kahler class that are
    decidable from the intersection form alone: positive volume and a
    positive definite Gram matrix.  Membership in the actual Kahler cone is
    asserted by the caller; every computed quantity is well defined under
    the two checks.
    """

    def __init__(self, form: IntersectionForm, omega: CohClass):
        omega = np.asarray(omega, dtype=float)
        if omega.shape != (form.rank_m,):
            raise ValueError(
                f"omega has shape {omega.shape}, expected ({form.rank_m},)"
            )
        self.form = form
        self.omega = omega
        data = _lefschetz_data(form, omega)
        self.vol = data.vol
        self._lam = data.lam
        self._lam2 = data.lam2
        self._lam3 = data.lam3
        self.gram = np.outer(data.lam, data.lam) - data.lam2
        eig = np.linalg.eigvalsh(self.gram)
        if eig[-1] <= 0.0 or eig[0] <= POSDEF_TOL * eig[-1]:
            raise IndefiniteMetric(
                f"Gram matrix at {omega.tolist()} is not positive definite "
                f"(eigenvalues {eig.tolist()})"
            )
        self.gram_inv = np.linalg.inv(self.gram)

    @property
    def dim_n(self) -> int:
        return self.form.dim_n

    @property
    def rank_m(self) -> int:
        return self.form.rank_m

    def __repr__(self):
        return (
            f"ConePoint({self.form.name}, omega={self.omega.tolist()}, "
            f"vol={self.vol!r})"
        )

    # -- Lefschetz contractions -------------------------------------------

    def lambda_scalar(self, classes: Sequence[CohClass]) -> float:
        """Divided-power contraction Lam^k(u_1 cup .. cup u_k).

        Returns 0 for k > n, matching the vanishing of classes of degree
        above 2n.
        """
        k = len(classes)
        n = self.dim_n
        if k > n:
            return 0.0
        if k == 0:
            raise ValueError("need at least one class")
        cls = [self.form._check_class(a) for a in classes]
        if k == 1:
            return float(self._lam @ cls[0])
        if k == 2:
            return float(cls[0] @ self._lam2 @ cls[1])
        if k == 3 and self._lam3 is not None:
            t = np.tensordot(self._lam3, cls[2], axes=([2], [0]))
            return float(cls[0] @ t @ cls[1])
        t = self.form._dense
        for a in cls:
            t = np.tensordot(t, a, axes=([t.ndim - 1], [0]))
        for _ in range(n - k):
            t = np.tensordot(t, self.omega, axes=([t.ndim - 1], [0]))
        return float(t) / (factorial(n - k) * self.vol)

    def inner(self, u: CohClass, v: CohClass) -> float:
        """The metric g(u, v) = u^T Gram v."""
        return float(np.asarray(u, float) @ self.gram @ np.asarray(v, float))

    def norm(self, u: CohClass) -> float:
        return float(np.sqrt(max(self.inner(u, u), 0.0)))

    def primitive_part(self, u: CohClass) -> CohClass:
        """u minus its component along omega: u - (Lam(u)/n) omega."""
        u = np.asarray(u, dtype=float)
        return u - (float(self._lam @ u) / self.dim_n) * self.omega

    def lambda_class(self, u: CohClass, v: CohClass) -> CohClass:
        """The (1,1)-class Lam(u cup v), the metric dual of

            z |-> -Lam3(u cup v cup z) + Lam2(u cup v) Lam(z).

        Symmetric and bilinear in (u, v).
        """
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self._lam3 is not None:
            vec3 = np.tensordot(
                np.tensordot(self._lam3, v, axes=([2], [0])), u, axes=([0], [0])
            )
        else:
            vec3 = 0.0
        lam2_uv = float(u @ self._lam2 @ v)
        rhs = -vec3 + lam2_uv * self._lam
        return self.gram_inv @ rhs


def cone_point(form: IntersectionForm, omega: CohClass) -> ConePoint:
    """Validate omega and return a ConePoint with caches populated."""
    return ConePoint(form, omega)
