"""Built-in intersection forms used by the command line and the test suite.

Each entry carries a documented admissible default point.  The catalog is
a test corpus: entries are small, hand-checkable forms (products of lines,
projective space, a quintic-type cubic, a blown-up surface, a Lorentzian
rank-3 surface and a synthetic two-parameter threefold).
"""

from __future__ import annotations

import numpy as np

from .intersection import IntersectionForm
from .metric import ConePoint

__all__ = ["CATALOG", "DEFAULT_OMEGA", "catalog_names", "get_form", "default_omega", "default_point"]

CATALOG = {
    "P1XP1": IntersectionForm(
        name="P1XP1", dim_n=2, rank_m=2, coeffs={(1, 2): 1.0}, labels=("h1", "h2")
    ),
    "P3": IntersectionForm(name="P3", dim_n=3, rank_m=1, coeffs={(1, 1, 1): 1.0}),
    "QUINTIC": IntersectionForm(
        name="QUINTIC", dim_n=3, rank_m=1, coeffs={(1, 1, 1): 5.0}
    ),
    "BLP2": IntersectionForm(
        name="BLP2",
        dim_n=2,
        rank_m=2,
        coeffs={(1, 1): 1.0, (2, 2): -1.0},
        labels=("H", "E"),
    ),
    "LOR3": IntersectionForm(
        name="LOR3",
        dim_n=2,
        rank_m=3,
        coeffs={(1, 1): 1.0, (2, 2): -1.0, (3, 3): -1.0},
    ),
    "CY3GEN": IntersectionForm(
        name="CY3GEN",
        dim_n=3,
        rank_m=2,
        coeffs={(1, 1, 1): 8.0, (1, 1, 2): 4.0, (1, 2, 2): 2.0},
    ),
}

DEFAULT_OMEGA = {
    "P1XP1": (1.0, 1.0),
    "P3": (1.0,),
    "QUINTIC": (1.0,),
    "BLP2": (2.0, -1.0),
    "LOR3": (1.0, 0.0, 0.0),
    "CY3GEN": (1.0, 1.0),
}


def catalog_names():
    return list(CATALOG)


def get_form(name: str) -> IntersectionForm:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog form {name!r}; known: {', '.join(CATALOG)}")


def default_omega(name: str) -> np.ndarray:
    return np.array(DEFAULT_OMEGA[name], dtype=float)


def default_point(name: str) -> ConePoint:
    return ConePoint(get_form(name), default_omega(name))
