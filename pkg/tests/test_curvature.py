import numpy as np
import pytest

from kcone.catalog import catalog_names, default_point
from kcone.curvature import (
    christoffel,
    constant_field,
    covariant_derivative,
    derived_curvatures,
    inner22,
    primitive_projection_field,
    riemann,
    riemann_alt,
    riemann_tensor,
    tautological_field,
)
from kcone.errors import DegeneratePlane
from kcone.fdcheck import (
    check_connection,
    check_curvature,
    check_hessian_metric,
    with_fd_jacobian,
)


def test_christoffel_p1xp1_example():
    P = default_point("P1XP1")
    h1 = np.array([1.0, 0.0])
    assert np.allclose(christoffel(P, h1, h1), -h1)


def test_christoffel_of_omega_cancels_tautological_jacobian():
    # Gamma(z, omega) = -z, so the tautological field is parallel
    for name in catalog_names():
        P = default_point(name)
        eye = np.eye(P.rank_m)
        for i in range(P.rank_m):
            assert np.abs(christoffel(P, eye[i], P.omega) + eye[i]).max() <= 1e-12


def test_christoffel_torsion_free_exactly():
    for name in catalog_names():
        P = default_point(name)
        eye = np.eye(P.rank_m)
        for i in range(P.rank_m):
            for j in range(P.rank_m):
                assert np.array_equal(
                    christoffel(P, eye[i], eye[j]), christoffel(P, eye[j], eye[i])
                )


def test_christoffel_bilinear():
    P = default_point("LOR3")
    rng = np.random.default_rng(0)
    z, u, w = (rng.uniform(-1, 1, 3) for _ in range(3))
    lhs = christoffel(P, z, u + 2.0 * w)
    rhs = christoffel(P, z, u) + 2.0 * christoffel(P, z, w)
    assert np.abs(lhs - rhs).max() <= 1e-12


def test_covariant_derivative_constant_field():
    P = default_point("BLP2")
    u0 = np.array([0.3, -0.1])
    z = np.array([1.0, 0.0])
    assert np.allclose(
        covariant_derivative(P, constant_field(u0), z), christoffel(P, z, u0)
    )


def test_covariant_derivative_tautological_vanishes():
    for name in catalog_names():
        P = default_point(name)
        field = tautological_field()
        for i in range(P.rank_m):
            nabla = covariant_derivative(P, field, np.eye(P.rank_m)[i])
            assert np.abs(nabla).max() <= 1e-12


def test_primitive_field_stays_primitive_analytic():
    for name in catalog_names():
        P = default_point(name)
        field = primitive_projection_field(np.eye(P.rank_m)[0])
        for i in range(P.rank_m):
            nabla = covariant_derivative(P, field, np.eye(P.rank_m)[i])
            assert abs(P.lambda_scalar([nabla])) <= 1e-10


def test_primitive_field_stays_primitive_fd_jacobian():
    P = default_point("LOR3")
    field = with_fd_jacobian(primitive_projection_field(np.eye(3)[1]), P.form)
    for i in range(3):
        nabla = covariant_derivative(P, field, np.eye(3)[i])
        assert abs(P.lambda_scalar([nabla])) <= 1e-8


def test_covariant_derivative_requires_jacobian():
    from kcone.curvature import VectorField

    P = default_point("P1XP1")
    bare = VectorField(value_at=lambda Q: Q.omega)
    with pytest.raises(ValueError, match="jacobian"):
        covariant_derivative(P, bare, np.array([1.0, 0.0]))


def test_riemann_vanishes_with_omega_slot():
    for name in catalog_names():
        P = default_point(name)
        rng = np.random.default_rng(1)
        u, v, z = (rng.uniform(-1, 1, P.rank_m) for _ in range(3))
        assert abs(riemann(P, P.omega, u, v, z)) <= 1e-12
        assert abs(riemann(P, u, v, P.omega, z)) <= 1e-12


def test_riemann_rank_one_is_zero():
    for name in ("P3", "QUINTIC"):
        P = default_point(name)
        assert np.abs(riemann_tensor(P).entries).max() <= 1e-14


def test_riemann_lor3_benchmark():
    P = default_point("LOR3")
    u = np.array([0.0, 1.0, 0.0]) / np.sqrt(2.0)
    v = np.array([0.0, 0.0, 1.0]) / np.sqrt(2.0)
    assert riemann(P, u, v, v, u) == pytest.approx(-0.5, abs=1e-12)


def test_inner22_p1xp1_example():
    P = default_point("P1XP1")
    h1, h2 = np.eye(2)
    assert inner22(P, (h1, h2), (h1, h2)) == pytest.approx(1.0, abs=1e-12)


def test_inner22_swap_symmetry():
    P = default_point("CY3GEN")
    rng = np.random.default_rng(2)
    u, w, v, z = (rng.uniform(-1, 1, 2) for _ in range(4))
    assert inner22(P, (u, w), (v, z)) == pytest.approx(
        inner22(P, (v, z), (u, w)), abs=1e-12
    )


def test_riemann_alt_agrees():
    for name in ("BLP2", "LOR3", "CY3GEN"):
        P = default_point(name)
        m = P.rank_m
        eye = np.eye(m)
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    for l in range(m):
                        a = riemann(P, eye[i], eye[j], eye[k], eye[l])
                        b = riemann_alt(P, eye[i], eye[j], eye[k], eye[l])
                        assert abs(a - b) <= 1e-10


def test_curvature_tensor_symmetries():
    for name in catalog_names():
        tensor = riemann_tensor(default_point(name))
        report = tensor.symmetry_report()
        assert max(report.values()) <= 1e-12, (name, report)
        assert tensor.omega_slot_deviation() <= 1e-12


def test_derived_curvatures_lor3():
    P = default_point("LOR3")
    dc = derived_curvatures(P)
    e1, e2, e3 = np.eye(3)
    assert dc.sectional(e2, e3) == pytest.approx(-0.5, abs=1e-12)
    assert dc.sectional(P.omega, e2) == pytest.approx(0.0, abs=1e-12)
    u = e2 / np.sqrt(2.0)
    assert float(u @ dc.ricci @ u) == pytest.approx(-0.5, abs=1e-12)
    assert dc.scalar == pytest.approx(-1.0, abs=1e-12)


def test_derived_curvatures_rank_one():
    dc = derived_curvatures(default_point("QUINTIC"))
    assert dc.scalar == pytest.approx(0.0, abs=1e-14)


def test_lor3_curvature_constant_across_cone():
    # the cone is homogeneous: primitive sectional curvature is -1/2 at
    # every admissible point, not just the default one
    from kcone.metric import ConePoint

    form = default_point("LOR3").form
    rng = np.random.default_rng(8)
    for _ in range(5):
        omega = np.array([1.0, 0.0, 0.0]) + 0.25 * rng.standard_normal(3)
        P = ConePoint(form, omega)
        dc = derived_curvatures(P)
        u = P.primitive_part(np.eye(3)[1])
        v = P.primitive_part(np.eye(3)[2])
        assert dc.sectional(u, v) == pytest.approx(-0.5, abs=1e-10)
        assert dc.scalar == pytest.approx(-1.0, abs=1e-10)


def test_sectional_degenerate_plane():
    P = default_point("LOR3")
    dc = derived_curvatures(P)
    u = np.array([0.0, 1.0, 0.0])
    with pytest.raises(DegeneratePlane):
        dc.sectional(u, 2.0 * u)


def test_fd_hessian_matches_gram():
    for name in catalog_names():
        assert check_hessian_metric(default_point(name)).max_dev <= 1e-6


def test_fd_metric_compatibility():
    for name in catalog_names():
        assert check_connection(default_point(name)).max_dev <= 1e-6


def test_fd_curvature_commutator():
    for name in ("BLP2", "LOR3", "CY3GEN"):
        assert check_curvature(default_point(name)).max_dev <= 1e-5
