import numpy as np
import pytest

from kcone.algebra import algebra_at, kn_product, orthonormal_basis
from kcone.catalog import catalog_names, default_point
from kcone.curvature import riemann_tensor


def test_product_omega_squared():
    for name in catalog_names():
        P = default_point(name)
        alg = algebra_at(P)
        expect = (P.dim_n - 1.0) * P.omega
        assert np.abs(alg.product(P.omega, P.omega) - expect).max() <= 1e-10


def test_product_with_omega_identity():
    for name in catalog_names():
        P = default_point(name)
        alg = algebra_at(P)
        eye = np.eye(P.rank_m)
        for i in range(P.rank_m):
            expect = (
                0.5 * P.lambda_scalar([eye[i]]) * P.omega
                + 0.5 * (P.dim_n - 2.0) * eye[i]
            )
            assert np.abs(alg.product(eye[i], P.omega) - expect).max() <= 1e-10


def test_product_p1xp1_example():
    P = default_point("P1XP1")
    alg = algebra_at(P)
    h1, h2 = np.eye(2)
    assert np.allclose(alg.product(h1, h2), 0.5 * P.omega)


def test_product_commutative_bilinear():
    P = default_point("CY3GEN")
    alg = algebra_at(P)
    rng = np.random.default_rng(0)
    u, v, w = (rng.uniform(-1, 1, 2) for _ in range(3))
    assert np.abs(alg.product(u, v) - alg.product(v, u)).max() <= 1e-13
    lhs = alg.product(u + 0.5 * w, v)
    rhs = alg.product(u, v) + 0.5 * alg.product(w, v)
    assert np.abs(lhs - rhs).max() <= 1e-13


def test_product_not_associative_on_lor3():
    # (e2.e2).e1 = -e1.e1 = -e1 while e2.(e2.e1) = e2.0 = 0
    P = default_point("LOR3")
    alg = algebra_at(P)
    e1, e2, _ = np.eye(3)
    lhs = alg.product(alg.product(e2, e2), e1)
    rhs = alg.product(e2, alg.product(e2, e1))
    assert P.norm(lhs - rhs) == pytest.approx(np.sqrt(2.0), abs=1e-12)
    assert P.norm(lhs - rhs) > 1e-6


def test_structure_constants_symmetric():
    alg = algebra_at(default_point("LOR3"))
    assert np.abs(alg.structure - alg.structure.transpose(1, 0, 2)).max() == 0.0


def test_algebra_curvature_symmetries():
    for name in catalog_names():
        tensor = algebra_at(default_point(name)).curvature_tensor()
        assert tensor.max_symmetry_deviation() <= 1e-12


def test_algebra_curvature_rank_one_zero():
    tensor = algebra_at(default_point("P3")).curvature_tensor()
    assert np.abs(tensor.entries).max() <= 1e-14


def test_algebra_curvature_lor3_sign():
    P = default_point("LOR3")
    tensor = algebra_at(P).curvature_tensor()
    u = np.array([0.0, 1.0, 0.0]) / np.sqrt(2.0)
    v = np.array([0.0, 0.0, 1.0]) / np.sqrt(2.0)
    val = tensor.evaluate(u, v, v, u)
    assert val == pytest.approx(0.5, abs=1e-12)


def test_sign_relation_with_metric_tensor():
    for name in catalog_names():
        P = default_point(name)
        m = P.rank_m
        ralg = algebra_at(P).curvature_tensor().entries
        pi = np.eye(m) - np.outer(P.omega, P._lam) / P.dim_n
        prim = np.einsum("abcd,ai,bj,ck,dl->ijkl", ralg, pi, pi, pi, pi)
        assert np.abs(riemann_tensor(P).entries + prim).max() <= 1e-10


def test_orthonormal_basis_is_orthonormal():
    for name in catalog_names():
        P = default_point(name)
        x = orthonormal_basis(P)
        assert np.abs(x.T @ P.gram @ x - np.eye(P.rank_m)).max() <= 1e-12


def test_bilinear_forms_reconstruct_product():
    for name in catalog_names():
        P = default_point(name)
        alg = algebra_at(P)
        fs = alg.bilinear_forms()
        assert np.abs(fs.forms - fs.forms.transpose(0, 2, 1)).max() <= 1e-12
        rebuilt = np.einsum("lij,cl->ijc", fs.forms, fs.basis)
        assert np.abs(rebuilt - alg.structure).max() <= 1e-10


def test_kn_product_of_gram_is_space_form_tensor():
    P = default_point("LOR3")
    g = P.gram
    t = kn_product(g)
    expect = np.einsum("ik,jl->ijkl", g, g) - np.einsum("il,jk->ijkl", g, g)
    assert np.array_equal(t, expect)


def test_kn_decomposition_reconstructs_curvature():
    for name in catalog_names():
        assert algebra_at(default_point(name)).kn_reconstruction_residual() <= 1e-10


def test_constant_curvature_rank_one_trivial():
    fit = algebra_at(default_point("P3")).constant_curvature_test()
    assert fit.residual <= fit.tol


def test_constant_curvature_rank_two_automatic():
    # every algebraic curvature tensor on a rank-2 space is a multiple of
    # the Kulkarni-Nomizu square of the inner product
    for name, lam in (("P1XP1", 0.5), ("BLP2", 0.5), ("CY3GEN", 0.75)):
        fit = algebra_at(default_point(name)).constant_curvature_test()
        assert fit.is_constant
        assert fit.lam == pytest.approx(lam, abs=1e-9)


def test_constant_curvature_fails_on_lor3():
    fit = algebra_at(default_point("LOR3")).constant_curvature_test()
    assert not fit.is_constant
    # frozen diagnostics: best-fit multiple and residual of the fit
    assert fit.lam == pytest.approx(1.0 / 6.0, abs=1e-9)
    assert fit.residual == pytest.approx(0.9428090415820634, abs=1e-9)


def test_derivation_dimensions():
    expected = {"P1XP1": 0, "P3": 0, "QUINTIC": 0, "BLP2": 0, "LOR3": 1, "CY3GEN": 0}
    for name, dim in expected.items():
        assert len(algebra_at(default_point(name)).derivations()) == dim


def test_derivation_lor3_generator_is_primitive_rotation():
    P = default_point("LOR3")
    (d,) = algebra_at(P).derivations()
    # rotation of span(e2, e3): the only nonzero entries are the 2-3 block
    assert abs(d[1, 2]) == pytest.approx(abs(d[2, 1]), abs=1e-10)
    assert abs(d[1, 2]) == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-10)
    mask = np.ones((3, 3), dtype=bool)
    mask[1, 2] = mask[2, 1] = False
    assert np.abs(d[mask]).max() <= 1e-10
    # derivation equation residual on all basis pairs
    eye = np.eye(3)
    alg = algebra_at(P)
    for i in range(3):
        for j in range(3):
            lhs = d @ alg.product(eye[i], eye[j])
            rhs = alg.product(d @ eye[i], eye[j]) + alg.product(eye[i], d @ eye[j])
            assert np.abs(lhs - rhs).max() <= 1e-10


def test_derivation_conclusions_hold():
    P = default_point("LOR3")
    for d in algebra_at(P).derivations():
        assert P.norm(d @ P.omega) <= 1e-8
        assert max(abs(P.lambda_scalar([d[:, i]])) for i in range(3)) <= 1e-8
        assert np.linalg.norm(P.gram_inv @ d.T @ P.gram + d) <= 1e-8
