import numpy as np
import pytest
from hypothesis import given, strategies as st

from rmpkit.errors import ClusterFailure, NonRegularWavevector, SingularGram
from rmpkit.operator_spaces import (ALL_SPACES, EXPECTED_MULTIPLICITY, SubspaceId, assemble_m16,
                                    assemble_m16_trivial, basis, bilinear, cluster_basis,
                                    cluster_gram, cyclic_sum, eigen_residual, eigendecompose,
                                    expand, full_basis, gram_orthogonality, label_eigenvalues,
                                    max_cross_cluster, p_columns, p_contraction, project,
                                    q_cyclic_combination, q_operator, r_cyclic_combination,
                                    r_operator, space_of_label)
from rmpkit.tensor_core import dot, is_antisymmetric, is_symmetric, random_regular_wavevector

from strategies import complex_vectors, regular_wavevectors

N1234 = np.array([1, 2, 3, 4], dtype=complex)


def test_subspace_table():
    assert sum(s.dimension for s in ALL_SPACES) == 16
    assert [s.eigenvalue for s in ALL_SPACES] == [2, 1, 1, 0, 0]
    assert [list(s.labels) for s in ALL_SPACES] == [
        [1], [2, 3, 4], [5, 6, 7], [8, 9, 10], list(range(11, 17))]
    assert space_of_label(9) is SubspaceId.C_sk3
    with pytest.raises(ValueError):
        space_of_label(17)
    assert list(label_eigenvalues()) == [2, 1, 1, 1, 1, 1, 1] + [0] * 9


def test_p_columns_example_and_null_contraction():
    P = p_columns(N1234)
    assert P[0].reshape(4, 4)[0, 1] == pytest.approx(-2j)
    assert np.all(p_contraction(N1234) == 0)
    for r in range(4):
        assert is_antisymmetric(P[r])
        assert np.all(np.diag(P[r].reshape(4, 4)) == 0)


def test_b_sy1_is_minus_outer_product():
    assert np.array_equal(basis(SubspaceId.B_sy1, 1, N1234), -np.outer(N1234, N1234).reshape(16))


@given(regular_wavevectors())
def test_basis_symmetry_labels(n):
    for space in ALL_SPACES:
        for k in space.labels:
            U = basis(space, k, n)
            assert (is_symmetric(U) if space.symmetric else is_antisymmetric(U))
            assert np.linalg.norm(U) > 0


@given(regular_wavevectors(), st.floats(1.0, 3.0))
def test_basis_homogeneity(n, c):
    # scaling n by c >= 1 keeps it regular and scales each family by c^degree
    for space in ALL_SPACES:
        for k in space.labels:
            U1, U2 = basis(space, k, n), basis(space, k, c * n)
            assert np.allclose(U2, c ** space.degree * U1, rtol=1e-12, atol=1e-12 * np.abs(U2).max())


def test_c_sk3_needs_regular_wavevector():
    with pytest.raises(NonRegularWavevector):
        basis(SubspaceId.C_sk3, 8, [1, 0, 0, 0])
    with pytest.raises(ValueError):
        basis(SubspaceId.A_sk3, 8, N1234)
    with pytest.raises(ValueError):
        r_operator(N1234, 1, 1, 2)


def test_m16_symmetric_and_homogeneous(rng):
    for seed in range(50):
        n = np.asarray(random_regular_wavevector(seed, physical=seed % 2 == 0))
        K = assemble_m16(n)
        assert np.max(np.abs(K - K.T)) <= 1e-14 * np.abs(K).max()
        assert np.allclose(assemble_m16(2 * n), 4 * K)


def test_m16_rank_on_axis_vector():
    # oracle: singular values from an independent SVD
    K = assemble_m16([1, 0, 0, 0])
    s = np.linalg.svd(K, compute_uv=False)
    assert int(np.sum(s > 1e-12 * s[0])) == 7


def test_m16_matches_explicit_definition():
    n = np.array([0.3, -1.1, 2.0j, 0.7 + 0.2j])
    K = assemble_m16(n)
    for a in range(4):
        for b in range(4):
            for i in range(4):
                for j in range(4):
                    want = n[a] * n[i] * (b == j) + n[b] * n[j] * (a == i)
                    assert K[4 * a + b, 4 * i + j] == want


def test_trivial_m16_is_diagonal_in_symmetric_sector():
    n = N1234
    T = assemble_m16_trivial(n)
    assert np.allclose(T, T.T)
    # acts as -2 (n.n) on symmetric tensors and 0 on antisymmetric ones
    X = np.arange(16.0).reshape(4, 4)
    assert np.allclose(T @ (X + X.T).reshape(16), -2 * dot(n, n) * (X + X.T).reshape(16))
    assert np.allclose(T @ (X - X.T).reshape(16), 0)


def test_eigen_example():
    rep = eigendecompose(N1234)
    assert rep.multiplicities == EXPECTED_MULTIPLICITY
    assert rep.cluster_distance < 1e-8
    for space in ALL_SPACES:
        for k in space.labels:
            assert rep.basis_residuals[k] < 1e-12
    for c, V in rep.eigenvectors.items():
        assert V.shape[1] == EXPECTED_MULTIPLICITY[c]
        assert np.allclose(V.conj().T @ V, np.eye(V.shape[1]))
        assert rep.residuals[c] < 1e-10
    d = rep.as_dict()
    assert d["multiplicities"] == {"0": 9, "1": 6, "2": 1}


def test_eigen_substitution_examples():
    n = N1234
    U1 = basis(SubspaceId.B_sy1, 1, n)
    assert eigen_residual(n, U1, 2) < 1e-12
    for k in SubspaceId.A_sk3.labels:
        assert eigen_residual(n, basis(SubspaceId.A_sk3, k, n), 1) < 1e-12
    # the wrong eigenvalue is clearly rejected
    assert eigen_residual(n, U1, 1) > 0.1


def test_eigendecompose_rejects_non_regular():
    with pytest.raises(NonRegularWavevector):
        eigendecompose([1, 0, 0, 0])


def test_cluster_failure_on_tight_tolerance():
    with pytest.raises(ClusterFailure):
        eigendecompose(N1234, cluster_tol=0.0)


@given(regular_wavevectors())
def test_multiplicities_stable(n):
    assert eigendecompose(n).multiplicities == EXPECTED_MULTIPLICITY


def test_basis_is_complete_and_matches_eigenspaces():
    # independent oracle: rank via SVD, and each family lies in the
    # eigenspace returned by the eigensolver
    for seed in range(20):
        n = np.asarray(random_regular_wavevector(seed, physical=seed % 2 == 0))
        B = full_basis(n)
        s = np.linalg.svd(B, compute_uv=False)
        assert s[-1] / s[0] > 1e-8
        rep = eigendecompose(n)
        for space in ALL_SPACES:
            V = rep.eigenvectors[space.eigenvalue]
            C = cluster_basis(space, n)
            C = C / np.linalg.norm(C, axis=0)
            resid = C - V @ (V.conj().T @ C)
            assert np.linalg.norm(resid) < 1e-8


def test_orthogonality_examples():
    n = N1234
    G = gram_orthogonality(n)
    assert G[0, 0] == pytest.approx(1.0)
    assert np.all(G[0, 1:4] < 1e-12)
    lam = label_eigenvalues()
    a_idx = np.nonzero(lam == 1)[0]
    c_idx = np.nonzero(lam == 0)[0]
    assert np.max(G[np.ix_(a_idx, c_idx)]) < 1e-10
    assert max_cross_cluster(G) < 1e-10


def test_bilinear_is_unconjugated():
    U = np.array([1j, 0])
    assert bilinear(U, U) == -1


@given(regular_wavevectors())
def test_cross_cluster_orthogonality_property(n):
    assert max_cross_cluster(gram_orthogonality(n)) < 1e-10
    for space in ALL_SPACES:
        assert np.linalg.cond(cluster_gram(space, n)) < 1e6


def test_projection_examples(rng):
    n = N1234
    U2 = basis(SubspaceId.A_sk3, 2, n)
    assert np.allclose(project(SubspaceId.A_sk3, U2, n), U2, atol=1e-12 * np.linalg.norm(U2))
    U1 = basis(SubspaceId.B_sy1, 1, n)
    assert np.linalg.norm(project(SubspaceId.A_sk3, U1, n)) < 1e-12 * np.linalg.norm(U1)
    H = rng.normal(size=16) + 1j * rng.normal(size=16)
    total = sum(project(s, H, n) for s in ALL_SPACES)
    assert np.allclose(total, H, atol=1e-11 * np.linalg.norm(H))
    # idempotent
    P = project(SubspaceId.C_sy6, H, n)
    assert np.allclose(project(SubspaceId.C_sy6, P, n), P, atol=1e-11 * np.linalg.norm(P))


def test_projection_singular_gram():
    with pytest.raises(SingularGram):
        project(SubspaceId.C_sy6, np.ones(16), N1234, max_condition=1.0)


def test_expand_recovers_coefficients(rng):
    n = N1234
    c = rng.normal(size=16) + 1j * rng.normal(size=16)
    H = expand(n, c)
    c_back = np.linalg.solve(full_basis(n), H)
    assert np.allclose(c_back, c)


@given(regular_wavevectors())
def test_r_cyclic_identity(n):
    col = r_cyclic_combination(n)
    scale = np.linalg.norm(n) ** 3
    assert np.linalg.norm(col) <= 1e-12 * scale


def test_r_contraction_reproduces_cyclic_sum(rng):
    # R^{rst} contracted with a field F = sum_k P^k phi_k equals the direct cyclic sum
    for seed in range(20):
        n = np.asarray(random_regular_wavevector(seed, physical=seed % 2 == 0))
        phi = rng.normal(size=4) + 1j * rng.normal(size=4)
        F = p_columns(n).T @ phi
        for r, s, t in [(2, 3, 4), (1, 3, 4), (1, 2, 4), (1, 2, 3)]:
            direct = cyclic_sum(F, n, r, s, t)
            via_r = r_operator(n, r, s, t, half=False) @ F
            assert via_r == pytest.approx(direct, abs=1e-12 * np.linalg.norm(F) * np.linalg.norm(n))
            # for a genuine field both vanish
            assert abs(direct) < 1e-12 * np.linalg.norm(F) * np.linalg.norm(n)


def test_r_operator_permutation_sign():
    n = N1234
    assert np.allclose(r_operator(n, 1, 2, 3), -r_operator(n, 2, 1, 3))
    assert np.allclose(r_operator(n, 1, 2, 3), r_operator(n, 2, 3, 1))


@given(regular_wavevectors())
def test_q_cyclic_identity(n):
    for r, s, t in [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]:
        col = q_cyclic_combination(n, r, s, t)
        assert np.linalg.norm(col) <= 1e-12 * np.linalg.norm(n) ** 3


def test_q_operator_is_symmetric_and_in_a_sy3():
    n = N1234
    for r, s in [(1, 2), (2, 3), (1, 4)]:
        Q = q_operator(n, r, s)
        assert is_symmetric(Q)
        assert eigen_residual(n, Q, 1) < 1e-12


@given(complex_vectors(16), regular_wavevectors())
def test_projections_sum_to_identity(H, n):
    total = sum(project(s, H, n) for s in ALL_SPACES)
    assert np.allclose(total, H, atol=1e-9 * max(np.linalg.norm(H), 1e-300))
