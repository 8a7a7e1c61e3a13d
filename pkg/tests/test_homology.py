import numpy as np
import pytest

from simplicial_qsvt.complexes import Graph, build_clique_complex
from simplicial_qsvt.homology import (
    CURL,
    GRADIENT,
    HARMONIC,
    betti_numbers,
    boundary_matrix,
    classify_vector,
    hodge_laplacian,
    hodge_project_oracle,
    hodge_projectors,
    lower_pseudoinverse,
    smallest_singular_value,
    spectral_decompose,
)

C4_HARMONIC = np.array([1.0, 1.0, 1.0, -1.0])  # edges (1,2),(2,3),(3,4),(1,4)


def c4_edge_order_vector(K):
    # the complex lists (1,4) before (2,3); map the hand-written vector onto it
    by_edge = dict(zip([(1, 2), (2, 3), (3, 4), (1, 4)], C4_HARMONIC))
    return np.array([by_edge[e] for e in K.simplices(1)])


def test_triangle_edge_boundary(k3):
    b = boundary_matrix(k3, 1).dense()
    np.testing.assert_array_equal(b, [[-1, -1, 0], [1, 0, -1], [0, 1, 1]])


def test_triangle_face_boundary(k3):
    np.testing.assert_array_equal(boundary_matrix(k3, 2).dense()[:, 0], [1, -1, 1])


def test_boundary_of_boundary(corpus):
    for K in corpus:
        for k in range(1, K.k_max):
            prod = boundary_matrix(K, k).sparse() @ boundary_matrix(K, k + 1).sparse()
            assert prod.count_nonzero() == 0


def test_column_support(corpus):
    for K in corpus[:10]:
        for k in range(1, K.k_max + 1):
            b = boundary_matrix(K, k).dense()
            assert np.all(np.count_nonzero(b, axis=0) == k + 1)


def test_triangle_laplacian(k3):
    lap = hodge_laplacian(k3, 1)
    np.testing.assert_array_equal(lap.lower, [[2, 1, -1], [1, 2, 1], [-1, 1, 2]])
    np.testing.assert_array_equal(lap.upper, [[1, -1, 1], [-1, 1, -1], [1, -1, 1]])
    np.testing.assert_array_equal(lap.full, 3 * np.eye(3))


def test_square_laplacian_has_no_upper(c4):
    lap = hodge_laplacian(c4, 1)
    assert not lap.upper.any()
    np.testing.assert_array_equal(lap.full, lap.lower)


def test_laplacian_needs_enumerated_dimension():
    K = build_clique_complex(Graph.from_edges(4, [(1, 2), (2, 3), (1, 3), (3, 4)]), k_max=1)
    with pytest.raises(ValueError):
        hodge_laplacian(K, 1)


def test_eigenvalues_bounded_by_vertex_count(corpus):
    for K in corpus:
        for k in range(K.k_max):
            lap = hodge_laplacian(K, k)
            if lap.size:
                assert np.linalg.eigvalsh(lap.full).max() <= K.n + 1e-9


def test_triangle_spectral_counts(k3):
    sd = spectral_decompose(hodge_laplacian(k3, 1))
    assert (sd.count(HARMONIC), sd.count(GRADIENT), sd.count(CURL)) == (0, 2, 1)
    np.testing.assert_allclose(sd.eigenvalues, 3.0)


def test_square_harmonic_vector(c4):
    sd = spectral_decompose(hodge_laplacian(c4, 1))
    assert sd.count(HARMONIC) == 1
    _, vh = sd.select(HARMONIC)
    want = c4_edge_order_vector(c4)
    assert abs(abs(vh[:, 0] @ want) / np.linalg.norm(want) - 1.0) < 1e-12


def test_isolated_points_all_harmonic():
    K = build_clique_complex(Graph.from_edges(3, []))
    sd = spectral_decompose(hodge_laplacian(K, 0))
    assert sd.labels == (HARMONIC,) * 3


def test_labels_agree_with_projection_route(corpus):
    for K in corpus[:15]:
        for k in range(K.k_max):
            sd = spectral_decompose(hodge_laplacian(K, k))
            b_k = boundary_matrix(K, k).dense().astype(float) if k >= 1 else None
            b_k1 = boundary_matrix(K, k + 1).dense().astype(float) if k + 1 <= K.k_max else None
            for j, lab in enumerate(sd.labels):
                assert classify_vector(sd.eigenvectors[:, j], b_k, b_k1) == lab


def test_square_harmonic_projections(c4):
    s = c4_edge_order_vector(c4)
    np.testing.assert_allclose(hodge_project_oracle(s, c4, 1, "G"), 0, atol=1e-12)
    np.testing.assert_allclose(hodge_project_oracle(s, c4, 1, "C"), 0, atol=1e-12)
    np.testing.assert_allclose(hodge_project_oracle(s, c4, 1, "H"), s, atol=1e-12)


def test_triangle_gradient_plus_curl_is_identity(k3):
    p = hodge_projectors(k3, 1)
    np.testing.assert_allclose(p["G"] + p["C"], np.eye(3), atol=1e-12)


def test_decomposition_orthogonal_and_complete(corpus):
    rng = np.random.default_rng(11)
    for K in corpus:
        for k in range(K.k_max):
            if not K.count(k):
                continue
            s = rng.standard_normal(K.count(k))
            parts = [hodge_project_oracle(s, K, k, c) for c in "HGC"]
            assert np.linalg.norm(sum(parts) - s) <= 1e-10
            for i in range(3):
                for j in range(i + 1, 3):
                    assert abs(parts[i] @ parts[j]) <= 1e-10


def test_betti_numbers(k3, c4):
    assert betti_numbers(c4)[:2] == [1, 1]
    assert betti_numbers(k3)[:2] == [1, 0]
    assert betti_numbers(build_clique_complex(Graph.from_edges(4, [])))[0] == 4


def test_lower_pseudoinverse_inverts_gradient(k3):
    y = np.array([0.3, -1.0, 0.7])
    y -= y.mean()  # orthogonal to the kernel of B_1^T
    b = boundary_matrix(k3, 1).dense().astype(float)
    np.testing.assert_allclose(lower_pseudoinverse(k3, 1) @ (b.T @ y), y, atol=1e-12)


def test_smallest_singular_value(k3, c4):
    assert smallest_singular_value(k3, 1) == pytest.approx(np.sqrt(3))
    assert smallest_singular_value(c4, 2) == 0.0
