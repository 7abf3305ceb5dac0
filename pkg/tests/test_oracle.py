import numpy as np
import pytest

from tensorcrit import (
    DegenerateTensorError,
    DenseTensor,
    SolverConfig,
    circle_critical_points,
    euler_parity_check,
    evaluate,
    jacobi_eigen,
    random_tensor,
    sphere_grid_search,
    svd_small,
    sym_gradient,
    symmetric_eigenpairs,
)
from tensorcrit.morse import IndexHistogram
from tensorcrit.oracle import _grid_restriction


def test_jacobi_diagonal():
    w, V = jacobi_eigen(np.diag([1.0, 2.0]))
    np.testing.assert_allclose(w, [1.0, 2.0])
    np.testing.assert_allclose(np.abs(V), np.eye(2), atol=1e-15)


def test_jacobi_off_diagonal():
    w, V = jacobi_eigen([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(np.abs(V[:, 0]), [2 ** -0.5] * 2, atol=1e-12)
    np.testing.assert_allclose(np.abs(V[:, 1]), [2 ** -0.5] * 2, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_jacobi_reconstruction(seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((4, 4))
    A = (A + A.T) / 2
    w, V = jacobi_eigen(A)
    scale = np.linalg.norm(A)
    assert np.abs(A - V @ np.diag(w) @ V.T).max() <= 1e-10 * scale
    assert np.abs(A @ V - V * w).max() <= 1e-10 * scale
    assert np.abs(V.T @ V - np.eye(4)).max() <= 1e-12


def test_jacobi_conjugation_invariant():
    rng = np.random.default_rng(7)
    A = rng.standard_normal((5, 5))
    A = (A + A.T) / 2
    Q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    w1, _ = jacobi_eigen(A)
    w2, _ = jacobi_eigen(Q @ A @ Q.T)
    np.testing.assert_allclose(np.sort(w1), np.sort(w2), atol=1e-9)


def test_jacobi_rejects_asymmetric():
    with pytest.raises(ValueError):
        jacobi_eigen([[0.0, 1.0], [0.0, 0.0]])


def test_jacobi_rejects_large():
    with pytest.raises(ValueError):
        jacobi_eigen(np.eye(33))


def test_svd_diagonal():
    s, U, V = svd_small(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(s, [3.0, 1.0])


def test_svd_rank_one():
    s, U, V = svd_small(np.ones((2, 2)))
    np.testing.assert_allclose(s, [2.0, 0.0], atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_svd_reconstruction(seed):
    rng = np.random.default_rng(100 + seed)
    A = rng.standard_normal((3, 4))
    s, U, V = svd_small(A)
    scale = np.linalg.norm(A)
    assert np.abs(A - U @ np.diag(s) @ V.T).max() <= 1e-9 * scale
    G = A.T @ A
    w, _ = jacobi_eigen((G + G.T) / 2)
    np.testing.assert_allclose(
        s, np.sqrt(np.maximum(np.sort(w)[::-1][:3], 0)), atol=1e-9
    )


def test_circle_cubic_complete_set(cubic):
    cs = circle_critical_points(cubic)
    assert cs.complete
    assert len(cs.points) == 6
    got = sorted((round(p.value, 9), p.index) for p in cs.points)
    r = round(2 ** -0.5, 9)
    assert got == [(-1.0, 0), (-1.0, 0), (-r, 1), (r, 0), (1.0, 1), (1.0, 1)]
    thetas = sorted(
        float(np.arctan2(p.vector[1], p.vector[0])) % (2 * np.pi) for p in cs.points
    )
    want = [0, np.pi / 4, np.pi / 2, np.pi, 5 * np.pi / 4, 3 * np.pi / 2]
    np.testing.assert_allclose(thetas, want, atol=1e-9)


def test_circle_quadratic():
    cs = circle_critical_points(DenseTensor(np.diag([1.0, 2.0])))
    got = sorted((round(p.value, 9), p.index) for p in cs.points)
    assert got == [(1.0, 0), (1.0, 0), (2.0, 1), (2.0, 1)]


def test_circle_identity_degenerate():
    with pytest.raises(DegenerateTensorError):
        circle_critical_points(DenseTensor(np.eye(2)))


@pytest.mark.parametrize("seed,k", [(s, k) for s in range(6) for k in (3, 4, 5)])
def test_circle_even_cardinality_and_parity(seed, k):
    T = random_tensor((2,) * k, 500 + seed, symmetric=True)
    cs = circle_critical_points(T)
    assert len(cs.points) % 2 == 0
    counts = {}
    for p in cs.points:
        counts[p.index] = counts.get(p.index, 0) + 1
    ok, s = euler_parity_check(IndexHistogram(n=2, counts=counts))
    assert ok and s == 0


def test_circle_grid_evaluator_matches_primitives(cubic):
    thetas = np.array([0.3, 1.1, 2.9, 4.4])
    values, dg = _grid_restriction(cubic.data, thetas)
    for i, th in enumerate(thetas):
        v = np.array([np.cos(th), np.sin(th)])
        assert values[i] == pytest.approx(evaluate(cubic, [v] * 3), abs=1e-14)
        tangent = np.array([-v[1], v[0]])
        hand = 3 * float(sym_gradient(cubic, v) @ tangent)
        assert dg[i] == pytest.approx(hand, abs=1e-13)


def test_grid_search_diagonal_matrix():
    cs = sphere_grid_search(DenseTensor(np.diag([1.0, 2.0, 3.0])))
    assert not cs.complete
    assert len(cs.points) == 6
    by_value = {}
    for p in cs.points:
        by_value.setdefault(round(p.value, 6), []).append(p)
    assert sorted(by_value) == [1.0, 2.0, 3.0]
    assert all(p.index == 0 for p in by_value[1.0])
    assert all(p.index == 1 for p in by_value[2.0])
    assert all(p.index == 2 for p in by_value[3.0])


def test_grid_search_zero_tensor_degenerate():
    with pytest.raises(DegenerateTensorError):
        sphere_grid_search(DenseTensor(np.zeros((3, 3, 3))))


def test_grid_search_covers_solver_points():
    hits = 0
    total = 50
    for i in range(total):
        T = random_tensor((3, 3, 3), 600 + i, symmetric=True)
        try:
            pairs = symmetric_eigenpairs(T, SolverConfig(restarts=32, seed=i))
            cs = sphere_grid_search(T, resolution=0.15)
        except DegenerateTensorError:
            hits += 1  # both sides agree the instance is pathological
            continue
        if all(
            any(np.linalg.norm(p.vector - q.vector) <= 1e-6 for q in cs.points)
            for p in pairs
        ):
            hits += 1
    assert hits >= int(0.95 * total)
