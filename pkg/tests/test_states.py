import json

import numpy as np
import pytest

from weylgme.errors import InvalidDimensionError, InvalidStateError, UnsupportedError
from weylgme.partitions import Bipartition
from weylgme.states import (
    DensityMatrix,
    from_json,
    ghz_state,
    is_permutation_invariant,
    load_density,
    maximally_mixed,
    partial_trace,
    product_state,
    pure_state,
    random_density,
    save_density,
    to_json,
    validate,
    w_state,
    white_noise_mix,
)


def bell():
    return ghz_state(2, 2)


def test_w_state_entries():
    rho = w_state().matrix
    for k in (0b001, 0b010, 0b100):
        assert rho[k, k] == pytest.approx(1 / 3)
    assert rho[0b001, 0b010] == pytest.approx(1 / 3)
    assert w_state().purity() == pytest.approx(1.0)
    assert np.linalg.matrix_rank(rho) == 1


def test_ghz4_nonzero_pattern():
    rho = ghz_state(4, 2).matrix
    nz = np.argwhere(np.abs(rho) > 0)
    assert sorted(map(tuple, nz)) == [(0, 0), (0, 15), (15, 0), (15, 15)]
    np.testing.assert_allclose(rho[[0, 0, 15, 15], [0, 15, 0, 15]], 0.5)


def test_ghz_bell_and_qutrits():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(bell().matrix, np.outer(psi, psi), atol=1e-15)
    rho = ghz_state(3, 3).matrix
    diag = np.real(np.diag(rho))
    expected = np.zeros(27)
    expected[[0, 13, 26]] = 1 / 3
    np.testing.assert_allclose(diag, expected, atol=1e-15)


@pytest.mark.parametrize("n, d", [(1, 2), (3, 1)])
def test_ghz_rejects_bad_size(n, d):
    with pytest.raises(InvalidDimensionError):
        ghz_state(n, d)


def test_white_noise_endpoints_and_midpoint():
    w = w_state()
    np.testing.assert_allclose(white_noise_mix(w, 0).matrix, np.eye(8) / 8)
    np.testing.assert_array_equal(white_noise_mix(w, 1).matrix, w.matrix)
    assert white_noise_mix(w, 0.5).matrix[1, 1] == pytest.approx(1 / 16 + 1 / 6, abs=1e-15)


@pytest.mark.parametrize("x", [-0.1, 1.5])
def test_white_noise_rejects_out_of_range(x):
    with pytest.raises(ValueError):
        white_noise_mix(w_state(), x)


@pytest.mark.parametrize("x", np.linspace(0, 1, 11))
def test_white_noise_is_affine(x):
    for pure in (w_state(), ghz_state(4, 2), random_density((2, 3, 2), 2, 3)):
        mixed = white_noise_mix(pure, x).matrix
        affine = x * white_noise_mix(pure, 1).matrix + (1 - x) * white_noise_mix(pure, 0).matrix
        np.testing.assert_array_equal(mixed, affine)


def test_product_of_maximally_mixed():
    bp = Bipartition((1,), (2, 3))
    rho = product_state(maximally_mixed((2,)), maximally_mixed((2, 2)), bp)
    np.testing.assert_allclose(rho.matrix, np.eye(8) / 8)


def test_product_of_bells_on_14_23():
    bp = Bipartition((1, 4), (2, 3))
    rho = product_state(bell(), bell(), bp)
    assert np.linalg.matrix_rank(rho.matrix) == 1
    np.testing.assert_allclose(partial_trace(rho, [1, 4]).matrix, bell().matrix, atol=1e-15)
    np.testing.assert_allclose(partial_trace(rho, [2, 3]).matrix, bell().matrix, atol=1e-15)
    # not simply kron(bell, bell) in 1234 order
    assert not np.allclose(rho.matrix, np.kron(bell().matrix, bell().matrix))


@pytest.mark.parametrize(
    "dims, left",
    [((2, 2, 2), (2,)), ((2, 3, 2), (3,)), ((2, 2, 2, 3), (1, 4)), ((3, 2, 2, 2), (2, 4))],
)
def test_product_state_partial_traces(dims, left):
    bp = Bipartition.from_left(left, len(dims))
    a = random_density([dims[p - 1] for p in bp.left], 2, 11)
    b = random_density([dims[p - 1] for p in bp.right], 3, 12)
    rho = product_state(a, b, bp)
    assert rho.dims == dims
    assert validate(rho) == []
    # partial_trace returns ascending party order, as do the sorted bipartition sides
    np.testing.assert_allclose(partial_trace(rho, bp.left).matrix, a.matrix, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, bp.right).matrix, b.matrix, atol=1e-12)


def test_product_state_dimension_mismatch():
    with pytest.raises(InvalidDimensionError):
        product_state(bell(), bell(), Bipartition((1,), (2, 3)))


def test_partial_trace_against_explicit_sum():
    rho = random_density((2, 3), 6, 5)
    t = rho.matrix.reshape(2, 3, 2, 3)
    np.testing.assert_allclose(partial_trace(rho, [1]).matrix, np.einsum("ajbj->ab", t), atol=1e-15)
    np.testing.assert_allclose(partial_trace(rho, [2]).matrix, np.einsum("jajb->ab", t), atol=1e-15)


def test_random_density_rank_one_is_pure():
    assert random_density((2, 3), 1, 0).purity() == pytest.approx(1, abs=1e-10)


def test_random_density_is_deterministic():
    a = random_density((2, 2, 2), 8, 42)
    b = random_density((2, 2, 2), 8, 42)
    np.testing.assert_array_equal(a.matrix, b.matrix)
    assert not np.allclose(a.matrix, random_density((2, 2, 2), 8, 43).matrix)


@pytest.mark.parametrize("rank", [0, 9])
def test_random_density_rejects_rank(rank):
    with pytest.raises(InvalidDimensionError):
        random_density((2, 2, 2), rank, 0)


@pytest.mark.parametrize("seed", range(10))
def test_constructors_validate(seed):
    dims = [(2,), (2, 3), (2, 2, 2), (3, 3), (2, 2, 2, 3)][seed % 5]
    rank = 1 + seed % 4
    for rho in (random_density(dims, rank, seed), w_state(), ghz_state(3, 3)):
        assert validate(rho) == []
        eig = np.linalg.eigvalsh(rho.matrix)
        assert eig.min() > -1e-10


def test_validate_maximally_mixed():
    assert validate(maximally_mixed((2, 2))) == []


def test_validate_diag_2_minus_1():
    # trace of diag(2, -1) is 1, so only positivity fails
    v = validate(DensityMatrix((2,), np.diag([2.0, -1.0])))
    assert len(v) == 1 and "positive semidefinite" in v[0]


def test_validate_reports_trace_and_psd():
    v = validate(DensityMatrix((2,), np.diag([3.0, -1.0])))
    assert any("trace" in s for s in v) and any("positive semidefinite" in s for s in v)


def test_validate_reports_non_hermitian():
    v = validate(DensityMatrix((2,), [[0.5, 0.1], [0.0, 0.5]]))
    assert any("Hermitian" in s for s in v)


def test_density_matrix_shape_mismatch():
    with pytest.raises(InvalidDimensionError):
        DensityMatrix((2, 2), np.eye(3))


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0])
def test_noisy_families_are_permutation_invariant(x):
    assert is_permutation_invariant(white_noise_mix(ghz_state(4, 2), x))
    assert is_permutation_invariant(white_noise_mix(w_state(), x))


def test_permutation_invariance_negative():
    ket01 = np.zeros(4)
    ket01[1] = 1
    assert not is_permutation_invariant(pure_state(ket01, (2, 2)))
    # swapping parties 2 and 3 of |010> is not the identity
    assert not is_permutation_invariant(pure_state(np.eye(8)[0b010], (2, 2, 2)))


def test_permutation_invariance_needs_equal_dims():
    with pytest.raises(UnsupportedError):
        is_permutation_invariant(maximally_mixed((2, 3)))


def test_json_roundtrip(tmp_path):
    rho = random_density((2, 3), 3, 9)
    path = tmp_path / "rho.json"
    save_density(rho, path)
    doc = json.loads(path.read_text())
    assert doc["dims"] == [2, 3]
    assert len(doc["matrix"]) == 6 and len(doc["matrix"][0][0]) == 2
    np.testing.assert_array_equal(load_density(path).matrix, rho.matrix)
    assert to_json(load_density(path)) == doc


def test_json_rejects_invalid_state():
    doc = to_json(DensityMatrix((2,), np.diag([0.7, 0.4])))
    with pytest.raises(InvalidStateError, match="trace"):
        from_json(doc)


@pytest.mark.parametrize(
    "doc",
    [{"dims": [2]}, {"dims": [2], "matrix": [[1, 0], [0, 0]]}, {"dims": [2, 2], "matrix": [[[1, 0]]]}],
)
def test_json_rejects_malformed(doc):
    with pytest.raises(InvalidStateError):
        from_json(doc)
